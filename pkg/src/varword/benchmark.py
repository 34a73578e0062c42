"""Timing comparison of the compiled kernels against the fallback path.

Run as ``python -m varword.benchmark``.  Both paths execute the same
loop bodies; the fallback interprets them (plus the vectorized numpy
variants for the coded-graph scans), so agreement of the outputs is
asserted while timing.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from . import _kernels
from .sweeps import build_prefix_table, henson_adjacency, line_letter_certs


def _time(fn, *args, repeat: int = 1):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="python -m varword.benchmark")
    ap.add_argument("--assoc-len", type=int, default=4)
    ap.add_argument("--tree-len", type=int, default=7)
    ap.add_argument("--henson-horizon", type=int, default=9)
    ap.add_argument("--sweep-horizon", type=int, default=3)
    args = ap.parse_args(argv)

    if _kernels.USE_NUMBA:
        print("numba path active (set VARWORD_NO_NUMBA=1 for the fallback only)")
    else:
        print("fallback path only (numba unavailable or disabled)")
    rows = []

    t = build_prefix_table(2, args.assoc_len)
    m = len(t)
    if _kernels.USE_NUMBA:
        _kernels.assoc_sweep(t.syms, t.lens, t.focc, 2, 0, 1, args.assoc_len)  # compile
        tc, rc = _time(_kernels.assoc_sweep, t.syms, t.lens, t.focc, 2, 0, m, args.assoc_len)
    else:
        tc, rc = None, None
    tp, rp = _time(_kernels.assoc_sweep_py, t.syms, t.lens, t.focc, 2, 0, m, args.assoc_len)
    if rc is not None:
        assert rc == rp
    rows.append((f"associativity sweep (len<={args.assoc_len}, {m} words)", tc, tp))

    if _kernels.USE_NUMBA:
        _kernels.tree_roundtrip_sweep(2, args.tree_len, 0, 1)
        tc, rc = _time(_kernels.tree_roundtrip_sweep, 2, args.tree_len, 0, args.tree_len)
    else:
        tc, rc = None, None
    tp, rp = _time(_kernels.tree_roundtrip_sweep_py, 2, args.tree_len, 0, args.tree_len)
    if rc is not None:
        assert rc == rp
    rows.append((f"tree roundtrip sweep (len<={args.tree_len})", tc, tp))

    certs, _meta = line_letter_certs(2, args.sweep_horizon)
    from .largeness import FiniteFamily

    n_bits = FiniteFamily.empty(2, args.sweep_horizon).universe_size
    total = 1 << n_bits
    out_a = np.zeros(total, np.uint8)
    out_b = np.zeros(total, np.uint8)
    if _kernels.USE_NUMBA:
        _kernels.line_letter_coloring_sweep(certs, n_bits, 0, 1, out_a[:1])
        tc, _ = _time(_kernels.line_letter_coloring_sweep, certs, n_bits, 0, total, out_a)
    else:
        tc = None
    tp, _ = _time(_kernels.line_letter_coloring_sweep_py, certs, n_bits, 0, total, out_b)
    if tc is not None:
        assert (out_a == out_b).all()
    rows.append((f"coloring sweep (2^{n_bits} colorings)", tc, tp))

    verts, adj = henson_adjacency(args.henson_horizon)
    bits = np.zeros(len(verts), np.int64)
    lens = np.zeros(len(verts), np.int64)
    for i, v in enumerate(verts):
        lens[i] = len(v)
        bits[i] = sum(1 << p for p, s in enumerate(v.symbols) if s == 1)
    if _kernels.USE_NUMBA:
        small = np.zeros((1, 1), np.uint8)
        _kernels.henson_adjacency_loops(bits[:1], lens[:1], small)
        out_l = np.zeros((len(verts), len(verts)), np.uint8)
        tc, _ = _time(_kernels.henson_adjacency_loops, bits, lens, out_l)
        assert (out_l == _kernels.henson_adjacency_numpy(bits, lens)).all()
    else:
        tc = None
    tp, _ = _time(_kernels.henson_adjacency_numpy, bits, lens)
    rows.append((f"graph adjacency ({len(verts)} vertices)", tc, tp))

    ei, ej = np.nonzero(np.triu(adj))
    if _kernels.USE_NUMBA:
        packed = _kernels.pack_rows(adj)
        _kernels.henson_triangle_scan(packed, ei[:1].astype(np.int64), ej[:1].astype(np.int64))
        tc, rc = _time(
            _kernels.henson_triangle_scan, packed, ei.astype(np.int64), ej.astype(np.int64)
        )
    else:
        tc, rc = None, None
    tp, rp = _time(_kernels.henson_triangle_numpy, adj)
    if rc is not None:
        assert rc[0] == rp[0] == -1
    rows.append((f"triangle scan ({len(ei)} edges)", tc, tp))

    name_w = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{name_w}}  {'numba':>10}  {'fallback':>10}  {'speedup':>8}")
    for name, tc, tp in rows:
        if tc is None:
            print(f"{name:<{name_w}}  {'-':>10}  {tp:>9.3f}s  {'-':>8}")
        else:
            print(f"{name:<{name_w}}  {tc:>9.3f}s  {tp:>9.3f}s  {tp / tc:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
