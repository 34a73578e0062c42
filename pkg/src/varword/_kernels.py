"""Hot loops behind the exhaustive sweeps.

Every kernel exists twice: the same loop body compiled with numba
(default) and interpreted as plain Python/numpy (fallback).  Setting
``VARWORD_NO_NUMBA=1`` in the environment, or running without numba
installed, selects the fallback.  Results are bit-identical either
way; only the wall clock changes (see ``python -m varword.benchmark``).

Word encoding in here is flat arrays: symbols as small ints with
letters below k and x_j as k+j, one row per word, -1 padding, plus a
first-occurrence table per variable index.
"""

from __future__ import annotations

import os

import numpy as np

NO_NUMBA_ENV = os.environ.get("VARWORD_NO_NUMBA", "") not in ("", "0")

try:
    if NO_NUMBA_ENV:
        raise ImportError("numba disabled by VARWORD_NO_NUMBA")
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

    def _njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap


USE_NUMBA = HAVE_NUMBA and not NO_NUMBA_ENV


# ---------------------------------------------------------------------------
# substitution associativity sweep


def _assoc_sweep(syms, lens, focc, k, lo, hi, max_u_len):
    """Check w[v[u]] == compose(w, v)[u] for all pairs (w in [lo,hi), v) and letter u.

    Returns (both_defined_checks, failures, first_bad) where first_bad
    packs (i, j, m, uval) of the first discrepancy or -1s.
    """
    n_words = syms.shape[0]
    width = syms.shape[1]
    zbuf = np.empty(width, np.int64)
    vu = np.empty(width, np.int64)
    wvu = np.empty(width, np.int64)
    zu = np.empty(width, np.int64)
    udig = np.empty(width, np.int64)
    checked = 0
    failures = 0
    bad_i = bad_j = bad_m = bad_u = -1
    for i in range(lo, hi):
        lw = lens[i]
        for j in range(n_words):
            lv = lens[j]
            # compose w (row i) with v (row j) into zbuf
            zlen = 0
            for c in range(lw):
                s = syms[i, c]
                if s < k:
                    zbuf[zlen] = s
                    zlen += 1
                else:
                    b = s - k
                    if b >= lv:
                        break
                    zbuf[zlen] = syms[j, b]
                    zlen += 1
            for m in range(max_u_len + 1):
                pv = focc[j, m] if m < focc.shape[1] else -1
                if pv < 0:
                    break  # x_m absent from v: larger m absent too
                fw = focc[i, pv] if pv < focc.shape[1] else -1
                # first occurrence of x_m in the composition
                fz = -1
                for c in range(zlen):
                    if zbuf[c] == k + m:
                        fz = c
                        break
                if fw < 0:
                    if fz >= 0:
                        failures += 1
                        if bad_i < 0:
                            bad_i, bad_j, bad_m, bad_u = i, j, m, -1
                    continue
                if fz < 0:
                    failures += 1
                    if bad_i < 0:
                        bad_i, bad_j, bad_m, bad_u = i, j, m, -2
                    continue
                for uval in range(k**m):
                    r = uval
                    for b in range(m - 1, -1, -1):
                        udig[b] = r % k
                        r //= k
                    # v[u]
                    for c in range(pv):
                        s = syms[j, c]
                        vu[c] = s if s < k else udig[s - k]
                    # w[v[u]]
                    for c in range(fw):
                        s = syms[i, c]
                        wvu[c] = s if s < k else vu[s - k]
                    # compose(w, v)[u]
                    for c in range(fz):
                        s = zbuf[c]
                        zu[c] = s if s < k else udig[s - k]
                    checked += 1
                    if fw != fz:
                        failures += 1
                        if bad_i < 0:
                            bad_i, bad_j, bad_m, bad_u = i, j, m, uval
                        continue
                    for c in range(fw):
                        if wvu[c] != zu[c]:
                            failures += 1
                            if bad_i < 0:
                                bad_i, bad_j, bad_m, bad_u = i, j, m, uval
                            break
    return checked, failures, bad_i, bad_j, bad_m, bad_u


# ---------------------------------------------------------------------------
# ordered-generator tree roundtrip sweep (k >= 2)


def _tree_roundtrip_sweep(k, max_len, lo_len, hi_len):
    """Build and invert every ordered generator with length in [lo_len, hi_len].

    Enumerates generators through base-(k+2) codes (letters, repeat
    current variable, introduce next variable), instantiates every
    level, reconstructs the generator from the element set alone and
    compares.  Returns (generators, elements, mismatches, bad_code).
    """
    width = max_len
    gbuf = np.empty(width, np.int64)
    cuts = np.empty(width + 1, np.int64)
    g2 = np.empty(width, np.int64)
    max_elems = 1
    for _ in range(width + 1):
        max_elems *= k
    total_e = (max_elems * k - 1) // (k - 1)
    elems = np.empty((total_e, width), np.int64)
    elen = np.empty(total_e, np.int64)
    pos_of_val = np.empty(max_elems, np.int64)
    digits = np.empty(width, np.int64)
    code = np.empty(width, np.int64)
    n_gen = 0
    n_elems = 0
    mismatches = 0
    bad_code = -1
    for length in range(lo_len, hi_len + 1):
        for c in range(length):
            code[c] = 0
        while True:
            # decode: digit < k letter, k repeat, k+1 introduce
            nvars = 0
            valid = True
            for c in range(length):
                d = code[c]
                if d < k:
                    gbuf[c] = d
                elif d == k:
                    if nvars == 0:
                        valid = False
                        break
                    gbuf[c] = k + nvars - 1
                else:
                    gbuf[c] = k + nvars
                    nvars += 1
            if valid:
                n = nvars
                # cut positions: first occurrence of each variable, then end
                for j in range(n):
                    for c in range(length):
                        if gbuf[c] == k + j:
                            cuts[j] = c
                            break
                cuts[n] = length
                # elements, level by level, pattern value ascending
                row = 0
                for j in range(n + 1):
                    cnt = 1
                    for _ in range(j):
                        cnt *= k
                    for val in range(cnt):
                        r = val
                        for b in range(j - 1, -1, -1):
                            digits[b] = r % k
                            r //= k
                        cl = cuts[j]
                        for c in range(cl):
                            s = gbuf[c]
                            elems[row, c] = s if s < k else digits[s - k]
                        elen[row] = cl
                        row += 1
                n_gen += 1
                n_elems += row
                # ---- reconstruction from elements only ----
                top_cnt = 1
                for _ in range(n):
                    top_cnt *= k
                top0 = row - top_cnt
                ok = True
                for t in range(top_cnt):
                    val = 0
                    for i2 in range(n):
                        val = val * k + elems[top0 + t, cuts[i2]]
                    pos_of_val[val] = top0 + t
                for c in range(length):
                    jz = 0
                    for j in range(n):
                        if cuts[j] <= c:
                            jz = j + 1
                    # jz-1 is the zone variable when c is past cuts[jz-1]
                    iscut = False
                    for j in range(n):
                        if cuts[j] == c:
                            g2[c] = k + j
                            iscut = True
                            break
                    if iscut:
                        continue
                    v0 = elems[pos_of_val[0], c] if n > 0 else elems[top0, c]
                    same = True
                    for val in range(top_cnt):
                        if elems[pos_of_val[val], c] != v0:
                            same = False
                            break
                    if same:
                        g2[c] = v0
                        continue
                    found = False
                    for i2 in range(jz):
                        match = True
                        for val in range(top_cnt):
                            dig = val
                            for _ in range(n - 1 - i2):
                                dig //= k
                            dig %= k
                            if elems[pos_of_val[val], c] != dig:
                                match = False
                                break
                        if match:
                            g2[c] = k + i2
                            found = True
                            break
                    if not found:
                        ok = False
                        break
                if ok:
                    for c in range(length):
                        if g2[c] != gbuf[c]:
                            ok = False
                            break
                if not ok:
                    mismatches += 1
                    if bad_code < 0:
                        bc = 0
                        for c in range(length):
                            bc = bc * (k + 2) + code[c]
                        bad_code = bc
            # odometer
            pos = length - 1
            while pos >= 0 and code[pos] == k + 1:
                code[pos] = 0
                pos -= 1
            if pos < 0:
                break
            code[pos] += 1
    return n_gen, n_elems, mismatches, bad_code


# ---------------------------------------------------------------------------
# line-with-letter sweep over all 2-colorings (any k, horizon fixed by tables)


def _line_letter_coloring_sweep(cert_words, n_bits, lo, hi, out_found):
    """For each coloring bitmask in [lo, hi), mark whether some certificate
    triple (rank indices into the coloring) is monochromatic."""
    n_certs = cert_words.shape[0]
    width = cert_words.shape[1]
    for f in range(lo, hi):
        hit = 0
        for t in range(n_certs):
            c0 = (f >> cert_words[t, 0]) & 1
            ok = 1
            for q in range(1, width):
                if (f >> cert_words[t, q]) & 1 != c0:
                    ok = 0
                    break
            if ok == 1:
                hit = 1
                break
        out_found[f - lo] = hit
    return 0


# ---------------------------------------------------------------------------
# coded-graph kernels


def _henson_adjacency_loops(bits, lens, out):
    v = bits.shape[0]
    for i in range(v):
        for j in range(v):
            if lens[i] < lens[j]:
                if (bits[j] >> lens[i]) & 1 == 1 and (bits[i] & bits[j]) == 0:
                    out[i, j] = 1
                    out[j, i] = 1
    return 0


def _henson_triangle_scan(packed, ei, ej):
    """AND the packed neighbour rows of every edge; first common bit wins."""
    words = packed.shape[1]
    for e in range(ei.shape[0]):
        i = ei[e]
        j = ej[e]
        for w in range(words):
            both = packed[i, w] & packed[j, w]
            if both != 0:
                b = 0
                while (both >> np.uint64(b)) & np.uint64(1) == np.uint64(0):
                    b += 1
                return i, j, w * 64 + b
    return -1, -1, -1


# ---------------------------------------------------------------------------
# selection

if USE_NUMBA:
    assoc_sweep = _njit(cache=True, nogil=True)(_assoc_sweep)
    tree_roundtrip_sweep = _njit(cache=True, nogil=True)(_tree_roundtrip_sweep)
    line_letter_coloring_sweep = _njit(cache=True, nogil=True)(
        _line_letter_coloring_sweep
    )
    henson_adjacency_loops = _njit(cache=True, nogil=True)(_henson_adjacency_loops)
    henson_triangle_scan = _njit(cache=True, nogil=True)(_henson_triangle_scan)
else:
    assoc_sweep = _assoc_sweep
    tree_roundtrip_sweep = _tree_roundtrip_sweep
    line_letter_coloring_sweep = _line_letter_coloring_sweep
    henson_adjacency_loops = _henson_adjacency_loops
    henson_triangle_scan = _henson_triangle_scan

# pure-python references for cross-checking regardless of selection
assoc_sweep_py = _assoc_sweep
tree_roundtrip_sweep_py = _tree_roundtrip_sweep
line_letter_coloring_sweep_py = _line_letter_coloring_sweep
henson_adjacency_loops_py = _henson_adjacency_loops
henson_triangle_scan_py = _henson_triangle_scan


def henson_adjacency_numpy(bits: np.ndarray, lens: np.ndarray) -> np.ndarray:
    """Vectorized fallback for the adjacency matrix (identical output)."""
    lt = lens[:, None] < lens[None, :]
    passing = ((bits[None, :] >> lens[:, None]) & 1) == 1
    disjoint = (bits[:, None] & bits[None, :]) == 0
    m = lt & passing & disjoint
    return (m | m.T).astype(np.uint8)


def henson_triangle_numpy(adj: np.ndarray):
    """Matmul fallback: count common neighbours along every edge at once."""
    f = adj.astype(np.float32)
    common = f @ f
    bad = (common * adj) > 0
    if not bad.any():
        return -1, -1, -1
    i, j = np.argwhere(bad)[0]
    u = int(np.nonzero(adj[i] & adj[j])[0][0])
    return int(i), int(j), u


def pack_rows(adj: np.ndarray) -> np.ndarray:
    """Pack a 0/1 adjacency matrix into per-row uint64 bitsets."""
    v = adj.shape[0]
    words = (v + 63) // 64
    out = np.zeros((v, words), np.uint64)
    rows, cols = np.nonzero(adj)
    np.bitwise_or.at(
        out, (rows, cols // 64), np.uint64(1) << (cols % 64).astype(np.uint64)
    )
    return out
