"""Monochromatic substitution prefixes and prehomogeneity.

``csl_search`` looks for a prefix W of an infinite variable word such
that every in-horizon instantiation W[u] lands in one color class; the
certificate lists every checked pair.  For a coloring of (n+1)-variable
words, ``one_step_prehomog`` freezes the color of all extensions of a
given stem s: it colors the extension tails over the alphabet enlarged
by the stem's variables, runs the prefix search there, renames the
letter-variables back into variable slots and composes the result onto
W.  The output is below W in the pure-prefix order ``leq_m`` and is
re-verified against the original coloring on every in-horizon
extension before being returned.

All infinitary statements here are bounded searches with explicit
horizons; exhaustion raises NotFoundWithinHorizon.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Optional

from .colorings import Coloring
from .errors import CutPointMissing, InvalidWord, NotFoundWithinHorizon
from .search import sharded_first
from .words import (
    Word,
    compose,
    dimension,
    first_occurrence,
    format_word,
    is_prefix_valid,
    is_var_word,
    letter_words,
    prefix_valid_words,
    substitute,
    var_words,
)

__all__ = [
    "CslCertificate",
    "csl_search",
    "verify_csl",
    "PrehomogReport",
    "prehomog_check",
    "OneStepCertificate",
    "one_step_prehomog",
    "LeqResult",
    "leq_m_check",
]


@dataclass(frozen=True)
class CslCertificate:
    word: Word  # prefix-valid W
    color: int
    depth: int
    checked: tuple[tuple[Word, Word], ...]  # (u, W[u]) pairs


def _domain_patterns(k: int, dim: int, depth: int) -> list[Word]:
    if dim == 0:
        return list(letter_words(k, depth))
    return list(var_words(k, depth, dim=dim))


def csl_search(
    coloring: Coloring,
    depth: int,
    max_len: Optional[int] = None,
    workers: int = 1,
) -> CslCertificate:
    """Lex-least prefix W whose in-horizon instantiations are one color.

    W must contain x_0 .. x_depth so that W[u] is defined for every
    pattern u of length up to depth; all these instantiations must fall
    inside the coloring's domain and in a single color class.
    """
    k = coloring.k
    cap = coloring.N + 1 if max_len is None else max_len
    patterns = _domain_patterns(k, coloring.n, depth)
    if not patterns:
        raise InvalidWord(f"no dimension-{coloring.n} patterns up to depth {depth}")
    cands = [
        w
        for w in prefix_valid_words(k, cap, min_vars=depth + 1)
        if first_occurrence(w, depth) is not None
        and first_occurrence(w, depth) <= coloring.N
    ]

    def attempt(w):
        color = None
        checked = []
        for u in patterns:
            try:
                img = substitute(w, u, omega=True)
            except CutPointMissing:
                return None
            if img not in coloring:
                return None
            c = coloring(img)
            if color is None:
                color = c
            elif c != color:
                return None
            checked.append((u, img))
        cert = CslCertificate(w, color, depth, tuple(checked))
        verify_csl(cert, coloring)
        return cert

    hit = sharded_first(cands, attempt, workers)
    if hit is None:
        raise NotFoundWithinHorizon(
            f"no monochromatic prefix of length <= {cap} at depth {depth}"
        )
    return hit[1]


def verify_csl(cert: CslCertificate, coloring: Coloring) -> None:
    if not is_prefix_valid(cert.word):
        raise InvalidWord("certificate word is not prefix-valid")
    want = {u.symbols for u in _domain_patterns(coloring.k, coloring.n, cert.depth)}
    got = {u.symbols for u, _ in cert.checked}
    if want != got:
        raise InvalidWord("checked patterns do not cover the declared depth")
    for u, img in cert.checked:
        if substitute(cert.word, u, omega=True) != img:
            raise InvalidWord(f"stale pair at {format_word(u)}")
        if coloring(img) != cert.color:
            raise InvalidWord(f"{format_word(img)} not in color {cert.color}")


# ---------------------------------------------------------------------------
# prehomogeneity


def _stem_extensions(
    stem: Word, k: int, n: int, tail_max: int
) -> Iterator[Word]:
    """All t = stem . x_n . tail with tail over A | {x_0..x_n}, by (length, lex)."""
    base = stem.symbols + (k + n,)
    symbols = list(range(k)) + [k + j for j in range(n + 1)]
    for tail_len in range(tail_max + 1):
        for tail in product(symbols, repeat=tail_len):
            yield Word(k, base + tail)


@dataclass(frozen=True)
class PrehomogReport:
    ok: bool
    checked: int
    counterexample: Optional[tuple[Word, Word, Word]] = None  # (s, t0, t1)


def prehomog_check(
    w: Word,
    coloring: Coloring,
    stem_max: int,
    tail_max: int,
) -> PrehomogReport:
    """Does the color of W[t] for t ⊒ s.x_n depend only on the stem s?

    Scans stems s of dimension n = coloring.n - 1 up to length stem_max
    and all in-horizon extension pairs; returns the lex-least violating
    (s, t0, t1) if any.
    """
    if coloring.n < 1:
        raise InvalidWord("prehomogeneity needs a coloring of dimension >= 1")
    n = coloring.n - 1
    k = coloring.k
    checked = 0
    stems = _domain_patterns(k, n, stem_max)
    for s in stems:
        first_t = None
        first_color = None
        for t in _stem_extensions(s, k, n, tail_max):
            try:
                img = substitute(w, t, omega=True)
            except CutPointMissing:
                continue
            if img not in coloring:
                continue
            c = coloring(img)
            checked += 1
            if first_t is None:
                first_t, first_color = t, c
            elif c != first_color:
                return PrehomogReport(False, checked, (s, first_t, t))
    return PrehomogReport(True, checked)


@dataclass(frozen=True)
class OneStepCertificate:
    w_hat: Word
    color: int
    stem: Word
    z_word: Word  # the pure-prefix substitution with w_hat = compose(w, z_word)
    inner: CslCertificate
    checked: tuple[tuple[Word, Word], ...]  # (t, w_hat[t]) re-verified pairs


def one_step_prehomog(
    w: Word,
    stem: Word,
    coloring: Coloring,
    depth: int = 1,
    verify_tail: int = 1,
    tail_horizon: Optional[int] = None,
    max_len: Optional[int] = None,
    workers: int = 1,
) -> OneStepCertificate:
    """Freeze the color of all in-horizon extensions of stem.x_n along W.

    Builds the derived coloring of extension tails over the alphabet
    enlarged by x_0..x_n (total on tails up to tail_horizon, which
    defaults to the largest length W and the coloring horizon support,
    capped at depth + 3), finds a monochromatic substitution prefix U
    there, renames the letter-variables x_m to the variable slots of
    their first occurrence in stem.x_n and the search variables to
    fresh slots, and composes the renamed prefix onto W after the pure
    prefix z_0..z_{|stem|}.  The conclusion is re-verified on every
    in-horizon extension before returning.
    """
    if coloring.n < 1:
        raise InvalidWord("need a coloring of dimension >= 1")
    n = coloring.n - 1
    k = coloring.k
    if dimension(stem) != n or not is_var_word(stem, n):
        raise InvalidWord(f"stem must be an {n}-variable word")
    if not is_prefix_valid(w):
        raise InvalidWord("W must be prefix-valid")

    ke = k + n + 1  # letters of A plus x_0..x_n as extra letters
    base = stem.symbols + (k + n,)

    if tail_horizon is None:
        # largest tail length whose images stay defined and in-domain
        tail_horizon = depth
        while tail_horizon < depth + 3:
            cut = first_occurrence(w, len(stem) + 1 + tail_horizon + 1)
            if cut is None or cut > coloring.N:
                break
            tail_horizon += 1
    if tail_horizon < depth:
        raise CutPointMissing("tail horizon below the requested search depth")

    def derived(u_ext: Word) -> Word:
        # u_ext is a letter word over the enlarged alphabet; the same
        # integer codes read as A-letters and variables x_0..x_n.
        t = Word(k, base + u_ext.symbols)
        return substitute(w, t, omega=True)

    table = {}
    for u_ext in letter_words(ke, tail_horizon):
        img = derived(u_ext)  # CutPointMissing propagates: horizon too short
        if img not in coloring:
            raise CutPointMissing(
                f"derived word {format_word(img)} leaves the coloring domain"
            )
        table[u_ext] = coloring(img)
    f_s = Coloring(ke, tail_horizon, 0, coloring.ell, table)

    inner = csl_search(f_s, depth, max_len=max_len, workers=workers)

    # rename: letter x_m -> z at the first occurrence of x_m in stem.x_n,
    # search variable y_b -> fresh slot z_{|stem|+1+b}
    first_slot = [0] * (n + 1)
    for m in range(n):
        first_slot[m] = first_occurrence(stem, m)
    first_slot[n] = len(stem)
    mapped = []
    for sym in inner.word.symbols:
        if sym < k:
            mapped.append(sym)
        elif sym < ke:
            mapped.append(k + first_slot[sym - k])
        else:
            mapped.append(k + len(stem) + 1 + (sym - ke))
    z_word = Word(k, tuple(k + j for j in range(len(stem) + 1)) + tuple(mapped))
    if not is_prefix_valid(z_word):
        raise InvalidWord("renamed substitution word is not prefix-valid")
    w_hat = compose(w, z_word)

    checked = []
    for t in _stem_extensions(stem, k, n, verify_tail):
        try:
            img = substitute(w_hat, t, omega=True)
        except CutPointMissing:
            continue
        if img not in coloring:
            continue
        if coloring(img) != inner.color:
            raise AssertionError(
                f"re-verification failed at t={format_word(t)}"
            )
        checked.append((t, img))
    if not checked:
        raise NotFoundWithinHorizon("no in-horizon extension could be re-verified")
    return OneStepCertificate(
        w_hat, inner.color, stem, z_word, inner, tuple(checked)
    )


# ---------------------------------------------------------------------------
# the pure-prefix order


@dataclass(frozen=True)
class LeqResult:
    ok: bool
    witness: Optional[Word] = None


def _pure_prefix_continuations(
    k: int, m: int, total_max: int, max_vars: int
) -> Iterator[Word]:
    """Prefix-valid words starting with z_0..z_{m-1} in pure positions."""
    head = tuple(k + j for j in range(m))

    def rec(tail: list[int], introduced: int):
        yield Word(k, head + tuple(tail))
        if m + len(tail) >= total_max:
            return
        for a in range(k):
            tail.append(a)
            yield from rec(tail, introduced)
            tail.pop()
        for j in range(min(introduced + 1, max_vars)):
            tail.append(k + j)
            yield from rec(tail, introduced + 1 if j == introduced else introduced)
            tail.pop()

    # order by total length then lex
    all_words = list(rec([], m))
    all_words.sort(key=Word.key)
    yield from all_words


def leq_m_check(
    w_hat: Word, w: Word, m: int, max_len: int = 8, extra_vars: int = 2
) -> LeqResult:
    """Search for V with pure prefix z_0..z_{m-1} and compose(w, V) matching w_hat.

    Matching means agreement on the common defined region (one word is
    a prefix of the other); a candidate whose composition truncates
    very early can therefore match vacuously, which is the honest
    reading of prefix approximations.  Callers needing the strong
    relation keep the explicit substitution word instead (the one-step
    certificates do).  Returns the first witness in length-then-lex
    order, or ok=False after exhausting the bounded space.
    """
    for v in _pure_prefix_continuations(w.k, m, max_len, m + extra_vars):
        z = compose(w, v)
        overlap = min(len(z), len(w_hat))
        if z.symbols[:overlap] == w_hat.symbols[:overlap]:
            return LeqResult(True, v)
    return LeqResult(False)
