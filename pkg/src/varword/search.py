"""Bounded searches around the finitary line-with-letter theorem.

Every search enumerates candidates in length-then-lex order and
returns the first witness, fully re-verified, so output is
deterministic and worker sharding cannot change it: shards cover
contiguous candidate ranges and the global answer is the minimum
candidate index over per-shard hits.

Provided here:

* ``search_line_with_letter``: a monochromatic line S plus a letter a
  with S(0) and S(1).a in the same color class.
* ``line_letter_from_dim2``: extract such a pair from a monochromatic
  dimension-2 tree through a connector word between its levels.
* ``h_embed``: the block embedding h(a_0...a_m) = w_0[a_0]...w_m[a_m].
* ``d_super_s``: the residue family {sigma : S(1).sigma inside D}.
* ``step_lemma_search`` / ``iterate_builder``: the one-step lemma for
  piecewise syndetic families and the staged tree construction whose
  invariants (claims 1 and 2) are re-checked exactly at the horizon
  after every stage.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .colorings import Coloring
from .errors import (
    NoConnector,
    NotFoundWithinHorizon,
    InvalidWord,
)
from .largeness import (
    FiniteFamily,
    PwCertification,
    PwSyndeticDecomposition,
    pws_certify,
)
from .trees import OVWTree, level, tree_from_generator
from .words import (
    Word,
    decompose,
    format_word,
    is_left_var_word,
    letter_words,
    substitute,
    var_words,
)

__all__ = [
    "LineLetterCertificate",
    "search_line_with_letter",
    "verify_line_letter",
    "line_letter_from_dim2",
    "HEmbedding",
    "h_embed",
    "d_super_s",
    "StepResult",
    "step_lemma_search",
    "DensityStepResult",
    "density_step_search",
    "BuilderStage",
    "BuilderTrace",
    "iterate_builder",
    "sharded_first",
]


def sharded_first(candidates: Sequence, evaluate: Callable, workers: int = 1):
    """First candidate (by list order) whose evaluation is not None.

    With several workers the candidate list is cut into contiguous
    shards scanned in parallel; each shard stops at its own first hit
    and the earliest hit overall wins, so the result never depends on
    the worker count.
    """
    if workers <= 1 or len(candidates) < 2:
        for i, cand in enumerate(candidates):
            res = evaluate(cand)
            if res is not None:
                return i, res
        return None

    bounds = [len(candidates) * w // workers for w in range(workers + 1)]

    def scan(lo: int, hi: int):
        for i in range(lo, hi):
            res = evaluate(candidates[i])
            if res is not None:
                return i, res
        return None

    with ThreadPoolExecutor(max_workers=workers) as pool:
        hits = list(
            pool.map(lambda ab: scan(*ab), zip(bounds[:-1], bounds[1:]))
        )
    hits = [h for h in hits if h is not None]
    if not hits:
        return None
    return min(hits, key=lambda h: h[0])


# ---------------------------------------------------------------------------
# line with letter


@dataclass(frozen=True)
class LineLetterCertificate:
    line: OVWTree
    letter: int
    color: int
    checked: tuple[Word, ...]  # S(0) together with S(1).a


def _line_candidates(k: int, max_gen_len: int) -> list[tuple[Word, int]]:
    cands = []
    for g in var_words(k, max_gen_len, dim=1, ordered=True, min_len=1):
        for a in range(k):
            cands.append((g, a))
    return cands


def search_line_with_letter(
    coloring: Coloring, workers: int = 1, max_gen_len: Optional[int] = None
) -> LineLetterCertificate:
    """Lex-least monochromatic line-and-letter pair within the horizon.

    The line size plus one must fit under the coloring horizon so that
    the extended level S(1).a stays colorable.  Raises
    NotFoundWithinHorizon after exhausting all generators.
    """
    if coloring.n != 0:
        raise InvalidWord("line search expects a coloring of plain words")
    k, n_hor = coloring.k, coloring.N
    cap = n_hor - 1 if max_gen_len is None else min(max_gen_len, n_hor - 1)
    cands = _line_candidates(k, cap)

    def attempt(cand):
        g, a = cand
        w0 = substitute(g, ())
        color = coloring(w0)
        checked = [w0]
        for b in range(k):
            w = substitute(g, (b,))
            wa = Word(k, w.symbols + (a,))
            if coloring(wa) != color:
                return None
            checked.append(wa)
        cert = LineLetterCertificate(
            tree_from_generator(g), a, color, tuple(checked)
        )
        verify_line_letter(cert, coloring)
        return cert

    hit = sharded_first(cands, attempt, workers)
    if hit is None:
        raise NotFoundWithinHorizon(
            f"no line-with-letter certificate with generator length <= {cap}"
        )
    return hit[1]


def verify_line_letter(cert: LineLetterCertificate, coloring: Coloring) -> None:
    """Re-check a certificate against the instance from its postconditions only."""
    g = cert.line.generator
    tree = tree_from_generator(g)  # re-derives and re-validates orderedness
    if tree.dimension != 1:
        raise InvalidWord("certificate line is not one-dimensional")
    if len(g) + 1 > coloring.N:
        raise InvalidWord("certificate line does not fit within the horizon")
    if not 0 <= cert.letter < coloring.k:
        raise InvalidWord("certificate letter outside the alphabet")
    expected = set(level(tree, 0))
    for w in level(tree, 1):
        expected.add(Word(w.k, w.symbols + (cert.letter,)))
    if expected != set(cert.checked):
        raise InvalidWord("checked set does not match S(0) | S(1).a")
    for w in cert.checked:
        if coloring(w) != cert.color:
            raise InvalidWord(f"{format_word(w)} not in color {cert.color}")


def line_letter_from_dim2(
    tree: OVWTree, coloring: Coloring
) -> tuple[LineLetterCertificate, Word]:
    """Turn a monochromatic dimension-2 tree into a line-with-letter pair.

    Scans for the lex-least nonempty connector sigma with
    T(1).sigma inside T(2); the line is T(0) | T(1).sigma* where
    sigma* drops the last letter, and that letter is returned with it.
    """
    if tree.dimension != 2:
        raise InvalidWord("need a dimension-2 tree")
    colors = {coloring(e) for e in tree.elements}
    if len(colors) != 1:
        raise InvalidWord("tree is not monochromatic")
    (color,) = colors
    k = tree.k
    l1, l2 = tree.level_lengths[1], tree.level_lengths[2]
    lvl1, lvl2 = set(level(tree, 1)), set(level(tree, 2))
    connector = None
    for sigma in letter_words(k, l2 - l1, min_len=l2 - l1):
        if len(sigma) == 0:
            continue
        if all(Word(k, w.symbols + sigma.symbols) in lvl2 for w in lvl1):
            connector = sigma
            break
    if connector is None:
        raise NoConnector("no nonempty connector from T(1) into T(2)")
    a = connector.symbols[-1]
    sigma_star = Word(k, connector.symbols[:-1])
    cut1 = tree.level_lengths[1]
    line_gen = Word(k, tree.generator.symbols[:cut1] + sigma_star.symbols)
    line = tree_from_generator(line_gen)
    checked = [substitute(line_gen, ())]
    for b in range(k):
        w = substitute(line_gen, (b,))
        checked.append(Word(k, w.symbols + (a,)))
    cert = LineLetterCertificate(line, a, color, tuple(checked))
    verify_line_letter(cert, coloring)
    return cert, connector


# ---------------------------------------------------------------------------
# block embedding


@dataclass(frozen=True)
class HEmbedding:
    """h(a_0 ... a_j) = w_0[a_0] ... w_{j-1}[a_{j-1}] for left 1-variable blocks."""

    blocks: tuple[Word, ...]

    def __post_init__(self):
        for b in self.blocks:
            if not is_left_var_word(b):
                raise InvalidWord(f"{format_word(b)} is not a left 1-variable word")

    @property
    def k(self) -> int:
        return self.blocks[0].k

    def __call__(self, u: Word) -> Word:
        if len(u) > len(self.blocks):
            raise InvalidWord("word longer than the block sequence")
        syms: list[int] = []
        for i, a in enumerate(u.symbols):
            if a >= self.k:
                raise InvalidWord("embedding domain is letter words")
            syms.extend(substitute(self.blocks[i], (a,)).symbols)
        return Word(self.k, tuple(syms))

    def image_of_tree(self, tree: OVWTree) -> OVWTree:
        from .trees import generator_from_tree

        imgs = [self(e) for e in tree.elements]
        gen = generator_from_tree(imgs)
        return tree_from_generator(gen)


def h_embed(blocks: Sequence[Word]) -> HEmbedding:
    return HEmbedding(tuple(blocks))


# ---------------------------------------------------------------------------
# residues and the one-step lemma


def d_super_s(family: FiniteFamily, line: OVWTree) -> FiniteFamily:
    """{sigma : S(1).sigma inside family}, at horizon N - |S|."""
    if line.dimension != 1:
        raise InvalidWord("residue needs a line")
    s1 = level(line, 1)
    n2 = family.N - len(line.generator)
    if n2 < 0:
        return FiniteFamily.empty(family.k, 0)
    from .largeness import _offsets  # internal rank layout

    offs = _offsets(family.k, n2)
    mask = (1 << offs[n2 + 1]) - 1
    for w in s1:
        acc = 0
        for m in range(n2 + 1):
            acc |= family.extract_after_prefix(w, m) << offs[m]
        mask &= acc
    return FiniteFamily(family.k, n2, mask)


@dataclass(frozen=True)
class StepResult:
    line: OVWTree
    block: Word  # left 1-variable word w with S(1) = S(0).w[A]
    residue: PwCertification  # certified piecewise syndetic Q
    s0_in_part: bool
    inclusion_checked: int


def step_lemma_search(
    dec: PwSyndeticDecomposition,
    m_bound: int = 2,
    max_gen_len: int = 6,
    workers: int = 1,
) -> StepResult:
    """Smallest line S with S(0) inside P and S(1).Q inside P, Q certified.

    Q is the full residue of P past S, re-certified as piecewise
    syndetic at the reduced horizon; both inclusions are re-verified
    element by element before the result is returned.
    """
    p = dec.part
    cap = min(max_gen_len, dec.N - 1)
    cands = [g for g in var_words(dec.k, cap, dim=1, ordered=True, min_len=1)]

    def attempt(g):
        s0 = substitute(g, ())
        if s0 not in p:
            return None
        line = tree_from_generator(g)
        q_raw = d_super_s(p, line)
        if not q_raw.mask:
            return None
        cert = pws_certify(q_raw, dec.ell, m_bound)
        if cert is None:
            return None
        # element-wise re-verification of both inclusions
        checked = 1
        if s0 not in p:
            raise AssertionError("root left the part after certification")
        for w in level(line, 1):
            for sigma in cert.decomposition.part.words():
                glued = w.concat(sigma)
                if len(glued) <= p.N:
                    if glued not in p:
                        raise AssertionError(
                            f"residue inclusion fails at {format_word(glued)}"
                        )
                    checked += 1
        sigma_head, blocks = decompose(g)
        return StepResult(line, blocks[0], cert, True, checked)

    hit = sharded_first(cands, attempt, workers)
    if hit is None:
        raise NotFoundWithinHorizon(
            f"no one-step line with generator length <= {cap}"
        )
    return hit[1]


# ---------------------------------------------------------------------------
# density-route plumbing


@dataclass(frozen=True)
class DensityStepResult:
    line: OVWTree
    lengths: tuple[int, ...]  # L': densities of the residue exceed the threshold
    threshold: Fraction
    line_pool_size: int
    per_length: tuple[tuple[int, Word], ...]  # (r, generator of S_r)


def density_step_search(family: FiniteFamily, delta, level_cap: int) -> DensityStepResult:
    """Pigeonhole skeleton of the density one-step argument.

    For each length r where the family's density exceeds delta, take
    the lex-least line S_r inside the family with levels below the cap
    whose residue keeps density above delta^2 / (8 |lines(cap)|) at
    length r - |S_r|; the line repeating most often wins, together with
    its length set.  Purely bookkeeping around d_super_s; the uniform
    bounds behind the infinite statement are not computed.
    """
    delta = Fraction(delta)
    pool = [
        g
        for g in var_words(family.k, level_cap, dim=1, ordered=True, min_len=1)
    ]
    threshold = delta * delta / (8 * len(pool))
    witness_lengths = [
        r
        for r in range(family.N + 1)
        if Fraction(family.band(r).bit_count(), family.k**r) > delta
    ]
    per_length = []
    for r in witness_lengths:
        for g in pool:
            if r - len(g) < 0:
                continue
            line = tree_from_generator(g)
            if any(e not in family for e in line.elements):
                continue
            residue = d_super_s(family, line)
            band = residue.band(r - len(g))
            dens = Fraction(band.bit_count(), family.k ** (r - len(g)))
            if dens > threshold:
                per_length.append((r, g))
                break
    if not per_length:
        raise NotFoundWithinHorizon(
            f"no line with levels <= {level_cap} keeps residue density above {threshold}"
        )
    counts: dict[Word, list[int]] = {}
    for r, g in per_length:
        counts.setdefault(g, []).append(r)
    # deterministic tie-break: most lengths, then lex-least generator
    top = max(len(v) for v in counts.values())
    best = sorted((g for g in counts if len(counts[g]) == top), key=Word.key)[0]
    return DensityStepResult(
        tree_from_generator(best),
        tuple(counts[best]),
        threshold,
        len(pool),
        tuple(per_length),
    )


# ---------------------------------------------------------------------------
# staged builder


@dataclass(frozen=True)
class BuilderStage:
    tree: OVWTree
    block: Word  # w_s
    residue: PwCertification  # P_s
    claim1_ok: bool
    claim1_checked: int
    claim1_skipped: int
    claim2_ok: bool
    claim2_checked: int
    claim2_skipped: int


@dataclass(frozen=True)
class BuilderTrace:
    part: FiniteFamily  # the ambient P all claims refer to
    stages: tuple[BuilderStage, ...]

    @property
    def tree(self) -> OVWTree:
        return self.stages[-1].tree


def _claim1(tree: OVWTree, p: FiniteFamily) -> tuple[bool, int, int]:
    ok, checked, skipped = True, 0, 0
    for e in tree.elements:
        if len(e) > p.N:
            skipped += 1
            continue
        checked += 1
        if e not in p:
            ok = False
    return ok, checked, skipped


def _claim2(
    tree: OVWTree, block: Word, residue: FiniteFamily, p: FiniteFamily
) -> tuple[bool, int, int]:
    s = tree.dimension
    ok, checked, skipped = True, 0, 0
    tops = level(tree, s)
    insts = [substitute(block, (a,)) for a in range(block.k)]
    for t in tops:
        for wa in insts:
            head = t.concat(wa)
            for sigma in residue.words():
                glued = head.concat(sigma)
                if len(glued) > p.N:
                    skipped += 1
                    continue
                checked += 1
                if glued not in p:
                    ok = False
    return ok, checked, skipped


def iterate_builder(
    dec: PwSyndeticDecomposition,
    s_max: int,
    m_bound: int = 2,
    max_gen_len: int = 6,
    workers: int = 1,
) -> BuilderTrace:
    """Grow a tree of dimension s_max inside P by iterating the one-step lemma.

    After every stage both invariants are re-verified exactly at the
    horizon: the tree stays inside P, and top-level words extended by
    the current block and the certified residue stay inside P.  A
    failed stage propagates NotFoundWithinHorizon tagged with the
    stage index.
    """
    p = dec.part
    k = dec.k
    try:
        step = step_lemma_search(dec, m_bound, max_gen_len, workers)
    except NotFoundWithinHorizon as exc:
        raise NotFoundWithinHorizon(f"stage 0: {exc}") from exc
    sigma0 = substitute(step.line.generator, ())
    tree = tree_from_generator(sigma0)  # dimension 0
    stages = []
    c1 = _claim1(tree, p)
    c2 = _claim2(tree, step.block, step.residue.decomposition.part, p)
    stages.append(BuilderStage(tree, step.block, step.residue, c1[0], c1[1], c1[2], c2[0], c2[1], c2[2]))
    if not (c1[0] and c2[0]):
        raise AssertionError("stage 0 claims failed")

    for s in range(s_max):
        prev = stages[-1]
        try:
            step = step_lemma_search(
                prev.residue.decomposition, m_bound, max_gen_len, workers
            )
        except NotFoundWithinHorizon as exc:
            raise NotFoundWithinHorizon(f"stage {s + 1}: {exc}") from exc
        sigma0 = substitute(step.line.generator, ())
        # new generator: old one, then w_s renamed to x_s, then sigma0
        old = prev.tree.generator
        renamed = tuple(
            k + s if sym == k else sym for sym in prev.block.symbols
        )
        gen = Word(k, old.symbols + renamed + sigma0.symbols)
        tree = tree_from_generator(gen)
        c1 = _claim1(tree, p)
        c2 = _claim2(tree, step.block, step.residue.decomposition.part, p)
        stages.append(
            BuilderStage(tree, step.block, step.residue, c1[0], c1[1], c1[2], c2[0], c2[1], c2[2])
        )
        if not (c1[0] and c2[0]):
            raise AssertionError(f"stage {s + 1} claims failed")
    return BuilderTrace(p, tuple(stages))
