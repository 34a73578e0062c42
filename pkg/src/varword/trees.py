"""Instantiation trees of ordered variable words.

The tree of an ordered n-variable word ``w`` is the set of all
instantiations ``{w[u] : u in A^{<=n}}``.  Level j collects the
instantiations by u of length j; all of them share the same length
(the position of the first occurrence of x_j), so levels are the
length strata of the element set.  A line is the one-dimensional case.

``generator_from_tree`` inverts the construction: the generating word
is reconstructed zone by zone, deciding letters against variables by
column agreement across the next level, and the reconstruction is
verified against every level before it is returned.  For alphabets of
size at least two the generator is unique; for the unary alphabet the
lex-least generator is returned (variables only at the cut columns).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Mapping, Optional, Union

from .errors import (
    ElementNotInTree,
    LevelOutOfRange,
    NotATree,
    NotOrdered,
)
from .words import (
    Word,
    dimension,
    first_occurrence,
    format_word,
    is_var_word,
    letter_words,
    substitute,
)

__all__ = [
    "OVWTree",
    "tree_from_generator",
    "generator_from_tree",
    "level",
    "levels",
    "size",
    "CanonicalIso",
    "canonical_iso",
    "is_subtree",
]


@dataclass(frozen=True)
class OVWTree:
    generator: Word
    elements: tuple[Word, ...]  # sorted by (length, lex)

    @property
    def k(self) -> int:
        return self.generator.k

    @property
    def dimension(self) -> int:
        return dimension(self.generator)

    @cached_property
    def level_lengths(self) -> tuple[int, ...]:
        cuts = [first_occurrence(self.generator, j) for j in range(self.dimension)]
        cuts.append(len(self.generator))
        return tuple(cuts)

    def element_set(self) -> frozenset:
        return frozenset(self.elements)


def tree_from_generator(w: Word) -> OVWTree:
    """Enumerate {w[u] : |u| <= dim(w)} for an ordered variable word."""
    n = dimension(w)
    if not is_var_word(w, n, ordered=True):
        raise NotOrdered(f"{format_word(w)} is not an ordered variable word")
    elems = []
    for j in range(n + 1):
        for u in letter_words(w.k, j, min_len=j):
            elems.append(substitute(w, u))
    elems.sort(key=Word.key)
    return OVWTree(w, tuple(elems))


def level(tree: OVWTree, j: int) -> tuple[Word, ...]:
    if j < 0 or j > tree.dimension:
        raise LevelOutOfRange(f"level {j} of a dimension-{tree.dimension} tree")
    want = tree.level_lengths[j]
    return tuple(e for e in tree.elements if len(e) == want)


def levels(tree: OVWTree) -> tuple[int, ...]:
    """The set of levels: the element lengths, ascending."""
    return tuple(sorted({len(e) for e in tree.elements}))


def size(tree: OVWTree) -> int:
    """Max element length; coincides with the generator length."""
    return max(len(e) for e in tree.elements)


def generator_from_tree(elements: Iterable[Word]) -> Word:
    """Reconstruct the unique ordered generator of an instantiation tree.

    Raises NotATree with a diagnostic element pair when the set is not
    of the required form.
    """
    elems = sorted(set(elements), key=Word.key)
    if not elems:
        raise NotATree("empty set")
    k = elems[0].k
    for e in elems:
        if e.has_variables():
            raise NotATree(f"{format_word(e)} contains a variable", pair=(e, e))

    by_len: dict[int, list[Word]] = {}
    for e in elems:
        by_len.setdefault(len(e), []).append(e)
    lens = sorted(by_len)
    n = len(lens) - 1

    for j, length in enumerate(lens):
        if len(by_len[length]) != k**j:
            raise NotATree(
                f"level {j} has {len(by_len[length])} elements, expected {k**j}",
                pair=(by_len[length][0], by_len[length][-1]),
            )
    if len(by_len[lens[0]]) != 1:
        raise NotATree("no unique root")

    gen: list[Optional[int]] = [None] * lens[-1]
    gen[: lens[0]] = list(elems[0].symbols)

    # zone j spans the columns first seen at level j+1; decide each column
    # from the level-(j+1) instantiations, paired with their patterns via
    # the values at the earlier cut columns.
    for j in range(n):
        lvl = by_len[lens[j + 1]]
        paired: dict[tuple[int, ...], Word] = {}
        for e in lvl:
            u = tuple(e.symbols[lens[i]] for i in range(j + 1))
            if any(d >= k for d in u):
                raise NotATree(f"non-letter at a cut column of {format_word(e)}", pair=(e, e))
            if u in paired:
                raise NotATree(
                    "two elements share an instantiation pattern",
                    pair=(paired[u], e),
                )
            paired[u] = e
        if len(paired) != k ** (j + 1):
            raise NotATree("level does not cover all patterns")
        items = sorted(paired.items())
        for c in range(lens[j], lens[j + 1]):
            if c == lens[j]:
                if all(e.symbols[c] == u[j] for u, e in items):
                    gen[c] = k + j
                    continue
                a, b = items[0][1], items[-1][1]
                raise NotATree(f"cut column {c} does not vary with the pattern", pair=(a, b))
            vals = [e.symbols[c] for _, e in items]
            if len(set(vals)) == 1:
                gen[c] = vals[0]
                continue
            for i in range(j + 1):
                if all(e.symbols[c] == u[i] for u, e in items):
                    gen[c] = k + i
                    break
            else:
                bad = next(
                    (x, y)
                    for (ux, x) in items
                    for (uy, y) in items
                    if x.symbols[c] != y.symbols[c]
                )
                raise NotATree(f"column {c} is neither constant nor a variable", pair=bad)

    g = Word(k, tuple(gen))  # type: ignore[arg-type]
    try:
        rebuilt = tree_from_generator(g)
    except NotOrdered as exc:
        raise NotATree(f"reconstructed generator is not ordered: {exc}") from exc
    if rebuilt.element_set() != frozenset(elems):
        extra = rebuilt.element_set() ^ frozenset(elems)
        some = sorted(extra, key=Word.key)[0]
        raise NotATree(
            f"verification failed at {format_word(some)}", pair=(some, some)
        )
    return g


@dataclass(frozen=True)
class CanonicalIso:
    """Bijection between tree elements and their instantiation patterns."""

    tree: OVWTree
    to_pattern: Mapping[Word, Word]
    from_pattern: Mapping[Word, Word]

    def __call__(self, element: Word) -> Word:
        try:
            return self.to_pattern[element]
        except KeyError:
            raise ElementNotInTree(format_word(element)) from None

    def pullback(self, coloring: Union[Callable[[Word], int], Mapping[Word, int]]):
        """Pull a coloring of the tree back to a coloring of patterns."""
        if isinstance(coloring, Mapping):
            fn = coloring.__getitem__
        else:
            fn = coloring
        return {u: fn(e) for u, e in self.from_pattern.items()}


def canonical_iso(tree: OVWTree) -> CanonicalIso:
    to_pattern = {}
    from_pattern = {}
    for j in range(tree.dimension + 1):
        for u in letter_words(tree.k, j, min_len=j):
            e = substitute(tree.generator, u)
            to_pattern[e] = u
            from_pattern[u] = e
    return CanonicalIso(tree, to_pattern, from_pattern)


def is_subtree(s: OVWTree, t: OVWTree) -> bool:
    return s.element_set() <= t.element_set()
