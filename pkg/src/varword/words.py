"""Finite words over an indexed alphabet, with variable symbols.

A word over an alphabet of size ``k`` is a tuple of symbol codes:
letters are ``0 .. k-1`` and the variable ``x_j`` is encoded as
``k + j``.  Letters sort before variables and variables sort by index,
so plain tuple comparison gives the canonical symbol order and
``(len, symbols)`` gives the canonical length-then-lex order used by
every deterministic search in the package.

The module provides the substitution calculus:

* ``substitute(w, u)`` replaces each occurrence of ``x_j`` by the
  single symbol ``u(j)`` and cuts strictly before the first occurrence
  of ``x_{len(u)}``.  A finite prefix with no such occurrence raises
  ``CutPointMissing`` (the horizon is too short), unless the word is a
  variable word of dimension exactly ``len(u)``, in which case no cut
  is needed.  With ``omega=True`` the cut is mandatory, which is the
  faithful semantics for prefixes of infinite variable words.
* ``compose(w, v)`` substitutes the prefix ``v`` positionwise into the
  variables of ``w``, truncating where ``v`` runs out of symbols.  It
  satisfies ``compose(w, v)[u] == w[v[u]]`` whenever both sides are
  defined.
* ``decompose``/``recompose`` split an ordered variable word into its
  constant head and its left one-variable blocks, and glue them back.

Text form: letters print as decimal digits (``[i]`` for two-digit
alphabets), ``x_j`` prints as ``x{j}`` and the empty word prints as
``-``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from .errors import (
    CutPointMissing,
    IndexOutOfRange,
    InvalidWord,
    NotOrdered,
)

__all__ = [
    "Word",
    "Condition",
    "ValidityReport",
    "word",
    "parse_word",
    "format_word",
    "dimension",
    "first_occurrence",
    "is_prefix_valid",
    "is_var_word",
    "is_left_var_word",
    "validate",
    "var_word",
    "omega_prefix",
    "left_var_word",
    "substitute",
    "compose",
    "decompose",
    "recompose",
    "rename_variable",
    "letter_words",
    "var_words",
    "prefix_valid_words",
]


@dataclass(frozen=True)
class Word:
    """Immutable word over an alphabet of size ``k`` plus variables."""

    k: int
    symbols: tuple[int, ...] = ()

    def __post_init__(self):
        if self.k < 0:
            raise IndexOutOfRange(f"alphabet size must be >= 0, got {self.k}")
        for i, s in enumerate(self.symbols):
            if s < 0:
                raise IndexOutOfRange(f"negative symbol {s} at position {i}")

    def __len__(self) -> int:
        return len(self.symbols)

    def __getitem__(self, i):
        return self.symbols[i]

    def __iter__(self):
        return iter(self.symbols)

    def is_letter(self, i: int) -> bool:
        return self.symbols[i] < self.k

    def var_index(self, i: int) -> int:
        """Variable index at position i, or -1 for a letter."""
        s = self.symbols[i]
        return s - self.k if s >= self.k else -1

    def has_variables(self) -> bool:
        return any(s >= self.k for s in self.symbols)

    def key(self) -> tuple[int, tuple[int, ...]]:
        """Length-then-lex sort key under the canonical symbol order."""
        return (len(self.symbols), self.symbols)

    def concat(self, other: "Word") -> "Word":
        if other.k != self.k:
            raise IndexOutOfRange("alphabet mismatch in concatenation")
        return Word(self.k, self.symbols + other.symbols)

    def __str__(self) -> str:
        return format_word(self)


def word(k: int, symbols: Iterable[int]) -> Word:
    return Word(k, tuple(symbols))


def format_word(w: Word) -> str:
    if not w.symbols:
        return "-"
    out = []
    prev_var = False
    for s in w.symbols:
        if s < w.k:
            # a digit directly after x{j} would be swallowed into the index,
            # so bracket it; the result stays a single whitespace-free token
            if s > 9 or prev_var:
                tok = f"[{s}]"
            else:
                tok = str(s)
            prev_var = False
        else:
            tok = f"x{s - w.k}"
            prev_var = True
        out.append(tok)
    return "".join(out)


def parse_word(text: str, k: int) -> Word:
    """Parse the canonical text form; ``-`` or the empty string is the empty word."""
    text = text.strip()
    if text in ("", "-"):
        return Word(k, ())
    syms: list[int] = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c == "x":
            j = i + 1
            while j < len(text) and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise IndexOutOfRange(f"bare 'x' at position {i} in {text!r}")
            syms.append(k + int(text[i + 1 : j]))
            i = j
        elif c == "[":
            j = text.find("]", i)
            if j < 0:
                raise IndexOutOfRange(f"unclosed '[' at position {i} in {text!r}")
            v = int(text[i + 1 : j])
            if v >= k:
                raise IndexOutOfRange(f"letter {v} outside alphabet of size {k}")
            syms.append(v)
            i = j + 1
        elif c.isdigit():
            v = int(c)
            if v >= k:
                raise IndexOutOfRange(f"letter {v} outside alphabet of size {k}")
            syms.append(v)
            i += 1
        else:
            raise IndexOutOfRange(f"unexpected character {c!r} at position {i}")
    return Word(k, tuple(syms))


def dimension(w: Word) -> int:
    """One plus the largest variable index occurring, 0 for a pure letter word."""
    best = -1
    for s in w.symbols:
        if s >= w.k and s - w.k > best:
            best = s - w.k
    return best + 1


def first_occurrence(w: Word, j: int) -> Optional[int]:
    """Position of the first occurrence of x_j, or None."""
    target = w.k + j
    for i, s in enumerate(w.symbols):
        if s == target:
            return i
    return None


@dataclass(frozen=True)
class Condition:
    name: str
    ok: bool
    position: Optional[int] = None
    detail: str = ""


@dataclass(frozen=True)
class ValidityReport:
    word: Word
    n: int
    ordered: bool
    conditions: tuple[Condition, ...]

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.conditions)

    def failing(self) -> tuple[Condition, ...]:
        return tuple(c for c in self.conditions if not c.ok)


def validate(w: Word, n: int, ordered: bool = False) -> ValidityReport:
    """Check the n-variable-word invariants, reporting each condition.

    Conditions: variable indices stay below n, every x_j with j < n
    occurs, first occurrences appear in index order, and (if requested)
    the last occurrence of x_j precedes the first occurrence of x_{j+1}.
    Total: failures become report entries, never exceptions.
    """
    conditions: list[Condition] = []

    pos_range = None
    for i, s in enumerate(w.symbols):
        if s >= w.k + n:
            pos_range = i
            break
    conditions.append(
        Condition(
            "index-range",
            pos_range is None,
            pos_range,
            "" if pos_range is None else f"variable x{w.symbols[pos_range] - w.k} with only {n} allowed",
        )
    )

    first = [first_occurrence(w, j) for j in range(n)]
    missing = next((j for j, p in enumerate(first) if p is None), None)
    conditions.append(
        Condition(
            "occurrence",
            missing is None,
            len(w.symbols) if missing is not None else None,
            "" if missing is None else f"x{missing} never occurs",
        )
    )

    order_pos = None
    for j in range(n - 1):
        a, b = first[j], first[j + 1]
        if a is None or b is None:
            continue
        if b < a:
            order_pos = b
            break
    conditions.append(
        Condition(
            "first-order",
            order_pos is None,
            order_pos,
            "" if order_pos is None else "first occurrences out of index order",
        )
    )

    if ordered:
        bad = None
        seen_next = [False] * (n + 1)
        for i, s in enumerate(w.symbols):
            if s < w.k:
                continue
            j = s - w.k
            if j >= n:
                continue
            if any(seen_next[j + 1 : n]):
                bad = i
                break
            seen_next[j] = True
        conditions.append(
            Condition(
                "ordered",
                bad is None,
                bad,
                "" if bad is None else f"x{w.symbols[bad] - w.k} reoccurs after a later variable",
            )
        )

    return ValidityReport(w, n, ordered, tuple(conditions))


def is_var_word(w: Word, n: Optional[int] = None, ordered: bool = False) -> bool:
    if n is None:
        n = dimension(w)
    return validate(w, n, ordered).passed


def is_prefix_valid(w: Word) -> bool:
    """True for prefixes of valid infinite variable words.

    Every variable must be introduced in index order: the first
    occurrence of x_j precedes the first occurrence of x_{j+1}, with no
    index skipped.
    """
    introduced = 0
    for s in w.symbols:
        if s < w.k:
            continue
        j = s - w.k
        if j > introduced:
            return False
        if j == introduced:
            introduced += 1
    return True


def is_left_var_word(w: Word) -> bool:
    """One-variable word whose variable sits at position 0."""
    return (
        len(w.symbols) >= 1
        and w.symbols[0] == w.k
        and is_var_word(w, 1)
    )


def var_word(w: Word, n: Optional[int] = None, ordered: bool = False) -> Word:
    if n is None:
        n = dimension(w)
    report = validate(w, n, ordered)
    if not report.passed:
        bad = report.failing()[0]
        if bad.name == "ordered":
            raise NotOrdered(f"{format_word(w)}: {bad.name} fails at {bad.position}")
        raise InvalidWord(f"{format_word(w)}: {bad.name} fails ({bad.detail})")
    return w


def omega_prefix(w: Word) -> Word:
    if not is_prefix_valid(w):
        raise InvalidWord(f"{format_word(w)} is not a valid variable-word prefix")
    return w


def left_var_word(w: Word) -> Word:
    if not is_left_var_word(w):
        raise InvalidWord(f"{format_word(w)} is not a left one-variable word")
    return w


def _as_symbols(u, k: int) -> tuple[int, ...]:
    if isinstance(u, Word):
        if u.k != k:
            raise IndexOutOfRange(
                f"substituted word declared over alphabet {u.k}, expected {k}"
            )
        return u.symbols
    return tuple(u)


def substitute(w: Word, u, omega: bool = False) -> Word:
    """Return w[u]: x_j goes to u(j), cut before the first x_{len(u)}.

    ``u`` may contain variables itself, in which case they survive into
    the result.  ``omega=True`` treats ``w`` strictly as a prefix of an
    infinite variable word: the cut point must be visible.
    """
    us = _as_symbols(u, w.k)
    m = len(us)
    cut = first_occurrence(w, m)
    if cut is None:
        if omega or dimension(w) != m or not is_var_word(w, m):
            raise CutPointMissing(
                f"{format_word(w)} has no occurrence of x{m} and is not a {m}-variable word"
            )
        cut = len(w.symbols)
    out = []
    for s in w.symbols[:cut]:
        if s < w.k:
            out.append(s)
        else:
            j = s - w.k
            if j >= m:
                raise InvalidWord(
                    f"x{j} occurs before the first x{m} in {format_word(w)}"
                )
            out.append(us[j])
    return Word(w.k, tuple(out))


def compose(w: Word, v: Word) -> Word:
    """Substitute the prefix v positionwise into the variables of w.

    The result is truncated at the first variable of w whose index
    falls outside v; it is again a valid prefix when both inputs are.
    Total: never raises, the result may be shorter than either input.
    """
    if v.k != w.k:
        raise IndexOutOfRange("alphabet mismatch in composition")
    out = []
    for s in w.symbols:
        if s < w.k:
            out.append(s)
        else:
            j = s - w.k
            if j >= len(v.symbols):
                break
            out.append(v.symbols[j])
    return Word(w.k, tuple(out))


def rename_variable(w: Word, old: int, new: int) -> Word:
    """Rename x_old to x_new throughout (no validity re-check)."""
    return Word(
        w.k,
        tuple(w.k + new if s == w.k + old else s for s in w.symbols),
    )


def decompose(w: Word) -> tuple[Word, tuple[Word, ...]]:
    """Split an ordered n-variable word into its head and n left blocks.

    Block i runs from the first occurrence of x_i up to just before the
    first occurrence of x_{i+1} (end of word for the last block), with
    x_i renumbered to x_0.  Raises NotOrdered otherwise.
    """
    n = dimension(w)
    if not is_var_word(w, n, ordered=True):
        raise NotOrdered(f"{format_word(w)} is not an ordered variable word")
    cuts = [first_occurrence(w, j) for j in range(n)]
    cuts.append(len(w.symbols))
    sigma = Word(w.k, w.symbols[: cuts[0]])
    blocks = []
    for i in range(n):
        seg = w.symbols[cuts[i] : cuts[i + 1]]
        blocks.append(Word(w.k, tuple(w.k if s == w.k + i else s for s in seg)))
    return sigma, tuple(blocks)


def recompose(sigma: Word, blocks: Sequence[Word]) -> Word:
    """Inverse of decompose: renumber block i's variable to x_i and glue."""
    syms = list(sigma.symbols)
    for i, b in enumerate(blocks):
        if not is_left_var_word(b):
            raise InvalidWord(f"block {i} ({format_word(b)}) is not a left 1-variable word")
        syms.extend(b.k + i if s == b.k else s for s in b.symbols)
    return Word(sigma.k, tuple(syms))


# ---------------------------------------------------------------------------
# deterministic enumerations (length ascending, then lex)


def letter_words(k: int, max_len: int, min_len: int = 0) -> Iterator[Word]:
    if k == 0:
        if min_len == 0 and max_len >= 0:
            yield Word(0, ())
        return
    for length in range(min_len, max_len + 1):
        syms = [0] * length
        while True:
            yield Word(k, tuple(syms))
            i = length - 1
            while i >= 0 and syms[i] == k - 1:
                syms[i] = 0
                i -= 1
            if i < 0:
                break
            syms[i] += 1


def _var_word_dfs(k, length, ordered, out, introduced):
    if len(out) == length:
        yield tuple(out)
        return
    for a in range(k):
        out.append(a)
        yield from _var_word_dfs(k, length, ordered, out, introduced)
        out.pop()
    if ordered:
        allowed = [introduced - 1] if introduced > 0 else []
        allowed.append(introduced)
    else:
        allowed = list(range(introduced + 1))
    for j in allowed:
        out.append(k + j)
        yield from _var_word_dfs(
            k, length, ordered, out, introduced + 1 if j == introduced else introduced
        )
        out.pop()


def var_words(
    k: int,
    max_len: int,
    dim: Optional[int] = None,
    ordered: bool = False,
    min_len: int = 0,
) -> Iterator[Word]:
    """All valid variable words by (length, lex); dim=None means any dimension.

    Variables are introduced in index order, so occurrence and
    first-order invariants hold by construction; the ordered variant
    only ever reuses the most recently introduced variable.
    """
    for length in range(min_len, max_len + 1):
        for syms in _var_word_dfs(k, length, ordered, [], 0):
            if dim is not None:
                introduced = max((s - k + 1 for s in syms if s >= k), default=0)
                if introduced != dim:
                    continue
            yield Word(k, syms)


def prefix_valid_words(
    k: int, max_len: int, min_vars: int = 0, min_len: int = 0
) -> Iterator[Word]:
    """All prefix-valid words by (length, lex), optionally with >= min_vars variables."""
    for length in range(min_len, max_len + 1):
        for syms in _var_word_dfs(k, length, False, [], 0):
            if min_vars:
                introduced = max((s - k + 1 for s in syms if s >= k), default=0)
                if introduced < min_vars:
                    continue
            yield Word(k, syms)
