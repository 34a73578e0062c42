"""Total colorings of (variable-)word domains.

A coloring assigns one of ``ell`` colors to every n-variable word over
an alphabet of size k with length at most N; dimension 0 is the plain
word case.  The table is explicit, which keeps every search honest:
the instance is a finite object that can be hashed into certificates
and re-read by the verifier.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping

from .errors import InputError, InvalidWord
from .words import Word, format_word, letter_words, parse_word, var_words

__all__ = ["Coloring", "domain_words"]


def domain_words(k: int, n_horizon: int, dim: int) -> Iterator[Word]:
    if dim == 0:
        yield from letter_words(k, n_horizon)
    else:
        yield from var_words(k, n_horizon, dim=dim)


@dataclass(frozen=True)
class Coloring:
    k: int
    N: int
    n: int
    ell: int
    table: Mapping[Word, int] = field(default_factory=dict)

    @classmethod
    def from_function(
        cls, k: int, n_horizon: int, dim: int, ell: int, fn: Callable[[Word], int]
    ) -> "Coloring":
        table = {}
        for w in domain_words(k, n_horizon, dim):
            c = fn(w)
            if not 0 <= c < ell:
                raise InvalidWord(f"color {c} out of range for {format_word(w)}")
            table[w] = c
        return cls(k, n_horizon, dim, ell, table)

    @classmethod
    def constant(cls, k: int, n_horizon: int, dim: int, ell: int, color: int = 0):
        return cls.from_function(k, n_horizon, dim, ell, lambda w: color)

    def __call__(self, w: Word) -> int:
        return self.table[w]

    def __contains__(self, w: Word) -> bool:
        return w in self.table

    def domain(self) -> Iterator[Word]:
        yield from domain_words(self.k, self.N, self.n)

    def validate_total(self) -> None:
        for w in self.domain():
            if w not in self.table:
                raise InvalidWord(f"coloring not total: missing {format_word(w)}")

    # -- file form: header "k N n ell", then one "word color" per line ----

    def dump(self) -> str:
        lines = [f"{self.k} {self.N} {self.n} {self.ell}"]
        for w in sorted(self.table, key=Word.key):
            lines.append(f"{format_word(w)} {self.table[w]}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str, filename: str = "<coloring>") -> "Coloring":
        lines = text.splitlines()
        if not lines:
            raise InputError("empty coloring file", filename, 1, 1)
        head = lines[0].split()
        if len(head) != 4:
            raise InputError("expected header 'k N n ell'", filename, 1, 1)
        try:
            k, n_horizon, dim, ell = (int(x) for x in head)
        except ValueError:
            raise InputError("non-integer header field", filename, 1, 1) from None
        table = {}
        for i, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            parts = line.rsplit(None, 1)
            if len(parts) != 2:
                raise InputError("expected 'word color'", filename, i, 1)
            try:
                w = parse_word(parts[0], k)
            except Exception as exc:
                raise InputError(str(exc), filename, i, 1) from None
            try:
                c = int(parts[1])
            except ValueError:
                raise InputError(f"bad color {parts[1]!r}", filename, i, len(parts[0]) + 2) from None
            if not 0 <= c < ell:
                raise InputError(f"color {c} out of range", filename, i, len(parts[0]) + 2)
            table[w] = c
        col = cls(k, n_horizon, dim, ell, table)
        return col
