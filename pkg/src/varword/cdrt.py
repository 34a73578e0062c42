"""Translation between letter-alphabet colorings and variable-only colorings.

A coloring of n-variable words over an alphabet of k letters induces a
coloring of (k+n)-variable words over the empty alphabet: the first k
variables stand for the letters and the remaining ones for the
original variables.  With letters encoded as 0..k-1 and x_j as k+j,
the translation is a pure reinterpretation of the same symbol codes
under a different alphabet size, so encoding and decoding are
bijective on tables and ``decode . encode`` is the identity.

A monochromatic substitution prefix for the induced coloring pulls
back by substituting (a_0, ..., a_{k-1}, x_0, x_1, ...) for its
variables, which again is a reinterpretation of the same codes; the
pullback is re-verified against the original coloring on the full
in-horizon domain.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .colorings import Coloring
from .errors import CutPointMissing, InvalidWord
from .prehomog import CslCertificate
from .words import (
    Word,
    dimension,
    format_word,
    is_prefix_valid,
    is_var_word,
    substitute,
    var_words,
)

__all__ = [
    "encode_word",
    "decode_word",
    "translate",
    "pullback_word",
    "CdrtPullback",
    "pullback_certificate",
]


def encode_word(u: Word, n: int) -> Word:
    """Reinterpret letters as the first k variable slots (empty alphabet)."""
    if not is_var_word(u, n):
        raise InvalidWord(f"{format_word(u)} is not an {n}-variable word")
    return Word(0, u.symbols)


def decode_word(u_hat: Word, k: int, n: int) -> Word:
    """Substitute the first k variables by the letters a_0..a_{k-1}."""
    w = Word(k, u_hat.symbols)
    if dimension(w) > n or not is_var_word(w, dimension(w)):
        raise InvalidWord(
            f"{format_word(u_hat)} does not decode to an {n}-variable word over {k} letters"
        )
    return w


def translate(coloring: Coloring) -> Coloring:
    """Induced coloring over the empty alphabet, dimension k + n.

    The table is keyed by the encoded words; proper (k+n)-variable
    words over the empty alphabet always decode to valid n-variable
    words, so the induced coloring is total on them.
    """
    table = {
        Word(0, w.symbols): c for w, c in coloring.table.items()
    }
    return Coloring(0, coloring.N, coloring.k + coloring.n, coloring.ell, table)


def pullback_word(w_hat: Word, k: int) -> Word:
    """Substitute (a_0..a_{k-1}, x_0, x_1, ...) into a variable-only prefix."""
    if not is_prefix_valid(w_hat):
        raise InvalidWord("pullback needs a prefix-valid variable word")
    w = Word(k, w_hat.symbols)
    if not is_prefix_valid(w):
        raise InvalidWord("pullback broke prefix validity")
    return w


@dataclass(frozen=True)
class CdrtPullback:
    word: Word
    color: int
    checked: tuple[tuple[Word, Word], ...]  # (u, W[u]) over the original domain


def pullback_certificate(
    cert: CslCertificate, coloring: Coloring, depth: Optional[int] = None
) -> CdrtPullback:
    """Pull a certificate for the induced coloring back and re-verify it.

    Every in-horizon pattern u of the original coloring must satisfy
    C(W[u]) == color, where W is the pulled-back prefix.
    """
    w = pullback_word(cert.word, coloring.k)
    if depth is None:
        depth = max((len(u) for u, _ in cert.checked), default=0) - coloring.k
        depth = max(depth, coloring.n)
    checked = []
    if coloring.n == 0:
        from .words import letter_words

        patterns = letter_words(coloring.k, depth)
    else:
        patterns = var_words(coloring.k, depth, dim=coloring.n)
    for u in patterns:
        try:
            img = substitute(w, u, omega=True)
        except CutPointMissing:
            continue
        if img not in coloring:
            continue
        if coloring(img) != cert.color:
            raise InvalidWord(
                f"pullback re-verification failed at {format_word(u)}"
            )
        checked.append((u, img))
    if not checked:
        raise InvalidWord("pullback verified nothing within the horizon")
    return CdrtPullback(w, cert.color, tuple(checked))
