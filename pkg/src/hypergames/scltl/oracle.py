"""Brute-force finite-word checker, independent of the compiler.

Evaluates satisfaction by direct recursion over word positions (the
compiler works by formula progression instead; the two stay separate so
each can catch the other's mistakes). Same semantics as the compiler's
docstring states: untils need a witness position inside the word, next
moves to the following suffix which may be empty, atoms need a real
position, true holds everywhere.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from ..errors import ValidationError
from .formula import And, Atom, FalseF, Formula, NegAtom, Next, Or, TrueF, Until

DEFAULT_WORD_BOUND = 8


def semantic_oracle(
    f: Formula,
    word: Sequence[Iterable[str]],
    ap: Iterable[str],
    max_len: int = DEFAULT_WORD_BOUND,
) -> bool:
    """Decide whether the finite word satisfies the formula."""
    if len(word) > max_len:
        raise ValidationError(f"oracle word bound exceeded: {len(word)} > {max_len}")
    declared = frozenset(ap)
    symbols = []
    for i, symbol in enumerate(word):
        symbol = frozenset(symbol)
        outside = sorted(symbol - declared)
        if outside:
            raise ValidationError(f"word position {i} uses propositions outside the alphabet: {outside}")
        symbols.append(symbol)
    return _eval(f, symbols, 0)


def _eval(f: Formula, w: list[frozenset[str]], i: int) -> bool:
    past_end = i >= len(w)
    if isinstance(f, TrueF):
        return True
    if isinstance(f, FalseF):
        return False
    if isinstance(f, Atom):
        return not past_end and f.name in w[i]
    if isinstance(f, NegAtom):
        return not past_end and f.name not in w[i]
    if isinstance(f, And):
        return all(_eval(a, w, i) for a in f.args)
    if isinstance(f, Or):
        return any(_eval(a, w, i) for a in f.args)
    if isinstance(f, Next):
        return not past_end and _eval(f.sub, w, i + 1)
    if isinstance(f, Until):
        for j in range(i, len(w)):
            if _eval(f.rhs, w, j) and all(_eval(f.lhs, w, k) for k in range(i, j)):
                return True
        return False
    raise TypeError(f"unknown formula node {f!r}")
