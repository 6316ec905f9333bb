"""Co-safe LTL formulas: syntax tree, simplifying constructors, parser.

The fragment: true, false, atoms, negated atoms (positive normal form),
conjunction, disjunction, next, until; "eventually p" is parsed straight
into (true U p). Concrete syntax and precedence, loosest to tightest:
`|`, `&`, `U` (right-associative), `X`/`F`, `!`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from ..errors import ValidationError


class Formula:
    """Base class; subclasses are frozen and hashable."""

    def __str__(self) -> str:  # pragma: no cover - overridden
        raise NotImplementedError


@dataclass(frozen=True)
class TrueF(Formula):
    def __str__(self):
        return "true"


@dataclass(frozen=True)
class FalseF(Formula):
    def __str__(self):
        return "false"


@dataclass(frozen=True)
class Atom(Formula):
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class NegAtom(Formula):
    name: str

    def __str__(self):
        return f"!{self.name}"


@dataclass(frozen=True)
class And(Formula):
    args: tuple[Formula, ...]

    def __str__(self):
        return " & ".join(_wrap(a, And) for a in self.args)


@dataclass(frozen=True)
class Or(Formula):
    args: tuple[Formula, ...]

    def __str__(self):
        return " | ".join(_wrap(a, Or) for a in self.args)


@dataclass(frozen=True)
class Next(Formula):
    sub: Formula

    def __str__(self):
        return f"X {_wrap(self.sub, Next)}"


@dataclass(frozen=True)
class Until(Formula):
    lhs: Formula
    rhs: Formula

    def __str__(self):
        return f"({self.lhs} U {self.rhs})"


TRUE = TrueF()
FALSE = FalseF()


def _wrap(f: Formula, ctx) -> str:
    if isinstance(f, (And, Or, Until)) and not isinstance(f, ctx):
        return f"({f})"
    return str(f)


def _key(f: Formula) -> str:
    return repr(f)


def mk_and(*args: Formula) -> Formula:
    flat: list[Formula] = []
    for a in args:
        if isinstance(a, FalseF):
            return FALSE
        if isinstance(a, TrueF):
            continue
        flat.extend(a.args if isinstance(a, And) else (a,))
    uniq = sorted(set(flat), key=_key)
    if any(isinstance(a, FalseF) for a in uniq):
        return FALSE
    if not uniq:
        return TRUE
    if len(uniq) == 1:
        return uniq[0]
    return And(tuple(uniq))


def mk_or(*args: Formula) -> Formula:
    flat: list[Formula] = []
    for a in args:
        if isinstance(a, TrueF):
            return TRUE
        if isinstance(a, FalseF):
            continue
        flat.extend(a.args if isinstance(a, Or) else (a,))
    uniq = sorted(set(flat), key=_key)
    if any(isinstance(a, TrueF) for a in uniq):
        return TRUE
    if not uniq:
        return FALSE
    if len(uniq) == 1:
        return uniq[0]
    return Or(tuple(uniq))


def mk_next(f: Formula) -> Formula:
    return Next(f)


def mk_until(lhs: Formula, rhs: Formula) -> Formula:
    return Until(lhs, rhs)


def eventually(f: Formula) -> Formula:
    return Until(TRUE, f)


def atoms(f: Formula) -> frozenset[str]:
    if isinstance(f, (Atom, NegAtom)):
        return frozenset({f.name})
    if isinstance(f, (And, Or)):
        out: frozenset[str] = frozenset()
        for a in f.args:
            out |= atoms(a)
        return out
    if isinstance(f, Next):
        return atoms(f.sub)
    if isinstance(f, Until):
        return atoms(f.lhs) | atoms(f.rhs)
    return frozenset()


# -- parser ----------------------------------------------------------------

_RESERVED = {"true", "false", "X", "F", "U"}


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.items: list[tuple[str, str, int]] = []  # (kind, value, pos)
        i, n = 0, len(text)
        while i < n:
            c = text[i]
            if c.isspace():
                i += 1
                continue
            if c in "!&|()":
                self.items.append((c, c, i))
                i += 1
                continue
            if c.isalpha() or c == "_":
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                word = text[i:j]
                kind = word if word in _RESERVED else "ident"
                self.items.append((kind, word, i))
                i = j
                continue
            raise ValidationError(f"formula syntax error at position {i}: {c!r}")
        self.items.append(("eof", "", n))
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        return self.items[self.pos]

    def take(self, kind: str | None = None) -> tuple[str, str, int]:
        tok = self.items[self.pos]
        if kind is not None and tok[0] != kind:
            raise ValidationError(
                f"formula syntax error at position {tok[2]}: expected {kind!r}, "
                f"found {tok[1] or 'end of input'!r}"
            )
        self.pos += 1
        return tok


def parse(text: str, ap: Iterable[str] | None = None) -> Formula:
    """Parse a formula; every atom must be a declared proposition when
    `ap` is given. Negation applies to atoms only."""
    toks = _Tokens(text)
    f = _parse_or(toks)
    tok = toks.peek()
    if tok[0] != "eof":
        raise ValidationError(
            f"formula syntax error at position {tok[2]}: unexpected {tok[1]!r}"
        )
    if ap is not None:
        declared = frozenset(ap)
        undeclared = sorted(atoms(f) - declared)
        if undeclared:
            raise ValidationError(f"undeclared propositions: {undeclared}")
    return f


def _parse_or(toks: _Tokens) -> Formula:
    parts = [_parse_and(toks)]
    while toks.peek()[0] == "|":
        toks.take()
        parts.append(_parse_and(toks))
    return mk_or(*parts) if len(parts) > 1 else parts[0]


def _parse_and(toks: _Tokens) -> Formula:
    parts = [_parse_until(toks)]
    while toks.peek()[0] == "&":
        toks.take()
        parts.append(_parse_until(toks))
    return mk_and(*parts) if len(parts) > 1 else parts[0]


def _parse_until(toks: _Tokens) -> Formula:
    lhs = _parse_unary(toks)
    if toks.peek()[0] == "U":
        toks.take()
        return mk_until(lhs, _parse_until(toks))
    return lhs


def _parse_unary(toks: _Tokens) -> Formula:
    kind, _, pos = toks.peek()
    if kind == "!":
        toks.take()
        operand = _parse_unary(toks)
        if not isinstance(operand, Atom):
            raise ValidationError(
                f"negation at position {pos} applies to a compound subformula; "
                "only atoms may be negated"
            )
        return NegAtom(operand.name)
    if kind == "X":
        toks.take()
        return mk_next(_parse_unary(toks))
    if kind == "F":
        toks.take()
        return eventually(_parse_unary(toks))
    return _parse_primary(toks)


def _parse_primary(toks: _Tokens) -> Formula:
    kind, value, pos = toks.take()
    if kind == "true":
        return TRUE
    if kind == "false":
        return FALSE
    if kind == "ident":
        return Atom(value)
    if kind == "(":
        f = _parse_or(toks)
        toks.take(")")
        return f
    raise ValidationError(
        f"formula syntax error at position {pos}: unexpected {value or 'end of input'!r}"
    )
