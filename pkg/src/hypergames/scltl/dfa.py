"""Complete DFAs over the powerset alphabet, and the formula compiler.

Words are read over symbols that are *sets* of propositions, encoded
internally as bitmasks over the declared proposition order. Compilation
progresses the formula one symbol at a time: the DFA state is the
residual obligation, a word is accepted when the residual left after
consuming it is discharged by the empty suffix. The result is minimized
(partition refinement) and states renumbered breadth-first, so equal
languages give identical automata.

Finite-word semantics used throughout (the oracle module implements the
same semantics independently): an until needs its witness at a real
position inside the word; next defers to the following suffix, which may
be empty; true holds everywhere, atoms and negated atoms need a real
position.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from ..errors import SizeLimitError, ValidationError
from .formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    FalseF,
    Formula,
    NegAtom,
    Next,
    Or,
    TrueF,
    Until,
    atoms,
    mk_and,
    mk_or,
)

ALPHABET_GUARD = 1 << 16


@dataclass(frozen=True)
class Dfa:
    ap: tuple[str, ...]
    initial: int
    accepting: frozenset[int]
    delta: tuple[tuple[int, ...], ...]  # delta[state][symbol mask] -> state
    sink: int | None = None

    @property
    def n_states(self) -> int:
        return len(self.delta)

    @property
    def n_symbols(self) -> int:
        return 1 << len(self.ap)

    def mask_of(self, symbol: Iterable[str]) -> int:
        m = 0
        for p in symbol:
            try:
                m |= 1 << self.ap.index(p)
            except ValueError:
                raise ValidationError(f"symbol proposition {p!r} outside the alphabet") from None
        return m

    def symbol_of(self, mask: int) -> frozenset[str]:
        return frozenset(p for i, p in enumerate(self.ap) if mask >> i & 1)

    def step(self, state: int, symbol: Iterable[str]) -> int:
        return self.delta[state][self.mask_of(symbol)]

    def accepts(self, word: Sequence[Iterable[str]]) -> bool:
        q = self.initial
        if q in self.accepting:
            return True
        for symbol in word:
            q = self.step(q, symbol)
            if q in self.accepting:
                return True
        return False


def _progress(f: Formula, mask: int, ap: tuple[str, ...]) -> Formula:
    if isinstance(f, (TrueF, FalseF)):
        return f
    if isinstance(f, Atom):
        return TRUE if mask >> ap.index(f.name) & 1 else FALSE
    if isinstance(f, NegAtom):
        return FALSE if mask >> ap.index(f.name) & 1 else TRUE
    if isinstance(f, And):
        return mk_and(*(_progress(a, mask, ap) for a in f.args))
    if isinstance(f, Or):
        return mk_or(*(_progress(a, mask, ap) for a in f.args))
    if isinstance(f, Next):
        return f.sub
    if isinstance(f, Until):
        keep = mk_and(_progress(f.lhs, mask, ap), f)
        return mk_or(_progress(f.rhs, mask, ap), keep)
    raise TypeError(f"unknown formula node {f!r}")


def _empty_suffix_sat(f: Formula) -> bool:
    if isinstance(f, TrueF):
        return True
    if isinstance(f, (FalseF, Atom, NegAtom, Next, Until)):
        return False
    if isinstance(f, And):
        return all(_empty_suffix_sat(a) for a in f.args)
    if isinstance(f, Or):
        return any(_empty_suffix_sat(a) for a in f.args)
    raise TypeError(f"unknown formula node {f!r}")


def compile_formula(f: Formula, ap: Iterable[str]) -> Dfa:
    """Compile to a complete, minimized DFA accepting exactly the finite
    words that satisfy the formula (and with them every extension)."""
    ap = tuple(sorted(set(ap)))
    missing = sorted(atoms(f) - set(ap))
    if missing:
        raise ValidationError(f"formula uses undeclared propositions: {missing}")
    if 1 << len(ap) > ALPHABET_GUARD:
        raise SizeLimitError(
            f"alphabet blow-up: 2^{len(ap)} symbols exceeds the {ALPHABET_GUARD} limit"
        )
    n_symbols = 1 << len(ap)
    index: dict[Formula, int] = {f: 0}
    order: list[Formula] = [f]
    delta: list[tuple[int, ...]] = []
    i = 0
    while i < len(order):
        row = []
        for mask in range(n_symbols):
            g = _progress(order[i], mask, ap)
            if g not in index:
                index[g] = len(order)
                order.append(g)
            row.append(index[g])
        delta.append(tuple(row))
        i += 1
    accepting = frozenset(i for i, g in enumerate(order) if _empty_suffix_sat(g))
    return _minimize(Dfa(ap, 0, accepting, tuple(delta)))


def _minimize(d: Dfa) -> Dfa:
    """Moore partition refinement, then breadth-first renumbering."""
    n = d.n_states
    block = [1 if q in d.accepting else 0 for q in range(n)]
    while True:
        sigs = {}
        new_block = [0] * n
        for q in range(n):
            sig = (block[q], tuple(block[t] for t in d.delta[q]))
            if sig not in sigs:
                sigs[sig] = len(sigs)
            new_block[q] = sigs[sig]
        if new_block == block:
            break
        block = new_block

    # Breadth-first order over blocks from the initial one.
    rep: dict[int, int] = {}  # block -> representative state
    for q in range(n):
        rep.setdefault(block[q], q)
    renum: dict[int, int] = {block[d.initial]: 0}
    queue = [block[d.initial]]
    while queue:
        b = queue.pop(0)
        for mask in range(d.n_symbols):
            t = block[d.delta[rep[b]][mask]]
            if t not in renum:
                renum[t] = len(renum)
                queue.append(t)
    m = len(renum)
    delta = [None] * m
    accepting = set()
    for b, i in renum.items():
        delta[i] = tuple(renum[block[t]] for t in d.delta[rep[b]])
        if rep[b] in d.accepting:
            accepting.add(i)
    sink = None
    for i in range(m):
        if i not in accepting and all(t == i for t in delta[i]):
            sink = i
            break
    return Dfa(d.ap, 0, frozenset(accepting), tuple(delta), sink)


def language_equivalent(d1: Dfa, d2: Dfa) -> bool:
    """Product-emptiness of the symmetric difference."""
    if d1.ap != d2.ap:
        raise ValidationError("language comparison needs a common alphabet")
    seen = {(d1.initial, d2.initial)}
    queue = [(d1.initial, d2.initial)]
    while queue:
        q1, q2 = queue.pop()
        if (q1 in d1.accepting) != (q2 in d2.accepting):
            return False
        for mask in range(d1.n_symbols):
            pair = (d1.delta[q1][mask], d2.delta[q2][mask])
            if pair not in seen:
                seen.add(pair)
                queue.append(pair)
    return True


def dfa_from_table(
    ap: Iterable[str],
    n_states: int,
    initial: int,
    accepting: Iterable[int],
    rows: dict[int, dict[frozenset[str], int]],
) -> Dfa:
    """Build a DFA from explicit symbol rows (test/golden helper)."""
    ap = tuple(sorted(set(ap)))
    n_symbols = 1 << len(ap)
    delta = []
    for q in range(n_states):
        row = []
        for mask in range(n_symbols):
            symbol = frozenset(p for i, p in enumerate(ap) if mask >> i & 1)
            try:
                row.append(rows[q][symbol])
            except KeyError:
                raise ValidationError(f"missing transition for state {q}, symbol {sorted(symbol)}") from None
        delta.append(tuple(row))
    return Dfa(ap, initial, frozenset(accepting), tuple(delta))


# -- guard rendering and export ---------------------------------------------


def _prime_implicants(masks: list[int], width: int) -> list[tuple[int, int]]:
    """Merge minterms into prime implicants; terms are (value, care)."""
    terms = {(m, (1 << width) - 1) for m in masks}
    primes: set[tuple[int, int]] = set()
    while terms:
        merged: set[tuple[int, int]] = set()
        used: set[tuple[int, int]] = set()
        terms_list = sorted(terms)
        for i, (v1, c1) in enumerate(terms_list):
            for v2, c2 in terms_list[i + 1:]:
                if c1 != c2:
                    continue
                diff = (v1 ^ v2) & c1
                if diff and diff & (diff - 1) == 0:  # differ in exactly one care bit
                    merged.add((v1 & ~diff, c1 & ~diff))
                    used.add((v1, c1))
                    used.add((v2, c2))
        primes |= terms - used
        terms = merged
    return sorted(primes)


def guard_text(masks: Iterable[int], ap: Sequence[str]) -> str:
    masks = sorted(set(masks))
    if not masks:
        return "false"
    if len(masks) == 1 << len(ap):
        return "true"
    parts = []
    for value, care in _prime_implicants(masks, len(ap)):
        lits = []
        for i, p in enumerate(ap):
            if care >> i & 1:
                lits.append(p if value >> i & 1 else f"!{p}")
        parts.append(" & ".join(lits) if lits else "true")
    return " | ".join(parts)


def dfa_to_json(d: Dfa) -> str:
    transitions = []
    for q in range(d.n_states):
        by_target: dict[int, list[int]] = {}
        for mask, t in enumerate(d.delta[q]):
            by_target.setdefault(t, []).append(mask)
        for t in sorted(by_target):
            transitions.append(
                {"from": q, "guard": guard_text(by_target[t], d.ap), "to": t}
            )
    doc = {
        "ap": list(d.ap),
        "states": d.n_states,
        "initial": d.initial,
        "accepting": sorted(d.accepting),
        "sink": d.sink,
        "transitions": transitions,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def dfa_to_dot(d: Dfa) -> str:
    lines = ["digraph dfa {", "  rankdir=LR;", '  __init [shape=point, label=""];']
    for q in range(d.n_states):
        shape = "doublecircle" if q in d.accepting else "circle"
        lines.append(f'  q{q} [shape={shape}, label="{q}"];')
    lines.append(f"  __init -> q{d.initial};")
    for q in range(d.n_states):
        by_target: dict[int, list[int]] = {}
        for mask, t in enumerate(d.delta[q]):
            by_target.setdefault(t, []).append(mask)
        for t in sorted(by_target):
            lines.append(f'  q{q} -> q{t} [label="{guard_text(by_target[t], d.ap)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
