"""Product of a labeled game transition system with a specification DFA.

The product state pairs a transition-system state with a DFA state; a
move lands on (s', q') where q' reads the *successor's* label set, and
the designated entry state additionally consumes the initial state's
label (a play starting on a labeled cell registers it). Final states are
those whose DFA component accepts.
"""

from __future__ import annotations

from ..arena import GameArena
from ..errors import ValidationError
from .dfa import Dfa

PRODUCT_SEP = "#q"


def product_state_name(base: str, q: int) -> str:
    return f"{base}{PRODUCT_SEP}{q}"


def _visible_mask(d: Dfa, labels: frozenset[str]) -> int:
    return d.mask_of(labels & set(d.ap))


def entry_state_name(ts: GameArena, d: Dfa, s0: str) -> str:
    """Entry product state for a designated initial TS state."""
    s = ts.state_id(s0)
    q = d.delta[d.initial][_visible_mask(d, ts.labels[s])]
    return product_state_name(s0, q)


def product(ts: GameArena, d: Dfa, initial: str | None = None) -> GameArena:
    """Full product, or the part reachable from the entry state of
    `initial` when given."""
    vocab = frozenset().union(*ts.labels) if ts.labels else frozenset()
    missing = sorted(set(d.ap) - vocab)
    if missing:
        raise ValidationError(
            f"DFA propositions never labeled in the transition system: {missing}"
        )
    label_mask = [_visible_mask(d, ts.labels[s]) for s in range(ts.n_states)]

    if initial is None:
        pairs = [(s, q) for s in range(ts.n_states) for q in range(d.n_states)]
    else:
        s0 = ts.state_id(initial)
        start = (s0, d.delta[d.initial][label_mask[s0]])
        seen = {start}
        queue = [start]
        while queue:
            s, q = queue.pop(0)
            for a, t in ts.transitions[s].items():
                nxt = (t, d.delta[q][label_mask[t]])
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        pairs = sorted(seen)

    index = {pair: i for i, pair in enumerate(pairs)}
    names, owners, finals, labels, transitions = [], [], [], [], []
    for i, (s, q) in enumerate(pairs):
        names.append(product_state_name(ts.state_names[s], q))
        owners.append(ts.state_owners[s])
        if q in d.accepting:
            finals.append(i)
        labels.append(ts.labels[s])
        trans = {}
        for a, t in ts.transitions[s].items():
            key = (t, d.delta[q][label_mask[t]])
            if key in index:
                trans[a] = index[key]
        transitions.append(trans)
    return GameArena(
        names,
        owners,
        finals,
        labels,
        ts.action_names,
        ts.action_owners,
        transitions,
        allow_dead_ends=True,
    )
