"""Winning-region computation for reachability games.

The solver iterates the controllable-predecessor operators from the final
states until a fixed point: player 1 states enter when some enabled
action reaches the region, player 2 states when every enabled action
does. In turn-based deterministic games this one region is both the sure
and the almost-sure winning region of player 1; the complement is player
2's. Ranks record the round at which each state entered and drive
strategy extraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from . import _kernels
from .arena import GameArena, Player, Strategy, deterministic_strategy, uniform_strategy
from .errors import ValidationError


@dataclass(frozen=True)
class Region:
    """A winning region with per-state entry ranks.

    rank[s] is the fixed-point round at which s entered (0 for the seed
    states); members == rank.keys().
    """

    members: frozenset[int]
    rank: Mapping[int, int]

    def __post_init__(self):
        if self.members != frozenset(self.rank):
            raise ValidationError("region members must equal the rank domain")


def pre1(g: GameArena, u: Iterable[int]) -> frozenset[int]:
    """P1 states with some enabled action into `u`."""
    uset = frozenset(u)
    return frozenset(
        s
        for s in range(g.n_states)
        if g.state_owners[s] == Player.P1
        and any(t in uset for t in g.transitions[s].values())
    )


def pre2(g: GameArena, u: Iterable[int]) -> frozenset[int]:
    """P2 states whose every enabled action stays in `u`.

    A P2 dead end qualifies vacuously; the solver therefore classifies a
    stuck P2 as losing (the player to move must have a move).
    """
    uset = frozenset(u)
    return frozenset(
        s
        for s in range(g.n_states)
        if g.state_owners[s] == Player.P2
        and all(t in uset for t in g.transitions[s].values())
    )


def _csr(g: GameArena):
    exists = np.array(
        [1 if o == Player.P1 else 0 for o in g.state_owners], dtype=np.uint8
    )
    succ_lists = [sorted(set(g.transitions[s].values())) for s in range(g.n_states)]
    indptr, succ = _kernels.csr_from_lists(succ_lists)
    return exists, indptr, succ


def solve(g: GameArena, backend: str | None = None) -> tuple[Region, frozenset[int]]:
    """Compute (win1 region with ranks, win2 states)."""
    exists, indptr, succ = _csr(g)
    init = _kernels.mask_from_ids(g.n_states, g.final)
    ranks = _kernels.attractor_ranks(exists, indptr, succ, init, backend=backend)
    rank = {s: int(ranks[s]) for s in range(g.n_states) if ranks[s] >= 0}
    win1 = Region(frozenset(rank), rank)
    win2 = frozenset(s for s in range(g.n_states) if s not in rank)
    return win1, win2


def sure_strategy(g: GameArena, win1: Region) -> Strategy:
    """Deterministic rank-decreasing P1 strategy on win1's P1 states.

    Undefined on final states (no move needed there) and everywhere
    outside win1; querying such states raises. Ties between
    rank-decreasing actions go to the smallest action id so outputs are
    reproducible.
    """
    choices: dict[int, int] = {}
    for s in sorted(win1.members):
        if g.state_owners[s] != Player.P1 or s in g.final:
            continue
        my_rank = win1.rank[s]
        best = None
        for a, t in g.transitions[s].items():
            if t in win1.members and win1.rank[t] < my_rank:
                if best is None or a < best:
                    best = a
        if best is None:
            raise ValidationError(
                f"no rank-decreasing action at {g.state_names[s]!r}; "
                "the region does not come from solve() on this arena"
            )
        choices[s] = best
    return deterministic_strategy(Player.P1, choices)


def permissive_strategy(g: GameArena, win2: Iterable[int]) -> Strategy:
    """P2 strategy whose support is every action that stays inside win2."""
    w2 = frozenset(win2)
    supports: dict[int, list[int]] = {}
    for s in sorted(w2):
        if g.state_owners[s] != Player.P2:
            continue
        support = [a for a, t in g.transitions[s].items() if t in w2]
        if not support:
            raise ValidationError(
                f"P2 state {g.state_names[s]!r} in win2 has no safe action; "
                "the region does not come from solve() on this arena"
            )
        supports[s] = support
    return uniform_strategy(Player.P2, supports)


def permissive_support(g: GameArena, win2: Iterable[int], s: int) -> frozenset[int]:
    """The safe-action set of one P2 state, for callers that only need it."""
    w2 = frozenset(win2)
    return frozenset(a for a, t in g.transitions[s].items() if t in w2)
