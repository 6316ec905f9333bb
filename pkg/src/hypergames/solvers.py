"""Deceptive sure and almost-sure winning solvers over hypergames.

Both solvers quantify P2's moves over his perceptually permissive action
sets rather than everything he could physically do: a rational P2 only
plays moves that look safe in the game he currently believes he is
playing, and that belief is the perception coordinate of the product
state.

The sure solver iterates the same attractor shape as the plain game
solver, seeded with the lift of P1's true winning region. The
almost-sure solver runs a nested fixed point: the outer round first
collects the states P1 cannot be pulled out of the current losing zone
from (a shrinking all-quantified core), then grows the winning zone to
everything that can stay clear of that core. The extracted strategy
descends the outer-round ranks; where a state has no one-step move into
the previous zone it stays inside its own zone and waits for the
positive-probability mistakes Assumption-style full-support play forces
out of P2.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from . import _kernels
from .arena import GameArena, Player, Strategy, deterministic_strategy, uniform_strategy
from .attractor import Region, solve, sure_strategy
from .errors import ValidationError
from .hypergame import Hypergame

DSW = "DSW"
DASW = "DASW"


@dataclass(frozen=True)
class OuterStep:
    """One outer round of the almost-sure solver, kept for diagnostics."""

    c: frozenset[int]
    safe2_rounds: int
    z: frozenset[int]
    safe1_rounds: int


@dataclass(frozen=True)
class DeceptiveSolveResult:
    kind: str
    region: Region
    strategy: Strategy
    z_chain: tuple[frozenset[int], ...]
    trace: tuple[OuterStep, ...] = ()


@dataclass(frozen=True)
class VodReport:
    """Deception gain: the share of P2's true winning states that the
    deceptive region's game-state projection claws back."""

    win1_true: int
    win2_true: int
    deceptive_projection: int
    vod: float

    @property
    def as_fraction(self) -> Fraction:
        if self.win2_true == 0:
            return Fraction(0)
        return Fraction(self.deceptive_projection - self.win1_true, self.win2_true)


def base_solution(h: Hypergame) -> tuple[Region, frozenset[int]]:
    """Winning partition of the true game, cached on the hypergame."""
    cached = getattr(h, "_base_solution", None)
    if cached is None:
        cached = solve(h.base)
        h._base_solution = cached
    return cached


def _hyper_graph(h: Hypergame):
    """CSR successor structure: P1 states over all enabled moves, P2
    states over their permissive sets only. Final states are made
    absorbing: a play is won on visiting them, so whatever the arena says
    happens afterwards must not leak into the stay-inside fixed points
    (final states need not be absorbing in the arena itself)."""
    g = h.arena
    succ_lists = []
    for v in range(g.n_states):
        if v in g.final:
            succ_lists.append([v])
        elif g.state_owners[v] == Player.P1:
            succ_lists.append(sorted(set(g.transitions[v].values())))
        else:
            succ_lists.append(sorted({g.transitions[v][a] for a in h.perm[v]}))
    exists_p1 = np.array(
        [1 if g.state_owners[v] == Player.P1 else 0 for v in range(g.n_states)],
        dtype=np.uint8,
    )
    indptr, succ = _kernels.csr_from_lists(succ_lists)
    return exists_p1, indptr, succ


def _z0_mask(h: Hypergame) -> np.ndarray:
    win1, _ = base_solution(h)
    mask = np.zeros(h.n_states, dtype=np.uint8)
    for v in range(h.n_states):
        if h.base_state(v) in win1.members:
            mask[v] = 1
    return mask


def _glued_sure_choices(h: Hypergame, z0_states: Sequence[int]) -> dict[int, int]:
    """Lift the true game's sure strategy onto rank-0 product states."""
    win1, _ = base_solution(h)
    base_sure = sure_strategy(h.base, win1)
    choices = {}
    for v in z0_states:
        s = h.base_state(v)
        if h.arena.state_owners[v] != Player.P1 or s in h.base.final:
            continue
        choices[v] = base_sure.action_at(s)
    return choices


def dsw(h: Hypergame, backend: str | None = None) -> DeceptiveSolveResult:
    """Deceptive sure winning region and strategy.

    Least fixed point from the lifted true winning region: P1 states join
    when some enabled move enters, P2 states when every perceptually
    permissive move does. The strategy decreases rank outside the seed
    and plays the lifted true sure strategy inside it.
    """
    exists_p1, indptr, succ = _hyper_graph(h)
    init = _z0_mask(h)
    ranks = _kernels.attractor_ranks(exists_p1, indptr, succ, init, backend=backend)
    rank = {v: int(ranks[v]) for v in range(h.n_states) if ranks[v] >= 0}
    region = Region(frozenset(rank), rank)

    z_chain = _chain_from_ranks(rank)
    g = h.arena
    choices = _glued_sure_choices(h, [v for v, k in rank.items() if k == 0])
    for v, k in rank.items():
        if k == 0 or g.state_owners[v] != Player.P1:
            continue
        best = None
        for a, t in g.transitions[v].items():
            if t in rank and rank[t] < k and (best is None or a < best):
                best = a
        if best is None:
            raise ValidationError("rank-decreasing move missing; solver invariant broken")
        choices[v] = best
    return DeceptiveSolveResult(
        DSW, region, deterministic_strategy(Player.P1, choices), z_chain
    )


def dasw(h: Hypergame, backend: str | None = None) -> DeceptiveSolveResult:
    """Deceptive almost-sure winning region and strategy.

    Outer round k: C_k is the greatest subset of the complement of Z_k
    that neither P1 (all moves) nor permissive P2 (all permissive moves)
    can leave; Z_{k+1} is the greatest subset of the complement of C_k
    where P1 can stay (some move) and permissive P2 must stay (all
    permissive moves). Stops when the Z chain stalls.
    """
    exists_p1, indptr, succ = _hyper_graph(h)
    all_forall = np.zeros(h.n_states, dtype=np.uint8)
    z_mask = _z0_mask(h)
    rank = {v: 0 for v in range(h.n_states) if z_mask[v]}
    z_chain = [frozenset(rank)]
    trace: list[OuterStep] = []
    k = 0
    while True:
        k += 1
        c_mask, rounds2 = _kernels.safe_region(
            all_forall, indptr, succ, 1 - z_mask, backend=backend
        )
        znew_mask, rounds1 = _kernels.safe_region(
            exists_p1, indptr, succ, 1 - c_mask, backend=backend
        )
        znew = frozenset(int(v) for v in np.flatnonzero(znew_mask))
        trace.append(
            OuterStep(
                frozenset(int(v) for v in np.flatnonzero(c_mask)),
                rounds2,
                znew,
                rounds1,
            )
        )
        if not z_chain[-1] <= znew:
            raise ValidationError("almost-sure zone chain is not monotone; invariant broken")
        if znew == z_chain[-1]:
            break
        for v in znew - z_chain[-1]:
            rank[v] = k
        z_chain.append(znew)
        z_mask = znew_mask

    region = Region(frozenset(rank), rank)
    g = h.arena
    supports: dict[int, list[int]] = {}
    for v, kk in rank.items():
        if kk == 0 or g.state_owners[v] != Player.P1:
            continue
        prev, cur = z_chain[kk - 1], z_chain[kk]
        into_prev = [a for a, t in g.transitions[v].items() if t in prev]
        support = into_prev or [a for a, t in g.transitions[v].items() if t in cur]
        if not support:
            raise ValidationError("stuck state in almost-sure region; invariant broken")
        supports[v] = support
    moves: dict[int, dict[int, float]] = {
        v: {a: 1.0 / len(acts) for a in acts} for v, acts in supports.items()
    }
    for v, a in _glued_sure_choices(h, [v for v, kk in rank.items() if kk == 0]).items():
        moves[v] = {a: 1.0}
    strategy = Strategy(Player.P1, "randomized-support", moves)
    return DeceptiveSolveResult(DASW, region, strategy, tuple(z_chain), tuple(trace))


def _chain_from_ranks(rank: Mapping[int, int]) -> tuple[frozenset[int], ...]:
    if not rank:
        return (frozenset(),)
    chain = []
    top = max(rank.values())
    for k in range(top + 1):
        chain.append(frozenset(v for v, r in rank.items() if r <= k))
    return tuple(chain)


def vod(h: Hypergame, result: DeceptiveSolveResult) -> VodReport:
    """Value of deception for a solved hypergame."""
    win1, win2 = base_solution(h)
    projection = {h.base_state(v) for v in result.region.members}
    win1_true, win2_true = len(win1.members), len(win2)
    frac = (
        Fraction(0)
        if win2_true == 0
        else Fraction(len(projection) - win1_true, win2_true)
    )
    if not 0 <= frac <= 1:
        raise ValidationError(
            "value of deception outside [0, 1]; the hypergame restriction "
            "does not cover the true game's states"
        )
    return VodReport(win1_true, win2_true, len(projection), float(frac))


def region_to_json(region: Region, g: GameArena) -> str:
    entries = [
        {"state": g.state_names[v], "rank": region.rank[v]}
        for v in sorted(region.members, key=lambda v: g.state_names[v])
    ]
    return json.dumps(entries, indent=2, sort_keys=True) + "\n"


def region_from_json(text: str, g: GameArena) -> Region:
    try:
        entries = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"region file is not valid JSON: {e}") from None
    if not isinstance(entries, list):
        raise ValidationError("region file must be a JSON array")
    rank = {}
    for e in entries:
        if not isinstance(e, dict) or "state" not in e or "rank" not in e:
            raise ValidationError("region entries need 'state' and 'rank'")
        rank[g.state_id(e["state"])] = int(e["rank"])
    return Region(frozenset(rank), rank)
