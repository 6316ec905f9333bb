"""Two-player turn-based deterministic reachability games.

The arena is the shared data model for every other module: a finite state
set partitioned between the two players, per-state enabled action sets, a
deterministic partial transition function (defined exactly on enabled
pairs), a set of final states that player 1 tries to visit, and an
optional atomic-proposition labeling used by the temporal-logic product.

Arenas are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Mapping, Sequence

from .errors import ValidationError

PROB_TOL = 1e-9


class Player(IntEnum):
    P1 = 1
    P2 = 2


def _player_from_tag(tag: str, where: str) -> Player:
    if tag == "P1":
        return Player.P1
    if tag == "P2":
        return Player.P2
    raise ValidationError(f"{where}: owner must be 'P1' or 'P2', got {tag!r}")


class GameArena:
    """A turn-based deterministic reachability game.

    States and actions are referred to by dense integer ids; the original
    document names are kept for (de)serialization and reporting. The
    transition map of each state is total on that state's enabled actions
    and undefined elsewhere.

    Loaded arenas never contain dead ends (states with no enabled action);
    arenas produced by :func:`restrict_p1_actions` may contain P1 dead
    ends, which the solvers treat as losing for the player to move.
    """

    def __init__(
        self,
        state_names: Sequence[str],
        state_owners: Sequence[Player],
        final: Iterable[int],
        labels: Sequence[Iterable[str]],
        action_names: Sequence[str],
        action_owners: Sequence[Player],
        transitions: Sequence[Mapping[int, int]],
        allow_dead_ends: bool = False,
    ):
        self.state_names = tuple(state_names)
        self.state_owners = tuple(Player(o) for o in state_owners)
        self.final = frozenset(final)
        self.labels = tuple(frozenset(ls) for ls in labels)
        self.action_names = tuple(action_names)
        self.action_owners = tuple(Player(o) for o in action_owners)
        self.transitions = tuple(dict(sorted(t.items())) for t in transitions)
        self._state_index = {n: i for i, n in enumerate(self.state_names)}
        self._action_index = {n: i for i, n in enumerate(self.action_names)}
        self._validate(allow_dead_ends)

    # -- construction / validation ------------------------------------

    def _validate(self, allow_dead_ends: bool) -> None:
        n = len(self.state_names)
        if len(self._state_index) != n:
            raise ValidationError("duplicate state names")
        if len(self._action_index) != len(self.action_names):
            raise ValidationError("duplicate action names")
        if not (len(self.state_owners) == len(self.labels) == len(self.transitions) == n):
            raise ValidationError("inconsistent per-state field lengths")
        for s in self.final:
            if not 0 <= s < n:
                raise ValidationError(f"final set references unknown state id {s}")
        for s, trans in enumerate(self.transitions):
            owner = self.state_owners[s]
            if not trans and not allow_dead_ends:
                raise ValidationError(
                    f"state {self.state_names[s]!r} has an empty enabled set"
                )
            for a, t in trans.items():
                if not 0 <= a < len(self.action_names):
                    raise ValidationError(
                        f"state {self.state_names[s]!r} uses unknown action id {a}"
                    )
                if self.action_owners[a] != owner:
                    raise ValidationError(
                        f"state {self.state_names[s]!r} (owner {owner.name}) enables "
                        f"action {self.action_names[a]!r} owned by the other player"
                    )
                if not 0 <= t < n:
                    raise ValidationError(
                        f"transition ({self.state_names[s]!r}, {self.action_names[a]!r}) "
                        f"targets unknown state id {t}"
                    )

    # -- basic queries --------------------------------------------------

    @property
    def n_states(self) -> int:
        return len(self.state_names)

    def state_id(self, name: str) -> int:
        try:
            return self._state_index[name]
        except KeyError:
            raise ValidationError(f"unknown state {name!r}") from None

    def action_id(self, name: str) -> int:
        try:
            return self._action_index[name]
        except KeyError:
            raise ValidationError(f"unknown action {name!r}") from None

    def owner(self, s: int) -> Player:
        return self.state_owners[s]

    def enabled(self, s: int) -> tuple[int, ...]:
        return tuple(self.transitions[s].keys())

    def successor(self, s: int, a: int) -> int:
        try:
            return self.transitions[s][a]
        except KeyError:
            raise ValidationError(
                f"action {self.action_names[a]!r} is not enabled at state "
                f"{self.state_names[s]!r}"
            ) from None

    def states_of(self, player: Player) -> tuple[int, ...]:
        return tuple(s for s in range(self.n_states) if self.state_owners[s] == player)

    def actions_of(self, player: Player) -> tuple[int, ...]:
        return tuple(a for a in range(len(self.action_names)) if self.action_owners[a] == player)

    def action_names_of(self, player: Player) -> frozenset[str]:
        return frozenset(self.action_names[a] for a in self.actions_of(player))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GameArena):
            return NotImplemented
        return (
            self.state_names == other.state_names
            and self.state_owners == other.state_owners
            and self.final == other.final
            and self.labels == other.labels
            and self.action_names == other.action_names
            and self.action_owners == other.action_owners
            and self.transitions == other.transitions
        )

    def __repr__(self) -> str:
        return (
            f"GameArena(|S|={self.n_states}, |A|={len(self.action_names)}, "
            f"|F|={len(self.final)})"
        )

    # -- serialization ----------------------------------------------------

    def to_document(self) -> dict:
        """Schema-shaped dict; states and actions sorted by name."""
        order = sorted(range(self.n_states), key=lambda s: self.state_names[s])
        states = [
            {
                "name": self.state_names[s],
                "owner": self.state_owners[s].name,
                "final": s in self.final,
                "labels": sorted(self.labels[s]),
            }
            for s in order
        ]
        actions = [
            {"name": self.action_names[a], "owner": self.action_owners[a].name}
            for a in sorted(range(len(self.action_names)), key=lambda a: self.action_names[a])
        ]
        transitions = sorted(
            (
                {
                    "from": self.state_names[s],
                    "action": self.action_names[a],
                    "to": self.state_names[t],
                }
                for s, trans in enumerate(self.transitions)
                for a, t in trans.items()
            ),
            key=lambda e: (e["from"], e["action"]),
        )
        return {"states": states, "actions": actions, "transitions": transitions}

    def to_json(self) -> str:
        return json.dumps(self.to_document(), indent=2, sort_keys=True) + "\n"


def load_arena(text: str, allow_dead_ends: bool = False) -> GameArena:
    """Parse and validate a game document (see the JSON game schema).

    Raises ValidationError naming the offending element on schema
    violations, dangling references, empty enabled sets, or non-owner
    actions.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"game document is not valid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise ValidationError("game document must be a JSON object")
    for key in ("states", "actions", "transitions"):
        if key not in doc or not isinstance(doc[key], list):
            raise ValidationError(f"game document missing array field {key!r}")

    state_names: list[str] = []
    owners: list[Player] = []
    final: list[int] = []
    labels: list[list[str]] = []
    for i, st in enumerate(doc["states"]):
        if not isinstance(st, dict) or "name" not in st or "owner" not in st:
            raise ValidationError(f"states[{i}] must have 'name' and 'owner'")
        name = st["name"]
        if not isinstance(name, str):
            raise ValidationError(f"states[{i}].name must be a string")
        if name in state_names:
            raise ValidationError(f"duplicate state name {name!r}")
        state_names.append(name)
        owners.append(_player_from_tag(st["owner"], f"state {name!r}"))
        if st.get("final", False):
            final.append(i)
        ls = st.get("labels", [])
        if not isinstance(ls, list) or not all(isinstance(x, str) for x in ls):
            raise ValidationError(f"state {name!r}: labels must be an array of strings")
        labels.append(ls)

    action_names: list[str] = []
    action_owners: list[Player] = []
    for i, ac in enumerate(doc["actions"]):
        if not isinstance(ac, dict) or "name" not in ac or "owner" not in ac:
            raise ValidationError(f"actions[{i}] must have 'name' and 'owner'")
        name = ac["name"]
        if name in action_names:
            raise ValidationError(f"duplicate action name {name!r}")
        action_names.append(name)
        action_owners.append(_player_from_tag(ac["owner"], f"action {name!r}"))

    sidx = {n: i for i, n in enumerate(state_names)}
    aidx = {n: i for i, n in enumerate(action_names)}
    transitions: list[dict[int, int]] = [{} for _ in state_names]
    for i, tr in enumerate(doc["transitions"]):
        if not isinstance(tr, dict) or not {"from", "action", "to"} <= tr.keys():
            raise ValidationError(f"transitions[{i}] must have 'from', 'action', 'to'")
        if tr["from"] not in sidx:
            raise ValidationError(f"transitions[{i}]: unknown source state {tr['from']!r}")
        if tr["action"] not in aidx:
            raise ValidationError(f"transitions[{i}]: unknown action {tr['action']!r}")
        if tr["to"] not in sidx:
            raise ValidationError(f"transitions[{i}]: unknown target state {tr['to']!r}")
        s, a, t = sidx[tr["from"]], aidx[tr["action"]], sidx[tr["to"]]
        if a in transitions[s]:
            raise ValidationError(
                f"duplicate transition for ({tr['from']!r}, {tr['action']!r}); "
                "the transition function must be deterministic"
            )
        transitions[s][a] = t

    return GameArena(
        state_names,
        owners,
        final,
        labels,
        action_names,
        action_owners,
        transitions,
        allow_dead_ends=allow_dead_ends,
    )


def restrict_p1_actions(g: GameArena, x: Iterable[str]) -> GameArena:
    """The perceptual game: P1's enabled sets intersected with `x`.

    P2's side is unchanged. P1 states whose intersection is empty become
    dead ends, which the solvers classify as losing for P1.
    """
    xs = frozenset(x)
    keep: set[int] = set()
    for name in xs:
        a = g.action_id(name)
        if g.action_owners[a] != Player.P1:
            raise ValidationError(f"restriction set contains P2 action {name!r}")
        keep.add(a)
    transitions = []
    for s in range(g.n_states):
        if g.state_owners[s] == Player.P1:
            transitions.append({a: t for a, t in g.transitions[s].items() if a in keep})
        else:
            transitions.append(dict(g.transitions[s]))
    return GameArena(
        g.state_names,
        g.state_owners,
        g.final,
        g.labels,
        g.action_names,
        g.action_owners,
        transitions,
        allow_dead_ends=True,
    )


def occurrence_check(run: Sequence[int], target: Iterable[int]) -> bool:
    """True iff any element of the (nonempty) run lies in `target`."""
    if len(run) == 0:
        raise ValidationError("occurrence check requires a nonempty run")
    tset = frozenset(target)
    return any(s in tset for s in run)


@dataclass(frozen=True)
class Strategy:
    """A memoryless strategy: owned states mapped to action distributions.

    `kind` is either "deterministic" (singleton supports) or
    "randomized-support" (uniform over the stored support). Probabilities
    are stored explicitly either way so simulation code has one sampling
    path.
    """

    player: Player
    kind: str
    moves: Mapping[int, Mapping[int, float]]

    def __post_init__(self):
        if self.kind not in ("deterministic", "randomized-support"):
            raise ValidationError(f"unknown strategy kind {self.kind!r}")
        for s, dist in self.moves.items():
            if not dist:
                raise ValidationError(f"empty distribution at state id {s}")
            total = sum(dist.values())
            if any(p < 0 for p in dist.values()) or abs(total - 1.0) > PROB_TOL:
                raise ValidationError(
                    f"probabilities at state id {s} must be nonnegative and sum to 1"
                )
            if self.kind == "deterministic" and len(dist) != 1:
                raise ValidationError(f"deterministic strategy has support >1 at {s}")

    def defined_at(self, s: int) -> bool:
        return s in self.moves

    def support(self, s: int) -> tuple[int, ...]:
        return tuple(sorted(self.distribution(s).keys()))

    def distribution(self, s: int) -> Mapping[int, float]:
        if s not in self.moves:
            raise ValidationError(f"strategy is undefined at state id {s}")
        return self.moves[s]

    def action_at(self, s: int) -> int:
        dist = self.distribution(s)
        if len(dist) != 1:
            raise ValidationError(f"state id {s} has a non-singleton support")
        return next(iter(dist))

    def validate_against(self, g: GameArena) -> None:
        """Check ownership and enabledness of every support action."""
        for s, dist in self.moves.items():
            if g.state_owners[s] != self.player:
                raise ValidationError(
                    f"strategy for {self.player.name} defined at foreign state "
                    f"{g.state_names[s]!r}"
                )
            for a in dist:
                if a not in g.transitions[s]:
                    raise ValidationError(
                        f"strategy uses action {g.action_names[a]!r} not enabled at "
                        f"{g.state_names[s]!r}"
                    )
                if g.action_owners[a] != self.player:
                    raise ValidationError(
                        f"strategy uses action {g.action_names[a]!r} owned by the opponent"
                    )


def deterministic_strategy(player: Player, choices: Mapping[int, int]) -> Strategy:
    return Strategy(player, "deterministic", {s: {a: 1.0} for s, a in choices.items()})


def uniform_strategy(player: Player, supports: Mapping[int, Iterable[int]]) -> Strategy:
    moves = {}
    for s, acts in supports.items():
        acts = tuple(acts)
        if not acts:
            raise ValidationError(f"empty support at state id {s}")
        moves[s] = {a: 1.0 / len(acts) for a in acts}
    return Strategy(player, "randomized-support", moves)


def strategy_to_json(strategy: Strategy, g: GameArena) -> str:
    """Strategy file: state name -> action name (deterministic entries)
    or array of action names (uniform support)."""
    doc = {}
    for s in sorted(strategy.moves, key=lambda s: g.state_names[s]):
        support = strategy.support(s)
        if len(support) == 1:
            doc[g.state_names[s]] = g.action_names[support[0]]
        else:
            doc[g.state_names[s]] = sorted(g.action_names[a] for a in support)
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def strategy_from_json(text: str, g: GameArena, player: Player) -> Strategy:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"strategy file is not valid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise ValidationError("strategy file must be a JSON object")
    supports: dict[int, list[int]] = {}
    for name, entry in doc.items():
        s = g.state_id(name)
        acts = [entry] if isinstance(entry, str) else entry
        if not isinstance(acts, list) or not acts:
            raise ValidationError(f"strategy entry for {name!r} must name actions")
        supports[s] = [g.action_id(a) for a in acts]
    kind_det = all(len(v) == 1 for v in supports.values())
    strategy = (
        deterministic_strategy(player, {s: v[0] for s, v in supports.items()})
        if kind_det
        else uniform_strategy(player, supports)
    )
    strategy.validate_against(g)
    return strategy
