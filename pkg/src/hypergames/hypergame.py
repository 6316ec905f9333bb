"""Synchronous product of the true game with an inference graph.

A product state pairs a game state with P2's current perception vertex.
P1's moves are enabled exactly as in the true game (she knows her own
action set); each move advances the perception vertex through the
inference graph, while P2's moves leave it unchanged. Final states are
the lifts of the game's final states.

At build time every perception vertex's perceptual game is solved once,
and each P2 product state is annotated with its perceptually permissive
action set: the moves that keep the play inside P2's *perceived* winning
region. P2 states whose game state is outside that perceived region get
all their enabled actions (a P2 who believes he has already lost is
unconstrained); the solvers' results provably do not depend on this
choice, and the test suite checks that.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .arena import GameArena, Player, restrict_p1_actions
from .attractor import solve
from .errors import ValidationError
from .perception import InferenceGraph

PRODUCT_SEP = "@"


class Hypergame:
    """Product arena plus the bookkeeping the deception solvers need."""

    def __init__(
        self,
        arena: GameArena,
        base: GameArena,
        igraph: InferenceGraph,
        projection: tuple[tuple[int, int], ...],
        perm: tuple[tuple[int, ...], ...],
        perceived_win2: Mapping[int, frozenset[int]],
    ):
        self.arena = arena
        self.base = base
        self.igraph = igraph
        self.projection = projection
        self.perm = perm
        self.perceived_win2 = dict(perceived_win2)
        self._index = {pair: i for i, pair in enumerate(projection)}

    @property
    def n_states(self) -> int:
        return self.arena.n_states

    def product_id(self, base_state: int, vertex: int) -> int:
        try:
            return self._index[(base_state, vertex)]
        except KeyError:
            raise ValidationError(
                f"product state ({self.base.state_names[base_state]!r}, "
                f"{self.igraph.names[vertex]!r}) is not in the hypergame"
            ) from None

    def product_id_by_names(self, name: str) -> int:
        return self.arena.state_id(name)

    def base_state(self, v: int) -> int:
        return self.projection[v][0]

    def vertex(self, v: int) -> int:
        return self.projection[v][1]


def product_state_name(base_name: str, vertex_name: str) -> str:
    return f"{base_name}{PRODUCT_SEP}{vertex_name}"


def build(
    g: GameArena,
    ig: InferenceGraph,
    initial: Iterable[tuple[int, int]] | None = None,
    unconstrained_perm: str = "all-enabled",
) -> Hypergame:
    """Build the product, optionally restricted to the reachable part.

    `initial`, when given, is a set of (game state id, inference vertex)
    pairs; the product then contains exactly the states reachable from
    them. `unconstrained_perm` picks the permissive-set convention for P2
    states outside their perceived winning region ("all-enabled" or
    "empty"); it exists so tests can demonstrate the solvers are
    insensitive to it.
    """
    if unconstrained_perm not in ("all-enabled", "empty"):
        raise ValidationError(f"unknown perm convention {unconstrained_perm!r}")
    p1_names = g.action_names_of(Player.P1)
    if frozenset(ig.actions) != p1_names:
        raise ValidationError(
            "inference graph is not over this game's P1 action set"
        )

    # One attractor solve per perception vertex.
    perceived_win2: dict[int, frozenset[int]] = {}
    for vid, x in enumerate(ig.perceptions):
        _, win2x = solve(restrict_p1_actions(g, x))
        perceived_win2[vid] = win2x

    if initial is None:
        pairs = [(s, v) for s in range(g.n_states) for v in range(len(ig))]
    else:
        seeds = sorted(set(initial))
        for s, v in seeds:
            if not 0 <= s < g.n_states:
                raise ValidationError(f"initial pair references unknown state id {s}")
            if not 0 <= v < len(ig):
                raise ValidationError(f"initial pair references unknown vertex id {v}")
        seen = set(seeds)
        queue = list(seeds)
        while queue:
            s, v = queue.pop(0)
            for a in g.enabled(s):
                t = g.transitions[s][a]
                w = ig.step(v, g.action_names[a])
                if (t, w) not in seen:
                    seen.add((t, w))
                    queue.append((t, w))
        pairs = sorted(seen)

    index = {pair: i for i, pair in enumerate(pairs)}
    names, owners, finals, labels, transitions, perm = [], [], [], [], [], []
    for i, (s, v) in enumerate(pairs):
        names.append(product_state_name(g.state_names[s], ig.names[v]))
        owners.append(g.state_owners[s])
        if s in g.final:
            finals.append(i)
        labels.append(g.labels[s])
        trans = {}
        for a, t in g.transitions[s].items():
            w = ig.step(v, g.action_names[a])
            if (t, w) in index:  # always true for full or closed-reachable builds
                trans[a] = index[(t, w)]
        transitions.append(trans)
        if g.state_owners[s] == Player.P2:
            win2x = perceived_win2[v]
            if s in win2x:
                support = tuple(
                    sorted(a for a, t in g.transitions[s].items() if t in win2x)
                )
            elif unconstrained_perm == "all-enabled":
                support = g.enabled(s)
            else:
                support = ()
            perm.append(support)
        else:
            perm.append(())

    arena = GameArena(
        names,
        owners,
        finals,
        labels,
        g.action_names,
        g.action_owners,
        transitions,
        allow_dead_ends=True,
    )
    return Hypergame(arena, g, ig, tuple(pairs), tuple(perm), perceived_win2)


def project_run(h: Hypergame, run: Iterable[int]) -> list[int]:
    """Componentwise projection of a product run onto game states."""
    return [h.base_state(v) for v in run]


def hypergame_dot(
    h: Hypergame,
    dsw: Iterable[int] | None = None,
    dasw: Iterable[int] | None = None,
) -> str:
    """Graphviz export; blue = deceptive sure, green = almost-sure only,
    red = neither (colors only painted when regions are supplied)."""
    dsw = frozenset(dsw) if dsw is not None else None
    dasw = frozenset(dasw) if dasw is not None else None
    g = h.arena
    lines = ["digraph hypergame {", "  rankdir=LR;"]
    order = sorted(range(g.n_states), key=lambda v: g.state_names[v])
    for v in order:
        shape = "ellipse" if g.state_owners[v] == Player.P1 else "box"
        attrs = [f'shape="{shape}"']
        if v in g.final:
            attrs.append("peripheries=2")
        if dsw is not None:
            if v in dsw:
                color = "lightblue"
            elif dasw is not None and v in dasw:
                color = "palegreen"
            else:
                color = "lightcoral"
            attrs.append('style="filled"')
            attrs.append(f'fillcolor="{color}"')
        lines.append(f'  "{g.state_names[v]}" [{", ".join(attrs)}];')
    for v in order:
        for a, t in g.transitions[v].items():
            lines.append(
                f'  "{g.state_names[v]}" -> "{g.state_names[t]}" '
                f'[label="{g.action_names[a]}"];'
            )
    lines.append("}")
    return "\n".join(lines) + "\n"
