"""Capture-the-flag gridworld generator.

A defender (P2) patrols his own half of a grid; an intruder (P1) must
step onto flag cells inside it. Both move in the four compass
directions, blocked by walls, intact fences, and the grid edge; P2 is
additionally confined to his territory (plus any fence cell he may enter
once it is cut). P1's private actions: jumps that cross a wall into the
free cell behind it, and a cut that turns an adjacent fence cell into a
free cell. The defender's body blocks P1's movement, and the defender
captures P1 by moving onto her cell: captured states freeze (labels show
only the collision, so no flag can be registered from them).

The published description leaves the wall layout of its figure
unspecified; `layouts/paper-fig4.json` is a faithful-in-spirit
reconstruction (board size, fence cells, territory split, action set),
and the layout file is a first-class input everywhere.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable

from .arena import GameArena, Player
from .errors import ValidationError
from .hypergame import Hypergame, build
from .perception import InferenceGraph, InferenceMechanism, build_inference_graph, class_mechanism
from .scltl import compile_formula, entry_state_name, parse, product
from .scltl.formula import Formula, atoms

Cell = tuple[int, int]

COMPASS = {"N": (0, 1), "E": (1, 0), "S": (0, -1), "W": (-1, 0)}
P1_ACTIONS = ("N", "E", "S", "W", "JumpN", "JumpE", "JumpS", "JumpW", "Cut")
P2_ACTIONS = ("N", "E", "S", "W")
MOVEMENT = ("N", "E", "S", "W")
JUMPS = ("JumpN", "JumpE", "JumpS", "JumpW")
ATOMS = ("FLAG1", "FLAG2", "collide")

PHI1_TEXT = "F FLAG1 & F FLAG2"
PHI2_TEXT = "(!FLAG2 & !collide) U FLAG1 & !collide U FLAG2"
FORMULA_PRESETS = {"phi1": PHI1_TEXT, "phi2": PHI2_TEXT}


@dataclass(frozen=True)
class GridConfig:
    width: int
    height: int
    p1_territory: frozenset[Cell]
    p2_territory: frozenset[Cell]
    walls: frozenset[Cell]
    fences: tuple[Cell, ...]
    flags: tuple[Cell, Cell]
    p1_start: Cell
    p2_start: Cell
    initial_inference_vertex: int = 0

    def __post_init__(self):
        grid = {(x, y) for x in range(self.width) for y in range(self.height)}
        if not grid:
            raise ValidationError("grid must be nonempty")
        if self.p1_territory & self.p2_territory:
            raise ValidationError("territories overlap")
        if self.p1_territory | self.p2_territory != grid:
            raise ValidationError("territories must cover the grid")
        if len(self.fences) > 2:
            raise ValidationError("at most two fences are supported")
        if len(set(self.fences)) != len(self.fences):
            raise ValidationError("duplicate fence cells")
        if len(set(self.flags)) != 2:
            raise ValidationError("exactly two distinct flag cells are required")
        zones = [set(self.walls), set(self.fences), set(self.flags)]
        for i, a in enumerate(zones):
            for b in zones[i + 1:]:
                if a & b:
                    raise ValidationError("walls, fences and flags must be pairwise disjoint")
            if not a <= grid:
                raise ValidationError("cell outside the grid")
        for flag in self.flags:
            if flag not in self.p2_territory:
                raise ValidationError(f"flag {flag} must lie in P2 territory")
        if self.p1_start in self.walls or self.p1_start in self.fences:
            raise ValidationError("P1 start must be a free cell")
        if self.p1_start not in grid or self.p2_start not in grid:
            raise ValidationError("start cells outside the grid")
        if (
            self.p2_start not in self.p2_territory
            or self.p2_start in self.walls
            or self.p2_start in self.fences
        ):
            raise ValidationError("P2 start must be a free territory cell")
        if self.p1_start == self.p2_start:
            raise ValidationError("players must start on different cells")
        if not 0 <= self.initial_inference_vertex < 4:
            raise ValidationError("initial inference vertex must be one of 0..3")


@dataclass(frozen=True)
class CtfState:
    p1: Cell
    p2: Cell
    cuts: tuple[bool, bool]
    turn: Player

    @property
    def caught(self) -> bool:
        return self.p1 == self.p2

    def name(self) -> str:
        return (
            f"p1({self.p1[0]},{self.p1[1]})"
            f"p2({self.p2[0]},{self.p2[1]})"
            f"f{int(self.cuts[0])}{int(self.cuts[1])}"
            f"t{self.turn.value}"
        )


def _move(cell: Cell, d: str) -> Cell:
    dx, dy = COMPASS[d]
    return (cell[0] + dx, cell[1] + dy)


_STATE_RE = re.compile(
    r"^p1\((\d+),(\d+)\)p2\((\d+),(\d+)\)f([01])([01])t([12])"
)


def decode_state_name(name: str) -> CtfState:
    """Inverse of CtfState.name(); ignores any product suffixes."""
    m = _STATE_RE.match(name)
    if not m:
        raise ValidationError(f"not a capture-the-flag state name: {name!r}")
    g = m.groups()
    return CtfState(
        (int(g[0]), int(g[1])),
        (int(g[2]), int(g[3])),
        (g[4] == "1", g[5] == "1"),
        Player(int(g[6])),
    )


class _Board:
    def __init__(self, c: GridConfig):
        self.c = c

    def on_grid(self, cell: Cell) -> bool:
        return 0 <= cell[0] < self.c.width and 0 <= cell[1] < self.c.height

    def fence_intact(self, cell: Cell, cuts) -> bool:
        return cell in self.c.fences and not cuts[self.c.fences.index(cell)]

    def p1_free(self, cell: Cell, cuts) -> bool:
        return (
            self.on_grid(cell)
            and cell not in self.c.walls
            and not self.fence_intact(cell, cuts)
        )

    def p2_allowed(self, cell: Cell, cuts) -> bool:
        if not self.on_grid(cell) or cell in self.c.walls:
            return False
        if cell in self.c.fences:
            return cuts[self.c.fences.index(cell)]
        return cell in self.c.p2_territory

    def cut_targets(self, p1: Cell, cuts) -> list[int]:
        out = []
        for i, fence in enumerate(self.c.fences):
            if cuts[i]:
                continue
            if abs(fence[0] - p1[0]) + abs(fence[1] - p1[1]) == 1:
                out.append(i)
        return out


def _p1_moves(board: _Board, st: CtfState) -> dict[str, CtfState]:
    out: dict[str, CtfState] = {}
    for d in MOVEMENT:
        tgt = _move(st.p1, d)
        if board.p1_free(tgt, st.cuts) and tgt != st.p2:
            out[d] = CtfState(tgt, st.p2, st.cuts, Player.P2)
    for d in MOVEMENT:
        mid = _move(st.p1, d)
        tgt = _move(mid, d)
        if (
            mid in board.c.walls
            and board.p1_free(tgt, st.cuts)
            and tgt != st.p2
        ):
            out[f"Jump{d}"] = CtfState(tgt, st.p2, st.cuts, Player.P2)
    targets = board.cut_targets(st.p1, st.cuts)
    if targets:
        cuts = list(st.cuts)
        cuts[targets[0]] = True  # lowest-indexed adjacent intact fence
        out["Cut"] = CtfState(st.p1, st.p2, tuple(cuts), Player.P2)
    return out


def _p2_moves(board: _Board, st: CtfState) -> dict[str, CtfState]:
    out: dict[str, CtfState] = {}
    for d in MOVEMENT:
        tgt = _move(st.p2, d)
        if board.p2_allowed(tgt, st.cuts):  # moving onto P1 is the catch
            out[d] = CtfState(st.p1, tgt, st.cuts, Player.P1)
    return out


def _successors(board: _Board, st: CtfState) -> dict[str, CtfState]:
    if st.caught:  # frozen: capture ends the pursuit
        frozen = CtfState(st.p1, st.p2, st.cuts, Player(3 - st.turn.value))
        return {"N": frozen}
    if st.turn == Player.P1:
        return _p1_moves(board, st)
    return _p2_moves(board, st)


def _labels(c: GridConfig, st: CtfState) -> list[str]:
    if st.caught:
        return ["collide"]
    out = []
    if st.p1 == c.flags[0]:
        out.append("FLAG1")
    if st.p1 == c.flags[1]:
        out.append("FLAG2")
    return out


def start_state(c: GridConfig) -> CtfState:
    return CtfState(c.p1_start, c.p2_start, (False, False), Player.P1)


def build_transition_system(c: GridConfig) -> GameArena:
    """Every valid board configuration, turn-alternating; final set empty
    (objectives arrive through the formula product)."""
    board = _Board(c)
    n_f = len(c.fences)
    cut_combos = []
    for bits in range(4):
        cuts = (bool(bits & 1), bool(bits & 2))
        if all(not cuts[i] for i in range(n_f, 2)):
            cut_combos.append(cuts)

    states: list[CtfState] = []
    for cuts in sorted(cut_combos):
        p1_cells = sorted(
            (x, y)
            for x in range(c.width)
            for y in range(c.height)
            if board.p1_free((x, y), cuts)
        )
        p2_cells = sorted(
            (x, y)
            for x in range(c.width)
            for y in range(c.height)
            if board.p2_allowed((x, y), cuts)
        )
        for p1 in p1_cells:
            for p2 in p2_cells:
                for turn in (Player.P1, Player.P2):
                    states.append(CtfState(p1, p2, cuts, turn))

    index = {st: i for i, st in enumerate(states)}
    action_names = list(P1_ACTIONS) + [f"p2{d}" for d in P2_ACTIONS]
    action_owners = [Player.P1] * len(P1_ACTIONS) + [Player.P2] * len(P2_ACTIONS)
    aidx = {n: i for i, n in enumerate(action_names)}

    names, owners, labels, transitions = [], [], [], []
    for st in states:
        names.append(st.name())
        owners.append(st.turn)
        labels.append(_labels(c, st))
        succ = _successors(board, st)
        if not succ:
            raise ValidationError(
                f"layout produces a stuck state {st.name()}; adjust walls or territories"
            )
        row = {}
        for act, nxt in succ.items():
            key = act if st.turn == Player.P1 else f"p2{act}"
            row[aidx[key]] = index[nxt]
        transitions.append(row)

    return GameArena(
        names,
        owners,
        set(),
        labels,
        action_names,
        action_owners,
        transitions,
    )


def build_ctf_inference(c: GridConfig) -> tuple[InferenceMechanism, InferenceGraph]:
    """Class-based rule (jumps are one class, cut another; compass moves
    are known from the start) and its four-vertex inference graph."""
    mech = class_mechanism(P1_ACTIONS, {"jumps": JUMPS, "cut": ("Cut",)})
    x0 = frozenset(MOVEMENT)
    names = {
        x0: "0",
        x0 | {"Cut"}: "1",
        x0 | set(JUMPS): "2",
        frozenset(P1_ACTIONS): "3",
    }
    return mech, build_inference_graph(mech, x0, names=names)


@dataclass(frozen=True)
class CtfBenchmark:
    config: GridConfig
    formula: Formula
    ts: GameArena
    game: GameArena
    hypergame: Hypergame
    entry: str  # name of the initial product state in `game`
    mechanism: InferenceMechanism = field(compare=False, default=None)


def parse_benchmark_formula(spec_text: str) -> Formula:
    text = FORMULA_PRESETS.get(spec_text, spec_text)
    f = parse(text, ATOMS)
    return f


def build_benchmark(c: GridConfig, formula: Formula | str) -> CtfBenchmark:
    """Transition system -> formula product (reachable from the start)
    -> hypergame (reachable from the start paired with the configured
    inference vertex)."""
    if isinstance(formula, str):
        formula = parse_benchmark_formula(formula)
    extra = sorted(atoms(formula) - set(ATOMS))
    if extra:
        raise ValidationError(f"benchmark formulas speak about {list(ATOMS)}; got {extra}")
    ts = build_transition_system(c)
    dfa = compile_formula(formula, sorted(atoms(formula)) or ("FLAG1",))
    start = start_state(c).name()
    game = product(ts, dfa, initial=start)
    entry = entry_state_name(ts, dfa, start)
    mech, igraph = build_ctf_inference(c)
    vertex = igraph.vertex_by_name(str(c.initial_inference_vertex))
    hyper = build(game, igraph, initial={(game.state_id(entry), vertex)})
    return CtfBenchmark(c, formula, ts, game, hyper, entry, mech)


def edge_count(g: GameArena) -> int:
    return sum(len(t) for t in g.transitions)


# -- layout files ------------------------------------------------------------


def _cell(v, what: str) -> Cell:
    if (
        not isinstance(v, (list, tuple))
        or len(v) != 2
        or not all(isinstance(x, int) for x in v)
    ):
        raise ValidationError(f"{what} must be an [x, y] pair, got {v!r}")
    return (v[0], v[1])


def load_layout(text: str) -> GridConfig:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"layout is not valid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise ValidationError("layout must be a JSON object")
    required = {
        "width",
        "height",
        "p1_territory",
        "p2_territory",
        "walls",
        "fences",
        "flags",
        "p1_start",
        "p2_start",
    }
    missing = sorted(required - doc.keys())
    if missing:
        raise ValidationError(f"layout missing fields: {missing}")
    flags = [_cell(v, "flag") for v in doc["flags"]]
    if len(flags) != 2:
        raise ValidationError("layout needs exactly two flags")
    return GridConfig(
        width=doc["width"],
        height=doc["height"],
        p1_territory=frozenset(_cell(v, "p1_territory") for v in doc["p1_territory"]),
        p2_territory=frozenset(_cell(v, "p2_territory") for v in doc["p2_territory"]),
        walls=frozenset(_cell(v, "wall") for v in doc["walls"]),
        fences=tuple(_cell(v, "fence") for v in doc["fences"]),
        flags=(flags[0], flags[1]),
        p1_start=_cell(doc["p1_start"], "p1_start"),
        p2_start=_cell(doc["p2_start"], "p2_start"),
        initial_inference_vertex=doc.get("initial_inference_vertex", 0),
    )


def layout_to_json(c: GridConfig) -> str:
    doc = {
        "width": c.width,
        "height": c.height,
        "p1_territory": sorted(list(x) for x in c.p1_territory),
        "p2_territory": sorted(list(x) for x in c.p2_territory),
        "walls": sorted(list(x) for x in c.walls),
        "fences": [list(x) for x in c.fences],
        "flags": [list(x) for x in c.flags],
        "p1_start": list(c.p1_start),
        "p2_start": list(c.p2_start),
        "initial_inference_vertex": c.initial_inference_vertex,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def builtin_layout(name: str) -> GridConfig:
    try:
        text = resources.files("hypergames.layouts").joinpath(f"{name}.json").read_text()
    except FileNotFoundError:
        raise ValidationError(f"no built-in layout named {name!r}") from None
    return load_layout(text)
