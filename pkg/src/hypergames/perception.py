"""P2's perception of P1's action set and its evolution.

A perception is simply a subset of P1's true action set. When P1 uses an
action outside it, P2 runs an inference rule that yields the updated
perception; the inference graph is the closure of the initial perception
under that rule, with one edge per (perception, P1 action) pair. The rule
never forgets: every update contains both the revealed action and the
previous perception, which is what makes the winning-region monotonicity
arguments apply along plays.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import ValidationError

Perception = frozenset  # subset of P1 action names


@dataclass(frozen=True)
class InferenceMechanism:
    """Deterministic update rule for P2's perceived P1 action set.

    kind "additive": the revealed action alone is added. kind "classes":
    the revealed action's whole class is added (actions not listed in any
    class form singleton classes, so the classes always partition the
    action set). kind "table": an explicit edge relation, the escape
    hatch for rules beyond the two built-ins.
    """

    kind: str
    actions: frozenset[str]
    classes: Mapping[str, frozenset[str]] | None = None
    table: Mapping[tuple[frozenset[str], str], frozenset[str]] | None = None
    class_of: Mapping[str, frozenset[str]] = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in ("additive", "classes", "table"):
            raise ValidationError(f"unknown inference mechanism kind {self.kind!r}")
        if self.kind == "classes":
            object.__setattr__(self, "class_of", _complete_partition(self.actions, self.classes))


def _complete_partition(actions: frozenset[str], classes) -> dict[str, frozenset[str]]:
    class_of: dict[str, frozenset[str]] = {}
    for cname, members in (classes or {}).items():
        members = frozenset(members)
        for a in members:
            if a not in actions:
                raise ValidationError(f"class {cname!r} lists unknown P1 action {a!r}")
            if a in class_of:
                raise ValidationError(f"action {a!r} appears in more than one class")
            class_of[a] = members
    for a in actions:
        class_of.setdefault(a, frozenset({a}))
    return class_of


def additive_mechanism(actions: Iterable[str]) -> InferenceMechanism:
    return InferenceMechanism("additive", frozenset(actions))


def class_mechanism(actions: Iterable[str], classes: Mapping[str, Iterable[str]]) -> InferenceMechanism:
    return InferenceMechanism(
        "classes",
        frozenset(actions),
        classes={k: frozenset(v) for k, v in classes.items()},
    )


def table_mechanism(
    actions: Iterable[str],
    edges: Iterable[tuple[Iterable[str], str, Iterable[str]]],
) -> InferenceMechanism:
    actions = frozenset(actions)
    table: dict[tuple[frozenset[str], str], frozenset[str]] = {}
    for src, a, dst in edges:
        src, dst = frozenset(src), frozenset(dst)
        if not src <= actions or not dst <= actions or a not in actions:
            raise ValidationError("table edge references actions outside the P1 action set")
        if a not in dst:
            raise ValidationError(f"table edge on {a!r} must contain {a!r} in its target")
        if not src <= dst:
            raise ValidationError("table edge must not shrink the perception")
        key = (src, a)
        if key in table and table[key] != dst:
            raise ValidationError(f"conflicting table edges for ({sorted(src)}, {a!r})")
        table[key] = dst
    return InferenceMechanism("table", actions, table=table)


def infer(m: InferenceMechanism, x: Iterable[str], a: str) -> Perception:
    """Updated perception after P2 observes P1 playing `a` from belief `x`.

    Always contains `a` and everything in `x`.
    """
    x = frozenset(x)
    if a not in m.actions:
        raise ValidationError(f"{a!r} is not a P1 action; only P1 moves are inferred on")
    if not x <= m.actions:
        raise ValidationError("perception contains actions outside the P1 action set")
    if m.kind == "additive":
        return x | {a}
    if m.kind == "classes":
        return x | m.class_of[a]
    if a in x:
        return x
    hit = m.table.get((x, a))
    if hit is None:
        raise ValidationError(
            f"inference table has no edge for perception {sorted(x)} on action {a!r}"
        )
    return hit


class InferenceGraph:
    """Closure of an initial perception under the inference rule.

    Vertices are deduplicated perceptions; edges are total over
    (vertex, P1 action), and an edge labeled by an already-known action
    is a self loop.
    """

    def __init__(
        self,
        perceptions: Iterable[Perception],
        edges: Mapping[tuple[int, str], int],
        initial: int,
        actions: Iterable[str],
        names: Iterable[str] | None = None,
    ):
        self.perceptions = tuple(frozenset(p) for p in perceptions)
        self.edges = dict(edges)
        self.initial = initial
        self.actions = tuple(sorted(actions))
        self.names = tuple(names) if names is not None else tuple(
            "+".join(sorted(p)) for p in self.perceptions
        )
        if len(set(self.names)) != len(self.names):
            raise ValidationError("inference graph vertex names must be unique")
        self._by_perception = {p: i for i, p in enumerate(self.perceptions)}

    def __len__(self) -> int:
        return len(self.perceptions)

    def vertex_of(self, p: Iterable[str]) -> int:
        try:
            return self._by_perception[frozenset(p)]
        except KeyError:
            raise ValidationError(f"no inference vertex for perception {sorted(p)}") from None

    def vertex_by_name(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ValidationError(f"no inference vertex named {name!r}") from None

    def step(self, v: int, a: str) -> int:
        if a not in self.actions:  # P2 moves never change the perception
            return v
        return self.edges[(v, a)]


def build_inference_graph(
    m: InferenceMechanism,
    x0: Iterable[str],
    names: Mapping[frozenset, str] | None = None,
) -> InferenceGraph:
    """Breadth-first closure of `x0` under `infer` over all P1 actions."""
    x0 = frozenset(x0)
    if not x0 <= m.actions:
        raise ValidationError("initial perception is not a subset of the P1 action set")
    order: list[Perception] = [x0]
    index = {x0: 0}
    edges: dict[tuple[int, str], int] = {}
    frontier = [x0]
    while frontier:
        nxt: list[Perception] = []
        for x in frontier:
            for a in sorted(m.actions):
                y = infer(m, x, a)
                if y not in index:
                    index[y] = len(order)
                    order.append(y)
                    nxt.append(y)
                edges[(index[x], a)] = index[y]
        frontier = nxt
    vertex_names = None
    if names is not None:
        vertex_names = [names.get(p, "+".join(sorted(p))) for p in order]
    return InferenceGraph(order, edges, 0, m.actions, vertex_names)


# -- perception documents ------------------------------------------------


@dataclass(frozen=True)
class PerceptionDoc:
    """Parsed perception document: initial set plus the mechanism spec."""

    initial: frozenset[str]
    mechanism: dict


def load_perception_doc(text: str) -> PerceptionDoc:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"perception document is not valid JSON: {e}") from None
    if not isinstance(doc, dict) or "initial" not in doc or "mechanism" not in doc:
        raise ValidationError("perception document needs 'initial' and 'mechanism'")
    initial = doc["initial"]
    if not isinstance(initial, list) or not all(isinstance(a, str) for a in initial):
        raise ValidationError("'initial' must be an array of action names")
    mech = doc["mechanism"]
    if not isinstance(mech, dict) or "kind" not in mech:
        raise ValidationError("'mechanism' must be an object with a 'kind'")
    return PerceptionDoc(frozenset(initial), mech)


def mechanism_from_doc(doc: PerceptionDoc, p1_actions: Iterable[str]) -> InferenceMechanism:
    p1_actions = frozenset(p1_actions)
    if not doc.initial <= p1_actions:
        missing = sorted(doc.initial - p1_actions)
        raise ValidationError(f"initial perception names unknown P1 actions: {missing}")
    kind = doc.mechanism["kind"]
    if kind == "additive":
        return additive_mechanism(p1_actions)
    if kind == "classes":
        classes = doc.mechanism.get("classes")
        if not isinstance(classes, dict):
            raise ValidationError("classes mechanism needs a 'classes' object")
        return class_mechanism(p1_actions, classes)
    if kind == "table":
        edges = doc.mechanism.get("edges")
        if not isinstance(edges, list):
            raise ValidationError("table mechanism needs an 'edges' array")
        parsed = []
        for e in edges:
            if not isinstance(e, dict) or not {"from", "action", "to"} <= e.keys():
                raise ValidationError("table edges need 'from', 'action', 'to'")
            parsed.append((e["from"], e["action"], e["to"]))
        return table_mechanism(p1_actions, parsed)
    raise ValidationError(f"unknown mechanism kind {kind!r}")


def perception_doc_to_json(initial: Iterable[str], mechanism: dict) -> str:
    doc = {"initial": sorted(initial), "mechanism": mechanism}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
