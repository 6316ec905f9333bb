import pathlib

import pytest

from hypergames.arena import Player, load_arena, restrict_p1_actions
from hypergames.hypergame import build
from hypergames.perception import (
    build_inference_graph,
    load_perception_doc,
    mechanism_from_doc,
)

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fig1_text() -> str:
    return (FIXTURES / "fig1.json").read_text()


@pytest.fixture(scope="session")
def fig1(fig1_text):
    return load_arena(fig1_text)


@pytest.fixture(scope="session")
def fig2(fig1):
    return restrict_p1_actions(fig1, {"a2"})


@pytest.fixture(scope="session")
def fig_igraph(fig1):
    doc = load_perception_doc((FIXTURES / "perception_a2.json").read_text())
    mech = mechanism_from_doc(doc, fig1.action_names_of(Player.P1))
    return build_inference_graph(mech, doc.initial)


@pytest.fixture(scope="session")
def fig3(fig1, fig_igraph):
    """The seven-state hypergame reachable from (s2, perception {a2})."""
    start = (fig1.state_id("s2"), fig_igraph.vertex_of({"a2"}))
    return build(fig1, fig_igraph, initial={start})


def pid(h, base_name: str, perception: set[str]) -> int:
    """Product state id from base-state name and perception contents."""
    return h.product_id(h.base.state_id(base_name), h.igraph.vertex_of(perception))
