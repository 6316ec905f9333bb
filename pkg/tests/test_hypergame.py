"""Hypergame product construction and the permissive-action map."""

import pytest

from _support import random_hypergame
from conftest import pid
from hypergames.arena import Player
from hypergames.attractor import permissive_support, solve
from hypergames.errors import ValidationError
from hypergames.hypergame import build, hypergame_dot, project_run
from hypergames.perception import additive_mechanism, build_inference_graph


class TestBuild:
    def test_reachable_fig3_has_seven_states(self, fig3):
        assert fig3.n_states == 7
        expected = {
            ("s0", frozenset({"a1", "a2"})),
            ("s1", frozenset({"a2"})),
            ("s1", frozenset({"a1", "a2"})),
            ("s2", frozenset({"a2"})),
            ("s2", frozenset({"a1", "a2"})),
            ("s3", frozenset({"a2"})),
            ("s3", frozenset({"a1", "a2"})),
        }
        got = {
            (fig3.base.state_names[s], fig3.igraph.perceptions[v])
            for s, v in fig3.projection
        }
        assert got == expected

    def test_full_product_size(self, fig1, fig_igraph):
        h = build(fig1, fig_igraph)
        assert h.n_states == fig1.n_states * len(fig_igraph)

    def test_transition_structure(self, fig3):
        g1 = {"a2"}
        g2 = {"a1", "a2"}
        a1 = fig3.arena.action_id("a1")
        b1 = fig3.arena.action_id("b1")
        # revealing a1 at s1 advances the perception
        assert fig3.arena.transitions[pid(fig3, "s1", g1)][a1] == pid(fig3, "s0", g2)
        # P2 moves never advance it
        assert fig3.arena.transitions[pid(fig3, "s2", g1)][b1] == pid(fig3, "s1", g1)

    def test_perm_goldens(self, fig3):
        b1 = fig3.arena.action_id("b1")
        b2 = fig3.arena.action_id("b2")
        assert fig3.perm[pid(fig3, "s2", {"a1", "a2"})] == (b2,)
        assert fig3.perm[pid(fig3, "s2", {"a2"})] == (b1, b2)

    def test_final_lifts(self, fig3):
        finals = {fig3.arena.state_names[v] for v in fig3.arena.final}
        assert finals == {"s0@a1+a2"}

    def test_degenerate_single_vertex(self, fig1):
        ig = build_inference_graph(additive_mechanism({"a1", "a2"}), {"a1", "a2"})
        h = build(fig1, ig)
        assert h.n_states == fig1.n_states
        win1, _ = solve(h.arena)
        base_win1, _ = solve(fig1)
        assert {h.base_state(v) for v in win1.members} == base_win1.members

    def test_unknown_initial_pair(self, fig1, fig_igraph):
        with pytest.raises(ValidationError):
            build(fig1, fig_igraph, initial={(99, 0)})
        with pytest.raises(ValidationError):
            build(fig1, fig_igraph, initial={(0, 99)})

    def test_igraph_action_set_must_match(self, fig1):
        ig = build_inference_graph(additive_mechanism({"a1"}), {"a1"})
        with pytest.raises(ValidationError):
            build(fig1, ig)


class TestProjection:
    def test_project_tau1(self, fig3):
        g1, g2 = {"a2"}, {"a1", "a2"}
        run = [pid(fig3, "s2", g1), pid(fig3, "s1", g1), pid(fig3, "s0", g2)]
        assert [fig3.base.state_names[s] for s in project_run(fig3, run)] == [
            "s2",
            "s1",
            "s0",
        ]

    def test_project_tau2(self, fig3):
        g1, g2 = {"a2"}, {"a1", "a2"}
        run = [
            pid(fig3, "s2", g1),
            pid(fig3, "s3", g1),
            pid(fig3, "s2", g2),
            pid(fig3, "s1", g2),
            pid(fig3, "s0", g2),
        ]
        assert [fig3.base.state_names[s] for s in project_run(fig3, run)] == [
            "s2",
            "s3",
            "s2",
            "s1",
            "s0",
        ]

    def test_single_state_run(self, fig3):
        v = pid(fig3, "s3", {"a2"})
        assert project_run(fig3, [v]) == [fig3.base.state_id("s3")]

    def test_final_visit_projects_to_final(self, fig3):
        for v in fig3.arena.final:
            assert fig3.base_state(v) in fig3.base.final


class TestInvariants:
    @pytest.mark.parametrize("seed", range(25))
    def test_perception_monotone_along_edges(self, seed):
        h = random_hypergame(seed, restricted=seed % 2 == 0)
        for v in range(h.n_states):
            pv = h.igraph.perceptions[h.vertex(v)]
            for t in h.arena.transitions[v].values():
                assert pv <= h.igraph.perceptions[h.vertex(t)]

    @pytest.mark.parametrize("seed", range(25))
    def test_p1_enabled_matches_true_game(self, seed):
        h = random_hypergame(seed)
        for v in range(h.n_states):
            s = h.base_state(v)
            assert h.arena.enabled(v) == h.base.enabled(s)

    @pytest.mark.parametrize("seed", range(25))
    def test_true_permissive_contained_in_perm(self, seed):
        h = random_hypergame(seed)
        _, win2 = solve(h.base)
        for v in range(h.n_states):
            s = h.base_state(v)
            if h.arena.state_owners[v] != Player.P2 or s not in win2:
                continue
            assert permissive_support(h.base, win2, s) <= set(h.perm[v])

    def test_full_perception_vertex_equals_true_permissive(self, fig1, fig_igraph):
        h = build(fig1, fig_igraph)
        _, win2 = solve(fig1)
        v_full = fig_igraph.vertex_of({"a1", "a2"})
        for s in win2:
            if fig1.state_owners[s] != Player.P2:
                continue
            v = h.product_id(s, v_full)
            assert set(h.perm[v]) == permissive_support(fig1, win2, s)


class TestExports:
    def test_arena_round_trips_through_schema(self, fig3):
        from hypergames.arena import load_arena

        again = load_arena(fig3.arena.to_json(), allow_dead_ends=True)
        assert again.to_json() == fig3.arena.to_json()

    def test_dot_contains_every_state(self, fig3):
        dot = hypergame_dot(fig3)
        for name in fig3.arena.state_names:
            assert f'"{name}"' in dot
