"""Deceptive sure / almost-sure solvers: goldens from the running
example, structural theorems on random hypergames, and the deception
value."""

from fractions import Fraction

import pytest

from _support import random_hypergame
from conftest import pid
from hypergames.arena import Player
from hypergames.attractor import solve
from hypergames.errors import ValidationError
from hypergames.hypergame import build
from hypergames.solvers import base_solution, dasw, dsw, region_from_json, region_to_json, vod

G1 = {"a2"}
G2 = {"a1", "a2"}


def member_names(h, members):
    return {h.arena.state_names[v] for v in members}


class TestDswGolden:
    def test_region_is_lifted_true_win(self, fig3):
        res = dsw(fig3)
        assert member_names(fig3, res.region.members) == {
            "s0@a1+a2",
            "s1@a2",
            "s1@a1+a2",
        }
        assert set(res.region.rank.values()) == {0}

    def test_unsafe_p2_choice_excludes_green_states(self, fig3):
        res = dsw(fig3)
        assert pid(fig3, "s2", G1) not in res.region.members
        assert pid(fig3, "s3", G1) not in res.region.members

    def test_strategy_glues_true_sure_strategy(self, fig3):
        res = dsw(fig3)
        a1 = fig3.arena.action_id("a1")
        assert res.strategy.action_at(pid(fig3, "s1", G1)) == a1
        assert res.strategy.action_at(pid(fig3, "s1", G2)) == a1


class TestDaswGolden:
    def test_region(self, fig3):
        res = dasw(fig3)
        assert member_names(fig3, res.region.members) == {
            "s0@a1+a2",
            "s1@a2",
            "s1@a1+a2",
            "s2@a2",
            "s3@a2",
        }

    def test_first_outer_iteration_core(self, fig3):
        res = dasw(fig3)
        step0 = res.trace[0]
        assert member_names(fig3, step0.c) == {"s2@a1+a2", "s3@a1+a2"}
        assert step0.safe2_rounds == 3

    def test_ranks_and_chain(self, fig3):
        res = dasw(fig3)
        assert res.region.rank[pid(fig3, "s2", G1)] == 1
        assert res.region.rank[pid(fig3, "s3", G1)] == 1
        assert len(res.z_chain) == 2  # Z0 then the fixed point
        assert res.z_chain[0] < res.z_chain[1]

    def test_strategy_waits_at_s3_and_reveals_at_s1(self, fig3):
        res = dasw(fig3)
        a1 = fig3.arena.action_id("a1")
        a2 = fig3.arena.action_id("a2")
        # No move into Z0 exists at (s3, {a2}): stay inside Z1 instead.
        assert res.strategy.support(pid(fig3, "s3", G1)) == (a2,)
        # The private action is revealed exactly at s1.
        assert res.strategy.support(pid(fig3, "s1", G1)) == (a1,)
        assert res.strategy.support(pid(fig3, "s1", G2)) == (a1,)

    def test_more_powerful_than_sure_deception(self, fig3):
        d1 = dsw(fig3)
        d2 = dasw(fig3)
        assert d1.region.members < d2.region.members
        extra = pid(fig3, "s2", G1)
        assert extra in d2.region.members
        win1, _ = solve(fig3.base)
        assert fig3.base_state(extra) not in win1.members


class TestProperties:
    @pytest.mark.parametrize("seed", range(40))
    def test_projection_of_dsw_is_true_win(self, seed):
        h = random_hypergame(seed)
        res = dsw(h)
        win1, _ = solve(h.base)
        bases_in_v = {h.base_state(v) for v in range(h.n_states)}
        assert {h.base_state(v) for v in res.region.members} == win1.members & bases_in_v

    @pytest.mark.parametrize("seed", range(40))
    def test_region_chain(self, seed):
        h = random_hypergame(seed, restricted=seed % 3 == 0)
        win1, _ = solve(h.base)
        z0 = {v for v in range(h.n_states) if h.base_state(v) in win1.members}
        d1 = dsw(h)
        d2 = dasw(h)
        assert z0 <= d1.region.members <= d2.region.members

    @pytest.mark.parametrize("seed", range(40))
    def test_monotone_iterates(self, seed):
        h = random_hypergame(seed)
        res = dasw(h)
        for a, b in zip(res.z_chain, res.z_chain[1:]):
            assert a < b
        cores = [step.c for step in res.trace]
        for a, b in zip(cores, cores[1:]):
            assert b <= a

    @pytest.mark.parametrize("seed", range(40))
    def test_strategy_well_formedness(self, seed):
        h = random_hypergame(seed)
        res = dasw(h)
        chain = res.z_chain
        for v, k in res.region.rank.items():
            if k == 0 or h.arena.state_owners[v] != Player.P1:
                continue
            support = res.strategy.support(v)
            succ = {a: h.arena.transitions[v][a] for a in h.arena.enabled(v)}
            into_prev = {a for a, t in succ.items() if t in chain[k - 1]}
            if into_prev:
                assert set(support) == into_prev
            else:
                assert all(succ[a] in chain[k] for a in support)

    @pytest.mark.parametrize("seed", range(20))
    def test_dsw_strategy_rank_decreases(self, seed):
        h = random_hypergame(seed)
        res = dsw(h)
        for v, k in res.region.rank.items():
            if h.arena.state_owners[v] != Player.P1 or not res.strategy.defined_at(v):
                continue
            t = h.arena.transitions[v][res.strategy.action_at(v)]
            if k > 0:
                assert res.region.rank[t] < k

    @pytest.mark.parametrize("seed", range(25))
    def test_perm_convention_is_irrelevant(self, seed):
        import random as _r

        from _support import random_game
        from hypergames.perception import additive_mechanism, build_inference_graph

        rng = _r.Random(7000 + seed)
        g = random_game(seed)
        p1 = sorted(g.action_names_of(Player.P1))
        x0 = frozenset(rng.sample(p1, rng.randint(1, len(p1))))
        ig = build_inference_graph(additive_mechanism(p1), x0)
        h_all = build(g, ig, unconstrained_perm="all-enabled")
        h_none = build(g, ig, unconstrained_perm="empty")
        assert dsw(h_all).region == dsw(h_none).region
        assert dasw(h_all).region == dasw(h_none).region


class TestTrivialCases:
    def test_no_misperception_no_gain(self, fig1):
        from hypergames.perception import additive_mechanism, build_inference_graph

        ig = build_inference_graph(additive_mechanism({"a1", "a2"}), {"a1", "a2"})
        h = build(fig1, ig)
        res = dsw(h)
        win1, _ = solve(fig1)
        assert {h.base_state(v) for v in res.region.members} == win1.members
        assert len(res.region.members) == len(win1.members)

    def test_everything_winning_is_rank_zero(self):
        from hypergames.arena import GameArena
        from hypergames.perception import additive_mechanism, build_inference_graph

        g = GameArena(
            ["u", "v"],
            [Player.P1, Player.P2],
            {0, 1},
            [[], []],
            ["a", "b"],
            [Player.P1, Player.P2],
            [{0: 1}, {1: 0}],
        )
        ig = build_inference_graph(additive_mechanism({"a"}), set())
        h = build(g, ig)
        res = dasw(h)
        assert res.region.members == frozenset(range(h.n_states))
        assert set(res.region.rank.values()) == {0}


class TestVod:
    def test_golden_dasw_value(self, fig3):
        report = vod(fig3, dasw(fig3))
        assert report.win1_true == 2
        assert report.win2_true == 2
        assert report.deceptive_projection == 4
        assert report.as_fraction == Fraction(1)
        assert report.vod == 1.0

    def test_golden_dsw_is_zero(self, fig3):
        report = vod(fig3, dsw(fig3))
        assert report.vod == 0.0

    @pytest.mark.parametrize("seed", range(30))
    def test_dsw_vod_zero_everywhere(self, seed):
        h = random_hypergame(seed)
        assert vod(h, dsw(h)).vod == 0.0

    def test_zero_denominator(self):
        from hypergames.arena import GameArena
        from hypergames.perception import additive_mechanism, build_inference_graph

        g = GameArena(
            ["u"],
            [Player.P1],
            {0},
            [[]],
            ["a"],
            [Player.P1],
            [{0: 0}],
        )
        ig = build_inference_graph(additive_mechanism({"a"}), set())
        h = build(g, ig)
        assert vod(h, dasw(h)).vod == 0.0


class TestRegionIo:
    def test_round_trip(self, fig3):
        res = dasw(fig3)
        text = region_to_json(res.region, fig3.arena)
        back = region_from_json(text, fig3.arena)
        assert back == res.region

    def test_bad_region_file(self, fig3):
        with pytest.raises(ValidationError):
            region_from_json("[{\"state\": \"nope\", \"rank\": 0}]", fig3.arena)


def test_base_solution_cached(fig3):
    first = base_solution(fig3)
    assert base_solution(fig3) is first
