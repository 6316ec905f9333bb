"""Monte-Carlo validation and the independent almost-sure-reachability oracle.

Rollouts pit a P1 strategy against a P2 who mixes uniformly over his
perceptually permissive actions (full support), the adversary model the
almost-sure solver is built for. Episodes draw from per-episode
counter-based RNG streams (Philox keyed by seed and episode index), so
results are reproducible, parallel-safe, and monotone in the horizon.

The oracle answers the same question as the almost-sure solver by a
different route: it views the hypergame as a decision process (P1 keeps
choices, P2 states move uniformly over their permissive sets) and runs
the classical alternation of "prune states that cannot reach the target"
and "prune states that can stumble into pruned ones". It deliberately
shares no code with the solver module.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from typing import IO, Iterable

import numpy as np

from .arena import Player, Strategy
from .errors import SizeLimitError, ValidationError
from .hypergame import Hypergame

RNG_NAME = "philox4x64"
ORACLE_STATE_GUARD = 10_000


@dataclass(frozen=True)
class RolloutConfig:
    episodes: int = 10_000
    seed: int = 0
    horizon: int | None = None  # None: 10 * |V|
    p2_policy: Strategy | None = None  # None: uniform over permissive sets
    store_traces: bool = False

    def __post_init__(self):
        if self.episodes <= 0:
            raise ValidationError("episodes must be positive")
        if self.horizon is not None and self.horizon <= 0:
            raise ValidationError("horizon must be positive")


@dataclass(frozen=True)
class RolloutStats:
    episodes: int
    reached: int
    mean_steps: float | None
    seed: int
    horizon: int
    rng: str = RNG_NAME
    traces: tuple[tuple[int, ...], ...] | None = None

    def to_json(self) -> str:
        doc = {
            "episodes": self.episodes,
            "reached": self.reached,
            "mean_steps": self.mean_steps,
            "seed": self.seed,
            "horizon": self.horizon,
            "rng": self.rng,
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _episode_rng(seed: int, episode: int) -> np.random.Generator:
    key = np.array([seed & (2**64 - 1), episode], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _sample(dist: dict[int, float], rng: np.random.Generator) -> int:
    r = rng.random()
    acc = 0.0
    items = sorted(dist.items())
    for a, p in items:
        acc += p
        if r < acc:
            return a
    return items[-1][0]


def rollout(
    h: Hypergame, p1: Strategy, start: int, cfg: RolloutConfig
) -> RolloutStats:
    """Simulate episodes from `start`; an episode succeeds when a final
    product state is visited within the horizon."""
    g = h.arena
    if not 0 <= start < g.n_states:
        raise ValidationError(f"unknown start state id {start}")
    horizon = cfg.horizon if cfg.horizon is not None else 10 * g.n_states
    final = g.final
    reached = 0
    steps_sum = 0
    traces: list[tuple[int, ...]] = []
    for ep in range(cfg.episodes):
        rng = _episode_rng(cfg.seed, ep)
        state = start
        trace = [state]
        for step in range(horizon + 1):
            if state in final:
                reached += 1
                steps_sum += step
                break
            if step == horizon:
                break
            if g.state_owners[state] == Player.P1:
                a = _sample(dict(p1.distribution(state)), rng)
            elif cfg.p2_policy is not None:
                a = _sample(dict(cfg.p2_policy.distribution(state)), rng)
            else:
                support = h.perm[state]
                if not support:
                    break  # unconstrained-empty convention: P2 is stuck
                a = support[int(rng.integers(len(support)))]
            state = g.transitions[state][a]
            trace.append(state)
        if cfg.store_traces:
            traces.append(tuple(trace))
    mean = steps_sum / reached if reached else None
    return RolloutStats(
        cfg.episodes,
        reached,
        mean,
        cfg.seed,
        horizon,
        traces=tuple(traces) if cfg.store_traces else None,
    )


def asw_oracle(h: Hypergame) -> frozenset[int]:
    """States from which the target is reached with probability one when
    P1 plays to win and every P2 state moves uniformly over its
    permissive set. Brute-force graph iteration, independent of the
    solver module."""
    n = h.arena.n_states
    if n > ORACLE_STATE_GUARD:
        raise SizeLimitError(
            f"oracle guard: {n} states exceeds the {ORACLE_STATE_GUARD} limit"
        )
    g = h.arena
    p1_state = [g.state_owners[v] == Player.P1 for v in range(n)]
    succ_p1 = [sorted(set(g.transitions[v].values())) if p1_state[v] else [] for v in range(n)]
    succ_p2 = [
        sorted({g.transitions[v][a] for a in h.perm[v]}) if not p1_state[v] else []
        for v in range(n)
    ]
    final = set(g.final)
    alive = set(range(n))

    def can_reach_target() -> set[int]:
        preds: dict[int, list[int]] = {v: [] for v in alive}
        for v in alive:
            for t in succ_p1[v] if p1_state[v] else succ_p2[v]:
                if t in alive:
                    preds[t].append(v)
        seen = set(final & alive)
        queue = list(seen)
        while queue:
            t = queue.pop()
            for v in preds[t]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        return seen

    while True:
        reach = can_reach_target()
        doomed = alive - reach
        if not doomed:
            return frozenset(alive)
        alive -= doomed
        changed = True
        while changed:
            changed = False
            for v in sorted(alive):
                if v in final:
                    continue
                if p1_state[v]:
                    if not any(t in alive for t in succ_p1[v]):
                        alive.discard(v)
                        changed = True
                elif any(t not in alive for t in succ_p2[v]):
                    alive.discard(v)
                    changed = True


def interactive_play(
    h: Hypergame,
    p1: Strategy,
    start: int,
    seed: int = 0,
    reveal_all: bool = False,
    stdin: IO[str] | None = None,
    stdout: IO[str] | None = None,
    max_turns: int | None = None,
) -> dict:
    """Terminal loop: the library moves P1 by strategy, a human plays P2.

    By default the human sees P2-visible information only: the game state
    and P2's currently perceived P1 action set. `reveal_all` additionally
    shows the product state and the permissive set. Returns the
    transcript (alternating state/action names) and whether a final state
    was visited; EOF or 'q' ends the session cleanly.
    """
    fin = stdin if stdin is not None else sys.stdin
    fout = stdout if stdout is not None else sys.stdout
    g = h.arena
    rng = _episode_rng(seed, 0)
    state = start
    play: list[str] = [g.state_names[state]]
    result = "quit"
    turns = 0

    def say(msg: str) -> None:
        print(msg, file=fout)

    while True:
        if state in g.final:
            say("*** Final state reached: P1 wins. ***")
            result = "win"
            break
        if max_turns is not None and turns >= max_turns:
            break
        turns += 1
        if g.state_owners[state] == Player.P1:
            a = _sample(dict(p1.distribution(state)), rng)
            state = g.transitions[state][a]
            say(f"P1 plays {g.action_names[a]}")
            play.extend([g.action_names[a], g.state_names[state]])
            continue
        base_name = h.base.state_names[h.base_state(state)]
        perceived = sorted(h.igraph.perceptions[h.vertex(state)])
        say(f"Game state: {base_name}")
        say(f"You believe P1 can play: {', '.join(perceived)}")
        if reveal_all:
            say(f"[product state {g.state_names[state]}; permissive: "
                f"{', '.join(g.action_names[a] for a in h.perm[state]) or '-'}]")
        enabled = g.enabled(state)
        menu = "  ".join(
            f"{i + 1}:{g.action_names[a]}" for i, a in enumerate(enabled)
        )
        a = None
        while a is None:
            say(f"Your move ({menu}, q to quit):")
            line = fin.readline()
            if line == "":
                say("(end of input)")
                break
            token = line.strip()
            if token.lower() in ("q", "quit"):
                break
            if token.isdigit() and 1 <= int(token) <= len(enabled):
                a = enabled[int(token) - 1]
            else:
                match = [x for x in enabled if g.action_names[x] == token]
                if match:
                    a = match[0]
                else:
                    say(f"Unrecognized move {token!r}; try again.")
        if a is None:
            break
        state = g.transitions[state][a]
        play.extend([g.action_names[a], g.state_names[state]])
    return {"play": play, "result": result}
