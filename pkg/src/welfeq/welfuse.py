"""Batched welfare-function selection by posterior sampling.

An agent keeps a batch of b concurrent matches. Each match is assigned one
welfare function from a candidate set; the agent plays an opponent-shaping
learner whose objective is that welfare function composed with the game
(the opponent is modelled as a greedy self-reward ascender). After each
episode of s steps the assignments are resampled: for every batch index,
one observed final self-reward is sampled uniformly from the usage set of
each candidate, and the candidate with the highest sampled reward wins the
index. Candidates with empty usage sets are skipped. All strategies reset
between episodes.

RNG streams derive from the master seed as SeedSequence tuples:

* (seed, 1, agent)                first-episode assignment draws
* (seed, 2, agent, episode)       posterior resampling draws
* (seed, 3, episode, index)       match strategy initialisation (x then y)
* (seed, 4, agent, episode, index) learner-private stream

so batch indices can run concurrently or serially with identical output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .equilibria import WelfareFunction
from .games import SwappedGame, TwoPlayerGame
from .learners import LearnerConfig, LearnerState, update_strategy

__all__ = [
    "WelfuseConfig",
    "EpisodeRecord",
    "WelfuseHistory",
    "WelfareShapedGame",
    "welfare_os_step",
    "posterior_sampling_update",
    "welfuse_run",
]

DEFAULT_WELFARE_SET = ("greedy", "egalitarian", "fairness")


class WelfareShapedGame(TwoPlayerGame):
    """A view of a game where the x seat's reward is a welfare function.

    Derivatives of the welfare objective use the active branch at the
    query point (ties resolve to the x-player branch), so nonsmooth
    welfare functions are handled by exact subgradient selection.
    """

    def __init__(self, base: TwoPlayerGame, wf: WelfareFunction):
        super().__init__(base.bounds_x, base.bounds_y)
        self.base = base
        self.wf = wf
        self.name = f"{base.name}:{wf.tag}"
        self.dim_x = base.dim_x
        self.dim_y = base.dim_y

    def reward_batch(self, X, Y):
        rx, ry = self.base.reward_batch(X, Y)
        return self.wf.value(rx, ry, "x"), ry

    def _combine(self, kind, wrt1, wrt2, x, y):
        rx, ry = self.base.reward_batch(np.asarray(x, dtype=float).reshape(-1),
                                        np.asarray(y, dtype=float).reshape(-1))
        ax, ay = self.wf.linearization(float(rx), float(ry), "x")
        if kind == "grad":
            fx = lambda p: self.base.grad(p, wrt1, x, y)
        else:
            fx = lambda p: self.base.hess(p, wrt1, wrt2, x, y)
        if ay == 0.0:
            return fx("x") if ax == 1.0 else ax * fx("x")
        if ax == 0.0:
            return fx("y") if ay == 1.0 else ay * fx("y")
        return ax * fx("x") + ay * fx("y")

    def grad(self, reward_of, wrt, x, y):
        if reward_of == "y":
            return self.base.grad("y", wrt, x, y)
        return self._combine("grad", wrt, None, x, y)

    def hess(self, reward_of, wrt1, wrt2, x, y):
        if reward_of == "y":
            return self.base.hess("y", wrt1, wrt2, x, y)
        return self._combine("hess", wrt1, wrt2, x, y)


def welfare_os_step(inner: LearnerConfig, wf: WelfareFunction, game: TwoPlayerGame,
                    x, y, rng: np.random.Generator) -> np.ndarray:
    """One opponent-shaping update of x's strategy on the welfare objective."""
    shaped = game if isinstance(game, WelfareShapedGame) else WelfareShapedGame(game, wf)
    state = LearnerState(inner, np.asarray(x, dtype=float).reshape(-1), rng)
    return update_strategy(state, shaped, y)


def posterior_sampling_update(assignments, rewards, welfare_set, rng) -> list[str]:
    """Resample one welfare assignment per batch index (Algorithm step).

    For each index, one reward is sampled from each candidate's usage set
    and the candidate with the highest sample wins; candidates that were
    never used are skipped. Ties go to the earliest candidate.
    """
    rewards = np.asarray(rewards, dtype=float)
    usage = {w: [i for i, a in enumerate(assignments) if a == w] for w in welfare_set}
    out = []
    for _ in range(len(assignments)):
        best_w, best_r = None, -np.inf
        for w in welfare_set:
            idxs = usage[w]
            if not idxs:
                continue
            r = rewards[idxs[int(rng.integers(len(idxs)))]]
            if r > best_r:
                best_w, best_r = w, float(r)
        out.append(best_w)
    return out


@dataclass(frozen=True)
class WelfuseConfig:
    welfare_set: tuple[str, ...] = DEFAULT_WELFARE_SET
    episodes: int = 3
    batch: int = 100
    steps: int = 1000
    inner: LearnerConfig = field(
        default_factory=lambda: LearnerConfig("elola", eta=0.1, alpha=25.0))
    seed: int = 0

    def __post_init__(self):
        if self.episodes < 1 or self.batch < 1 or self.steps < 1:
            raise ValueError("episodes, batch and steps must be positive")
        if len(self.welfare_set) < 1:
            raise ValueError("welfare_set must not be empty")


@dataclass
class EpisodeRecord:
    assignments: list[str]
    final_rewards: list[float]
    final_own: list[list[float]]
    final_opponent: list[list[float]]

    def share(self, tag: str) -> float:
        return self.assignments.count(tag) / len(self.assignments)

    def mean_reward(self) -> float:
        return float(np.mean(self.final_rewards))


@dataclass
class WelfuseHistory:
    game: str
    agent: int
    opponent: str
    welfare_set: tuple[str, ...]
    seed: int
    episodes: list[EpisodeRecord]

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "kind": "welfuse_history",
            "game": self.game,
            "agent": self.agent,
            "opponent": self.opponent,
            "welfare_set": list(self.welfare_set),
            "seed": self.seed,
            "episodes": [
                {
                    "assignments": e.assignments,
                    "final_rewards": e.final_rewards,
                    "final_own": e.final_own,
                    "final_opponent": e.final_opponent,
                }
                for e in self.episodes
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _seeded(*key) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(key))


def welfuse_run(cfg: WelfuseConfig, game: TwoPlayerGame, opponent):
    """Run the bandit. ``opponent`` is a LearnerConfig, or "self" for
    self-play between two independent instances (x and y seats).

    Returns one WelfuseHistory, or a pair of them in self-play.
    """
    self_play = isinstance(opponent, str)
    if self_play and opponent != "self":
        raise ValueError("opponent must be a LearnerConfig or the string 'self'")
    wfs = {tag: WelfareFunction(tag) for tag in cfg.welfare_set}
    shaped_x = {tag: WelfareShapedGame(game, wf) for tag, wf in wfs.items()}
    swapped = SwappedGame(game)
    if self_play:
        shaped_y = {tag: WelfareShapedGame(swapped, wf) for tag, wf in wfs.items()}
    n_agents = 2 if self_play else 1

    assigns = []
    for a in range(n_agents):
        rng = _seeded(cfg.seed, 1, a)
        assigns.append([cfg.welfare_set[int(rng.integers(len(cfg.welfare_set)))]
                        for _ in range(cfg.batch)])
    histories = [
        WelfuseHistory(game.name, a, "self" if self_play else opponent.rule,
                       cfg.welfare_set, cfg.seed, [])
        for a in range(n_agents)
    ]

    bx, by = game.bounds_x, game.bounds_y
    for ep in range(cfg.episodes):
        records = [EpisodeRecord(list(asg), [], [], []) for asg in assigns]
        for j in range(cfg.batch):
            init = _seeded(cfg.seed, 3, ep, j)
            x = init.uniform(bx[:, 0], bx[:, 1])
            y = init.uniform(by[:, 0], by[:, 1])
            rng_x = _seeded(cfg.seed, 4, 0, ep, j)
            rng_y = _seeded(cfg.seed, 4, 1, ep, j)
            gx = shaped_x[assigns[0][j]]
            if self_play:
                gy = shaped_y[assigns[1][j]]
            for _ in range(cfg.steps):
                nx = update_strategy(LearnerState(cfg.inner, x, rng_x), gx, y)
                if self_play:
                    ny = update_strategy(LearnerState(cfg.inner, y, rng_y), gy, x)
                else:
                    ny = update_strategy(LearnerState(opponent, y, rng_y), swapped, x)
                x, y = nx, ny
            rx, ry = game.reward(x, y)
            records[0].final_rewards.append(rx)
            records[0].final_own.append(list(map(float, x)))
            records[0].final_opponent.append(list(map(float, y)))
            if self_play:
                records[1].final_rewards.append(ry)
                records[1].final_own.append(list(map(float, y)))
                records[1].final_opponent.append(list(map(float, x)))
        for a in range(n_agents):
            histories[a].episodes.append(records[a])
        if ep + 1 < cfg.episodes:
            assigns = [
                posterior_sampling_update(records[a].assignments,
                                          records[a].final_rewards,
                                          cfg.welfare_set,
                                          _seeded(cfg.seed, 2, a, ep))
                for a in range(n_agents)
            ]
    return tuple(histories) if self_play else histories[0]
