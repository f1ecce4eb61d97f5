"""Gradient-based and sampling-based strategy update rules.

Every rule is written from player x's seat; to run it in the y seat, wrap
the game in :class:`welfeq.games.SwappedGame`. All rules share the same
outline: build an internal objective for the current joint strategy, take
one ascent step of size ``eta`` on it (or one sampling move), and project
back onto the strategy box.

Opponent-model rules (lookahead, elola, lola, shepherd) predict the
opponent's next strategy with one or more greedy self-reward ascent steps
of size ``alpha``. The rules differ in whether, and how, gradients flow
through that prediction:

* lookahead: prediction frozen, plain partial derivative.
* elola:     gradient flows through the one-step prediction.
* lola:      first-order surrogate R^x(x, y) + (yhat(x) - y)^T dR^x/dy.
* shepherd:  k projected inner ascent steps; ``unroll_gradient`` selects
  between the frozen and the fully unrolled gradient. With k=1 it
  reproduces lookahead (frozen) or elola (unrolled) exactly.

Where a prediction is clipped at the strategy box, the flowing gradient
for that coordinate is zero (the projection is locally constant).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .games import TwoPlayerGame

__all__ = [
    "LearnerConfig",
    "LearnerState",
    "RULES",
    "project",
    "nl_update",
    "lookahead_update",
    "elola_update",
    "lola_update",
    "shepherd_update",
    "saga_update",
    "sasa_update",
    "update_strategy",
    "objective_gradient",
]

RULES = ("nl", "lookahead", "elola", "lola", "shepherd", "saga", "sasa")


@dataclass(frozen=True)
class LearnerConfig:
    """Hyperparameters of one learner; unused fields are ignored per rule."""

    rule: str
    eta: float = 0.1
    alpha: float = 1.0
    sigma: float = 1.0
    n_samples: int = 1
    m_samples: int = 1
    inner_steps: int = 1
    unroll_gradient: bool = True

    def __post_init__(self):
        if self.rule not in RULES:
            raise ValueError(f"unknown rule {self.rule!r}; known: {RULES}")
        if self.eta < 0 or self.alpha < 0 or self.sigma < 0:
            raise ValueError("eta, alpha and sigma must be nonnegative")
        if self.n_samples < 1 or self.m_samples < 1 or self.inner_steps < 1:
            raise ValueError("sample and step counts must be positive")

    def with_rule(self, rule: str) -> "LearnerConfig":
        return replace(self, rule=rule)


@dataclass
class LearnerState:
    """A learner's mutable side: its strategy and its private RNG stream."""

    config: LearnerConfig
    strategy: np.ndarray
    rng: np.random.Generator

    def step(self, game: TwoPlayerGame, opponent_strategy: np.ndarray) -> np.ndarray:
        self.strategy = update_strategy(self, game, opponent_strategy)
        return self.strategy


def project(v: np.ndarray, bounds: np.ndarray) -> np.ndarray:
    """Clip a strategy vector onto its box."""
    return np.clip(np.asarray(v, dtype=float), bounds[:, 0], bounds[:, 1])


def _vec(v) -> np.ndarray:
    return np.asarray(v, dtype=float).reshape(-1)


def _predict_opponent(cfg, game, x, y, steps, unroll):
    """Greedy ascent prediction of the opponent, optionally with Jacobian.

    Returns (yhat, J) with J = d yhat / d x of shape (dim_y, dim_x); J is
    None when unroll is false. Clipped coordinates contribute zero rows.
    """
    by = game.bounds_y
    yk = _vec(y).copy()
    J = np.zeros((game.dim_y, game.dim_x)) if unroll else None
    for _ in range(steps):
        g = game.grad("y", "y", x, yk)
        pre = yk + cfg.alpha * g
        if unroll:
            hxy = game.hess("y", "x", "y", x, yk)  # (dx, dy)
            hyy = game.hess("y", "y", "y", x, yk)  # (dy, dy)
            J_pre = J + cfg.alpha * (hxy.T + hyy @ J)
            inside = (pre > by[:, 0]) & (pre < by[:, 1])
            J = J_pre * inside[:, None]
        yk = np.clip(pre, by[:, 0], by[:, 1])
    return yk, J


def _shepherd_gradient(cfg, game, x, y):
    yhat, J = _predict_opponent(cfg, game, x, y, cfg.inner_steps, cfg.unroll_gradient)
    g = game.grad("x", "x", x, yhat)
    if J is not None:
        g = g + J.T @ game.grad("x", "y", x, yhat)
    return g


def _lola_gradient(cfg, game, x, y):
    x = _vec(x)
    y = _vec(y)
    by = game.bounds_y
    g_yy = game.grad("y", "y", x, y)
    pre = y + cfg.alpha * g_yy
    yhat = np.clip(pre, by[:, 0], by[:, 1])
    inside = (pre > by[:, 0]) & (pre < by[:, 1])
    gx = game.grad("x", "x", x, y)
    gy = game.grad("x", "y", x, y)
    h_ry = game.hess("y", "x", "y", x, y)  # (dx, dy)
    h_rx = game.hess("x", "x", "y", x, y)
    return gx + cfg.alpha * ((h_ry * inside[None, :]) @ gy) + h_rx @ (yhat - y)


def objective_gradient(cfg: LearnerConfig, game: TwoPlayerGame, x, y) -> np.ndarray:
    """The gradient each gradient-based rule ascends at (x, y)."""
    x = _vec(x)
    y = _vec(y)
    if cfg.rule == "nl":
        return game.grad("x", "x", x, y)
    if cfg.rule == "lookahead":
        return _shepherd_gradient(replace(cfg, inner_steps=1, unroll_gradient=False), game, x, y)
    if cfg.rule == "elola":
        return _shepherd_gradient(replace(cfg, inner_steps=1, unroll_gradient=True), game, x, y)
    if cfg.rule == "shepherd":
        return _shepherd_gradient(cfg, game, x, y)
    if cfg.rule == "lola":
        return _lola_gradient(cfg, game, x, y)
    raise ValueError(f"rule {cfg.rule!r} has no ascent gradient")


def _ascend(cfg, game, x, g):
    return project(_vec(x) + cfg.eta * g, game.bounds_x)


def nl_update(state: LearnerState, game: TwoPlayerGame, opponent_strategy) -> np.ndarray:
    """Naive learner: ascend own reward's partial gradient."""
    cfg = state.config
    return _ascend(cfg, game, state.strategy,
                   game.grad("x", "x", _vec(state.strategy), _vec(opponent_strategy)))


def lookahead_update(state, game, opponent_strategy) -> np.ndarray:
    cfg = state.config.with_rule("lookahead")
    return _ascend(cfg, game, state.strategy,
                   objective_gradient(cfg, game, state.strategy, opponent_strategy))


def elola_update(state, game, opponent_strategy) -> np.ndarray:
    cfg = state.config.with_rule("elola")
    return _ascend(cfg, game, state.strategy,
                   objective_gradient(cfg, game, state.strategy, opponent_strategy))


def lola_update(state, game, opponent_strategy) -> np.ndarray:
    cfg = state.config.with_rule("lola")
    return _ascend(cfg, game, state.strategy,
                   objective_gradient(cfg, game, state.strategy, opponent_strategy))


def shepherd_update(state, game, opponent_strategy) -> np.ndarray:
    cfg = state.config.with_rule("shepherd")
    return _ascend(cfg, game, state.strategy,
                   objective_gradient(cfg, game, state.strategy, opponent_strategy))


def saga_update(state: LearnerState, game: TwoPlayerGame, opponent_strategy) -> np.ndarray:
    """Sample-and-gradient: sampled opponent best response, then a frozen
    gradient step on own reward against it."""
    cfg = state.config
    x = _vec(state.strategy)
    y = _vec(opponent_strategy)
    by = game.bounds_y
    eps = state.rng.normal(0.0, cfg.sigma, size=(cfg.n_samples, game.dim_y))
    cands = np.clip(y + eps, by[:, 0], by[:, 1])
    _, ry = game.reward_batch(x, cands)
    yhat = cands[int(np.argmax(ry))]
    return _ascend(cfg, game, x, game.grad("x", "x", x, yhat))


def sasa_update(state: LearnerState, game: TwoPlayerGame, opponent_strategy) -> np.ndarray:
    """Sample-and-sample: pick the own perturbation whose sampled opponent
    best response leaves the highest own reward, then move toward it."""
    cfg = state.config
    x = _vec(state.strategy)
    y = _vec(opponent_strategy)
    bx, by = game.bounds_x, game.bounds_y
    m, n = cfg.m_samples, cfg.n_samples
    eps_x = state.rng.normal(0.0, cfg.sigma, size=(m, game.dim_x))
    xc = np.clip(x + eps_x, bx[:, 0], bx[:, 1])
    eps_y = state.rng.normal(0.0, cfg.sigma, size=(m, n, game.dim_y))
    yc = np.clip(y + eps_y, by[:, 0], by[:, 1])
    _, ry = game.reward_batch(xc[:, None, :], yc)  # (m, n)
    yhat = yc[np.arange(m), np.argmax(ry, axis=1)]  # (m, dy)
    rx, _ = game.reward_batch(xc, yhat)  # (m,)
    best = xc[int(np.argmax(rx))]
    return project((1.0 - cfg.eta) * x + cfg.eta * best, bx)


_UPDATES = {
    "nl": nl_update,
    "lookahead": lookahead_update,
    "elola": elola_update,
    "lola": lola_update,
    "shepherd": shepherd_update,
    "saga": saga_update,
    "sasa": sasa_update,
}


def update_strategy(state: LearnerState, game: TwoPlayerGame, opponent_strategy) -> np.ndarray:
    return _UPDATES[state.config.rule](state, game, opponent_strategy)
