"""Iterated prisoner's dilemma with memory-one strategies.

A strategy is a 5-vector ``(p0, pCC, pCD, pDC, pDD)``: the probability of
cooperating on the first move and after each of the four previous joint
outcomes. Outcome states are ordered own-move-first: CC, CD, DC, DD from
the owner's perspective. The discounted value is computed in closed form,

    v = (1 - gamma) d0^T (I - gamma M)^{-1} r,

with d0 the first-move outcome distribution and M the Markov transition
matrix over outcome states.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .games import PayoffTable2x2, TwoPlayerGame, load_payoff_tables

__all__ = [
    "IpdConfig",
    "ipd_value",
    "ipd_value_gradient",
    "ipd_tft_alld_mix",
    "IpdGame",
    "IpdTftAlldMixGame",
    "TFT",
    "ALLD",
]

TFT = np.array([1.0, 1.0, 0.0, 1.0, 0.0])
ALLD = np.zeros(5)

# y's cooperation probability in state s (own-move-first for x) uses y's
# own-move-first index: CC->qCC, CD->qDC, DC->qCD, DD->qDD.
_QIDX = np.array([1, 3, 2, 4])
_PIDX = np.array([1, 2, 3, 4])


def _default_table() -> PayoffTable2x2:
    return load_payoff_tables()["PrisonersDilemma"]


@dataclass(frozen=True)
class IpdConfig:
    gamma: float = 0.96
    table: PayoffTable2x2 = field(default_factory=_default_table)

    def __post_init__(self):
        if not (0.0 <= self.gamma < 1.0):
            raise ValueError("gamma must lie in [0, 1)")

    def per_state_rewards(self) -> tuple[np.ndarray, np.ndarray]:
        ax, ay = self.table.matrix("x"), self.table.matrix("y")
        rx = np.array([ax[0, 0], ax[0, 1], ax[1, 0], ax[1, 1]])
        ry = np.array([ay[0, 0], ay[0, 1], ay[1, 0], ay[1, 1]])
        return rx, ry


def _check_prob(v, what):
    if np.any(v < 0.0) or np.any(v > 1.0):
        raise ValueError(f"{what} entries must be probabilities")


def _markov(P, Q):
    """d0 (..., 4) and transition matrix M (..., 4, 4) for batched strategies."""
    p0, q0 = P[..., 0], Q[..., 0]
    d0 = np.stack(
        [p0 * q0, p0 * (1 - q0), (1 - p0) * q0, (1 - p0) * (1 - q0)], axis=-1
    )
    pc = P[..., _PIDX]  # (..., 4) own cooperation prob per state
    qc = Q[..., _QIDX]
    M = np.stack(
        [pc * qc, pc * (1 - qc), (1 - pc) * qc, (1 - pc) * (1 - qc)], axis=-1
    )
    return d0, M


def ipd_value(p, q, config: IpdConfig | None = None):
    """Discounted average rewards (v_x, v_y); batched over leading axes."""
    cfg = config or IpdConfig()
    P = np.asarray(p, dtype=float)
    Q = np.asarray(q, dtype=float)
    if P.shape[-1] != 5 or Q.shape[-1] != 5:
        raise ValueError("memory-one strategies have 5 entries")
    _check_prob(P, "p")
    _check_prob(Q, "q")
    rx, ry = cfg.per_state_rewards()
    d0, M = _markov(P, Q)
    A = np.eye(4) - cfg.gamma * M
    z = np.linalg.solve(A, np.stack([rx, ry], axis=-1))  # (..., 4, 2)
    v = (1 - cfg.gamma) * np.einsum("...s,...sk->...k", d0, z)
    return v[..., 0], v[..., 1]


def ipd_value_gradient(p, q, reward_of: str = "x", wrt: str = "x",
                       config: IpdConfig | None = None) -> np.ndarray:
    """Exact gradient of one player's value with respect to one strategy.

    Uses forward sensitivity of the linear system: with A = I - gamma M,
    z = A^{-1} r and w = A^{-T} d0,

        dv/dtheta = (1-gamma) [ (d d0)^T z + gamma w^T (d M) z ].

    Both d0 and M are linear in each strategy entry, so the directional
    derivatives have one nonzero row each.
    """
    cfg = config or IpdConfig()
    P = np.asarray(p, dtype=float).reshape(5)
    Q = np.asarray(q, dtype=float).reshape(5)
    _check_prob(P, "p")
    _check_prob(Q, "q")
    rx, ry = cfg.per_state_rewards()
    r = rx if reward_of == "x" else ry
    d0, M = _markov(P, Q)
    A = np.eye(4) - cfg.gamma * M
    z = np.linalg.solve(A, r)
    w = np.linalg.solve(A.T, d0)
    gamma = cfg.gamma
    pc = P[_PIDX]
    qc = Q[_QIDX]
    grad = np.empty(5)
    if wrt == "x":
        q0 = Q[0]
        dd0 = np.array([q0, 1 - q0, -q0, -(1 - q0)])
        grad[0] = (1 - gamma) * dd0 @ z
        # dM/dp_{s+1} only changes row s
        for s in range(4):
            drow = np.array([qc[s], 1 - qc[s], -qc[s], -(1 - qc[s])])
            grad[s + 1] = (1 - gamma) * gamma * w[s] * (drow @ z)
    else:
        p0 = P[0]
        dd0 = np.array([p0, -p0, 1 - p0, -(1 - p0)])
        grad[0] = (1 - gamma) * dd0 @ z
        # q enters row s through y's own-move-first index _QIDX[s]; a single
        # q entry can drive several rows, so accumulate.
        grad[1:] = 0.0
        for s in range(4):
            drow = np.array([pc[s], -pc[s], 1 - pc[s], -(1 - pc[s])])
            grad[_QIDX[s]] += (1 - gamma) * gamma * w[s] * (drow @ z)
    return grad


def ipd_tft_alld_mix(t: float) -> np.ndarray:
    """The memory-one mixture t * TFT + (1 - t) * AllD."""
    if not (0.0 <= t <= 1.0):
        raise ValueError("mixture weight must lie in [0, 1]")
    return t * TFT


class IpdGame(TwoPlayerGame):
    """The IPD over full memory-one strategy vectors."""

    dim_x = 5
    dim_y = 5
    name = "IPD"

    def __init__(self, config: IpdConfig | None = None):
        super().__init__(np.tile([0.0, 1.0], (5, 1)), np.tile([0.0, 1.0], (5, 1)))
        self.config = config or IpdConfig()

    def reward_batch(self, X, Y):
        return ipd_value(X, Y, self.config)

    def grad(self, reward_of, wrt, x, y):
        return ipd_value_gradient(x, y, reward_of, wrt, self.config)


class IpdTftAlldMixGame(TwoPlayerGame):
    """One-parameter IPD family: each player mixes TFT with AllD."""

    dim_x = 1
    dim_y = 1
    name = "IpdTftAlldMix"

    def __init__(self, config: IpdConfig | None = None):
        super().__init__([[0.0, 1.0]], [[0.0, 1.0]])
        self.config = config or IpdConfig()

    def reward_batch(self, X, Y):
        tx = np.asarray(X, dtype=float)[..., 0]
        ty = np.asarray(Y, dtype=float)[..., 0]
        tx, ty = np.broadcast_arrays(tx, ty)
        P = tx[..., None] * TFT
        Q = ty[..., None] * TFT
        # chunk the batched linear solves to bound peak memory on big grids
        flat_p = P.reshape(-1, 5)
        flat_q = Q.reshape(-1, 5)
        out_x = np.empty(flat_p.shape[0])
        out_y = np.empty(flat_p.shape[0])
        step = 1 << 16
        for i in range(0, flat_p.shape[0], step):
            vx, vy = ipd_value(flat_p[i:i + step], flat_q[i:i + step], self.config)
            out_x[i:i + step] = vx
            out_y[i:i + step] = vy
        return out_x.reshape(tx.shape), out_y.reshape(tx.shape)

    def grad(self, reward_of, wrt, x, y):
        tx = float(np.asarray(x).reshape(-1)[0])
        ty = float(np.asarray(y).reshape(-1)[0])
        g = ipd_value_gradient(ipd_tft_alld_mix(tx), ipd_tft_alld_mix(ty),
                               reward_of, wrt, self.config)
        return np.array([g @ TFT])
