"""Two-player differentiable games on box-bounded strategy spaces.

Conventions used throughout the package:

* A strategy for each player is a vector inside an axis-aligned box.
  For 2x2 matrix games the vector is one-dimensional and holds the
  probability of playing the first listed action.
* ``reward_of`` / ``wrt`` arguments are the strings ``"x"`` and ``"y"``;
  player x is always the first component of a reward pair.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

__all__ = [
    "Strategy",
    "PayoffTable2x2",
    "TwoPlayerGame",
    "MatrixGame",
    "ImpossibleMarket",
    "Tandem",
    "SwappedGame",
    "load_payoff_tables",
    "dump_payoff_tables",
    "matrix_game_reward",
    "impossible_market_reward",
    "tandem_reward",
    "reward_gradient",
    "finite_difference_gradient",
]

PLAYERS = ("x", "y")


def _as_bounds(b) -> np.ndarray:
    b = np.asarray(b, dtype=float)
    if b.ndim != 2 or b.shape[1] != 2 or not np.all(b[:, 0] < b[:, 1]):
        raise ValueError("bounds must be a (dim, 2) array with lo < hi")
    return b


@dataclass(frozen=True)
class Strategy:
    """A strategy vector together with the box it must live in."""

    values: np.ndarray
    bounds: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).reshape(-1)
        b = _as_bounds(self.bounds)
        if v.shape[0] != b.shape[0]:
            raise ValueError("strategy/bounds dimension mismatch")
        if np.any(v < b[:, 0]) or np.any(v > b[:, 1]):
            raise ValueError("strategy outside its bounds")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "bounds", b)


@dataclass(frozen=True)
class PayoffTable2x2:
    """A 2x2 bimatrix payoff table.

    ``cells[i][j]`` is the ``(reward_x, reward_y)`` pair when player x
    plays its action ``i`` and player y plays its action ``j`` (action 0
    is the first listed one).
    """

    name: str
    actions_x: tuple[str, str]
    actions_y: tuple[str, str]
    cells: tuple[tuple[tuple[float, float], tuple[float, float]],
                 tuple[tuple[float, float], tuple[float, float]]]

    def __post_init__(self):
        cells = tuple(
            tuple(tuple(float(v) for v in cell) for cell in row)
            for row in self.cells
        )
        if len(cells) != 2 or any(len(r) != 2 for r in cells):
            raise ValueError("cells must be 2x2")
        for row in cells:
            for cell in row:
                if len(cell) != 2 or not all(np.isfinite(v) for v in cell):
                    raise ValueError("each cell needs two finite rewards")
        object.__setattr__(self, "actions_x", tuple(self.actions_x))
        object.__setattr__(self, "actions_y", tuple(self.actions_y))
        object.__setattr__(self, "cells", cells)
        if len(self.actions_x) != 2 or len(self.actions_y) != 2:
            raise ValueError("each player needs exactly two actions")

    def matrix(self, player: str) -> np.ndarray:
        k = PLAYERS.index(player)
        return np.array([[self.cells[i][j][k] for j in (0, 1)] for i in (0, 1)])

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "actions_x": list(self.actions_x),
            "actions_y": list(self.actions_y),
            "cells": [[list(cell) for cell in row] for row in self.cells],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PayoffTable2x2":
        return cls(
            name=d["name"],
            actions_x=tuple(d["actions_x"]),
            actions_y=tuple(d["actions_y"]),
            cells=tuple(tuple(tuple(cell) for cell in row) for row in d["cells"]),
        )


def load_payoff_tables(path=None) -> dict[str, PayoffTable2x2]:
    """Load payoff tables from a JSON file (the packaged set by default)."""
    if path is None:
        text = resources.files("welfeq").joinpath("data/matrix_games.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    doc = json.loads(text)
    tables = [PayoffTable2x2.from_dict(d) for d in doc["tables"]]
    return {t.name: t for t in tables}


def dump_payoff_tables(tables, path) -> None:
    doc = {"tables": [t.to_dict() for t in tables]}
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


class TwoPlayerGame:
    """Base class: rewards, analytic first derivatives, cross/own Hessians.

    Subclasses implement ``reward_batch`` (vectorised over leading axes)
    and ``grad``. ``hess`` has a central finite-difference fallback taken
    over the analytic gradient, so second derivatives are available for
    every game even when no closed form is implemented.
    """

    name: str = "game"
    dim_x: int = 1
    dim_y: int = 1

    def __init__(self, bounds_x, bounds_y):
        self.bounds_x = _as_bounds(bounds_x)
        self.bounds_y = _as_bounds(bounds_y)

    def bounds(self, player: str) -> np.ndarray:
        return self.bounds_x if player == "x" else self.bounds_y

    def dim(self, player: str) -> int:
        return self.dim_x if player == "x" else self.dim_y

    # -- rewards -----------------------------------------------------------
    def reward_batch(self, X, Y) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def reward(self, x, y) -> tuple[float, float]:
        x = np.asarray(x, dtype=float).reshape(-1)
        y = np.asarray(y, dtype=float).reshape(-1)
        self._check_domain(x, y)
        rx, ry = self.reward_batch(x, y)
        return float(rx), float(ry)

    def _check_domain(self, x, y) -> None:
        bx, by = self.bounds_x, self.bounds_y
        if np.any(x < bx[:, 0]) or np.any(x > bx[:, 1]):
            raise ValueError(f"{self.name}: x strategy outside domain")
        if np.any(y < by[:, 0]) or np.any(y > by[:, 1]):
            raise ValueError(f"{self.name}: y strategy outside domain")

    # -- derivatives -------------------------------------------------------
    def grad(self, reward_of: str, wrt: str, x, y) -> np.ndarray:
        raise NotImplementedError

    def hess(self, reward_of: str, wrt1: str, wrt2: str, x, y) -> np.ndarray:
        """d^2 R^{reward_of} / d wrt1 d wrt2, shape (dim(wrt1), dim(wrt2)).

        Fallback: central differences of the analytic gradient.
        """
        x = np.asarray(x, dtype=float).reshape(-1)
        y = np.asarray(y, dtype=float).reshape(-1)
        h = 1e-5
        d1 = self.dim(wrt1)
        out = np.empty((d1, self.dim(wrt2)))
        for i in range(d1):
            e = np.zeros(d1)
            e[i] = h
            if wrt1 == "x":
                gp = self.grad(reward_of, wrt2, x + e, y)
                gm = self.grad(reward_of, wrt2, x - e, y)
            else:
                gp = self.grad(reward_of, wrt2, x, y + e)
                gm = self.grad(reward_of, wrt2, x, y - e)
            out[i] = (gp - gm) / (2 * h)
        return out

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


def reward_gradient(game: TwoPlayerGame, player: str, x, y) -> np.ndarray:
    """Gradient of a player's own reward with respect to its own strategy."""
    if player not in PLAYERS:
        raise ValueError(f"unknown player {player!r}")
    return game.grad(player, player, x, y)


def finite_difference_gradient(f, v, h: float = 1e-5) -> np.ndarray:
    """Central finite differences of a scalar function of a vector."""
    v = np.asarray(v, dtype=float).reshape(-1)
    g = np.empty_like(v)
    for i in range(v.size):
        e = np.zeros_like(v)
        e[i] = h
        g[i] = (f(v + e) - f(v - e)) / (2 * h)
    return g


class MatrixGame(TwoPlayerGame):
    """Mixed extension of a 2x2 bimatrix game.

    With p the probability of x's first action and q of y's, each reward
    is bilinear: R = c0 + cx p + cy q + cxy p q.
    """

    dim_x = 1
    dim_y = 1

    def __init__(self, table: PayoffTable2x2):
        super().__init__([[0.0, 1.0]], [[0.0, 1.0]])
        self.table = table
        self.name = table.name
        self._coef = {}
        for player in PLAYERS:
            a = table.matrix(player)
            self._coef[player] = (
                a[1, 1],
                a[0, 1] - a[1, 1],
                a[1, 0] - a[1, 1],
                a[0, 0] - a[0, 1] - a[1, 0] + a[1, 1],
            )

    def _eval(self, player, p, q):
        c0, cx, cy, cxy = self._coef[player]
        return c0 + cx * p + cy * q + cxy * p * q

    def reward_batch(self, X, Y):
        p = np.asarray(X, dtype=float)[..., 0] if np.ndim(X) else np.asarray(X)
        q = np.asarray(Y, dtype=float)[..., 0] if np.ndim(Y) else np.asarray(Y)
        return self._eval("x", p, q), self._eval("y", p, q)

    def grad(self, reward_of, wrt, x, y):
        p = float(np.asarray(x).reshape(-1)[0])
        q = float(np.asarray(y).reshape(-1)[0])
        c0, cx, cy, cxy = self._coef[reward_of]
        if wrt == "x":
            return np.array([cx + cxy * q])
        return np.array([cy + cxy * p])

    def hess(self, reward_of, wrt1, wrt2, x, y):
        cxy = self._coef[reward_of][3]
        if wrt1 != wrt2:
            return np.array([[cxy]])
        return np.array([[0.0]])


def matrix_game_reward(table: PayoffTable2x2, x: float, y: float) -> tuple[float, float]:
    """Expected rewards of the mixed extension at first-action probabilities."""
    if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
        raise ValueError("mixed strategies must lie in [0, 1]")
    return MatrixGame(table).reward([x], [y])


class ImpossibleMarket(TwoPlayerGame):
    """A smooth scalar game with a deceptive Stackelberg solution.

    R^x = -x^6/6 + x^2/2 - x y - S,  R^y = -y^6/6 + y^2/2 + x y + S,
    where S = (y^4/(1+x^2) - x^4/(1+y^2)) / 4. Note R^x + R^y depends
    only on the separable polynomial part; that identity supplies the
    y-player derivatives below.
    """

    dim_x = 1
    dim_y = 1
    name = "ImpossibleMarket"

    def __init__(self, box: float = 2.0):
        super().__init__([[-box, box]], [[-box, box]])

    def reward_batch(self, X, Y):
        x = np.asarray(X, dtype=float)[..., 0] if np.ndim(X) else np.asarray(X)
        y = np.asarray(Y, dtype=float)[..., 0] if np.ndim(Y) else np.asarray(Y)
        s = 0.25 * (y**4 / (1 + x**2) - x**4 / (1 + y**2))
        rx = -(x**6) / 6 + x**2 / 2 - x * y - s
        ry = -(y**6) / 6 + y**2 / 2 + x * y + s
        return rx, ry

    @staticmethod
    def _dx_rx(x, y):
        return -(x**5) + x - y + x * y**4 / (2 * (1 + x**2) ** 2) + x**3 / (1 + y**2)

    @staticmethod
    def _dy_rx(x, y):
        return -x - y**3 / (1 + x**2) - x**4 * y / (2 * (1 + y**2) ** 2)

    def grad(self, reward_of, wrt, x, y):
        x = float(np.asarray(x).reshape(-1)[0])
        y = float(np.asarray(y).reshape(-1)[0])
        g = self._dx_rx(x, y) if wrt == "x" else self._dy_rx(x, y)
        if reward_of == "y":
            # R^y = (f(x) + f(y)) - R^x with f(t) = -t^6/6 + t^2/2
            sep = (x - x**5) if wrt == "x" else (y - y**5)
            g = sep - g
        return np.array([g])

    def hess(self, reward_of, wrt1, wrt2, x, y):
        x = float(np.asarray(x).reshape(-1)[0])
        y = float(np.asarray(y).reshape(-1)[0])
        if wrt1 == wrt2 == "x":
            h = -5 * x**4 + 1 + y**4 * (1 - 3 * x**2) / (2 * (1 + x**2) ** 3) \
                + 3 * x**2 / (1 + y**2)
            sep = 1 - 5 * x**4
        elif wrt1 == wrt2 == "y":
            h = -3 * y**2 / (1 + x**2) - x**4 * (1 - 3 * y**2) / (2 * (1 + y**2) ** 3)
            sep = 1 - 5 * y**4
        else:
            h = -1 + 2 * x * y**3 / (1 + x**2) ** 2 - 2 * x**3 * y / (1 + y**2) ** 2
            sep = 0.0
        if reward_of == "y":
            h = sep - h
        return np.array([[h]])


def impossible_market_reward(x: float, y: float, box: float = 2.0) -> tuple[float, float]:
    return ImpossibleMarket(box).reward([x], [y])


class Tandem(TwoPlayerGame):
    """R^x = 2x - (x+y)^2, R^y = 2y - (x+y)^2 on [-2, 3]^2."""

    dim_x = 1
    dim_y = 1
    name = "Tandem"

    def __init__(self, lo: float = -2.0, hi: float = 3.0):
        super().__init__([[lo, hi]], [[lo, hi]])

    def reward_batch(self, X, Y):
        x = np.asarray(X, dtype=float)[..., 0] if np.ndim(X) else np.asarray(X)
        y = np.asarray(Y, dtype=float)[..., 0] if np.ndim(Y) else np.asarray(Y)
        s = (x + y) ** 2
        return 2 * x - s, 2 * y - s

    def grad(self, reward_of, wrt, x, y):
        x = float(np.asarray(x).reshape(-1)[0])
        y = float(np.asarray(y).reshape(-1)[0])
        g = -2 * (x + y)
        if reward_of == wrt:
            g += 2.0
        return np.array([g])

    def hess(self, reward_of, wrt1, wrt2, x, y):
        return np.array([[-2.0]])


def tandem_reward(x: float, y: float) -> tuple[float, float]:
    g = Tandem()
    if not (-2.0 <= x <= 3.0 and -2.0 <= y <= 3.0):
        raise ValueError("Tandem strategies must lie in [-2, 3]")
    return g.reward([x], [y])


def _swap(player: str) -> str:
    return "y" if player == "x" else "x"


class SwappedGame(TwoPlayerGame):
    """The same game viewed from the other seat (x and y exchanged)."""

    def __init__(self, base: TwoPlayerGame):
        super().__init__(base.bounds_y, base.bounds_x)
        self.base = base
        self.name = base.name + ":swapped"
        self.dim_x = base.dim_y
        self.dim_y = base.dim_x

    def reward_batch(self, X, Y):
        rx, ry = self.base.reward_batch(Y, X)
        return ry, rx

    def grad(self, reward_of, wrt, x, y):
        return self.base.grad(_swap(reward_of), _swap(wrt), y, x)

    def hess(self, reward_of, wrt1, wrt2, x, y):
        return self.base.hess(_swap(reward_of), _swap(wrt1), _swap(wrt2), y, x)
