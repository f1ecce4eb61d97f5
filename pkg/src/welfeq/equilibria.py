"""Grid-based Stackelberg and welfare equilibria for 1-d x 1-d games.

Everything here works on a finite strategy grid. Argmax ties always break
toward the lowest grid index; that rule is intentional and load-bearing at
indifference points, where the default 1001-point grid lands exactly.

For player x the Stackelberg objective is R^x(x, y*(x)) with y*(x) the
opponent's best response to x; the welfare equilibrium (WE) strategy
replaces R^x with a welfare function w(R^x, R^y) evaluated at the same
best-response curve. The Stackelberg baseline B^x is the maximum of the
Stackelberg objective, and the arrogance penalty is B^x minus the reward
actually received when both players play their Stackelberg strategies.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .games import TwoPlayerGame

__all__ = [
    "StrategyGrid",
    "GridSolver",
    "WelfareFunction",
    "WELFARE_TAGS",
    "best_response_map",
    "stackelberg_strategy",
    "welfare_value",
    "welfare_equilibrium_strategy",
    "arrogance_penalty",
    "normalized_rewards",
    "is_nash",
    "is_coincidental",
    "we_profile_report",
    "WEProfileReport",
]

WELFARE_TAGS = (
    "greedy",
    "egalitarian",
    "fairness",
    "shift-egalitarian",
    "affine-egalitarian",
    "affine-fairness",
)

_NORMALIZED = tuple(t for t in WELFARE_TAGS if t.startswith(("shift", "affine")))


@dataclass(frozen=True)
class StrategyGrid:
    """Uniform scalar strategy grids for the two players."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        for axis in (self.x, self.y):
            a = np.asarray(axis, dtype=float)
            if a.ndim != 1 or a.size < 2:
                raise ValueError("each grid axis needs at least two points")
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float))

    @classmethod
    def for_game(cls, game: TwoPlayerGame, n: int = 1001) -> "StrategyGrid":
        if game.dim_x != 1 or game.dim_y != 1:
            raise ValueError("strategy grids require scalar strategies per player")
        bx, by = game.bounds_x[0], game.bounds_y[0]
        return cls(np.linspace(bx[0], bx[1], n), np.linspace(by[0], by[1], n))

    def axis(self, player: str) -> np.ndarray:
        return self.x if player == "x" else self.y


class GridSolver:
    """Caches reward surfaces, best-response maps and Stackelberg data."""

    def __init__(self, game: TwoPlayerGame, grid: StrategyGrid | None = None):
        self.game = game
        self.grid = grid or StrategyGrid.for_game(game)

    @cached_property
    def surfaces(self) -> tuple[np.ndarray, np.ndarray]:
        gx, gy = self.grid.x, self.grid.y
        X = gx[:, None, None]
        Y = gy[None, :, None]
        rx, ry = self.game.reward_batch(X, Y)
        return np.asarray(rx), np.asarray(ry)

    @cached_property
    def br_y_of_x(self) -> np.ndarray:
        """Index of y's best response to each x grid point (lowest-index ties)."""
        return np.argmax(self.surfaces[1], axis=1)

    @cached_property
    def br_x_of_y(self) -> np.ndarray:
        return np.argmax(self.surfaces[0], axis=0)

    def response_curve(self, player: str) -> tuple[np.ndarray, np.ndarray]:
        """(R^x, R^y) along the opponent-best-response curve of one player."""
        rx, ry = self.surfaces
        if player == "x":
            idx = np.arange(self.grid.x.size)
            return rx[idx, self.br_y_of_x], ry[idx, self.br_y_of_x]
        idx = np.arange(self.grid.y.size)
        return rx[self.br_x_of_y, idx], ry[self.br_x_of_y, idx]

    def stackelberg_objective(self, player: str) -> np.ndarray:
        rx, ry = self.response_curve(player)
        return rx if player == "x" else ry

    def stackelberg_index(self, player: str) -> int:
        return int(np.argmax(self.stackelberg_objective(player)))

    def stackelberg_baseline(self, player: str) -> float:
        return float(self.stackelberg_objective(player)[self.stackelberg_index(player)])

    @cached_property
    def stackelberg_profile(self) -> tuple[int, int]:
        return self.stackelberg_index("x"), self.stackelberg_index("y")

    def profile_rewards(self, ix: int, iy: int) -> tuple[float, float]:
        rx, ry = self.surfaces
        return float(rx[ix, iy]), float(ry[ix, iy])

    def arrogance_penalty(self, player: str) -> float:
        ix, iy = self.stackelberg_profile
        rw = self.profile_rewards(ix, iy)
        base = self.stackelberg_baseline(player)
        return base - (rw[0] if player == "x" else rw[1])

    def welfare_curve(self, player: str, wf: "WelfareFunction") -> np.ndarray:
        rx, ry = self.response_curve(player)
        return wf.value(rx, ry, player)

    def we_index(self, player: str, wf: "WelfareFunction") -> int:
        return int(np.argmax(self.welfare_curve(player, wf)))


class WelfareFunction:
    """A welfare function over the two players' rewards.

    Plain tags need no context. The shift-normalized tags subtract each
    player's Stackelberg baseline; the affine-normalized tags additionally
    divide by the magnitude of each player's arrogance penalty. Baselines
    and penalties are computed once per (game, grid) via ``for_game`` and
    cached on the instance.
    """

    def __init__(self, tag: str, baselines=None, penalties=None):
        if tag not in WELFARE_TAGS:
            raise ValueError(f"unknown welfare tag {tag!r}; known: {WELFARE_TAGS}")
        self.tag = tag
        self.baselines = None if baselines is None else (float(baselines[0]), float(baselines[1]))
        self.penalties = None if penalties is None else (float(penalties[0]), float(penalties[1]))
        if tag in _NORMALIZED and self.baselines is None:
            raise ValueError(f"{tag} needs Stackelberg baselines; use WelfareFunction.for_game")
        if tag.startswith("affine"):
            if self.penalties is None:
                raise ValueError(f"{tag} needs arrogance penalties; use WelfareFunction.for_game")
            if any(a == 0.0 for a in self.penalties):
                raise ValueError(f"{tag}: zero arrogance penalty, affine normalization is degenerate")

    @classmethod
    def for_game(cls, tag: str, game: TwoPlayerGame, grid: StrategyGrid | None = None,
                 solver: GridSolver | None = None) -> "WelfareFunction":
        if tag not in WELFARE_TAGS:
            raise ValueError(f"unknown welfare tag {tag!r}; known: {WELFARE_TAGS}")
        if tag not in _NORMALIZED:
            return cls(tag)
        solver = solver or GridSolver(game, grid)
        baselines = (solver.stackelberg_baseline("x"), solver.stackelberg_baseline("y"))
        penalties = None
        if tag.startswith("affine"):
            penalties = (solver.arrogance_penalty("x"), solver.arrogance_penalty("y"))
        return cls(tag, baselines, penalties)

    def _pi(self, rx, ry):
        bx, by = self.baselines
        px, py = np.asarray(rx) - bx, np.asarray(ry) - by
        if self.tag.startswith("affine"):
            ax, ay = self.penalties
            px, py = px / abs(ax), py / abs(ay)
        return px, py

    def value(self, rx, ry, player: str = "x"):
        rx = np.asarray(rx, dtype=float)
        ry = np.asarray(ry, dtype=float)
        if self.tag == "greedy":
            out = rx if player == "x" else ry
        elif self.tag == "egalitarian":
            out = np.minimum(rx, ry)
        elif self.tag == "fairness":
            out = -np.abs(rx - ry)
        else:
            px, py = self._pi(rx, ry)
            if self.tag.endswith("fairness"):
                out = -np.abs(px - py)
            else:
                out = np.minimum(px, py)
        return out if out.ndim else float(out)

    def linearization(self, rx: float, ry: float, player: str = "x"):
        """Active-branch local form w = ax * R^x + ay * R^y + const.

        Ties on the nonsmooth tags break toward the x-player branch.
        Returns (ax, ay).
        """
        if self.tag == "greedy":
            return (1.0, 0.0) if player == "x" else (0.0, 1.0)
        if self.tag == "egalitarian":
            return (1.0, 0.0) if rx <= ry else (0.0, 1.0)
        if self.tag == "fairness":
            s = 1.0 if rx >= ry else -1.0
            return (-s, s)
        px, py = self._pi(rx, ry)
        sx = 1.0 / abs(self.penalties[0]) if self.tag.startswith("affine") else 1.0
        sy = 1.0 / abs(self.penalties[1]) if self.tag.startswith("affine") else 1.0
        if self.tag.endswith("fairness"):
            s = 1.0 if px >= py else -1.0
            return (-s * sx, s * sy)
        return (sx, 0.0) if px <= py else (0.0, sy)

    def __repr__(self):
        return f"WelfareFunction({self.tag!r})"


# -- module-level operations ------------------------------------------------

def best_response_map(game: TwoPlayerGame, responder: str,
                      grid: StrategyGrid | None = None,
                      solver: GridSolver | None = None) -> np.ndarray:
    """Grid indices of the responder's best response to each opponent point."""
    solver = solver or GridSolver(game, grid)
    return solver.br_y_of_x if responder == "y" else solver.br_x_of_y


def stackelberg_strategy(game: TwoPlayerGame, player: str,
                         grid: StrategyGrid | None = None,
                         solver: GridSolver | None = None) -> tuple[float, float]:
    """(Stackelberg strategy, Stackelberg baseline) for one player."""
    solver = solver or GridSolver(game, grid)
    idx = solver.stackelberg_index(player)
    return float(solver.grid.axis(player)[idx]), solver.stackelberg_baseline(player)


def welfare_value(wf: WelfareFunction, rx, ry, player: str = "x"):
    return wf.value(rx, ry, player)


def welfare_equilibrium_strategy(game: TwoPlayerGame, player: str, wf: WelfareFunction,
                                 grid: StrategyGrid | None = None,
                                 solver: GridSolver | None = None) -> tuple[float, float]:
    """(WE strategy, welfare value at the WE point) for one player."""
    solver = solver or GridSolver(game, grid)
    idx = solver.we_index(player, wf)
    return float(solver.grid.axis(player)[idx]), float(solver.welfare_curve(player, wf)[idx])


def arrogance_penalty(game: TwoPlayerGame, player: str,
                      grid: StrategyGrid | None = None,
                      solver: GridSolver | None = None) -> float:
    solver = solver or GridSolver(game, grid)
    return solver.arrogance_penalty(player)


def normalized_rewards(game: TwoPlayerGame, x: float, y: float, mode: str = "shift",
                       grid: StrategyGrid | None = None,
                       solver: GridSolver | None = None) -> tuple[float, float]:
    """Shift- or affine-normalized rewards at a joint strategy."""
    if mode not in ("shift", "affine"):
        raise ValueError("mode must be 'shift' or 'affine'")
    solver = solver or GridSolver(game, grid)
    rx, ry = game.reward([x], [y])
    bx = solver.stackelberg_baseline("x")
    by = solver.stackelberg_baseline("y")
    px, py = rx - bx, ry - by
    if mode == "affine":
        ax = solver.arrogance_penalty("x")
        ay = solver.arrogance_penalty("y")
        if ax == 0.0 or ay == 0.0:
            raise ValueError("zero arrogance penalty, affine normalization is degenerate")
        px, py = px / abs(ax), py / abs(ay)
    return px, py


def _snap(axis: np.ndarray, v: float) -> int:
    return int(np.argmin(np.abs(axis - v)))


def is_nash(game: TwoPlayerGame, x: float, y: float,
            grid: StrategyGrid | None = None, tol: float = 1e-9,
            solver: GridSolver | None = None) -> bool:
    """Whether no player can improve by more than tol over their grid."""
    solver = solver or GridSolver(game, grid)
    rx, ry = solver.surfaces
    ix = _snap(solver.grid.x, x)
    iy = _snap(solver.grid.y, y)
    return bool(rx[:, iy].max() <= rx[ix, iy] + tol and
                ry[ix, :].max() <= ry[ix, iy] + tol)


def is_coincidental(game: TwoPlayerGame, grid: StrategyGrid | None = None,
                    tol: float = 1e-2, solver: GridSolver | None = None) -> bool:
    """Whether the Stackelberg profile is a Nash equilibrium.

    The default tolerance is commensurate with the grid resolution: a
    profile snapped to the grid next to a mixed equilibrium carries a
    deviation gain of order (payoff slope) * (grid spacing), which must
    not flip the classification.
    """
    solver = solver or GridSolver(game, grid)
    ix, iy = solver.stackelberg_profile
    return is_nash(game, float(solver.grid.x[ix]), float(solver.grid.y[iy]),
                   tol=tol, solver=solver)


# -- report -----------------------------------------------------------------

@dataclass
class WEProfileReport:
    """Everything needed to draw a WE summary figure for one game."""

    game: str
    welfare_x: str
    welfare_y: str
    grid_x: np.ndarray
    grid_y: np.ndarray
    surface_x: np.ndarray
    surface_y: np.ndarray
    br_y_of_x: np.ndarray
    br_x_of_y: np.ndarray
    curve_x: np.ndarray
    curve_y: np.ndarray
    profile: dict

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "kind": "we_report",
            "game": self.game,
            "welfare_x": self.welfare_x,
            "welfare_y": self.welfare_y,
            "grid": {"x": self.grid_x.tolist(), "y": self.grid_y.tolist()},
            "surface_x": self.surface_x.tolist(),
            "surface_y": self.surface_y.tolist(),
            "br_y_of_x": self.grid_y[self.br_y_of_x].tolist(),
            "br_x_of_y": self.grid_x[self.br_x_of_y].tolist(),
            "curves": {"welfare_x": self.curve_x.tolist(), "welfare_y": self.curve_y.tolist()},
            "profile": self.profile,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def we_profile_report(game: TwoPlayerGame, wf_x: WelfareFunction, wf_y: WelfareFunction,
                      grid: StrategyGrid | None = None,
                      solver: GridSolver | None = None) -> WEProfileReport:
    solver = solver or GridSolver(game, grid)
    g = solver.grid
    ix = solver.we_index("x", wf_x)
    iy = solver.we_index("y", wf_y)
    rx, ry = solver.profile_rewards(ix, iy)
    six, siy = solver.stackelberg_profile
    profile = {
        "x": float(g.x[ix]),
        "y": float(g.y[iy]),
        "reward_x": rx,
        "reward_y": ry,
        "welfare_value_x": float(solver.welfare_curve("x", wf_x)[ix]),
        "welfare_value_y": float(solver.welfare_curve("y", wf_y)[iy]),
        "stackelberg": {
            "x": float(g.x[six]),
            "y": float(g.y[siy]),
            "baseline_x": solver.stackelberg_baseline("x"),
            "baseline_y": solver.stackelberg_baseline("y"),
            "arrogance_x": solver.arrogance_penalty("x"),
            "arrogance_y": solver.arrogance_penalty("y"),
        },
        "coincidental": is_coincidental(game, solver=solver),
    }
    return WEProfileReport(
        game=game.name,
        welfare_x=wf_x.tag,
        welfare_y=wf_y.tag,
        grid_x=g.x,
        grid_y=g.y,
        surface_x=solver.surfaces[0],
        surface_y=solver.surfaces[1],
        br_y_of_x=solver.br_y_of_x,
        br_x_of_y=solver.br_x_of_y,
        curve_x=solver.welfare_curve("x", wf_x),
        curve_y=solver.welfare_curve("y", wf_y),
        profile=profile,
    )
