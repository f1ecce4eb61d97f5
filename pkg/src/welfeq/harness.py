"""Match orchestration, deterministic seeding, and result serialization.

A match runs two learners against each other with simultaneous updates:
on every step both players read the same pre-step snapshot of the joint
strategy and move at once. Trajectories record the full path including
the initial point, so a match of ``steps`` updates yields ``steps + 1``
rows.

Randomness is split from a single master seed with
:class:`numpy.random.SeedSequence`: the master sequence spawns one child
per trial, and each trial child spawns three independent streams (init,
player x, player y). Every trial is therefore self-contained, and running
trials serially or across worker threads produces byte-identical output.
"""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .catalog import build_game
from .games import SwappedGame, TwoPlayerGame
from .learners import LearnerConfig, LearnerState

__all__ = [
    "ExperimentConfig",
    "TrajectoryRecord",
    "run_match",
    "run_trials",
    "phase_portrait",
    "trajectory_to_json",
    "trajectory_from_json",
    "trajectory_to_csv",
    "trajectory_from_csv",
    "trajectories_to_json",
    "trajectories_from_json",
]


@dataclass(frozen=True)
class ExperimentConfig:
    """One match setup: game, a learner per seat, length, and seeding.

    ``init_x`` / ``init_y`` fix the starting strategies; leaving them
    ``None`` draws the start uniformly from the strategy box (a fresh
    draw per trial).
    """

    game: str
    learner_x: LearnerConfig
    learner_y: LearnerConfig
    steps: int
    trials: int = 1
    seed: int = 0
    init_x: tuple[float, ...] | None = None
    init_y: tuple[float, ...] | None = None
    gamma: float = 0.96

    def __post_init__(self):
        if self.steps < 0:
            raise ValueError(f"steps must be >= 0, got {self.steps}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        build_game(self.game, gamma=self.gamma)  # fail fast on unknown names

    def build(self) -> TwoPlayerGame:
        return build_game(self.game, gamma=self.gamma)


@dataclass
class TrajectoryRecord:
    """Path of one match: strategies and rewards at every step.

    ``xs`` has shape (steps + 1, dim_x), ``ys`` (steps + 1, dim_y), and
    ``rx`` / ``ry`` hold each player's reward at the recorded joint
    strategy. ``elapsed_seconds`` is measured per run but deliberately
    left out of the serialized forms so identical configs serialize
    identically.
    """

    xs: np.ndarray
    ys: np.ndarray
    rx: np.ndarray
    ry: np.ndarray
    metadata: dict = field(default_factory=dict)
    elapsed_seconds: float | None = None

    def __post_init__(self):
        self.xs = np.atleast_2d(np.asarray(self.xs, dtype=float))
        self.ys = np.atleast_2d(np.asarray(self.ys, dtype=float))
        self.rx = np.asarray(self.rx, dtype=float)
        self.ry = np.asarray(self.ry, dtype=float)
        n = self.xs.shape[0]
        if not (self.ys.shape[0] == self.rx.shape[0] == self.ry.shape[0] == n):
            raise ValueError("trajectory arrays disagree on length")

    def __len__(self) -> int:
        return self.xs.shape[0]

    def final_rewards(self) -> tuple[float, float]:
        return float(self.rx[-1]), float(self.ry[-1])

    def __eq__(self, other) -> bool:
        if not isinstance(other, TrajectoryRecord):
            return NotImplemented
        return (
            np.array_equal(self.xs, other.xs)
            and np.array_equal(self.ys, other.ys)
            and np.array_equal(self.rx, other.rx)
            and np.array_equal(self.ry, other.ry)
            and self.metadata == other.metadata
        )


def _learner_meta(cfg: LearnerConfig) -> dict:
    return {
        "rule": cfg.rule,
        "eta": cfg.eta,
        "alpha": cfg.alpha,
        "sigma": cfg.sigma,
        "n_samples": cfg.n_samples,
        "m_samples": cfg.m_samples,
        "inner_steps": cfg.inner_steps,
        "unroll_gradient": cfg.unroll_gradient,
    }


def _run_single(cfg: ExperimentConfig, trial: int,
                trial_seq: np.random.SeedSequence) -> TrajectoryRecord:
    t0 = time.perf_counter()
    game = cfg.build()
    init_seq, x_seq, y_seq = trial_seq.spawn(3)
    init_rng = np.random.default_rng(init_seq)

    if cfg.init_x is not None:
        x = np.asarray(cfg.init_x, dtype=float)
    else:
        bx = game.bounds_x
        x = init_rng.uniform(bx[:, 0], bx[:, 1])
    if cfg.init_y is not None:
        y = np.asarray(cfg.init_y, dtype=float)
    else:
        by = game.bounds_y
        y = init_rng.uniform(by[:, 0], by[:, 1])

    swapped = SwappedGame(game)
    state_x = LearnerState(cfg.learner_x, x, np.random.default_rng(x_seq))
    state_y = LearnerState(cfg.learner_y, y, np.random.default_rng(y_seq))

    xs = np.empty((cfg.steps + 1, x.size))
    ys = np.empty((cfg.steps + 1, y.size))
    xs[0], ys[0] = x, y
    for t in range(cfg.steps):
        x_now = state_x.strategy.copy()
        y_now = state_y.strategy.copy()
        xs[t + 1] = state_x.step(game, y_now)
        ys[t + 1] = state_y.step(swapped, x_now)

    rx, ry = game.reward_batch(xs, ys)
    meta = {
        "game": cfg.game,
        "seed": cfg.seed,
        "trial": trial,
        "steps": cfg.steps,
        "gamma": cfg.gamma,
        "learner_x": _learner_meta(cfg.learner_x),
        "learner_y": _learner_meta(cfg.learner_y),
    }
    return TrajectoryRecord(xs, ys, rx, ry, meta, time.perf_counter() - t0)


def run_match(cfg: ExperimentConfig) -> TrajectoryRecord:
    """Run the first trial of ``cfg`` and return its trajectory."""
    trial_seq = np.random.SeedSequence(cfg.seed).spawn(1)[0]
    return _run_single(cfg, 0, trial_seq)


def run_trials(cfg: ExperimentConfig, workers: int = 1) -> list[TrajectoryRecord]:
    """Run all trials of ``cfg``, optionally across worker threads.

    Output is sorted by trial index and is byte-identical for any
    ``workers`` value because every trial owns pre-spawned RNG streams.
    """
    seqs = np.random.SeedSequence(cfg.seed).spawn(cfg.trials)
    if workers <= 1:
        return [_run_single(cfg, i, s) for i, s in enumerate(seqs)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_run_single, cfg, i, s) for i, s in enumerate(seqs)]
        return [f.result() for f in futures]


def phase_portrait(cfg: ExperimentConfig, grid_x: int = 20, grid_y: int = 20,
                   workers: int = 1) -> list[TrajectoryRecord]:
    """Run one trajectory from each point of a uniform init grid.

    Requires one-dimensional strategies per player. Grid points are
    ordered row-major (x index outer, y index inner) and each point uses
    the same per-trial stream derivation as :func:`run_trials`, so a
    1x1 grid reproduces ``run_match`` with that fixed init.
    """
    game = cfg.build()
    if game.bounds_x.shape[0] != 1 or game.bounds_y.shape[0] != 1:
        raise ValueError("phase portraits need 1D strategies for both players")
    if grid_x < 1 or grid_y < 1:
        raise ValueError("init grid must have at least one point per axis")
    axis_x = np.linspace(game.bounds_x[0, 0], game.bounds_x[0, 1], grid_x)
    axis_y = np.linspace(game.bounds_y[0, 0], game.bounds_y[0, 1], grid_y)

    inits = [((float(a),), (float(b),)) for a in axis_x for b in axis_y]
    seqs = np.random.SeedSequence(cfg.seed).spawn(len(inits))

    def one(i):
        sub = ExperimentConfig(
            game=cfg.game, learner_x=cfg.learner_x, learner_y=cfg.learner_y,
            steps=cfg.steps, trials=1, seed=cfg.seed,
            init_x=inits[i][0], init_y=inits[i][1], gamma=cfg.gamma)
        return _run_single(sub, i, seqs[i])

    if workers <= 1:
        return [one(i) for i in range(len(inits))]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(one, i) for i in range(len(inits))]
        return [f.result() for f in futures]


# --- serialization ---------------------------------------------------------


def _record_dict(rec: TrajectoryRecord) -> dict:
    return {
        "schema": 1,
        "kind": "trajectory",
        "metadata": rec.metadata,
        "xs": rec.xs.tolist(),
        "ys": rec.ys.tolist(),
        "rx": rec.rx.tolist(),
        "ry": rec.ry.tolist(),
    }


def _record_from_dict(d: dict) -> TrajectoryRecord:
    if d.get("schema") != 1 or d.get("kind") != "trajectory":
        raise ValueError("not a schema-1 trajectory document")
    return TrajectoryRecord(d["xs"], d["ys"], d["rx"], d["ry"],
                            d.get("metadata", {}))


def trajectory_to_json(rec: TrajectoryRecord) -> str:
    return json.dumps(_record_dict(rec), indent=2)


def trajectory_from_json(text: str) -> TrajectoryRecord:
    return _record_from_dict(json.loads(text))


def trajectories_to_json(recs: list[TrajectoryRecord]) -> str:
    return json.dumps({
        "schema": 1,
        "kind": "trajectory_set",
        "trajectories": [_record_dict(r) for r in recs],
    }, indent=2)


def trajectories_from_json(text: str) -> list[TrajectoryRecord]:
    d = json.loads(text)
    if d.get("schema") != 1 or d.get("kind") != "trajectory_set":
        raise ValueError("not a schema-1 trajectory-set document")
    return [_record_from_dict(r) for r in d["trajectories"]]


def trajectory_to_csv(rec: TrajectoryRecord) -> str:
    """Render as CSV: step, x0..., y0..., r_x, r_y.

    Metadata rides along on a leading ``#meta`` comment line so the file
    round-trips; floats use shortest-repr formatting and parse back
    bit-exactly.
    """
    buf = io.StringIO()
    buf.write("#meta " + json.dumps(rec.metadata) + "\n")
    writer = csv.writer(buf)
    dx, dy = rec.xs.shape[1], rec.ys.shape[1]
    header = (["step"] + [f"x{i}" for i in range(dx)]
              + [f"y{i}" for i in range(dy)] + ["r_x", "r_y"])
    writer.writerow(header)
    for t in range(len(rec)):
        row = [t] + [repr(float(v)) for v in rec.xs[t]] \
            + [repr(float(v)) for v in rec.ys[t]] \
            + [repr(float(rec.rx[t])), repr(float(rec.ry[t]))]
        writer.writerow(row)
    return buf.getvalue()


def trajectory_from_csv(text: str) -> TrajectoryRecord:
    lines = text.splitlines()
    metadata: dict = {}
    if lines and lines[0].startswith("#meta "):
        metadata = json.loads(lines[0][len("#meta "):])
        lines = lines[1:]
    rows = list(csv.reader(lines))
    if not rows:
        raise ValueError("empty CSV trajectory")
    header = rows[0]
    dx = sum(1 for h in header if h.startswith("x"))
    dy = sum(1 for h in header if h.startswith("y"))
    xs, ys, rx, ry = [], [], [], []
    for row in rows[1:]:
        if not row:
            continue
        vals = [float(v) for v in row[1:]]
        xs.append(vals[:dx])
        ys.append(vals[dx:dx + dy])
        rx.append(vals[dx + dy])
        ry.append(vals[dx + dy + 1])
    return TrajectoryRecord(xs, ys, rx, ry, metadata)
