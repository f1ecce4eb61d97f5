"""Tests for match orchestration, serialization, determinism, and the CLI."""

import json

import numpy as np
import pytest

from welfeq.catalog import build_game
from welfeq.cli import main
from welfeq.harness import (
    ExperimentConfig,
    TrajectoryRecord,
    phase_portrait,
    run_match,
    run_trials,
    trajectories_from_json,
    trajectories_to_json,
    trajectory_from_csv,
    trajectory_from_json,
    trajectory_to_csv,
    trajectory_to_json,
)
from welfeq.learners import LearnerConfig


def nl_cfg(**kw):
    base = dict(game="PrisonersDilemma", learner_x=LearnerConfig("nl"),
                learner_y=LearnerConfig("nl"), steps=30, seed=0,
                init_x=(0.5,), init_y=(0.5,))
    base.update(kw)
    return ExperimentConfig(**base)


def test_trajectory_length_and_rewards_reevaluate():
    cfg = nl_cfg()
    rec = run_match(cfg)
    assert len(rec) == cfg.steps + 1
    rx, ry = cfg.build().reward_batch(rec.xs, rec.ys)
    assert np.array_equal(rec.rx, rx)
    assert np.array_equal(rec.ry, ry)


def test_nl_self_play_pd_decreases_to_defection():
    rec = run_match(nl_cfg(steps=80))
    dx = np.diff(rec.xs[:, 0])
    assert np.all(dx <= 0) and rec.xs[-1, 0] == 0.0
    assert rec.final_rewards() == (-2.0, -2.0)


def test_zero_steps_records_only_the_init():
    rec = run_match(nl_cfg(steps=0))
    assert len(rec) == 1
    assert rec.xs[0, 0] == 0.5


def test_uniform_init_is_inside_box_and_seed_dependent():
    a = run_match(nl_cfg(init_x=None, init_y=None, steps=0, seed=1))
    b = run_match(nl_cfg(init_x=None, init_y=None, steps=0, seed=2))
    assert 0.0 <= a.xs[0, 0] <= 1.0
    assert a.xs[0, 0] != b.xs[0, 0]


def test_json_round_trip():
    rec = run_match(nl_cfg(steps=7))
    assert trajectory_from_json(trajectory_to_json(rec)) == rec
    recs = run_trials(nl_cfg(trials=3, init_x=None, init_y=None))
    assert trajectories_from_json(trajectories_to_json(recs)) == recs


def test_csv_round_trip_bit_exact():
    cfg = ExperimentConfig("IPD", LearnerConfig("sasa", sigma=1.0, n_samples=3,
                                                m_samples=3),
                           LearnerConfig("nl"), steps=10, seed=5)
    rec = run_match(cfg)
    again = trajectory_from_csv(trajectory_to_csv(rec))
    assert again == rec
    assert again.xs.shape == (11, 5)


def test_serial_and_parallel_trials_are_byte_identical():
    cfg = ExperimentConfig("ChickenGame",
                           LearnerConfig("saga", sigma=1.0, n_samples=8),
                           LearnerConfig("sasa", sigma=1.0, n_samples=4,
                                         m_samples=4),
                           steps=40, trials=6, seed=11)
    serial = trajectories_to_json(run_trials(cfg, workers=1))
    parallel = trajectories_to_json(run_trials(cfg, workers=4))
    assert serial == parallel


def test_phase_portrait_grid_and_singleton():
    cfg = ExperimentConfig("Tandem", LearnerConfig("nl", eta=0.01),
                           LearnerConfig("nl", eta=0.01), steps=5, seed=3)
    recs = phase_portrait(cfg, grid_x=4, grid_y=3)
    assert len(recs) == 12
    # row-major ordering over the init grid
    assert recs[0].xs[0, 0] == -2.0 and recs[0].ys[0, 0] == -2.0
    assert recs[2].xs[0, 0] == -2.0 and recs[2].ys[0, 0] == 3.0
    single = phase_portrait(
        ExperimentConfig("Tandem", LearnerConfig("nl"), LearnerConfig("nl"),
                         steps=5, seed=3), grid_x=1, grid_y=1)
    direct = run_match(
        ExperimentConfig("Tandem", LearnerConfig("nl"), LearnerConfig("nl"),
                         steps=5, seed=3, init_x=(-2.0,), init_y=(-2.0,)))
    assert single[0] == direct


def test_phase_portrait_rejects_multidim_games():
    cfg = ExperimentConfig("IPD", LearnerConfig("nl"), LearnerConfig("nl"),
                           steps=1, seed=0)
    with pytest.raises(ValueError):
        phase_portrait(cfg, grid_x=2, grid_y=2)


def test_config_validation():
    with pytest.raises(ValueError):
        nl_cfg(steps=-1)
    with pytest.raises(ValueError):
        nl_cfg(trials=0)
    with pytest.raises(ValueError):
        nl_cfg(game="Foosball")


# --- CLI --------------------------------------------------------------------


def test_cli_list_games(capsys):
    assert main(["list-games"]) == 0
    out = capsys.readouterr().out
    assert "ChickenGame" in out and "ImpossibleMarket" in out


def test_cli_solve_we(capsys):
    assert main(["solve-we", "--game", "ChickenGame",
                 "--welfare", "egalitarian"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["x"] == pytest.approx(0.989, abs=0.005)
    assert doc["schema"] == 1


def test_cli_classify(capsys):
    assert main(["classify", "--game", "StagHunt"]) == 0
    assert json.loads(capsys.readouterr().out)["coincidental"] is True
    assert main(["classify", "--game", "ChickenGame"]) == 0
    assert json.loads(capsys.readouterr().out)["coincidental"] is False


def test_cli_run_match_csv_and_out_file(tmp_path, capsys):
    out = tmp_path / "match.csv"
    code = main(["run-match", "--game", "PrisonersDilemma", "--rule", "nl",
                 "--steps", "4", "--format", "csv", "--out", str(out)])
    assert code == 0
    rec = trajectory_from_csv(out.read_text())
    assert len(rec) == 5
    assert rec.metadata["game"] == "PrisonersDilemma"


def test_cli_phase_portrait(capsys):
    assert main(["phase-portrait", "--game", "StagHunt", "--rule", "nl",
                 "--steps", "2", "--grid-points", "3"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["kind"] == "trajectory_set"
    assert len(doc["trajectories"]) == 9


def test_cli_welfuse(capsys):
    assert main(["welfuse", "--game", "ChickenGame", "--episodes", "2",
                 "--batch", "4", "--steps", "5"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["kind"] == "welfuse_history"
    assert len(doc["episodes"]) == 2


def test_cli_report(capsys):
    assert main(["report", "--game", "BabyChickenGame", "--welfare",
                 "egalitarian", "--grid-points", "101"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["kind"] == "we_report"


def test_cli_config_errors_exit_2(capsys):
    assert main(["solve-we", "--game", "NoSuchGame"]) == 2
    assert main(["run-match", "--game", "StagHunt", "--rule", "zen"]) == 2
    assert main(["welfuse", "--game", "StagHunt", "--welfare", "harmony"]) == 2
    assert main(["run-match", "--game", "StagHunt", "--steps", "2",
                 "--trials", "2", "--format", "csv"]) == 2
    assert main(["phase-portrait", "--game", "StagHunt", "--steps", "1",
                 "--format", "csv"]) == 2
