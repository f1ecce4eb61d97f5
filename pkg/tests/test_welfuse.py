"""Tests for the welfare-function bandit: the shaped-game view, the
posterior-sampling resampling step, and the episode loop."""

import numpy as np
import pytest

from welfeq.catalog import build_game
from welfeq.equilibria import WelfareFunction
from welfeq.learners import LearnerConfig, LearnerState, update_strategy
from welfeq.welfuse import (
    WelfareShapedGame,
    WelfuseConfig,
    posterior_sampling_update,
    welfuse_run,
)


# --- shaped game ------------------------------------------------------------


def test_greedy_shaping_is_exact_passthrough():
    game = build_game("ChickenGame")
    shaped = WelfareShapedGame(game, WelfareFunction("greedy"))
    rng = np.random.default_rng(0)
    for _ in range(10):
        x, y = rng.uniform(size=(2, 1))
        assert shaped.reward(x, y) == game.reward(x, y)
        assert np.array_equal(shaped.grad("x", "x", x, y),
                              game.grad("x", "x", x, y))
        assert np.array_equal(shaped.hess("x", "x", "y", x, y),
                              game.hess("x", "x", "y", x, y))


def test_egalitarian_shaping_takes_min():
    game = build_game("AwkwardGame")  # asymmetric rewards
    shaped = WelfareShapedGame(game, WelfareFunction("egalitarian"))
    x, y = np.array([0.2]), np.array([0.9])
    rx, ry = game.reward(x, y)
    sx, sy = shaped.reward(x, y)
    assert sx == min(rx, ry)
    assert sy == ry  # the opponent's view is unchanged


def test_shaped_update_with_greedy_equals_bare_update():
    game = build_game("ChickenGame")
    shaped = WelfareShapedGame(game, WelfareFunction("greedy"))
    cfg = LearnerConfig("elola", eta=0.1, alpha=25.0)
    x, y = np.array([0.35]), np.array([0.8])
    a = update_strategy(LearnerState(cfg, x.copy(), np.random.default_rng(1)), game, y)
    b = update_strategy(LearnerState(cfg, x.copy(), np.random.default_rng(1)), shaped, y)
    assert np.array_equal(a, b)


def test_shaped_gradient_matches_finite_differences():
    game = build_game("AwkwardGame")
    for tag in ("egalitarian", "fairness"):
        shaped = WelfareShapedGame(game, WelfareFunction(tag))
        h = 1e-7
        for x, y in [(0.21, 0.83), (0.77, 0.14)]:
            g = shaped.grad("x", "x", [x], [y])
            hi = shaped.reward_batch(np.array([x + h]), np.array([y]))[0]
            lo = shaped.reward_batch(np.array([x - h]), np.array([y]))[0]
            assert g[0] == pytest.approx(float((hi - lo) / (2 * h)), abs=1e-5)


# --- posterior sampling -----------------------------------------------------


def test_resampling_keeps_unanimous_assignment():
    rng = np.random.default_rng(0)
    out = posterior_sampling_update(["greedy"] * 6, [1.0] * 6,
                                    ("greedy", "egalitarian"), rng)
    assert out == ["greedy"] * 6


def test_unused_candidates_are_skipped():
    # egalitarian has an empty usage set, so it can never be selected even
    # though every sampled greedy reward is terrible
    rng = np.random.default_rng(1)
    out = posterior_sampling_update(["greedy"] * 8, [-100.0] * 8,
                                    ("greedy", "egalitarian", "fairness"), rng)
    assert out == ["greedy"] * 8


def test_winner_has_highest_sampled_reward():
    # deterministic usage sets of size one: the argmax is exact
    assignments = ["greedy", "egalitarian", "fairness"]
    rewards = [0.5, 2.0, -1.0]
    rng = np.random.default_rng(2)
    out = posterior_sampling_update(assignments, rewards,
                                    ("greedy", "egalitarian", "fairness"), rng)
    assert out == ["egalitarian"] * 3


def test_ties_go_to_earliest_candidate():
    assignments = ["greedy", "egalitarian"]
    rewards = [1.0, 1.0]
    rng = np.random.default_rng(3)
    out = posterior_sampling_update(assignments, rewards,
                                    ("greedy", "egalitarian"), rng)
    assert out == ["greedy"] * 2


def test_samples_are_drawn_from_usage_sets():
    # with two greedy indices at different rewards, both values must
    # appear as the winning sample over many draws
    assignments = ["greedy", "greedy", "egalitarian"]
    rewards = [3.0, -1.0, 1.0]
    rng = np.random.default_rng(4)
    outs = [posterior_sampling_update(assignments, rewards,
                                      ("greedy", "egalitarian"), rng)
            for _ in range(50)]
    flat = [w for out in outs for w in out]
    assert "greedy" in flat and "egalitarian" in flat


# --- episode loop -----------------------------------------------------------


def small_cfg(**kw):
    base = dict(welfare_set=("greedy", "egalitarian", "fairness"),
                episodes=2, batch=8, steps=10,
                inner=LearnerConfig("elola", eta=0.1, alpha=25.0), seed=0)
    base.update(kw)
    return WelfuseConfig(**base)


def test_run_is_deterministic():
    game = build_game("ChickenGame")
    h1 = welfuse_run(small_cfg(), game, LearnerConfig("nl", eta=0.1))
    h2 = welfuse_run(small_cfg(), game, LearnerConfig("nl", eta=0.1))
    assert h1.to_dict() == h2.to_dict()


def test_history_shape_and_shares():
    game = build_game("ChickenGame")
    hist = welfuse_run(small_cfg(), game, LearnerConfig("nl", eta=0.1))
    assert len(hist.episodes) == 2
    for ep in hist.episodes:
        assert len(ep.assignments) == 8
        assert len(ep.final_rewards) == 8
        shares = [ep.share(t) for t in ("greedy", "egalitarian", "fairness")]
        assert sum(shares) == pytest.approx(1.0)
    doc = hist.to_dict()
    assert doc["schema"] == 1 and doc["kind"] == "welfuse_history"


def test_self_play_returns_pair():
    game = build_game("ChickenGame")
    hx, hy = welfuse_run(small_cfg(), game, "self")
    assert hx.agent == 0 and hy.agent == 1
    assert len(hx.episodes) == len(hy.episodes) == 2
    # agents hold separate assignment distributions
    assert hx.to_dict() != hy.to_dict()


def test_singleton_greedy_set_reduces_to_inner_rule():
    # with W = {greedy} the bandit has nothing to choose and the final
    # strategies must match a bare inner-rule match run on the same
    # per-index streams
    from welfeq.games import SwappedGame
    from welfeq.welfuse import _seeded

    game = build_game("ChickenGame")
    cfg = small_cfg(welfare_set=("greedy",), episodes=1, batch=3, steps=25)
    hist = welfuse_run(cfg, game, LearnerConfig("nl", eta=0.1))
    sw = SwappedGame(game)
    for j in range(cfg.batch):
        init = _seeded(cfg.seed, 3, 0, j)
        x = init.uniform(0.0, 1.0, size=1)
        y = init.uniform(0.0, 1.0, size=1)
        sx = LearnerState(cfg.inner, x, _seeded(cfg.seed, 4, 0, 0, j))
        sy = LearnerState(LearnerConfig("nl", eta=0.1), y, _seeded(cfg.seed, 4, 1, 0, j))
        for _ in range(cfg.steps):
            xn = update_strategy(sx, game, sy.strategy.copy())
            yn = update_strategy(sy, sw, sx.strategy.copy())
            sx.strategy, sy.strategy = xn, yn
        assert hist.episodes[0].final_own[j] == pytest.approx(list(sx.strategy))
        assert hist.episodes[0].final_opponent[j] == pytest.approx(list(sy.strategy))


def test_config_validation():
    with pytest.raises(ValueError):
        WelfuseConfig(episodes=0)
    with pytest.raises(ValueError):
        WelfuseConfig(welfare_set=())
    with pytest.raises(ValueError):
        welfuse_run(small_cfg(), build_game("ChickenGame"), "other")
