"""Tests for the memory-one iterated-game values and gradients.

The closed-form value (a resolvent solve) is checked against a truncated
power-series oracle that simulates the discounted sum term by term, so
the two computations share no code.
"""

import numpy as np
import pytest

from welfeq.ipd import (
    ALLD,
    TFT,
    IpdConfig,
    IpdGame,
    IpdTftAlldMixGame,
    ipd_tft_alld_mix,
    ipd_value,
    ipd_value_gradient,
)

ALLC = np.ones(5)


def series_value(p, q, gamma=0.96, terms=2000):
    """Discounted-average value by explicit power series.

    State order (x's view): CC, CD, DC, DD; p = (p0, pCC, pCD, pDC, pDD)
    holds x's cooperation probabilities, q the same from y's own view.
    """
    p = np.asarray(p, float)
    q = np.asarray(q, float)
    px = p[1:]
    # y's cooperation probability indexed by x's state labels: y sees
    # CD and DC with the roles flipped.
    qy = q[[1, 3, 2, 4]]
    rx = np.array([-1.0, -3.0, 0.0, -2.0])
    ry = np.array([-1.0, 0.0, -3.0, -2.0])
    d = np.array([p[0] * q[0], p[0] * (1 - q[0]),
                  (1 - p[0]) * q[0], (1 - p[0]) * (1 - q[0])])
    M = np.empty((4, 4))
    for s in range(4):
        a, b = px[s], qy[s]
        M[s] = [a * b, a * (1 - b), (1 - a) * b, (1 - a) * (1 - b)]
    vx = vy = 0.0
    for t in range(terms):
        vx += gamma**t * d @ rx
        vy += gamma**t * d @ ry
        d = d @ M
    return (1 - gamma) * vx, (1 - gamma) * vy


def test_value_matches_series_oracle():
    rng = np.random.default_rng(0)
    for _ in range(10):
        p = rng.uniform(size=5)
        q = rng.uniform(size=5)
        vx, vy = ipd_value(p, q)
        ox, oy = series_value(p, q)
        assert vx == pytest.approx(ox, abs=1e-9)
        assert vy == pytest.approx(oy, abs=1e-9)


def test_canonical_strategy_pairs():
    assert ipd_value(TFT, TFT) == (pytest.approx(-1.0), pytest.approx(-1.0))
    assert ipd_value(ALLD, ALLC) == (pytest.approx(0.0), pytest.approx(-3.0))
    assert ipd_value(ALLD, ALLD) == (pytest.approx(-2.0), pytest.approx(-2.0))
    # symmetry: swapping seats swaps the value pair
    rng = np.random.default_rng(1)
    p, q = rng.uniform(size=5), rng.uniform(size=5)
    vx, vy = ipd_value(p, q)
    wx, wy = ipd_value(q, p)
    assert vx == pytest.approx(wy, abs=1e-12)
    assert vy == pytest.approx(wx, abs=1e-12)


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(2)
    h = 1e-6
    for _ in range(5):
        p = rng.uniform(0.1, 0.9, size=5)
        q = rng.uniform(0.1, 0.9, size=5)
        for reward_of in ("x", "y"):
            for wrt in ("x", "y"):
                g = ipd_value_gradient(p, q, reward_of, wrt)
                pick = {"x": 0, "y": 1}[reward_of]
                base = p if wrt == "x" else q
                oracle = np.empty(5)
                for i in range(5):
                    e = np.zeros(5)
                    e[i] = h
                    if wrt == "x":
                        hi = ipd_value(base + e, q)[pick]
                        lo = ipd_value(base - e, q)[pick]
                    else:
                        hi = ipd_value(p, base + e)[pick]
                        lo = ipd_value(p, base - e)[pick]
                    oracle[i] = (hi - lo) / (2 * h)
                assert np.allclose(g, oracle, atol=1e-6)


def test_gamma_validation():
    with pytest.raises(ValueError):
        IpdConfig(gamma=1.0)
    with pytest.raises(ValueError):
        IpdConfig(gamma=-0.1)


def test_mix_endpoints_and_validation():
    assert np.array_equal(ipd_tft_alld_mix(0.0), ALLD)
    assert np.array_equal(ipd_tft_alld_mix(1.0), TFT)
    assert np.array_equal(ipd_tft_alld_mix(0.5), 0.5 * TFT)
    with pytest.raises(ValueError):
        ipd_tft_alld_mix(1.5)


def test_mix_game_agrees_with_full_game():
    full = IpdGame()
    mix = IpdTftAlldMixGame()
    rng = np.random.default_rng(3)
    for _ in range(10):
        s, t = rng.uniform(size=2)
        assert mix.reward([s], [t]) == full.reward(ipd_tft_alld_mix(s),
                                                   ipd_tft_alld_mix(t))


def test_mix_game_batch_matches_scalar():
    mix = IpdTftAlldMixGame()
    s = np.linspace(0, 1, 7).reshape(-1, 1)
    t = np.linspace(1, 0, 7).reshape(-1, 1)
    rx, ry = mix.reward_batch(s, t)
    for i in range(7):
        ex, ey = mix.reward(s[i], t[i])
        assert rx[i] == ex and ry[i] == ey


def test_mix_game_gradient_matches_finite_differences():
    mix = IpdTftAlldMixGame()
    h = 1e-6
    for s, t in [(0.3, 0.7), (0.6, 0.2), (0.5, 0.5)]:
        g = mix.grad("x", "x", [s], [t])
        oracle = (mix.reward([s + h], [t])[0] - mix.reward([s - h], [t])[0]) / (2 * h)
        assert g[0] == pytest.approx(oracle, abs=1e-6)
        g = mix.grad("y", "y", [s], [t])
        oracle = (mix.reward([s], [t + h])[1] - mix.reward([s], [t - h])[1]) / (2 * h)
        assert g[0] == pytest.approx(oracle, abs=1e-6)
