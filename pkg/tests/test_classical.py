import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dqchaos.classical import (
    ClassicalState,
    attractor_sample,
    jacobian,
    jaccard,
    lyapunov,
    noisy_step,
    occupancy,
    orbit,
    zaslavsky_step,
)
from dqchaos.errors import ConvergenceError
from dqchaos.rng import trajectory_rng


def test_fixed_point_at_pi():
    s = zaslavsky_step(ClassicalState(math.pi, 0.0), 7.0, 0.3)
    assert abs(s.p) < 1e-15 and math.isclose(s.x, math.pi)


def test_overdamped_step_forgets_momentum():
    for p in (-5.0, 0.0, 12.0):
        s = zaslavsky_step(ClassicalState(1.0, p), 7.0, 1.0)
        assert s.p == 7.0 * math.sin(1.0)


def test_fig1_first_step():
    s = zaslavsky_step(ClassicalState(5 * math.pi / 4, 0.0), 7.0, 0.5)
    assert math.isclose(s.p, -4.94974746830583267, rel_tol=1e-14)
    assert math.isclose(s.x, 5.26042865586099535, rel_tol=1e-14)


@given(st.floats(-50, 50), st.floats(0, 30), st.floats(0, 1), st.floats(0, 2 * math.pi))
def test_state_stays_on_circle_and_jacobian_contracts(p, K, gamma, x):
    s = zaslavsky_step(ClassicalState(x, p), K, gamma)
    assert 0.0 <= s.x < 2 * math.pi
    assert math.isclose(np.linalg.det(jacobian(x, K, gamma)), 1.0 - gamma, abs_tol=1e-9)


def test_jacobian_matches_finite_difference():
    x, p, K, g, h = 0.7, 1.3, 7.0, 0.3, 1e-7
    base = zaslavsky_step(ClassicalState(x, p), K, g)
    dp = zaslavsky_step(ClassicalState(x, p + h), K, g)
    dx = zaslavsky_step(ClassicalState(x + h, p), K, g)
    fd = np.array([[(dp.p - base.p) / h, (dx.p - base.p) / h],
                   [(dp.x - base.x) / h, (dx.x - base.x) / h]])
    assert np.allclose(fd, jacobian(x, K, g), atol=1e-5)


def test_orbit_matches_step():
    s = ClassicalState(1.0, 0.5)
    xs, ps = orbit(s, 7.0, 0.4, 20)
    for t in range(20):
        s = zaslavsky_step(s, 7.0, 0.4)
        assert math.isclose(xs[t], s.x, abs_tol=1e-12) and math.isclose(ps[t], s.p)


def test_kick_phase_orbit_is_shifted_map():
    # (x_t, p_{t+1}) pairs of the map iterates
    xs, ps = orbit(ClassicalState(1.0, 0.5), 7.0, 0.4, 30)
    kx, kp = orbit(ClassicalState(xs[0], ps[1]), 7.0, 0.4, 20, phase="kick")
    assert np.allclose(kx, xs[1:21], atol=1e-9) and np.allclose(kp, ps[2:22], atol=1e-9)


def test_noisy_step():
    s = ClassicalState(math.pi, 0.0)
    rng = trajectory_rng(0)
    assert noisy_step(s, 7.0, 0.5, 0.0, rng) == zaslavsky_step(s, 7.0, 0.5)
    ps = np.array([noisy_step(s, 7.0, 0.5, 0.01, rng).p for _ in range(10_000)])
    assert math.isclose(ps.std(), 0.1, rel_tol=0.03)
    a = [noisy_step(s, 7, 0.5, 0.01, trajectory_rng(4)) for _ in range(2)]
    assert a[0] == a[1]


def test_lyapunov_values():
    lam = lyapunov(7.0, 0.0, n_iter=200_000, rng=trajectory_rng(1))
    assert abs(lam.value - 1.25) < 0.125
    assert abs(lyapunov(0.0, 0.0, n_iter=20_000).value) < 1e-3
    # regression baseline for the fig1 strange attractor
    damped = lyapunov(7.0, 0.5, n_iter=200_000, rng=trajectory_rng(1))
    assert 1.2 < damped.value < 1.4


def test_lyapunov_scatter_is_reported():
    # a regular orbit (lambda ~ 0) mixed with chaotic ones scatters widely
    with pytest.raises(ConvergenceError):
        lyapunov(1.2, 0.0, n_iter=2000, transient=10, rng=trajectory_rng(3))


def test_attractor_properties():
    pts = attractor_sample(7.0, 0.5, 5000, rng=trajectory_rng(2))
    assert pts.shape == (5000, 2)
    assert np.all(np.abs(pts[:, 1]) <= 15.0)
    assert np.all(np.abs(pts[:, 1]) <= 7.0 / 0.5 + 1e-9)
    dets = [np.linalg.det(jacobian(x, 7.0, 0.5)) for x in pts[:200, 0]]
    assert np.allclose(dets, 0.5)
    over = attractor_sample(7.0, 1.0, 1000, rng=trajectory_rng(2))
    assert np.all(np.abs(over[:, 1]) <= 7.0)
    with pytest.raises(ValueError):
        attractor_sample(7.0, 0.0, 10)


def test_occupancy_and_jaccard():
    a = occupancy(np.array([[0.1, 0.0], [3.0, 5.0]]), bins=8)
    assert a.sum() == 2
    assert jaccard(a, a) == 1.0
    assert jaccard(a, np.zeros_like(a)) == 0.0
