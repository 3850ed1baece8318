import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import jv

from conftest import random_state
from dqchaos.errors import SubstepResolutionError, TruncationError
from dqchaos.observables import circular_mean_x, mean_p, var_p, var_x
from dqchaos.params import SimParams
from dqchaos.quantum import (
    Propagator,
    WaveFunction,
    apply_free,
    apply_jump,
    apply_kick,
    edge_probability,
    evolve_no_jump,
    jump_probabilities,
    make_gaussian,
    make_momentum_eigenstate,
    make_position_eigenstate,
    mirror,
    momentum_levels,
    position_grid,
    step_period,
    to_momentum,
    to_position,
)
from dqchaos.rng import trajectory_rng


def params(**kw):
    base = dict(K=7.0, hbar=0.1, gamma=0.5, n_basis=512)
    base.update(kw)
    return SimParams(**base)


# ---------------------------------------------------------------------------
# state preparation


def test_gaussian_fig1_packet():
    p = params(hbar=0.012, n_basis=2048)
    psi = make_gaussian(5 * math.pi / 4, 0.0, p)
    mx, r = circular_mean_x(psi)
    assert abs(mx - 5 * math.pi / 4) < 1e-6
    assert r > 0.99
    assert abs(mean_p(psi)) < 1e-12
    assert math.isclose(math.sqrt(var_x(psi)), math.sqrt(0.006), rel_tol=0.02)
    assert math.isclose(math.sqrt(var_p(psi)), math.sqrt(0.006), rel_tol=0.02)


def test_gaussian_moments_at_origin():
    p = params(hbar=0.1)
    psi = make_gaussian(0.0, 0.0, p)
    assert math.isclose(math.sqrt(var_x(psi)), math.sqrt(0.05), rel_tol=0.01)
    assert math.isclose(math.sqrt(var_p(psi)), math.sqrt(0.05), rel_tol=0.01)


def test_gaussian_reflection_symmetric_about_pi():
    psi = make_gaussian(math.pi, 0.0, params())
    c = np.abs(psi.amplitudes)
    assert np.allclose(c[1:], c[1:][::-1], atol=1e-15)


def test_gaussian_edge_guard():
    with pytest.raises(TruncationError):
        make_gaussian(1.0, 24.0, params(n_basis=512))


def test_position_eigenstate():
    p = params(n_basis=1024)
    psi = make_position_eigenstate(math.pi, p)
    assert np.allclose(psi.probabilities(), 1 / 1024)
    c = psi.amplitudes * math.sqrt(1024)
    n = momentum_levels(1024)
    assert np.allclose(c, (-1.0) ** n)
    # discrete uniform on [-N/2, N/2): variance (N^2 - 1) / 12
    assert math.isclose(math.sqrt(var_p(psi)), 29.560319687039922, rel_tol=1e-12)
    psi0 = make_position_eigenstate(0.0, p)
    assert np.all(psi0.amplitudes.real > 0) and np.all(psi0.amplitudes.imag == 0)
    rho = np.abs(to_position(psi)) ** 2
    assert np.argmax(rho) == 512 and rho[512] > 1 - 1e-12


def test_momentum_eigenstate_bounds():
    with pytest.raises(ValueError):
        make_momentum_eigenstate(300, params(n_basis=512))


# ---------------------------------------------------------------------------
# basis changes and kicks


@given(st.integers(0, 2**32 - 1), st.sampled_from([8, 64, 256]))
def test_position_round_trip(seed, n):
    c = random_state(np.random.default_rng(seed), n)
    psi = WaveFunction(c, 0.1)
    phi = to_position(psi)
    assert math.isclose(np.linalg.norm(phi), 1.0, abs_tol=1e-12)
    assert np.linalg.norm(to_momentum(phi, 0.1).amplitudes - c) < 1e-12


def test_gaussian_position_density_peaks_at_center():
    psi = make_gaussian(2.0, 0.0, params(hbar=0.05))
    x = position_grid(psi.n_basis)
    rho = np.abs(to_position(psi)) ** 2
    dx = 2 * math.pi / psi.n_basis
    direct = sum(np.exp(-((x - 2.0 + 2 * math.pi * w) ** 2) / 0.05) for w in (-1, 0, 1))
    direct *= dx / math.sqrt(math.pi * 0.05)
    assert abs(x[np.argmax(rho)] - 2.0) <= dx
    assert np.max(np.abs(rho - direct)) < 1e-8


@given(st.integers(0, 2**32 - 1), st.floats(0.0, 20.0))
def test_kick_preserves_norm_and_position_density(seed, K):
    p = params(K=K, n_basis=128)
    psi = WaveFunction(random_state(np.random.default_rng(seed), 128), p.hbar)
    out = apply_kick(psi, p)
    assert abs(out.norm() - 1.0) < 1e-12
    assert np.max(np.abs(np.abs(to_position(out)) ** 2 - np.abs(to_position(psi)) ** 2)) < 1e-12


def test_zero_kick_identity():
    p = params(K=0.0)
    psi = make_gaussian(1.0, 0.5, p)
    assert np.array_equal(apply_kick(psi, p).amplitudes, psi.amplitudes)


def test_kick_bessel_populations():
    # k = K / hbar = 2
    p = params(K=0.2, hbar=0.1, n_basis=64)
    out = apply_kick(make_momentum_eigenstate(0, p), p)
    frozen = [0.0501270809844695685, 0.332611503882202566, 0.124491851749140657,
              0.0166263615850178848]
    for m, want in enumerate(frozen):
        assert math.isclose(abs(out.amplitude(m)) ** 2, want, rel_tol=1e-10)
        assert math.isclose(abs(out.amplitude(-m)) ** 2, want, rel_tol=1e-10)
        assert math.isclose(want, jv(m, 2.0) ** 2, rel_tol=1e-12)


def test_free_rotation_is_phase():
    p = params()
    psi = make_gaussian(1.0, 1.0, p)
    assert np.allclose(apply_free(psi, p).probabilities(), psi.probabilities(), atol=1e-15)


# ---------------------------------------------------------------------------
# dissipation primitives


def test_no_jump_evolution():
    p = params(gamma=0.5, n_basis=64)
    out, n2 = evolve_no_jump(make_momentum_eigenstate(5, p), 1.0, p)
    assert math.isclose(n2, 0.03125, rel_tol=1e-12)
    out, n2 = evolve_no_jump(make_momentum_eigenstate(0, p), 1.0, p)
    assert n2 == 1.0
    p0 = params(gamma=0.0, n_basis=64)
    psi = make_gaussian(1.0, 0.3, p0)
    out, n2 = evolve_no_jump(psi, 0.3, p0)
    assert math.isclose(n2, 1.0, abs_tol=1e-14)
    out, _ = evolve_no_jump(psi, 0.3, p0, free_flight=True)
    assert np.allclose(np.abs(out.amplitudes), np.abs(psi.amplitudes))


def test_jump_probabilities():
    p = params(gamma=0.5, n_basis=64)
    assert jump_probabilities(make_momentum_eigenstate(0, p), 0.01, p) == (0.0, 0.0)
    dp1, dp2 = jump_probabilities(make_momentum_eigenstate(3, p), 0.01, p)
    assert math.isclose(dp1, 0.0207944154167983593, rel_tol=1e-12) and dp2 == 0.0
    c = np.zeros(64, complex)
    c[32 + 4] = c[32 - 4] = 1 / math.sqrt(2)
    dp1, dp2 = jump_probabilities(WaveFunction(c, p.hbar), 0.01, p)
    assert dp1 == dp2 > 0
    with pytest.raises(SubstepResolutionError):
        jump_probabilities(make_momentum_eigenstate(30, p), 0.1, p)


def test_apply_jump():
    p = params(n_basis=64)
    out = apply_jump(make_momentum_eigenstate(1, p), 1)
    assert math.isclose(abs(out.amplitude(0)), 1.0)
    c = np.zeros(64, complex)
    c[33] = c[34] = 1 / math.sqrt(2)
    out = apply_jump(WaveFunction(c, p.hbar), 1)
    assert math.isclose(out.amplitude(0).real, 1 / math.sqrt(3), rel_tol=1e-14)
    assert math.isclose(out.amplitude(1).real, math.sqrt(2 / 3), rel_tol=1e-14)
    out = apply_jump(make_momentum_eigenstate(-1, p), 2)
    assert math.isclose(abs(out.amplitude(0)), 1.0)
    with pytest.raises(RuntimeError):
        apply_jump(make_momentum_eigenstate(0, p), 1)


# ---------------------------------------------------------------------------
# full periods and invariants


@pytest.mark.parametrize("method", ["exact", "substep"])
def test_norm_after_every_step(method):
    p = params(hbar=0.05, gamma=0.3, n_basis=1024, jump_method=method, n_substeps=2000)
    psi = make_gaussian(1.0, 0.0, p)
    rng = trajectory_rng(3)
    for _ in range(30):
        psi, stats = step_period(psi, p, rng)
        assert abs(psi.norm() - 1.0) < 1e-12
        assert stats.jumps_l1 >= 0 and stats.jumps_l2 >= 0
        assert 0.0 <= stats.edge_probability <= 1.0


@pytest.mark.parametrize("method", ["exact", "substep"])
def test_dark_state_fixed_point(method):
    p = params(K=0.0, gamma=0.7, n_basis=64, jump_method=method)
    psi = make_momentum_eigenstate(0, p)
    rng = trajectory_rng(0)
    for _ in range(50):
        psi, stats = step_period(psi, p, rng)
        assert stats.jumps_l1 == stats.jumps_l2 == 0
    assert math.isclose(abs(psi.amplitude(0)), 1.0, abs_tol=1e-15)


def test_closed_system_matches_unitary_reference():
    p = params(K=1.0, gamma=0.0, hbar=0.2, n_basis=512)
    psi = make_gaussian(1.0, 0.0, p)
    ref = psi.copy()
    rng = trajectory_rng(0)
    for _ in range(20):
        psi, stats = step_period(psi, p, rng)
        assert stats.jumps_l1 == stats.jumps_l2 == 0
        ref = apply_kick(apply_free(ref, p), p)
        ref = WaveFunction(ref.amplitudes / np.linalg.norm(ref.amplitudes), p.hbar)
    assert np.array_equal(psi.amplitudes, ref.amplitudes)


@pytest.mark.parametrize("method", ["exact", "substep"])
def test_reflection_symmetry(method):
    p = params(hbar=0.1, gamma=0.4, n_basis=512, jump_method=method, n_substeps=2000)
    x0, p0 = 1.3, 0.7
    a = make_gaussian(x0, p0, p)
    b = make_gaussian(2 * math.pi - x0, -p0, p)
    assert np.allclose(mirror(a).amplitudes, b.amplitudes, atol=1e-14)
    fwd, bwd = Propagator(p), Propagator(p, swap_channels=True)
    ra, rb = trajectory_rng(9), trajectory_rng(9)
    ca, cb = a.amplitudes, b.amplitudes
    for _ in range(40):
        ca, sa = fwd.step(ca, ra)
        cb, sb = bwd.step(cb, rb)
        assert (sa.jumps_l1, sa.jumps_l2) == (sb.jumps_l2, sb.jumps_l1)
    assert np.allclose(mirror(WaveFunction(ca, p.hbar)).amplitudes, cb, atol=1e-9)


def test_truncation_guard():
    p = params(K=7.0, hbar=0.5, gamma=0.01, n_basis=64)
    psi = make_gaussian(1.0, 0.0, p)
    rng = trajectory_rng(0)
    with pytest.raises(TruncationError) as exc:
        for _ in range(100):
            psi, _ = step_period(psi, p, rng)
    assert exc.value.edge_probability > p.edge_threshold


def test_determinism():
    p = params(hbar=0.05, gamma=0.3, n_basis=1024)
    runs = []
    for _ in range(2):
        psi = make_gaussian(1.0, 0.0, p)
        rng = trajectory_rng(42, 7)
        for _ in range(20):
            psi, _ = step_period(psi, p, rng)
        runs.append(psi.amplitudes)
    assert np.array_equal(*runs)


def test_exact_sampler_matches_kraus_statistics():
    # one pure-damping period from |n=6>: level after = 6 - Binomial(6, gamma)
    p = params(K=0.0, gamma=0.4, n_basis=64)
    prop = Propagator(p)
    rng = trajectory_rng(1)
    counts = np.zeros(7)
    trials = 20000
    for _ in range(trials):
        c, j1, _ = prop.dissipate(make_momentum_eigenstate(6, p).amplitudes.copy(), rng)
        counts[j1] += 1
        assert abs(abs(c[32 + 6 - j1]) - 1.0) < 1e-12
    want = np.array([math.comb(6, m) * 0.4 ** m * 0.6 ** (6 - m) for m in range(7)])
    se = np.sqrt(want * (1 - want) / trials)
    assert np.all(np.abs(counts / trials - want) < 4 * se)


def test_edge_probability_of_uniform_state():
    psi = make_position_eigenstate(0.0, params(n_basis=400))
    assert math.isclose(edge_probability(psi), 20 / 400)


@pytest.mark.parametrize("gamma", [0.1, 0.5, 0.9])
def test_damping_matches_reference_birth_death_chain(gamma):
    # K=0 from |10>: the trajectory momentum is exactly a binomial thinning chain
    from dqchaos.trajectory import InitialCondition, run_ensemble
    p = SimParams(K=0.0, hbar=0.1, gamma=gamma, n_basis=64, n_kicks=10, seed=1)
    recs = run_ensemble(p, InitialCondition("momentum", n0=10), 300)
    for i, rec in enumerate(recs):
        rng = trajectory_rng(1, i)
        n, ref = 10, []
        for _ in range(10):
            rng.random()
            n -= rng.binomial(n, gamma) if n else 0
            ref.append(n)
        assert np.array_equal(np.rint(rec.mean_p / p.hbar).astype(int), ref)
