"""Quantum-trajectory evolution of the dissipative kicked rotator.

States live in a truncated momentum basis ``n = -N/2 .. N/2-1`` (ascending
storage order). One kick period is

    free rotation exp(-i hbar n^2 / 2)
    -> dissipation (unit time, Lindblad lowering operators L1, L2)
    -> kick exp(-i k cos x)

and observables are read right after the kick. In the variables
(position of the kick, momentum after the kick) the mean motion then obeys
the Zaslavsky map exactly: the position advances with the previous
post-kick momentum, the momentum is damped by (1 - gamma) and kicked at the
new position.

Position amplitudes use ``psi(x_j) = N^{-1/2} sum_n c_n exp(i n x_j)`` on the
grid ``x_j = 2 pi j / N``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from .errors import ConfigurationError, SubstepResolutionError, TruncationError
from .params import SimParams

EDGE_FRACTION = 0.05
NORM_TOL = 1e-12


@dataclass
class WaveFunction:
    """Normalized amplitudes over integer momenta ``n in [-N/2, N/2)``."""

    amplitudes: np.ndarray
    hbar: float

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.ndim != 1 or self.amplitudes.size % 2:
            raise ConfigurationError("amplitudes must be a 1-d array of even length")

    @property
    def n_basis(self) -> int:
        return self.amplitudes.size

    @property
    def levels(self) -> np.ndarray:
        return momentum_levels(self.n_basis)

    @property
    def momenta(self) -> np.ndarray:
        return self.hbar * self.levels

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def copy(self) -> "WaveFunction":
        return WaveFunction(self.amplitudes.copy(), self.hbar)

    def amplitude(self, n: int) -> complex:
        return complex(self.amplitudes[n + self.n_basis // 2])


@dataclass(frozen=True)
class StepStats:
    jumps_l1: int = 0
    jumps_l2: int = 0
    edge_probability: float = 0.0


@lru_cache(maxsize=16)
def _levels(n_basis: int) -> np.ndarray:
    out = np.arange(-(n_basis // 2), n_basis // 2, dtype=np.int64)
    out.flags.writeable = False
    return out


def momentum_levels(n_basis: int) -> np.ndarray:
    return _levels(n_basis)


def position_grid(n_basis: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(n_basis) / n_basis


def edge_mask(n_basis: int) -> np.ndarray:
    """Boolean mask of the outer 5% of levels (half on each side)."""
    per_side = max(1, int(round(EDGE_FRACTION * n_basis / 2)))
    mask = np.zeros(n_basis, dtype=bool)
    mask[:per_side] = True
    mask[-per_side:] = True
    return mask


def edge_probability(psi: WaveFunction) -> float:
    return float(psi.probabilities()[edge_mask(psi.n_basis)].sum())


def _normalized(c: np.ndarray) -> np.ndarray:
    return c / np.linalg.norm(c)


def _check_edges(c: np.ndarray, params: SimParams, what: str):
    edge = float(np.sum(np.abs(c[edge_mask(c.size)]) ** 2))
    if edge > params.edge_threshold:
        raise TruncationError(
            f"{what}: probability {edge:.3e} in the outer 5% of the basis exceeds "
            f"edge_threshold={params.edge_threshold:.1e}; increase n_basis",
            edge_probability=edge,
        )
    return edge


# ---------------------------------------------------------------------------
# state preparation


def make_gaussian(x0: float, p0: float, params: SimParams) -> WaveFunction:
    """Minimum-uncertainty packet at ``(x0, p0)`` with dx = dp = sqrt(hbar/2).

    Sampling a momentum-space Gaussian on the integer lattice is the same as
    periodizing the position-space Gaussian, so the state is single-valued on
    the circle.
    """
    hbar = params.hbar
    n = momentum_levels(params.n_basis)
    # |c_n|^2 ~ exp(-(p - p0)^2 / (2 dp^2)) with dp^2 = hbar / 2
    log_mag = -((hbar * n - p0) ** 2) / (2.0 * hbar)
    c = np.exp(log_mag - log_mag.max()) * np.exp(-1j * n * x0)
    c = _normalized(c)
    _check_edges(c, params, "initial Gaussian packet")
    return WaveFunction(c, hbar)


def make_position_eigenstate(x0: float, params: SimParams) -> WaveFunction:
    """Equal-weight momentum superposition ``c_n = exp(-i n x0) / sqrt(N)``."""
    n = momentum_levels(params.n_basis)
    c = np.exp(-1j * n * x0) / math.sqrt(params.n_basis)
    return WaveFunction(c, params.hbar)


def make_momentum_eigenstate(n0: int, params: SimParams) -> WaveFunction:
    N = params.n_basis
    if not -(N // 2) <= n0 < N // 2:
        raise ConfigurationError(f"level {n0} outside basis of size {N}")
    c = np.zeros(N, dtype=np.complex128)
    c[n0 + N // 2] = 1.0
    return WaveFunction(c, params.hbar)


# ---------------------------------------------------------------------------
# basis changes


def _to_position_array(c: np.ndarray) -> np.ndarray:
    # ascending n = k - N/2 contributes exp(-i pi j) = (-1)^j to every x_j
    phi = np.fft.ifft(c, norm="ortho")
    phi[1::2] *= -1.0
    return phi


def _to_momentum_array(phi: np.ndarray) -> np.ndarray:
    tmp = phi.copy()
    tmp[1::2] *= -1.0
    return np.fft.fft(tmp, norm="ortho")


def to_position(psi: WaveFunction) -> np.ndarray:
    """Position amplitudes on ``x_j = 2 pi j / N``; unitary."""
    return _to_position_array(psi.amplitudes)


def to_momentum(phi: np.ndarray, hbar: float) -> WaveFunction:
    """Inverse of :func:`to_position`."""
    return WaveFunction(_to_momentum_array(np.asarray(phi, dtype=np.complex128)), hbar)


# ---------------------------------------------------------------------------
# elementary operations


def kick_phase(params: SimParams) -> np.ndarray:
    x = position_grid(params.n_basis)
    return np.exp(-1j * params.k * np.cos(x))


def free_phase(params: SimParams) -> np.ndarray:
    n = momentum_levels(params.n_basis).astype(np.float64)
    # reduce hbar n^2 / 2 modulo 2 pi before exponentiating large arguments
    return np.exp(-1j * np.mod(0.5 * params.hbar * n * n, 2.0 * np.pi))


def apply_kick(psi: WaveFunction, params: SimParams) -> WaveFunction:
    """Multiply position amplitudes by ``exp(-i k cos x_j)``."""
    if params.K == 0.0:
        return psi.copy()
    # the (-1)^j sign of the ascending layout cancels inside a diagonal-in-x map
    phi = np.fft.ifft(psi.amplitudes, norm="ortho") * kick_phase(params)
    return WaveFunction(np.fft.fft(phi, norm="ortho"), psi.hbar)


def apply_free(psi: WaveFunction, params: SimParams) -> WaveFunction:
    """Free rotation over one period, ``exp(-i hbar n^2 / 2)``."""
    return WaveFunction(psi.amplitudes * free_phase(params), psi.hbar)


def _damping_exponent(params: SimParams, n_basis: int) -> np.ndarray:
    # L1^dag L1 + L2^dag L2 = g^2 |n|
    return params.g2 * np.abs(momentum_levels(n_basis)).astype(np.float64)


def evolve_no_jump(psi: WaveFunction, dtau: float, params: SimParams,
                   free_flight: bool = False):
    """Non-Hermitian no-jump evolution over ``dtau`` of the dissipative segment.

    Returns the *unnormalized* state and its squared norm. The generator is
    diagonal in momentum, so the exponential is applied exactly. The period
    step applies the free rotation as a separate unitary, so by default only
    the damping factor ``exp(-g2 |n| dtau / 2)`` is applied; ``free_flight``
    also multiplies by ``exp(-i hbar n^2 dtau / 2)``.
    """
    if not 0.0 < dtau <= 1.0:
        raise ConfigurationError(f"dtau must lie in (0, 1], got {dtau}")
    params.require_quantum()
    c = psi.amplitudes * np.exp(-0.5 * dtau * _damping_exponent(params, psi.n_basis))
    if free_flight:
        n = psi.levels.astype(np.float64)
        c = c * np.exp(-1j * np.mod(0.5 * params.hbar * dtau * n * n, 2.0 * np.pi))
    return WaveFunction(c, psi.hbar), float(np.vdot(c, c).real)


def jump_probabilities(psi: WaveFunction, dtau: float, params: SimParams):
    """First-order jump probabilities ``(dp1, dp2)`` over a substep ``dtau``."""
    params.require_quantum()
    n = psi.levels
    prob = psi.probabilities()
    dp1 = params.g2 * dtau * float(np.dot(np.where(n > 0, n, 0), prob))
    dp2 = params.g2 * dtau * float(np.dot(np.where(n < 0, -n, 0), prob))
    if dp1 + dp2 > 0.5:
        raise SubstepResolutionError(
            f"jump probability {dp1 + dp2:.3f} per substep exceeds 0.5; "
            f"increase n_substeps (now {params.n_substeps})"
        )
    return dp1, dp2


def _lower(c: np.ndarray, mu: int, m: int = 1, weights: np.ndarray | None = None) -> np.ndarray:
    """Shift amplitudes ``m`` levels toward zero on one side of the basis.

    ``mu=1`` moves ``n >= m`` down to ``n - m`` (positive side), ``mu=2``
    mirrors this for negative ``n``. ``weights[j]`` multiplies the amplitude
    landing on ``|n| = j``.
    """
    N = c.size
    half = N // 2
    out = np.zeros_like(c)
    if mu == 1:
        # target n = 0 .. half-1-m, source n + m
        src = c[half + m:]
        if weights is not None:
            src = src * weights[: src.size]
        out[half: half + src.size] = src
    elif mu == 2:
        # target n = 0 .. -(half-m), source n - m
        src = c[half - m::-1][: half - m + 1]
        if weights is not None:
            src = src * weights[: src.size]
        out[half::-1][: src.size] = src
    else:
        raise ValueError(f"jump channel must be 1 or 2, got {mu}")
    return out


def apply_jump(psi: WaveFunction, mu: int) -> WaveFunction:
    """Apply ``L_mu`` and renormalize. ``L1`` lowers n>0, ``L2`` raises n<0."""
    n_abs = np.arange(psi.n_basis // 2 + 1, dtype=np.float64)
    # sqrt(n + 1) factor of the lowering operator, indexed by target |n|
    c = _lower(psi.amplitudes, mu, 1, np.sqrt(n_abs + 1.0))
    nrm = np.linalg.norm(c)
    if nrm == 0.0:
        raise RuntimeError(f"jump L{mu} selected on a state it annihilates")
    return WaveFunction(c / nrm, psi.hbar)


# ---------------------------------------------------------------------------
# one full period


class Propagator:
    """Precomputed per-parameter tables and the in-place period step.

    A Propagator is cheap to share between trajectories of the same
    parameters; it holds no per-trajectory state.
    """

    def __init__(self, params: SimParams, swap_channels: bool = False):
        params.require_quantum()
        self.params = params
        self.swap_channels = swap_channels
        N = params.n_basis
        self.n_basis = N
        self.levels = momentum_levels(N)
        self.abs_levels = np.abs(self.levels)
        self.kick = kick_phase(params) if params.K != 0.0 else None
        self.free = free_phase(params)
        self.edge = edge_mask(N)
        self.dissipative = params.gamma > 0.0
        if self.dissipative:
            g2 = params.g2
            self.no_jump = np.exp(-0.5 * g2 * self.abs_levels)
            self.sub_no_jump = np.exp(-0.5 * g2 * params.dtau * self.abs_levels)
            self.pos_rate = g2 * params.dtau * np.where(self.levels > 0, self.levels, 0)
            self.neg_rate = g2 * params.dtau * np.where(self.levels < 0, -self.levels, 0)
            self.lgamma = gammaln(np.arange(N // 2 + 2, dtype=np.float64) + 1.0)
            self.log_keep = math.log1p(-params.gamma)
            self.sqrt_up = np.sqrt(np.arange(N // 2 + 1, dtype=np.float64) + 1.0)

    # -- dissipative segment ------------------------------------------------

    def _dissipate_exact(self, c: np.ndarray, rng: np.random.Generator):
        """Sample the unit-time dissipative segment in one draw.

        Conditioned on the hidden level ``N`` (drawn from ``|c_N|^2``) the
        number of lowering jumps is Binomial(|N|, gamma); given ``m >= 1``
        jumps on one side the post-segment state is
        ``c'_{j} ~ c_{j+m} sqrt(C(j+m, m)) (1-gamma)^{j/2}`` whatever the jump
        times were.
        """
        prob = c.real * c.real + c.imag * c.imag
        if self.swap_channels:
            cum = np.cumsum(prob[::-1])
        else:
            cum = np.cumsum(prob)
        u = rng.random()
        i = int(np.searchsorted(cum, u * cum[-1], side="right"))
        i = min(i, self.n_basis - 1)
        if self.swap_channels:
            i = self.n_basis - 1 - i
        level = int(self.levels[i])
        m = int(rng.binomial(abs(level), self.params.gamma)) if level != 0 else 0
        if m == 0:
            c *= self.no_jump
            c /= np.linalg.norm(c)
            return c, 0, 0
        mu = 1 if level > 0 else 2
        half = self.n_basis // 2
        j = np.arange(half - m + (1 if mu == 2 else 0), dtype=np.float64)
        ji = j.astype(np.int64)
        logw = 0.5 * (self.lgamma[ji + m] - self.lgamma[ji] + j * self.log_keep)
        if mu == 1:
            src = c[half + m: half + m + j.size]
        else:
            src = c[half - m::-1][: j.size]
        with np.errstate(divide="ignore"):
            logmag = np.log(np.abs(src)) + logw
        shift = np.max(logmag)
        w = np.exp(logw - shift)
        out = _lower(c, mu, m, w)
        out /= np.linalg.norm(out)
        return out, (m if mu == 1 else 0), (m if mu == 2 else 0)

    def _dissipate_substeps(self, c: np.ndarray, rng: np.random.Generator):
        p = self.params
        j1 = j2 = 0
        for _ in range(p.n_substeps):
            prob = c.real * c.real + c.imag * c.imag
            dp1 = float(np.dot(self.pos_rate, prob))
            dp2 = float(np.dot(self.neg_rate, prob))
            if dp1 + dp2 > 0.5:
                raise SubstepResolutionError(
                    f"jump probability {dp1 + dp2:.3f} per substep exceeds 0.5; "
                    f"increase n_substeps (now {p.n_substeps})"
                )
            u = rng.random()
            if u < dp1 + dp2:
                if self.swap_channels:
                    mu = 2 if u < dp2 else 1
                else:
                    mu = 1 if u < dp1 else 2
                c = _lower(c, mu, 1, self.sqrt_up)
                if mu == 1:
                    j1 += 1
                else:
                    j2 += 1
            else:
                c = c * self.sub_no_jump
            c /= np.linalg.norm(c)
        return c, j1, j2

    def dissipate(self, c: np.ndarray, rng: np.random.Generator):
        if not self.dissipative:
            return c, 0, 0
        if self.params.jump_method == "exact":
            return self._dissipate_exact(c, rng)
        return self._dissipate_substeps(c, rng)

    # -- full period --------------------------------------------------------

    def step(self, c: np.ndarray, rng: np.random.Generator):
        """Advance raw amplitudes by one period; returns ``(c, StepStats)``."""
        c = c * self.free
        c, j1, j2 = self.dissipate(c, rng)
        if self.kick is not None:
            phi = np.fft.ifft(c, norm="ortho")
            phi *= self.kick
            c = np.fft.fft(phi, norm="ortho")
        c /= np.linalg.norm(c)
        edge = float(np.sum(np.abs(c[self.edge]) ** 2))
        if edge > self.params.edge_threshold:
            raise TruncationError(
                f"edge probability {edge:.3e} exceeds edge_threshold="
                f"{self.params.edge_threshold:.1e} (n_basis={self.n_basis}); increase n_basis",
                edge_probability=edge,
            )
        return c, StepStats(j1, j2, edge)


def step_period(psi: WaveFunction, params: SimParams, rng: np.random.Generator,
                propagator: Propagator | None = None):
    """One kick period: free rotation, dissipation, kick.

    Raises :class:`TruncationError` when the basis edge holds more than
    ``params.edge_threshold`` probability afterwards.
    """
    prop = propagator if propagator is not None else Propagator(params)
    c, stats = prop.step(psi.amplitudes.copy(), rng)
    return WaveFunction(c, psi.hbar), stats


def mirror(psi: WaveFunction) -> WaveFunction:
    """Reflect ``(x, p) -> (-x, -p)``: ``c_n -> c_{-n}``.

    The level ``-N/2`` has no partner and is dropped; it must be empty.
    """
    c = psi.amplitudes
    out = np.zeros_like(c)
    out[1:] = c[:0:-1]
    return WaveFunction(out, psi.hbar)
