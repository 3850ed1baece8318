"""Measured quantities: phase-space moments, dispersion, Husimi densities,
kick-function samples and the collapse/explosion estimators."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import NotChaoticError
from .quantum import WaveFunction, momentum_levels, position_grid, to_position

UNDEFINED_MEAN_R = 1e-6


# ---------------------------------------------------------------------------
# position statistics on the circle


def _circular_stats(density: np.ndarray, x: np.ndarray):
    z = np.dot(density, np.exp(1j * x))
    r = abs(z)
    if r < UNDEFINED_MEAN_R:
        return math.nan, r
    return float(np.mod(np.angle(z), 2.0 * np.pi)), float(r)


def _branch_variance(density: np.ndarray, x: np.ndarray, mean: float) -> float:
    center = math.pi if math.isnan(mean) else mean
    # unwrap to (center - pi, center + pi]
    d = np.pi - np.mod(np.pi - (x - center), 2.0 * np.pi)
    return float(np.dot(density, d * d))


def position_density(psi: WaveFunction) -> np.ndarray:
    phi = to_position(psi)
    return phi.real ** 2 + phi.imag ** 2


def circular_mean_x(psi: WaveFunction):
    """Circular mean ``arg <exp(ix)>`` in [0, 2 pi) and resultant length.

    The mean is NaN when the resultant length falls below 1e-6 (no preferred
    direction).
    """
    return _circular_stats(position_density(psi), position_grid(psi.n_basis))


def var_x(psi: WaveFunction) -> float:
    """Variance of x unwrapped to the branch (mean - pi, mean + pi].

    With an undefined mean the branch is centred on pi, i.e. x in [0, 2 pi).
    """
    rho = position_density(psi)
    x = position_grid(psi.n_basis)
    mean, _ = _circular_stats(rho, x)
    return _branch_variance(rho, x, mean)


# ---------------------------------------------------------------------------
# momentum statistics


def _momentum_moments(prob: np.ndarray, levels: np.ndarray, hbar: float):
    n = levels.astype(np.float64)
    m1 = float(np.dot(prob, n))
    m2 = float(np.dot(prob, n * n))
    return hbar * m1, hbar * hbar * max(m2 - m1 * m1, 0.0)


def mean_p(psi: WaveFunction) -> float:
    return _momentum_moments(psi.probabilities(), psi.levels, psi.hbar)[0]


def var_p(psi: WaveFunction) -> float:
    return _momentum_moments(psi.probabilities(), psi.levels, psi.hbar)[1]


def dispersion(psi: WaveFunction) -> float:
    """sigma = sqrt(var_x + var_p)."""
    return math.sqrt(var_x(psi) + var_p(psi))


def cumulative_sigma(sigma) -> np.ndarray:
    """Running average ``sigma_bar_t = (1/t) sum_{j<=t} sigma_j``."""
    sigma = np.asarray(getattr(sigma, "sigma", sigma), dtype=np.float64)
    if sigma.size == 0:
        raise ValueError("cumulative_sigma needs at least one sample")
    out = np.empty_like(sigma)
    total = 0.0
    for t, s in enumerate(sigma, start=1):
        total += s
        out[t - 1] = total / t
    return out


@dataclass(frozen=True)
class Snapshot:
    mean_x: float
    resultant: float
    mean_p: float
    var_x: float
    var_p: float

    @property
    def sigma(self) -> float:
        return math.sqrt(self.var_x + self.var_p)


def measure(psi: WaveFunction) -> Snapshot:
    """All per-kick moments of one state."""
    return measure_arrays(psi.amplitudes, psi.hbar)


def measure_arrays(c: np.ndarray, hbar: float, x: np.ndarray | None = None,
                   levels: np.ndarray | None = None) -> Snapshot:
    N = c.size
    x = position_grid(N) if x is None else x
    levels = momentum_levels(N) if levels is None else levels
    phi = np.fft.ifft(c, norm="ortho")
    rho = phi.real ** 2 + phi.imag ** 2
    mx, r = _circular_stats(rho, x)
    vx = _branch_variance(rho, x, mx)
    prob = c.real ** 2 + c.imag ** 2
    mp, vp = _momentum_moments(prob, levels, hbar)
    return Snapshot(mx, r, mp, vx, vp)


# ---------------------------------------------------------------------------
# per-trajectory record


@dataclass
class TrajectoryRecord:
    """Per-kick time series of one trajectory, ``t = 1 .. n_kicks``.

    ``initial`` holds the t = 0 moments of the starting state.
    """

    mean_x: np.ndarray
    resultant: np.ndarray
    mean_p: np.ndarray
    var_x: np.ndarray
    var_p: np.ndarray
    jumps_l1: np.ndarray
    jumps_l2: np.ndarray
    edge_probability: np.ndarray
    fingerprint: str = ""
    seed: int = 0
    index: int = 0
    params: dict = field(default_factory=dict)
    initial: dict = field(default_factory=dict)

    FLOAT_COLUMNS = ("mean_x", "resultant", "mean_p", "var_x", "var_p", "edge_probability")
    INT_COLUMNS = ("jumps_l1", "jumps_l2")

    @property
    def n_kicks(self) -> int:
        return int(self.mean_p.size)

    @property
    def sigma(self) -> np.ndarray:
        return np.sqrt(self.var_x + self.var_p)

    @property
    def sigma_bar(self) -> np.ndarray:
        return cumulative_sigma(self.sigma)

    @property
    def initial_sigma(self) -> float:
        return math.sqrt(self.initial["var_x"] + self.initial["var_p"])

    def plateau(self, last: int = 100) -> float:
        """Mean of sigma_bar over the final ``last`` kicks."""
        sb = self.sigma_bar
        return float(np.mean(sb[-min(last, sb.size):]))

    @classmethod
    def from_snapshots(cls, snaps, stats, **meta) -> "TrajectoryRecord":
        f = np.array
        return cls(
            mean_x=f([s.mean_x for s in snaps], dtype=np.float64),
            resultant=f([s.resultant for s in snaps], dtype=np.float64),
            mean_p=f([s.mean_p for s in snaps], dtype=np.float64),
            var_x=f([s.var_x for s in snaps], dtype=np.float64),
            var_p=f([s.var_p for s in snaps], dtype=np.float64),
            jumps_l1=f([s.jumps_l1 for s in stats], dtype=np.int64),
            jumps_l2=f([s.jumps_l2 for s in stats], dtype=np.int64),
            edge_probability=f([s.edge_probability for s in stats], dtype=np.float64),
            **meta,
        )

    def equals(self, other: "TrajectoryRecord") -> bool:
        """Field-by-field equality (NaN equal to NaN)."""
        for name in self.FLOAT_COLUMNS + self.INT_COLUMNS:
            if not np.array_equal(getattr(self, name), getattr(other, name), equal_nan=True):
                return False
        return (
            self.fingerprint == other.fingerprint
            and self.seed == other.seed
            and self.index == other.index
            and self.params == other.params
            and self.initial == other.initial
        )


# ---------------------------------------------------------------------------
# Husimi distribution


@dataclass
class HusimiGrid:
    """Husimi density sampled on ``x`` (uniform on [0, 2 pi)) times ``p``.

    ``values[i, j]`` is the density at ``(p[i], x[j])``.
    """

    x: np.ndarray
    p: np.ndarray
    values: np.ndarray
    hbar: float
    squeezing: float = 1.0
    coverage: float = 1.0
    fingerprint: str = ""

    @property
    def coverage_warning(self) -> bool:
        return self.coverage < 0.999

    @property
    def cell_area(self) -> float:
        dx = 2.0 * np.pi / self.x.size
        dp = (self.p[-1] - self.p[0]) / (self.p.size - 1) if self.p.size > 1 else 1.0
        return dx * dp

    def riemann_sum(self) -> float:
        return float(self.values.sum() * self.cell_area)

    def support_fraction(self, rel_level: float = 0.01) -> float:
        """Fraction of grid nodes above ``rel_level`` times the maximum."""
        vmax = self.values.max()
        if vmax <= 0.0:
            return 0.0
        return float(np.mean(self.values > rel_level * vmax))

    def argmax(self):
        i, j = np.unravel_index(np.argmax(self.values), self.values.shape)
        return float(self.x[j]), float(self.p[i])


def husimi(psi: WaveFunction, p_range=(-25.0, 25.0), n_x: int = 256, n_p: int = 256,
           squeezing: float = 1.0, fingerprint: str = "") -> HusimiGrid:
    """Husimi density ``|<alpha(x0, p0)|psi>|^2 / (2 pi hbar)``.

    The coherent states are x-periodized Gaussians with position variance
    ``s hbar / 2`` and momentum variance ``hbar / (2 s)``. For each grid
    momentum the overlap with every grid angle is one FFT of the
    Gaussian-weighted amplitudes folded modulo ``n_x``.
    """
    hbar = psi.hbar
    n = psi.levels
    c = psi.amplitudes
    p_lo, p_hi = float(p_range[0]), float(p_range[1])
    if not p_hi > p_lo:
        raise ValueError(f"empty momentum window {p_range}")
    p_grid = np.linspace(p_lo, p_hi, n_p)
    x_grid = 2.0 * np.pi * np.arange(n_x) / n_x
    var_pc = hbar / (2.0 * squeezing)
    half_width = 10.0 * math.sqrt(var_pc) / hbar + 2.0
    N = psi.n_basis
    values = np.zeros((n_p, n_x))
    for i, p0 in enumerate(p_grid):
        center = p0 / hbar
        full = np.arange(math.floor(center - half_width), math.ceil(center + half_width) + 1)
        g = np.exp(-((hbar * full - p0) ** 2) / (4.0 * var_pc))
        # coherent state normalized on the untruncated lattice
        norm2 = float(np.dot(g, g))
        inside = (full >= -(N // 2)) & (full < N // 2)
        nn = full[inside]
        if nn.size == 0:
            continue
        v = g[inside] * c[nn + N // 2]
        bins = np.mod(nn, n_x)
        folded = (np.bincount(bins, weights=v.real, minlength=n_x)
                  + 1j * np.bincount(bins, weights=v.imag, minlength=n_x))
        overlap = np.fft.ifft(folded) * n_x
        values[i] = (overlap.real ** 2 + overlap.imag ** 2) / norm2
    values /= 2.0 * np.pi * hbar
    pm = psi.momenta
    prob = psi.probabilities()
    coverage = float(prob[(pm >= p_lo) & (pm <= p_hi)].sum())
    grid = HusimiGrid(x_grid, p_grid, values, hbar, squeezing, coverage, fingerprint)
    if grid.coverage_warning:
        warnings.warn(
            f"momentum window {p_range} holds only {coverage:.4f} of the probability",
            RuntimeWarning,
            stacklevel=2,
        )
    return grid


# ---------------------------------------------------------------------------
# kick function


@dataclass(frozen=True)
class KickFunctionSample:
    x: float
    f: float
    uncertainty: float


def kick_function(record, gamma) -> list:
    """Samples of ``f = <p>_{t+1} - (1 - gamma) <p>_t`` against the kick position.

    ``record`` needs ``mean_x``, ``mean_p`` and ``var_p`` arrays sampled
    right after each kick. The kick that turned ``<p>_t`` into ``<p>_{t+1}``
    acted at ``record.mean_x[t+1]`` (a kick does not move x), which is the
    position paired with each sample. ``gamma`` may be a number or any object
    with a ``gamma`` attribute.
    """
    gamma = float(getattr(gamma, "gamma", gamma))
    keep = 1.0 - gamma
    x = np.asarray(record.mean_x)
    p = np.asarray(record.mean_p)
    vp = np.asarray(record.var_p)
    f = p[1:] - keep * p[:-1]
    err = np.sqrt(vp[1:] + keep * keep * vp[:-1])
    return [KickFunctionSample(float(a), float(b), float(e)) for a, b, e in zip(x[1:], f, err)]


def fit_sine_amplitude(samples):
    """Least-squares amplitude ``A`` of ``f = A sin x`` and the RMS residual."""
    x = np.array([s.x for s in samples])
    f = np.array([s.f for s in samples])
    ok = np.isfinite(x) & np.isfinite(f)
    x, f = x[ok], f[ok]
    s = np.sin(x)
    amp = float(np.dot(s, f) / np.dot(s, s))
    rms = float(np.sqrt(np.mean((f - amp * s) ** 2)))
    return amp, rms


# ---------------------------------------------------------------------------
# regime analysis


def ehrenfest_time(hbar: float, lyapunov: float) -> float:
    """``t_E = ln(1/hbar) / lambda``."""
    if lyapunov <= 0.0:
        raise NotChaoticError(f"Ehrenfest time needs a positive Lyapunov exponent, got {lyapunov}")
    if not 0.0 < hbar < 1.0:
        raise ValueError(f"hbar must lie in (0, 1), got {hbar}")
    return math.log(1.0 / hbar) / lyapunov


@dataclass(frozen=True)
class RegimeCall:
    regime: str
    gamma_te: float
    ehrenfest_time: float
    note: str = "crossover heuristic: collapse if gamma * t_E > 1"


def regime(params, lyapunov: float) -> RegimeCall:
    """Classify collapse (gamma t_E > 1) versus explosion."""
    te = ehrenfest_time(params.hbar, lyapunov)
    x = params.gamma * te
    return RegimeCall("collapse" if x > 1.0 else "explosion", x, te)


@dataclass(frozen=True)
class SigmaEstimate:
    value: float
    applicable: bool | None


def weak_dissipation_sigma_estimate(K: float, gamma: float, hbar: float | None = None,
                                    lyapunov: float | None = None) -> SigmaEstimate:
    """Diffusive plateau estimate ``sqrt(D(K) / gamma)`` with ``D = K^2 / 2``.

    Only meaningful in the explosion regime. When ``hbar`` and ``lyapunov``
    are given the result is flagged with :func:`regime`; otherwise
    ``applicable`` is None.
    """
    if gamma <= 0.0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    value = math.sqrt(K * K / (2.0 * gamma))
    applicable = None
    if hbar is not None and lyapunov is not None:
        te = ehrenfest_time(hbar, lyapunov)
        applicable = gamma * te <= 1.0
    return SigmaEstimate(value, applicable)
