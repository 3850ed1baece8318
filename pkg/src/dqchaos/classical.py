"""Classical Zaslavsky map, its noisy variant, Lyapunov exponents and
attractor sampling.

Momentum is the rescaled ``p = hbar n``; one step reads

    p' = (1 - gamma) p + K sin x
    x' = x + p'   (mod 2 pi)

Quantum records are read right after each kick, i.e. at the pairs
``(x_t, p_{t+1})`` (kick position, momentum produced by that kick). The
``phase="kick"`` options below produce classical data in that convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from .errors import ConvergenceError, DivergenceError

TWO_PI = 2.0 * math.pi
P_DIVERGENCE = 1e3


@dataclass(frozen=True)
class ClassicalState:
    x: float
    p: float

    def __post_init__(self):
        if not 0.0 <= self.x < TWO_PI:
            object.__setattr__(self, "x", self.x % TWO_PI)


def zaslavsky_step(s: ClassicalState, K: float, gamma: float) -> ClassicalState:
    p = (1.0 - gamma) * s.p + K * math.sin(s.x)
    return ClassicalState((s.x + p) % TWO_PI, p)


def noisy_step(s: ClassicalState, K: float, gamma: float, hbar: float,
               rng: np.random.Generator, c: float = 1.0) -> ClassicalState:
    """Zaslavsky step plus Gaussian noise of std ``c sqrt(hbar)`` on x and p."""
    out = zaslavsky_step(s, K, gamma)
    if hbar == 0.0:
        return out
    amp = c * math.sqrt(hbar)
    dx, dp = rng.normal(0.0, amp, size=2)
    return ClassicalState((out.x + dx) % TWO_PI, out.p + dp)


def jacobian(x: float, K: float, gamma: float) -> np.ndarray:
    """Derivative of one step in (p, x) ordering."""
    kc = K * math.cos(x)
    return np.array([[1.0 - gamma, kc], [1.0 - gamma, 1.0 + kc]])


@numba.njit(cache=True)
def _orbit(x, p, K, gamma, n):
    xs = np.empty(n)
    ps = np.empty(n)
    for t in range(n):
        p = (1.0 - gamma) * p + K * math.sin(x)
        x = (x + p) % (2.0 * math.pi)
        xs[t] = x
        ps[t] = p
    return xs, ps


@numba.njit(cache=True)
def _kick_orbit(x, p, K, gamma, n):
    # state is (kick position, post-kick momentum): drift, then damp and kick
    xs = np.empty(n)
    ps = np.empty(n)
    for t in range(n):
        x = (x + p) % (2.0 * math.pi)
        p = (1.0 - gamma) * p + K * math.sin(x)
        xs[t] = x
        ps[t] = p
    return xs, ps


def _orbit_fn(phase: str):
    if phase == "iterate":
        return _orbit
    if phase == "kick":
        return _kick_orbit
    raise ValueError(f"phase must be 'iterate' or 'kick', got {phase!r}")


def orbit(s: ClassicalState, K: float, gamma: float, n: int, phase: str = "iterate"):
    """``n`` successive points after ``s``.

    ``phase="iterate"`` gives map iterates ``(x_t, p_t)``; ``phase="kick"``
    treats ``s`` as a post-kick sample and returns ``(x_t, p_{t+1})`` pairs.
    """
    return _orbit_fn(phase)(s.x, s.p, K, gamma, n)


@numba.njit(cache=True)
def _tangent_lyapunov(x, p, K, gamma, n_iter, transient):
    # tangent vector in (p, x) ordering, renormalized every step
    vp = 1.0
    vx = 0.0
    total = 0.0
    for t in range(transient + n_iter):
        kc = K * math.cos(x)
        nvp = (1.0 - gamma) * vp + kc * vx
        nvx = (1.0 - gamma) * vp + (1.0 + kc) * vx
        p = (1.0 - gamma) * p + K * math.sin(x)
        x = (x + p) % (2.0 * math.pi)
        norm = math.sqrt(nvp * nvp + nvx * nvx)
        vp = nvp / norm
        vx = nvx / norm
        if t >= transient:
            total += math.log(norm)
        if abs(p) > 1e300:
            return math.nan
    return total / n_iter


@dataclass(frozen=True)
class LyapunovResult:
    value: float
    std: float
    per_condition: tuple


def lyapunov(K: float, gamma: float, n_iter: int = 100_000, transient: int = 1000,
             rng: np.random.Generator | None = None, n_conditions: int = 10,
             p_range=(-15.0, 15.0), strict: bool = True) -> LyapunovResult:
    """Largest Lyapunov exponent by tangent-map iteration.

    Averaged over ``n_conditions`` random starting points; raises
    :class:`ConvergenceError` (when ``strict``) if their spread exceeds 10%
    of the mean.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    if n_conditions < 1:
        raise ValueError("need at least one initial condition")
    vals = []
    for _ in range(n_conditions):
        x0 = rng.uniform(0.0, TWO_PI)
        p0 = rng.uniform(*p_range)
        vals.append(_tangent_lyapunov(x0, p0, K, gamma, n_iter, transient))
    vals = np.array(vals)
    mean = float(np.mean(vals))
    std = float(np.std(vals))
    if strict and abs(mean) > 1e-3 and std > 0.1 * abs(mean):
        raise ConvergenceError(
            f"Lyapunov estimates scatter too much: mean {mean:.4f}, std {std:.4f}"
        )
    return LyapunovResult(mean, std, tuple(float(v) for v in vals))


def attractor_sample(K: float, gamma: float, n_points: int, transient: int = 200,
                     rng: np.random.Generator | None = None, n_conditions: int = 10,
                     p_range=(-15.0, 15.0), phase: str = "iterate") -> np.ndarray:
    """Post-transient points from random starts, shape ``(n_points, 2)`` as (x, p)."""
    if gamma <= 0.0:
        raise ValueError("attractor sampling needs gamma > 0")
    step = _orbit_fn(phase)
    rng = rng if rng is not None else np.random.default_rng(0)
    per = [n_points // n_conditions + (1 if i < n_points % n_conditions else 0)
           for i in range(n_conditions)]
    chunks = []
    for n in per:
        if n == 0:
            continue
        x0 = rng.uniform(0.0, TWO_PI)
        p0 = rng.uniform(*p_range)
        xs, ps = step(x0, p0, K, gamma, transient + n)
        if not np.all(np.abs(ps) < P_DIVERGENCE):
            raise DivergenceError(f"orbit left |p| < {P_DIVERGENCE:g} (K={K}, gamma={gamma})")
        chunks.append(np.column_stack([xs[transient:], ps[transient:]]))
    return np.concatenate(chunks)


def classical_record(s: ClassicalState, K: float, gamma: float, n: int):
    """Noiseless orbit packaged like a quantum record (zero variances).

    ``s`` and the entries are post-kick samples, as in quantum records.
    """
    from .observables import TrajectoryRecord

    xs, ps = orbit(s, K, gamma, n, phase="kick")
    z = np.zeros(n)
    zi = np.zeros(n, dtype=np.int64)
    return TrajectoryRecord(mean_x=xs, resultant=np.ones(n), mean_p=ps, var_x=z.copy(),
                            var_p=z.copy(), jumps_l1=zi, jumps_l2=zi.copy(),
                            edge_probability=z.copy(),
                            initial={"mean_x": s.x, "resultant": 1.0, "mean_p": s.p,
                                     "var_x": 0.0, "var_p": 0.0})


def occupancy(points: np.ndarray, bins: int = 64, p_range=(-15.0, 15.0)) -> np.ndarray:
    """Boolean ``bins x bins`` occupancy of (x, p) points over [0, 2 pi) x p_range."""
    pts = np.asarray(points)
    hist, _, _ = np.histogram2d(pts[:, 0], pts[:, 1], bins=bins,
                                range=[[0.0, TWO_PI], list(p_range)])
    return hist > 0


def jaccard(a: np.ndarray, b: np.ndarray) -> float:
    union = np.logical_or(a, b).sum()
    return float(np.logical_and(a, b).sum() / union) if union else 1.0
