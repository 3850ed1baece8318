"""Direct Lindblad integration on small bases, used as ground truth for
trajectory-ensemble averages."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, IntegrationError
from .params import SimParams
from .quantum import (
    Propagator,
    WaveFunction,
    apply_kick,
    free_phase,
    momentum_levels,
)
from .rng import trajectory_rng

MAX_ORACLE_BASIS = 128
BLOCK = 50


@dataclass
class DensityMatrix:
    matrix: np.ndarray
    fingerprint: str = ""
    trace_drift: float = 0.0

    @classmethod
    def from_state(cls, psi: WaveFunction, fingerprint: str = "") -> "DensityMatrix":
        c = psi.amplitudes
        return cls(np.outer(c, c.conj()), fingerprint)

    @property
    def n_basis(self) -> int:
        return self.matrix.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def populations(self) -> np.ndarray:
        return np.diag(self.matrix).real.copy()

    def mean_n(self) -> float:
        return float(np.dot(self.populations(), momentum_levels(self.n_basis)))

    def check(self, herm_tol=1e-10, trace_tol=1e-8, pos_tol=1e-8):
        rho = self.matrix
        herm = float(np.max(np.abs(rho - rho.conj().T)))
        if herm > herm_tol:
            raise IntegrationError(f"density matrix lost Hermiticity ({herm:.2e})")
        tr = self.trace()
        if abs(tr - 1.0) > trace_tol:
            raise IntegrationError(f"trace {tr!r} departs from 1 by more than {trace_tol}")
        lam = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min())
        if lam < -pos_tol:
            raise IntegrationError(f"negative eigenvalue {lam:.2e}")


def lowering_operators(params: SimParams):
    """Dense ``L1``, ``L2`` on the truncated basis (g included)."""
    N = params.n_basis
    half = N // 2
    g = math.sqrt(params.g2)
    L1 = np.zeros((N, N))
    L2 = np.zeros((N, N))
    for n in range(half - 1):
        # L1 |n+1> = g sqrt(n+1) |n>
        L1[half + n, half + n + 1] = g * math.sqrt(n + 1)
    for n in range(half):
        # L2 |-n-1> = g sqrt(n+1) |-n>
        L2[half - n, half - n - 1] = g * math.sqrt(n + 1)
    return L1, L2


def kick_matrix(params: SimParams) -> np.ndarray:
    N = params.n_basis
    eye = np.eye(N, dtype=np.complex128)
    return np.column_stack([apply_kick(WaveFunction(eye[:, j], params.hbar), params).amplitudes
                            for j in range(N)])


class LindbladOracle:
    """One-period map ``rho -> U_kick D(U_free rho U_free^dag) U_kick^dag``.

    ``D`` integrates the dissipator over unit time with ``n_substeps`` fixed
    RK4 steps.
    """

    def __init__(self, params: SimParams):
        if params.n_basis > MAX_ORACLE_BASIS:
            raise ConfigurationError(
                f"oracle limited to n_basis <= {MAX_ORACLE_BASIS}, got {params.n_basis}"
            )
        params.require_quantum()
        self.params = params
        L1, L2 = lowering_operators(params)
        # L1 has entries on the superdiagonal, L2 on the subdiagonal
        self.w1 = np.append(np.diag(L1, 1), 0.0)
        self.w2 = np.insert(np.diag(L2, -1), 0, 0.0)
        self.damp = np.diag(L1.T @ L1 + L2.T @ L2)
        self.free = free_phase(params)
        self.U = kick_matrix(params) if params.K != 0.0 else None
        self.dissipative = params.gamma > 0.0

    def dissipator(self, rho: np.ndarray) -> np.ndarray:
        """``sum_mu L rho L^dag - 1/2 {L^dag L, rho}`` using the band structure."""
        out = -0.5 * (self.damp[:, None] + self.damp[None, :]) * rho
        # (L1 rho L1^T)[a, b] = w1[a] w1[b] rho[a+1, b+1]
        out[:-1, :-1] += np.outer(self.w1[:-1], self.w1[:-1]) * rho[1:, 1:]
        # (L2 rho L2^T)[a, b] = w2[a] w2[b] rho[a-1, b-1]
        out[1:, 1:] += np.outer(self.w2[1:], self.w2[1:]) * rho[:-1, :-1]
        return out

    def dissipate(self, rho: np.ndarray) -> np.ndarray:
        h = 1.0 / self.params.n_substeps
        f = self.dissipator
        for _ in range(self.params.n_substeps):
            k1 = f(rho)
            k2 = f(rho + 0.5 * h * k1)
            k3 = f(rho + 0.5 * h * k2)
            k4 = f(rho + h * k3)
            rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        return rho

    def period(self, dm: DensityMatrix) -> DensityMatrix:
        rho = dm.matrix
        tr0 = float(np.trace(rho).real)
        rho = self.free[:, None] * rho * self.free.conj()[None, :]
        if self.dissipative:
            rho = self.dissipate(rho)
        if self.U is not None:
            rho = self.U @ rho @ self.U.conj().T
        drift = abs(float(np.trace(rho).real) - tr0)
        if drift > 1e-6:
            raise IntegrationError(f"trace drift {drift:.2e} per period; increase n_substeps")
        out = DensityMatrix(rho, self.params.fingerprint(), dm.trace_drift + drift)
        out.check()
        return out


def lindblad_period(rho: DensityMatrix, params: SimParams,
                    oracle: LindbladOracle | None = None) -> DensityMatrix:
    """Advance a density matrix by one kick period."""
    return (oracle or LindbladOracle(params)).period(rho)


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    d = a - b
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (d + d.conj().T)))))


def _block_sums(args):
    params, psi0, indices, n_kicks = args
    prop = Propagator(params)
    N = params.n_basis
    sums = np.zeros((n_kicks, N, N), dtype=np.complex128)
    for i in indices:
        rng = trajectory_rng(params.seed, i)
        c = psi0.amplitudes.copy()
        for t in range(n_kicks):
            c, _ = prop.step(c, rng)
            sums[t] += np.outer(c, c.conj())
    return indices[0], sums


@dataclass
class UnravelingComparison:
    distances: np.ndarray
    M: int
    oracle_mean_n: np.ndarray
    ensemble_mean_n: np.ndarray

    @property
    def max_distance(self) -> float:
        return float(self.distances.max())


def compare_unraveling(params: SimParams, M: int, psi0: WaveFunction,
                       n_kicks: int | None = None, threads: int = 1) -> UnravelingComparison:
    """Trace distance between the M-trajectory average and the oracle, per kick.

    Trajectories are summed in fixed blocks of consecutive indices and the
    blocks in index order, so the result is independent of ``threads``.
    """
    n_kicks = params.n_kicks if n_kicks is None else n_kicks
    oracle = LindbladOracle(params)
    blocks = [list(range(s, min(s + BLOCK, M))) for s in range(0, M, BLOCK)]
    work = [(params, psi0, b, n_kicks) for b in blocks]
    threads = max(1, int(threads or 1))
    if threads == 1:
        parts = [_block_sums(w) for w in work]
    else:
        with ProcessPoolExecutor(max_workers=min(threads, os.cpu_count() or 1)) as ex:
            parts = list(ex.map(_block_sums, work))
    parts.sort(key=lambda kv: kv[0])
    total = np.zeros((n_kicks, params.n_basis, params.n_basis), dtype=np.complex128)
    for _, s in parts:
        total += s
    total /= M
    dm = DensityMatrix.from_state(psi0, params.fingerprint())
    levels = momentum_levels(params.n_basis)
    dist, n_or, n_en = [], [], []
    for t in range(n_kicks):
        dm = oracle.period(dm)
        dist.append(trace_distance(total[t], dm.matrix))
        n_or.append(dm.mean_n())
        n_en.append(float(np.dot(np.diag(total[t]).real, levels)))
    return UnravelingComparison(np.array(dist), M, np.array(n_or), np.array(n_en))
