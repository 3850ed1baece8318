"""Single quantum trajectories and parallel, order-insensitive ensembles."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ConfigurationError
from .observables import TrajectoryRecord, measure_arrays
from .params import SimParams
from .quantum import (
    Propagator,
    WaveFunction,
    make_gaussian,
    make_momentum_eigenstate,
    make_position_eigenstate,
    momentum_levels,
    position_grid,
)
from .rng import trajectory_rng


@dataclass(frozen=True)
class InitialCondition:
    """``kind`` is ``"gaussian"`` (x0, p0), ``"position"`` (x0) or ``"momentum"`` (n0)."""

    kind: str = "gaussian"
    x0: float = 5.0 * math.pi / 4.0
    p0: float = 0.0
    n0: int = 0

    def __post_init__(self):
        if self.kind not in ("gaussian", "position", "momentum"):
            raise ConfigurationError(f"unknown initial-condition kind {self.kind!r}")
        if self.kind != "momentum" and not 0.0 <= self.x0 < 2.0 * math.pi:
            raise ConfigurationError(f"x0 must lie in [0, 2 pi), got {self.x0}")

    def build(self, params: SimParams) -> WaveFunction:
        if self.kind == "gaussian":
            return make_gaussian(self.x0, self.p0, params)
        if self.kind == "position":
            return make_position_eigenstate(self.x0, params)
        return make_momentum_eigenstate(self.n0, params)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "InitialCondition":
        return cls(**d)


def run_trajectory(params: SimParams, initial: InitialCondition | WaveFunction,
                   index: int = 0, propagator: Propagator | None = None,
                   rng: np.random.Generator | None = None, return_state: bool = False):
    """Evolve one trajectory for ``params.n_kicks`` periods.

    The random stream is derived from ``(params.seed, index)`` unless ``rng``
    is supplied. Returns the :class:`TrajectoryRecord`, plus the final
    :class:`WaveFunction` when ``return_state`` is set.
    """
    prop = propagator if propagator is not None else Propagator(params)
    rng = rng if rng is not None else trajectory_rng(params.seed, index)
    psi0 = initial.build(params) if isinstance(initial, InitialCondition) else initial
    c = psi0.amplitudes.copy()
    x = position_grid(params.n_basis)
    levels = momentum_levels(params.n_basis)
    s0 = measure_arrays(c, params.hbar, x, levels)
    snaps, stats = [], []
    for _ in range(params.n_kicks):
        c, st = prop.step(c, rng)
        stats.append(st)
        snaps.append(measure_arrays(c, params.hbar, x, levels))
    record = TrajectoryRecord.from_snapshots(
        snaps,
        stats,
        fingerprint=params.fingerprint(),
        seed=params.seed,
        index=index,
        params=params.to_dict(),
        initial={"mean_x": s0.mean_x, "resultant": s0.resultant, "mean_p": s0.mean_p,
                 "var_x": s0.var_x, "var_p": s0.var_p},
    )
    if return_state:
        return record, WaveFunction(c, params.hbar)
    return record


def _ensemble_worker(args):
    params, initial, indices = args
    prop = Propagator(params)
    return [(i, run_trajectory(params, initial, i, prop)) for i in indices]


def run_ensemble(params: SimParams, initial: InitialCondition, M: int,
                 threads: int = 1, start_index: int = 0) -> list:
    """Run trajectories ``start_index .. start_index + M - 1``.

    Results are keyed by trajectory index and returned in index order, so the
    outcome does not depend on ``threads`` or on scheduling.
    """
    indices = list(range(start_index, start_index + M))
    threads = max(1, int(threads or 1))
    if threads == 1 or M == 1:
        results = _ensemble_worker((params, initial, indices))
    else:
        chunks = [indices[k::threads] for k in range(threads)]
        chunks = [ch for ch in chunks if ch]
        with ProcessPoolExecutor(max_workers=min(threads, os.cpu_count() or 1)) as ex:
            results = [r for part in ex.map(_ensemble_worker,
                                            [(params, initial, ch) for ch in chunks])
                       for r in part]
    by_index = dict(results)
    return [by_index[i] for i in indices]


def ensemble_mean(records, attr: str) -> tuple:
    """Ensemble mean and standard error of a per-kick series."""
    data = np.stack([getattr(r, attr) for r in records])
    mean = data.mean(axis=0)
    if len(records) > 1:
        se = data.std(axis=0, ddof=1) / math.sqrt(len(records))
    else:
        se = np.full_like(mean, np.nan)
    return mean, se
