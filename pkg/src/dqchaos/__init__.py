"""Quantum trajectories of the dissipative kicked rotator."""

from .errors import (
    ConfigurationError,
    DQChaosError,
    FormatError,
    IntegrityError,
    NumericalGuardError,
    TruncationError,
)
from .params import SimParams
from .quantum import Propagator, WaveFunction, make_gaussian, step_period
from .trajectory import InitialCondition, run_ensemble, run_trajectory

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "DQChaosError",
    "FormatError",
    "InitialCondition",
    "IntegrityError",
    "NumericalGuardError",
    "Propagator",
    "SimParams",
    "TruncationError",
    "WaveFunction",
    "make_gaussian",
    "run_ensemble",
    "run_trajectory",
    "step_period",
]
