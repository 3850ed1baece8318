"""Simulation parameter set for the dissipative kicked rotator."""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass

from .errors import ConfigurationError

JUMP_METHODS = ("exact", "substep")


@dataclass(frozen=True)
class SimParams:
    """Everything that defines one quantum trajectory run.

    ``K`` is the classical kick strength, ``hbar`` the effective Planck
    constant (equal to the kick period), ``gamma`` the fraction of momentum
    removed per period. The quantum kick strength is ``k = K / hbar`` and the
    Lindblad rate obeys ``1 - gamma = exp(-g2)``.

    ``jump_method`` selects how the dissipative segment is unravelled:
    ``"exact"`` samples the whole unit-time segment from its closed-form jump
    statistics, ``"substep"`` uses ``n_substeps`` first-order Monte Carlo
    substeps.
    """

    K: float
    hbar: float
    gamma: float
    n_basis: int = 2048
    n_substeps: int = 100
    n_kicks: int = 300
    seed: int = 0
    edge_threshold: float = 1e-8
    jump_method: str = "exact"

    def __post_init__(self):
        # 7 and 7.0 must fingerprint identically
        for name in ("K", "hbar", "gamma", "edge_threshold"):
            v = getattr(self, name)
            if isinstance(v, (int, float)) and not isinstance(v, bool):
                object.__setattr__(self, name, float(v))
        self.validate()

    def validate(self):
        if not (0.0 <= self.gamma <= 1.0) or math.isnan(self.gamma):
            raise ConfigurationError(f"gamma must lie in [0, 1], got {self.gamma}")
        if not self.hbar > 0.0:
            raise ConfigurationError(f"hbar must be positive, got {self.hbar}")
        if not self.K >= 0.0:
            raise ConfigurationError(f"K must be non-negative, got {self.K}")
        n = self.n_basis
        if not isinstance(n, int) or n < 4 or n % 2:
            raise ConfigurationError(f"n_basis must be an even integer >= 4, got {n!r}")
        if not isinstance(self.n_substeps, int) or self.n_substeps < 1:
            raise ConfigurationError(f"n_substeps must be >= 1, got {self.n_substeps!r}")
        if not isinstance(self.n_kicks, int) or self.n_kicks < 0:
            raise ConfigurationError(f"n_kicks must be >= 0, got {self.n_kicks!r}")
        if not isinstance(self.seed, int) or not (0 <= self.seed < 2**64):
            raise ConfigurationError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if not (0.0 < self.edge_threshold <= 1.0):
            raise ConfigurationError(f"edge_threshold must lie in (0, 1], got {self.edge_threshold}")
        if self.jump_method not in JUMP_METHODS:
            raise ConfigurationError(
                f"jump_method must be one of {JUMP_METHODS}, got {self.jump_method!r}"
            )

    def require_quantum(self):
        """Reject parameter sets the quantum evolution cannot handle."""
        if self.gamma >= 1.0:
            raise ConfigurationError(
                "gamma = 1 is the overdamped limit (g^2 = infinity); "
                "only the classical map accepts it"
            )

    @property
    def k(self) -> float:
        return self.K / self.hbar

    @property
    def g2(self) -> float:
        if self.gamma >= 1.0:
            return math.inf
        return -math.log1p(-self.gamma)

    @property
    def dtau(self) -> float:
        return 1.0 / self.n_substeps

    def replace(self, **changes) -> "SimParams":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "SimParams":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigurationError(f"unknown SimParams fields: {sorted(unknown)}")
        return cls(**data)

    def fingerprint(self) -> str:
        """Stable short hash of the physics-defining fields (seed excluded)."""
        d = self.to_dict()
        d.pop("seed")
        blob = json.dumps(d, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def suggest_basis(hbar: float, p_max: float) -> int:
    """Smallest power of two whose momentum range covers ``|p| <= p_max``."""
    need = 2.0 * p_max / hbar
    return max(64, 1 << math.ceil(math.log2(need)))


def basis_for(K: float, gamma: float, hbar: float, n_kicks: int = 300) -> int:
    """Basis size that keeps a K-kicked, gamma-damped packet off the edges.

    The mean momentum of the damped map has stationary spread
    ``K / sqrt(2 (1 - (1 - gamma)^2))`` and never exceeds ``K / gamma``; four
    spreads (or the hard bound, if smaller) plus a margin of ``K + 5`` for
    the packet width must fit inside the unmonitored 95% of the basis.
    """
    if gamma > 0.0:
        spread = K / math.sqrt(2.0 * (1.0 - (1.0 - gamma) ** 2))
        reach = min(K / gamma, 4.0 * spread)
    else:
        reach = 4.0 * K * math.sqrt(n_kicks / 2.0)
    return suggest_basis(hbar, (reach + K + 5.0) / 0.95)
