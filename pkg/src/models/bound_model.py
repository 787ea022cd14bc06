# src/models/bound_model.py

import math
from dataclasses import dataclass, field
from typing import List, Optional

from .errors import ConfigError


@dataclass
class LevelProbabilities:
    """Per-level lower bounds (z_j or s_j) with the mutation/crossover constants p0 and eps1."""
    values: List[float]
    p0: float = 1.0
    eps1: float = 1.0

    def __post_init__(self):
        self.values = [float(v) for v in self.values]
        if not self.values:
            raise ConfigError("at least one level probability is required", key='levels')
        for j, value in enumerate(self.values, start=1):
            if not 0.0 < value <= 1.0:
                raise ConfigError(f"level {j} probability must lie in (0, 1], got {value}", key='levels')
        if not 0.0 < self.p0 <= 1.0:
            raise ConfigError(f"p0 must lie in (0, 1], got {self.p0}", key='p0')
        if not 0.0 < self.eps1 <= 1.0:
            raise ConfigError(f"eps1 must lie in (0, 1], got {self.eps1}", key='eps1')

    @property
    def floor(self):
        return min(self.values)

    @property
    def m(self):
        return len(self.values)

    def reciprocal_sum(self):
        return math.fsum(1.0 / value for value in self.values)


@dataclass
class BoundReport:
    delta: float
    gamma0: float
    a: float
    eps_or_psi: float
    c: float
    lambda_min: int
    lam: int
    bound: float
    lambda_ok: bool
    kind: str = 'theorem1'
    z0_slope_ok: bool = True
    implied_z: Optional[List[float]] = None
    warnings: List[str] = field(default_factory=list)

    def to_dict(self):
        record = {
            'kind': self.kind,
            'delta': self.delta,
            'gamma0': self.gamma0,
            'a': self.a,
            'eps_or_psi': self.eps_or_psi,
            'c': self.c,
            'lambda': self.lam,
            'lambda_min': self.lambda_min,
            'lambda_ok': self.lambda_ok,
            'bound': self.bound,
            'z0_slope_ok': self.z0_slope_ok,
        }
        if self.warnings:
            record['warnings'] = '; '.join(self.warnings)
        return record
