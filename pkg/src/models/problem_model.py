# src/models/problem_model.py

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigError


class Representation(str, enum.Enum):
    BITS = 'bits'
    PERM = 'perm'


PROBLEM_KINDS = ('onemax', 'leadingones', 'inv_sorting')

# "inv" is accepted on the command line as shorthand for inv_sorting
PROBLEM_ALIASES = {'inv': 'inv_sorting', 'om': 'onemax', 'lo': 'leadingones'}


@dataclass(frozen=True)
class ProblemSpec:
    kind: str
    n: int

    def __post_init__(self):
        kind = PROBLEM_ALIASES.get(self.kind, self.kind)
        object.__setattr__(self, 'kind', kind)
        if kind not in PROBLEM_KINDS:
            raise ConfigError(f"unknown problem '{kind}', expected one of {', '.join(PROBLEM_KINDS)}", key='problem')
        if not isinstance(self.n, (int, np.integer)) or isinstance(self.n, bool) or self.n < 1:
            raise ConfigError(f"n must be a positive integer, got {self.n!r}", key='problem.n')
        object.__setattr__(self, 'n', int(self.n))

    @property
    def representation(self):
        return Representation.PERM if self.kind == 'inv_sorting' else Representation.BITS

    @property
    def max_fitness(self):
        if self.kind == 'inv_sorting':
            return math.comb(self.n, 2)
        return self.n

    def to_dict(self):
        return {'kind': self.kind, 'n': self.n}


@dataclass(frozen=True)
class LevelPartition:
    """Ordered partition (A_1, ..., A_{m+1}) of the search space; level m+1 is the target."""
    m: int
    level_of: Callable
    level_of_fitness: Callable

    def __post_init__(self):
        if self.m < 1:
            raise ConfigError(f"a partition needs at least one non-top level, got m={self.m}", key='partition.m')

    @property
    def top(self):
        return self.m + 1

    def levels(self, fitness):
        """Vectorised level lookup from cached fitness values."""
        return self.level_of_fitness(np.asarray(fitness))
