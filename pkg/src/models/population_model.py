# src/models/population_model.py

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .problem_model import Representation


def validate_genotype(problem, x):
    """Check that x is a valid element of the problem's search space and return it as an array."""
    x = np.asarray(x)
    if x.ndim != 1 or x.shape[0] != problem.n:
        raise ConfigError(f"genotype must have length {problem.n}, got shape {x.shape}", key='genotype')
    if problem.representation is Representation.BITS:
        if not np.isin(x, (0, 1)).all():
            raise ConfigError("bitstring entries must be 0 or 1", key='genotype')
        return x.astype(np.int8)
    if not np.array_equal(np.sort(x), np.arange(problem.n)):
        raise ConfigError("permutation must contain each of 0..n-1 exactly once", key='genotype')
    return x.astype(np.int64)


@dataclass
class Population:
    members: np.ndarray
    fitness: np.ndarray

    def __post_init__(self):
        if self.members.ndim != 2:
            raise ConfigError(f"population members must be a 2-d array, got shape {self.members.shape}", key='population')
        if self.fitness.shape != (self.members.shape[0],):
            raise ConfigError("fitness cache must align with members", key='population')

    @property
    def size(self):
        return self.members.shape[0]

    def __len__(self):
        return self.size

    def ranking(self, rng):
        """Member indices best first; ties are broken by a uniform shuffle drawn from rng."""
        order = rng.permutation(self.size)
        return order[np.argsort(-self.fitness[order], kind='stable')]

    def to_dict(self):
        return {'members': self.members.tolist(), 'fitness': self.fitness.tolist()}
