# src/services/problem_service.py

import itertools
import logging

import numpy as np

from ..models.errors import ConfigError
from ..models.population_model import validate_genotype
from ..models.problem_model import LevelPartition, ProblemSpec, Representation

logger = logging.getLogger(__name__)


def onemax(X):
    return X.sum(axis=-1, dtype=np.int64)


def leadingones(X):
    n = X.shape[-1]
    all_ones = X.all(axis=-1)
    return np.where(all_ones, n, np.argmin(X, axis=-1)).astype(np.int64)


def inversions_in_order(X):
    """Number of index pairs i < j with X[i] < X[j] (correctly ordered pairs)."""
    n = X.shape[-1]
    upper = np.triu(np.ones((n, n), dtype=bool), k=1)
    ordered = X[..., :, None] < X[..., None, :]
    return (ordered & upper).sum(axis=(-2, -1), dtype=np.int64)


FITNESS_FUNCTIONS = {
    'onemax': onemax,
    'leadingones': leadingones,
    'inv_sorting': inversions_in_order,
}


class ProblemService:
    # rows per chunk when evaluating INV, which needs an n x n comparison per genotype
    INV_CHUNK = 4096

    @staticmethod
    def evaluate(spec, x):
        x = validate_genotype(spec, x)
        return int(FITNESS_FUNCTIONS[spec.kind](x))

    @classmethod
    def evaluate_batch(cls, spec, X):
        X = np.asarray(X)
        if X.ndim != 2 or X.shape[1] != spec.n:
            raise ConfigError(f"expected a (rows, {spec.n}) array, got shape {X.shape}", key='genotype')
        if spec.kind != 'inv_sorting' or X.shape[0] <= cls.INV_CHUNK:
            return FITNESS_FUNCTIONS[spec.kind](X)
        return np.concatenate([inversions_in_order(X[start:start + cls.INV_CHUNK])
                               for start in range(0, X.shape[0], cls.INV_CHUNK)])

    @staticmethod
    def canonical_partition(spec):
        """Levels group equal fitness values: level = fitness + 1, top level m + 1 holds the optimum."""
        m = spec.max_fitness

        def level_of_fitness(fitness):
            return np.asarray(fitness, dtype=np.int64) + 1

        def level_of(x):
            return ProblemService.evaluate(spec, x) + 1

        return LevelPartition(m=m, level_of=level_of, level_of_fitness=level_of_fitness)

    @staticmethod
    def optimum(spec):
        if spec.representation is Representation.BITS:
            return np.ones(spec.n, dtype=np.int8)
        return np.arange(spec.n, dtype=np.int64)

    @staticmethod
    def representative(spec, level):
        """Canonical genotype at the given level of the canonical partition."""
        m = spec.max_fitness
        if not 1 <= level <= m + 1:
            raise ConfigError(f"level must lie in [1, {m + 1}], got {level}", key='level')
        if spec.representation is Representation.BITS:
            x = np.zeros(spec.n, dtype=np.int8)
            x[:level - 1] = 1
            return x
        # walk down from the identity; each swap of an ordered adjacent pair removes exactly one ordered pair
        x = np.arange(spec.n, dtype=np.int64)
        for _ in range(m - (level - 1)):
            i = int(np.flatnonzero(x[:-1] < x[1:])[0])
            x[i], x[i + 1] = x[i + 1], x[i]
        return x

    @staticmethod
    def enumerate_space(spec):
        """All genotypes of a small instance, as a 2-d array."""
        if spec.representation is Representation.BITS:
            if spec.n > 20:
                raise ConfigError(f"refusing to enumerate 2^{spec.n} bitstrings", key='problem.n')
            return np.array(list(itertools.product((0, 1), repeat=spec.n)), dtype=np.int8)
        if spec.n > 9:
            raise ConfigError(f"refusing to enumerate {spec.n}! permutations", key='problem.n')
        return np.array(list(itertools.permutations(range(spec.n))), dtype=np.int64)

    @staticmethod
    def uniform_sample(spec, rows, rng):
        if spec.representation is Representation.BITS:
            return rng.integers(0, 2, size=(rows, spec.n), dtype=np.int8)
        return rng.permuted(np.tile(np.arange(spec.n, dtype=np.int64), (rows, 1)), axis=1)
