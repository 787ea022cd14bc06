# src/services/search_service.py

import logging

import numpy as np

from config import Config
from ..models.errors import ConfigError
from ..models.population_model import Population
from ..models.run_result_model import RunResult
from .operator_service import offspring_batch
from .problem_service import ProblemService
from .rng_service import SeedStream

logger = logging.getLogger(__name__)


class SearchEngine:
    """Population-based search with independent sampling: every offspring is drawn from D(P_t)."""

    @staticmethod
    def init_population(problem, lam, rng):
        if int(lam) != lam or lam < 1:
            raise ConfigError(f"population size must be an integer >= 1, got {lam}", key='lambda')
        members = ProblemService.uniform_sample(problem, int(lam), rng)
        return Population(members=members, fitness=ProblemService.evaluate_batch(problem, members))

    @staticmethod
    def sample_offspring(population, config, rng):
        return offspring_batch(config, population, 1, rng)[0]

    @staticmethod
    def evolve_generation(population, config, rng, block_size=None):
        """Next population of size lambda; all offspring are sampled from the same parent population."""
        block_size = block_size or Config.GA_BLOCK_SIZE
        lam = config.lam
        ranking = population.ranking(rng)
        blocks = [offspring_batch(config, population, min(block_size, lam - start), rng, ranking)
                  for start in range(0, lam, block_size)]
        members = np.concatenate(blocks) if len(blocks) > 1 else blocks[0]
        return Population(members=members, fitness=ProblemService.evaluate_batch(config.problem, members))

    @classmethod
    def run_until_target(cls, config, partition, max_evals, rng, run_index=0):
        """
        Iterate generations until some member reaches the top level or the budget runs out.

        The initial population is charged lambda evaluations and counts as generation 1, so
        evaluations == generations * lambda always holds.
        """
        lam = config.lam
        if max_evals < lam:
            raise ConfigError(f"max_evals={max_evals} is smaller than lambda={lam}", key='max_evals')
        stream = rng if isinstance(rng, SeedStream) else SeedStream(rng)

        population = cls.init_population(config.problem, lam, stream.generation(0))
        generations = 1
        evaluations = lam
        best = int(partition.levels(population.fitness).max())
        trace = [best]
        while best < partition.top and evaluations + lam <= max_evals:
            population = cls.evolve_generation(population, config, stream.generation(generations))
            generations += 1
            evaluations += lam
            best = int(partition.levels(population.fitness).max())
            trace.append(best)
            if generations % 100 == 0:
                logger.debug(f"run {run_index}: generation {generations}, best level {best}/{partition.top}")

        success = best >= partition.top
        if not success:
            logger.info(f"run {run_index} exhausted its budget of {max_evals} evaluations at level {best}")
        else:
            logger.debug(f"run {run_index} reached the target after {evaluations} evaluations")
        return RunResult(evaluations=evaluations, success=success, generations=generations,
                         best_level_trace=trace, seed=stream.seed, run_index=run_index)
