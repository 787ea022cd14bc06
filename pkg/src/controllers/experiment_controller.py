# src/controllers/experiment_controller.py
import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor

import numpy as np
from scipy import stats as scipy_stats

from config import Config
from ..models import ConfigError, ExperimentStats
from ..services import ProblemService, SearchEngine, SeedStream
from ..services.bound_service import config_bound
from ..services.estimator_service import condition_report
from .config_controller import ConfigController

logger = logging.getLogger(__name__)

SWEEP_KEYS = ('lambda', 'seed', 'max_evals', 'replicates', 'problem.n', 'selection.k', 'selection.mu',
              'selection.eta', 'crossover.pc', 'mutation.chi')


def _replicate(config, run_index, partition=None):
    partition = partition or ProblemService.canonical_partition(config.problem)
    stream = SeedStream(config.seed).replicate(run_index)
    return SearchEngine.run_until_target(config, partition, config.max_evals, stream, run_index=run_index)


def _replicate_task(args):
    return _replicate(*args)


class ExperimentController:
    @staticmethod
    def summarize(runs):
        """Statistics over successful runs only; success_rate covers all runs."""
        runs = sorted(runs, key=lambda run: run.run_index)
        evaluations = np.array([run.evaluations for run in runs if run.success], dtype=float)
        successes = evaluations.size
        if successes == 0:
            return ExperimentStats(mean_evals=None, std_evals=None, ci95_halfwidth=None, success_rate=0.0,
                                   per_run=runs)
        mean = float(evaluations.mean())
        if successes > 1:
            std = float(evaluations.std(ddof=1))
            halfwidth = float(scipy_stats.t.ppf(0.975, successes - 1) * std / math.sqrt(successes))
        else:
            std, halfwidth = 0.0, 0.0
        return ExperimentStats(mean_evals=mean, std_evals=std, ci95_halfwidth=halfwidth,
                               success_rate=successes / len(runs), per_run=runs)

    @classmethod
    def run_replicates(cls, config, partition=None, workers=None):
        """
        Execute config.replicates independent runs on derived seed streams.

        Worker processes rebuild the canonical partition, so a custom partition forces
        serial execution. Results are ordered by run_index either way.
        """
        workers = workers or Config.GA_WORKERS
        if workers < 1:
            raise ConfigError(f"workers must be >= 1, got {workers}", key='workers')
        logger.info(f"running {config.replicates} replicate(s) of {config.problem.kind} n={config.problem.n}, "
                    f"lambda={config.lam}, {config.selection.to_string()}")
        indices = range(config.replicates)
        if workers == 1 or config.replicates == 1 or partition is not None:
            runs = [_replicate(config, index, partition) for index in indices]
        else:
            with ProcessPoolExecutor(max_workers=workers) as executor:
                runs = list(executor.map(_replicate_task, [(config, index) for index in indices]))
        result = cls.summarize(runs)
        logger.info(f"finished: success rate {result.success_rate:.3f}, mean evaluations {result.mean_evals}")
        return result

    @staticmethod
    def bound_vs_empirical_report(config, delta, stats, bound_report=None, conditions=None):
        """Flat record joining the empirical mean with the bound and the condition checks."""
        if bound_report is None:
            bound_report = config_bound(config, delta)
        if conditions is None:
            conditions = condition_report(config, delta)
        bound = bound_report.bound if bound_report is not None else None
        ratio = None
        if bound and stats.mean_evals is not None:
            ratio = stats.mean_evals / bound
        certified = conditions.passed and bound_report is not None and bound_report.lambda_ok
        if not certified:
            logger.warning("conditions do not all hold; the bound comparison is not certified")
        record = {
            'empirical_mean': stats.mean_evals,
            'bound': bound,
            'ratio': ratio,
            'conditions_pass': conditions.passed,
            'certified': certified,
            'success_rate': stats.success_rate,
            'replicates': stats.replicates,
            'delta': delta,
        }
        record.update(config.to_dict())
        return record

    @staticmethod
    def parse_vary(text):
        """'key=v1,v2,...' into the key and its list of values."""
        key, sep, values = str(text).partition('=')
        key = key.strip()
        if not sep or key not in SWEEP_KEYS:
            raise ConfigError(f"expected key=v1,v2,... with key one of {', '.join(SWEEP_KEYS)}, got '{text}'",
                              key='vary')
        items = [value.strip() for value in values.split(',') if value.strip()]
        if not items:
            raise ConfigError(f"no values given for {key}", key='vary')
        return key, items

    @classmethod
    def sweep(cls, config, vary, workers=None):
        """One row per cell of the cartesian product of the varied values."""
        if not vary:
            raise ConfigError("at least one --vary is required", key='vary')
        keys = [key for key, _ in vary]
        if len(set(keys)) != len(keys):
            raise ConfigError(f"keys varied more than once: {', '.join(keys)}", key='vary')
        rows = []
        for values in itertools.product(*(items for _, items in vary)):
            cell = config
            for key, value in zip(keys, values):
                cell = ConfigController.apply_override(cell, key, value)
            result = cls.run_replicates(cell, workers=workers)
            row = dict(zip(keys, values))
            row.update({
                'mean_evals': result.mean_evals,
                'std_evals': result.std_evals,
                'ci95_halfwidth': result.ci95_halfwidth,
                'success_rate': result.success_rate,
                'replicates': result.replicates,
            })
            rows.append(row)
        return rows
