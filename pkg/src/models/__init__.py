from .errors import ConfigError, ResultsWriteError
from .problem_model import ProblemSpec, LevelPartition, Representation
from .population_model import Population, validate_genotype
from .operator_model import SelectionMechanism, CrossoverSpec, MutationSpec
from .ga_config_model import GAConfig
from .run_result_model import RunResult, ExperimentStats
from .bound_model import LevelProbabilities, BoundReport
from .estimate_model import Estimate, ConditionRecord, ConditionReport

__all__ = [
    'ConfigError',
    'ResultsWriteError',
    'ProblemSpec',
    'LevelPartition',
    'Representation',
    'Population',
    'validate_genotype',
    'SelectionMechanism',
    'CrossoverSpec',
    'MutationSpec',
    'GAConfig',
    'RunResult',
    'ExperimentStats',
    'LevelProbabilities',
    'BoundReport',
    'Estimate',
    'ConditionRecord',
    'ConditionReport',
]
