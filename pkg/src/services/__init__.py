from .problem_service import ProblemService
from .rng_service import SeedStream, replicate_seed
from .search_service import SearchEngine
from . import bound_service
from . import estimator_service
from . import operator_service

__all__ = [
    'ProblemService',
    'SeedStream',
    'replicate_seed',
    'SearchEngine',
    'bound_service',
    'estimator_service',
    'operator_service',
]
