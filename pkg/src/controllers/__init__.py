from .config_controller import ConfigController
from .experiment_controller import ExperimentController
from .results_controller import ResultsController

__all__ = [
    'ConfigController',
    'ExperimentController',
    'ResultsController',
]
