import os

from dotenv import dotenv_values, load_dotenv

load_dotenv()  # Load environment variables from .env

EXPERIMENT_KEYS = ('PROBLEM', 'LAMBDA', 'SELECTION', 'CROSSOVER', 'MUTATION', 'SEED', 'MAX_EVALS', 'REPLICATES')


class Config:
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
    DEBUG = os.getenv('DEBUG', 'False') == 'True'

    # search engine
    GA_DEFAULT_MAX_EVALS = int(os.getenv('GA_DEFAULT_MAX_EVALS', str(10 ** 9)))
    GA_BLOCK_SIZE = int(os.getenv('GA_BLOCK_SIZE', '65536'))
    GA_WORKERS = int(os.getenv('GA_WORKERS', '1'))
    GA_OUTPUT_FORMAT = os.getenv('GA_OUTPUT_FORMAT', 'csv')

    # estimators and exhaustive oracles
    GA_ESTIMATE_TRIALS = int(os.getenv('GA_ESTIMATE_TRIALS', str(10 ** 5)))
    GA_CONSTANT_TRIALS = int(os.getenv('GA_CONSTANT_TRIALS', str(10 ** 6)))
    GA_BITS_ORACLE_MAX_N = int(os.getenv('GA_BITS_ORACLE_MAX_N', '12'))
    GA_PERM_ORACLE_MAX_N = int(os.getenv('GA_PERM_ORACLE_MAX_N', '6'))
    GA_SELECTION_ORACLE_MAX_DRAWS = int(os.getenv('GA_SELECTION_ORACLE_MAX_DRAWS', str(10 ** 7)))
    GA_CROSSOVER_ORACLE_MAX_DIFF = int(os.getenv('GA_CROSSOVER_ORACLE_MAX_DIFF', '16'))
    GA_BETA_GRID_POINTS = int(os.getenv('GA_BETA_GRID_POINTS', '20'))

    # JSON surface
    API_HOST = os.getenv('API_HOST', '127.0.0.1')
    API_PORT = int(os.getenv('API_PORT', '8080'))
    API_MAX_EVALS = int(os.getenv('API_MAX_EVALS', str(10 ** 7)))

    @classmethod
    def init_app(cls):
        from src.models.errors import ConfigError

        positive = ('GA_DEFAULT_MAX_EVALS', 'GA_BLOCK_SIZE', 'GA_WORKERS', 'GA_ESTIMATE_TRIALS',
                    'GA_CONSTANT_TRIALS', 'GA_BETA_GRID_POINTS', 'API_MAX_EVALS')
        for name in positive:
            if getattr(cls, name) < 1:
                raise ConfigError(f"must be a positive integer, got {getattr(cls, name)}", key=name)
        if cls.GA_OUTPUT_FORMAT not in ('csv', 'json'):
            raise ConfigError(f"must be csv or json, got {cls.GA_OUTPUT_FORMAT}", key='GA_OUTPUT_FORMAT')

    @staticmethod
    def load_experiment_file(path):
        """Read an experiment file in KEY=value form; unknown keys are rejected."""
        from src.models.errors import ConfigError

        if not os.path.isfile(path):
            raise ConfigError(f"experiment file {path} does not exist", key='config')
        values = dotenv_values(path)
        unknown = sorted(set(values) - set(EXPERIMENT_KEYS))
        if unknown:
            raise ConfigError(f"unknown keys {', '.join(unknown)}; expected {', '.join(EXPERIMENT_KEYS)}",
                              key='config')
        return {key: value for key, value in values.items() if value is not None}


# Expose load_experiment_file as a module-level function for external access
def load_experiment_file(path):
    return Config.load_experiment_file(path)
