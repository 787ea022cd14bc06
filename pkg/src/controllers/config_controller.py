# src/controllers/config_controller.py
import logging
import math
from decimal import Decimal, InvalidOperation

from config import Config
from ..models import ConfigError, CrossoverSpec, GAConfig, MutationSpec, ProblemSpec, SelectionMechanism
from ..services import bound_service

logger = logging.getLogger(__name__)

OPERATOR_GRAMMAR = "name:key=value,key=value"

CONFIG_KEYS = ('problem', 'lambda', 'selection', 'crossover', 'mutation', 'seed', 'max_evals', 'replicates')
REQUIRED_KEYS = ('problem', 'lambda', 'selection', 'mutation')
DEFAULT_CROSSOVER = 'uniform:pc=1.0'

# parameters each operator accepts, with True for integer-valued ones
OPERATOR_PARAMETERS = {
    'problem': {'n': True},
    'tournament': {'k': True},
    'mu_lambda': {'mu': True},
    'exp_ranking': {'eta': False},
    'one_point': {'pc': False},
    'uniform': {'pc': False},
    'bitwise': {'chi': False},
    'exchange': {},
}


class ConfigController:
    @staticmethod
    def parse_number(text, key, integer=False):
        try:
            value = Decimal(str(text).strip())
        except InvalidOperation:
            raise ConfigError(f"expected a decimal number, got '{text}'", key=key) from None
        if not value.is_finite():
            raise ConfigError(f"expected a finite number, got '{text}'", key=key)
        if integer:
            if value != value.to_integral_value():
                raise ConfigError(f"expected an integer, got '{text}'", key=key)
            return int(value)
        return float(value)

    @classmethod
    def parse_operator(cls, text, key):
        """Split 'name:key=value,...' into the name and its typed parameters."""
        text = str(text).strip()
        name, _, body = text.partition(':')
        name = name.strip()
        if not name:
            raise ConfigError(f"missing operator name in '{text}', expected {OPERATOR_GRAMMAR}", key=key)
        params = {}
        for item in filter(None, (part.strip() for part in body.split(','))):
            param, sep, value = item.partition('=')
            param = param.strip()
            if not sep or not param or not value.strip():
                raise ConfigError(f"malformed parameter '{item}', expected {OPERATOR_GRAMMAR}", key=key)
            if param in params:
                raise ConfigError(f"parameter '{param}' given twice", key=key)
            params[param] = value.strip()
        return name, params

    @classmethod
    def _typed(cls, kind, params, key):
        accepted = OPERATOR_PARAMETERS.get(kind)
        if accepted is None:
            raise ConfigError(f"unknown operator '{kind}'", key=key)
        unknown = sorted(set(params) - set(accepted))
        if unknown:
            expected = ', '.join(accepted) or 'no parameters'
            raise ConfigError(f"unknown parameter(s) {', '.join(unknown)} for {kind}; expected {expected}", key=key)
        return {name: cls.parse_number(value, f'{key}.{name}', integer=accepted[name])
                for name, value in params.items()}

    @classmethod
    def parse_problem(cls, text):
        kind, params = cls.parse_operator(text, 'problem')
        typed = cls._typed('problem', params, 'problem')
        if 'n' not in typed:
            raise ConfigError(f"missing n in '{text}', expected {kind}:n=<length>", key='problem')
        return ProblemSpec(kind=kind, n=typed['n'])

    @classmethod
    def parse_selection(cls, text):
        kind, params = cls.parse_operator(text, 'selection')
        if kind not in ('tournament', 'mu_lambda', 'exp_ranking'):
            raise ConfigError(f"unknown selection '{kind}', expected tournament, mu_lambda or exp_ranking",
                              key='selection')
        return SelectionMechanism(kind=kind, **cls._typed(kind, params, 'selection'))

    @classmethod
    def parse_crossover(cls, text):
        kind, params = cls.parse_operator(text, 'crossover')
        if kind not in ('one_point', 'uniform'):
            raise ConfigError(f"unknown crossover '{kind}', expected one_point or uniform", key='crossover')
        return CrossoverSpec(kind=kind, **cls._typed(kind, params, 'crossover'))

    @classmethod
    def parse_mutation(cls, text):
        kind, params = cls.parse_operator(text, 'mutation')
        if kind not in ('bitwise', 'exchange'):
            raise ConfigError(f"unknown mutation '{kind}', expected bitwise or exchange", key='mutation')
        typed = cls._typed(kind, params, 'mutation')
        if kind == 'bitwise':
            typed.setdefault('chi', 1.0)
        return MutationSpec(kind=kind, **typed)

    @staticmethod
    def merge_options(options, config_file=None):
        """Experiment file values first, then explicitly given options on top."""
        merged = {}
        if config_file:
            file_values = Config.load_experiment_file(config_file)
            merged.update({key.lower(): value for key, value in file_values.items()})
        for key, value in (options or {}).items():
            if key not in CONFIG_KEYS:
                raise ConfigError(f"unknown key, expected one of {', '.join(CONFIG_KEYS)}", key=key)
            if value is not None:
                merged[key] = value
        return merged

    @classmethod
    def parse_config(cls, options=None, config_file=None, delta=1.0):
        """
        Fully validated GAConfig from option values and an optional experiment file.

        Without max_evals the budget is 10x the configuration's bound at delta, or
        GA_DEFAULT_MAX_EVALS when no bound can be evaluated.
        """
        merged = cls.merge_options(options, config_file)
        missing = [key for key in REQUIRED_KEYS if key not in merged]
        if missing:
            raise ConfigError(f"missing required key(s) {', '.join(missing)}", key='config')
        config = GAConfig(
            problem=cls.parse_problem(merged['problem']),
            lam=cls.parse_number(merged['lambda'], 'lambda', integer=True),
            selection=cls.parse_selection(merged['selection']),
            crossover=cls.parse_crossover(merged.get('crossover', DEFAULT_CROSSOVER)),
            mutation=cls.parse_mutation(merged['mutation']),
            seed=cls.parse_number(merged.get('seed', 0), 'seed', integer=True),
            max_evals=cls.parse_number(merged.get('max_evals', Config.GA_DEFAULT_MAX_EVALS), 'max_evals',
                                       integer=True),
            replicates=cls.parse_number(merged.get('replicates', 1), 'replicates', integer=True),
        )
        if 'max_evals' not in merged:
            config = config.with_changes(max_evals=cls.default_max_evals(config, delta))
        logger.debug(f"parsed configuration {config.to_dict()}")
        return config

    @staticmethod
    def default_max_evals(config, delta=1.0):
        try:
            report = bound_service.config_bound(config, delta)
        except ConfigError as e:
            logger.debug(f"no bound for {config.problem.kind}: {e}")
            report = None
        if report is None:
            return Config.GA_DEFAULT_MAX_EVALS
        return max(config.lam, math.ceil(10.0 * report.bound))

    @staticmethod
    def parse_argv(argv):
        """Option dictionary from '--key value' pairs as produced by render_config."""
        argv = list(argv)
        if len(argv) % 2:
            raise ConfigError(f"expected '--key value' pairs, got {len(argv)} tokens", key='argv')
        options = {}
        for flag, value in zip(argv[0::2], argv[1::2]):
            if not flag.startswith('--'):
                raise ConfigError(f"expected a flag, got '{flag}'", key='argv')
            key = flag[2:].replace('-', '_')
            if key not in CONFIG_KEYS:
                raise ConfigError(f"unknown flag {flag}, expected one of "
                                  f"{', '.join('--' + k.replace('_', '-') for k in CONFIG_KEYS)}", key='argv')
            options[key] = value
        return options

    @staticmethod
    def render_config(config):
        """argv that parse_config(parse_argv(...)) turns back into the same configuration."""
        argv = []
        for key, value in config.to_dict().items():
            argv.extend([f"--{key.replace('_', '-')}", str(value)])
        return argv

    @classmethod
    def apply_override(cls, config, key, value):
        """Copy of config with one sweep key changed, e.g. 'selection.k' or 'problem.n'."""
        if key in ('lambda', 'seed', 'max_evals', 'replicates'):
            field = 'lam' if key == 'lambda' else key
            return config.with_changes(**{field: cls.parse_number(value, key, integer=True)})
        section, _, param = key.partition('.')
        if section == 'problem' and param == 'n':
            return config.with_changes(problem=ProblemSpec(kind=config.problem.kind,
                                                           n=cls.parse_number(value, key, integer=True)))
        builders = {'selection': cls.parse_selection, 'crossover': cls.parse_crossover,
                    'mutation': cls.parse_mutation}
        if section not in builders or not param:
            raise ConfigError(f"cannot sweep '{key}'", key='vary')
        current = getattr(config, section)
        name, params = cls.parse_operator(current.to_string(), section)
        params[param] = value
        body = ','.join(f"{k}={v}" for k, v in params.items())
        return config.with_changes(**{section: builders[section](f"{name}:{body}")})
