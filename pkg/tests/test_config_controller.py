import math

import pytest

from config import Config
from src.controllers import ConfigController
from src.models import ConfigError, CrossoverSpec, GAConfig, SelectionMechanism
from src.services import bound_service

OPTIONS = {
    'problem': 'onemax:n=100',
    'lambda': '500',
    'selection': 'tournament:k=24',
    'crossover': 'uniform:pc=1.0',
    'mutation': 'bitwise:chi=1.0',
}


def test_parse_config_grammar_example():
    config = ConfigController.parse_config(OPTIONS)
    assert config.problem.kind == 'onemax'
    assert config.problem.n == 100
    assert config.lam == 500
    assert config.selection == SelectionMechanism(kind='tournament', k=24)
    assert config.crossover == CrossoverSpec(kind='uniform', pc=1.0)
    assert config.mutation.rate(config.problem.n) == pytest.approx(0.01)
    assert config.replicates == 1


def test_defaults_for_optional_keys():
    options = {key: value for key, value in OPTIONS.items() if key != 'crossover'}
    options['mutation'] = 'bitwise'
    config = ConfigController.parse_config(options)
    assert config.crossover == CrossoverSpec(kind='uniform', pc=1.0)
    assert config.mutation.chi == 1.0
    assert config.seed == 0


def test_budget_defaults_to_ten_times_the_bound():
    config = ConfigController.parse_config(OPTIONS)
    report = bound_service.config_bound(config, 1.0)
    assert config.max_evals == max(config.lam, math.ceil(10 * report.bound))
    assert ConfigController.parse_config(OPTIONS, delta=0.5).max_evals != config.max_evals


def test_budget_without_a_bound_uses_the_default():
    options = {'problem': 'onemax:n=1', 'lambda': '2', 'selection': 'tournament:k=2', 'mutation': 'bitwise'}
    assert ConfigController.parse_config(options).max_evals == Config.GA_DEFAULT_MAX_EVALS
    assert ConfigController.parse_config({**options, 'max_evals': '50'}).max_evals == 50


@pytest.mark.parametrize(
    ("changes", "key"),
    [
        ({'mutation': 'exchange'}, 'mutation'),
        ({'selection': 'tournament:k=0'}, 'selection.k'),
        ({'selection': 'mu_lambda:mu=600'}, 'selection.mu'),
        ({'selection': 'tournament:size=2'}, 'selection'),
        ({'crossover': 'uniform:pc=1.5'}, 'crossover.pc'),
        ({'lambda': '2.5'}, 'lambda'),
        ({'problem': 'onemax'}, 'problem'),
        ({'problem': 'trap:n=10'}, 'problem'),
        ({'selection': 'tournament:k'}, 'selection'),
        ({'mutation': 'bitwise:chi=300'}, 'mutation.chi'),
    ],
    ids=["representation_mismatch", "zero_k", "mu_above_lambda", "unknown_parameter", "pc_out_of_range",
         "fractional_lambda", "missing_n", "unknown_problem", "malformed_parameter", "rate_above_one"],
)
def test_invalid_configurations(changes, key):
    with pytest.raises(ConfigError) as excinfo:
        ConfigController.parse_config({**OPTIONS, **changes})
    assert excinfo.value.key == key


def test_missing_required_key():
    options = {key: value for key, value in OPTIONS.items() if key != 'selection'}
    with pytest.raises(ConfigError, match='selection'):
        ConfigController.parse_config(options)


def test_unknown_option_key():
    with pytest.raises(ConfigError):
        ConfigController.parse_config({**OPTIONS, 'population': '10'})


def test_experiment_file_with_flag_override(tmp_path):
    path = tmp_path / 'experiment.env'
    path.write_text("PROBLEM=leadingones:n=20\nLAMBDA=40\nSELECTION=mu_lambda:mu=4\n"
                    "MUTATION=bitwise:chi=1.0\nREPLICATES=5\n")
    config = ConfigController.parse_config({'lambda': '80', 'seed': None}, str(path))
    assert config.problem.kind == 'leadingones'
    assert config.lam == 80
    assert config.replicates == 5


def test_experiment_file_rejects_unknown_keys(tmp_path):
    path = tmp_path / 'experiment.env'
    path.write_text("PROBLEM=onemax:n=5\nGENERATIONS=10\n")
    with pytest.raises(ConfigError, match='GENERATIONS'):
        ConfigController.parse_config({}, str(path))


def test_missing_experiment_file(tmp_path):
    with pytest.raises(ConfigError):
        ConfigController.parse_config(OPTIONS, str(tmp_path / 'absent.env'))


@pytest.mark.parametrize("fixture", ["onemax_config", "inv_config"])
def test_render_config_reparses_to_the_same_configuration(fixture, request):
    config = request.getfixturevalue(fixture)
    argv = ConfigController.render_config(config)
    assert '--max-evals' in argv
    assert ConfigController.parse_config(ConfigController.parse_argv(argv)) == config


def test_parse_argv_rejects_bad_tokens():
    with pytest.raises(ConfigError):
        ConfigController.parse_argv(['--lambda'])
    with pytest.raises(ConfigError):
        ConfigController.parse_argv(['lambda', '10'])
    with pytest.raises(ConfigError):
        ConfigController.parse_argv(['--generations', '10'])


def test_parse_number():
    assert ConfigController.parse_number('1e3', 'x', integer=True) == 1000
    assert ConfigController.parse_number(' 0.25 ', 'x') == 0.25
    with pytest.raises(ConfigError):
        ConfigController.parse_number('nan', 'x')
    with pytest.raises(ConfigError):
        ConfigController.parse_number('ten', 'x')


def test_parse_operator_rejects_repeated_parameters():
    with pytest.raises(ConfigError):
        ConfigController.parse_operator('tournament:k=2,k=3', 'selection')


@pytest.mark.parametrize(
    ("key", "value", "check"),
    [
        ('lambda', '40', lambda c: c.lam == 40),
        ('problem.n', '12', lambda c: c.problem.n == 12),
        ('selection.k', '5', lambda c: c.selection.k == 5),
        ('crossover.pc', '0.5', lambda c: c.crossover.pc == 0.5),
        ('mutation.chi', '2', lambda c: c.mutation.chi == 2.0),
    ],
    ids=["lambda", "problem_n", "selection_k", "crossover_pc", "mutation_chi"],
)
def test_apply_override(onemax_config, key, value, check):
    changed = ConfigController.apply_override(onemax_config, key, value)
    assert isinstance(changed, GAConfig)
    assert check(changed)


def test_apply_override_rejects_foreign_parameter(onemax_config):
    with pytest.raises(ConfigError):
        ConfigController.apply_override(onemax_config, 'selection.mu', '3')
    with pytest.raises(ConfigError):
        ConfigController.apply_override(onemax_config, 'problem.kind', 'leadingones')
