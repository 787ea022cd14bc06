# src/views/cli_views.py
import logging
from functools import wraps

import click
import numpy as np

from config import Config
from ..controllers import ConfigController, ExperimentController, ResultsController
from ..decorators.error_handlers import cli_errors
from ..models import ConfigError, LevelProbabilities, Population
from ..services import ProblemService, SeedStream, bound_service, estimator_service
from ..services.operator_service import beta_closed_form, beta_lower_bound

logger = logging.getLogger(__name__)

THEOREM_CHOICES = tuple(bound_service.THEOREMS)
MECH_CHOICES = ('tournament', 'mu_lambda', 'exp_ranking')


def config_options(f):
    """Experiment flags shared by run, verify and sweep; all values use the operator grammar."""
    options = [
        click.option('--problem', help="e.g. onemax:n=100, leadingones:n=50, inv:n=8"),
        click.option('--lambda', 'lam', help="population size"),
        click.option('--selection', help="tournament:k=24, mu_lambda:mu=10 or exp_ranking:eta=21.7"),
        click.option('--crossover', help="one_point:pc=1.0 or uniform:pc=0.5"),
        click.option('--mutation', help="bitwise:chi=1.0 or exchange"),
        click.option('--seed', help="root seed, an unsigned 64-bit integer"),
        click.option('--max-evals', help="evaluation budget per run"),
        click.option('--replicates', help="number of independent runs"),
        click.option('--config', 'config_file', type=click.Path(dir_okay=False),
                     help="experiment file with KEY=value lines; flags override it"),
        click.option('--theorem', type=click.Choice(THEOREM_CHOICES),
                     help="build the configuration from a benchmark theorem instead"),
        click.option('--n', 'theorem_n', type=int, help="problem size for --theorem"),
        click.option('--mech', type=click.Choice(MECH_CHOICES), default='tournament', show_default=True,
                     help="selection mechanism for --theorem"),
        click.option('--chi', type=float, default=1.0, show_default=True, help="mutation constant for --theorem"),
        click.option('--pc', type=float, default=0.0, show_default=True,
                     help="crossover probability for the sorting theorem"),
        click.option('--delta', type=float, default=1.0, show_default=True, help="progress constant delta"),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def output_options(f):
    f = click.option('--format', 'fmt', type=click.Choice(('csv', 'json')), default=None,
                     help="output format (default from GA_OUTPUT_FORMAT)")(f)
    f = click.option('--output', default='-', show_default=True, help="destination path, '-' for stdout")(f)
    return f


def build_config(problem, lam, selection, crossover, mutation, seed, max_evals, replicates, config_file,
                 theorem, theorem_n, mech, chi, pc, delta):
    """(config, bound report or None, delta the bound is evaluated at)."""
    if theorem is None:
        options = {'problem': problem, 'lambda': lam, 'selection': selection, 'crossover': crossover,
                   'mutation': mutation, 'seed': seed, 'max_evals': max_evals, 'replicates': replicates}
        return ConfigController.parse_config(options, config_file, delta=delta), None, delta
    if theorem_n is None:
        raise ConfigError("--theorem needs --n", key='n')
    crossover_kind = ConfigController.parse_crossover(crossover).kind if crossover else 'uniform'
    config, report = bound_service.theorem_config(
        theorem, theorem_n, delta, mech, chi=chi, pc=pc,
        lam=ConfigController.parse_number(lam, 'lambda', integer=True) if lam else None,
        crossover_kind=crossover_kind,
        seed=ConfigController.parse_number(seed, 'seed', integer=True) if seed else 0,
        replicates=ConfigController.parse_number(replicates, 'replicates', integer=True) if replicates else 1,
        max_evals=ConfigController.parse_number(max_evals, 'max_evals', integer=True) if max_evals else None,
    )
    return config, report, report.delta


def _emit(payload, fmt, output):
    ResultsController.emit_results(payload, fmt or Config.GA_OUTPUT_FORMAT, output)


def _float_list(text, key):
    return [ConfigController.parse_number(item, key) for item in text.split(',') if item.strip()]


def _genotype(text, key):
    text = text.strip()
    if ',' in text:
        return np.array([ConfigController.parse_number(item, key, integer=True) for item in text.split(',')])
    if not text or set(text) - {'0', '1'}:
        raise ConfigError(f"expected a bitstring such as 0110, got '{text}'", key=key)
    return np.array([int(bit) for bit in text], dtype=np.int8)


def verbose_option(f):
    @click.option('--verbose', is_flag=True, help="log at DEBUG level")
    @wraps(f)
    def decorated_function(*args, verbose=False, **kwargs):
        if verbose:
            logging.getLogger().setLevel(logging.DEBUG)
        return f(*args, **kwargs)

    return decorated_function


@click.group()
@click.option('--log-level', default=None, help="override LOG_LEVEL for this invocation")
@cli_errors
def cli(log_level):
    """Non-elitist genetic algorithm experiments and level-based runtime bounds."""
    Config.init_app()
    if log_level:
        logging.getLogger().setLevel(log_level.upper())


@cli.command()
@config_options
@output_options
@click.option('--workers', type=int, default=None, help="parallel worker processes (default GA_WORKERS)")
@click.option('--report', is_flag=True, help="emit the bound-vs-empirical record instead of per-run rows")
@verbose_option
@cli_errors
def run(output, fmt, workers, report, **options):
    """Run replicated experiments."""
    config, bound_report, delta = build_config(**options)
    stats = ExperimentController.run_replicates(config, workers=workers)
    if report:
        if bound_report is None:
            bound_report = bound_service.config_bound(config, delta)
        record = ExperimentController.bound_vs_empirical_report(config, delta, stats, bound_report=bound_report)
        _emit(record, fmt, output)
    else:
        _emit(stats, fmt, output)


@cli.command()
@config_options
@output_options
@click.option('--levels', help="comma-separated z_j (or s_j with --p0) for an explicit bound")
@click.option('--m', 'levels_m', type=int, help="number of levels for --levels (defaults to their count)")
@click.option('--p0', type=float, help="mutation no-change probability; selects the GA bound")
@click.option('--eps1', type=float, default=1.0, show_default=True, help="crossover constant for --p0")
@click.option('--gamma0', type=float, help="gamma0 for an explicit bound")
@verbose_option
@cli_errors
def bound(output, fmt, levels, levels_m, p0, eps1, gamma0, **options):
    """Evaluate a runtime bound and its population-size threshold."""
    if levels:
        lam = ConfigController.parse_number(options['lam'] or 1, 'lambda', integer=True)
        if gamma0 is None:
            raise ConfigError("--levels needs --gamma0", key='gamma0')
        values = _float_list(levels, 'levels')
        m = levels_m or len(values)
        delta = options['delta']
        if p0 is None:
            result = bound_service.theorem1_bound(m, lam, LevelProbabilities(values=values), delta, gamma0)
        else:
            probabilities = LevelProbabilities(values=values, p0=p0, eps1=eps1)
            result = bound_service.corollary1_bound(m, lam, probabilities, delta, gamma0)
        _emit(result, fmt, output)
        return
    config, result, delta = build_config(**options)
    if result is None:
        result = bound_service.config_bound(config, delta)
        if result is None:
            raise ConfigError("no bound exists for this configuration (eps1 = 0 or gamma0 >= 1)", key='config')
    record = result.to_dict()
    record.update(config.to_dict())
    _emit(record, fmt, output)


@cli.group()
def estimate():
    """Monte Carlo and exact estimators for selection, mutation and crossover."""


@estimate.command('beta')
@click.option('--selection', required=True)
@click.option('--lambda', 'lam', required=True, type=int)
@click.option('--gamma', required=True, type=float)
@click.option('--fitness', help="comma-separated fitness values; distinct values by default")
@click.option('--trials', type=int, default=None, help="default GA_ESTIMATE_TRIALS")
@click.option('--seed', type=int, default=0, show_default=True)
@output_options
@verbose_option
@cli_errors
def estimate_beta(selection, lam, gamma, fitness, trials, seed, output, fmt):
    """Selective pressure beta(gamma) of a mechanism."""
    mech = ConfigController.parse_selection(selection)
    values = np.array(_float_list(fitness, 'fitness')) if fitness else np.arange(lam, 0, -1, dtype=float)
    if values.shape[0] != lam:
        raise ConfigError(f"expected {lam} fitness values, got {values.shape[0]}", key='fitness')
    population = Population(members=np.zeros((lam, 1), dtype=np.int8), fitness=values)
    rng = SeedStream(seed).generation(0)
    result = estimator_service.estimate_beta(mech, population, gamma, trials or Config.GA_ESTIMATE_TRIALS, rng)
    try:
        exact_small = estimator_service.exact_beta_small(mech, values, gamma)
    except ConfigError as e:
        logger.info(f"skipping exhaustive beta: {e}")
        exact_small = None
    _emit({
        'selection': mech.to_string(),
        'lambda': lam,
        'gamma': gamma,
        'estimate': result.value,
        'ci_halfwidth': result.ci_halfwidth,
        'trials': result.trials,
        'exact_enumerated': exact_small,
        'exact_distinct': estimator_service.exact_beta(mech, lam, gamma),
        'continuous': beta_closed_form(mech, gamma, lam),
        'lemma_lower_bound': beta_lower_bound(mech, gamma, lam),
    }, fmt, output)


@estimate.command('sj')
@click.option('--problem', required=True)
@click.option('--mutation', required=True)
@click.option('--level', 'j', required=True, type=int, help="level j; measures reaching level j + 1")
@click.option('--pc', type=float, default=1.0, show_default=True)
@click.option('--trials', type=int, default=None, help="default GA_CONSTANT_TRIALS")
@click.option('--seed', type=int, default=0, show_default=True)
@output_options
@verbose_option
@cli_errors
def estimate_sj(problem, mutation, j, pc, trials, seed, output, fmt):
    """Mutation upgrade probability from the level-j representative against s_j."""
    spec = ConfigController.parse_problem(problem)
    mutation_spec = ConfigController.parse_mutation(mutation)
    s_j, p0, eps1 = bound_service.benchmark_sj(spec, mutation_spec.chi, j, pc)
    x = ProblemService.representative(spec, j)
    rng = SeedStream(seed).generation(0)
    result = estimator_service.estimate_mutation_probability(spec, mutation_spec, x, j,
                                                             trials or Config.GA_CONSTANT_TRIALS, rng)
    exact, method = estimator_service.exact_mutation_probability(spec, mutation_spec, x, j)
    _emit({
        'problem': f"{spec.kind}:n={spec.n}",
        'mutation': mutation_spec.to_string(),
        'level': j,
        'estimate': result.value,
        'ci_halfwidth': result.ci_halfwidth,
        'trials': result.trials,
        'exact': exact,
        'exact_method': method,
        's_j': s_j,
        'p0': p0,
        'eps1': eps1,
    }, fmt, output)


@estimate.command('lemma2')
@click.option('--u', 'u_text', required=True, help="bitstring such as 110")
@click.option('--v', 'v_text', required=True)
@click.option('--case', type=click.Choice(estimator_service.LEMMA_CASES), required=True)
@click.option('--kind', type=click.Choice(('one_point', 'uniform')), default='uniform', show_default=True)
@click.option('--trials', type=int, default=None)
@click.option('--seed', type=int, default=0, show_default=True)
@output_options
@verbose_option
@cli_errors
def estimate_lemma2(u_text, v_text, case, kind, trials, seed, output, fmt):
    """Crossover guarantees for LeadingOnes and OneMax parents."""
    rng = SeedStream(seed).generation(0)
    record = estimator_service.check_crossover_lemma(_genotype(u_text, 'u'), _genotype(v_text, 'v'), case,
                                                     trials or Config.GA_ESTIMATE_TRIALS, rng, kind=kind)
    _emit(record.to_dict(), fmt, output)


@cli.command()
@config_options
@output_options
@click.option('--population-levels', help="comma-separated levels for the population-level Monte Carlo checks")
@click.option('--trials', type=int, default=None)
@verbose_option
@cli_errors
def verify(output, fmt, population_levels, trials, **options):
    """Check the conditions behind the GA runtime bound."""
    config, _, delta = build_config(**options)
    levels = [ConfigController.parse_number(item, 'population_levels', integer=True)
              for item in population_levels.split(',')] if population_levels else None
    rng = SeedStream(config.seed).generation(0)
    report = estimator_service.condition_report(config, delta, trials=trials, rng=rng, population_levels=levels)
    record = report.to_dict()
    record['delta'] = delta
    record.update(config.to_dict())
    _emit(record, fmt, output)


@cli.command()
@config_options
@output_options
@click.option('--vary', multiple=True, required=True, help="key=v1,v2,... (repeatable)")
@click.option('--workers', type=int, default=None)
@verbose_option
@cli_errors
def sweep(output, fmt, vary, workers, **options):
    """Replicated runs over the cartesian product of parameter lists, one row per cell."""
    config, _, _ = build_config(**options)
    grid = [ExperimentController.parse_vary(text) for text in vary]
    _emit(ExperimentController.sweep(config, grid, workers=workers), fmt, output)


@cli.command()
@click.option('--host', default=None, help="default API_HOST")
@click.option('--port', type=int, default=None, help="default API_PORT")
@cli_errors
def serve(host, port):
    """Serve the JSON API."""
    from src import create_app

    app = create_app()
    app.run(host=host or Config.API_HOST, port=port or Config.API_PORT, debug=Config.DEBUG)
