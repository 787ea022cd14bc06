# src/services/bound_service.py
"""
Closed-form runtime bounds for level-based analyses of non-elitist populations.

All bounds count fitness evaluations. The general bound needs per-level upgrade
probabilities z_j; the GA-specific bound derives them from mutation (s_j, p0),
crossover (eps1) and selection (gamma0) constants.
"""

import logging
import math

from ..models.bound_model import BoundReport, LevelProbabilities
from ..models.errors import ConfigError
from ..models.ga_config_model import GAConfig
from ..models.operator_model import CrossoverSpec, MutationSpec, SelectionMechanism
from ..models.problem_model import ProblemSpec

logger = logging.getLogger(__name__)

THEOREMS = {
    '3_onemax': 'onemax',
    '3_leadingones': 'leadingones',
    '4_inv': 'inv_sorting',
}


def theorem_constants(delta, gamma0):
    """The constants a, epsilon (psi) and c shared by both bounds."""
    if not delta > 0:
        raise ConfigError(f"delta must be positive, got {delta}", key='delta')
    if not 0.0 < gamma0 < 1.0:
        raise ConfigError(f"gamma0 must lie in (0, 1), got {gamma0}", key='gamma0')
    a = delta ** 2 * gamma0 / (2.0 * (1.0 + delta))
    eps = min(delta / 2.0, 0.5)
    c = eps ** 4 / 24.0
    return a, eps, c


def _lambda_min(a, log_argument):
    return max(1, math.ceil((2.0 / a) * math.log(log_argument)))


def _population_term(m, lam, c):
    return m * lam * (1.0 + math.log1p(c * lam))


def theorem1_bound(m, lam, z, delta, gamma0):
    """Expected-runtime bound from per-level probabilities z_j of the full sampling distribution."""
    if z.m != m:
        raise ConfigError(f"expected {m} level probabilities, got {z.m}", key='levels')
    a, eps, c = theorem_constants(delta, gamma0)
    lambda_min = _lambda_min(a, 16.0 * m / (a * c * eps * z.floor))
    bound = (2.0 / (c * eps)) * (_population_term(m, lam, c) + z.reciprocal_sum())
    return BoundReport(delta=delta, gamma0=gamma0, a=a, eps_or_psi=eps, c=c, lambda_min=lambda_min,
                       lam=lam, bound=bound, lambda_ok=lam >= lambda_min, kind='theorem1')


def corollary1_bound(m, lam, s, delta, gamma0):
    """Expected-runtime bound for the GA from mutation, crossover and selection constants."""
    if s.m != m:
        raise ConfigError(f"expected {m} level probabilities, got {s.m}", key='levels')
    a, psi, c = theorem_constants(delta, gamma0)
    p0 = s.p0
    lambda_min = _lambda_min(a, 32.0 * m * p0 / ((delta * gamma0) ** 2 * c * s.floor * psi))
    level_term = (p0 / ((1.0 + delta) * gamma0)) * s.reciprocal_sum()
    bound = (2.0 / (c * psi)) * (_population_term(m, lam, c) + level_term)
    implied_z = [gamma0 * (1.0 + delta) * value / p0 for value in s.values]
    return BoundReport(delta=delta, gamma0=gamma0, a=a, eps_or_psi=psi, c=c, lambda_min=lambda_min,
                       lam=lam, bound=bound, lambda_ok=lam >= lambda_min, kind='corollary1',
                       implied_z=implied_z)


def lemma1_selection_threshold(kind, eps1, p0, delta):
    """
    Smallest selection parameter satisfying the selective-pressure condition, with its gamma0.

    For (mu,lambda) the threshold applies to the ratio lambda/mu and gamma0 = mu/lambda is
    reported as the reciprocal of that ratio.
    """
    if not 0.0 < eps1 <= 1.0 or not 0.0 < p0 <= 1.0:
        raise ConfigError(f"eps1 and p0 must lie in (0, 1], got {eps1} and {p0}", key='eps1')
    if not delta > 0:
        raise ConfigError(f"delta must be positive, got {delta}", key='delta')
    if kind == 'mu_lambda':
        threshold = (1.0 + delta) / (eps1 * p0)
        return threshold, 1.0 / threshold
    if kind not in ('tournament', 'exp_ranking'):
        raise ConfigError(f"unknown selection '{kind}'", key='selection')
    threshold = 4.0 * (1.0 + delta) / (eps1 * p0)
    return threshold, eps1 * p0 / (4.0 * (1.0 + delta))


def benchmark_parameters(problem, chi=None, pc=1.0):
    """(s_1..s_m, p0, eps1) for a benchmark; eps1 may be 0 for a gate that never returns a parent."""
    if problem.kind == 'inv_sorting':
        m = problem.max_fitness
        if m < 1:
            raise ConfigError("sorting needs at least two elements", key='problem.n')
        p0 = math.exp(-1.0)
        # normalized level j holds the permutations with m - j + 1 incorrectly ordered pairs
        values = [(m - j + 1) * p0 / (math.e * m) for j in range(1, m + 1)]
        return values, p0, (1.0 - pc) / 2.0
    if chi is None or not chi > 0:
        raise ConfigError(f"bitwise mutation needs chi > 0, got {chi}", key='mutation.chi')
    n = problem.n
    rate = chi / n
    if rate > 1:
        raise ConfigError(f"mutation rate chi/n = {chi}/{n} exceeds 1", key='mutation.chi')
    p0 = (1.0 - rate) ** n
    single = rate * (1.0 - rate) ** (n - 1)
    if problem.kind == 'leadingones':
        values = [single] * n
    else:
        values = [(n - j + 1) * single * p0 for j in range(1, n + 1)]
    return values, p0, 0.5


def benchmark_sj(problem, chi, j, pc=1.0):
    """
    (s_j, p0, eps1) at level j of the canonical partition, levels numbered 1..m.

    For sorting, j is this normalized level (fitness j - 1, so m - j + 1 ordered pairs are
    still wrong), not the inversion count. The top level m therefore gets p0 / (e m)
    rather than the (m - j) p0 / (e m) = 0 that inversion numbering would give.
    """
    values, p0, eps1 = benchmark_parameters(problem, chi, pc)
    if not 1 <= j <= len(values):
        raise ConfigError(f"level j must lie in [1, {len(values)}], got {j}", key='level')
    return values[j - 1], p0, eps1


def benchmark_levels(problem, chi=None, pc=1.0):
    values, p0, eps1 = benchmark_parameters(problem, chi, pc)
    return LevelProbabilities(values=values, p0=p0, eps1=eps1)


def config_constants(config):
    """(s values, p0, eps1) implied by a GA configuration's problem and operators."""
    return benchmark_parameters(config.problem, config.mutation.chi, config.crossover.pc)


def config_gamma0(config, eps1, p0, delta):
    if config.selection.kind == 'mu_lambda':
        return config.selection.mu / config.lam
    return lemma1_selection_threshold(config.selection.kind, eps1, p0, delta)[1]


def config_bound(config, delta):
    """Corollary bound for an arbitrary configuration on a benchmark, or None when eps1 is 0."""
    values, p0, eps1 = config_constants(config)
    if eps1 <= 0:
        return None
    levels = LevelProbabilities(values=values, p0=p0, eps1=eps1)
    gamma0 = config_gamma0(config, eps1, p0, delta)
    if not gamma0 < 1.0:
        return None
    return corollary1_bound(levels.m, config.lam, levels, delta, gamma0)


def finite_n_admissible(n, chi, delta):
    """The n >= chi / (1 - ((1+delta')/(1+delta))^(1/chi)) check with delta' = delta/2."""
    delta_prime = delta / 2.0
    required = chi / (1.0 - ((1.0 + delta_prime) / (1.0 + delta)) ** (1.0 / chi))
    return n >= required, required


def _selection_factor(theorem, delta, chi, pc):
    """Multiplier shared by the theorem's selection thresholds: tournament/ranking use 8x, (mu,lambda) 2x."""
    if theorem == '4_inv':
        return math.e * (1.0 + delta) / (1.0 - pc)
    return (1.0 + delta) * math.exp(chi)


def theorem_config(theorem, n, delta, mech_kind, chi=1.0, pc=0.0, lam=None, crossover_kind='uniform',
                   seed=0, replicates=1, max_evals=None):
    """
    A ready-to-run configuration meeting a benchmark theorem's selection inequality, with its bound.

    The theorems bound 1/p0 by e^chi (or use p0 = 1/e exactly); at finite n the selection parameter
    then certifies the selective-pressure condition only for some delta' <= delta. The bound is
    evaluated at that effective delta.
    """
    if theorem not in THEOREMS:
        raise ConfigError(f"unknown theorem '{theorem}', expected one of {', '.join(THEOREMS)}", key='theorem')
    if not delta > 0:
        raise ConfigError(f"delta must be positive, got {delta}", key='delta')
    problem = ProblemSpec(kind=THEOREMS[theorem], n=n)
    warnings = []
    if theorem == '4_inv':
        if not 0.0 <= pc < 1.0:
            raise ConfigError(f"the sorting theorem needs a crossover probability in [0, 1), got {pc}",
                              key='crossover.pc')
        mutation = MutationSpec(kind='exchange')
        crossover = CrossoverSpec(kind=crossover_kind, pc=pc)
    else:
        if not chi > 0:
            raise ConfigError(f"chi must be positive, got {chi}", key='mutation.chi')
        mutation = MutationSpec(kind='bitwise', chi=chi)
        crossover = CrossoverSpec(kind=crossover_kind, pc=1.0)
        admissible, required_n = finite_n_admissible(n, chi, delta)
        if not admissible:
            warnings.append(f"n={n} is below the finite-n admissibility threshold {required_n:.1f}")

    levels = benchmark_levels(problem, mutation.chi, crossover.pc)
    m, p0, eps1 = levels.m, levels.p0, levels.eps1
    factor = _selection_factor(theorem, delta, chi, pc)

    if mech_kind == 'mu_lambda':
        ratio = 2.0 * factor
        lam = max(int(lam or 1), math.ceil(ratio))
        for _ in range(64):
            mu = max(1, math.floor(lam / ratio))
            delta_eff = min(delta, (lam / mu) * eps1 * p0 - 1.0)
            if delta_eff <= 0:
                break
            report = corollary1_bound(m, lam, levels, delta_eff, mu / lam)
            if report.lambda_ok:
                break
            lam = report.lambda_min
        else:
            raise ConfigError(f"lambda did not settle for {theorem} at n={n}", key='lambda')
        selection = SelectionMechanism(kind='mu_lambda', mu=mu)
    else:
        if mech_kind == 'tournament':
            parameter = math.ceil(8.0 * factor)
            selection = SelectionMechanism(kind='tournament', k=parameter)
        elif mech_kind == 'exp_ranking':
            parameter = 8.0 * factor
            selection = SelectionMechanism(kind='exp_ranking', eta=parameter)
        else:
            raise ConfigError(f"unknown selection '{mech_kind}'", key='selection')
        delta_eff = min(delta, parameter * eps1 * p0 / 4.0 - 1.0)
        if delta_eff > 0:
            gamma0 = lemma1_selection_threshold(mech_kind, eps1, p0, delta_eff)[1]
            report = corollary1_bound(m, 1, levels, delta_eff, gamma0)
            lam = max(int(lam or 1), report.lambda_min)
            report = corollary1_bound(m, lam, levels, delta_eff, gamma0)

    if delta_eff <= 0:
        raise ConfigError(f"n={n} is too small: the selection parameter certifies no positive delta", key='problem.n')
    if delta_eff < delta:
        message = f"selective pressure certified only for delta'={delta_eff:.4g} < delta={delta}"
        logger.warning(message)
        warnings.append(message)

    report.warnings = warnings
    if max_evals is None:
        max_evals = max(lam, math.ceil(10.0 * report.bound))
    config = GAConfig(problem=problem, lam=lam, selection=selection, crossover=crossover, mutation=mutation,
                      seed=seed, max_evals=max_evals, replicates=replicates)
    logger.info(f"theorem {theorem}: {selection.to_string()}, lambda={lam}, bound={report.bound:.4g}")
    return config, report
