# src/services/estimator_service.py
"""
Empirical and exhaustive checks of the conditions behind the level-based bounds.

Level indices follow the canonical partition (level = fitness + 1). For j in [m] the
upper set A_j^+ holds every genotype at level j + 1 or higher, so "reaching A_j^+"
means fitness >= j.
"""

import logging
import math

import numpy as np
from scipy import stats

from config import Config
from ..models.errors import ConfigError
from ..models.estimate_model import ConditionRecord, ConditionReport, Estimate
from ..models.population_model import Population, validate_genotype
from ..models.problem_model import ProblemSpec, Representation
from .bound_service import config_bound, config_constants, config_gamma0
from .operator_service import (bitwise_outcomes, crossover_outcomes, exchange_outcomes, gated_outcomes,
                               mutate_batch, offspring_batch, one_offspring_batch, rank_probabilities,
                               select_indices)
from .problem_service import ProblemService, leadingones, onemax

logger = logging.getLogger(__name__)

# exchanges kept by the mutation dynamic program above the permutation oracle size
LARGE_PERM_EXCHANGES = 1
SMALL_PERM_EXCHANGES = 10


def _chunks(trials):
    block = Config.GA_BLOCK_SIZE
    for start in range(0, trials, block):
        yield min(block, trials - start)


def _check_trials(trials):
    if int(trials) != trials or trials < 1:
        raise ConfigError(f"trials must be a positive integer, got {trials}", key='trials')
    return int(trials)


def threshold_rank(gamma, lam):
    """The 1-based rank ceil(gamma * lambda), guarded against float noise in the product."""
    if not 0.0 < gamma <= 1.0:
        raise ConfigError(f"gamma must lie in (0, 1], got {gamma}", key='gamma')
    return min(lam, max(1, math.ceil(gamma * lam - 1e-9)))


def _threshold_fitness(fitness, gamma):
    ordered = np.sort(np.asarray(fitness))[::-1]
    return ordered[threshold_rank(gamma, ordered.shape[0]) - 1]


# ---------------------------------------------------------------------------
# selective pressure
# ---------------------------------------------------------------------------

def estimate_beta(mech, population, gamma, trials, rng):
    """Frequency of selecting a member at least as good as the ceil(gamma * lambda)-ranked one."""
    trials = _check_trials(trials)
    threshold = _threshold_fitness(population.fitness, gamma)
    hits = 0
    for rows in _chunks(trials):
        picks = select_indices(mech, population, rows, rng)
        hits += int((population.fitness[picks] >= threshold).sum())
    return Estimate.from_counts(hits, trials)


def exact_beta_small(mech, fitness, gamma):
    """
    Exact beta(gamma, P) for lambda <= 8 by enumerating the mechanism's outcome space.

    Tournament enumerates every ordered k-draw; the winner's fitness is the best drawn
    fitness whatever the tie rule.
    """
    fitness = np.asarray(fitness)
    lam = fitness.shape[0]
    if not 1 <= lam <= 8:
        raise ConfigError(f"exhaustive selection needs 1 <= lambda <= 8, got {lam}", key='lambda')
    mech.check_population_size(lam)
    threshold = _threshold_fitness(fitness, gamma)
    if mech.kind == 'tournament':
        draws = lam ** mech.k
        if draws > Config.GA_SELECTION_ORACLE_MAX_DRAWS:
            raise ConfigError(f"{lam}^{mech.k} tournament draws exceed the oracle limit "
                              f"{Config.GA_SELECTION_ORACLE_MAX_DRAWS}", key='selection.k')
        hits = 0
        for start in range(0, draws, Config.GA_BLOCK_SIZE):
            codes = np.arange(start, min(draws, start + Config.GA_BLOCK_SIZE), dtype=np.int64)
            best = np.full(codes.shape, fitness.min())
            for _ in range(mech.k):
                best = np.maximum(best, fitness[codes % lam])
                codes //= lam
            hits += int((best >= threshold).sum())
        return hits / draws
    # every other mechanism assigns fixed mass to ranks; sum the ranks that meet the threshold
    ordered = np.sort(fitness)[::-1]
    return float(rank_probabilities(mech, lam)[ordered >= threshold].sum())


def exact_beta(mech, lam, gamma):
    """Exact discrete beta(gamma) for distinct fitness values, the least favourable case."""
    mech.check_population_size(lam)
    rank = threshold_rank(gamma, lam)
    if mech.kind == 'tournament':
        return 1.0 - (1.0 - rank / lam) ** mech.k
    if mech.kind == 'mu_lambda':
        return min(1.0, rank / mech.mu)
    return -math.expm1(-mech.eta * rank / lam) / -math.expm1(-mech.eta)


# ---------------------------------------------------------------------------
# exact mutation and crossover engines
# ---------------------------------------------------------------------------

def _outcome_mass(problem, outcomes, min_fitness):
    if not outcomes:
        return 0.0
    genotypes = np.array(list(outcomes.keys()))
    weights = np.array(list(outcomes.values()))
    fitness = ProblemService.evaluate_batch(problem, genotypes)
    return math.fsum(weights[fitness >= min_fitness])


def _bitwise_closed_form(problem, x, rate, min_fitness):
    n = problem.n
    if min_fitness <= 0:
        return 1.0
    if problem.kind == 'leadingones':
        if min_fitness > n:
            return 0.0
        prefix = x[:min_fitness]
        ones = int(prefix.sum())
        return (1.0 - rate) ** ones * rate ** (min_fitness - ones)
    ones = int(x.sum())
    lost = np.arange(ones + 1)
    # offspring ones = ones - lost + gained with independent binomial counts
    gained_needed = min_fitness - ones + lost
    tail = stats.binom.sf(gained_needed - 1, n - ones, rate)
    return math.fsum(stats.binom.pmf(lost, ones, rate) * tail)


def exact_mutation_probability(problem, mutation, x, min_fitness):
    """
    Probability that mutating x yields fitness >= min_fitness, with the method used.

    Exchange mutation beyond the permutation oracle size keeps only the first Poisson
    terms, so the value is a lower bound there.
    """
    x = validate_genotype(problem, x)
    mutation.check_length(problem.n)
    if problem.representation is Representation.BITS:
        if problem.n <= Config.GA_BITS_ORACLE_MAX_N:
            return _outcome_mass(problem, bitwise_outcomes(x, mutation.chi), min_fitness), 'enumeration'
        return _bitwise_closed_form(problem, x, mutation.rate(problem.n), min_fitness), 'closed_form'
    if problem.n <= Config.GA_PERM_ORACLE_MAX_N:
        outcomes, method = exchange_outcomes(x, SMALL_PERM_EXCHANGES), 'dynamic_program'
    else:
        outcomes, method = exchange_outcomes(x, LARGE_PERM_EXCHANGES), 'truncated_lower_bound'
    return _outcome_mass(problem, outcomes, min_fitness), method


def bitwise_closed_form(problem, chi, x, min_fitness):
    """Closed-form counterpart of the enumeration engine for OneMax and LeadingOnes."""
    x = validate_genotype(problem, x)
    return _bitwise_closed_form(problem, x, chi / problem.n, min_fitness)


def exact_crossover_probability(problem, crossover, u, v, min_fitness):
    """Probability that the gated crossover of u and v has fitness >= min_fitness, with the method."""
    u = validate_genotype(problem, u)
    v = validate_genotype(problem, v)
    outcomes, complete = gated_outcomes(crossover, u, v, problem.representation,
                                        Config.GA_CROSSOVER_ORACLE_MAX_DIFF)
    return _outcome_mass(problem, outcomes, min_fitness), 'enumeration' if complete else 'gate_lower_bound'


def estimate_mutation_probability(problem, mutation, x, min_fitness, trials, rng):
    trials = _check_trials(trials)
    x = validate_genotype(problem, x)
    hits = 0
    for rows in _chunks(trials):
        children = mutate_batch(mutation, np.tile(x, (rows, 1)), rng)
        hits += int((ProblemService.evaluate_batch(problem, children) >= min_fitness).sum())
    return Estimate.from_counts(hits, trials)


# ---------------------------------------------------------------------------
# population-level upgrade probabilities
# ---------------------------------------------------------------------------

def _check_level(problem, j):
    m = problem.max_fitness
    if not 1 <= j <= m:
        raise ConfigError(f"level j must lie in [1, {m}], got {j}", key='level')


def conditioning_population(problem, lam, j, gamma0, gamma=None):
    """
    Deterministic population with ceil(gamma0 * lambda) members at level j or above.

    With gamma given, ceil(gamma * lambda) of those sit at level j + 1 and the others at
    level j; every remaining member sits at level 1.
    """
    _check_level(problem, j)
    above = threshold_rank(gamma0, lam)
    upper = threshold_rank(gamma, lam) if gamma is not None else 0
    if upper > above:
        raise ConfigError(f"gamma={gamma} must not exceed gamma0={gamma0}", key='gamma')
    rows = ([ProblemService.representative(problem, j + 1)] * upper
            + [ProblemService.representative(problem, j)] * (above - upper)
            + [ProblemService.representative(problem, 1)] * (lam - above))
    members = np.array(rows)
    return Population(members=members, fitness=ProblemService.evaluate_batch(problem, members))


def _offspring_frequency(config, population, min_fitness, trials, rng):
    hits = 0
    for rows in _chunks(trials):
        children = offspring_batch(config, population, rows, rng)
        hits += int((ProblemService.evaluate_batch(config.problem, children) >= min_fitness).sum())
    return Estimate.from_counts(hits, trials)


def estimate_upgrade_probabilities(config, partition, j, gamma, trials, rng, gamma0=None, delta=1.0):
    """
    Monte Carlo z_j and z_0(gamma) on the constructed conditioning populations.

    Returns (z_j, z0, mutation_only) where mutation_only holds the mutation-alone
    frequencies of leaving level j upwards ('up') and of staying above level j ('stay').
    """
    trials = _check_trials(trials)
    problem = config.problem
    if partition.m != problem.max_fitness:
        raise ConfigError(f"partition has {partition.m} levels, problem has {problem.max_fitness}", key='partition')
    _check_level(problem, j)
    if gamma0 is None:
        _, p0, eps1 = config_constants(config)
        if eps1 <= 0:
            raise ConfigError("gamma0 is undefined when the crossover constant eps1 is 0", key='gamma0')
        gamma0 = config_gamma0(config, eps1, p0, delta)
    if not 0.0 < gamma < gamma0:
        raise ConfigError(f"gamma must lie in (0, gamma0={gamma0:.4g}), got {gamma}", key='gamma')
    min_fitness = j

    z_j = _offspring_frequency(config, conditioning_population(problem, config.lam, j, gamma0),
                               min_fitness, trials, rng)
    z0 = _offspring_frequency(config, conditioning_population(problem, config.lam, j, gamma0, gamma),
                              min_fitness, trials, rng)
    mutation_only = {
        'up': estimate_mutation_probability(problem, config.mutation, ProblemService.representative(problem, j),
                                            min_fitness, trials, rng),
        'stay': estimate_mutation_probability(problem, config.mutation,
                                              ProblemService.representative(problem, j + 1),
                                              min_fitness, trials, rng),
    }
    return z_j, z0, mutation_only


# ---------------------------------------------------------------------------
# crossover lemma
# ---------------------------------------------------------------------------

LEMMA_CASES = ('i', 'ii', 'iii')


def check_crossover_lemma(u, v, case, trials, rng, kind='uniform'):
    """
    Verify one case of the crossover lemma for one-point or uniform crossover.

    Case i: equal leading-ones values j keep LO >= j with probability 1.
    Case ii: different leading-ones values exceed the smaller one with probability >= 1/2.
    Case iii: OneMax reaches the rounded-up parent mean with probability >= 1/2.
    Enumerates the crossover when it is small enough, otherwise samples it.
    """
    u = np.asarray(u, dtype=np.int8)
    v = np.asarray(v, dtype=np.int8)
    if case not in LEMMA_CASES:
        raise ConfigError(f"unknown case '{case}', expected one of {', '.join(LEMMA_CASES)}", key='case')
    problem = ProblemSpec(kind='leadingones' if case != 'iii' else 'onemax', n=u.shape[0])
    u = validate_genotype(problem, u)
    v = validate_genotype(problem, v)
    lo_u, lo_v = int(leadingones(u)), int(leadingones(v))
    if case == 'i':
        if lo_u != lo_v:
            raise ConfigError(f"case i needs equal leading ones, got {lo_u} and {lo_v}", key='case')
        min_fitness, required = lo_u, 1.0
    elif case == 'ii':
        if lo_u == lo_v:
            raise ConfigError(f"case ii needs different leading ones, got {lo_u} twice", key='case')
        min_fitness, required = min(lo_u, lo_v) + 1, 0.5
    else:
        min_fitness, required = math.ceil((int(onemax(u)) + int(onemax(v))) / 2), 0.5

    outcomes = None
    if problem.n <= 10:
        outcomes = crossover_outcomes(kind, u, v, Representation.BITS, Config.GA_CROSSOVER_ORACLE_MAX_DIFF)
    if outcomes is not None:
        estimated = Estimate.exact_value(_outcome_mass(problem, outcomes, min_fitness), len(outcomes))
        method = 'enumeration'
    else:
        trials = _check_trials(trials)
        hits = 0
        for rows in _chunks(trials):
            children = one_offspring_batch(kind, np.tile(u, (rows, 1)), np.tile(v, (rows, 1)), rng)
            hits += int((ProblemService.evaluate_batch(problem, children) >= min_fitness).sum())
        estimated = Estimate.from_counts(hits, trials)
        method = 'monte_carlo'
    return ConditionRecord.judge(f'lemma2_{case}', required, estimated, method=method)


# ---------------------------------------------------------------------------
# condition report
# ---------------------------------------------------------------------------

def _worst(name, candidates):
    """Record with the smallest margin over the levels checked."""
    return min((ConditionRecord.judge(name, required, estimate, level=level, method=method)
                for level, required, estimate, method in candidates), key=lambda record: record.margin)


def _failed(name, reason):
    return ConditionRecord(name=name, required=0.0, estimated=Estimate.exact_value(0.0), satisfied=False,
                           margin=0.0, method=reason)


def _gamma_grid(gamma0):
    points = Config.GA_BETA_GRID_POINTS
    return [gamma0 * i / (points + 1) for i in range(1, points + 1)]


def condition_report(config, delta, trials=None, rng=None, population_levels=None):
    """
    Check the mutation, crossover, selection and population-size conditions of the GA bound.

    Mutation and crossover conditions are computed exactly (or as certified lower bounds)
    on every level from the canonical representatives. Selection pressure is compared on
    a gamma grid below gamma0 using the exact beta for distinct fitness values. When
    `population_levels` is given, the population-level conditions are added from Monte
    Carlo runs on the conditioning populations at those levels.
    """
    problem = config.problem
    values, p0, eps1 = config_constants(config)
    m = len(values)
    records = []

    c1, c2, c3 = [], [], []
    for j in range(1, m + 1):
        at_j = ProblemService.representative(problem, j)
        above_j = ProblemService.representative(problem, j + 1)
        up_from_j, method = exact_mutation_probability(problem, config.mutation, at_j, j)
        up_from_above, _ = exact_mutation_probability(problem, config.mutation, above_j, j)
        c1.append((j, values[j - 1], Estimate.exact_value(min(up_from_j, up_from_above)), method))
        c2.append((j, p0, Estimate.exact_value(up_from_above), method))
        kept, xor_method = exact_crossover_probability(problem, config.crossover, at_j, above_j, j)
        c3.append((j, eps1, Estimate.exact_value(kept), xor_method))
    records.append(_worst('C1', c1))
    records.append(_worst('C2', c2))

    if eps1 <= 0:
        logger.warning(f"crossover constant eps1={eps1} is not positive; selection and size conditions undefined")
        records.append(_failed('C3', 'nonpositive_eps1'))
        records.append(_failed('C4', 'nonpositive_eps1'))
        records.append(_failed('C5', 'nonpositive_eps1'))
        return _finish(ConditionReport(records=records))
    records.append(_worst('C3', c3))

    gamma0 = config_gamma0(config, eps1, p0, delta)
    if not 0.0 < gamma0 < 1.0:
        records.append(_failed('C4', 'gamma0_out_of_range'))
        records.append(_failed('C5', 'gamma0_out_of_range'))
        return _finish(ConditionReport(records=records))
    slope = math.sqrt((1.0 + delta) / (p0 * eps1 * gamma0))
    c4 = [(None, gamma * slope, Estimate.exact_value(exact_beta(config.selection, config.lam, gamma)),
           'exact_beta') for gamma in _gamma_grid(gamma0)]
    records.append(_worst('C4', c4))

    bound = config_bound(config, delta)
    records.append(ConditionRecord.judge('C5', float(bound.lambda_min), Estimate.exact_value(config.lam)))

    if population_levels:
        trials = trials or Config.GA_ESTIMATE_TRIALS
        rng = rng if rng is not None else np.random.default_rng(config.seed)
        partition = ProblemService.canonical_partition(problem)
        gamma = gamma0 / 2.0
        g1, g2 = [], []
        for j in population_levels:
            z_j, z0, _ = estimate_upgrade_probabilities(config, partition, j, gamma, trials, rng, gamma0=gamma0)
            g1.append((j, gamma0 * (1.0 + delta) * values[j - 1] / p0, z_j, 'monte_carlo'))
            g2.append((j, (1.0 + delta) * gamma, z0, 'monte_carlo'))
        records.append(_worst('G1', g1))
        records.append(_worst('G2', g2))

    return _finish(ConditionReport(records=records))


def _finish(report):
    for record in report.records:
        if not record.satisfied:
            logger.warning(f"condition {record.name} fails at level {record.level}: "
                           f"{record.estimated.value:.6g} < {record.required:.6g}")
    return report
