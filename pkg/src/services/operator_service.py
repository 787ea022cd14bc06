# src/services/operator_service.py
"""
Selection, crossover and mutation operators.

Every operator has a batch form working on 2-d arrays (one row per offspring) which the
search engine uses, and a single-genotype form mirroring the textbook definition. All of
them draw their randomness from an explicit numpy Generator.
"""

import itertools
import logging
import math
from collections import defaultdict

import numpy as np

from ..models.errors import ConfigError
from ..models.problem_model import Representation

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# selection
# ---------------------------------------------------------------------------

def _ranking_cdf(eta, g):
    """Probability mass of exponential ranking on the rank interval [0, g]."""
    return -np.expm1(-eta * np.asarray(g, dtype=float)) / -math.expm1(-eta)


def rank_probabilities(mech, lam):
    """Exact probability that one selection act returns the member at each rank (0 = best)."""
    mech.check_population_size(lam)
    r = np.arange(lam, dtype=float)
    if mech.kind == 'tournament':
        return ((lam - r) / lam) ** mech.k - ((lam - r - 1) / lam) ** mech.k
    if mech.kind == 'mu_lambda':
        return np.where(r < mech.mu, 1.0 / mech.mu, 0.0)
    return _ranking_cdf(mech.eta, (r + 1) / lam) - _ranking_cdf(mech.eta, r / lam)


def select_ranks(mech, lam, size, rng):
    """Sample 0-based ranks for `size` independent selection acts."""
    mech.check_population_size(lam)
    if mech.kind == 'tournament':
        # best of k uniform ranks, drawn through the exact order-statistic inverse
        u = 1.0 - rng.random(size)
        ranks = np.floor(lam * -np.expm1(np.log(u) / mech.k)).astype(np.int64)
        return np.clip(ranks, 0, lam - 1)
    if mech.kind == 'mu_lambda':
        return rng.integers(0, mech.mu, size=size)
    u = rng.random(size)
    gamma = -np.log1p(-u * -math.expm1(-mech.eta)) / mech.eta
    return np.clip(np.ceil(gamma * lam).astype(np.int64), 1, lam) - 1


def select_indices(mech, population, size, rng, ranking=None):
    if ranking is None:
        ranking = population.ranking(rng)
    return ranking[select_ranks(mech, population.size, size, rng)]


def select_index(mech, population, rng):
    """Index of the parent returned by one selection act."""
    if population.size == 0:
        raise ConfigError("cannot select from an empty population", key='population')
    mech.check_population_size(population.size)
    ranking = population.ranking(rng)
    if mech.kind == 'tournament':
        rank_of = np.empty(population.size, dtype=np.int64)
        rank_of[ranking] = np.arange(population.size)
        draws = rng.integers(0, population.size, size=mech.k)
        return int(draws[np.argmin(rank_of[draws])])
    return int(ranking[select_ranks(mech, population.size, 1, rng)[0]])


def selection_distribution(mech, fitness):
    """Exact selection probability of every member; tied members share their ranks' mass."""
    fitness = np.asarray(fitness)
    lam = fitness.shape[0]
    per_rank = rank_probabilities(mech, lam)
    order = np.argsort(-fitness, kind='stable')
    probabilities = np.empty(lam)
    sorted_fitness = fitness[order]
    start = 0
    while start < lam:
        stop = start
        while stop < lam and sorted_fitness[stop] == sorted_fitness[start]:
            stop += 1
        probabilities[order[start:stop]] = per_rank[start:stop].mean()
        start = stop
    return probabilities


def beta_closed_form(mech, gamma, lam):
    """Continuous-rank selective pressure beta(gamma)."""
    if not 0.0 < gamma <= 1.0:
        raise ConfigError(f"gamma must lie in (0, 1], got {gamma}", key='gamma')
    if mech.kind == 'tournament':
        return 1.0 - (1.0 - gamma) ** mech.k
    if mech.kind == 'mu_lambda':
        return min(1.0, lam * gamma / mech.mu)
    return float(_ranking_cdf(mech.eta, gamma))


def beta_lower_bound(mech, gamma, lam):
    """Lower bounds on beta(gamma) used when proving the selection thresholds."""
    if not 0.0 < gamma <= 1.0:
        raise ConfigError(f"gamma must lie in (0, 1], got {gamma}", key='gamma')
    if mech.kind == 'tournament':
        return 1.0 - 1.0 / (gamma * mech.k + 1.0)
    if mech.kind == 'mu_lambda':
        return min(1.0, lam * gamma / mech.mu)
    return 1.0 - 1.0 / (1.0 + mech.eta * gamma)


# ---------------------------------------------------------------------------
# crossover
# ---------------------------------------------------------------------------

def _keep_masks(kind, rows, n, rng):
    """Positions copied from the first parent into the first offspring."""
    if kind == 'uniform':
        return rng.random((rows, n)) < 0.5
    if n < 2:
        return np.ones((rows, n), dtype=bool)
    cuts = rng.integers(1, n, size=rows)
    return np.arange(n) < cuts[:, None]


def _order_fill(U, V, keep):
    """Kept positions from U, remaining positions filled with V's other values in V's order."""
    rows, n = U.shape
    kept_value = np.zeros((rows, n), dtype=bool)
    np.put_along_axis(kept_value, U, keep, axis=1)
    free_positions = np.argsort(keep, axis=1, kind='stable')
    v_kept = np.take_along_axis(kept_value, V, axis=1)
    v_values = np.take_along_axis(V, np.argsort(v_kept, axis=1, kind='stable'), axis=1)
    free_count = n - keep.sum(axis=1)
    fill = np.arange(n) < free_count[:, None]
    child = U.copy()
    row_index = np.broadcast_to(np.arange(rows)[:, None], (rows, n))
    child[row_index[fill], free_positions[fill]] = v_values[fill]
    return child


def offspring_from_masks(U, V, keep, representation=Representation.BITS):
    """Both offspring of row-wise parent pairs for fixed keep masks (True = take the first parent)."""
    if U.shape != V.shape or keep.shape != U.shape:
        raise ConfigError(f"parents and masks differ in shape: {U.shape}, {V.shape}, {keep.shape}", key='crossover')
    if representation is Representation.BITS:
        return np.where(keep, U, V), np.where(keep, V, U)
    return _order_fill(U, V, keep), _order_fill(V, U, keep)


def two_offspring_batch(kind, U, V, rng, representation=Representation.BITS):
    if U.shape != V.shape:
        raise ConfigError(f"parents differ in shape: {U.shape} vs {V.shape}", key='crossover')
    keep = _keep_masks(kind, U.shape[0], U.shape[1], rng)
    return offspring_from_masks(U, V, keep, representation)


def one_offspring_batch(kind, U, V, rng, representation=Representation.BITS):
    first, second = two_offspring_batch(kind, U, V, rng, representation)
    pick_first = rng.random(U.shape[0]) < 0.5
    return np.where(pick_first[:, None], first, second)


def gated_batch(spec, U, V, rng, representation=Representation.BITS):
    rows = U.shape[0]
    gate = rng.random(rows) < spec.pc
    pick_u = rng.random(rows) < 0.5
    children = np.where(pick_u[:, None], U, V)
    crossed = np.flatnonzero(gate)
    if crossed.size:
        children[crossed] = one_offspring_batch(spec.kind, U[crossed], V[crossed], rng, representation)
    return children


def _pair(u, v):
    u, v = np.asarray(u), np.asarray(v)
    if u.ndim != 1 or u.shape != v.shape:
        raise ConfigError(f"parents must be equal-length vectors, got {u.shape} and {v.shape}", key='crossover')
    return u[None, :], v[None, :]


def crossover_two_offspring(kind, u, v, rng, representation=Representation.BITS):
    U, V = _pair(u, v)
    first, second = two_offspring_batch(kind, U, V, rng, representation)
    return first[0], second[0]


def one_offspring_crossover(kind, u, v, rng, representation=Representation.BITS):
    U, V = _pair(u, v)
    return one_offspring_batch(kind, U, V, rng, representation)[0]


def gated_crossover(u, v, spec, rng, representation=Representation.BITS):
    U, V = _pair(u, v)
    return gated_batch(spec, U, V, rng, representation)[0]


def _one_offspring_from_keep(u, v, keep, representation):
    first, second = offspring_from_masks(u[None, :], v[None, :], keep[None, :], representation)
    return first[0], second[0]


def crossover_outcomes(kind, u, v, representation=Representation.BITS, max_free=16):
    """
    Exact distribution of the one-offspring crossover as {genotype tuple: probability}.

    Returns None when the outcome space is too large to enumerate (more than 2^max_free
    uniform masks).
    """
    u, v = np.asarray(u), np.asarray(v)
    n = u.shape[0]
    outcomes = defaultdict(float)
    if kind == 'one_point':
        cuts = range(1, n) if n >= 2 else [n]
        weight = 0.5 / len(cuts)
        for cut in cuts:
            keep = np.arange(n) < cut
            for child in _one_offspring_from_keep(u, v, keep, representation):
                outcomes[tuple(child.tolist())] += weight
        return dict(outcomes)
    if representation is Representation.BITS:
        # only positions where the parents differ influence the offspring
        free = np.flatnonzero(u != v)
    else:
        free = np.arange(n)
    if free.size > max_free:
        return None
    weight = 0.5 / 2 ** free.size
    for bits in itertools.product((False, True), repeat=int(free.size)):
        keep = np.ones(n, dtype=bool)
        keep[free] = bits
        for child in _one_offspring_from_keep(u, v, keep, representation):
            outcomes[tuple(child.tolist())] += weight
    return dict(outcomes)


def gated_outcomes(spec, u, v, representation=Representation.BITS, max_free=16):
    """
    Exact distribution of the gated crossover, plus a completeness flag.

    When the crossover branch cannot be enumerated only the gate's parent-returning mass
    is listed and the flag is False, so sums over it are lower bounds.
    """
    outcomes = defaultdict(float)
    closed = 1.0 - spec.pc
    outcomes[tuple(np.asarray(u).tolist())] += closed / 2
    outcomes[tuple(np.asarray(v).tolist())] += closed / 2
    if spec.pc == 0.0:
        return dict(outcomes), True
    crossed = crossover_outcomes(spec.kind, u, v, representation, max_free)
    if crossed is None:
        logger.debug(f"crossover outcome space of {spec.kind} too large, keeping gate-only lower bound")
        return dict(outcomes), False
    for child, probability in crossed.items():
        outcomes[child] += spec.pc * probability
    return dict(outcomes), True


# ---------------------------------------------------------------------------
# mutation
# ---------------------------------------------------------------------------

def mutate_bitwise_batch(X, chi, rng):
    n = X.shape[1]
    rate = chi / n
    if not 0.0 < rate <= 1.0:
        raise ConfigError(f"mutation rate chi/n = {chi}/{n} must lie in (0, 1]", key='mutation.chi')
    flips = rng.random(X.shape) < rate
    return X ^ flips.astype(X.dtype)


def mutate_exchange_batch(X, rng):
    X = X.copy()
    rows, n = X.shape
    counts = rng.poisson(1.0, size=rows)
    if n < 2:
        # no pair of distinct indices exists
        counts[:] = 0
    for step in range(int(counts.max(initial=0))):
        active = np.flatnonzero(counts > step)
        i = rng.integers(0, n, size=active.size)
        j = rng.integers(0, n - 1, size=active.size)
        j += j >= i
        held = X[active, i].copy()
        X[active, i] = X[active, j]
        X[active, j] = held
    return X


def mutate_bitwise(x, chi, rng):
    return mutate_bitwise_batch(np.asarray(x)[None, :], chi, rng)[0]


def mutate_exchange(pi, rng):
    return mutate_exchange_batch(np.asarray(pi)[None, :], rng)[0]


def mutate_batch(spec, X, rng):
    if spec.kind == 'bitwise':
        return mutate_bitwise_batch(X, spec.chi, rng)
    return mutate_exchange_batch(X, rng)


def bitwise_outcomes(x, chi):
    """Exact mutation distribution by enumerating all 2^n flip masks."""
    x = np.asarray(x)
    n = x.shape[0]
    rate = chi / n
    outcomes = {}
    for mask in itertools.product((0, 1), repeat=n):
        flips = sum(mask)
        outcomes[tuple((x ^ np.array(mask, dtype=x.dtype)).tolist())] = rate ** flips * (1 - rate) ** (n - flips)
    return outcomes


def exchange_outcomes(pi, max_exchanges):
    """
    Mutation distribution of the exchange operator truncated at `max_exchanges` swaps.

    The missing Poisson tail mass is 1 - sum(probabilities), so any event probability computed
    from this table is a lower bound on the true one.
    """
    pi = tuple(int(value) for value in pi)
    n = len(pi)
    pairs = list(itertools.combinations(range(n), 2))
    current = {pi: 1.0}
    outcomes = defaultdict(float)
    for count in range(max_exchanges + 1):
        poisson = math.exp(-1.0) / math.factorial(count)
        if n < 2:
            # identity operator on degenerate inputs
            outcomes[pi] += poisson
            continue
        for state, probability in current.items():
            outcomes[state] += poisson * probability
        if count == max_exchanges:
            break
        following = defaultdict(float)
        for state, probability in current.items():
            share = probability / len(pairs)
            for i, j in pairs:
                swapped = list(state)
                swapped[i], swapped[j] = swapped[j], swapped[i]
                following[tuple(swapped)] += share
        current = following
    return dict(outcomes)


def draw_parents(mech, population, rows, rng, ranking=None):
    """Parent index pairs for `rows` offspring; parents of offspring 0 are drawn first."""
    if ranking is None:
        ranking = population.ranking(rng)
    picks = select_indices(mech, population, 2 * rows, rng, ranking=ranking)
    return picks[0::2], picks[1::2]


def offspring_batch(config, population, rows, rng, ranking=None):
    """Sample `rows` independent offspring from D(P): select, select, crossover, mutate."""
    first, second = draw_parents(config.selection, population, rows, rng, ranking)
    U = population.members[first]
    V = population.members[second]
    children = gated_batch(config.crossover, U, V, rng, config.problem.representation)
    return mutate_batch(config.mutation, children, rng)
