import math

import numpy as np
import pytest

from bound_oracle import ga_bound, general_bound
from src.models import ConfigError, CrossoverSpec, LevelProbabilities, ProblemSpec
from src.services import bound_service

ONEMAX_10 = ProblemSpec(kind='onemax', n=10)


def test_theorem_constants_example():
    a, eps, c = bound_service.theorem_constants(1.0, 0.25)
    assert a == pytest.approx(0.0625)
    assert eps == 0.5
    assert c == pytest.approx(2.6041666e-3, rel=1e-6)


def test_theorem1_lambda_min_example():
    report = bound_service.theorem1_bound(1, 464, LevelProbabilities(values=[0.1]), 1.0, 0.25)
    assert report.lambda_min == 464
    assert report.lambda_ok
    assert report.bound == pytest.approx(1.2927e6, rel=1e-3)


@pytest.mark.parametrize(
    ("m", "lam", "z", "delta", "gamma0"),
    [
        (1, 464, [0.1], 1.0, 0.25),
        (3, 1000, [0.2, 0.05, 0.5], 0.5, 0.1),
        (5, 50, [1.0, 0.9, 0.3, 0.01, 0.7], 3.0, 0.02),
    ],
    ids=["single", "three_levels", "large_delta"],
)
def test_theorem1_matches_high_precision_oracle(m, lam, z, delta, gamma0):
    report = bound_service.theorem1_bound(m, lam, LevelProbabilities(values=z), delta, gamma0)
    lambda_min, bound = general_bound(m, lam, z, delta, gamma0)
    assert report.lambda_min == math.ceil(lambda_min)
    assert report.bound == pytest.approx(float(bound), rel=1e-12)


def test_corollary_matches_high_precision_oracle():
    values, p0, eps1 = bound_service.benchmark_parameters(ONEMAX_10, 1.0)
    gamma0 = bound_service.lemma1_selection_threshold('tournament', eps1, p0, 1.0)[1]
    report = bound_service.corollary1_bound(10, 5000, LevelProbabilities(values, p0, eps1), 1.0, gamma0)
    lambda_min, bound = ga_bound(10, 5000, values, p0, 1.0, gamma0)
    assert report.lambda_min == math.ceil(lambda_min)
    assert report.bound == pytest.approx(float(bound), rel=1e-12)
    assert report.eps_or_psi == 0.5


def _random_tuple(seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(1, 40))
    return (m, int(rng.integers(1, 10 ** 6)), list(rng.uniform(1e-4, 1.0, m)), float(rng.uniform(0.05, 5.0)),
            float(rng.uniform(1e-3, 0.99)))


def _same_lambda_min(reported, oracle):
    oracle = float(oracle)
    return math.ceil(oracle * (1 - 1e-12)) <= reported <= math.ceil(oracle * (1 + 1e-12))


@pytest.mark.parametrize("seed", range(100))
def test_theorem1_matches_oracle_on_random_tuples(seed):
    m, lam, z, delta, gamma0 = _random_tuple(seed)
    report = bound_service.theorem1_bound(m, lam, LevelProbabilities(values=z), delta, gamma0)
    lambda_min, bound = general_bound(m, lam, z, delta, gamma0)
    assert _same_lambda_min(report.lambda_min, lambda_min)
    assert report.bound == pytest.approx(float(bound), rel=1e-9)


@pytest.mark.parametrize("seed", range(100))
def test_corollary1_matches_oracle_on_random_tuples(seed):
    m, lam, z, delta, gamma0 = _random_tuple(seed)
    rng = np.random.default_rng(10_000 + seed)
    s = [value * 0.5 for value in z]
    p0, eps1 = float(rng.uniform(0.05, 1.0)), float(rng.uniform(0.05, 1.0))
    report = bound_service.corollary1_bound(m, lam, LevelProbabilities(s, p0, eps1), delta, gamma0)
    lambda_min, bound = ga_bound(m, lam, s, p0, delta, gamma0)
    assert _same_lambda_min(report.lambda_min, lambda_min)
    assert report.bound == pytest.approx(float(bound), rel=1e-9)
    assert report.a * min(report.implied_z) == pytest.approx((delta * gamma0) ** 2 * min(s) / (2 * p0), rel=1e-12)


def test_bounds_reject_bad_parameters():
    levels = LevelProbabilities(values=[0.5])
    with pytest.raises(ConfigError):
        bound_service.theorem1_bound(1, 10, levels, 0.0, 0.25)
    with pytest.raises(ConfigError):
        bound_service.theorem1_bound(1, 10, levels, 1.0, 1.0)
    with pytest.raises(ConfigError):
        bound_service.theorem1_bound(2, 10, levels, 1.0, 0.5)
    with pytest.raises(ConfigError):
        LevelProbabilities(values=[0.0])


def test_constant_identities_on_random_grid(rng):
    for delta, gamma0 in zip(rng.uniform(0.01, 5, 50), rng.uniform(0.001, 0.99, 50)):
        a, eps, c = bound_service.theorem_constants(delta, gamma0)
        assert a == pytest.approx(delta ** 2 * gamma0 / (2 * (1 + delta)))
        assert eps == min(delta / 2, 0.5)
        assert c == pytest.approx(eps ** 4 / 24)


def test_theorem1_monotone_in_levels_and_lambda(rng):
    base = rng.uniform(0.05, 0.9, 6)
    report = bound_service.theorem1_bound(6, 2000, LevelProbabilities(list(base)), 1.0, 0.2)
    raised = base.copy()
    raised[2] = min(1.0, raised[2] * 1.5)
    better = bound_service.theorem1_bound(6, 2000, LevelProbabilities(list(raised)), 1.0, 0.2)
    larger = bound_service.theorem1_bound(6, 4000, LevelProbabilities(list(base)), 1.0, 0.2)
    more_levels = bound_service.theorem1_bound(7, 2000, LevelProbabilities(list(base) + [0.9]), 1.0, 0.2)
    assert better.bound <= report.bound
    assert larger.bound >= report.bound
    assert more_levels.bound >= report.bound


def test_corollary_is_the_general_bound_with_implied_levels(rng):
    for _ in range(20):
        s = list(rng.uniform(0.001, 0.3, 4))
        p0, eps1 = rng.uniform(0.3, 1.0), rng.uniform(0.2, 1.0)
        delta, gamma0 = rng.uniform(0.1, 2.0), rng.uniform(0.01, 0.2)
        corollary = bound_service.corollary1_bound(4, 3000, LevelProbabilities(s, p0, eps1), delta, gamma0)
        if max(corollary.implied_z) > 1.0:
            continue
        general = bound_service.theorem1_bound(4, 3000, LevelProbabilities(corollary.implied_z), delta, gamma0)
        assert corollary.a * min(corollary.implied_z) == pytest.approx((delta * gamma0) ** 2 * min(s) / (2 * p0),
                                                                        rel=1e-12)
        assert abs(general.lambda_min - corollary.lambda_min) <= 1
        assert general.bound == pytest.approx(corollary.bound, rel=1e-9)


def test_lemma1_thresholds():
    threshold, gamma0 = bound_service.lemma1_selection_threshold('tournament', 0.5, math.exp(-1), 1.0)
    assert threshold == pytest.approx(16 * math.e)
    assert gamma0 == pytest.approx(1 / (16 * math.e))
    assert bound_service.lemma1_selection_threshold('exp_ranking', 0.5, math.exp(-1), 1.0)[0] == pytest.approx(16 * math.e)
    assert bound_service.lemma1_selection_threshold('mu_lambda', 1.0, 0.5, 1.0) == pytest.approx((4.0, 0.25))


@pytest.mark.parametrize(
    ("spec", "j", "expected"),
    [
        (ONEMAX_10, 1, 10 * 0.1 * 0.9 ** 9 * 0.9 ** 10),
        (ProblemSpec(kind='leadingones', n=10), 1, 0.1 * 0.9 ** 9),
        (ProblemSpec(kind='leadingones', n=10), 7, 0.1 * 0.9 ** 9),
        (ProblemSpec(kind='inv_sorting', n=4), 6, 1 / (6 * math.e ** 2)),
    ],
    ids=["onemax", "leadingones_first", "leadingones_constant", "inv_top"],
)
def test_benchmark_sj(spec, j, expected):
    s_j, _, _ = bound_service.benchmark_sj(spec, 1.0, j, pc=0.0)
    assert s_j == pytest.approx(expected)


def test_benchmark_constants():
    _, p0, eps1 = bound_service.benchmark_sj(ONEMAX_10, 1.0, 3)
    assert p0 == pytest.approx(0.9 ** 10)
    assert eps1 == 0.5
    _, p0, eps1 = bound_service.benchmark_sj(ProblemSpec(kind='inv_sorting', n=4), None, 1, pc=0.4)
    assert p0 == pytest.approx(math.exp(-1))
    assert eps1 == pytest.approx(0.3)


def test_benchmark_sj_level_out_of_range():
    with pytest.raises(ConfigError):
        bound_service.benchmark_sj(ONEMAX_10, 1.0, 11)


def test_onemax_floor_scales_like_one_over_n():
    for n in (10, 20, 50, 100, 200):
        values, p0, _ = bound_service.benchmark_parameters(ProblemSpec(kind='onemax', n=n), 1.0)
        assert values[-1] == pytest.approx((1 / n) * (1 - 1 / n) ** (n - 1) * p0)
        assert 0.1 <= min(values) * n <= 0.2


def test_theorem_config_onemax_tournament():
    config, report = bound_service.theorem_config('3_onemax', 50, 0.1, 'tournament')
    assert config.selection.k == 24
    assert config.lam == report.lam
    assert report.lambda_ok
    # (1 - 1/50)^50 < 1/e, so the certified delta shrinks below the requested one
    assert report.delta < 0.1
    assert report.delta == pytest.approx(24 * 0.5 * 0.98 ** 50 / 4 - 1)
    assert report.warnings
    assert config.max_evals == math.ceil(10 * report.bound)


def test_theorem_config_sorting_tournament():
    config, report = bound_service.theorem_config('4_inv', 5, 1.0, 'tournament', pc=0.0)
    assert config.selection.k == 44
    assert config.mutation.kind == 'exchange'
    assert report.delta == 1.0
    assert report.lam >= report.lambda_min


def test_theorem_config_mu_lambda_ratio():
    config, report = bound_service.theorem_config('3_leadingones', 50, 1.0, 'mu_lambda')
    assert config.lam / config.selection.mu >= 4 * math.e
    assert report.lambda_ok
    assert report.gamma0 == pytest.approx(config.selection.mu / config.lam)


def test_theorem_config_exp_ranking_uses_real_eta():
    config, _ = bound_service.theorem_config('3_onemax', 50, 1.0, 'exp_ranking')
    assert config.selection.eta == pytest.approx(16 * math.e)


def test_theorem_config_respects_user_lambda():
    _, report = bound_service.theorem_config('4_inv', 5, 1.0, 'tournament', lam=10 ** 7)
    assert report.lam == 10 ** 7


@pytest.mark.parametrize(
    ("theorem", "n", "kwargs"),
    [
        ("4_inv", 5, {"pc": 1.0}),
        ("3_onemax", 1, {}),
        ("5_unknown", 10, {}),
        ("3_onemax", 10, {"chi": 0.0}),
    ],
    ids=["pc_one", "n_too_small", "unknown_theorem", "zero_chi"],
)
def test_theorem_config_rejects_inadmissible_parameters(theorem, n, kwargs):
    with pytest.raises(ConfigError):
        bound_service.theorem_config(theorem, n, 1.0, 'tournament', **kwargs)


def test_finite_n_admissibility():
    admissible, required = bound_service.finite_n_admissible(100, 1.0, 1.0)
    assert admissible
    assert required == pytest.approx(1 / (1 - 0.75))
    assert not bound_service.finite_n_admissible(3, 1.0, 1.0)[0]


def test_config_bound_is_none_without_crossover_constant(inv_config):
    closed = inv_config.with_changes(crossover=CrossoverSpec(kind='uniform', pc=1.0))
    assert bound_service.config_bound(closed, 1.0) is None


def test_bound_report_dict_is_flat():
    report = bound_service.theorem1_bound(1, 464, LevelProbabilities(values=[0.1]), 1.0, 0.25)
    record = report.to_dict()
    assert record['lambda_min'] == 464
    assert all(not isinstance(value, (list, dict, np.ndarray)) for value in record.values())
