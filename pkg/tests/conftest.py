import numpy as np
import pytest

from src.models import CrossoverSpec, GAConfig, MutationSpec, ProblemSpec, SelectionMechanism


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False, help="run long acceptance tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def onemax_config():
    return GAConfig(
        problem=ProblemSpec(kind='onemax', n=10),
        lam=20,
        selection=SelectionMechanism(kind='tournament', k=2),
        crossover=CrossoverSpec(kind='uniform', pc=1.0),
        mutation=MutationSpec(kind='bitwise', chi=1.0),
        seed=7,
        max_evals=20000,
        replicates=3,
    )


@pytest.fixture
def inv_config():
    return GAConfig(
        problem=ProblemSpec(kind='inv_sorting', n=4),
        lam=12,
        selection=SelectionMechanism(kind='mu_lambda', mu=3),
        crossover=CrossoverSpec(kind='one_point', pc=0.5),
        mutation=MutationSpec(kind='exchange'),
        seed=11,
        max_evals=50000,
        replicates=2,
    )
