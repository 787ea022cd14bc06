# src/models/ga_config_model.py

from dataclasses import dataclass, replace

from .errors import ConfigError
from .operator_model import CrossoverSpec, MutationSpec, SelectionMechanism
from .problem_model import ProblemSpec, Representation

SEED_LIMIT = 2 ** 64


@dataclass(frozen=True)
class GAConfig:
    """Everything needed to define D(P) and drive replicated runs."""
    problem: ProblemSpec
    lam: int
    selection: SelectionMechanism
    crossover: CrossoverSpec
    mutation: MutationSpec
    seed: int = 0
    max_evals: int = 10 ** 9
    replicates: int = 1

    def __post_init__(self):
        self.validate()

    def validate(self):
        if int(self.lam) != self.lam or self.lam < 1:
            raise ConfigError(f"population size must be an integer >= 1, got {self.lam}", key='lambda')
        if int(self.replicates) != self.replicates or self.replicates < 1:
            raise ConfigError(f"replicates must be an integer >= 1, got {self.replicates}", key='replicates')
        if not 0 <= self.seed < SEED_LIMIT:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed}", key='seed')
        if self.max_evals < self.lam:
            raise ConfigError(f"max_evals={self.max_evals} is smaller than lambda={self.lam}", key='max_evals')
        representation = self.problem.representation
        if representation is Representation.BITS and self.mutation.kind != 'bitwise':
            raise ConfigError(f"{self.problem.kind} uses bitstrings and needs bitwise mutation", key='mutation')
        if representation is Representation.PERM and self.mutation.kind != 'exchange':
            raise ConfigError(f"{self.problem.kind} uses permutations and needs exchange mutation", key='mutation')
        self.selection.check_population_size(self.lam)
        self.mutation.check_length(self.problem.n)

    def with_changes(self, **changes):
        return replace(self, **changes)

    def to_dict(self):
        return {
            'problem': f"{self.problem.kind}:n={self.problem.n}",
            'lambda': self.lam,
            'selection': self.selection.to_string(),
            'crossover': self.crossover.to_string(),
            'mutation': self.mutation.to_string(),
            'seed': self.seed,
            'max_evals': self.max_evals,
            'replicates': self.replicates,
        }
