# src/models/operator_model.py

import math
from dataclasses import dataclass
from typing import Optional

from .errors import ConfigError

SELECTION_KINDS = ('tournament', 'mu_lambda', 'exp_ranking')
CROSSOVER_KINDS = ('one_point', 'uniform')
MUTATION_KINDS = ('bitwise', 'exchange')


def _format_number(value):
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


@dataclass(frozen=True)
class SelectionMechanism:
    kind: str
    k: Optional[int] = None
    mu: Optional[int] = None
    eta: Optional[float] = None

    def __post_init__(self):
        if self.kind not in SELECTION_KINDS:
            raise ConfigError(f"unknown selection '{self.kind}', expected one of {', '.join(SELECTION_KINDS)}",
                              key='selection')
        required = {'tournament': 'k', 'mu_lambda': 'mu', 'exp_ranking': 'eta'}[self.kind]
        for name in ('k', 'mu', 'eta'):
            value = getattr(self, name)
            if name == required and value is None:
                raise ConfigError(f"{self.kind} selection requires '{name}'", key=f'selection.{name}')
            if name != required and value is not None:
                raise ConfigError(f"'{name}' does not apply to {self.kind} selection", key=f'selection.{name}')
        if self.kind == 'tournament' and (int(self.k) != self.k or self.k < 1):
            raise ConfigError(f"k must be an integer >= 1, got {self.k}", key='selection.k')
        if self.kind == 'mu_lambda' and (int(self.mu) != self.mu or self.mu < 1):
            raise ConfigError(f"mu must be an integer >= 1, got {self.mu}", key='selection.mu')
        if self.kind == 'exp_ranking' and not (self.eta > 0 and math.isfinite(self.eta)):
            raise ConfigError(f"eta must be a positive real, got {self.eta}", key='selection.eta')

    @property
    def parameter(self):
        return {'tournament': self.k, 'mu_lambda': self.mu, 'exp_ranking': self.eta}[self.kind]

    def check_population_size(self, lam):
        if self.kind == 'mu_lambda' and self.mu > lam:
            raise ConfigError(f"mu={self.mu} exceeds population size lambda={lam}", key='selection.mu')

    def to_string(self):
        name = {'tournament': 'k', 'mu_lambda': 'mu', 'exp_ranking': 'eta'}[self.kind]
        return f"{self.kind}:{name}={_format_number(self.parameter)}"

    def to_dict(self):
        return {'kind': self.kind, 'k': self.k, 'mu': self.mu, 'eta': self.eta}


@dataclass(frozen=True)
class CrossoverSpec:
    kind: str
    pc: float = 1.0

    def __post_init__(self):
        if self.kind not in CROSSOVER_KINDS:
            raise ConfigError(f"unknown crossover '{self.kind}', expected one of {', '.join(CROSSOVER_KINDS)}",
                              key='crossover')
        if not 0.0 <= self.pc <= 1.0:
            raise ConfigError(f"pc must lie in [0, 1], got {self.pc}", key='crossover.pc')

    def to_string(self):
        return f"{self.kind}:pc={_format_number(float(self.pc))}"

    def to_dict(self):
        return {'kind': self.kind, 'pc': self.pc}


@dataclass(frozen=True)
class MutationSpec:
    kind: str
    chi: Optional[float] = None
    poisson_mean: float = 1.0

    def __post_init__(self):
        if self.kind not in MUTATION_KINDS:
            raise ConfigError(f"unknown mutation '{self.kind}', expected one of {', '.join(MUTATION_KINDS)}",
                              key='mutation')
        if self.kind == 'bitwise':
            if self.chi is None or not self.chi > 0:
                raise ConfigError(f"bitwise mutation requires chi > 0, got {self.chi}", key='mutation.chi')
        elif self.chi is not None:
            raise ConfigError("'chi' does not apply to exchange mutation", key='mutation.chi')
        if self.poisson_mean != 1.0:
            raise ConfigError("the exchange operator's Poisson mean is fixed to 1", key='mutation.poisson_mean')

    def rate(self, n):
        return self.chi / n

    def check_length(self, n):
        if self.kind == 'bitwise' and self.chi / n > 1:
            raise ConfigError(f"mutation rate chi/n = {self.chi}/{n} exceeds 1", key='mutation.chi')

    def to_string(self):
        if self.kind == 'bitwise':
            return f"bitwise:chi={_format_number(float(self.chi))}"
        return 'exchange'

    def to_dict(self):
        return {'kind': self.kind, 'chi': self.chi}
