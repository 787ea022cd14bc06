# src/models/estimate_model.py

import math
from dataclasses import dataclass, field
from typing import List, Optional

CONDITION_NAMES = ('C1', 'C2', 'C3', 'C4', 'C5', 'G1', 'G2')

# Relative slack for comparing exactly computed probabilities with their requirement.
EXACT_TOLERANCE = 1e-12


@dataclass
class Estimate:
    value: float
    trials: int
    ci_halfwidth: float = 0.0
    exact: bool = False

    @classmethod
    def from_counts(cls, hits, trials):
        value = hits / trials
        return cls(value=value, trials=trials, ci_halfwidth=3.0 * math.sqrt(value * (1.0 - value) / trials))

    @classmethod
    def exact_value(cls, value, outcomes=1):
        return cls(value=float(value), trials=max(int(outcomes), 1), ci_halfwidth=0.0, exact=True)

    @property
    def lower(self):
        return self.value - self.ci_halfwidth

    def to_dict(self):
        return {'value': self.value, 'trials': self.trials, 'ci_halfwidth': self.ci_halfwidth, 'exact': self.exact}


@dataclass
class ConditionRecord:
    name: str
    required: float
    estimated: Estimate
    satisfied: bool
    margin: float
    level: Optional[int] = None
    method: str = 'exact'

    @classmethod
    def judge(cls, name, required, estimated, level=None, method='exact'):
        margin = estimated.lower - required
        slack = EXACT_TOLERANCE * max(abs(required), 1.0) if estimated.exact else 0.0
        return cls(name=name, required=required, estimated=estimated, satisfied=margin >= -slack,
                   margin=margin, level=level, method=method)

    def to_dict(self):
        return {
            'name': self.name,
            'required': self.required,
            'estimated': self.estimated.value,
            'ci_halfwidth': self.estimated.ci_halfwidth,
            'satisfied': self.satisfied,
            'margin': self.margin,
            'level': self.level,
            'method': self.method,
        }


@dataclass
class ConditionReport:
    records: List[ConditionRecord] = field(default_factory=list)
    scope: str = 'constructed representative populations only'

    def get(self, name):
        return next(record for record in self.records if record.name == name)

    @property
    def passed(self):
        return all(record.satisfied for record in self.records)

    def to_dict(self):
        record = {'conditions_pass': self.passed, 'scope': self.scope}
        for item in self.records:
            record[f'{item.name}_satisfied'] = item.satisfied
            record[f'{item.name}_margin'] = item.margin
            record[f'{item.name}_required'] = item.required
            record[f'{item.name}_estimated'] = item.estimated.value
            record[f'{item.name}_method'] = item.method
        return record
