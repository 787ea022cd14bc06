# src/models/run_result_model.py

from dataclasses import dataclass, field
from typing import List, Optional


@dataclass
class RunResult:
    evaluations: int
    success: bool
    generations: int
    best_level_trace: List[int] = field(default_factory=list)
    seed: int = 0
    run_index: int = 0

    @property
    def best_level_final(self):
        return self.best_level_trace[-1] if self.best_level_trace else 0

    def summary(self):
        """Flat record written as one CSV row per run."""
        return {
            'run_index': self.run_index,
            'seed': self.seed,
            'success': int(self.success),
            'evaluations': self.evaluations,
            'generations': self.generations,
            'best_level_final': self.best_level_final,
        }


@dataclass
class ExperimentStats:
    """Evaluation statistics over successful runs; None when no run succeeded."""
    mean_evals: Optional[float]
    std_evals: Optional[float]
    ci95_halfwidth: Optional[float]
    success_rate: float
    per_run: List[RunResult] = field(default_factory=list)

    @property
    def replicates(self):
        return len(self.per_run)

    def to_dict(self):
        return {
            'mean_evals': self.mean_evals,
            'std_evals': self.std_evals,
            'ci95_halfwidth': self.ci95_halfwidth,
            'success_rate': self.success_rate,
            'replicates': self.replicates,
            'runs': [run.summary() for run in self.per_run],
        }
