from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from beliefdyn.models.schemas import STANCE_ORDER, SimulationConfig, Stance, StanceDistribution

ROW_TOLERANCE = 1e-9


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class TransitionMatrix(_Frozen):
    """Row-stochastic stance transition estimate; rows with zero support are left at zero and flagged."""

    counts: List[List[int]]
    probabilities: List[List[float]]
    support: List[int]

    @model_validator(mode="after")
    def _rows_are_stochastic(self) -> "TransitionMatrix":
        for i, row in enumerate(self.probabilities):
            if self.support[i] > 0 and abs(sum(row) - 1.0) > ROW_TOLERANCE:
                raise ValueError(f"row {STANCE_ORDER[i].value} sums to {sum(row)!r}")
        return self

    @classmethod
    def from_counts(cls, counts: np.ndarray) -> "TransitionMatrix":
        counts = np.asarray(counts, dtype=np.int64).reshape(3, 3)
        support = counts.sum(axis=1)
        probs = np.zeros((3, 3))
        rows = support > 0
        probs[rows] = counts[rows] / support[rows, None]
        return cls(counts=counts.tolist(), probabilities=probs.tolist(), support=support.tolist())

    @property
    def empty_rows(self) -> List[Stance]:
        return [s for s, n in zip(STANCE_ORDER, self.support) if n == 0]

    def row(self, stance: Stance) -> List[float]:
        return self.probabilities[Stance(stance).index]

    def as_array(self) -> np.ndarray:
        return np.array(self.probabilities, dtype=float)


class ConfusionMatrix(_Frozen):
    """3x3 counts, rows = gold stance, columns = predicted stance, in (favor, ni, against) order."""

    counts: List[List[int]]

    @model_validator(mode="after")
    def _is_count_matrix(self) -> "ConfusionMatrix":
        arr = np.asarray(self.counts)
        if arr.shape != (3, 3):
            raise ValueError(f"confusion matrix must be 3x3, got shape {arr.shape}")
        if (arr < 0).any():
            raise ValueError("confusion matrix counts must be non-negative")
        return self

    @property
    def total(self) -> int:
        return int(np.asarray(self.counts).sum())

    def as_array(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=float)


class SummaryStat(_Frozen):
    mean: float
    sd: float
    n: int


class Sweep(_Frozen):
    path: str
    values: List[Any]


class Scenario(_Frozen):
    name: str
    base_config: SimulationConfig
    sweep: Optional[Sweep] = None
    paired_baseline: bool = True
    report_persistence: bool = False
    description: str = ""

    @model_validator(mode="after")
    def _sweep_values_fit(self) -> "Scenario":
        if self.sweep is not None:
            from beliefdyn.experiments.scenarios import apply_override

            for value in self.sweep.values:
                apply_override(self.base_config, self.sweep.path, value)
        return self


class LegResult(_Frozen):
    label: str
    value: Any = None
    config_digest: str
    seed: int
    replicates: int
    ai_ratio: float
    ai_posting_rounds: int
    terminal: Dict[Stance, SummaryStat]
    delta: Dict[Stance, SummaryStat]
    trajectory: List[StanceDistribution]
    transitions: TransitionMatrix
    tercile_delta: Dict[str, SummaryStat] = Field(default_factory=dict)
    convergence_round: SummaryStat
    persistence: Optional[SummaryStat] = None


class ExperimentReport(_Frozen):
    scenario: str
    version: str
    target_stance: Stance
    replicates: int
    baseline: Optional[LegResult] = None
    legs: List[LegResult]

    def leg(self, label: str) -> LegResult:
        for leg in self.legs:
            if leg.label == label:
                return leg
        raise KeyError(label)

    def target_deltas(self) -> Dict[str, float]:
        return {leg.label: leg.delta[self.target_stance].mean for leg in self.legs}


class ReplicateSummary(_Frozen):
    """What a sweep keeps of one replicate once its trace is discarded."""

    seed: int
    terminal: List[float]
    trajectory: List[List[float]]
    transitions: List[List[int]]
    terciles: Dict[str, List[float]] = Field(default_factory=dict)
    convergence_round: int
