import math

from typing import Dict, List, Sequence

import numpy as np

from beliefdyn.core.exceptions import InsufficientTrace
from beliefdyn.models.reports import SummaryStat
from beliefdyn.models.schemas import (
    STANCE_ORDER,
    AgentProfile,
    SimulationTrace,
    Stance,
    StanceDistribution,
)

TERCILES = ("low", "mid", "high")

def terminal_distribution(trace: SimulationTrace) -> StanceDistribution:
    if not trace.records:
        raise InsufficientTrace("trace has no rounds")
    return StanceDistribution.from_stances(trace.final.stances.values())

def trajectory(trace: SimulationTrace) -> List[StanceDistribution]:
    return [StanceDistribution.from_stances(r.stances.values()) for r in trace.records]

def distribution_delta(run: StanceDistribution, baseline: StanceDistribution) -> Dict[Stance, float]:
    """Per-stance run - baseline, in percentage points."""
    return {s: 100.0 * (run.share(s) - baseline.share(s)) for s in STANCE_ORDER}

def mean_distribution(dists: Sequence[StanceDistribution]) -> StanceDistribution:
    return StanceDistribution.normalized(np.mean([d.as_array() for d in dists], axis=0))

def convergence_round(trace: SimulationTrace, tolerance: float = 0.01) -> int:
    """First round whose distribution stays within ``tolerance`` (every share) of all later rounds."""
    shares = np.array([d.as_array() for d in trajectory(trace)])
    if len(shares) == 0:
        raise InsufficientTrace("trace has no rounds")
    rounds = [r.round for r in trace.records]
    for i in range(len(shares)):
        if np.abs(shares[i:] - shares[i]).max() <= tolerance:
            return rounds[i]
    return rounds[-1]

def entropy_terciles(population: Sequence[AgentProfile]) -> Dict[str, List[str]]:
    """Agent ids split into low/mid/high entropy groups (sorted by entropy then id; sizes differ by at most one)."""
    ordered = [p.id for p in sorted(population, key=lambda p: (p.entropy, p.id))]
    groups = np.array_split(np.arange(len(ordered)), 3)
    return {name: [ordered[i] for i in idx] for name, idx in zip(TERCILES, groups)}

def tercile_distributions(trace: SimulationTrace, population: Sequence[AgentProfile]) -> Dict[str, StanceDistribution]:
    """Terminal distribution within each non-empty entropy tercile."""
    final = trace.final.stances
    return {
        name: StanceDistribution.from_stances(final[i] for i in ids)
        for name, ids in entropy_terciles(population).items()
        if ids
    }

def summarize(values: Sequence[float]) -> SummaryStat:
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        return SummaryStat(mean=math.nan, sd=math.nan, n=0)
    sd = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return SummaryStat(mean=float(arr.mean()), sd=sd, n=int(arr.size))
