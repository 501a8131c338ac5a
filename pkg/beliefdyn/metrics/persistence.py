from typing import List, Sequence, Union

import numpy as np

from beliefdyn.core.exceptions import ShapeMismatch
from beliefdyn.metrics.distributions import terminal_distribution
from beliefdyn.models.schemas import SimulationTrace, Stance

TraceOrTraces = Union[SimulationTrace, Sequence[SimulationTrace]]

def _as_list(traces: TraceOrTraces) -> List[SimulationTrace]:
    return [traces] if isinstance(traces, SimulationTrace) else list(traces)

def paired_deltas(runs: TraceOrTraces, baselines: TraceOrTraces, target: Stance) -> List[float]:
    """Terminal ``target`` share differences (pp) of each run against its same-seed baseline."""
    runs, baselines = _as_list(runs), _as_list(baselines)
    if len(runs) != len(baselines):
        raise ShapeMismatch(f"{len(runs)} runs cannot be paired with {len(baselines)} baselines")
    deltas = []
    for run, base in zip(runs, baselines):
        if run.rounds != base.rounds or len(run.final.stances) != len(base.final.stances):
            raise ShapeMismatch(
                f"traces differ in shape: T={run.rounds}/{base.rounds}, "
                f"N_h={len(run.final.stances)}/{len(base.final.stances)}"
            )
        diff = terminal_distribution(run).share(target) - terminal_distribution(base).share(target)
        deltas.append(100.0 * diff)
    return deltas

def persistence_effect(withdrawal_trace: TraceOrTraces, baseline_trace: TraceOrTraces, target: Stance) -> float:
    """Terminal ``target`` share left by a withdrawn intervention vs. the human-only baseline, in pp, averaged over pairs."""
    return float(np.mean(paired_deltas(withdrawal_trace, baseline_trace, target)))
