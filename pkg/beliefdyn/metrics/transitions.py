import logging

from typing import Dict, Iterable, Sequence

import numpy as np

from beliefdyn.core.exceptions import InsufficientTrace
from beliefdyn.models.reports import TransitionMatrix
from beliefdyn.models.schemas import STANCE_ORDER, SimulationTrace, Stance

logger = logging.getLogger(__name__)

def transition_matrix_from_sequences(sequences: Iterable[Sequence[Stance]]) -> TransitionMatrix:
    """Pooled step-to-step counts over all sequences, each row normalized by its own support."""
    counts = np.zeros((3, 3), dtype=np.int64)
    for seq in sequences:
        idx = [Stance(s).index for s in seq]
        np.add.at(counts, (idx[:-1], idx[1:]), 1)
    return TransitionMatrix.from_counts(counts)

def transition_matrix(trace: SimulationTrace) -> TransitionMatrix:
    if len(trace.records) < 2:
        raise InsufficientTrace(f"need at least 2 rounds to count transitions, got {len(trace.records)}")
    counts = np.zeros((3, 3), dtype=np.int64)
    for before, after in zip(trace.records, trace.records[1:]):
        for agent_id, stance in before.stances.items():
            counts[stance.index, after.stances[agent_id].index] += 1
    matrix = TransitionMatrix.from_counts(counts)
    if matrix.empty_rows:
        logger.debug("Transition rows without support: %s", [s.value for s in matrix.empty_rows])
    return matrix

def pool_transitions(matrices: Iterable[TransitionMatrix]) -> TransitionMatrix:
    counts = np.zeros((3, 3), dtype=np.int64)
    for m in matrices:
        counts += np.asarray(m.counts, dtype=np.int64)
    return TransitionMatrix.from_counts(counts)

def inflow(matrix: TransitionMatrix) -> Dict[Stance, float]:
    """Mean probability of moving into each stance from the other supported rows."""
    probs = matrix.as_array()
    result = {}
    for j, target in enumerate(STANCE_ORDER):
        sources = [i for i in range(3) if i != j and matrix.support[i] > 0]
        result[target] = float(np.mean(probs[sources, j])) if sources else 0.0
    return result

def attractor(matrix: TransitionMatrix) -> Stance:
    """Stance with the highest inflow; ties go to the earlier stance in (favor, ni, against)."""
    flows = inflow(matrix)
    return max(STANCE_ORDER, key=lambda s: (flows[s], -s.index))
