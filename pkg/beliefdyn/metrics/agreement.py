"""Agreement between two stance labelings (gold vs. predicted)."""

from typing import Sequence

import numpy as np
from sklearn.metrics import confusion_matrix as _sk_confusion_matrix

from beliefdyn.core.exceptions import DegenerateMarginals, MetricError
from beliefdyn.models.reports import ConfusionMatrix
from beliefdyn.models.schemas import STANCE_ORDER, Stance

LABELS = [s.value for s in STANCE_ORDER]

def confusion_matrix(gold: Sequence[Stance], predicted: Sequence[Stance]) -> ConfusionMatrix:
    if len(gold) != len(predicted):
        raise MetricError(f"label sequences differ in length ({len(gold)} vs {len(predicted)})")
    counts = _sk_confusion_matrix(
        [Stance(g).value for g in gold],
        [Stance(p).value for p in predicted],
        labels=LABELS,
    )
    return ConfusionMatrix(counts=counts.astype(int).tolist())

def _checked(cm: ConfusionMatrix) -> np.ndarray:
    data = cm.as_array()
    if data.sum() <= 0:
        raise MetricError("confusion matrix is empty")
    return data

def accuracy(cm: ConfusionMatrix) -> float:
    data = _checked(cm)
    return float(np.trace(data) / data.sum())

def cohen_kappa(cm: ConfusionMatrix) -> float:
    """
    Cohen's kappa: (p_o - p_e) / (1 - p_e).

    p_o is the diagonal share, p_e the sum over classes of row-marginal share
    times column-marginal share. Raises DegenerateMarginals when p_e = 1.
    """
    data = _checked(cm)
    total = data.sum()
    observed = np.trace(data) / total
    expected = float(np.dot(data.sum(axis=1) / total, data.sum(axis=0) / total))
    if np.isclose(expected, 1.0, rtol=0.0, atol=1e-12):
        raise DegenerateMarginals("expected agreement is 1: both labelings use a single class")
    return float((observed - expected) / (1.0 - expected))

def macro_f1(cm: ConfusionMatrix) -> float:
    """Unweighted mean of per-class F1; classes with neither gold nor predicted mass are left out."""
    data = _checked(cm)
    scores = []
    for c in range(3):
        tp = data[c, c]
        gold = data[c, :].sum()
        pred = data[:, c].sum()
        if gold == 0 and pred == 0:
            continue
        precision = tp / pred if pred > 0 else 0.0
        recall = tp / gold if gold > 0 else 0.0
        denom = precision + recall
        scores.append(2 * precision * recall / denom if denom > 0 else 0.0)
    return float(np.mean(scores))
