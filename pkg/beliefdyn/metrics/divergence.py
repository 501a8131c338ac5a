from typing import Sequence, Union

import numpy as np
from scipy.special import rel_entr

from beliefdyn.models.schemas import StanceDistribution

DistributionLike = Union[StanceDistribution, Sequence[float], np.ndarray]

def _as_array(d: DistributionLike) -> np.ndarray:
    if isinstance(d, StanceDistribution):
        return d.as_array()
    return np.asarray(d, dtype=float)

def kl_divergence(p: DistributionLike, q: DistributionLike) -> float:
    """KL(p || q) in bits; 0 * log(0 / x) counts as 0, p > 0 where q = 0 gives inf."""
    return float(rel_entr(_as_array(p), _as_array(q)).sum() / np.log(2))

def js_divergence(p: DistributionLike, q: DistributionLike) -> float:
    """Jensen-Shannon divergence in bits: symmetric, 0 iff p == q, at most 1."""
    p, q = _as_array(p), _as_array(q)
    m = (p + q) / 2.0
    value = 0.5 * (rel_entr(p, m).sum() + rel_entr(q, m).sum()) / np.log(2)
    return float(min(1.0, max(0.0, value)))
