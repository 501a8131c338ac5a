"""
Synthetic populations of human-like agents.

Stance counts hit the target shares exactly after largest-remainder rounding;
entropies follow a Beta law matched to the requested mean and spread (standard
deviation) and clamped to [0, 1].
"""

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from beliefdyn.core.exceptions import InfeasibleRounding, InputError, ScenarioError
from beliefdyn.core.rng import derive_stream
from beliefdyn.models.behavior import stance_entropy
from beliefdyn.models.schemas import STANCE_ORDER, AgentProfile, Stance, StanceDistribution

DEFAULT_ENTROPY_MEAN = 0.35
DEFAULT_ENTROPY_SPREAD = 0.2

# human-only terminal shares of the cross-topic table, used as initial states
TOPIC_PRESETS: Dict[str, Tuple[float, float, float]] = {
    "abortion": (0.845, 0.080, 0.075),
    "brexit": (0.080, 0.810, 0.110),
    "capitalism": (0.894, 0.085, 0.020),
    "feminism": (0.795, 0.205, 0.000),
}

def topic_distribution(topic: str) -> StanceDistribution:
    try:
        return StanceDistribution.normalized(TOPIC_PRESETS[topic])
    except KeyError:
        raise ScenarioError(f"unknown topic {topic!r}; presets: {sorted(TOPIC_PRESETS)}")

def largest_remainder_counts(shares: StanceDistribution, n: int) -> Dict[Stance, int]:
    """Integer counts summing to ``n``; leftover units go to the largest remainders, ties in stance order."""
    if n <= 0:
        raise InfeasibleRounding(f"cannot round a population of size {n}")
    quotas = shares.as_array() * n
    counts = np.floor(quotas).astype(int)
    remainders = quotas - counts
    order = sorted(range(3), key=lambda i: (-remainders[i], i))
    for i in order[: n - int(counts.sum())]:
        counts[i] += 1
    return {s: int(c) for s, c in zip(STANCE_ORDER, counts)}

def _beta_parameters(mean: float, spread: float) -> Optional[Tuple[float, float]]:
    if spread <= 0 or mean <= 0 or mean >= 1:
        return None
    variance = min(spread ** 2, 0.99 * mean * (1 - mean))
    common = mean * (1 - mean) / variance - 1
    return mean * common, (1 - mean) * common

def sample_entropies(n: int, mean: float, spread: float, rng: np.random.Generator) -> np.ndarray:
    params = _beta_parameters(mean, spread)
    if params is None:
        return np.full(n, min(1.0, max(0.0, mean)))
    return np.clip(rng.beta(*params, size=n), 0.0, 1.0)

def generate_population(
    shares: StanceDistribution,
    entropy_mean: float = DEFAULT_ENTROPY_MEAN,
    entropy_spread: float = DEFAULT_ENTROPY_SPREAD,
    n: int = 200,
    seed: int = 0,
    topic: str = "synthetic",
) -> List[AgentProfile]:
    counts = largest_remainder_counts(shares, n)
    rng = derive_stream(seed, f"population:{topic}", n)
    stances = [s for s in STANCE_ORDER for _ in range(counts[s])]
    stances = [stances[i] for i in rng.permutation(n)]
    entropies = sample_entropies(n, entropy_mean, entropy_spread, rng)
    width = max(4, len(str(n)))
    return [
        AgentProfile(id=f"u{i:0{width}d}", topic=topic, initial_stance=s, entropy=float(e))
        for i, (s, e) in enumerate(zip(stances, entropies), start=1)
    ]

def topic_population(topic: str, n: int = 200, seed: int = 0, **kwargs) -> List[AgentProfile]:
    return generate_population(topic_distribution(topic), n=n, seed=seed, topic=topic, **kwargs)

def profiles_from_histories(topic: str, histories: Dict[str, Sequence[Stance]]) -> List[AgentProfile]:
    """Profiles from observed stance histories: first stance is the initial stance, entropy is normalized."""
    profiles = []
    for agent_id in sorted(histories):
        try:
            history = [Stance(s) for s in histories[agent_id]]
        except (TypeError, ValueError):
            raise InputError(f"agent {agent_id!r} has a history that is not a list of stance tokens")
        if not history:
            continue
        profiles.append(
            AgentProfile(id=agent_id, topic=topic, initial_stance=history[0], entropy=stance_entropy(history))
        )
    return profiles

def resolve_target(population: Sequence[AgentProfile]) -> Stance:
    """
    Stance opposite to the population's polar majority.

    Only favor and against compete for the majority; a tie counts as favor,
    so symmetric populations are targeted with against.
    """
    favor = sum(1 for p in population if p.initial_stance is Stance.FAVOR)
    against = sum(1 for p in population if p.initial_stance is Stance.AGAINST)
    majority = Stance.FAVOR if favor >= against else Stance.AGAINST
    return majority.opposite()

def entropy_summary(population: Sequence[AgentProfile]) -> Tuple[float, float]:
    values = [p.entropy for p in population]
    spread = float(np.std(values)) if len(values) > 1 else 0.0
    return float(np.mean(values)), spread
