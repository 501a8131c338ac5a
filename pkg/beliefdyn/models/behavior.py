"""
Agent decision models.

Human-like agents follow an entropy-gated softmax herd rule: with probability
equal to their (consolidated) entropy they reconsider, and reconsidering means
sampling the next stance from a softmax over perceived feed shares plus an
inertia bonus on the current stance. AI agents post a fixed stance on a
schedule, and their persuasion style scales the weight of each post.
"""

from typing import Iterable, Optional, Sequence

import numpy as np

from beliefdyn.models.schemas import (
    STANCE_ORDER,
    BehaviorParams,
    FeedView,
    HumanState,
    InterventionConfig,
    Post,
    Stance,
    StanceDistribution,
    StyleTag,
)

def post_weight(post: Post, reader_entropy: float, params: BehaviorParams) -> float:
    if not post.is_ai or post.style is StyleTag.NEUTRAL:
        return 1.0
    if post.style is StyleTag.COMPASSIONATE:
        return params.compassion_gain
    return condemnation_weight(reader_entropy, params)

def condemnation_weight(reader_entropy: float, params: BehaviorParams) -> float:
    # lands hardest on committed (low-entropy) readers
    return params.condemnation_base + params.condemnation_gain * (1.0 - reader_entropy)

def weighted_shares(feed: Sequence[Post], reader_entropy: float, params: BehaviorParams) -> StanceDistribution:
    """Laplace-smoothed, persuasion-weighted stance shares of a feed. Empty feeds give the uniform split."""
    mass = [params.smoothing] * 3
    for post in feed:
        mass[post.stance.index] += post_weight(post, reader_entropy, params)
    return StanceDistribution.normalized(mass)

def update_probabilities(current: Stance, shares: StanceDistribution, params: BehaviorParams) -> np.ndarray:
    """Softmax over U(s)/temperature with U(s) = w_social*share(s) + w_inertia*[s == current]."""
    return stance_probabilities(current.index, shares.as_array(), params)

def stance_probabilities(current: int, shares: np.ndarray, params: BehaviorParams) -> np.ndarray:
    """update_probabilities on a stance index and a (favor, ni, against) share array."""
    utility = params.w_social * shares
    utility[current] += params.w_inertia
    logits = utility / params.temperature
    logits -= logits.max()
    weights = np.exp(logits)
    return weights / weights.sum()

def sample_stance(probs: np.ndarray, pick: float) -> int:
    idx = int(np.searchsorted(np.cumsum(probs), pick, side="right"))
    return min(idx, len(STANCE_ORDER) - 1)

def gate_probability(entropy: float, tenure: int, params: BehaviorParams) -> float:
    return entropy * (1.0 - params.consolidation) ** tenure

def reconsider_probability(state: HumanState, params: BehaviorParams) -> float:
    return gate_probability(state.profile.entropy, state.tenure, params)

def human_update(
    state: HumanState,
    feed: FeedView,
    params: BehaviorParams,
    rng: np.random.Generator,
) -> Stance:
    """
    Next stance of a human-like agent.

    Two uniform draws are always consumed from ``rng``: the first gates whether
    the agent reconsiders at all, the second samples the softmax. An agent with
    zero entropy therefore never moves, whatever the feed.
    """
    gate, pick = rng.random(2)
    if gate >= reconsider_probability(state, params):
        return state.current_stance
    probs = update_probabilities(state.current_stance, feed.weighted_shares, params)
    return STANCE_ORDER[sample_stance(probs, pick)]

def next_state(state: HumanState, stance: Stance) -> HumanState:
    if stance is state.current_stance:
        return state.model_copy(update={"tenure": state.tenure + 1})
    return state.model_copy(update={"current_stance": stance, "tenure": 0})

def is_posting_round(config: InterventionConfig, round: int) -> bool:
    if not (config.activation_start <= round < config.activation_end):
        return False
    return (round - config.activation_start) % config.post_period == 0

def ai_policy(config: InterventionConfig, round: int, author_id: str = "ai-0000") -> Optional[Post]:
    if not is_posting_round(config, round):
        return None
    return Post(
        author_id=author_id,
        round=round,
        stance=config.target_stance,
        is_ai=True,
        style=config.style,
    )

def stance_entropy(history: Iterable[Stance]) -> float:
    """Normalized (base-3) Shannon entropy of a stance history; 0 for empty or constant histories."""
    counts = np.zeros(3)
    for s in history:
        counts[Stance(s).index] += 1
    total = counts.sum()
    if total == 0:
        return 0.0
    p = counts[counts > 0] / total
    return float(max(0.0, min(1.0, -(p * np.log(p)).sum() / np.log(3))))
