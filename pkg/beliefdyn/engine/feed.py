import math

from typing import Iterable, List, Sequence

import numpy as np

from beliefdyn.core.rng import derive_stream
from beliefdyn.models.behavior import condemnation_weight, post_weight
from beliefdyn.models.schemas import BehaviorParams, Post, StyleTag, VisibilityAssignment

def exposed_count(visibility: float, n_humans: int) -> int:
    # half-up rounding so 0.5 * 5 exposes 3 agents, not 2
    return int(math.floor(visibility * n_humans + 0.5))

def assign_visibility(agent_ids: Iterable[str], visibility: float, seed: int) -> VisibilityAssignment:
    """Fixed exposed subset for a whole run, drawn from the master seed independently of id order."""
    ids = sorted(agent_ids)
    k = exposed_count(visibility, len(ids))
    if k == 0:
        return VisibilityAssignment()
    order = derive_stream(seed, "visibility", 0).permutation(len(ids))
    return VisibilityAssignment(exposed_ids=frozenset(ids[i] for i in order[:k]))

def assemble_feed(
    agent_id: str,
    previous_round_posts: Sequence[Post],
    exposure: VisibilityAssignment,
    params: BehaviorParams,
    rng: np.random.Generator,
) -> List[Post]:
    """
    Visible posts for one reader.

    Candidates are every post of the previous round except the reader's own,
    with AI posts kept only for exposed readers. When candidates exceed
    ``feed_size`` a uniform sample without replacement is drawn from ``rng``.
    ``previous_round_posts`` must be in canonical order (see run_simulation).
    """
    exposed = exposure.is_exposed(agent_id)
    candidates = [
        p for p in previous_round_posts
        if p.author_id != agent_id and (exposed or not p.is_ai)
    ]
    if len(candidates) <= params.feed_size:
        return candidates
    picked = rng.choice(len(candidates), size=params.feed_size, replace=False)
    return [candidates[i] for i in sorted(picked)]

class FeedPool:
    """
    One round's posts as arrays, for sampling and weighing many human feeds.

    ``posts`` must be in canonical order with the ``n_humans`` human posts first,
    so that reader ``k`` authored post ``k``. ``sample`` then returns the same
    posts, by index, that assemble_feed returns for that reader from the same
    ``rng`` state.
    """

    def __init__(self, posts: Sequence[Post], n_humans: int, params: BehaviorParams):
        self.params = params
        self.stances = np.array([p.stance.index for p in posts], dtype=np.intp)
        self.condemning = np.array(
            [p.is_ai and p.style is StyleTag.CONDEMNATION for p in posts], dtype=bool
        )
        self.weights = np.array([post_weight(p, 0.0, params) for p in posts])
        self.every = np.arange(len(posts))
        self.hidden = np.flatnonzero(~np.array([p.is_ai for p in posts], dtype=bool))
        if len(self.hidden) < n_humans or (self.hidden[:n_humans] != np.arange(n_humans)).any():
            raise ValueError("human posts must lead the round in reader order")

    def sample(self, reader: int, exposed: bool, rng: np.random.Generator) -> np.ndarray:
        candidates = self.every if exposed else self.hidden
        n = len(candidates) - 1
        if n <= self.params.feed_size:
            return np.delete(candidates, reader)
        picked = np.sort(rng.choice(n, size=self.params.feed_size, replace=False))
        # skip over the reader's own post
        return candidates[picked + (picked >= reader)]

    def shares(self, feed: np.ndarray, reader_entropy: float) -> np.ndarray:
        weights = self.weights[feed]
        condemning = self.condemning[feed]
        if condemning.any():
            weights = np.where(condemning, condemnation_weight(reader_entropy, self.params), weights)
        mass = np.full(3, self.params.smoothing, dtype=float)
        np.add.at(mass, self.stances[feed], weights)
        return mass / mass.sum()
