import logging

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, Optional, Sequence, TypeVar

from beliefdyn.core.config import Config
from beliefdyn.core.rng import derive_stream, replicate_seed
from beliefdyn.core.validation import validate_config
from beliefdyn.engine.feed import FeedPool, assemble_feed, assign_visibility
from beliefdyn.models.adapter import NdjsonAdapter, external_agent_step
from beliefdyn.models.behavior import ai_policy, gate_probability, sample_stance, stance_probabilities
from beliefdyn.models.schemas import (
    STANCE_ORDER,
    InterventionConfig,
    Observation,
    Post,
    RoundRecord,
    SimulationConfig,
    SimulationTrace,
    StyleTag,
    VisibilityAssignment,
)

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

def ai_agent_id(k: int) -> str:
    return f"ai-{k:04d}"

def _ai_posts(intervention: Optional[InterventionConfig], round: int) -> List[Post]:
    if intervention is None or intervention.n_ai == 0:
        return []
    posts = [ai_policy(intervention, round, ai_agent_id(k)) for k in range(intervention.n_ai)]
    return [p for p in posts if p is not None]

def _external_posts(
    adapters: Sequence[NdjsonAdapter],
    previous: Sequence[Post],
    exposure: VisibilityAssignment,
    config: SimulationConfig,
    round: int,
) -> List[Post]:
    posts = []
    for adapter in sorted(adapters, key=lambda a: a.agent_id):
        # external agents always see the full candidate set
        view = VisibilityAssignment(exposed_ids=exposure.exposed_ids | {adapter.agent_id})
        rng = derive_stream(config.seed, adapter.agent_id, round)
        feed = assemble_feed(adapter.agent_id, previous, view, config.behavior, rng)
        posts.append(external_agent_step(Observation(round=round, feed=feed), adapter))
    return posts

def _human_posts(ids: Sequence[str], stances: Sequence[int], round: int) -> List[Post]:
    return [
        Post.model_construct(
            author_id=pid, round=round, stance=STANCE_ORDER[s], is_ai=False, style=StyleTag.NEUTRAL, text=None
        )
        for pid, s in zip(ids, stances)
    ]

def _record(round: int, ids: Sequence[str], stances: Sequence[int], posts: List[Post]) -> RoundRecord:
    return RoundRecord.model_construct(
        round=round, stances={pid: STANCE_ORDER[s] for pid, s in zip(ids, stances)}, posts=posts
    )

def run_simulation(config: SimulationConfig, adapters: Sequence[NdjsonAdapter] = ()) -> SimulationTrace:
    """
    Executes rounds 1..T of one simulation.

    Each round AI agents post per their schedule, external adapters act, and
    every human reads a feed sampled from the previous round's posts, updates,
    and posts its stance. Posts of a round are kept in canonical order (humans
    by id, then AI agents, then adapters) so the result does not depend on the
    order of the population list.

    Human state is held in plain lists and feeds are drawn through FeedPool.
    The draws per (agent, round) stream match assemble_feed followed by
    human_update, so a step composed from those functions gives the same trace.
    """
    validate_config(config)
    params = config.behavior
    profiles = sorted(config.population, key=lambda p: p.id)
    ids = [p.id for p in profiles]
    entropy = [p.entropy for p in profiles]
    current = [p.initial_stance.index for p in profiles]
    tenure = [0] * len(profiles)
    visibility = config.intervention.visibility if config.intervention is not None else 0.0
    exposure = assign_visibility(ids, visibility, config.seed)
    exposed = [exposure.is_exposed(pid) for pid in ids]
    posts = _human_posts(ids, current, 0)
    records = [_record(0, ids, current, posts)]
    logger.debug("Simulating %d humans, %d AI agents over %d rounds (seed %d)",
                 len(profiles), config.n_ai, config.rounds, config.seed)
    for t in range(1, config.rounds + 1):
        ai_posts = _ai_posts(config.intervention, t)
        external = _external_posts(adapters, posts, exposure, config, t)
        pool = FeedPool(posts, len(ids), params)
        updated = []
        for k, pid in enumerate(ids):
            rng = derive_stream(config.seed, pid, t)
            feed = pool.sample(k, exposed[k], rng)
            gate, pick = rng.random(2)
            stance = current[k]
            if gate < gate_probability(entropy[k], tenure[k], params):
                probs = stance_probabilities(stance, pool.shares(feed, entropy[k]), params)
                stance = sample_stance(probs, pick)
            updated.append(stance)
        tenure = [n + 1 if new == old else 0 for n, new, old in zip(tenure, updated, current)]
        current = updated
        posts = _human_posts(ids, current, t) + ai_posts + external
        records.append(_record(t, ids, current, posts))
    return SimulationTrace(config_digest=config.digest(), seed=config.seed, records=records)

def replicate_configs(config: SimulationConfig) -> List[SimulationConfig]:
    """One single-replicate config per replicate, seeded via replicate_seed."""
    return [
        config.model_copy(update={"seed": replicate_seed(config.seed, k), "replicates": 1})
        for k in range(config.replicates)
    ]

def parallel_map(fn: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None) -> List[R]:
    """Order-preserving map, fanned out to a process pool when more than one worker is allowed."""
    items = list(items)
    workers = Config.THREADS if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))

def run_replicates(config: SimulationConfig, workers: Optional[int] = None) -> List[SimulationTrace]:
    validate_config(config)
    return parallel_map(run_simulation, replicate_configs(config), workers)
