import pytest

from beliefdyn.experiments.population import largest_remainder_counts
from beliefdyn.models.schemas import (
    AgentProfile,
    BehaviorParams,
    InterventionConfig,
    SimulationConfig,
    Stance,
    StanceDistribution,
)

def pytest_configure(config):
    config.addinivalue_line("markers", "slow: Monte-Carlo checks of the dynamics (several seconds each)")

def build_population(n=30, shares=(0.6, 0.2, 0.2), entropy=None, topic="test"):
    counts = largest_remainder_counts(StanceDistribution.normalized(shares), n)
    stances = [s for s, c in counts.items() for _ in range(c)]
    profiles = []
    for i, stance in enumerate(stances):
        e = entropy if entropy is not None else round(0.1 + 0.8 * i / max(1, n - 1), 6)
        profiles.append(AgentProfile(id=f"u{i:03d}", topic=topic, initial_stance=stance, entropy=e))
    return profiles

@pytest.fixture
def population_factory():
    return build_population

@pytest.fixture
def small_population():
    return build_population()

@pytest.fixture
def small_config(small_population):
    return SimulationConfig(
        rounds=8,
        population=small_population,
        intervention=InterventionConfig(n_ai=10, target_stance=Stance.AGAINST, activation_end=8),
        behavior=BehaviorParams(),
        seed=7,
    )
