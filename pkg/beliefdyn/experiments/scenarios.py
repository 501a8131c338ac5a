"""
Scenario catalog.

Each built-in scenario pairs an intervention (or a sweep over one intervention
parameter) with a human-only baseline sharing the same replicate seeds, so
every reported delta is a paired difference.
"""

import logging

from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Union

from pydantic import ValidationError

from beliefdyn.core.config import Config
from beliefdyn.core.exceptions import ScenarioError
from beliefdyn.engine.io import load_population
from beliefdyn.experiments.population import generate_population, resolve_target, topic_population, TOPIC_PRESETS
from beliefdyn.models.behavior import is_posting_round
from beliefdyn.models.reports import Scenario, Sweep
from beliefdyn.models.schemas import (
    AgentProfile,
    BehaviorParams,
    InterventionConfig,
    SimulationConfig,
    Stance,
    StanceDistribution,
    StyleTag,
)
from beliefdyn.utils.helpers import load_json

logger = logging.getLogger(__name__)

ROUNDS = 50
N_HUMANS = 200
N_AI = 80
VISIBILITY_HUMANS = 50
CONTROL_TOPIC = "abortion"

COUNT_VALUES = [0, 5, 20, 40, 80, 160]
PERIOD_VALUES = [1, 4, 8]
WITHDRAWAL_VALUES = [10, 20, 30, 50]
STYLE_VALUES = [StyleTag.COMPASSIONATE.value, StyleTag.CONDEMNATION.value]
VISIBILITY_VALUES = [0.0, 0.5, 1.0]

# held stances harden so a withdrawn intervention leaves a lasting shift
CALIBRATED_BEHAVIOR = BehaviorParams(consolidation=0.2)
# wide enough that the high-entropy tercile carries the aggregate shift
CONTROL_ENTROPY = (0.5, 0.3)

# a single agent can only tip a contested population
VISIBILITY_SHARES = (0.45, 0.10, 0.45)
VISIBILITY_BEHAVIOR = BehaviorParams(temperature=0.4)

def ai_posting_rounds(intervention: Optional[InterventionConfig], rounds: int) -> List[int]:
    """
    Scheduled AI posting slots among rounds ``0..rounds-1``.

    Posts of round t are read in round t + 1, so these are the slots whose
    posts can reach a feed. Slot 0 is taken by the opening human posts and
    carries no AI posts in the trace; every later slot matches the rounds of
    the trace that hold AI posts. Every-round posting over T rounds gives T
    slots and every 8th round gives ceil(T / 8).
    """
    if intervention is None or intervention.n_ai == 0:
        return []
    return [t for t in range(rounds) if is_posting_round(intervention, t)]

def apply_override(config: SimulationConfig, path: str, value: Any) -> SimulationConfig:
    """Returns ``config`` with the dotted parameter ``path`` set to ``value``, re-validated by pydantic."""
    data = config.model_dump(mode="json")
    keys = path.split(".")
    if keys[0] == "intervention" and data.get("intervention") is None:
        data["intervention"] = InterventionConfig().model_dump(mode="json")
    node = data
    for key in keys[:-1]:
        if not isinstance(node.get(key), dict):
            raise ScenarioError(f"unknown sweep parameter {path!r}")
        node = node[key]
    if keys[-1] not in node:
        raise ScenarioError(f"unknown sweep parameter {path!r}")
    node[keys[-1]] = value
    try:
        return SimulationConfig.model_validate(data)
    except ValidationError as e:
        raise ScenarioError(f"value {value!r} does not fit parameter {path!r}: {e.errors()[0]['msg']}")

def _intervention(target: Stance, rounds: int, n_ai: int = N_AI) -> InterventionConfig:
    return InterventionConfig(
        n_ai=n_ai,
        target_stance=target,
        post_period=1,
        activation_start=0,
        activation_end=rounds,
        style=StyleTag.NEUTRAL,
        visibility=1.0,
    )

def _replicates(replicates: Optional[int]) -> int:
    return Config.DEFAULT_REPLICATES if replicates is None else replicates

def control_base_config(seed: int = 0, replicates: Optional[int] = None, n_humans: int = N_HUMANS) -> SimulationConfig:
    """Abortion-initialised population under 80 opposing AI agents; the base of every control-dimension sweep."""
    mean, spread = CONTROL_ENTROPY
    population = topic_population(CONTROL_TOPIC, n=n_humans, seed=seed, entropy_mean=mean, entropy_spread=spread)
    return SimulationConfig(
        rounds=ROUNDS,
        population=population,
        intervention=_intervention(resolve_target(population), ROUNDS),
        behavior=CALIBRATED_BEHAVIOR,
        seed=seed,
        replicates=_replicates(replicates),
    )

def visibility_base_config(seed: int = 0, replicates: Optional[int] = None) -> SimulationConfig:
    """A single against-advocating AI agent among 50 humans split evenly between favor and against."""
    mean, spread = CONTROL_ENTROPY
    population = generate_population(
        StanceDistribution.normalized(VISIBILITY_SHARES),
        entropy_mean=mean,
        entropy_spread=spread,
        n=VISIBILITY_HUMANS,
        seed=seed,
        topic="contested",
    )
    return SimulationConfig(
        rounds=ROUNDS,
        population=population,
        intervention=_intervention(Stance.AGAINST, ROUNDS, n_ai=1),
        behavior=VISIBILITY_BEHAVIOR,
        seed=seed,
        replicates=_replicates(replicates),
    )

def _require_intervention(base: SimulationConfig, name: str) -> None:
    if base.intervention is None:
        raise ScenarioError(f"scenario {name!r} needs a base config with an intervention")

def _expect(name: str, field: str, actual: Any, expected: Any) -> None:
    if actual != expected:
        logger.warning("Scenario %s expects %s = %s, base has %s", name, field, expected, actual)

def scenario_cross_topic(
    populations: Mapping[str, Sequence[AgentProfile]],
    rounds: int = ROUNDS,
    n_ai: int = N_AI,
    seed: int = 0,
    replicates: Optional[int] = None,
) -> List[Scenario]:
    """One paired scenario per topic: human-only vs. n_ai agents opposing the topic's polar majority."""
    scenarios = []
    for topic in sorted(populations):
        population = list(populations[topic])
        _expect(f"cross-topic-{topic}", "N_h", len(population), N_HUMANS)
        config = SimulationConfig(
            rounds=rounds,
            population=population,
            intervention=_intervention(resolve_target(population), rounds, n_ai),
            behavior=CALIBRATED_BEHAVIOR,
            seed=seed,
            replicates=_replicates(replicates),
        )
        scenarios.append(Scenario(name=f"cross-topic-{topic}", base_config=config))
    return scenarios

def scenario_count_sweep(base: SimulationConfig) -> Scenario:
    _require_intervention(base, "count-sweep")
    return Scenario(
        name="count-sweep",
        base_config=base,
        sweep=Sweep(path="intervention.n_ai", values=COUNT_VALUES),
        description="AI agent count from 0 to 160 on shared seeds",
    )

def scenario_frequency_sweep(base: SimulationConfig) -> Scenario:
    _require_intervention(base, "frequency-sweep")
    _expect("frequency-sweep", "n_ai", base.n_ai, N_AI)
    return Scenario(
        name="frequency-sweep",
        base_config=base,
        sweep=Sweep(path="intervention.post_period", values=PERIOD_VALUES),
        description="AI posting every 1st, 4th and 8th round",
    )

def scenario_withdrawal_sweep(base: SimulationConfig) -> Scenario:
    _require_intervention(base, "withdrawal-sweep")
    _expect("withdrawal-sweep", "n_ai", base.n_ai, N_AI)
    _expect("withdrawal-sweep", "rounds", base.rounds, ROUNDS)
    return Scenario(
        name="withdrawal-sweep",
        base_config=base,
        sweep=Sweep(path="intervention.activation_end", values=WITHDRAWAL_VALUES),
        report_persistence=True,
        description="AI agents removed at rounds 10, 20, 30 or kept to the end",
    )

def scenario_style_contrast(base: SimulationConfig) -> Scenario:
    _require_intervention(base, "style-contrast")
    _expect("style-contrast", "n_ai", base.n_ai, N_AI)
    return Scenario(
        name="style-contrast",
        base_config=base,
        sweep=Sweep(path="intervention.style", values=STYLE_VALUES),
        description="compassionate vs. condemnation framing, with entropy-tercile breakdown",
    )

def scenario_visibility_sweep(base: SimulationConfig) -> Scenario:
    _require_intervention(base, "visibility-sweep")
    _expect("visibility-sweep", "N_h", len(base.population), VISIBILITY_HUMANS)
    _expect("visibility-sweep", "n_ai", base.n_ai, 1)
    return Scenario(
        name="visibility-sweep",
        base_config=base,
        sweep=Sweep(path="intervention.visibility", values=VISIBILITY_VALUES),
        description="share of humans able to see AI posts",
    )

ScenarioFactory = Callable[[int, Optional[int]], List[Scenario]]

BUILTIN_SCENARIOS: Dict[str, ScenarioFactory] = {
    "cross-topic": lambda seed, reps: scenario_cross_topic(
        {topic: topic_population(topic, n=N_HUMANS, seed=seed) for topic in TOPIC_PRESETS},
        seed=seed,
        replicates=reps,
    ),
    "count-sweep": lambda seed, reps: [scenario_count_sweep(control_base_config(seed, reps))],
    "frequency-sweep": lambda seed, reps: [scenario_frequency_sweep(control_base_config(seed, reps))],
    "withdrawal-sweep": lambda seed, reps: [scenario_withdrawal_sweep(control_base_config(seed, reps))],
    "style-contrast": lambda seed, reps: [scenario_style_contrast(control_base_config(seed, reps))],
    "visibility-sweep": lambda seed, reps: [scenario_visibility_sweep(visibility_base_config(seed, reps))],
}

def builtin_scenarios(name: str, seed: int = 0, replicates: Optional[int] = None) -> List[Scenario]:
    if name not in BUILTIN_SCENARIOS:
        raise ScenarioError(f"unknown scenario {name!r}; built-ins: {', '.join(sorted(BUILTIN_SCENARIOS))}")
    return BUILTIN_SCENARIOS[name](seed, replicates)

def _population_files(document: Path, data: Mapping[str, Any], seed: int, replicates: Optional[int]) -> List[Scenario]:
    # topic -> population file, relative to the scenario document
    if data["builtin"] != "cross-topic":
        raise ScenarioError(f"'populations' only applies to the cross-topic scenario, not {data['builtin']!r}")
    files = data["populations"]
    if not isinstance(files, dict) or not files:
        raise ScenarioError(f"{document}: 'populations' must map topic names to population files")
    populations = {topic: load_population(document.parent / path) for topic, path in files.items()}
    logger.info("Loaded %d topic populations from %s", len(populations), document)
    return scenario_cross_topic(populations, seed=seed, replicates=replicates)

def _with_overrides(scenario: Scenario, overrides: Mapping[str, Any]) -> Scenario:
    config = scenario.base_config
    for path, value in overrides.items():
        config = apply_override(config, path, value)
    return scenario.model_copy(update={"base_config": config})

def load_scenario(
    ref: Union[str, Path],
    seed: Optional[int] = None,
    replicates: Optional[int] = None,
) -> List[Scenario]:
    """
    Resolves a scenario reference.

    ``ref`` is either a built-in name or a JSON file holding
    ``{"builtin": name, "overrides": {"dotted.path": value}}`` or an inline
    Scenario object. A cross-topic document may add ``"populations": {topic:
    path}`` to run saved population files instead of the generated presets.
    ``seed`` and ``replicates`` override the resolved configs.
    """
    name = str(ref)
    if name in BUILTIN_SCENARIOS:
        scenarios = builtin_scenarios(name, seed or 0, replicates)
    elif Path(name).is_file():
        try:
            data = load_json(name)
        except ValueError as e:
            raise ScenarioError(f"{name} is not valid JSON: {e}")
        if isinstance(data, dict) and "builtin" in data:
            base_seed = seed or data.get("seed", 0)
            if "populations" in data:
                scenarios = _population_files(Path(name), data, base_seed, replicates)
            else:
                scenarios = builtin_scenarios(data["builtin"], base_seed, replicates)
            scenarios = [_with_overrides(s, data.get("overrides", {})) for s in scenarios]
        else:
            try:
                scenarios = [Scenario.model_validate(data)]
            except ValidationError as e:
                raise ScenarioError(f"{name} is not a valid scenario: {e}")
    else:
        raise ScenarioError(f"unknown scenario {name!r}; built-ins: {', '.join(sorted(BUILTIN_SCENARIOS))}")
    updates: Dict[str, Any] = {}
    if seed is not None:
        updates["seed"] = seed
    if replicates is not None:
        updates["replicates"] = replicates
    if updates:
        scenarios = [
            s.model_copy(update={"base_config": s.base_config.model_copy(update=updates)}) for s in scenarios
        ]
    return scenarios
