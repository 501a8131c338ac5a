import math

from typing import List

from beliefdyn.core.exceptions import (
    BadActivationWindow,
    ConfigError,
    ConfigValidationError,
    DuplicateAgentId,
    EmptyPopulation,
    EntropyOutOfRange,
    InvalidField,
    NonPositiveTemperature,
)
from beliefdyn.models.schemas import BehaviorParams, InterventionConfig, SimulationConfig

UINT64_MAX = (1 << 64) - 1

def _finite_non_negative(name: str, value: float, errors: List[ConfigError]) -> None:
    if not math.isfinite(value) or value < 0:
        errors.append(InvalidField(name, value, "must be finite and non-negative"))

def _behavior_errors(params: BehaviorParams) -> List[ConfigError]:
    errors: List[ConfigError] = []
    for name in ("w_social", "w_inertia", "smoothing", "compassion_gain", "condemnation_gain", "condemnation_base"):
        _finite_non_negative(f"behavior.{name}", getattr(params, name), errors)
    if params.smoothing == 0:
        errors.append(InvalidField("behavior.smoothing", params.smoothing, "must be strictly positive"))
    if not (params.temperature > 0) or not math.isfinite(params.temperature):
        errors.append(NonPositiveTemperature(params.temperature))
    if params.feed_size < 1:
        errors.append(InvalidField("behavior.feed_size", params.feed_size, "must be at least 1"))
    if not (0.0 <= params.consolidation < 1.0):
        errors.append(InvalidField("behavior.consolidation", params.consolidation, "must lie in [0, 1)"))
    return errors

def _intervention_errors(iv: InterventionConfig) -> List[ConfigError]:
    errors: List[ConfigError] = []
    if iv.n_ai < 0:
        errors.append(InvalidField("intervention.n_ai", iv.n_ai, "must be non-negative"))
    if iv.post_period < 1:
        errors.append(InvalidField("intervention.post_period", iv.post_period, "must be at least 1"))
    if iv.activation_start < 0:
        errors.append(InvalidField("intervention.activation_start", iv.activation_start, "must be non-negative"))
    if iv.activation_start >= iv.activation_end:
        errors.append(BadActivationWindow(iv.activation_start, iv.activation_end))
    if not (0.0 <= iv.visibility <= 1.0):
        errors.append(InvalidField("intervention.visibility", iv.visibility, "must lie in [0, 1]"))
    return errors

def validate_config(config: SimulationConfig) -> SimulationConfig:
    """
    Checks every invariant of a simulation config.

    Returns the config unchanged when it is well formed. Otherwise raises
    ConfigValidationError listing every violated field, population first.
    """
    errors: List[ConfigError] = []
    if not config.population:
        errors.append(EmptyPopulation())
    seen = set()
    for profile in config.population:
        if profile.id in seen:
            errors.append(DuplicateAgentId(profile.id))
        seen.add(profile.id)
        if not (0.0 <= profile.entropy <= 1.0):
            errors.append(EntropyOutOfRange(profile.id, profile.entropy))
    if config.rounds < 1:
        errors.append(InvalidField("rounds", config.rounds, "must be at least 1"))
    if config.replicates < 1:
        errors.append(InvalidField("replicates", config.replicates, "must be at least 1"))
    if not (0 <= config.seed <= UINT64_MAX):
        errors.append(InvalidField("seed", config.seed, "must be an unsigned 64-bit integer"))
    if config.intervention is not None:
        errors.extend(_intervention_errors(config.intervention))
    errors.extend(_behavior_errors(config.behavior))
    if errors:
        raise ConfigValidationError(errors)
    return config
