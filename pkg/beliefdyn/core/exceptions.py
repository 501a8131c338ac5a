from typing import Any, List, Optional


class BeliefDynError(Exception):
    """Base class for every error raised by beliefdyn."""


class ConfigError(BeliefDynError, ValueError):
    """A single violated invariant of a simulation config."""

    def __init__(self, field: str, value: Any, message: str):
        self.field = field
        self.value = value
        super().__init__(f"{field}: {message} (got {value!r})")


class EmptyPopulation(ConfigError):
    def __init__(self):
        super().__init__("population", [], "population must contain at least one agent")


class EntropyOutOfRange(ConfigError):
    def __init__(self, agent_id: str, entropy: float):
        self.agent_id = agent_id
        super().__init__(f"population[{agent_id}].entropy", entropy, "entropy must lie in [0, 1]")


class BadActivationWindow(ConfigError):
    def __init__(self, start: int, end: int):
        self.start = start
        self.end = end
        super().__init__(
            "intervention.activation_end",
            end,
            f"activation_start ({start}) must be lower than activation_end",
        )


class NonPositiveTemperature(ConfigError):
    def __init__(self, temperature: float):
        super().__init__("behavior.temperature", temperature, "temperature must be strictly positive")


class DuplicateAgentId(ConfigError):
    def __init__(self, agent_id: str):
        super().__init__("population.id", agent_id, "agent ids must be unique")


class InvalidField(ConfigError):
    pass


class ConfigValidationError(BeliefDynError, ValueError):
    """Raised by validate_config with every violated field collected in ``errors``."""

    def __init__(self, errors: List[ConfigError]):
        self.errors = list(errors)
        lines = "\n".join(f"  - {e}" for e in self.errors)
        super().__init__(f"invalid simulation config ({len(self.errors)} error(s)):\n{lines}")


class MetricError(BeliefDynError, ValueError):
    pass


class InsufficientTrace(MetricError):
    pass


class DegenerateMarginals(MetricError):
    pass


class ShapeMismatch(MetricError):
    pass


class AdapterError(BeliefDynError, RuntimeError):
    def __init__(self, message: str, round: Optional[int] = None):
        self.round = round
        where = f" at round {round}" if round is not None else ""
        super().__init__(f"{message}{where}")


class AdapterTimeout(AdapterError):
    pass


class AdapterProtocolError(AdapterError):
    pass


class ScenarioError(BeliefDynError, ValueError):
    pass


class InfeasibleRounding(BeliefDynError, ValueError):
    pass


class InputError(BeliefDynError, ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")
