from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from beliefdyn.utils.helpers import digest_of

SHARE_TOLERANCE = 1e-9


class Stance(str, Enum):
    FAVOR = "favor"
    NI = "ni"
    AGAINST = "against"

    @property
    def index(self) -> int:
        return STANCE_ORDER.index(self)

    def opposite(self) -> "Stance":
        """The other polar stance; NI has no opposite and maps to itself."""
        if self is Stance.FAVOR:
            return Stance.AGAINST
        if self is Stance.AGAINST:
            return Stance.FAVOR
        return self


STANCE_ORDER = (Stance.FAVOR, Stance.NI, Stance.AGAINST)


class StyleTag(str, Enum):
    NEUTRAL = "neutral"
    COMPASSIONATE = "compassionate"
    CONDEMNATION = "condemnation"


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class AgentProfile(_Frozen):
    id: str
    topic: str
    initial_stance: Stance
    entropy: float


class Post(_Frozen):
    author_id: str
    round: int = Field(ge=0)
    stance: Stance
    is_ai: bool = False
    style: StyleTag = StyleTag.NEUTRAL
    text: Optional[str] = None

    @model_validator(mode="after")
    def _human_posts_are_neutral(self) -> "Post":
        if not self.is_ai and self.style is not StyleTag.NEUTRAL:
            raise ValueError("human posts must use the neutral style")
        return self


class InterventionConfig(_Frozen):
    n_ai: int = 80
    target_stance: Stance = Stance.AGAINST
    post_period: int = 1
    activation_start: int = 0
    activation_end: int = 50
    style: StyleTag = StyleTag.NEUTRAL
    visibility: float = 1.0


class BehaviorParams(_Frozen):
    w_social: float = 1.0
    w_inertia: float = 0.5
    temperature: float = 0.25
    smoothing: float = 1.0
    feed_size: int = 20
    compassion_gain: float = 1.5
    condemnation_gain: float = 2.0
    condemnation_base: float = 0.5
    consolidation: float = 0.0


class SimulationConfig(_Frozen):
    rounds: int = 50
    population: List[AgentProfile]
    intervention: Optional[InterventionConfig] = None
    behavior: BehaviorParams = Field(default_factory=BehaviorParams)
    seed: int = 0
    replicates: int = 1

    def digest(self) -> str:
        return digest_of(self.model_dump(mode="json"))

    @property
    def n_ai(self) -> int:
        return self.intervention.n_ai if self.intervention is not None else 0


class StanceDistribution(_Frozen):
    favor: float
    ni: float
    against: float

    @model_validator(mode="after")
    def _is_distribution(self) -> "StanceDistribution":
        values = (self.favor, self.ni, self.against)
        if any(v < 0.0 or v > 1.0 for v in values):
            raise ValueError(f"stance shares must lie in [0, 1], got {values}")
        if abs(sum(values) - 1.0) > SHARE_TOLERANCE:
            raise ValueError(f"stance shares must sum to 1, got {sum(values)!r}")
        return self

    @classmethod
    def normalized(cls, values: Sequence[float]) -> "StanceDistribution":
        arr = np.asarray(values, dtype=float)
        if arr.shape != (3,) or (arr < 0).any() or arr.sum() <= 0:
            raise ValueError(f"cannot normalize {values!r} into a stance distribution")
        arr = arr / arr.sum()
        return cls(favor=float(arr[0]), ni=float(arr[1]), against=float(arr[2]))

    @classmethod
    def from_counts(cls, counts: Mapping[Stance, float]) -> "StanceDistribution":
        return cls.normalized([counts.get(s, 0) for s in STANCE_ORDER])

    @classmethod
    def from_stances(cls, stances: Iterable[Stance]) -> "StanceDistribution":
        counts = {s: 0 for s in STANCE_ORDER}
        for s in stances:
            counts[Stance(s)] += 1
        return cls.from_counts(counts)

    @classmethod
    def uniform(cls) -> "StanceDistribution":
        return cls.normalized([1.0, 1.0, 1.0])

    def share(self, stance: Stance) -> float:
        return (self.favor, self.ni, self.against)[Stance(stance).index]

    def as_array(self) -> np.ndarray:
        return np.array([self.favor, self.ni, self.against], dtype=float)


class RoundRecord(_Frozen):
    round: int
    stances: Dict[str, Stance]
    posts: List[Post] = Field(default_factory=list)


class SimulationTrace(_Frozen):
    config_digest: str
    seed: int
    records: List[RoundRecord]

    @property
    def rounds(self) -> int:
        return self.records[-1].round if self.records else 0

    @property
    def final(self) -> RoundRecord:
        return self.records[-1]

    def stance_history(self, agent_id: str) -> List[Stance]:
        return [r.stances[agent_id] for r in self.records]


class FeedView(_Frozen):
    posts: List[Post]
    weighted_shares: StanceDistribution


class HumanState(_Frozen):
    profile: AgentProfile
    current_stance: Stance
    tenure: int = 0


class VisibilityAssignment(_Frozen):
    exposed_ids: FrozenSet[str] = frozenset()

    def is_exposed(self, agent_id: str) -> bool:
        return agent_id in self.exposed_ids


class Observation(_Frozen):
    round: int
    feed: List[Post]
