import logging

from pathlib import Path
from typing import List

from beliefdyn import __version__
from beliefdyn.core.exceptions import InputError
from beliefdyn.models.schemas import (
    STANCE_ORDER,
    AgentProfile,
    RoundRecord,
    SimulationConfig,
    SimulationTrace,
    StanceDistribution,
)
from beliefdyn.utils.helpers import PathLike, load_json, read_jsonl, write_csv, write_jsonl

logger = logging.getLogger(__name__)

POPULATION_FIELDS = {"id", "topic", "initial_stance", "entropy"}
SUMMARY_HEADER = ["round", "favor_share", "ni_share", "against_share"]

def stamp(digest: str) -> str:
    return f"beliefdyn {__version__} config_digest={digest}"

def load_population(path: PathLike) -> List[AgentProfile]:
    profiles = []
    seen = set()
    for line_no, row in enumerate(read_jsonl(path), start=1):
        if set(row) != POPULATION_FIELDS:
            raise InputError(f"population rows need exactly the fields {sorted(POPULATION_FIELDS)}", line_no)
        profile = AgentProfile.model_validate(row)
        if profile.id in seen:
            raise InputError(f"duplicate agent id {profile.id!r}", line_no)
        seen.add(profile.id)
        profiles.append(profile)
    return profiles

def save_population(path: PathLike, profiles: List[AgentProfile]) -> None:
    write_jsonl(path, (p.model_dump(mode="json") for p in profiles))

def load_config(path: PathLike) -> SimulationConfig:
    """Parses a SimulationConfig document; ``population_file`` is resolved relative to the document."""
    data = load_json(path)
    if "population_file" in data:
        population_path = Path(path).parent / data.pop("population_file")
        data["population"] = [p.model_dump(mode="json") for p in load_population(population_path)]
    return SimulationConfig.model_validate(data)

def write_trace(path: PathLike, trace: SimulationTrace) -> None:
    header = {
        "type": "header",
        "config_digest": trace.config_digest,
        "seed": trace.seed,
        "version": __version__,
    }
    write_jsonl(path, [header] + [r.model_dump(mode="json") for r in trace.records])
    logger.info("Wrote trace %s (%d records)", path, len(trace.records))

def read_trace(path: PathLike) -> SimulationTrace:
    rows = list(read_jsonl(path))
    if not rows or rows[0].get("type") != "header":
        raise InputError(f"{path} is not a trace file: missing header line", 1)
    header = rows[0]
    return SimulationTrace(
        config_digest=header["config_digest"],
        seed=header["seed"],
        records=[RoundRecord.model_validate(r) for r in rows[1:]],
    )

def summary_rows(trace: SimulationTrace) -> List[list]:
    rows = []
    for record in trace.records:
        dist = StanceDistribution.from_stances(record.stances.values())
        rows.append([record.round] + [dist.share(s) for s in STANCE_ORDER])
    return rows

def write_summary(path: PathLike, trace: SimulationTrace) -> None:
    write_csv(path, SUMMARY_HEADER, summary_rows(trace), comment=stamp(trace.config_digest))
