import logging

from pathlib import Path
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np

from beliefdyn import __version__
from beliefdyn.core.config import Config
from beliefdyn.core.exceptions import ShapeMismatch
from beliefdyn.core.validation import validate_config
from beliefdyn.engine.io import stamp
from beliefdyn.engine.simulation import parallel_map, replicate_configs, run_simulation
from beliefdyn.experiments.population import resolve_target
from beliefdyn.experiments.scenarios import ai_posting_rounds, apply_override
from beliefdyn.metrics.distributions import (
    TERCILES,
    convergence_round,
    mean_distribution,
    summarize,
    tercile_distributions,
    terminal_distribution,
    trajectory,
)
from beliefdyn.metrics.transitions import pool_transitions, transition_matrix
from beliefdyn.models.reports import (
    ExperimentReport,
    LegResult,
    ReplicateSummary,
    Scenario,
    TransitionMatrix,
)
from beliefdyn.models.schemas import (
    STANCE_ORDER,
    AgentProfile,
    SimulationConfig,
    SimulationTrace,
    Stance,
    StanceDistribution,
)
from beliefdyn.utils.helpers import PathLike, digest_of, ensure_writable, load_json, save_json, write_csv

logger = logging.getLogger(__name__)

TERMINAL_HEADER = [
    "leg", "value", "config_digest", "replicates", "ai_ratio", "ai_posting_rounds",
    "favor_mean", "favor_sd", "ni_mean", "ni_sd", "against_mean", "against_sd",
    "delta_favor_pp", "delta_favor_sd", "delta_ni_pp", "delta_ni_sd", "delta_against_pp", "delta_against_sd",
    "convergence_mean", "convergence_sd", "persistence_pp",
]
TRAJECTORY_HEADER = ["leg", "round", "favor_share", "ni_share", "against_share"]
TRANSITION_HEADER = ["leg", "from", "to_favor", "to_ni", "to_against", "support"]

def summarize_replicate(trace: SimulationTrace, population: Sequence[AgentProfile]) -> ReplicateSummary:
    """Reduces a trace to the per-replicate numbers a sweep reports."""
    terciles = tercile_distributions(trace, population)
    return ReplicateSummary(
        seed=trace.seed,
        terminal=terminal_distribution(trace).as_array().tolist(),
        trajectory=[d.as_array().tolist() for d in trajectory(trace)],
        transitions=transition_matrix(trace).counts,
        terciles={name: d.as_array().tolist() for name, d in terciles.items()},
        convergence_round=convergence_round(trace),
    )

def _simulate_and_summarize(config: SimulationConfig) -> ReplicateSummary:
    # module level so worker processes can unpickle it
    return summarize_replicate(run_simulation(config), config.population)

class LegStore:
    """Per-leg replicate summaries under ``legs/<config digest>.json``; a missing root disables caching."""

    def __init__(self, root: Optional[PathLike] = None):
        self.root = Path(root) if root is not None else None

    def _path(self, digest: str) -> Optional[Path]:
        return self.root / f"{digest}.json" if self.root is not None else None

    def load(self, config: SimulationConfig) -> Optional[List[ReplicateSummary]]:
        path = self._path(config.digest())
        if path is None or not path.exists():
            return None
        try:
            data = load_json(path)
            summaries = [ReplicateSummary.model_validate(s) for s in data["replicates"]]
        except (ValueError, KeyError) as e:
            logger.warning("Ignoring unreadable leg file %s: %s", path, e)
            return None
        if data.get("config_digest") != config.digest() or len(summaries) != config.replicates:
            logger.warning("Ignoring stale leg file %s", path)
            return None
        return summaries

    def save(self, config: SimulationConfig, summaries: Sequence[ReplicateSummary]) -> None:
        path = self._path(config.digest())
        if path is None:
            return
        path.parent.mkdir(parents=True, exist_ok=True)
        save_json(path, {
            "config_digest": config.digest(),
            "version": __version__,
            "replicates": [s.model_dump(mode="json") for s in summaries],
        })

def run_leg(config: SimulationConfig, store: Optional[LegStore] = None, workers: Optional[int] = None) -> List[ReplicateSummary]:
    validate_config(config)
    store = store or LegStore()
    summaries = store.load(config)
    if summaries is not None:
        logger.info("Reusing %d replicates of leg %s", len(summaries), config.digest())
        return summaries
    summaries = parallel_map(_simulate_and_summarize, replicate_configs(config), workers)
    store.save(config, summaries)
    return summaries

def scenario_legs(scenario: Scenario) -> List[Tuple[str, Any, SimulationConfig]]:
    """(label, swept value, config) per leg; a scenario without a sweep has a single ``intervention`` leg."""
    if scenario.sweep is None:
        return [("intervention", None, scenario.base_config)]
    leaf = scenario.sweep.path.split(".")[-1]
    return [
        (f"{leaf}={value}", value, apply_override(scenario.base_config, scenario.sweep.path, value))
        for value in scenario.sweep.values
    ]

def scenario_target(scenario: Scenario) -> Stance:
    base = scenario.base_config
    if base.intervention is not None:
        return base.intervention.target_stance
    return resolve_target(base.population)

def leg_result(
    label: str,
    value: Any,
    config: SimulationConfig,
    summaries: Sequence[ReplicateSummary],
    baseline: Optional[Sequence[ReplicateSummary]],
    target: Stance,
    report_persistence: bool = False,
) -> LegResult:
    """
    Aggregates one leg over its replicates.

    Deltas are paired against ``baseline`` replicate by replicate; without a
    baseline they are measured against each replicate's initial distribution.
    """
    terminal = np.array([s.terminal for s in summaries])
    if baseline is not None:
        if len(baseline) != len(summaries):
            raise ShapeMismatch(f"{len(summaries)} replicates cannot be paired with {len(baseline)} baselines")
        reference = np.array([b.terminal for b in baseline])
    else:
        reference = np.array([s.trajectory[0] for s in summaries])
    delta_pp = 100.0 * (terminal - reference)
    delta = {s: summarize(delta_pp[:, s.index]) for s in STANCE_ORDER}

    tercile_delta = {}
    if baseline is not None:
        for name in TERCILES:
            if all(name in s.terciles for s in summaries) and all(name in b.terciles for b in baseline):
                diffs = [
                    100.0 * (s.terciles[name][target.index] - b.terciles[name][target.index])
                    for s, b in zip(summaries, baseline)
                ]
                tercile_delta[name] = summarize(diffs)

    n_ai = config.n_ai
    return LegResult(
        label=label,
        value=value,
        config_digest=config.digest(),
        seed=config.seed,
        replicates=len(summaries),
        ai_ratio=n_ai / (n_ai + len(config.population)),
        ai_posting_rounds=len(ai_posting_rounds(config.intervention, config.rounds)),
        terminal={s: summarize(terminal[:, s.index]) for s in STANCE_ORDER},
        delta=delta,
        trajectory=[
            mean_distribution([StanceDistribution.normalized(row) for row in rows])
            for rows in zip(*(s.trajectory for s in summaries))
        ],
        transitions=pool_transitions(TransitionMatrix.from_counts(s.transitions) for s in summaries),
        tercile_delta=tercile_delta,
        convergence_round=summarize([s.convergence_round for s in summaries]),
        persistence=delta[target] if report_persistence else None,
    )

def report_paths(out_dir: PathLike) -> List[Path]:
    out = Path(out_dir)
    return [out / name for name in (Config.REPORT_FILE, Config.TERMINAL_CSV, Config.TRAJECTORIES_CSV, Config.TRANSITIONS_CSV)]

def _all_legs(report: ExperimentReport) -> List[LegResult]:
    return ([report.baseline] if report.baseline is not None else []) + list(report.legs)

def write_report(out_dir: PathLike, report: ExperimentReport) -> None:
    report_file, terminal_csv, trajectories_csv, transitions_csv = report_paths(out_dir)
    comment = stamp(digest_of([leg.config_digest for leg in _all_legs(report)]))
    save_json(report_file, report.model_dump(mode="json"))

    terminal_rows = []
    for leg in _all_legs(report):
        row = [leg.label, "" if leg.value is None else leg.value, leg.config_digest, leg.replicates,
               leg.ai_ratio, leg.ai_posting_rounds]
        for s in STANCE_ORDER:
            row += [leg.terminal[s].mean, leg.terminal[s].sd]
        for s in STANCE_ORDER:
            row += [leg.delta[s].mean, leg.delta[s].sd]
        row += [leg.convergence_round.mean, leg.convergence_round.sd]
        row.append(leg.persistence.mean if leg.persistence is not None else "")
        terminal_rows.append(row)
    write_csv(terminal_csv, TERMINAL_HEADER, terminal_rows, comment=comment)

    write_csv(
        trajectories_csv,
        TRAJECTORY_HEADER,
        [[leg.label, t] + d.as_array().tolist() for leg in _all_legs(report) for t, d in enumerate(leg.trajectory)],
        comment=comment,
    )
    write_csv(
        transitions_csv,
        TRANSITION_HEADER,
        [
            [leg.label, s.value] + leg.transitions.row(s) + [leg.transitions.support[s.index]]
            for leg in _all_legs(report)
            for s in STANCE_ORDER
        ],
        comment=comment,
    )
    logger.info("Wrote %s report to %s", report.scenario, out_dir)

def run_scenario(
    scenario: Scenario,
    out_dir: Optional[PathLike] = None,
    force: bool = False,
    workers: Optional[int] = None,
) -> ExperimentReport:
    """
    Runs every leg of ``scenario`` plus its human-only baseline.

    With ``out_dir`` each leg's replicate summaries are saved as soon as they
    are computed and reused on the next call, so an interrupted sweep resumes
    where it stopped. Report files are only overwritten with ``force``.
    """
    if out_dir is not None:
        ensure_writable(report_paths(out_dir), force)
    store = LegStore(Path(out_dir) / Config.LEGS_DIR if out_dir is not None else None)
    target = scenario_target(scenario)

    baseline_result = None
    baseline = None
    if scenario.paired_baseline:
        baseline_config = scenario.base_config.model_copy(update={"intervention": None})
        baseline = run_leg(baseline_config, store, workers)
        baseline_result = leg_result("baseline", None, baseline_config, baseline, None, target)

    legs = []
    for label, value, config in scenario_legs(scenario):
        summaries = run_leg(config, store, workers)
        result = leg_result(label, value, config, summaries, baseline, target, scenario.report_persistence)
        logger.info(
            "%s %s: %s %+.2f pp (sd %.2f, n=%d)",
            scenario.name, label, target.value, result.delta[target].mean, result.delta[target].sd, result.delta[target].n,
        )
        legs.append(result)

    report = ExperimentReport(
        scenario=scenario.name,
        version=__version__,
        target_stance=target,
        replicates=scenario.base_config.replicates,
        baseline=baseline_result,
        legs=legs,
    )
    if out_dir is not None:
        Path(out_dir).mkdir(parents=True, exist_ok=True)
        write_report(out_dir, report)
    return report
