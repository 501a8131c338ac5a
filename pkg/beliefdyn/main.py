"""
Command-line entry point.

Exit status is 0 on success, 2 on user or config errors and 3 when an external
adapter fails.
"""

import argparse
import csv
import json
import logging
import sys

from contextlib import ExitStack
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from pydantic import ValidationError

from beliefdyn import __version__
from beliefdyn.core.config import Config
from beliefdyn.core.exceptions import AdapterError, BeliefDynError, InputError
from beliefdyn.core.validation import validate_config
from beliefdyn.engine.io import load_config, read_trace, save_population, stamp, summary_rows, write_summary, write_trace
from beliefdyn.engine.simulation import replicate_configs, run_replicates, run_simulation
from beliefdyn.experiments.population import (
    entropy_summary,
    generate_population,
    profiles_from_histories,
    topic_distribution,
)
from beliefdyn.experiments.runner import run_scenario
from beliefdyn.experiments.scenarios import load_scenario
from beliefdyn.metrics import (
    accuracy,
    attractor,
    cohen_kappa,
    confusion_matrix,
    distribution_delta,
    inflow,
    js_divergence,
    macro_f1,
    terminal_distribution,
    transition_matrix,
)
from beliefdyn.models.adapter import connect_adapter
from beliefdyn.models.reports import TransitionMatrix
from beliefdyn.models.schemas import STANCE_ORDER, AgentProfile, SimulationConfig, SimulationTrace, Stance, StanceDistribution
from beliefdyn.utils.helpers import ensure_writable, load_json, save_json, write_csv

logger = logging.getLogger("beliefdyn")

EXIT_OK = 0
EXIT_USER_ERROR = 2
EXIT_ADAPTER_ERROR = 3

def _emit(data) -> None:
    print(json.dumps(data, indent=2))

def _parse_triple(text: str) -> StanceDistribution:
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise InputError(f"expected three comma-separated numbers (favor,ni,against), got {text!r}")
    if len(values) != 3:
        raise InputError(f"expected three comma-separated numbers (favor,ni,against), got {text!r}")
    try:
        return StanceDistribution.normalized(values)
    except ValueError as e:
        raise InputError(str(e))

def _parse_stance(token: str, line: int) -> Stance:
    try:
        return Stance(token.strip().lower())
    except ValueError:
        raise InputError(f"unknown stance token {token.strip()!r}; expected favor, ni or against", line)

def _read_label_pairs(path: str) -> Tuple[List[Stance], List[Stance]]:
    gold, pred = [], []
    with open(path, "r", encoding="utf-8", newline="") as f:
        for line_no, row in enumerate(csv.reader(f), start=1):
            if not row or not "".join(row).strip():
                continue
            if line_no == 1 and [c.strip().lower() for c in row] == ["gold", "predicted"]:
                continue
            if len(row) != 2:
                raise InputError(f"expected 2 columns (gold,predicted), got {len(row)}", line_no)
            gold.append(_parse_stance(row[0], line_no))
            pred.append(_parse_stance(row[1], line_no))
    return gold, pred

def _read_labels(path: str) -> List[Stance]:
    labels = []
    with open(path, "r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if line.strip():
                labels.append(_parse_stance(line, line_no))
    return labels

def _run_outputs(out: Path, as_json: bool) -> List[Path]:
    paths = [out / Config.TRACE_FILE, out / Config.SUMMARY_FILE, out / Config.TERMINAL_FILE]
    if as_json:
        paths.append(out / Config.SUMMARY_JSON_FILE)
    return paths

def _write_run(out: Path, trace: SimulationTrace, as_json: bool) -> None:
    out.mkdir(parents=True, exist_ok=True)
    write_trace(out / Config.TRACE_FILE, trace)
    write_summary(out / Config.SUMMARY_FILE, trace)
    header = {"config_digest": trace.config_digest, "seed": trace.seed, "version": __version__}
    save_json(out / Config.TERMINAL_FILE, {**header, "terminal": terminal_distribution(trace).model_dump()})
    if as_json:
        rows = [dict(zip(("round", "favor_share", "ni_share", "against_share"), r)) for r in summary_rows(trace)]
        save_json(out / Config.SUMMARY_JSON_FILE, {**header, "rounds": rows})

def _overrides(config: SimulationConfig, args) -> SimulationConfig:
    updates = {}
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.replicates is not None:
        updates["replicates"] = args.replicates
    return config.model_copy(update=updates) if updates else config

def cmd_run(args) -> int:
    config = validate_config(_overrides(load_config(args.config), args))
    out = Path(args.out)
    as_json = args.format == "json"
    if config.replicates == 1:
        targets = [(out, config)]
    else:
        targets = [(out / f"replicate-{k:03d}", c) for k, c in enumerate(replicate_configs(config))]
    ensure_writable([p for d, _ in targets for p in _run_outputs(d, as_json)], args.force)

    logger.info("Run %s: %d humans, %d AI agents, %d rounds, %d replicate(s)",
                config.digest(), len(config.population), config.n_ai, config.rounds, config.replicates)
    with ExitStack() as stack:
        adapters = [
            stack.enter_context(connect_adapter(addr, agent_id=f"ext-{i}", role=args.adapter_role))
            for i, addr in enumerate(args.adapter or [])
        ]
        if config.replicates == 1:
            _write_run(out, run_simulation(config, adapters), as_json)
        elif adapters:
            for directory, replicate in targets:
                _write_run(directory, run_simulation(replicate, adapters), as_json)
        else:
            for (directory, _), trace in zip(targets, run_replicates(config)):
                _write_run(directory, trace, as_json)
    logger.info("Wrote %d run(s) to %s", len(targets), out)
    return EXIT_OK

def cmd_sweep(args) -> int:
    scenarios = load_scenario(args.scenario, seed=args.seed, replicates=args.replicates)
    out = Path(args.out) if args.out else Path(Config.OUTPUT_DIR) / str(args.scenario).replace("/", "_")
    results = {}
    for scenario in scenarios:
        target_dir = out / scenario.name if len(scenarios) > 1 else out
        report = run_scenario(scenario, target_dir, force=args.force)
        results[scenario.name] = {
            "target_stance": report.target_stance.value,
            "delta_pp": {
                leg.label: {"mean": leg.delta[report.target_stance].mean, "sd": leg.delta[report.target_stance].sd,
                            "n": leg.delta[report.target_stance].n}
                for leg in report.legs
            },
        }
    _emit(results)
    return EXIT_OK

def _matrix_json(matrix: TransitionMatrix) -> dict:
    return {
        **matrix.model_dump(),
        "inflow": {s.value: v for s, v in inflow(matrix).items()},
        "attractor": attractor(matrix).value,
    }

def cmd_compare(args) -> int:
    baseline, run = read_trace(args.baseline), read_trace(args.run)
    base_dist, run_dist = terminal_distribution(baseline), terminal_distribution(run)
    _emit({
        "version": __version__,
        "baseline": {"config_digest": baseline.config_digest, "terminal": base_dist.model_dump(),
                     "transitions": _matrix_json(transition_matrix(baseline))},
        "run": {"config_digest": run.config_digest, "terminal": run_dist.model_dump(),
                "transitions": _matrix_json(transition_matrix(run))},
        "delta_pp": {s.value: v for s, v in distribution_delta(run_dist, base_dist).items()},
        "jsd": js_divergence(run_dist, base_dist),
    })
    return EXIT_OK

def _observed_population(args) -> List[AgentProfile]:
    if args.shares is not None:
        raise InputError("--histories and --shares cannot be combined")
    histories = load_json(args.histories)
    if not isinstance(histories, dict):
        raise InputError(f"{args.histories} must map agent ids to stance lists")
    profiles = profiles_from_histories(args.topic or "observed", histories)
    if not profiles:
        raise InputError(f"{args.histories} holds no non-empty history")
    return profiles

def cmd_gen_population(args) -> int:
    if args.histories:
        ensure_writable([args.out], args.force)
        profiles = _observed_population(args)
    else:
        if (args.topic is None) == (args.shares is None):
            raise InputError("give exactly one of --topic or --shares")
        shares = topic_distribution(args.topic) if args.topic else _parse_triple(args.shares)
        ensure_writable([args.out], args.force)
        profiles = generate_population(
            shares,
            entropy_mean=args.entropy_mean,
            entropy_spread=args.entropy_spread,
            n=args.n,
            seed=args.seed,
            topic=args.topic or "synthetic",
        )
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    save_population(args.out, profiles)
    mean, spread = entropy_summary(profiles)
    logger.info("Wrote %d agents to %s (entropy mean %.3f, sd %.3f)", len(profiles), args.out, mean, spread)
    return EXIT_OK

def cmd_transition_matrix(args) -> int:
    trace = read_trace(args.trace)
    matrix = transition_matrix(trace)
    if args.format == "json":
        text = json.dumps(
            {"config_digest": trace.config_digest, "version": __version__, **_matrix_json(matrix)}, indent=2
        )
        if args.out:
            ensure_writable([args.out], args.force)
            Path(args.out).write_text(text + "\n", encoding="utf-8")
        else:
            print(text)
        return EXIT_OK
    header = ["from", "to_favor", "to_ni", "to_against", "support"]
    rows = [[s.value] + matrix.row(s) + [matrix.support[s.index]] for s in STANCE_ORDER]
    if args.out:
        ensure_writable([args.out], args.force)
        write_csv(args.out, header, rows, comment=stamp(trace.config_digest))
    else:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(header)
        writer.writerows([[r[0]] + [Config.FLOAT_FORMAT.format(v) for v in r[1:4]] + [r[4]] for r in rows])
    return EXIT_OK

def cmd_agreement(args) -> int:
    if args.file:
        gold, pred = _read_label_pairs(args.file)
    elif args.gold and args.pred:
        gold, pred = _read_labels(args.gold), _read_labels(args.pred)
        if len(gold) != len(pred):
            raise InputError(f"gold has {len(gold)} labels but predictions have {len(pred)}")
    else:
        raise InputError("give a two-column FILE or both --gold and --pred")
    cm = confusion_matrix(gold, pred)
    _emit({
        "n": cm.total,
        "accuracy": accuracy(cm),
        "kappa": cohen_kappa(cm),
        "macro_f1": macro_f1(cm),
        "confusion_matrix": cm.counts,
    })
    return EXIT_OK

def cmd_jsd(args) -> int:
    print(Config.FLOAT_FORMAT.format(js_divergence(_parse_triple(args.p), _parse_triple(args.q))))
    return EXIT_OK

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="beliefdyn", description="Belief dynamics under AI-agent interventions.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=Config.LOG_LEVEL, help="Logging level (default from BELIEFDYN_LOG_LEVEL).")
    subparsers = parser.add_subparsers(dest="command", required=True)

    run = subparsers.add_parser("run", help="Simulate one config and write trace, summary and terminal files.")
    run.add_argument("--config", required=True, help="SimulationConfig JSON document.")
    run.add_argument("--out", default=Config.OUTPUT_DIR, help="Output directory.")
    run.add_argument("--seed", type=int)
    run.add_argument("--replicates", type=int)
    run.add_argument("--force", action="store_true", help="Overwrite existing output files.")
    run.add_argument("--adapter", action="append", metavar="ADDR", help="External agent at tcp://HOST:PORT or stdio:COMMAND.")
    run.add_argument("--adapter-role", choices=["ai", "human"], default="ai")
    run.add_argument("--format", choices=["csv", "json"], default="csv")
    run.set_defaults(func=cmd_run)

    sweep = subparsers.add_parser("sweep", help="Run a built-in or file-defined scenario with paired baselines.")
    sweep.add_argument("--scenario", required=True, help="Built-in scenario name or scenario JSON file.")
    sweep.add_argument("--out")
    sweep.add_argument("--seed", type=int)
    sweep.add_argument("--replicates", type=int)
    sweep.add_argument("--force", action="store_true")
    sweep.set_defaults(func=cmd_sweep)

    compare = subparsers.add_parser("compare", help="Compare two trace files.")
    compare.add_argument("--baseline", required=True)
    compare.add_argument("--run", required=True)
    compare.set_defaults(func=cmd_compare)

    gen = subparsers.add_parser("gen-population", help="Generate a synthetic population file.")
    gen.add_argument("--topic", help="Topic preset name, or the topic label of --histories.")
    gen.add_argument("--shares", help="favor,ni,against shares.")
    gen.add_argument("--histories", help="JSON object mapping agent ids to observed stance lists.")
    gen.add_argument("--n", type=int, default=200)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--entropy-mean", type=float, default=0.35)
    gen.add_argument("--entropy-spread", type=float, default=0.2)
    gen.add_argument("--out", required=True)
    gen.add_argument("--force", action="store_true")
    gen.set_defaults(func=cmd_gen_population)

    tm = subparsers.add_parser("transition-matrix", help="Estimate the stance transition matrix of a trace.")
    tm.add_argument("--trace", required=True)
    tm.add_argument("--out")
    tm.add_argument("--format", choices=["csv", "json"], default="csv")
    tm.add_argument("--force", action="store_true")
    tm.set_defaults(func=cmd_transition_matrix)

    agreement = subparsers.add_parser("agreement", help="Accuracy, Cohen's kappa and macro-F1 of two labelings.")
    agreement.add_argument("file", nargs="?", help="CSV with gold,predicted columns.")
    agreement.add_argument("--gold")
    agreement.add_argument("--pred")
    agreement.set_defaults(func=cmd_agreement)

    jsd = subparsers.add_parser("jsd", help="Jensen-Shannon divergence (base 2) of two stance distributions.")
    jsd.add_argument("--p", required=True)
    jsd.add_argument("--q", required=True)
    jsd.set_defaults(func=cmd_jsd)
    return parser

def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format="%(asctime)s - %(name)s - %(levelname)s - %(message)s")
    try:
        return args.func(args)
    except AdapterError as e:
        logger.error("Adapter failure: %s", e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ADAPTER_ERROR
    except (BeliefDynError, ValidationError, FileExistsError, FileNotFoundError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USER_ERROR

if __name__ == "__main__":
    sys.exit(main())
