import pytest

from beliefdyn.core.config import Config
from beliefdyn.experiments import runner
from beliefdyn.engine.simulation import run_replicates
from beliefdyn.experiments.runner import LegStore, leg_result, run_leg, run_scenario, scenario_legs
from beliefdyn.metrics import mean_distribution, pool_transitions, tercile_distributions, terminal_distribution, transition_matrix
from beliefdyn.models.reports import Scenario, Sweep
from beliefdyn.models.schemas import STANCE_ORDER, InterventionConfig, SimulationConfig, Stance
from beliefdyn.utils.helpers import read_csv_rows

@pytest.fixture
def sweep_scenario(population_factory):
    config = SimulationConfig(
        rounds=6,
        population=population_factory(n=24),
        intervention=InterventionConfig(n_ai=12, activation_end=6),
        seed=11,
        replicates=3,
    )
    return Scenario(name="tiny-count", base_config=config, sweep=Sweep(path="intervention.n_ai", values=[0, 12, 24]))

@pytest.fixture
def count_calls(monkeypatch):
    calls = []
    original = runner._simulate_and_summarize

    def counting(config):
        calls.append(config.digest())
        return original(config)

    monkeypatch.setattr(runner, "_simulate_and_summarize", counting)
    return calls

def test_report_structure(sweep_scenario):
    report = run_scenario(sweep_scenario, workers=1)
    assert report.scenario == "tiny-count"
    assert report.target_stance is Stance.AGAINST
    assert [leg.label for leg in report.legs] == ["n_ai=0", "n_ai=12", "n_ai=24"]
    assert report.baseline.label == "baseline"
    for leg in report.legs:
        assert leg.replicates == 3
        assert all(leg.terminal[s].n == 3 and leg.delta[s].n == 3 for s in STANCE_ORDER)
        assert len(leg.trajectory) == 7
        assert sum(leg.transitions.support) == 3 * 6 * 24
        assert set(leg.tercile_delta) == {"low", "mid", "high"}
    assert report.leg("n_ai=12").ai_ratio == pytest.approx(12 / 36)
    assert report.leg("n_ai=24").ai_posting_rounds == 6

def test_zero_count_leg_matches_baseline_exactly(sweep_scenario):
    report = run_scenario(sweep_scenario, workers=1)
    zero = report.leg("n_ai=0")
    assert all(zero.delta[s].mean == 0.0 and zero.delta[s].sd == 0.0 for s in STANCE_ORDER)
    assert zero.trajectory == report.baseline.trajectory
    assert zero.transitions == report.baseline.transitions

def test_legs_carry_their_config_digest(sweep_scenario):
    report = run_scenario(sweep_scenario, workers=1)
    digests = [config.digest() for _, _, config in scenario_legs(sweep_scenario)]
    assert [leg.config_digest for leg in report.legs] == digests
    assert len(set(digests)) == 3

def test_persistence_reported_when_requested(sweep_scenario):
    scenario = sweep_scenario.model_copy(update={
        "sweep": Sweep(path="intervention.activation_end", values=[2, 6]),
        "report_persistence": True,
    })
    report = run_scenario(scenario, workers=1)
    for leg in report.legs:
        assert leg.persistence == leg.delta[Stance.AGAINST]

def test_report_files(sweep_scenario, tmp_path):
    run_scenario(sweep_scenario, tmp_path, workers=1)
    for name in (Config.REPORT_FILE, Config.TERMINAL_CSV, Config.TRAJECTORIES_CSV, Config.TRANSITIONS_CSV):
        assert (tmp_path / name).exists()
    assert (tmp_path / Config.TERMINAL_CSV).read_text(encoding="utf-8").startswith("# beliefdyn ")
    terminal = read_csv_rows(tmp_path / Config.TERMINAL_CSV)
    assert [row[0] for row in terminal[1:]] == ["baseline", "n_ai=0", "n_ai=12", "n_ai=24"]
    assert len(read_csv_rows(tmp_path / Config.TRAJECTORIES_CSV)) == 1 + 4 * 7
    assert len(read_csv_rows(tmp_path / Config.TRANSITIONS_CSV)) == 1 + 4 * 3
    assert len(list((tmp_path / Config.LEGS_DIR).glob("*.json"))) == 4

def test_existing_report_needs_force(sweep_scenario, tmp_path):
    run_scenario(sweep_scenario, tmp_path, workers=1)
    with pytest.raises(FileExistsError):
        run_scenario(sweep_scenario, tmp_path, workers=1)
    run_scenario(sweep_scenario, tmp_path, force=True, workers=1)

def test_interrupted_sweep_resumes(sweep_scenario, tmp_path, count_calls):
    first = run_scenario(sweep_scenario, tmp_path, workers=1)
    assert len(count_calls) == 4 * 3
    # simulate a crash before the last leg and the report were written
    last = scenario_legs(sweep_scenario)[-1][2]
    (tmp_path / Config.LEGS_DIR / f"{last.digest()}.json").unlink()
    for name in (Config.REPORT_FILE, Config.TERMINAL_CSV, Config.TRAJECTORIES_CSV, Config.TRANSITIONS_CSV):
        (tmp_path / name).unlink()
    count_calls.clear()
    second = run_scenario(sweep_scenario, tmp_path, workers=1)
    assert len(count_calls) == 3
    assert second == first

def test_stale_leg_file_is_recomputed(sweep_scenario, tmp_path, count_calls):
    config = sweep_scenario.base_config
    store = LegStore(tmp_path)
    run_leg(config, store, workers=1)
    (tmp_path / f"{config.digest()}.json").write_text("{not json", encoding="utf-8")
    count_calls.clear()
    run_leg(config, store, workers=1)
    assert len(count_calls) == 3

def test_parallel_legs_match_sequential(sweep_scenario):
    assert run_leg(sweep_scenario.base_config, workers=2) == run_leg(sweep_scenario.base_config, workers=1)

def test_leg_pools_replicate_metrics(sweep_scenario):
    label, value, config = scenario_legs(sweep_scenario)[1]
    traces = run_replicates(config, workers=1)
    summaries = run_leg(config, workers=1)
    result = leg_result(label, value, config, summaries, None, Stance.AGAINST)
    assert result.transitions == pool_transitions(transition_matrix(t) for t in traces)
    expected_terminal = mean_distribution([terminal_distribution(t) for t in traces])
    assert result.trajectory[-1].as_array() == pytest.approx(expected_terminal.as_array())
    expected = tercile_distributions(traces[0], config.population)
    assert summaries[0].terciles == {name: d.as_array().tolist() for name, d in expected.items()}
