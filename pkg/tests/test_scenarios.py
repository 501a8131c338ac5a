import json

import numpy as np
import pytest

from pydantic import ValidationError

from beliefdyn.core.exceptions import ScenarioError
from beliefdyn.engine.io import save_population
from beliefdyn.engine.simulation import run_simulation
from beliefdyn.experiments.population import topic_population
from beliefdyn.experiments.scenarios import (
    BUILTIN_SCENARIOS,
    CALIBRATED_BEHAVIOR,
    ai_posting_rounds,
    apply_override,
    control_base_config,
    load_scenario,
    scenario_count_sweep,
    scenario_cross_topic,
    scenario_frequency_sweep,
    scenario_style_contrast,
    scenario_visibility_sweep,
    scenario_withdrawal_sweep,
    visibility_base_config,
)
from beliefdyn.models.reports import Scenario, Sweep
from beliefdyn.models.schemas import InterventionConfig, SimulationConfig, Stance, StyleTag

@pytest.fixture(scope="module")
def control():
    return control_base_config(seed=3, replicates=2)

def test_control_base_config(control):
    assert len(control.population) == 200 and control.rounds == 50
    assert control.intervention.n_ai == 80
    assert control.intervention.target_stance is Stance.AGAINST
    assert control.intervention.activation_end == 50
    assert control.behavior.consolidation == 0.2
    assert abs(np.mean([p.entropy for p in control.population]) - 0.5) < 0.06
    assert control.replicates == 2

def test_sweep_value_lists(control):
    assert scenario_count_sweep(control).sweep == Sweep(path="intervention.n_ai", values=[0, 5, 20, 40, 80, 160])
    assert scenario_frequency_sweep(control).sweep.values == [1, 4, 8]
    withdrawal = scenario_withdrawal_sweep(control)
    assert withdrawal.sweep.values == [10, 20, 30, 50] and withdrawal.report_persistence
    assert scenario_style_contrast(control).sweep.values == ["compassionate", "condemnation"]

def test_visibility_base():
    base = visibility_base_config(replicates=2)
    assert (len(base.population), base.n_ai) == (50, 1)
    stances = [p.initial_stance for p in base.population]
    assert abs(stances.count(Stance.FAVOR) - stances.count(Stance.AGAINST)) <= 1
    assert base.intervention.target_stance is Stance.AGAINST and base.behavior.temperature == 0.4
    assert scenario_visibility_sweep(base).sweep.values == [0.0, 0.5, 1.0]

def test_control_sweeps_need_an_intervention(control):
    with pytest.raises(ScenarioError):
        scenario_count_sweep(control.model_copy(update={"intervention": None}))

def test_cross_topic_targets():
    populations = {topic: topic_population(topic, n=200) for topic in ("abortion", "brexit")}
    scenarios = scenario_cross_topic(populations, replicates=2)
    targets = {s.name: s.base_config.intervention.target_stance for s in scenarios}
    assert targets == {"cross-topic-abortion": Stance.AGAINST, "cross-topic-brexit": Stance.FAVOR}
    assert all(s.base_config.intervention.n_ai == 80 and s.paired_baseline for s in scenarios)
    assert all(s.base_config.behavior == CALIBRATED_BEHAVIOR for s in scenarios)

def test_apply_override(control):
    updated = apply_override(control, "intervention.style", "condemnation")
    assert updated.intervention.style is StyleTag.CONDEMNATION
    assert apply_override(control, "rounds", 10).rounds == 10
    assert control.intervention.style is StyleTag.NEUTRAL

def test_apply_override_creates_missing_intervention(small_population):
    config = SimulationConfig(population=small_population)
    assert apply_override(config, "intervention.n_ai", 5).intervention == InterventionConfig(n_ai=5)

@pytest.mark.parametrize("path,value", [("intervention.speed", 1), ("behavior.temperature.x", 1), ("intervention.n_ai", "many")])
def test_bad_overrides(control, path, value):
    with pytest.raises(ScenarioError):
        apply_override(control, path, value)

def test_scenario_checks_sweep_values(small_config):
    with pytest.raises(ValidationError):
        Scenario(name="bad", base_config=small_config, sweep=Sweep(path="intervention.style", values=["shouting"]))

def test_posting_rounds():
    assert len(ai_posting_rounds(InterventionConfig(post_period=1), 50)) == 50
    assert ai_posting_rounds(InterventionConfig(post_period=8), 50) == [0, 8, 16, 24, 32, 40, 48]
    assert len(ai_posting_rounds(InterventionConfig(post_period=4), 50)) == 13
    assert ai_posting_rounds(InterventionConfig(post_period=60), 50) == [0]
    assert ai_posting_rounds(InterventionConfig(activation_end=10), 50) == list(range(10))
    assert ai_posting_rounds(InterventionConfig(activation_start=2, post_period=4, activation_end=9), 12) == [2, 6]
    assert ai_posting_rounds(None, 50) == []

def test_posting_slots_match_rounds_with_ai_posts(small_population):
    intervention = InterventionConfig(n_ai=3, post_period=3, activation_end=12)
    trace = run_simulation(SimulationConfig(rounds=12, population=small_population, intervention=intervention))
    with_ai = [r.round for r in trace.records if any(p.is_ai for p in r.posts)]
    assert with_ai == [t for t in ai_posting_rounds(intervention, 12) if t > 0] == [3, 6, 9]

def test_builtin_names():
    assert set(BUILTIN_SCENARIOS) == {
        "cross-topic", "count-sweep", "frequency-sweep", "withdrawal-sweep", "style-contrast", "visibility-sweep",
    }

def test_load_builtin_with_overrides():
    (scenario,) = load_scenario("count-sweep", seed=5, replicates=3)
    assert scenario.name == "count-sweep"
    assert (scenario.base_config.seed, scenario.base_config.replicates) == (5, 3)
    assert len(load_scenario("cross-topic", replicates=1)) == 4

def test_unknown_scenario_lists_builtins():
    with pytest.raises(ScenarioError) as info:
        load_scenario("count-sweeps")
    assert "count-sweep" in str(info.value) and "visibility-sweep" in str(info.value)

def test_load_scenario_file_with_builtin(tmp_path):
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps({"builtin": "visibility-sweep", "overrides": {"rounds": 5, "intervention.n_ai": 2}}))
    (scenario,) = load_scenario(path, replicates=2)
    assert (scenario.base_config.rounds, scenario.base_config.n_ai, scenario.base_config.replicates) == (5, 2, 2)

def test_load_inline_scenario(small_config, tmp_path):
    inline = Scenario(name="inline", base_config=small_config, sweep=Sweep(path="intervention.visibility", values=[0.0, 1.0]))
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(inline.model_dump(mode="json")))
    assert load_scenario(path) == [inline]

def test_malformed_scenario_file(tmp_path):
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps({"name": "x"}))
    with pytest.raises(ScenarioError):
        load_scenario(path)

def test_cross_topic_document_reads_population_files(tmp_path):
    (tmp_path / "pops").mkdir()
    save_population(tmp_path / "pops" / "brexit.jsonl", topic_population("brexit", n=40, seed=2))
    save_population(tmp_path / "pops" / "feminism.jsonl", topic_population("feminism", n=40, seed=2))
    path = tmp_path / "cross.json"
    path.write_text(json.dumps({
        "builtin": "cross-topic",
        "populations": {"brexit": "pops/brexit.jsonl", "feminism": "pops/feminism.jsonl"},
        "overrides": {"rounds": 5},
    }))
    scenarios = load_scenario(path, replicates=2)
    assert [s.name for s in scenarios] == ["cross-topic-brexit", "cross-topic-feminism"]
    assert scenarios[0].base_config.population == topic_population("brexit", n=40, seed=2)
    assert scenarios[0].base_config.intervention.target_stance is Stance.FAVOR
    assert all(s.base_config.rounds == 5 and s.base_config.replicates == 2 for s in scenarios)

def test_population_files_need_the_cross_topic_scenario(tmp_path):
    path = tmp_path / "count.json"
    path.write_text(json.dumps({"builtin": "count-sweep", "populations": {"abortion": "abortion.jsonl"}}))
    with pytest.raises(ScenarioError):
        load_scenario(path)
