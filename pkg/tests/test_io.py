import json

import pytest

from beliefdyn.core.exceptions import InputError
from beliefdyn.engine.io import (
    load_config,
    load_population,
    read_trace,
    save_population,
    write_summary,
    write_trace,
)
from beliefdyn.engine.simulation import run_simulation
from beliefdyn.utils.helpers import ensure_writable, read_csv_rows

def test_population_round_trip(small_population, tmp_path):
    path = tmp_path / "population.jsonl"
    save_population(path, small_population)
    assert load_population(path) == small_population
    first = json.loads(path.read_text(encoding="utf-8").splitlines()[0])
    assert set(first) == {"id", "topic", "initial_stance", "entropy"}

def test_population_extra_field_names_line(tmp_path):
    path = tmp_path / "population.jsonl"
    rows = [
        {"id": "u1", "topic": "t", "initial_stance": "favor", "entropy": 0.2},
        {"id": "u2", "topic": "t", "initial_stance": "ni", "entropy": 0.2, "age": 40},
    ]
    path.write_text("\n".join(json.dumps(r) for r in rows) + "\n", encoding="utf-8")
    with pytest.raises(InputError) as info:
        load_population(path)
    assert info.value.line == 2

def test_population_duplicate_ids(tmp_path):
    path = tmp_path / "population.jsonl"
    row = {"id": "u1", "topic": "t", "initial_stance": "favor", "entropy": 0.2}
    path.write_text(json.dumps(row) + "\n" + json.dumps(row) + "\n", encoding="utf-8")
    with pytest.raises(InputError, match="duplicate"):
        load_population(path)

def test_config_with_population_file(small_config, tmp_path):
    (tmp_path / "pops").mkdir()
    save_population(tmp_path / "pops" / "p.jsonl", small_config.population)
    document = small_config.model_dump(mode="json")
    del document["population"]
    document["population_file"] = "pops/p.jsonl"
    (tmp_path / "config.json").write_text(json.dumps(document), encoding="utf-8")
    assert load_config(tmp_path / "config.json") == small_config

def test_trace_round_trip(small_config, tmp_path):
    trace = run_simulation(small_config)
    write_trace(tmp_path / "trace.jsonl", trace)
    header = json.loads((tmp_path / "trace.jsonl").read_text(encoding="utf-8").splitlines()[0])
    assert header["type"] == "header" and header["config_digest"] == small_config.digest()
    assert read_trace(tmp_path / "trace.jsonl") == trace

def test_read_trace_requires_header(tmp_path):
    path = tmp_path / "trace.jsonl"
    path.write_text('{"round": 0, "stances": {}}\n', encoding="utf-8")
    with pytest.raises(InputError):
        read_trace(path)

def test_summary_csv(small_config, tmp_path):
    path = tmp_path / "summary.csv"
    write_summary(path, run_simulation(small_config))
    raw = path.read_bytes()
    assert b"\r\n" not in raw
    lines = raw.decode("utf-8").splitlines()
    assert lines[0].startswith("# beliefdyn ") and small_config.digest() in lines[0]
    rows = read_csv_rows(path)
    assert rows[0] == ["round", "favor_share", "ni_share", "against_share"]
    assert len(rows) == small_config.rounds + 2
    assert rows[1][0] == "0"
    assert all(len(v.split(".")[1]) == 6 for v in rows[1][1:])

def test_ensure_writable(tmp_path):
    target = tmp_path / "report.json"
    assert ensure_writable([target]) == []
    target.write_text("{}", encoding="utf-8")
    with pytest.raises(FileExistsError):
        ensure_writable([target])
    assert ensure_writable([target], force=True) == [target]
