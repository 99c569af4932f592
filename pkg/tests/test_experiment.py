from __future__ import annotations

import pytest

from rigicount.experiment import COLUMNS, ExperimentConfig, parse_csv, run_experiment


def test_shape_contract(tmp_path):
    out = tmp_path / "run.csv"
    cfg = ExperimentConfig(n=(100,), d=2, samples=50, seed=0, output=str(out))
    text = run_experiment(cfg)
    assert out.read_text() == text
    lines = text.splitlines()
    assert lines[0] == "#schema=1"
    rows, aggs = parse_csv(text)
    assert len(rows) == 50 and list(rows[0]) == COLUMNS
    assert [r["index"] for r in rows] == [str(i) for i in range(50)]
    assert len(aggs) == 1 and aggs[0]["samples"] == "50"
    cert = sum(r["status"].startswith("certified") for r in rows)
    assert aggs[0]["certified"] == str(cert)
    for r in rows:
        assert r["seed"] == str(int(r["index"]))
        if r["status"].startswith("certified"):
            assert int(r["exponent"]) == 100 - int(r["core_d1"])


def test_byte_identical_reruns():
    cfg = ExperimentConfig(n=(40, 60), d=2, samples=8, seed=11)
    assert run_experiment(cfg) == run_experiment(cfg)
    parallel = ExperimentConfig(n=(40, 60), d=2, samples=8, seed=11, workers=3)
    assert run_experiment(parallel) == run_experiment(cfg)


def test_failures_are_rows_not_aborts():
    # M beyond C(n,2) makes graph_at raise for every sample
    cfg = ExperimentConfig(n=(10,), d=1, samples=4, m_rule="fixed:999")
    rows, aggs = parse_csv(run_experiment(cfg))
    assert len(rows) == 4 and all(r["status"] == "error" for r in rows)
    assert aggs[0]["error"] == "4"


def test_m_rules():
    base = dict(n=(30,), d=1, samples=3, seed=5)
    hit, _ = parse_csv(run_experiment(ExperimentConfig(**base)))
    off, _ = parse_csv(run_experiment(ExperimentConfig(**base, m_rule="hitting+10")))
    fixed, _ = parse_csv(run_experiment(ExperimentConfig(**base, m_rule="fixed:100")))
    assert [int(a["M"]) + 10 for a in hit] == [int(b["M"]) for b in off]
    assert all(r["M"] == "100" for r in fixed)
    with pytest.raises(ValueError):
        ExperimentConfig(m_rule="sometimes")


def test_config_round_trip(tmp_path):
    cfg = ExperimentConfig(n=(50, 100), d=3, samples=7, seed=9, m_rule="hitting+2",
                           output="x.csv", workers=2, timing=True)
    assert ExperimentConfig.from_text(cfg.to_text()) == cfg
    with pytest.raises(ValueError):
        ExperimentConfig.from_text("colour=blue\n")


def test_timing_column_optional():
    rows, _ = parse_csv(run_experiment(ExperimentConfig(n=(20,), d=1, samples=2, timing=True)))
    assert all(float(r["wall_time"]) >= 0 for r in rows)
    rows, _ = parse_csv(run_experiment(ExperimentConfig(n=(20,), d=1, samples=2)))
    assert all(r["wall_time"] == "" for r in rows)
