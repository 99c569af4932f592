from __future__ import annotations

import json

import pytest

from rigicount.cli import main
from rigicount.graph import Graph
from rigicount.psd import PartialPSDMatrix


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


@pytest.fixture
def files(tmp_path, fig1):
    paths = {}
    for name, g in (("fig1", fig1), ("k7", Graph.complete(7)), ("path", Graph.path(5)),
                    ("chain", Graph.complete(4).add_vertex([0, 1]).add_vertex([1, 4]))):
        p = tmp_path / f"{name}.txt"
        p.write_text(g.to_text())
        paths[name] = str(p)
    return paths


def test_certify_exit_codes(capsys, files):
    code, out = run(capsys, "certify", "--graph", files["k7"], "--d", "1")
    assert code == 0 and json.loads(out)["status"] == "certified-deterministic"
    code, out = run(capsys, "certify", "--graph", files["fig1"], "--d", "2")
    assert code == 2 and json.loads(out)["failed"] == "ordering-exists"
    code, _ = run(capsys, "certify", "--graph", files["path"], "--d", "2")
    assert code == 3
    code, out = run(capsys, "certify", "--graph", files["chain"], "--d", "2", "--spherical")
    assert json.loads(out)["kind"] == "spherical"


def test_usage_errors_exit_1(capsys, files, tmp_path):
    for argv in (["nonsense"], ["certify", "--graph", files["k7"]]):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 1
    bad = tmp_path / "bad.txt"
    bad.write_text("3 5\n0 1\n")
    assert main(["certify", "--graph", str(bad), "--d", "1"]) == 1
    assert main(["certify", "--graph", str(tmp_path / "missing"), "--d", "1"]) == 1


def test_seed_env_override(capsys, files, monkeypatch):
    monkeypatch.setenv("RIGICOUNT_SEED", "12")
    code, out = run(capsys, "random", "--n", "10", "--M", "20", "--json")
    assert json.loads(out)["seed"] == 12
    monkeypatch.setenv("RIGICOUNT_SEED", "twelve")
    assert main(["random", "--n", "10"]) == 1


def test_random_and_core(capsys, tmp_path):
    code, out = run(capsys, "random", "--n", "30", "--d", "2", "--seed", "4")
    g = Graph.from_text(out)
    assert code == 0 and g.n == 30 and g.min_degree() == 2
    p = tmp_path / "g.txt"
    p.write_text(out)
    code, out = run(capsys, "core", "--graph", str(p), "--k", "3")
    res = json.loads(out)
    assert res["size"] == len(res["core"]) and all(deg < 3 for _, deg in res["removed"])
    code, out = run(capsys, "random", "--n", "4", "--ordering", "--seed", "1")
    assert out.splitlines()[0] == "4" and len(out.splitlines()) == 7
    code, out = run(capsys, "random", "--n", "8", "--p", "0.5", "--samples", "3")
    assert len(out.splitlines()) == 3


def test_order_and_rigidity(capsys, files):
    code, out = run(capsys, "order", "--graph", files["fig1"], "--d", "1", "--exact-neighbourly")
    res = json.loads(out)
    assert code == 0 and (res["s"], res["t"]) == (5, 5) and res["neighbourly"]["verdict"] == "holds"
    code, out = run(capsys, "order", "--graph", files["fig1"], "--d", "2")
    assert code == 2 and json.loads(out)["status"] == "failure"
    code, out = run(capsys, "rigidity", "--graph", files["fig1"], "--d", "2", "--global")
    res = json.loads(out)
    assert res["rigid"] and not res["global"] and res["rank"] == 7 and "trials" in res


def test_enumerate(capsys, files, tmp_path):
    code, out = run(capsys, "enumerate", "--graph", files["fig1"], "--d", "2", "--seed", "3")
    res = json.loads(out)
    assert code == 0 and res["count"] == 4 and len(res["solutions"][0]) == 5
    code, out = run(capsys, "enumerate", "--graph", files["fig1"], "--d", "2", "--search", "8")
    assert json.loads(out)["complex_counts"] == [4]
    lengths = tmp_path / "len.txt"
    lengths.write_text("".join(f"{u} {v} 1.0\n" for u, v in Graph.complete(3).sorted_edges()))
    tri = tmp_path / "tri.txt"
    tri.write_text(Graph.complete(3).to_text())
    code, out = run(capsys, "enumerate", "--graph", str(tri), "--d", "2", "--lengths", str(lengths),
                    "--field", "real")
    assert code == 0 and json.loads(out)["count"] == 1
    cyc = tmp_path / "c5.txt"
    cyc.write_text(Graph.cycle(5).to_text())
    code, out = run(capsys, "enumerate", "--graph", str(cyc), "--d", "2")
    assert code == 2 and json.loads(out)["status"] == "unsupported"


def test_psd_commands(capsys, tmp_path):
    code, out = run(capsys, "psd", "sample", "--n", "6", "--d", "2", "--M", "12", "--seed", "2")
    m = tmp_path / "A.txt"
    m.write_text(out)
    A = PartialPSDMatrix.from_text(out)
    assert A.n == 6 and A.graph.m == 12
    code, out = run(capsys, "psd", "core", "--matrix", str(m))
    assert json.loads(out)["k"] == 3
    code, out = run(capsys, "psd", "normalize", "--matrix", str(m))
    assert len(out.splitlines()) == 12
    code, out = run(capsys, "psd", "predict", "--matrix", str(m))
    pred = json.loads(out)["predicted"]
    code, out = run(capsys, "psd", "complete", "--matrix", str(m), "--field", "real")
    res = json.loads(out)
    assert code == 0 and res["predicted"] == pred and res["count"] >= 1
    assert main(["psd", "core"]) == 1


def test_props_command(capsys, files):
    code, out = run(capsys, "props", "--graph", files["fig1"], "--check", "adjacency", "--exact")
    assert json.loads(out)["verdict"] == "fails"
    code, out = run(capsys, "props", "--graph", files["k7"], "--check", "sparsity", "--exact")
    assert json.loads(out)["witness"]["clause"] == "small-sets"
    code, out = run(capsys, "props", "--graph", files["k7"], "--check", "core", "--k", "3", "--eps", "0.5")
    assert json.loads(out)["verdict"] == "holds"
    assert main(["props", "--graph", files["k7"], "--check", "core"]) == 1


def test_experiment_command(capsys, tmp_path):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("n=30\nd=2\nsamples=3\nseed=1\nm_rule=hitting\n")
    out_csv = tmp_path / "out.csv"
    code, _ = run(capsys, "experiment", "--config", str(cfg), "--out", str(out_csv))
    text = out_csv.read_text()
    assert code == 0 and text.startswith("#schema=1\n") and "#aggregate n=30 samples=3" in text
    code, out = run(capsys, "experiment", "--config", str(cfg))
    assert out == text
