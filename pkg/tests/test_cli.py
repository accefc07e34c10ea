import csv
import io
import json

import pytest

from algtn import circuit as qc
from algtn import cli
from algtn import network as nw
from conftest import delta4_circuit, one_qubit


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def files(tmp_path, x_circuit, h_circuit):
    paths = {}
    for name, C in (("x", x_circuit), ("h", h_circuit), ("d4", delta4_circuit())):
        p = tmp_path / f"{name}.json"
        p.write_text(qc.dumps(C))
        paths[name] = str(p)
    return paths


def test_simulate_x_gate(capsys, files):
    code, out, _ = run(capsys, "simulate", files["x"], "--assign", "x=0")
    assert code == 0
    rep = json.loads(out)
    assert rep["rows"][0]["network"] == pytest.approx(1.0, abs=1e-12)
    assert rep["max_deviation"] <= 1e-9


def test_simulate_h_csv(capsys, files):
    code, out, _ = run(capsys, "simulate", files["h"], "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 2
    assert all(abs(float(r["network"]) - 0.5) < 1e-12 for r in rows)


def test_malformed_json(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"vertices": [\n  {"id": 0,,}]}')
    code, _, err = run(capsys, "simulate", str(p))
    assert code == cli.EXIT_PARSE
    assert "line 2" in err and "column" in err


def test_invalid_circuit(capsys, tmp_path, x_circuit):
    d = qc.to_json(x_circuit)
    d["vertices"][0]["in_ports"] = [2]
    p = tmp_path / "invalid.json"
    p.write_text(json.dumps(d))
    code, _, err = run(capsys, "convert", str(p))
    assert code == cli.EXIT_VALIDATE and err


def test_qubit_cap(capsys, tmp_path):
    b = qc.CircuitBuilder()
    for _ in range(3):
        b.input("ket0")
    b.measure_all()
    p = tmp_path / "wide.json"
    p.write_text(qc.dumps(b.build()))
    code, _, _ = run(capsys, "simulate", str(p), "--max-qubits", "2")
    assert code == cli.EXIT_VALIDATE


def test_missing_input_and_bad_seed(capsys):
    assert run(capsys, "convert")[0] == cli.EXIT_PARSE
    assert run(capsys, "verify", "--seed", "-1")[0] == cli.EXIT_PARSE
    assert run(capsys, "nonsense")[0] == cli.EXIT_PARSE


def test_convert_decomp_reduce_roundtrip(capsys, tmp_path, files):
    net = tmp_path / "d4.net.json"
    code, out, _ = run(capsys, "convert", files["d4"], "--out", str(net))
    assert code == 0 and json.loads(out)["oracle_check"]["max_deviation"] <= 1e-9
    N = nw.loads(net.read_text())
    assert nw.validate(N) == []

    cdp = tmp_path / "cd.json"
    code, out, _ = run(capsys, "decomp", str(net), "--out", str(cdp))
    rep = json.loads(out)
    assert code == 0 and rep["carving_width_upper"] >= 1

    code, out, _ = run(capsys, "reduce", str(net), "--ys", "x1,x2", "--beta", "y1=0,y2=1",
                       "--decomposition", str(cdp))
    assert code == 0
    rep = json.loads(out)
    stats = rep["stats"]
    for key in ("l", "w", "size_bound", "rank_bound", "size_out", "rank_out", "violations", "decomposition"):
        assert key in stats
    assert stats["decomposition"] == "given"
    assert stats["size_out"] <= stats["size_bound"]
    R = nw.from_json(rep["reduced"])
    got = [round(nw.value(R, {"x1": a, "x2": b}), 9) for a in (0, 1) for b in (0, 1)]
    assert got == [1.0, 0.0, 1.0, 1.0]


def test_reduce_heuristic_noted(capsys, files):
    code, out, _ = run(capsys, "reduce", files["x"])
    assert code == 0
    assert json.loads(out)["stats"]["decomposition"] == "heuristic"


def test_reduce_bad_beta(capsys, files):
    code, _, _ = run(capsys, "reduce", files["d4"], "--ys", "x1,x2", "--beta", "y1=0")
    assert code == cli.EXIT_VALIDATE


def test_decomp_exact(capsys, files):
    code, out, _ = run(capsys, "decomp", files["x"], "--exact")
    rep = json.loads(out)
    # input, gate, output is a path on three vertices
    assert code == 0 and rep["carving_width_exact"] == 2


def test_distinct(capsys):
    code, out, _ = run(capsys, "distinct", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["k"] for r in rows] == ["2", "4"]
    assert json.loads(rows[0]["counts"]) == [4, 4]
    assert set(json.loads(rows[1]["counts"])) == {561}


def test_verify_zero_count(capsys):
    code, out, _ = run(capsys, "verify", "--count", "0")
    rep = json.loads(out)
    assert code == 0 and rep["properties"] == [] and rep["passed"]


def test_verify_mutation_caught(capsys):
    code, out, _ = run(capsys, "verify", "--count", "8", "--mutate", "--seed", "3")
    assert code != 0
    rep = json.loads(out)
    failed = [p for p in rep["properties"] if not p["passed"]]
    assert failed and failed[0]["counterexample"] is not None


def test_verify_deterministic(capsys):
    a = run(capsys, "verify", "--count", "4", "--seed", "17")
    b = run(capsys, "verify", "--count", "4", "--seed", "17")
    assert a[0] == 0 and a[1] == b[1]


def test_bench(capsys):
    code, out, _ = run(capsys, "bench", "--count", "2", "--max-qubits", "4")
    rows = json.loads(out)["rows"]
    assert code == 0 and len(rows) == 2 and "carving_seconds" in rows[0]


def test_run_config():
    cfg = cli.config_from_args(cli.build_parser().parse_args(["simulate", "c.json", "--seed", "5"]))
    assert cfg.subcommand == "simulate" and cfg.inputs == ["c.json"] and cfg.seed == 5
    assert cfg.fmt == "json" and cfg.tolerance == 1e-9
    with pytest.raises(cli.CliError):
        cli.RunConfig("verify", [], None, 1 << 64, 1e-9, 6, "json", {})


def test_identity_measure_circuit(capsys, tmp_path):
    p = tmp_path / "i.json"
    p.write_text(qc.dumps(one_qubit("H", "ket0", M=qc.MEASUREMENTS["I"])))
    code, out, _ = run(capsys, "simulate", str(p))
    assert code == 0 and json.loads(out)["rows"][0]["oracle"] == pytest.approx(1.0)
