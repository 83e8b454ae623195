"""Command-line interface: formats, exit codes, determinism, round-trips."""

import io
import json
import math
import subprocess

import pytest

from trotterlab.cli import main
from trotterlab.pauli import pauli_from_json


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ------------------------------------------------------------ model


def test_model_round_trip_preserves_order(tmp_path, capsys):
    path = tmp_path / "h.json"
    code, _, _ = run(
        capsys, "model", "--family", "chain-heisenberg", "--n", "4", "--out", str(path)
    )
    assert code == 0
    doc = json.loads(path.read_text())
    h = pauli_from_json(doc)
    assert [t.string.label() for t in h.terms] == [t["pauli"] for t in doc["terms"]]
    assert [t.coeff.real for t in h.terms] == [t["coeff"] for t in doc["terms"]]
    # Re-serialize: identical document.
    code, out, _ = run(capsys, "model", "--family", "chain-heisenberg", "--n", "4")
    assert json.loads(out) == doc


def test_model_syk_requires_seed(capsys):
    code, _, err = run(capsys, "model", "--family", "k-local-syk", "--n", "4", "--k", "2")
    assert code == 2
    assert "--seed" in err


def test_model_syk_deterministic(capsys):
    argv = ("model", "--family", "k-local-syk", "--n", "4", "--k", "2", "--seed", "9")
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    assert code1 == code2 == 0
    assert out1 == out2


def test_model_missing_family_parameter(capsys):
    code, _, err = run(capsys, "model", "--family", "power-law", "--n", "4", "--d", "1")
    assert code == 2
    assert "--alpha" in err


# ------------------------------------------------------------ norms


def test_pipeline_zxyz_norm_profile(tmp_path, capsys):
    path = tmp_path / "zxyz.json"
    run(capsys, "model", "--family", "zxyz", "--m", "2", "--out", str(path))
    code, out, _ = run(capsys, "norms", str(path))
    assert code == 0
    prof = json.loads(out)
    assert prof["gamma"] == 8
    assert prof["k"] == 2
    assert prof["c_q_norms"]["0,2"] == pytest.approx(2.0 * math.sqrt(2.0))
    assert prof["c_q_norms"]["1,2"] == pytest.approx(2.0)
    assert prof["c_q_norms"]["1,1"] == pytest.approx(4.0)
    assert prof["c_q_norms"]["2,2"] == pytest.approx(1.0)
    assert prof["lambda_ferm"] is None


def test_norms_reads_stdin(capsys, monkeypatch):
    doc = {"n": 2, "terms": [{"pauli": "ZZ", "coeff": 2.0}]}
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(doc)))
    code, out, _ = run(capsys, "norms", "-")
    assert code == 0
    assert json.loads(out)["c_q_norms"]["0,2"] == pytest.approx(2.0)


def test_norms_fermionic_profile(tmp_path, capsys):
    path = tmp_path / "fh.json"
    run(capsys, "model", "--family", "fermi-hop", "--m", "2", "--out", str(path))
    assert json.loads(path.read_text())["eta"] == 0.5
    code, out, _ = run(capsys, "norms", str(path))
    assert code == 0
    prof = json.loads(out)
    assert prof["ferm_zero_two"] == pytest.approx(4.0)
    assert prof["lambda_ferm"] == pytest.approx(prof["lambda"] + 8.0)


def test_console_script_pipeline():
    proc = subprocess.run(
        ["sh", "-c", "trotterlab model --family zxyz --m 2 | trotterlab norms -"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["gamma"] == 8


# ---------------------------------------------------------- schedule


def test_schedule_gamma_flag_second_order(capsys):
    code, out, _ = run(capsys, "schedule", "--gamma", "2", "--order", "2", "--t", "0.5")
    assert code == 0
    steps = json.loads(out)
    assert steps == [
        {"gamma": 2, "coeff": 0.25},
        {"gamma": 1, "coeff": 0.5},
        {"gamma": 2, "coeff": 0.25},
    ]


def test_schedule_from_file_first_order(tmp_path, capsys):
    path = tmp_path / "h.json"
    run(capsys, "model", "--family", "chain-heisenberg", "--n", "3", "--out", str(path))
    code, out, _ = run(capsys, "schedule", str(path), "--order", "1", "--t", "0.1")
    assert code == 0
    steps = json.loads(out)
    gamma = len(json.loads(path.read_text())["terms"])
    assert [s["gamma"] for s in steps] == list(range(1, gamma + 1))
    assert all(s["coeff"] == pytest.approx(0.1) for s in steps)


def test_schedule_requires_one_source(tmp_path, capsys):
    code, _, err = run(capsys, "schedule", "--order", "1", "--t", "0.1")
    assert code == 2 and "exactly one" in err
    path = tmp_path / "h.json"
    run(capsys, "model", "--family", "chain-heisenberg", "--n", "3", "--out", str(path))
    code, _, err = run(
        capsys, "schedule", str(path), "--gamma", "3", "--order", "1", "--t", "0.1"
    )
    assert code == 2 and "exactly one" in err


# --------------------------------------------------------- gatecount


@pytest.fixture()
def chain8(tmp_path, capsys):
    path = tmp_path / "chain8.json"
    run(capsys, "model", "--family", "chain-heisenberg", "--n", "8", "--out", str(path))
    return str(path)


def test_gatecount_chain8_defaults(chain8, capsys):
    code, out, _ = run(
        capsys, "gatecount", chain8, "--t", "1", "--eps", "0.1", "--delta", "0.1"
    )
    assert code == 0
    res = json.loads(out)
    assert res["regime"] == "nonrandom-typical"
    assert res["r"] == 11436
    assert res["p_star"] == pytest.approx(2.0)
    assert res["gate_count"] == pytest.approx(2 * 21 * 11436)
    assert res["feasible"] is True
    assert res["asymptotic"] is False
    assert res["diagnostics"]["p_star_floored"] is True


def test_gatecount_empty_hamiltonian(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO('{"n": 3, "terms": []}'))
    code, out, _ = run(
        capsys,
        "gatecount",
        "-",
        "--regime",
        "first-order-random-fixed",
        "--order",
        "1",
        "--t",
        "1",
        "--eps",
        "0.1",
    )
    assert code == 0
    res = json.loads(out)
    assert res["gate_count"] == 0.0
    assert res["r"] == 0


def test_gatecount_first_order_regime_rejects_order_two(chain8, capsys):
    code, _, err = run(
        capsys,
        "gatecount",
        chain8,
        "--regime",
        "first-order-random-fixed",
        "--order",
        "2",
        "--t",
        "1",
        "--eps",
        "0.1",
    )
    assert code == 2
    assert err.startswith("error:")


def test_gatecount_p_override(chain8, capsys):
    code, out, _ = run(
        capsys, "gatecount", chain8, "--t", "1", "--eps", "0.1", "--p", "4"
    )
    assert code == 0
    assert json.loads(out)["p_star"] == pytest.approx(4.0)


# ---------------------------------------------------------- simulate


def test_simulate_csv_schema(tmp_path, capsys):
    path = tmp_path / "h.json"
    run(capsys, "model", "--family", "chain-heisenberg", "--n", "3", "--out", str(path))
    code, out, _ = run(
        capsys,
        "simulate",
        str(path),
        "--seed",
        "7",
        "--samples",
        "20",
        "--t",
        "0.5",
        "--r",
        "2",
        "--order",
        "2",
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "# schema=trotterlab-csv-1"
    assert lines[1] == "quantity,p,value,bound,margin,seed"
    rows = [line.split(",") for line in lines[2:]]
    assert all(len(row) == 6 for row in rows)
    assert all(row[5] == "7" for row in rows)
    quantities = {row[0] for row in rows}
    assert {"spectral", "mean-error", "exact-pnorm", "expected-pnorm"} <= quantities
    markov = [row for row in rows if row[0].startswith("markov-tail")]
    assert markov and all(row[3] != "" for row in markov)


def test_simulate_deterministic_bytes(tmp_path, capsys):
    h = tmp_path / "h.json"
    run(capsys, "model", "--family", "chain-heisenberg", "--n", "3", "--out", str(h))
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ("simulate", str(h), "--seed", "5", "--samples", "30", "--t", "0.4",
            "--ensemble", "haar")
    assert run(capsys, *argv, "--out", str(a))[0] == 0
    assert run(capsys, *argv, "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_simulate_random_family(capsys):
    code, out, _ = run(
        capsys,
        "simulate",
        "--family",
        "k-local-syk",
        "--n",
        "4",
        "--k",
        "2",
        "--seed",
        "11",
        "--samples",
        "15",
        "--t",
        "0.3",
    )
    assert code == 0
    rows = [line.split(",") for line in out.splitlines()[2:]]
    violations = [row for row in rows if row[0] == "trace-distance-violations"]
    assert violations and violations[0][2] == "0"


def test_simulate_requires_one_input(tmp_path, capsys):
    code, _, err = run(capsys, "simulate", "--seed", "1", "--t", "0.5")
    assert code == 2 and "exactly one" in err
    h = tmp_path / "h.json"
    run(capsys, "model", "--family", "chain-heisenberg", "--n", "3", "--out", str(h))
    code, _, err = run(
        capsys, "simulate", str(h), "--family", "zxyz", "--m", "1",
        "--seed", "1", "--t", "0.5",
    )
    assert code == 2 and "exactly one" in err


# ------------------------------------------------------------ verify


def test_verify_suzuki_rows(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "suzuki", "--seed", "1")
    assert code == 0
    rows = {r[0]: r for r in (line.split(",") for line in out.splitlines()[2:])}
    assert abs(float(rows["q2"][4])) < 1e-12
    for order, expected in ((1, 1), (2, 2), (4, 10), (6, 50)):
        row = rows[f"upsilon-order{order}"]
        assert row[2] == str(expected) and row[4] == "0"


def test_verify_optimality_margins(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "optimality", "--seed", "1")
    assert code == 0
    rows = [line.split(",") for line in out.splitlines()[2:]]
    spin = [r for r in rows if r[0].startswith("commutator-")]
    fermi = [r for r in rows if r[0].startswith("fermi-")]
    assert len(spin) == 8 and len(fermi) == 4
    assert all(abs(float(r[4])) < 1e-9 for r in spin)
    # Measured fermionic norms sit below the claimed closed forms.
    assert all(float(r[4]) < 0 for r in fermi)


def test_verify_zero_violations_and_determinism(capsys):
    argv = ("verify", "--suite", "smoothness", "--trials", "25", "--seed", "2")
    code, out1, _ = run(capsys, *argv)
    assert code == 0
    rows = [line.split(",") for line in out1.splitlines()[2:]]
    assert all(row[2] == "0" for row in rows)  # violation counts
    _, out2, _ = run(capsys, *argv)
    assert out1 == out2


# ---------------------------------------------------------- truncate


def test_truncate_chain4(capsys):
    code, out, _ = run(
        capsys, "truncate", "--n", "4", "--d", "1", "--alpha", "2", "--t", "1",
        "--eps", "2",
    )
    assert code == 0
    plan = json.loads(out)
    assert plan["ell_cut"] == 1
    assert plan["residual_norm"] == pytest.approx(
        math.sqrt(1.0 / 8.0 + 1.0 / 81.0), abs=1e-6
    )
    assert plan["feasible"] is True
    assert plan["t"] * plan["residual_norm"] <= plan["eps"]


def test_truncate_divergent_tail_exits_3(capsys):
    code, _, err = run(
        capsys, "truncate", "--n", "4", "--d", "1", "--alpha", "0.5", "--t", "1",
        "--eps", "0.1",
    )
    assert code == 3
    assert "error:" in err


# ------------------------------------------------------------ table1


def test_table1_every_cell(capsys):
    code, out, _ = run(capsys, "table1")
    assert code == 0
    cells = json.loads(out)
    assert len(cells) == 25
    methods = {c["method"] for c in cells}
    assert len(methods) == 8
    assert all(c["asymptotic"] is True for c in cells)


def test_table1_klocal_family(capsys):
    code, out, _ = run(capsys, "table1", "--family", "k-local-uniform", "--k", "2")
    assert code == 0
    cells = {c["method"]: c for c in json.loads(out)}
    assert len(cells) == 8
    assert cells["qdrift"]["n_exponent"] == pytest.approx(3.0)
    assert cells["qubitization"]["n_exponent"] == pytest.approx(3.5)
    assert cells["higher-order-fixed"]["n_exponent"] == pytest.approx(2.0)
    assert cells["first-order-fixed"]["n_exponent"] == pytest.approx(2.5)


# -------------------------------------------------------- lowerbound


def test_lowerbound_chain_values(capsys):
    code, out, _ = run(capsys, "lowerbound", "--n", "8", "--k", "2", "--eps", "0.1")
    assert code == 0
    est = json.loads(out)
    assert est["gamma"] == 28
    assert est["net_size"] == 19
    assert est["vacuous"] is False


# -------------------------------------------------------- exit codes


def test_malformed_json_reports_line_and_column(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO('{"n": 2, "terms": [{"pauli":'))
    code, _, err = run(capsys, "norms", "-")
    assert code == 2
    assert "line 1" in err and "column" in err


def test_missing_file_exits_2(capsys):
    code, _, err = run(capsys, "norms", "/nonexistent/h.json")
    assert code == 2
    assert "no such file" in err
