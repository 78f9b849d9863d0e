import json

import pytest

from expsum_cs.cli import main
from expsum_cs.experiments import ExperimentConfig, run_experiment
from expsum_cs.group_fourier import Signal
from expsum_cs.recovery import basis_pursuit, measure
from expsum_cs.tail_bounds import BoundQuery, paper_example_table, paper_table_csv, report


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bounds_theorem3(capsys):
    code, out, _ = run(capsys, "bounds", "--name", "theorem3", "--N", "997", "--T", "2", "--C", "3")
    assert code == 0
    data = json.loads(out)
    assert data["n_implied"] == 332
    assert data["failure_bound"] == pytest.approx(1.677e-5, rel=1e-3)
    assert data == report("theorem3", BoundQuery(N=997, T=2, C=3.0)).to_json()


def test_bounds_non_prime(capsys):
    code, _, err = run(capsys, "bounds", "--name", "theorem2", "--N", "6", "--n", "10", "--delta", "0.5")
    assert code == 2 and "N must be prime >= 5" in err


def test_bounds_theorem1(capsys):
    code, out, _ = run(capsys, "bounds", "--name", "theorem1", "--M", "1", "--n", "100",
                       "--delta", "0.5", "--nu", "4")
    assert code == 0
    assert json.loads(out)["failure_bound"] == pytest.approx(1.4907e-5, rel=1e-4)


def test_bounds_csv(capsys):
    code, out, _ = run(capsys, "bounds", "--name", "theorem1", "--M", "1", "--n", "100",
                       "--delta", "0.5", "--format", "csv")
    header, row = out.splitlines()
    assert header.startswith("bound_name,failure_bound")
    assert row.startswith("theorem1,")


def test_unknown_flag(capsys):
    with pytest.raises(SystemExit) as e:
        main(["bounds", "--name", "theorem1", "--bogus", "1"])
    assert e.value.code == 2


def test_paper_table(capsys):
    code, out, _ = run(capsys, "paper-table")
    assert code == 0
    assert out == paper_table_csv(paper_example_table())
    lines = out.splitlines()
    assert len(lines) == 3
    assert "paper prints n=242; formula gives 221" in lines[1]
    C, n, p, _ = lines[2].split(",", 3)
    assert (C, n) == ("3.0", "332") and float(p) < 4.4e-5


def test_sample_and_certify(capsys, tmp_path):
    f = tmp_path / "s.json"
    code, _, _ = run(capsys, "sample", "--model", "occupation", "--N", "31", "--param", "20",
                     "--seed", "3", "--out", str(f))
    assert code == 0
    data = json.loads(f.read_text())
    assert len(data["draw"]) == 20
    code, out, _ = run(capsys, "certify", "--N", "31", "--T", "1", "--draw", str(f))
    assert code == 0 and set(json.loads(out)) >= {"holds", "margin"}
    code, out, _ = run(capsys, "sample", "--model", "occupation", "--N", "5", "--param", "2",
                       "--distribution")
    assert out.splitlines() == ["k,probability", "1,0.2", "2,0.8"]


def test_recover(capsys, tmp_path):
    x = Signal.indicator(13, 4, 1.5)
    meas = measure(x, range(0, 13, 2))
    f = tmp_path / "m.json"
    f.write_text(json.dumps(meas.to_json()))
    code, out, _ = run(capsys, "recover", str(f))
    assert code == 0
    data = json.loads(out)
    assert data == json.loads(json.dumps(basis_pursuit(meas).to_json()))
    assert data["status"] == "Converged"


def test_experiment_reproducible(capsys, tmp_path):
    cfg = tmp_path / "tail2.json"
    cfg.write_text(json.dumps({"experiment": "Tail2", "params": {"N": 31, "n": 60, "delta": 0.5},
                               "trials": 1000, "master_seed": 1}))
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(capsys, "experiment", str(cfg), "--out", str(a))[0] == 0
    assert run(capsys, "experiment", str(cfg), "--out", str(b), "--workers", "2")[0] == 0
    for name in ("trials.csv", "summary.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    direct = run_experiment(ExperimentConfig.load(cfg))
    assert (a / "summary.csv").read_text() == direct.files["summary.csv"]


def test_experiment_bad_config(capsys, tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"experiment": "Tail2", "params": {"N": 4, "n": 60, "delta": 0.5}}))
    assert run(capsys, "experiment", str(cfg))[0] == 2
    assert run(capsys, "experiment", str(tmp_path / "missing.json"))[0] == 2


def test_experiment_violation_exit_code(capsys, tmp_path, monkeypatch):
    import expsum_cs.cli as cli_mod

    real = cli_mod.run_experiment

    def broken(cfg):
        out = real(cfg)
        out.dominance_ok = False
        return out

    monkeypatch.setattr(cli_mod, "run_experiment", broken)
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"experiment": "PaperTable", "params": {}}))
    assert run(capsys, "experiment", str(cfg), "--out", str(tmp_path / "o"))[0] == 3
