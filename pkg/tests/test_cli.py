"""Command-line interface: schemas, exit codes, determinism."""

import json
import math
import subprocess
import sys

import pytest
from click.testing import CliRunner

from bosonic.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(main, list(args), catch_exceptions=False)


def write_state(tmp_path, name, payload):
    p = tmp_path / name
    p.write_text(json.dumps(payload))
    return str(p)


def thermal_file(tmp_path, runner, photons, name="state.json"):
    res = invoke(runner, "state", "thermal", "--n", str(photons))
    assert res.exit_code == 0
    p = tmp_path / name
    p.write_text(res.output)
    return str(p)


def test_state_thermal_payload(runner):
    res = invoke(runner, "state", "thermal", "--n", "1")
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert payload == {"modes": 1, "mean": [0.0, 0.0], "cov": [[3.0, 0.0], [0.0, 3.0]]}


def test_state_photon_tmsv(runner, tmp_path):
    res = invoke(runner, "state", "tmsv", "--n", "1")
    p = tmp_path / "tmsv.json"
    p.write_text(res.output)
    res2 = invoke(runner, "state", "photon", str(p))
    assert res2.exit_code == 0
    assert json.loads(res2.output) == 2.0


def test_state_validate_failure_exit_code(runner, tmp_path):
    bad = write_state(tmp_path, "bad.json",
                      {"modes": 1, "mean": [0.0, 0.0], "cov": [[0.5, 0.0], [0.0, 0.5]]})
    res = runner.invoke(main, ["state", "validate", bad])
    assert res.exit_code == 2
    report = json.loads(res.output)
    assert report["ok"] is False
    assert report["uncertainty_margin"] == pytest.approx(-0.5, abs=1e-12)


def test_state_evolve_and_reduce(runner, tmp_path):
    tmsv = thermal_file(tmp_path, runner, 0.0)
    res = invoke(runner, "state", "evolve", tmsv, "--displace", "1.0,0.0")
    assert res.exit_code == 0
    moved = json.loads(res.output)
    assert moved["mean"] == [1.0, 0.0]
    # reduce on the tmsv gives the thermal marginal
    res_t = invoke(runner, "state", "tmsv", "--n", "1")
    p = tmp_path / "pair.json"
    p.write_text(res_t.output)
    res2 = invoke(runner, "state", "reduce", str(p), "--keep", "0")
    marg = json.loads(res2.output)
    assert marg["cov"] == [[3.0, 0.0], [0.0, 3.0]]
    # evolve with two transforms at once is a domain error
    res3 = runner.invoke(main, ["state", "evolve", str(p), "--beam-splitter", "0.5",
                                "--displace", "1,0"])
    assert res3.exit_code == 2


def test_parse_error_exit_one(runner, tmp_path):
    p = tmp_path / "garbage.json"
    p.write_text("{not json")
    res = runner.invoke(main, ["state", "photon", str(p)])
    assert res.exit_code == 1
    res2 = runner.invoke(main, ["state", "photon", str(tmp_path / "missing.json")])
    assert res2.exit_code == 1


def test_tail_command(runner, tmp_path):
    t1 = thermal_file(tmp_path, runner, 1.0)
    res = invoke(runner, "tail", t1, "--m", "10")
    payload = json.loads(res.output)
    assert payload["cutoff"] == 10
    assert payload["closed"] == pytest.approx(0.2088, abs=1e-3)
    assert payload["optimized"] <= payload["closed"]
    res2 = invoke(runner, "tail", t1, "--target-eps", "0.01")
    payload2 = json.loads(res2.output)
    assert payload2["optimized"] <= 0.01
    res3 = runner.invoke(main, ["tail", t1])
    assert res3.exit_code == 2
    res4 = runner.invoke(main, ["tail", t1, "--m", "5", "--target-eps", "0.1"])
    assert res4.exit_code == 2


def test_tracedist_command(runner, tmp_path):
    vac = thermal_file(tmp_path, runner, 0.0, "vac.json")
    t1 = thermal_file(tmp_path, runner, 1.0, "t1.json")
    res = invoke(runner, "tracedist", vac, t1, "--eps", "1e-3")
    payload = json.loads(res.output)
    assert set(payload) == {"estimate", "certified_error", "cutoff", "fock_dim", "seconds"}
    assert payload["estimate"] == pytest.approx(0.5, abs=1e-3)
    assert payload["certified_error"] <= 1e-3
    # byte-identical modulo the timing field
    res2 = invoke(runner, "tracedist", vac, t1, "--eps", "1e-3")
    a = json.loads(res.output)
    c = json.loads(res2.output)
    a.pop("seconds"), c.pop("seconds")
    assert a == c


def test_tracedist_dump_fock(runner, tmp_path):
    vac = thermal_file(tmp_path, runner, 0.0, "vac.json")
    t1 = thermal_file(tmp_path, runner, 1.0, "t1.json")
    prefix = str(tmp_path / "blocks")
    res = invoke(runner, "tracedist", vac, t1, "--eps", "1e-2", "--dump-fock", prefix)
    assert res.exit_code == 0
    for suffix in ("a", "b"):
        blob = json.loads((tmp_path / f"blocks.{suffix}.json").read_text())
        assert blob["modes"] == 1
        assert len(blob["entries"]) == (blob["cutoff"] + 1) ** 2


def test_tracedist_cap_exit_three(runner, tmp_path, monkeypatch):
    vac = thermal_file(tmp_path, runner, 0.0, "vac.json")
    t1 = thermal_file(tmp_path, runner, 1.0, "t1.json")
    monkeypatch.setenv("BOSONIC_FOCK_CAP", "5")
    res = runner.invoke(main, ["tracedist", vac, t1, "--eps", "1e-3"])
    assert res.exit_code == 3


def test_capacity_command(runner):
    res = invoke(runner, "capacity", "--channel", "loss", "--lam", "0.5", "--task", "Q2",
                 "--method", "improved", "--n", "100", "--eps", "0.1")
    payload = json.loads(res.output)
    assert payload["value"] == pytest.approx(79.44, abs=0.01)
    assert payload["direction"] == "lower"
    res_u = invoke(runner, "capacity", "--channel", "loss", "--lam", "0.5", "--task", "Q2",
                   "--method", "upper", "--n", "100", "--eps", "0.1")
    assert json.loads(res_u.output)["value"] == pytest.approx(103.164, abs=1e-3)
    res_b = invoke(runner, "capacity", "--channel", "amp", "--g", "2", "--task", "Q",
                   "--method", "best", "--n", "1000", "--eps", "0.1")
    assert json.loads(res_b.output)["method"] == "aep"
    # asymptotic method needs no n/eps
    res_a = invoke(runner, "capacity", "--channel", "loss", "--lam", "0.75", "--task", "Q",
                   "--method", "asymptotic")
    assert json.loads(res_a.output)["value"] == pytest.approx(math.log2(3.0), rel=1e-12)
    # missing channel parameter is a domain error
    res_e = runner.invoke(main, ["capacity", "--channel", "loss", "--task", "Q",
                                 "--method", "aep", "--n", "10", "--eps", "0.1"])
    assert res_e.exit_code == 2


def test_capacity_infinity_token(runner):
    res = invoke(runner, "capacity", "--channel", "loss", "--lam", "1.0", "--task", "Q2",
                 "--method", "aep", "--n", "100", "--eps", "0.1")
    assert res.exit_code == 0
    assert "Infinity" in res.output


def test_complexity_command(runner):
    res = invoke(runner, "complexity", "--channel", "loss", "--lam", "0.5", "--task", "Q2",
                 "--k", "100", "--eps", "0.1")
    payload = json.loads(res.output)
    assert payload == {"sufficient_n": 121, "necessary_n": 97}
    res2 = runner.invoke(main, ["complexity", "--channel", "loss", "--lam", "0.3",
                                "--task", "Q", "--k", "10", "--eps", "0.1"])
    assert res2.exit_code == 2


def test_sweep_csv_schema_and_order(runner, tmp_path):
    out = str(tmp_path / "sweep.csv")
    res = invoke(runner, "sweep", "--channel", "loss", "--methods", "improved,upper",
                 "--tasks", "Q2", "--lam", "0.3:0.9:3", "--n", "100", "--eps", "0.1",
                 "--out", out)
    assert res.exit_code == 0
    lines = (tmp_path / "sweep.csv").read_text().splitlines()
    assert lines[0] == "method,task,direction,lambda,g,Ns,n,eps,value,vacuous,preconditions_met"
    assert len(lines) == 1 + 6
    methods = [ln.split(",")[0] for ln in lines[1:]]
    assert methods == ["improved"] * 3 + ["upper"] * 3
    # sandwich on the emitted values
    improved_vals = [float(ln.split(",")[8]) for ln in lines[1:4]]
    upper_vals = [float(ln.split(",")[8]) for ln in lines[4:7]]
    assert all(lo <= up for lo, up in zip(improved_vals, upper_vals))
    # amp rows leave the lambda column empty
    out2 = str(tmp_path / "amp.csv")
    invoke(runner, "sweep", "--channel", "amp", "--methods", "aep", "--tasks", "Q",
           "--g", "1.5:2.5:2", "--n", "100", "--eps", "0.1", "--out", out2)
    row = (tmp_path / "amp.csv").read_text().splitlines()[1].split(",")
    assert row[3] == "" and row[4] != ""


def test_sweep_config_precedence(runner, tmp_path):
    conf = tmp_path / "conf.json"
    out_a = str(tmp_path / "a.csv")
    conf.write_text(json.dumps({"channel": "loss", "methods": "improved", "tasks": "Q2",
                                "lam": "0.5", "n": "100", "eps": "0.1", "out": out_a}))
    res = invoke(runner, "sweep", "--config", str(conf))
    assert res.exit_code == 0
    assert (tmp_path / "a.csv").read_text().splitlines()[1].startswith("improved")
    out_b = str(tmp_path / "b.csv")
    res2 = invoke(runner, "sweep", "--config", str(conf), "--methods", "upper", "--out", out_b)
    assert res2.exit_code == 0
    assert (tmp_path / "b.csv").read_text().splitlines()[1].startswith("upper")


def test_sweep_parallel_determinism(tmp_path):
    # ProcessPool path exercised through the real executable
    conf = tmp_path / "conf.json"
    base = ["--channel", "loss", "--methods", "improved,aep,upper", "--tasks", "Q2,Q",
            "--lam", "0.3:0.9:3", "--n", "50:150:2", "--eps", "0.1"]
    out_s = tmp_path / "serial.csv"
    out_p = tmp_path / "parallel.csv"
    for out, jobs in ((out_s, "1"), (out_p, "3")):
        proc = subprocess.run(
            [sys.executable, "-m", "bosonic.cli", "sweep", *base, "--jobs", jobs,
             "--out", str(out)],
            capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
    assert out_s.read_text() == out_p.read_text()


def test_float_format_seventeen_digits(runner):
    res = invoke(runner, "capacity", "--channel", "loss", "--lam", "0.1", "--task", "Q2",
                 "--method", "upper", "--n", "7", "--eps", "0.1")
    payload = res.output
    # eps shows its shortest 17-digit form and round-trips exactly
    assert '"eps": 0.10000000000000001' in payload
    assert json.loads(payload)["eps"] == 0.1
