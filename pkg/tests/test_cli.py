import json

import pytest

from orlicz import DomainError
from orlicz.cli import CSV_SCHEMA, ExperimentConfig, main


def run(capsys, argv):
    rc = main(argv)
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def payload(out):
    return json.loads(out)


def test_config_round_trip_and_validation():
    cfg = ExperimentConfig()
    assert ExperimentConfig.from_json(cfg.to_json()) == cfg
    with pytest.raises(DomainError):
        ExperimentConfig.from_json('{"spin": 1}')
    with pytest.raises(DomainError):
        ExperimentConfig.from_json("[1, 2]")
    with pytest.raises(DomainError):
        ExperimentConfig(eps=-1.0).validate()
    with pytest.raises(DomainError):
        ExperimentConfig(budget=0).validate()


def test_norm_command(capsys):
    rc, out, _ = run(capsys, ["norm", "--family", "power:2", "--sequence", "1:3,2:-4"])
    assert rc == 0
    data = payload(out)
    assert data["norm"] == pytest.approx(5.0, rel=1e-9)
    assert data["modular"] == 25.0
    assert data["sequence"] == "1:3.0,2:-4.0"
    # effective config is echoed for provenance
    assert data["config"]["family"] == "power:2"


def test_output_is_deterministic(capsys):
    argv = ["norm", "--family", "power:1.5", "--sequence", "2:0.7"]
    _, out1, _ = run(capsys, argv)
    _, out2, _ = run(capsys, argv)
    assert out1 == out2


def test_out_flag_writes_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    rc, out, _ = run(capsys, [
        "norm", "--family", "power:1", "--sequence", "1:1", "--out", str(target),
    ])
    assert rc == 0
    assert out == ""
    assert json.loads(target.read_text())["norm"] == pytest.approx(1.0, rel=1e-9)


def test_delta2_command_exact_and_failed(capsys, tmp_path):
    csv = tmp_path / "table.csv"
    rc, out, _ = run(capsys, ["delta2", "--family", "power:2", "--csv-out", str(csv)])
    assert rc == 0
    data = payload(out)
    assert data["constant"] == 0.25
    assert data["source"] == "exact"
    lines = csv.read_text().splitlines()
    assert lines[0] == CSV_SCHEMA
    assert lines[1] == "t,ratio"
    assert len(lines) > 10

    rc, out, _ = run(capsys, ["delta2", "--family", "non-delta2"])
    assert rc == 1
    data = payload(out)
    assert data["constant"] is None
    assert data["source"] == "failed"


def test_solve_command(capsys):
    rc, out, _ = run(capsys, [
        "solve", "--family", "power:2", "--grid-dims", "2", "--grid-step", "0.25",
    ])
    assert rc == 0
    report = payload(out)["solve"]
    assert report["converged"]
    assert report["minimizer"] == ""
    assert report["min_value"] == 0.0


def test_support_command(capsys):
    rc, out, _ = run(capsys, [
        "support", "--family", "power:2", "--grid-dims", "2", "--grid-step", "0.25",
        "--delta-lo", "0.2", "--eps-hi", "1.0",
    ])
    assert rc == 0
    report = payload(out)["support"]
    assert report["inner"]["converged"]
    weights = report["weights"]
    for v in (*weights["head"], weights["tail"]):
        assert 0.2 < v <= 1.0


def test_wellposed_command_verdicts(capsys, tmp_path):
    csv = tmp_path / "wp.csv"
    rc, out, _ = run(capsys, [
        "wellposed", "--family", "power:2", "--samples", "80",
        "--support-size", "4", "--index-range", "12", "--csv-out", str(csv),
    ])
    assert rc == 0
    assert payload(out)["wellposed"]["verdict"] == "looks-wpmc"
    lines = csv.read_text().splitlines()
    assert lines[0] == CSV_SCHEMA
    assert lines[1] == "level,alpha_estimate,diam_estimate"
    assert len(lines) == 10  # schema + header + 8 default levels

    rc, out, _ = run(capsys, [
        "wellposed", "--family", "non-delta2", "--samples", "150", "--decades", "3",
    ])
    assert rc == 0
    assert payload(out)["wellposed"]["verdict"] == "looks-not-wpmc"


def test_wellposed_custom_levels(capsys):
    rc, out, _ = run(capsys, [
        "wellposed", "--family", "power:2", "--samples", "60",
        "--support-size", "3", "--index-range", "9", "--levels", "0.5,0.1,0.02",
    ])
    data = payload(out)["wellposed"]
    assert data["levels"] == [0.5, 0.1, 0.02]
    assert rc in (0, 1)  # shallow levels may legitimately stay inconclusive


def test_witness_command(capsys, tmp_path):
    csv = tmp_path / "w.csv"
    rc, out, _ = run(capsys, [
        "witness", "--family", "non-delta2", "--k", "10", "--csv-out", str(csv),
    ])
    assert rc == 0
    data = payload(out)
    assert data["witness"]["i_k"] == 20
    assert data["sequence"].startswith("1:0.1767766952966369")
    lines = csv.read_text().splitlines()
    assert lines[1] == "k,t_k,i_k,sigma_x,norm_x"
    assert lines[2].startswith("10,")

    # doubling families never produce a witness
    rc, _, err = run(capsys, ["witness", "--family", "power:2", "--k", "5"])
    assert rc == 1
    assert "failed:" in err


def test_probe_command_paths(capsys, tmp_path):
    rc, out, _ = run(capsys, [
        "probe", "--family", "power:1", "--probe", "l1", "--sequence", "1:0.5",
    ])
    assert rc == 0
    assert payload(out)["probe"]["verdict"] == "obstruction-confirmed"

    csv = tmp_path / "p.csv"
    rc, out, _ = run(capsys, [
        "probe", "--family", "power:1.5", "--probe", "growth:2", "--csv-out", str(csv),
    ])
    assert rc == 0
    assert payload(out)["probe"]["probe_name"] == "growth-order-2"
    lines = csv.read_text().splitlines()
    assert lines[1] == "scale,quotient,threshold"

    # quadratic growth never clears the bar: inconclusive exit
    rc, out, _ = run(capsys, ["probe", "--family", "power:2", "--probe", "growth:2"])
    assert rc == 1
    assert payload(out)["probe"]["verdict"] == "inconclusive"

    rc, out, _ = run(capsys, [
        "probe", "--family", "power:1.2", "--probe", "curvature:zero",
    ])
    assert rc == 0

    rc, _, err = run(capsys, ["probe", "--family", "power:2", "--probe", "sonar"])
    assert rc == 2
    assert "error:" in err


def test_classify_command(capsys):
    rc, out, _ = run(capsys, ["classify", "--family", "power:1.5"])
    assert rc == 0
    data = payload(out)["classify"]
    assert data["excluded"] == [
        "order-1.75-estimate-bump",
        "order-2-estimate-bump",
        "twice-gateaux-bump",
    ]


def test_config_file_and_flag_precedence(capsys, tmp_path):
    cfg_path = tmp_path / "run.json"
    cfg_path.write_text('{"family": "power:1", "sequence": "1:2"}')
    rc, out, _ = run(capsys, ["norm", "--config", str(cfg_path)])
    assert rc == 0
    assert payload(out)["norm"] == pytest.approx(2.0, rel=1e-9)

    # flags override the file
    rc, out, _ = run(capsys, [
        "norm", "--config", str(cfg_path), "--family", "power:2",
    ])
    assert payload(out)["family"] == "power:2"

    bad = tmp_path / "bad.json"
    bad.write_text('{"coil": 7}')
    rc, _, err = run(capsys, ["norm", "--config", str(bad)])
    assert rc == 2
    assert "unknown config fields: coil" in err

    rc, _, err = run(capsys, ["norm", "--config", str(tmp_path / "missing.json")])
    assert rc == 2


def test_env_seed_overrides_everything(capsys, monkeypatch):
    monkeypatch.setenv("ORLICZ_SEED", "777")
    rc, out, _ = run(capsys, ["norm", "--sequence", "1:1", "--seed", "5"])
    assert rc == 0
    assert payload(out)["config"]["seed"] == 777

    monkeypatch.setenv("ORLICZ_SEED", "almond")
    rc, _, err = run(capsys, ["norm", "--sequence", "1:1"])
    assert rc == 2
    assert "ORLICZ_SEED" in err


def test_invalid_inputs_exit_2(capsys):
    rc, _, err = run(capsys, ["norm", "--family", "power:0.5"])
    assert rc == 2
    assert "error:" in err
    rc, _, _ = run(capsys, ["solve", "--eps", "-0.1"])
    assert rc == 2
    rc, _, _ = run(capsys, ["norm", "--sequence", "1:1,1:2"])
    assert rc == 2
