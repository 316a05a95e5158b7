import json

import pytest

from zlad.cli import main


@pytest.fixture
def env_table(monkeypatch, table_path):
    monkeypatch.setenv("ZLAD_TABLE", str(table_path))


def test_build_table_floor(tmp_path, capsys):
    assert main(["build-table", "--t-max", "50", "--out", str(tmp_path / "x.csv")]) == 2
    assert "t_floor" in capsys.readouterr().err


def test_build_table_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["build-table", "--t-max", "1e3", "--out", str(a)]) == 0
    assert main(["build-table", "--t-max", "1e3", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().startswith("# ladder-table v1 ")


def test_build_table_io_error(tmp_path):
    assert main(["build-table", "--t-max", "1e3", "--out", str(tmp_path / "no" / "x.csv")]) == 3


def test_transform_const(env_table, capsys):
    assert main(["transform", "--f", "const", "--T", "1e5", "--U", "0.5", "--k", "2"]) == 0
    assert json.loads(capsys.readouterr().out)["g"] == 1.0


def test_transform_json_file(env_table, tmp_path):
    out = tmp_path / "out.json"
    assert main(["transform", "--f", "pow:2", "--T", "1e5", "--U", "0.5", "--k", "2",
                 "--json", str(out)]) == 0
    data = json.loads(out.read_text())
    for key in ("signal", "d_alpha", "d_beta", "alphas", "betas", "H", "g", "G2",
                "discrepancy", "bound", "kappa", "conditioned", "table_digest"):
        assert key in data


def test_transform_csv(env_table, capsys):
    assert main(["transform", "--f", "pow:2", "--T", "1e4", "--U", "0.4", "--k", "1",
                 "--csv", "-"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 2 and lines[0].startswith("signal")


def test_transform_u_bound(env_table):
    assert main(["transform", "--f", "pow:2", "--T", "1e3", "--U", "500", "--k", "1"]) == 4


def test_transform_range(env_table):
    assert main(["transform", "--f", "pow:2", "--T", "1.9e5", "--U", "0.5", "--k", "2"]) == 5


def test_transform_missing_table(monkeypatch):
    monkeypatch.delenv("ZLAD_TABLE", raising=False)
    assert main(["transform", "--f", "const", "--T", "1e4", "--U", "0.5", "--k", "1"]) == 3


def test_verify_power(env_table, tmp_path, capsys):
    code = main(["verify", "power", "--deltas", "-1,0,2,1000", "--T-list", "1e4,1e5",
                 "--U", "0.4", "--k", "2", "--out-dir", str(tmp_path)])
    assert code == 0
    assert (tmp_path / "verify-power.csv").exists()
    assert "verify power: PASS" in capsys.readouterr().out


def test_verify_shifted(env_table):
    assert main(["verify", "shifted", "--delta", "1", "--L", "1e5",
                 "--U-sweep", "0.05:0.5:0.05", "--k", "1"]) == 0


def test_verify_gaps_exit_reflects_result(env_table, capsys):
    code = main(["verify", "gaps", "--T", "1e5", "--k", "2"])
    out = capsys.readouterr().out
    assert code == (0 if "verify gaps: PASS" in out else 1)


def test_eval_z_json(capsys):
    assert main(["eval-z", "--t", "50,1e4", "--json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert [r["backend"] for r in rows] == ["EulerMaclaurin", "RiemannSiegel"]


def test_spectrum_raw(capsys):
    assert main(["spectrum", "--x", "1e4", "--spectral-omega", "raw"]) == 0
    assert "omega=raw" in capsys.readouterr().out


def test_schedule(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["schedule", "--mode", "IntegerLadder", "--L", "1e5", "--a", "0.5",
                 "--count", "3", "--out", str(out)]) == 0
    assert out.read_text().splitlines()[0] == "# schedule v1 mode=IntegerLadder"
    assert main(["schedule", "--mode", "Custom", "--L-list", "1e5,100002,100005",
                 "--a-list", "1.5,1"]) == 2


def test_help_per_command(capsys):
    for cmd in ("build-table", "eval-z", "spectrum", "transform", "verify", "schedule"):
        with pytest.raises(SystemExit) as info:
            main([cmd, "--help"])
        assert info.value.code == 0
