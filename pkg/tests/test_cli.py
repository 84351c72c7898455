import json
import subprocess
import sys

import pytest
import yaml
from click.testing import CliRunner

from errors import ParameterError
from sdnb_cli import cli, job_name, load_grid


@pytest.fixture
def runner():
    return CliRunner()


def flat(output):
    return " ".join(output.split())


def test_ff_writes_verifiable_certificate(runner, tmp_path):
    out = tmp_path / "ff.json"
    result = runner.invoke(cli, ["ff", "--p", "3", "--n", "3", "--out", str(out)])
    assert result.exit_code == 0, result.output
    document = json.loads(out.read_text())
    assert document["body"]["route"] == "ff-p-power"
    result = runner.invoke(cli, ["verify", "--in", str(out)])
    assert result.exit_code == 0, result.output


def test_ff_even_degree_exits_with_parameters_code(runner, tmp_path):
    result = runner.invoke(cli, ["ff", "--p", "5", "--n", "4", "--out", str(tmp_path / "x.json")])
    assert result.exit_code == 2
    assert "if and only if" in flat(result.output)
    assert not (tmp_path / "x.json").exists()


def test_ff_characteristic_two(runner, tmp_path):
    result = runner.invoke(cli, ["ff", "--p", "2", "--n", "6", "--out", str(tmp_path / "c2.json"),
                                 "--html", str(tmp_path / "c2.html")])
    assert result.exit_code == 0, result.output
    assert "ff-char2" in (tmp_path / "c2.html").read_text()


def test_local_tame(runner, tmp_path):
    out = tmp_path / "tame.json"
    result = runner.invoke(cli, ["local", "tame", "--p", "7", "--d", "3", "--prec", "32",
                                 "--guard", "8", "--out", str(out)])
    assert result.exit_code == 0, result.output
    assert json.loads(out.read_text())["body"]["verification"]["valuation"] == -1


def test_local_tame_bad_degree(runner, tmp_path):
    result = runner.invoke(cli, ["local", "tame", "--p", "3", "--d", "3", "--out", str(tmp_path / "x.json")])
    assert result.exit_code == 2


def test_trace_diag_needs_equal_degrees(runner, tmp_path):
    result = runner.invoke(cli, ["local", "compose", "--p", "7", "--unram-d", "1", "--tame-d", "3",
                                 "--trace-diag", "--prec", "24", "--guard", "6",
                                 "--out", str(tmp_path / "x.json")])
    assert result.exit_code == 2


def test_verify_tampered_certificate(runner, tmp_path):
    out = tmp_path / "ff.json"
    assert runner.invoke(cli, ["ff", "--p", "3", "--n", "3", "--out", str(out)]).exit_code == 0
    document = json.loads(out.read_text())
    document["body"]["generator"][0] = (document["body"]["generator"][0] + 1) % 3
    out.write_text(json.dumps(document))
    result = runner.invoke(cli, ["verify", "--in", str(out)])
    assert result.exit_code == 1


def test_verify_malformed_certificate(runner, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"schema_version": "1.0", "body": {}}))
    result = runner.invoke(cli, ["verify", "--in", str(path)])
    assert result.exit_code == 2


def test_oracle(runner):
    result = runner.invoke(cli, ["oracle", "--p", "3", "--m", "3"])
    assert result.exit_code == 0, result.output
    assert "self-dual elements" in result.output
    assert runner.invoke(cli, ["oracle", "--p", "3", "--m", "6"]).exit_code == 2


def write_grid(path, jobs):
    path.write_text(yaml.safe_dump({"defaults": {"prec": 24, "guard": 6}, "jobs": jobs}))
    return path


def test_batch_grid_with_expected_failure(runner, tmp_path):
    grid = write_grid(tmp_path / "grid.yml", [
        {"mode": "ff", "p": 3, "n": 3},
        {"mode": "tame", "p": 7, "d": 3},
        {"mode": "ff", "p": 5, "n": 4, "expect_exit": 2},
    ])
    junit = tmp_path / "report.xml"
    result = runner.invoke(cli, ["batch", "--grid", str(grid), "--jobs", "1",
                                 "--junit", str(junit), "--out-dir", str(tmp_path / "certs")])
    assert result.exit_code == 0, result.output
    xml = junit.read_text()
    assert 'tests="3"' in xml
    assert 'failures="0"' in xml
    assert (tmp_path / "certs" / "ff-p3-n3-prec24.json").exists()
    assert (tmp_path / "certs" / "tame-p7-d3-prec24.json").exists()


def test_batch_reports_unexpected_errors(runner, tmp_path):
    grid = write_grid(tmp_path / "grid.yml", [
        {"mode": "ff", "p": 3, "n": 3},
        {"mode": "ff", "p": 5, "n": 4},
    ])
    result = runner.invoke(cli, ["batch", "--grid", str(grid), "--jobs", "1",
                                 "--out-dir", str(tmp_path / "certs")])
    assert result.exit_code == 2


def test_load_grid_accepts_bare_list(tmp_path):
    path = tmp_path / "grid.yml"
    path.write_text(yaml.safe_dump([{"mode": "ff", "p": 3, "n": 3}]))
    assert load_grid(str(path)) == [{"mode": "ff", "p": 3, "n": 3}]
    path.write_text(yaml.safe_dump({"jobs": "nope"}))
    with pytest.raises(ParameterError):
        load_grid(str(path))


def test_job_names():
    assert job_name({"mode": "ff", "p": 3, "n": 5}) == "ff-p3-n5"
    assert job_name({"mode": "compose", "p": 7, "unram_d": 3, "tame_d": 3, "trace_diag": True}) \
        == "compose-p7-unram_d3-tame_d3-diag"
    assert job_name({"name": "custom", "mode": "ff"}) == "custom"


@pytest.mark.slow
def test_entry_point_round_trip(tmp_path, scripts_dir):
    out = tmp_path / "unram.json"
    main = str(scripts_dir / "main.py")
    built = subprocess.run([sys.executable, main, "local", "unram", "--p", "7", "--d", "3",
                            "--prec", "24", "--guard", "6", "--out", str(out)],
                           capture_output=True, text=True)
    assert built.returncode == 0, built.stderr
    checked = subprocess.run([sys.executable, main, "verify", "--in", str(out)],
                             capture_output=True, text=True)
    assert checked.returncode == 0, checked.stderr
