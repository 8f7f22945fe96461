import csv
import io
import json
import subprocess
import sys

import pytest

from osmodes.cli import BRANCH_HEADER, main, read_config
from osmodes.errors import ConfigError


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_branch_csv_header_and_precision(capsys):
    code, out, _ = run(["branch", "--beta", "0.2", "--A", "1.0", "--R", "1e6,1e7",
                        "--mode", "surrogate"], capsys)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == BRANCH_HEADER
    assert len(rows) == 3
    assert all(len(x.split("e")[0].replace("-", "").replace(".", "")) == 17 for x in rows[1])


def test_branch_deterministic(capsys):
    argv = ["branch", "--beta", "0.2", "--A", "1.0", "--R", "1e6,1e7,1e8", "--mode", "surrogate"]
    _, first, _ = run(argv, capsys)
    _, second, _ = run(argv + ["--workers", "2"], capsys)
    assert first == second


def test_eigen_json(capsys):
    code, out, _ = run(["eigen", "--R", "1e6", "--alpha", "0.06", "--mode", "surrogate"], capsys)
    rec = json.loads(out)
    assert code == 0 and rec["mode"] == "surrogate" and len(rec["c"]) == 2


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# surrogate run\nmode = surrogate\nR = 1e6\nbeta = 0.2\nA = 1.0\n")
    out = tmp_path / "o.csv"
    code, _, _ = run(["eigen", "--config", str(cfg), "--format", "csv", "--output", str(out)], capsys)
    assert code == 0
    assert out.read_text().splitlines()[0] == ",".join(BRANCH_HEADER)


def test_read_config_rejects_garbage(tmp_path):
    p = tmp_path / "bad.cfg"
    p.write_text("just words\n")
    with pytest.raises(ConfigError):
        read_config(str(p))


@pytest.mark.parametrize("argv", [
    ["eigen", "--R", "1e6"],
    ["eigen", "--R", "abc", "--alpha", "0.1"],
    ["eigen", "--R", "1e6", "--alpha", "0.1", "--mode", "exact"],
    ["eigen", "--R", "1e6", "--alpha", "0.1", "--format", "xml"],
    ["eigen", "--R", "1e6", "--alpha", "0.1", "--profile", "parabolic"],
    ["eigen", "--config", "/nonexistent/file"],
    ["eigen", "--set", "novalue"],
])
def test_config_errors_exit_2(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2 and "config error" in err


def test_numerical_failure_exit_3(capsys):
    code, _, err = run(["eigen", "--R", "1e6", "--alpha", "0.06", "--mode", "surrogate",
                        "--set", "root.maxiter=1"], capsys)
    rec = json.loads(err)
    assert code == 3
    assert rec["error"] == "NoConvergence" and rec["module"] == "osmodes.dispersion"


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "osmodes.cli", "eigen", "--R", "1e6",
                          "--alpha", "0.06", "--mode", "surrogate"], capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["R"] == 1e6
