import json
import subprocess
import sys

import pytest

from cubic_hecke import __version__
from cubic_hecke.cli import main, random_poisson_cases


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_family_csv(capsys):
    code, out, _ = run(capsys, "family", "--xmax", "1000", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == f"# cubic_hecke {__version__}"
    body = [l for l in lines if not l.startswith("#")]
    assert body[0] == "a,b,norm"
    norms = [int(r.split(",")[2]) for r in body[1:]]
    assert norms == sorted(norms) and max(norms) <= 1000
    assert "10,0,100" in body


def test_family_stable_across_threads(capsys):
    outs = [run(capsys, "family", "--xmax", "1000", "--workers", str(w))[1] for w in (1, 8, 1)]
    assert outs[0] == outs[1] == outs[2]


def test_density_row(capsys):
    code, out, _ = run(capsys, "density", "--X", "1e6", "--L", "3", "--ell", "1", "--route", "prime-sums")
    rows = [l for l in out.splitlines() if not l.startswith("#")]
    assert code == 0 and len(rows) == 2
    row = dict(zip(rows[0].split(","), rows[1].split(",")))
    assert row["route"] == "prime-sums" and row["seconds"] == ""


def test_timing_flag_adds_wall_time(capsys):
    _, out, _ = run(capsys, "family", "--xmax", "200", "--timing")
    assert "# wall_time_s: " in out
    _, out, _ = run(capsys, "family", "--xmax", "200")
    assert "wall_time_s" not in out


def test_json_embeds_config(capsys):
    _, out, _ = run(capsys, "gauss-sum", "--k", "1", "--n", "-2", "--format", "json", "--check")
    doc = json.loads(out)
    assert doc["header"]["version"] == __version__
    assert doc["header"]["config"]["n"] == "-2"
    assert abs(doc["rows"][0]["abs"] - 2.0) < 1e-12
    assert doc["rows"][0]["difference"] < 1e-12


def test_missing_flag_is_usage_error(capsys):
    code, _, err = run(capsys, "density", "--X", "1e4")
    assert code == 2 and "missing --L" in err


def test_domain_error_is_usage_error(capsys):
    code, _, err = run(capsys, "zeros", "--conductor", "10", "--T", "80")
    assert code == 2 and "precondition violated" in err


def test_unknown_flag(capsys):
    with pytest.raises(SystemExit) as e:
        main(["family", "--bogus"])
    assert e.value.code == 2


def test_config_precedence(tmp_path, capsys, monkeypatch):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nX = 1e4\nL = 3\n")
    _, out, _ = run(capsys, "density", "--config", str(cfg))
    assert "# config: L=3.0" in out
    _, out, _ = run(capsys, "density", "--config", str(cfg), "--L", "2")
    assert "# config: L=2.0" in out
    bad = tmp_path / "bad.cfg"
    bad.write_text("nonsense = 1\n")
    code, _, err = run(capsys, "density", "--config", str(bad))
    assert code == 2 and "unknown config keys" in err


def test_threads_env(monkeypatch, capsys):
    monkeypatch.setenv("CUBIC_HECKE_THREADS", "3")
    a = run(capsys, "family", "--xmax", "300")[1]
    monkeypatch.delenv("CUBIC_HECKE_THREADS")
    assert a == run(capsys, "family", "--xmax", "300")[1]


def test_output_file(tmp_path, capsys):
    path = tmp_path / "out.csv"
    assert main(["poisson-check", "--cases", "2", "--seed", "4", "-o", str(path)]) == 0
    assert path.read_text().startswith(f"# cubic_hecke {__version__}")


def test_poisson_cases_seeded():
    a, b = random_poisson_cases(20, 5), random_poisson_cases(20, 5)
    assert a == b
    assert all(0 < q.norm() <= 25 and 100 <= M <= 1e4 for q, _, M in a)


def test_distribution_report(capsys):
    code, out, _ = run(capsys, "distribution", "--X", "2e4", "--format", "json")
    rep = json.loads(out)["report"]
    assert code == 0
    for key in ("bins", "edges", "ks_distance", "fraction_in_interval", "psi_interval"):
        assert key in rep


def test_selftest_quick_subprocess():
    r = subprocess.run([sys.executable, "-m", "cubic_hecke", "selftest", "--quick"], capture_output=True, text=True)
    assert r.returncode == 0, r.stdout + r.stderr
    rows = [l for l in r.stdout.splitlines() if not l.startswith("#")][1:]
    assert len(rows) == 7 and all(",true," in l for l in rows)
