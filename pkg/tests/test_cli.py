import csv
import io
import subprocess
import sys
from pathlib import Path

import pytest

from chaplygin_riemann import cli
from chaplygin_riemann.riemann import RiemannData, solve
from chaplygin_riemann.state import PrimitiveState

CONFIGS = Path(__file__).resolve().parents[1] / "configs"
CLASSICAL = str(CONFIGS / "classical.toml")
DELTA = str(CONFIGS / "delta.toml")
IDENTITY = str(CONFIGS / "identity.toml")


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def record(text):
    return {r["quantity"]: r["value"] for r in rows(text)}


def test_solve_classical(capsys):
    code, out, _ = run(capsys, "solve", "--config", CLASSICAL)
    rec = record(out)
    assert code == 0
    assert rec["classification"] == "classical"
    assert float(rec["rho_star"]) == pytest.approx(3.7320508075688772, rel=1e-15)
    assert "# config_sha256: " in out and "# chaplygin-riemann: " in out


def test_solve_delta(capsys):
    code, out, _ = run(capsys, "solve", "--config", DELTA)
    rec = record(out)
    assert code == 0 and rec["classification"] == "delta"
    assert rec["sigma"] == "0"
    assert float(rec["w_slope"]) == pytest.approx(6.666666666666667, rel=1e-12)


def test_solve_identity(capsys):
    _, out, _ = run(capsys, "solve", "--config", IDENTITY)
    rec = record(out)
    assert rec["classification"] == "classical"
    assert float(rec["rho_star"]) == pytest.approx(3.0, rel=1e-14)


def test_numbers_round_trip(capsys):
    _, out, _ = run(capsys, "solve", "--config", CLASSICAL)
    fan = solve(RiemannData(PrimitiveState(1, 2, 0.5), PrimitiveState(1, 2, 0.0))).wave
    rec = record(out)
    assert float(rec["rho_star"]) == fan.rho_star
    assert float(rec["v_star"]) == fan.v_star
    assert float(rec["n_star2"]) == fan.states[2].n


def test_fmt():
    assert cli.fmt(-0.0) == "0"
    assert cli.fmt(float("nan")) == "" and cli.fmt(None) == ""
    assert float(cli.fmt(0.1)) == 0.1


def test_sample_classical_regions(capsys):
    code, out, _ = run(capsys, "sample", "--config", CLASSICAL, "--t", "1", "--xmin", "-1", "--xmax", "1", "--npoints", "9")
    table = rows(out)
    assert code == 0 and len(table) == 9
    order = ["Left", "Star1", "Star2", "Right"]
    ranks = [order.index(r["region"]) for r in table]
    assert ranks == sorted(ranks) and set(ranks) == {0, 1, 2, 3}
    assert float(table[0]["p"]) == -0.5


def test_sample_delta_carrier_row(capsys):
    _, out, _ = run(capsys, "sample", "--config", DELTA, "--npoints", "4")
    table = rows(out)
    carrier = [r for r in table if r["region"] == "DeltaCarrier"]
    assert len(carrier) == 1
    assert carrier[0]["xi"] == "0" and carrier[0]["rho"] == ""
    assert float(carrier[0]["w_slope"]) == pytest.approx(20 / 3)
    xis = [float(r["xi"]) for r in table]
    assert xis == sorted(xis)


@pytest.mark.parametrize("config", [CLASSICAL, DELTA])
def test_verify_passes(capsys, config):
    code, out, _ = run(capsys, "verify", "--config", config)
    assert code == 0
    assert all(r["status"] == "pass" for r in rows(out))


@pytest.mark.parametrize("config", [CLASSICAL, DELTA])
def test_verify_perturbed_fails(capsys, config):
    code, out, _ = run(capsys, "verify", "--config", config, "--perturb-sigma", "1e-3")
    assert code == cli.EXIT_TOLERANCE
    assert any(r["status"] == "FAIL" for r in rows(out))


def test_verify_tolerance_override(capsys):
    code, _, _ = run(capsys, "verify", "--config", CLASSICAL, "--tolerance", "weak=1e-30")
    assert code == cli.EXIT_TOLERANCE


def test_verify_seed_changes_test_functions(capsys):
    _, a, _ = run(capsys, "verify", "--config", DELTA, "--seed", "1")
    _, b, _ = run(capsys, "verify", "--config", DELTA, "--seed", "2")
    assert a != b


def test_limit_study(capsys):
    code, out, _ = run(capsys, "limit-study", "--config", DELTA)
    table = rows(out)
    assert code == 0
    body = [r for r in table if r["kind"] == "row"]
    ext = [r for r in table if r["kind"] == "extrapolated"][0]
    ints_v = [abs(float(r["int_v"])) for r in body]
    assert ints_v == sorted(ints_v, reverse=True)
    assert float(ext["int_rho"]) == pytest.approx(1.5, abs=1e-6)
    assert max(float(ext[k]) for k in ("err_rho", "err_n", "err_v")) < 1e-4


def test_simulate_classical_l1_column(capsys, tmp_path):
    code, out, _ = run(capsys, "simulate", "--config", CLASSICAL)
    table = rows(out)
    assert code == 0 and all(r["l1_rho"] for r in table)
    code, _, _ = run(capsys, "simulate", "--config", CLASSICAL, "--out", str(tmp_path / "sim"))
    files = sorted(p.name for p in (tmp_path / "sim").iterdir())
    assert code == 0 and files == ["diagnostics.csv", "snapshot_000.csv", "snapshot_001.csv"]
    snap = rows((tmp_path / "sim" / "snapshot_001.csv").read_text())
    assert len(snap) == 400 and set(snap[0]) == {"t", "x", "D", "M", "En", "n", "rho", "v"}


def test_simulate_delta_spike_column(capsys):
    code, out, _ = run(capsys, "simulate", "--config", DELTA)
    table = rows(out)
    assert code == 0
    assert all(abs(float(r["spike_position"])) < 5e-3 for r in table)
    assert all(r["l1_rho"] == "" for r in table)


def test_simulate_needs_grid(capsys):
    code, _, err = run(capsys, "simulate", "--config", IDENTITY)
    assert code == cli.EXIT_CONFIG and "grid" in err


def test_simulate_godunov_on_delta_is_solver_error(capsys):
    code, _, err = run(capsys, "simulate", "--config", DELTA, "--flux", "godunov")
    assert code == cli.EXIT_SOLVER and "RegimeError" in err


def test_eigen_dump(capsys):
    code, out, _ = run(capsys, "eigen", "--state", "1", "2", "0")
    table = rows(out)
    assert code == 0
    lams = [float(r["c0"]) for r in table if r["quantity"] == "lambda"]
    assert lams == pytest.approx([-0.5, 0.0, 0.5])
    code, _, _ = run(capsys, "eigen", "--config", CLASSICAL)
    assert code == 0


def test_eigen_needs_input(capsys):
    assert run(capsys, "eigen")[0] == cli.EXIT_CONFIG


def write(tmp_path, text):
    path = tmp_path / "cfg.toml"
    path.write_text(text)
    return str(path)


STATES = "[left]\nn = 1\nrho = 2\nv = 0.5\n[right]\nn = 1\nrho = 2\nv = 0\n"


@pytest.mark.parametrize(
    "text",
    [
        "c = 1\n[left]\nn = 1\nrho = 2\n[right]\nn = 1\nrho = 2\nv = 0\n",
        "c = 1\n" + STATES + "[grid]\nxmin = 0\nxmax = 1\nncells = 4\n",
        "c = 'fast'\n" + STATES,
        "c = 1\ncolour = 2\n" + STATES,
        "c = 1\n" + STATES + "[sim]\ncfl = 2.0\n",
        "c = 1\n[left\n",
        "c = -1\n" + STATES,
    ],
)
def test_config_errors(capsys, tmp_path, text):
    assert run(capsys, "solve", "--config", write(tmp_path, text))[0] == cli.EXIT_CONFIG


def test_missing_config_file(capsys, tmp_path):
    assert run(capsys, "solve", "--config", str(tmp_path / "none.toml"))[0] == cli.EXIT_CONFIG


def test_inadmissible_exit(capsys, tmp_path):
    path = write(tmp_path, "c = 1\n[left]\nn = 1\nrho = 0.5\nv = 0\n[right]\nn = 1\nrho = 2\nv = 0\n")
    code, _, err = run(capsys, "solve", "--config", path)
    assert code == cli.EXIT_INADMISSIBLE and "rho > 1/c" in err


def test_infeasible_limit_study_is_config_error(capsys, tmp_path):
    path = write(tmp_path, "c = 1\n" + STATES.replace("0.5", "0.8") + "[verify]\nepsilons = [0.9]\n")
    assert run(capsys, "limit-study", "--config", path)[0] == cli.EXIT_CONFIG


def test_hash_tracks_config_bytes(capsys, tmp_path):
    a = write(tmp_path, "c = 1\n" + STATES)
    _, out_a, _ = run(capsys, "solve", "--config", a)
    b = write(tmp_path, "c = 1.0\n" + STATES)
    _, out_b, _ = run(capsys, "solve", "--config", b)
    assert record(out_a) == record(out_b)
    assert out_a != out_b


def test_out_file(capsys, tmp_path):
    target = tmp_path / "rec.csv"
    assert run(capsys, "solve", "--config", CLASSICAL, "--out", str(target))[0] == 0
    assert record(target.read_text())["classification"] == "classical"


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "chaplygin_riemann.cli", "solve", "--config", DELTA],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and "sigma,0" in proc.stdout
