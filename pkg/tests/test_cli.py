import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from nlcoherent import __version__
from nlcoherent.cli import ConfigError, RunConfig, main
from nlcoherent.algebra import AlgebraSpec


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def parse_csv(text):
    meta = {}
    body = []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[2:].partition(": ")
            meta[key] = json.loads(value)
        else:
            body.append(line)
    rows = list(csv.DictReader(io.StringIO("\n".join(body))))
    return meta, rows


def test_state_scan_anchor_rows(capsys):
    code, out, _ = run(["state-scan", "--z-min", "0", "--z-max", "16.7442", "--steps", "2"], capsys)
    assert code == 0
    meta, rows = parse_csv(out)
    assert meta["version"] == __version__
    assert meta["algebra"]["variant"] == "Su11"
    assert float(rows[0]["mean"]) == 0.0 and float(rows[0]["mandel_q"]) == 0.0
    assert abs(float(rows[1]["mean"]) - 16.0) <= 0.01


def test_state_scan_z4(capsys):
    code, out, _ = run(["state-scan", "--z-min", "4", "--z-max", "4", "--steps", "1", "--levels", "0,3"], capsys)
    meta, rows = parse_csv(out)
    assert abs(float(rows[0]["mean"]) - 3.277) <= 0.005
    assert set(rows[0]) >= {"z", "P0", "P3", "mean", "variance", "mandel_q", "channel_mandel_q"}
    q = float(rows[0]["mandel_q"])
    assert float(rows[0]["channel_mandel_q"]) == pytest.approx(q / 2, abs=1e-12)


def test_joint_coherent(capsys):
    code, out, _ = run(["joint", "--input", "coherent", "--param", "4"], capsys)
    meta, rows = parse_csv(out)
    assert code == 0
    assert meta["separable"] is True
    assert meta["channel"]["horizontal_mean"] == pytest.approx(8.0, rel=1e-10)
    assert meta["channel"]["vertical_mean"] == pytest.approx(8.0, rel=1e-10)
    assert list(rows[0]) == ["n", "m", "p"]


def test_joint_fock_one(capsys):
    code, out, _ = run(["joint", "--input", "fock", "--param", "1"], capsys)
    _, rows = parse_csv(out)
    probs = {(int(r["n"]), int(r["m"])): float(r["p"]) for r in rows}
    assert probs == {(0, 0): 0.0, (0, 1): 0.5, (1, 0): 0.5}


def test_joint_su11_squeezed_relative_to_coherent(capsys):
    _, out_su, _ = run(["joint", "--input", "su11", "--param", "16.7442", "--format", "json"], capsys)
    su = json.loads(out_su)
    mean = su["meta"]["channel"]["horizontal_mean"] * 2
    _, out_c, _ = run(["joint", "--input", "coherent", "--param", str(np.sqrt(mean)), "--format", "json"], capsys)
    co = json.loads(out_c)
    assert su["meta"]["channel"]["total_variance"] < co["meta"]["channel"]["total_variance"]
    assert su["meta"]["separable"] is False


def test_g2_scan(capsys):
    _, out, _ = run(["g2-scan", "--z-min", "30", "--z-max", "30", "--steps", "1"], capsys)
    _, rows = parse_csv(out)
    assert abs(float(rows[0]["g2_channel"]) - 1.0) < 0.02
    _, out, _ = run(["g2-scan", "--input", "fock", "--n-max", "3"], capsys)
    _, rows = parse_csv(out)
    assert float(rows[0]["g2_channel"]) == pytest.approx(0.0, abs=1e-14)
    assert float(rows[2]["g2_channel"]) == pytest.approx(2 / 3, abs=1e-12)
    _, out, _ = run(["g2-scan", "--algebra", "identity", "--z-min", "0", "--z-max", "3", "--steps", "4"], capsys)
    _, rows = parse_csv(out)
    assert rows[0]["g2_channel"] == "nan"
    assert all(abs(float(r["g2_channel"]) - 1) < 1e-9 for r in rows[1:])


def test_moments_csv(capsys):
    code, out, _ = run(["moments", "--algebra", "identity", "--n-max", "4", "--tol", "1e-10"], capsys)
    assert code == 0
    meta, rows = parse_csv(out)
    assert [r["n"] for r in rows] == ["0", "1", "2", "3", "4"]
    assert max(float(r["relative_error"]) for r in rows) <= 1e-8


@pytest.mark.parametrize("algebra", ["identity", "su11", "polynomial", "f_oscillator", "q_deformed",
                                     "susy_cubic", "distorted"])
def test_verify_passes_for_registered(algebra, capsys):
    code, out, _ = run(["verify", "--algebra", algebra, "--z-max", "2"], capsys)
    meta, rows = parse_csv(out)
    failing = [r for r in rows if r["passed"] != "1"]
    assert code == 0, failing
    assert meta["passed"] is True


def test_verify_fails_with_exit_one(capsys, monkeypatch):
    import nlcoherent.cli as cli

    monkeypatch.setattr(cli, "_unitarity_gap", lambda: 1.0)
    code, out, _ = run(["verify"], capsys)
    assert code == 1
    meta, rows = parse_csv(out)
    assert meta["passed"] is False
    # the remaining checks still ran
    assert len(rows) > 5


@pytest.mark.parametrize(
    "args",
    [
        ["state-scan", "--tol", "0.1"],
        ["state-scan", "--z-min", "-1"],
        ["state-scan", "--steps", "0"],
        ["state-scan", "--z-min", "3", "--z-max", "1"],
        ["state-scan", "--algebra", "no_such_algebra"],
        ["state-scan", "--levels", "a,b"],
        ["moments", "--algebra", "q_deformed"],
        ["joint", "--input", "fock", "--param", "1.5"],
    ],
)
def test_configuration_errors(args, capsys):
    code, _, err = run(args, capsys)
    assert code == 2
    assert "configuration error" in err


def test_runtime_error_exit_one(capsys):
    code, _, err = run(["state-scan", "--algebra", "identity", "--z-min", "80", "--z-max", "80", "--steps", "1"],
                       capsys)
    assert code == 1
    assert "|z|=80" in err


def test_output_file_and_gnuplot(tmp_path, capsys):
    out = tmp_path / "scan.csv"
    args = ["state-scan", "--z-max", "2", "--steps", "3", "--out", str(out)]
    assert main(args) == 0
    first = out.read_bytes()
    assert main(args) == 0
    assert out.read_bytes() == first
    script = tmp_path / "gnuplot" / "scan.gp"
    assert script.exists()
    assert "scan.csv" in script.read_text()


def test_json_output(tmp_path):
    out = tmp_path / "moments.json"
    assert main(["moments", "--algebra", "su11", "--n-max", "3", "--tol", "1e-10",
                 "--format", "json", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert set(doc) == {"meta", "data"}
    assert doc["data"][3]["target"] == pytest.approx(144.0)
    assert not (tmp_path / "gnuplot").exists()


def test_algebra_file(tmp_path, capsys):
    path = tmp_path / "alg.json"
    path.write_text(AlgebraSpec.su11(1.0, 1.0, 1.0).to_json())
    code, out, _ = run(["state-scan", "--algebra", str(path), "--z-max", "1", "--steps", "2"], capsys)
    assert code == 0


def test_run_config_validation():
    spec = AlgebraSpec.identity()
    with pytest.raises(ConfigError):
        RunConfig(spec, "identity", "state-scan", tol=0.0)
    with pytest.raises(ConfigError):
        RunConfig(spec, "identity", "bogus")
    cfg = RunConfig(spec, "identity", "state-scan", z_min=1.0, z_max=1.0, steps=1)
    assert cfg.z_grid().tolist() == [1.0]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "nlcoherent", "--version"], capture_output=True, text=True)
    assert res.returncode == 0
    assert __version__ in res.stdout
