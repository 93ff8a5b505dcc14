"""End-to-end CLI behaviour in temp directories."""
import json
import subprocess
import sys

import pytest

from floqsim.cli import main


def run_cli(*argv):
    return main(list(argv))


def write_config(tmp_path, doc, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


BASE = {
    "lattice": "Kagome19",
    "theta_x": "0.95pi",
    "n_steps": 5,
    "n_traj": 4,
    "p": 0.2,
    "seed": 7,
}


def test_presets_lists_everything(capsys):
    assert run_cli("presets", "--json") == 0
    rows = json.loads(capsys.readouterr().out)
    names = {r["name"] for r in rows}
    assert {"Kagome82", "Lieb40", "HeavyHex28"} <= names
    k82 = next(r for r in rows if r["name"] == "Kagome82")
    assert k82["n_sites"] == 82 and k82["n_edges"] == 142


def test_simulate_outputs(tmp_path):
    cfg = write_config(tmp_path, BASE)
    out = tmp_path / "run"
    assert run_cli("simulate", "--config", cfg, "--out", str(out)) == 0
    series = (out / "series.csv").read_text()
    assert series.splitlines()[0] == "step,observable,region,mean,stderr"
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["tool"] == "floqsim"
    assert manifest["config"]["seed"] == 7
    assert (out / "lattice.json").exists()


def test_simulate_deterministic_across_runs(tmp_path):
    cfg = write_config(tmp_path, BASE)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    run_cli("simulate", "--config", cfg, "--out", str(out1))
    run_cli("simulate", "--config", cfg, "--out", str(out2))
    assert (out1 / "series.csv").read_bytes() == (out2 / "series.csv").read_bytes()


def test_manifest_round_trip_byte_identical(tmp_path):
    cfg = write_config(tmp_path, BASE)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    run_cli("simulate", "--config", cfg, "--out", str(out1))
    run_cli(
        "simulate", "--config", str(out1 / "manifest.json"), "--out", str(out2)
    )
    assert (out1 / "series.csv").read_bytes() == (out2 / "series.csv").read_bytes()
    assert (out1 / "manifest.json").read_bytes() == (out2 / "manifest.json").read_bytes()


def test_error_is_machine_readable(tmp_path, capsys):
    cfg = write_config(tmp_path, {**BASE, "lattice": "Nope"})
    assert run_cli("simulate", "--config", cfg, "--out", str(tmp_path / "x")) == 1
    err = json.loads(capsys.readouterr().out)
    assert err["error"] == "LatticeError"
    assert "Nope" in err["message"]


def test_emit_circuit_header(tmp_path, capsys):
    assert run_cli(
        "emit-circuit", "--lattice", "Kagome82", "--m-cnot", "3"
    ) == 0
    text = capsys.readouterr().out
    assert "native_2q_gates_per_cycle=426" in text
    assert text.startswith("# cycle model=Ising")


def test_otoc_subcommand(tmp_path):
    doc = {
        "lattice": "square(1,1)",
        "theta_x": "0.9pi",
        "n_steps": 2,
        "n_traj": 2,
        "p": 0.0,
        "observables": [{"kind": "otoc", "j": 0, "k": 3, "steps": [0, 1, 2]}],
    }
    cfg = write_config(tmp_path, doc)
    out = tmp_path / "otoc"
    assert run_cli("otoc", "--config", cfg, "--out", str(out)) == 0
    series = (out / "series.csv").read_text()
    assert "otoc[0:3]" in series


def test_otoc_subcommand_requires_otoc_observable(tmp_path, capsys):
    cfg = write_config(tmp_path, BASE)
    assert run_cli("otoc", "--config", cfg, "--out", str(tmp_path / "x")) == 1


def test_fit_subcommand(tmp_path, capsys):
    lines = ["step,observable,region,mean,stderr"]
    for n in range(25):
        lines.append(f"{n},z_avg,all,{0.93 ** n:.17g},0")
    series = tmp_path / "series.csv"
    series.write_text("\n".join(lines) + "\n")
    assert run_cli("fit", "--series", str(series), "--model", "single") == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["model"] == "single_exp"
    assert abs(doc["params"]["eta"] - 0.93) < 1e-6


def test_mitigate_subcommand(tmp_path, capsys):
    raw_lines = ["step,observable,region,mean,stderr"]
    ref_lines = ["step,observable,region,mean,stderr"]
    for n in range(10):
        ideal = (-1.0) ** n * 0.8
        raw_lines.append(f"{n},z_avg,all,{ideal * 0.9 ** n:.17g},0")
        ref_lines.append(f"{n},z_avg,all,{(-0.9) ** n:.17g},0")
    raw = tmp_path / "raw.csv"
    ref = tmp_path / "ref.csv"
    raw.write_text("\n".join(raw_lines) + "\n")
    ref.write_text("\n".join(ref_lines) + "\n")
    assert run_cli("mitigate", "--raw", str(raw), "--reference", str(ref)) == 0
    out = capsys.readouterr().out.splitlines()
    values = [float(line.split(",")[3]) for line in out[1:]]
    assert values == pytest.approx([(-1.0) ** n * 0.8 for n in range(10)])


def test_theory_check_subcommand(tmp_path):
    out = tmp_path / "theory"
    assert run_cli("theory-check", "--out", str(out), "--epsilons", "0.0") == 0
    records = json.loads((out / "theory_checks.json").read_text())
    assert all(r["pass"] for r in records)


def test_console_script_entry():
    result = subprocess.run(
        [sys.executable, "-m", "floqsim.cli", "presets"],
        capture_output=True, text=True,
    )
    assert result.returncode == 0
    assert "Kagome82" in result.stdout
