"""Command-line entry points: simulate, otoc, theory-check, fit, mitigate,
emit-circuit, presets.

Every run writes a manifest JSON embedding the fully resolved config and
seed; feeding a manifest back through --config reproduces the outputs
byte-for-byte.  Failures exit nonzero with a single-line error JSON.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .circuit import FloquetParams, build_cycle, native_gate_count
from .config import ConfigError, RunConfig, parse_config
from .lattice import PRESET_NAMES, Lattice, build_preset
from .mitigation import fit_double_exp, fit_single_exp, mitigate
from .theory import run_theory_suite
from .trajectories import run_ensemble, series_to_csv, snapshots_to_csv


def _load_lattice(spec) -> Lattice:
    if isinstance(spec, str):
        return build_preset(spec)
    return Lattice.from_json(json.dumps(spec))


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def _manifest(cfg: RunConfig, outputs: list[str]) -> str:
    doc = {
        "tool": "floqsim",
        "version": __version__,
        "config": cfg.to_dict(),
        "seed": cfg.seed,
        "outputs": outputs,
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def _read_config(path: str, seed_override=None) -> RunConfig:
    cfg = parse_config(Path(path).read_text())
    if seed_override is not None:
        cfg.seed = seed_override
    return cfg


def _set_threads(n: int | None) -> None:
    if n is None:
        return
    try:
        import numba

        numba.set_num_threads(max(1, min(n, numba.config.NUMBA_NUM_THREADS)))
    except ImportError:
        pass


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_presets(args) -> int:
    rows = []
    for name in PRESET_NAMES:
        lat = build_preset(name)
        rows.append(
            {
                "name": name,
                "n_sites": lat.n_sites,
                "n_edges": lat.n_edges,
                "n_layers": lat.n_layers,
                "pumped": len(lat.charge_pump_set()),
                "boundary": len(lat.boundary),
            }
        )
    if args.json:
        print(json.dumps(rows, indent=1))
    else:
        print(f"{'name':14} {'L':>4} {'edges':>6} {'layers':>6} "
              f"{'pumped':>6} {'boundary':>8}")
        for r in rows:
            print(
                f"{r['name']:14} {r['n_sites']:>4} {r['n_edges']:>6} "
                f"{r['n_layers']:>6} {r['pumped']:>6} {r['boundary']:>8}"
            )
    return 0


def _run_simulation(cfg: RunConfig, out: Path) -> list[str]:
    lat = _load_lattice(cfg.lattice)
    params = FloquetParams(cfg.theta_x, cfg.theta_J, cfg.model)
    series = run_ensemble(
        lat,
        params,
        p=cfg.p,
        n_steps=cfg.n_steps,
        n_traj=cfg.n_traj,
        observables=cfg.observable_objects(),
        seed=cfg.seed,
        custom_regions=cfg.custom_regions(),
        n_shots=cfg.n_shots,
    )
    outputs = ["series.csv"]
    _write(out / "series.csv", series_to_csv(series))
    if series.snapshots:
        _write(out / "snapshots.csv", snapshots_to_csv(series))
        outputs.append("snapshots.csv")
    _write(out / "lattice.json", lat.to_json())
    outputs.append("lattice.json")
    _write(out / "manifest.json", _manifest(cfg, outputs))
    return outputs


def cmd_simulate(args) -> int:
    cfg = _read_config(args.config, args.seed)
    _set_threads(args.threads)
    _run_simulation(cfg, Path(args.out))
    return 0


def cmd_otoc(args) -> int:
    cfg = _read_config(args.config, args.seed)
    if not any(o.get("kind") == "otoc" for o in cfg.observables):
        raise ConfigError("otoc subcommand needs at least one otoc observable")
    _set_threads(args.threads)
    _run_simulation(cfg, Path(args.out))
    return 0


def cmd_theory_check(args) -> int:
    eps = [float(e) for e in args.epsilons.split(",")] if args.epsilons else (
        0.0, 0.05 * math.pi, 0.1 * math.pi, 0.2 * math.pi
    )
    records = run_theory_suite(eps)
    text = json.dumps(records, indent=1) + "\n"
    if args.out:
        _write(Path(args.out) / "theory_checks.json", text)
    else:
        print(text, end="")
    bad = [r for r in records if not r["pass"]]
    return 1 if bad else 0


def _read_series_column(path: str, observable: str, region: str):
    steps, means, errs = [], [], []
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        if header[:3] != ["step", "observable", "region"]:
            raise ConfigError(f"{path}: not a series CSV")
        for line in fh:
            parts = line.strip().split(",")
            if len(parts) != 5:
                continue
            if parts[1] == observable and parts[2] == region:
                steps.append(int(parts[0]))
                means.append(float(parts[3]))
                errs.append(float(parts[4]))
    if not steps:
        raise ConfigError(
            f"{path}: no rows with observable={observable!r} region={region!r}"
        )
    order = np.argsort(steps)
    return (
        np.array(steps)[order],
        np.array(means)[order],
        np.array(errs)[order],
    )


def cmd_fit(args) -> int:
    _, means, errs = _read_series_column(args.series, args.observable, args.region)
    values = np.abs(means) if args.abs else means
    stderr = errs if args.weighted and np.any(errs > 0) else None
    if args.model == "single":
        eta = fit_single_exp(values, stderr=stderr)
        resid = float(np.linalg.norm(eta ** np.arange(len(values)) - values))
        doc = {"model": "single_exp", "params": {"eta": eta}, "residual": resid}
    else:
        fit = fit_double_exp(values, stderr=stderr)
        doc = {
            "model": "double_exp",
            "params": {
                "alpha1": fit.alpha1,
                "eta1": fit.eta1,
                "alpha2": fit.alpha2,
                "eta2": fit.eta2,
            },
            "residual": fit.residual,
        }
    text = json.dumps(doc, indent=1) + "\n"
    if args.out:
        _write(Path(args.out), text)
    else:
        print(text, end="")
    return 0


def cmd_mitigate(args) -> int:
    steps, raw, raw_err = _read_series_column(
        args.raw, args.observable, args.region
    )
    _, ref, _ = _read_series_column(
        args.reference, args.observable, args.region
    )
    result = mitigate(raw, ref, floor=args.floor)
    lines = ["step,observable,region,mean,stderr"]
    for i, s in enumerate(steps):
        if result.valid[i]:
            m = result.values[i]
            e = raw_err[i] / abs(ref[i])
        else:
            m = e = float("nan")
        lines.append(
            f"{int(s)},{args.observable}_mitigated,{args.region},"
            f"{m:.17g},{e:.17g}"
        )
    text = "\n".join(lines) + "\n"
    if args.out:
        _write(Path(args.out), text)
    else:
        print(text, end="")
    return 0


def cmd_emit_circuit(args) -> int:
    lat = build_preset(args.lattice)
    params = FloquetParams(
        parse_angle_arg(args.theta_x), parse_angle_arg(args.theta_j), args.model
    )
    cycle = build_cycle(lat, params)
    count = native_gate_count(lat, args.m_cnot)
    header = (
        f"# native_2q_gates_per_cycle={count} m_cnot={args.m_cnot} "
        f"lattice={args.lattice}\n"
    )
    text = cycle.to_text()
    first_newline = text.index("\n") + 1
    text = text[:first_newline] + header + text[first_newline:]
    if args.out:
        _write(Path(args.out), text)
    else:
        print(text, end="")
    return 0


def parse_angle_arg(value: str) -> float:
    from .config import parse_angle

    return parse_angle(value, "angle")


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="floqsim",
        description="Floquet kicked Ising / kicked CZ simulator",
    )
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("presets", help="list lattice presets")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_presets)

    for name, fn, help_ in (
        ("simulate", cmd_simulate, "run a magnetization ensemble"),
        ("otoc", cmd_otoc, "run an OTOC ensemble"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", required=True)
        p.add_argument("--out", required=True)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--threads", type=int, default=None)
        p.set_defaults(func=fn)

    p = sub.add_parser("theory-check", help="run the operator-identity suite")
    p.add_argument("--out", default=None)
    p.add_argument("--epsilons", default=None,
                   help="comma-separated epsilon values in radians")
    p.set_defaults(func=cmd_theory_check)

    p = sub.add_parser("fit", help="fit an exponential decay to a series CSV")
    p.add_argument("--series", required=True)
    p.add_argument("--model", choices=("single", "double"), default="single")
    p.add_argument("--observable", default="z_avg")
    p.add_argument("--region", default="all")
    p.add_argument("--abs", action="store_true",
                   help="fit |mean| instead of mean")
    p.add_argument("--weighted", action="store_true",
                   help="inverse-variance weighting from the stderr column")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("mitigate", help="divide a raw series by a pi-pulse "
                                        "reference series")
    p.add_argument("--raw", required=True)
    p.add_argument("--reference", required=True)
    p.add_argument("--observable", default="z_avg")
    p.add_argument("--region", default="all")
    p.add_argument("--floor", type=float, default=1e-3)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_mitigate)

    p = sub.add_parser("emit-circuit", help="print one Floquet cycle as text")
    p.add_argument("--lattice", required=True)
    p.add_argument("--theta-x", default="pi")
    p.add_argument("--theta-j", default="-0.5pi")
    p.add_argument("--model", choices=("Ising", "CZ"), default="Ising")
    p.add_argument("--m-cnot", type=int, default=3, dest="m_cnot")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_emit_circuit)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # contract: error JSON + nonzero on any failure
        print(
            json.dumps(
                {"error": type(exc).__name__, "message": str(exc)}
            )
        )
        return 1


if __name__ == "__main__":
    sys.exit(main())
