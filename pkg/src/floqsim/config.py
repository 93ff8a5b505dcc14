"""Run configuration: strict JSON parsing with physics-parameter validation.

Angles may be given as radians or as strings like "0.95pi"; unknown keys
are fatal (a silent typo in a physics parameter is the worst failure mode).
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field

from .trajectories import Otoc, Snapshot, ZAvg


class ConfigError(ValueError):
    pass


_PI_RE = re.compile(r"^\s*(-?\d*\.?\d*)\s*pi\s*$", re.IGNORECASE)


def parse_angle(value, field_name: str) -> float:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        angle = float(value)
    elif isinstance(value, str):
        m = _PI_RE.match(value)
        if not m:
            raise ConfigError(
                f"{field_name}: cannot parse angle {value!r} "
                "(use radians or '<x>pi')"
            )
        coef = m.group(1)
        if coef in ("", "-"):
            coef += "1"
        angle = float(coef) * math.pi
    else:
        raise ConfigError(f"{field_name}: expected number or '<x>pi' string")
    if not math.isfinite(angle):
        raise ConfigError(f"{field_name}: angle must be finite")
    return angle


@dataclass
class RunConfig:
    lattice: str | dict
    theta_x: float
    model: str = "Ising"
    theta_J: float = -math.pi / 2
    p: float = 0.0
    n_steps: int = 1
    n_traj: int = 200
    seed: int = 0
    observables: list = field(
        default_factory=lambda: [{"kind": "z_avg", "region": "all"}]
    )
    regions: list = field(default_factory=list)
    n_shots: int | None = None
    m_cnot: int = 3

    def to_dict(self) -> dict:
        return {
            "lattice": self.lattice,
            "model": self.model,
            "theta_x": self.theta_x,
            "theta_J": self.theta_J,
            "p": self.p,
            "n_steps": self.n_steps,
            "n_traj": self.n_traj,
            "seed": self.seed,
            "observables": self.observables,
            "regions": self.regions,
            "n_shots": self.n_shots,
            "m_cnot": self.m_cnot,
        }

    def observable_objects(self):
        out = []
        for i, obs in enumerate(self.observables):
            kind = obs.get("kind")
            extra = set(obs) - {"kind", "region", "steps", "j", "k"}
            if extra:
                raise ConfigError(f"observables[{i}]: unknown keys {sorted(extra)}")
            if kind == "z_avg":
                out.append(ZAvg(obs.get("region", "all")))
            elif kind == "snapshot":
                steps = obs.get("steps")
                if not isinstance(steps, list) or not steps:
                    raise ConfigError(f"observables[{i}]: snapshot needs steps")
                out.append(Snapshot(tuple(int(s) for s in steps)))
            elif kind == "otoc":
                if "j" not in obs or "k" not in obs:
                    raise ConfigError(f"observables[{i}]: otoc needs j and k")
                steps = obs.get("steps")
                out.append(
                    Otoc(
                        int(obs["j"]),
                        int(obs["k"]),
                        tuple(int(s) for s in steps) if steps else None,
                    )
                )
            else:
                raise ConfigError(
                    f"observables[{i}]: unknown kind {kind!r} "
                    "(z_avg | snapshot | otoc)"
                )
        return out

    def custom_regions(self) -> dict[str, frozenset[int]]:
        out = {}
        for i, reg in enumerate(self.regions):
            if set(reg) != {"name", "sites"}:
                raise ConfigError(f"regions[{i}]: need exactly name and sites")
            out[str(reg["name"])] = frozenset(int(s) for s in reg["sites"])
        return out


_KNOWN_KEYS = {
    "lattice", "model", "theta_x", "theta_J", "p", "n_steps", "n_traj",
    "seed", "observables", "regions", "n_shots", "m_cnot",
}


def parse_config(doc: dict | str) -> RunConfig:
    """Validate a config document (or JSON text); unknown keys are fatal.

    A run manifest ({"tool": "floqsim", "config": {...}}) is accepted
    directly, so any run can be reproduced from its manifest.
    """
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    if doc.get("tool") == "floqsim" and "config" in doc:
        doc = doc["config"]
    unknown = set(doc) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "lattice" not in doc:
        raise ConfigError("missing required key: lattice")
    if "theta_x" not in doc:
        raise ConfigError("missing required key: theta_x")

    def geti(key, default, lo=None):
        v = doc.get(key, default)
        if v is None and key == "n_shots":
            return None
        if isinstance(v, bool) or not isinstance(v, int):
            raise ConfigError(f"{key}: expected integer, got {v!r}")
        if lo is not None and v < lo:
            raise ConfigError(f"{key}: must be >= {lo}")
        return v

    model = doc.get("model", "Ising")
    if model not in ("Ising", "CZ"):
        raise ConfigError(f"model: must be 'Ising' or 'CZ', got {model!r}")
    p = doc.get("p", 0.0)
    if isinstance(p, bool) or not isinstance(p, (int, float)) or not 0 <= p <= 1:
        raise ConfigError(f"p: must be a number in [0, 1], got {p!r}")
    cfg = RunConfig(
        lattice=doc["lattice"],
        theta_x=parse_angle(doc["theta_x"], "theta_x"),
        model=model,
        theta_J=parse_angle(doc.get("theta_J", -math.pi / 2), "theta_J"),
        p=float(p),
        n_steps=geti("n_steps", 1, lo=1),
        n_traj=geti("n_traj", 200, lo=1),
        seed=geti("seed", 0, lo=0),
        observables=doc.get(
            "observables", [{"kind": "z_avg", "region": "all"}]
        ),
        regions=doc.get("regions", []),
        n_shots=geti("n_shots", None, lo=1),
        m_cnot=geti("m_cnot", 3),
    )
    cfg.observable_objects()  # validate eagerly
    cfg.custom_regions()
    return cfg
