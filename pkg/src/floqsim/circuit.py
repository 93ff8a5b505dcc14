"""Single-cycle Floquet gate programs and the ancilla sign-flip noise process.

One drive cycle applies a global X rotation to every site and then the
coupling layer: a ZZ rotation per bond (kicked Ising) or a CZ per bond
(kicked CZ).  Each coupling gate is mediated by an ancilla group; ancilla
bit-flip noise is modelled by one persistent bit xi per group that flips
with probability p immediately before each ZZ gate that uses the group and
negates the rotation angle while set.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .lattice import Lattice

ISING = "Ising"
CZ = "CZ"

GATE_KINDS = ("RX", "RZZ", "CZ", "S", "SDAG", "Z", "X")


class Gate(NamedTuple):
    kind: str
    sites: tuple[int, ...]
    angle: float = 0.0
    ancilla: int | None = None


@dataclass(frozen=True)
class FloquetParams:
    """Drive parameters: rotation angles per cycle and the model variant.

    theta_x = h_x * T and theta_J = -J * T; the perturbation from the
    pi-pulse point is epsilon = pi - theta_x.
    """

    theta_x: float
    theta_J: float = -math.pi / 2
    model: str = ISING

    def __post_init__(self):
        if self.model not in (ISING, CZ):
            raise ValueError(f"model must be {ISING!r} or {CZ!r}")
        if not (math.isfinite(self.theta_x) and math.isfinite(self.theta_J)):
            raise ValueError("angles must be finite")

    @property
    def epsilon(self) -> float:
        return math.pi - self.theta_x


@dataclass(frozen=True)
class Cycle:
    """Ordered gate list for one Floquet period."""

    gates: tuple[Gate, ...]
    model: str
    theta_x: float
    theta_J: float
    n_sites: int

    def __iter__(self):
        return iter(self.gates)

    def to_text(self) -> str:
        lines = [
            f"# cycle model={self.model} "
            f"thetaX={self.theta_x:.17g} thetaJ={self.theta_J:.17g}"
        ]
        for g in self.gates:
            if g.kind == "RX":
                lines.append(f"RX {g.sites[0]} {g.angle:.17g}")
            elif g.kind == "RZZ":
                lines.append(
                    f"RZZ {g.sites[0]} {g.sites[1]} {g.angle:.17g} "
                    f"anc={g.ancilla}"
                )
            elif g.kind == "CZ":
                lines.append(f"CZ {g.sites[0]} {g.sites[1]}")
            else:
                lines.append(f"{g.kind} " + " ".join(str(s) for s in g.sites))
        return "\n".join(lines) + "\n"


def build_cycle(lattice: Lattice, params: FloquetParams) -> Cycle:
    """X-rotation kick on every site, then the bond layer in color order.

    Within a layer, bonds run in ascending (i, j) order; all diagonal bond
    gates commute, so the order only pins down how noise realizations
    sample gates.
    """
    gates = [Gate("RX", (q,), params.theta_x) for q in range(lattice.n_sites)]
    by_layer = sorted(
        range(lattice.n_edges),
        key=lambda e: (lattice.edge_layer[e], lattice.edges[e]),
    )
    for e in by_layer:
        i, j = lattice.edges[e]
        anc = lattice.ancilla_of_edge[e]
        if params.model == ISING:
            gates.append(Gate("RZZ", (i, j), params.theta_J, anc))
        else:
            gates.append(Gate("CZ", (i, j), 0.0, anc))
    return Cycle(
        gates=tuple(gates),
        model=params.model,
        theta_x=params.theta_x,
        theta_J=params.theta_J,
        n_sites=lattice.n_sites,
    )


class NoiseState:
    """Persistent ancilla proxy bits, one per ancilla group.

    xi starts at 0 for every group and is never reset: a bit that flipped
    on may flip back at a later gate with the same probability.
    """

    def __init__(self, p: float, n_groups: int, rng: np.random.Generator):
        if not 0.0 <= p <= 1.0:
            raise ValueError("flip probability p must be in [0, 1]")
        self.p = p
        self.xi = np.zeros(n_groups, dtype=np.uint8)
        self.rng = rng

    @classmethod
    def for_lattice(
        cls, lattice: Lattice, p: float, rng: np.random.Generator
    ) -> "NoiseState":
        n_groups = 1 + max(lattice.ancilla_of_edge, default=-1)
        return cls(p, n_groups, rng)


def realize_noisy_cycle(cycle: Cycle, noise: NoiseState) -> Cycle:
    """One stochastic realization of a cycle.

    Iterating gates in cycle order: before each RZZ the group's xi flips
    with probability p (flip-before-apply), and the gate is emitted with
    angle (1 - 2 xi) * theta_J.  xi persists across cycles.  RX gates pass
    through; CZ gates carry no angle, so the trajectory machinery leaves
    them unchanged.
    """
    out = []
    for g in cycle.gates:
        if g.kind == "RZZ":
            if g.ancilla is None:
                raise ValueError(f"RZZ on {g.sites} carries no ancilla group")
            if noise.p > 0 and noise.rng.random() < noise.p:
                noise.xi[g.ancilla] ^= 1
            sign = 1.0 - 2.0 * float(noise.xi[g.ancilla])
            out.append(g._replace(angle=sign * g.angle))
        else:
            out.append(g)
    return Cycle(
        gates=tuple(out),
        model=cycle.model,
        theta_x=cycle.theta_x,
        theta_J=cycle.theta_J,
        n_sites=cycle.n_sites,
    )


_INVERSE = {"S": "SDAG", "SDAG": "S", "Z": "Z", "X": "X", "CZ": "CZ"}


def invert_cycle(cycle: Cycle) -> Cycle:
    """Reverse the gate order and negate angles: U_cycle * U_inverse = 1."""
    out = []
    for g in reversed(cycle.gates):
        if g.kind in ("RX", "RZZ"):
            out.append(g._replace(angle=-g.angle))
        else:
            out.append(g._replace(kind=_INVERSE[g.kind]))
    return Cycle(
        gates=tuple(out),
        model=cycle.model,
        theta_x=-cycle.theta_x,
        theta_J=-cycle.theta_J,
        n_sites=cycle.n_sites,
    )


def native_gate_count(lattice: Lattice, m_cnot: int) -> int:
    """Native two-qubit gates per Floquet step when each ZZ rotation costs
    m_cnot CNOT-equivalents through its ancilla phase gadget."""
    if m_cnot not in (3, 4):
        raise ValueError("m_cnot must be 3 or 4")
    return m_cnot * lattice.n_edges
