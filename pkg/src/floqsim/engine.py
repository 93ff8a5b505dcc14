"""Dense 2^L statevector evolution with bit-indexed gate kernels.

The fast path uses numba JIT kernels (parallel over amplitudes, results
independent of thread count); a pure-numpy fallback keeps everything
working where JIT is unavailable.  Diagonal bond layers are applied in one
sweep: the accumulated integer d = sum_e s_e (-1)^(parity of bits i,j)
indexes a small phase table, so a whole noisy ZZ layer costs one pass.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import Cycle, FloquetParams, Gate, NoiseState, build_cycle, invert_cycle, realize_noisy_cycle
from .lattice import Lattice

MAX_QUBITS = 26
NORM_TOL = 1e-10
IMAG_TOL = 1e-10

try:
    from . import _kernels_numba as _K

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _K = None
    _HAVE_NUMBA = False

_use_numba = _HAVE_NUMBA


def use_numba(flag: bool) -> None:
    """Switch between JIT and numpy kernels (mainly for tests)."""
    global _use_numba
    _use_numba = bool(flag) and _HAVE_NUMBA


class CapacityError(ValueError):
    pass


class NumericalIntegrityError(RuntimeError):
    pass


@dataclass
class StateVector:
    n_qubits: int
    amps: np.ndarray

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amps.copy())

    def norm(self) -> float:
        x = self.amps.view(np.float64)
        return math.sqrt(float(np.einsum("i,i->", x, x)))

    def check_norm(self, tol: float = NORM_TOL) -> None:
        if abs(self.norm() - 1.0) > tol:
            raise NumericalIntegrityError(
                f"state norm drifted to {self.norm():.15f}"
            )


def init_all_zero(n: int) -> StateVector:
    """|00...0>: the fully polarized +Z product state."""
    if not 1 <= n <= MAX_QUBITS:
        raise CapacityError(
            f"n_qubits={n} outside supported range 1..{MAX_QUBITS}"
        )
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(n, amps)


# --------------------------------------------------------------------------
# single-gate kernels (numpy fallback versions)
# --------------------------------------------------------------------------

def _np_rx(amps: np.ndarray, q: int, c: float, s: float) -> None:
    v = amps.reshape(-1, 2, 1 << q)
    a = v[:, 0, :].copy()
    b = v[:, 1, :]
    mis = -1j * s
    v[:, 0, :] = c * a + mis * b
    v[:, 1, :] = mis * a + c * b


def _np_x(amps: np.ndarray, q: int) -> None:
    v = amps.reshape(-1, 2, 1 << q)
    v[:, [0, 1], :] = v[:, [1, 0], :]


def _np_diag_one(amps: np.ndarray, q: int, phase: complex) -> None:
    v = amps.reshape(-1, 2, 1 << q)
    v[:, 1, :] *= phase


def _np_zz_layer(amps, ii, jj, signs, table, offset) -> None:
    idx = np.arange(amps.size, dtype=np.uint64)
    d = np.zeros(amps.size, dtype=np.int64)
    for e in range(len(ii)):
        par = ((idx >> np.uint64(ii[e])) ^ (idx >> np.uint64(jj[e]))) & np.uint64(1)
        d += signs[e] * (1 - 2 * par.astype(np.int64))
    amps *= table[d + offset]


def _np_cz_layer(amps, ii, jj) -> None:
    idx = np.arange(amps.size, dtype=np.uint64)
    par = np.zeros(amps.size, dtype=np.uint64)
    for e in range(len(ii)):
        par ^= (idx >> np.uint64(ii[e])) & (idx >> np.uint64(jj[e])) & np.uint64(1)
    amps[par == 1] *= -1.0


def _rx(amps, q, theta):
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    if _use_numba:
        _K.rx_one(amps, q, c, s)
    else:
        _np_rx(amps, q, c, s)


def _zz_layer(amps, ii, jj, signs, mag):
    n_e = len(ii)
    table = np.exp(-0.5j * mag * np.arange(-n_e, n_e + 1))
    if _use_numba:
        _K.zz_layer(amps, ii, jj, signs, table, n_e)
    else:
        _np_zz_layer(amps, ii, jj, signs, table, n_e)


def _cz_layer(amps, ii, jj):
    if _use_numba:
        _K.cz_layer(amps, ii, jj)
    else:
        _np_cz_layer(amps, ii, jj)


_PHASES = {"Z": -1.0 + 0.0j, "S": 1.0j, "SDAG": -1.0j}


def apply_gate(state: StateVector, gate: Gate) -> None:
    amps = state.amps
    if gate.kind == "RX":
        _rx(amps, gate.sites[0], gate.angle)
    elif gate.kind == "RZZ":
        ii = np.array([gate.sites[0]], dtype=np.int64)
        jj = np.array([gate.sites[1]], dtype=np.int64)
        _zz_layer(amps, ii, jj, np.ones(1, dtype=np.int64), gate.angle)
    elif gate.kind == "CZ":
        _cz_layer(
            amps,
            np.array([gate.sites[0]], dtype=np.int64),
            np.array([gate.sites[1]], dtype=np.int64),
        )
    elif gate.kind == "X":
        if _use_numba:
            _K.x_one(amps, gate.sites[0])
        else:
            _np_x(amps, gate.sites[0])
    elif gate.kind in _PHASES:
        if _use_numba:
            _K.diag_one(amps, gate.sites[0], _PHASES[gate.kind])
        else:
            _np_diag_one(amps, gate.sites[0], _PHASES[gate.kind])
    else:
        raise ValueError(f"unknown gate kind {gate.kind!r}")


def apply_cycle(state: StateVector, cycle: Cycle) -> StateVector:
    """Apply one cycle in place.  Runs of commuting RZZ (or CZ) records are
    fused into a single diagonal sweep."""
    if cycle.n_sites > state.n_qubits:
        raise CapacityError("cycle addresses more qubits than the state has")
    amps = state.amps
    i = 0
    gates = cycle.gates
    n = len(gates)
    while i < n:
        g = gates[i]
        if g.kind == "RZZ":
            j = i
            while j < n and gates[j].kind == "RZZ":
                j += 1
            block = gates[i:j]
            mag = abs(block[0].angle)
            if all(abs(b.angle) == mag for b in block) and mag > 0.0:
                ii = np.array([b.sites[0] for b in block], dtype=np.int64)
                jj = np.array([b.sites[1] for b in block], dtype=np.int64)
                signs = np.array(
                    [1 if b.angle >= 0 else -1 for b in block], dtype=np.int64
                )
                _zz_layer(amps, ii, jj, signs, mag)
            else:
                for b in block:
                    if b.angle != 0.0:
                        apply_gate(state, b)
            i = j
        elif g.kind == "CZ":
            j = i
            while j < n and gates[j].kind == "CZ":
                j += 1
            block = gates[i:j]
            ii = np.array([b.sites[0] for b in block], dtype=np.int64)
            jj = np.array([b.sites[1] for b in block], dtype=np.int64)
            _cz_layer(amps, ii, jj)
            i = j
        else:
            apply_gate(state, g)
            i += 1
    return state


# --------------------------------------------------------------------------
# observables
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PauliString:
    """Product of single-site Paulis, identity elsewhere."""

    ops: tuple[tuple[int, str], ...]  # sorted (site, 'X'|'Y'|'Z')

    @classmethod
    def from_dict(cls, d: dict[int, str]) -> "PauliString":
        if not d:
            raise ValueError("PauliString needs non-empty support")
        ops = tuple(sorted((int(s), a.upper()) for s, a in d.items()))
        for s, a in ops:
            if a not in ("X", "Y", "Z"):
                raise ValueError(f"bad Pauli {a!r} at site {s}")
        return cls(ops)

    @classmethod
    def z(cls, site: int) -> "PauliString":
        return cls(((site, "Z"),))

    @classmethod
    def x(cls, site: int) -> "PauliString":
        return cls(((site, "X"),))


def apply_pauli(state: StateVector, pauli: PauliString) -> StateVector:
    """Return P|psi> (new state)."""
    n = state.n_qubits
    for s, _ in pauli.ops:
        if not 0 <= s < n:
            raise ValueError(f"Pauli site {s} out of range")
    flip = 0
    for s, a in pauli.ops:
        if a in ("X", "Y"):
            flip |= 1 << s
    idx = np.arange(state.amps.size, dtype=np.uint64)
    out = state.amps[idx ^ np.uint64(flip)].copy()
    phase = np.ones(state.amps.size, dtype=np.complex128)
    for s, a in pauli.ops:
        bit = ((idx >> np.uint64(s)) & np.uint64(1)).astype(bool)
        if a == "Z":
            phase[bit] *= -1.0
        elif a == "Y":
            # (Y psi)[i] = +i psi[i^1] if bit_s(i)=1 else -i psi[i^1]
            phase[bit] *= 1.0j
            phase[~bit] *= -1.0j
    out *= phase
    return StateVector(n, out)


def expectation_pauli(state: StateVector, pauli: PauliString) -> float:
    """Real expectation <psi|P|psi>; complains if an imaginary part leaks."""
    val = complex(np.vdot(state.amps, apply_pauli(state, pauli).amps))
    if abs(val.imag) > IMAG_TOL:
        raise NumericalIntegrityError(
            f"expectation has imaginary residue {val.imag:.3e}"
        )
    return float(val.real)


def z_site_expectations(state: StateVector) -> np.ndarray:
    """<Z_q> for all qubits."""
    if _use_numba:
        return _K.z_site_sums(state.amps, state.n_qubits)
    p = np.abs(state.amps) ** 2
    out = np.empty(state.n_qubits)
    for q in range(state.n_qubits):
        v = p.reshape(-1, 2, 1 << q)
        out[q] = v[:, 0, :].sum() - v[:, 1, :].sum()
    return out


# --------------------------------------------------------------------------
# OTOC
# --------------------------------------------------------------------------

def otoc_from_cycles(n_sites: int, seq, j: int, k: int) -> float:
    """OTOC of X_j against Z_k after the given (already realized) cycle
    sequence; the same sequence is reused, reversed with negated angles, in
    the backward passes, so each realization stays unitary."""
    inv = [invert_cycle(c) for c in reversed(seq)]
    xj = Gate("X", (j,))
    zk = Gate("Z", (k,))

    def apply_w(state: StateVector) -> None:
        for c in seq:
            apply_cycle(state, c)
        apply_gate(state, xj)
        for c in inv:
            apply_cycle(state, c)

    a = init_all_zero(n_sites)
    apply_gate(a, zk)
    apply_w(a)
    b = init_all_zero(n_sites)
    apply_w(b)
    apply_gate(b, zk)
    return float(np.vdot(b.amps, a.amps).real)


def otoc(
    lattice: Lattice,
    params: FloquetParams,
    noise: NoiseState | None,
    j: int,
    k: int,
    n: int,
) -> float:
    """<X_j(nT) Z_k X_j(nT) Z_k> on the all-zero initial state.

    Computed from two branch states a = W V |psi0>, b = V W |psi0> with
    W = U^-n X_j U^n and V = Z_k; the result is Re <b|a>.  In noisy mode
    the n realized cycles are drawn once per trajectory and shared by both
    branches.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    for site in (j, k):
        if not 0 <= site < lattice.n_sites:
            raise ValueError(f"site {site} out of range")
    base = build_cycle(lattice, params)
    if noise is None:
        seq = [base] * n
    else:
        seq = [realize_noisy_cycle(base, noise) for _ in range(n)]
    return otoc_from_cycles(lattice.n_sites, seq, j, k)
