"""Statevector engine: kernels, observables, OTOC, dense cross-validation."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from floqsim import (
    CZ,
    FloquetParams,
    NoiseState,
    PauliString,
    apply_cycle,
    apply_gate,
    build_cycle,
    build_preset,
    expectation_pauli,
    init_all_zero,
    invert_cycle,
    otoc,
    z_site_expectations,
)
from floqsim import engine
from floqsim.circuit import Cycle, Gate
from floqsim.engine import CapacityError
from floqsim.lattice import chain
from floqsim.theory import dense_unitary


def test_init_all_zero():
    st = init_all_zero(3)
    assert st.amps[0] == 1.0
    assert np.count_nonzero(st.amps) == 1
    assert st.norm() == pytest.approx(1.0)
    assert np.allclose(z_site_expectations(st), 1.0)


def test_capacity_bounds():
    with pytest.raises(CapacityError):
        init_all_zero(0)
    with pytest.raises(CapacityError):
        init_all_zero(27)


def test_pi_pulse_flip():
    lat = build_preset("Square16")
    cyc = build_cycle(lat, FloquetParams(math.pi))
    st = init_all_zero(lat.n_sites)
    for n in range(1, 8):
        apply_cycle(st, cyc)
        assert np.allclose(z_site_expectations(st), (-1.0) ** n, atol=1e-12)
    st.check_norm()


def test_equator_rotation():
    """theta_J = 0, theta_x = pi/2: every spin ends on the equator."""
    lat = chain(3)
    cyc = build_cycle(lat, FloquetParams(math.pi / 2, theta_J=0.0))
    st = init_all_zero(3)
    apply_cycle(st, cyc)
    assert np.allclose(z_site_expectations(st), 0.0, atol=1e-12)


def test_pauli_expectations_on_zero_state():
    st = init_all_zero(2)
    assert expectation_pauli(st, PauliString.z(0)) == pytest.approx(1.0)
    assert expectation_pauli(st, PauliString.x(0)) == pytest.approx(0.0)
    zz = PauliString.from_dict({0: "Z", 1: "Z"})
    assert expectation_pauli(st, zz) == pytest.approx(1.0)


def test_pauli_y_expectation():
    # RX(pi/2) on |0> gives <Y> = -1 with RX = exp(-i theta X/2)
    st = init_all_zero(1)
    apply_gate(st, Gate("RX", (0,), math.pi / 2))
    y = PauliString.from_dict({0: "Y"})
    assert expectation_pauli(st, y) == pytest.approx(-1.0)


def test_pauli_string_validation():
    with pytest.raises(ValueError):
        PauliString.from_dict({})
    with pytest.raises(ValueError):
        PauliString.from_dict({0: "Q"})


def test_rzz_reordering_invariance():
    """Diagonal bond gates commute: permuting them leaves the state alone."""
    lat = build_preset("Kagome19")
    params = FloquetParams(0.9 * math.pi)
    cyc = build_cycle(lat, params)
    rx = [g for g in cyc.gates if g.kind == "RX"]
    zz = [g for g in cyc.gates if g.kind == "RZZ"]
    rng = np.random.default_rng(1)
    ref = init_all_zero(lat.n_sites)
    apply_cycle(ref, cyc)
    for _ in range(3):
        perm = list(rng.permutation(len(zz)))
        shuffled = Cycle(
            gates=tuple(rx + [zz[i] for i in perm]),
            model=cyc.model, theta_x=cyc.theta_x, theta_J=cyc.theta_J,
            n_sites=cyc.n_sites,
        )
        st = init_all_zero(lat.n_sites)
        apply_cycle(st, shuffled)
        assert np.max(np.abs(st.amps - ref.amps)) < 1e-12


def test_cycle_then_inverse_is_identity():
    lat = build_preset("Square16")  # only needs 8 qubits? use chain(8)
    lat = chain(8)
    cyc = build_cycle(lat, FloquetParams(0.87 * math.pi))
    st = init_all_zero(8)
    # arbitrary start state
    rng = np.random.default_rng(5)
    st.amps[:] = rng.normal(size=256) + 1j * rng.normal(size=256)
    st.amps /= np.linalg.norm(st.amps)
    ref = st.amps.copy()
    apply_cycle(st, cyc)
    apply_cycle(st, invert_cycle(cyc))
    assert np.max(np.abs(st.amps - ref)) < 1e-12


@pytest.mark.parametrize("model", ["Ising", "CZ"])
def test_engine_matches_dense_unitary(model):
    """Column-by-column agreement with the dense builder on L=8."""
    lat = chain(8)
    params = FloquetParams(0.9 * math.pi, model=model)
    u = dense_unitary(lat, params)
    cyc = build_cycle(lat, params)
    rng = np.random.default_rng(2)
    for col in rng.integers(0, 256, size=6):
        st = init_all_zero(8)
        st.amps[:] = 0.0
        st.amps[col] = 1.0
        apply_cycle(st, cyc)
        assert np.max(np.abs(st.amps - u[:, col])) < 1e-10


def test_evolution_linearity():
    lat = chain(6)
    cyc = build_cycle(lat, FloquetParams(0.9 * math.pi))
    rng = np.random.default_rng(3)
    a = rng.normal(size=64) + 1j * rng.normal(size=64)
    b = rng.normal(size=64) + 1j * rng.normal(size=64)
    sa, sb, sab = (init_all_zero(6) for _ in range(3))
    sa.amps[:] = a
    sb.amps[:] = b
    sab.amps[:] = 0.3 * a + 0.7j * b
    for s in (sa, sb, sab):
        apply_cycle(s, cyc)
    assert np.max(np.abs(0.3 * sa.amps + 0.7j * sb.amps - sab.amps)) < 1e-12


def test_otoc_trivial_values():
    lat = build_preset("Square16")
    params = FloquetParams(0.9 * math.pi)
    assert otoc(lat, params, None, 0, 5, 0) == pytest.approx(1.0)
    assert otoc(lat, params, None, 5, 5, 0) == pytest.approx(-1.0)


def test_otoc_bounded_and_starts_at_one():
    lat = build_preset("square(2,2)")
    params = FloquetParams(0.9 * math.pi)
    vals = [otoc(lat, params, None, 0, 8, n) for n in range(5)]
    assert vals[0] == pytest.approx(1.0)
    assert all(-1 - 1e-9 <= v <= 1 + 1e-9 for v in vals)


def test_otoc_light_cone():
    """Before the light cone of depth n connects j and k, the OTOC stays 1."""
    lat = chain(9)
    params = FloquetParams(0.9 * math.pi)
    for n in range(1, 4):
        v = otoc(lat, params, None, 0, 8, n)
        assert v == pytest.approx(1.0, abs=1e-10), n


def test_noisy_otoc_is_unitary_per_trajectory():
    lat = build_preset("Kagome19")
    params = FloquetParams(0.95 * math.pi)
    noise = NoiseState.for_lattice(lat, 0.2, np.random.default_rng(11))
    v = otoc(lat, params, noise, 0, 18, 4)
    assert -1 - 1e-9 <= v <= 1 + 1e-9


def test_norm_preserved_noisy():
    lat = build_preset("Kagome19")
    cyc = build_cycle(lat, FloquetParams(0.95 * math.pi))
    noise = NoiseState.for_lattice(lat, 0.5, np.random.default_rng(4))
    st = init_all_zero(lat.n_sites)
    from floqsim import realize_noisy_cycle

    for _ in range(10):
        apply_cycle(st, realize_noisy_cycle(cyc, noise))
        st.check_norm()


@given(
    st.floats(min_value=-2 * math.pi, max_value=2 * math.pi),
    st.floats(min_value=-2 * math.pi, max_value=2 * math.pi),
    st.booleans(),
)
@settings(max_examples=20, deadline=None)
def test_cycle_norm_and_inverse_property(theta_x, theta_j, cz_model):
    lat = chain(5)
    params = FloquetParams(theta_x, theta_j, "CZ" if cz_model else "Ising")
    cyc = build_cycle(lat, params)
    st_ = init_all_zero(5)
    ref = st_.amps.copy()
    apply_cycle(st_, cyc)
    assert abs(st_.norm() - 1.0) < 1e-12
    apply_cycle(st_, invert_cycle(cyc))
    assert np.max(np.abs(st_.amps - ref)) < 1e-10


def test_numpy_backend_agrees_with_numba():
    lat = build_preset("Kagome19")
    cyc = build_cycle(lat, FloquetParams(0.93 * math.pi))
    engine.use_numba(True)
    a = init_all_zero(lat.n_sites)
    for _ in range(3):
        apply_cycle(a, cyc)
    engine.use_numba(False)
    b = init_all_zero(lat.n_sites)
    for _ in range(3):
        apply_cycle(b, cyc)
    engine.use_numba(True)
    assert np.max(np.abs(a.amps - b.amps)) < 1e-12
    assert np.max(np.abs(z_site_expectations(a) - z_site_expectations(b))) < 1e-12
