"""floqsim: Floquet dynamics of kicked Ising and kicked CZ models on 2D
lattice clusters, with ancilla sign-flip noise, error mitigation, OTOC
diagnostics, and operator-identity checks."""

__version__ = "0.1.0"

from .circuit import (
    CZ,
    ISING,
    Cycle,
    FloquetParams,
    Gate,
    NoiseState,
    build_cycle,
    invert_cycle,
    native_gate_count,
    realize_noisy_cycle,
)
from .engine import (
    PauliString,
    StateVector,
    apply_cycle,
    apply_gate,
    expectation_pauli,
    init_all_zero,
    otoc,
    otoc_from_cycles,
    z_site_expectations,
)
from .lattice import (
    Lattice,
    PRESET_NAMES,
    build_preset,
    charge_pump_set,
    coordination,
    kagome,
    lieb,
    square,
)
from .mitigation import (
    ExpFit,
    fit_double_exp,
    fit_single_exp,
    mitigate,
    synth_depolarize,
)
from .trajectories import (
    EnsembleSeries,
    NoiseCalibration,
    Otoc,
    Snapshot,
    ZAvg,
    eta_from_gates,
    p_from_eta,
    region_average,
    run_ensemble,
    series_to_csv,
    signflip_rate_single_flip,
    snapshots_to_csv,
)

__all__ = [name for name in dir() if not name.startswith("_")]
