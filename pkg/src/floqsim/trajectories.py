"""Monte Carlo ensemble driver over ancilla-noise realizations.

Each trajectory owns an independent counter-based RNG stream (Philox keyed
by the master seed and the trajectory index), so results are reproducible
bit-for-bit regardless of execution order or thread count.  Aggregation
stores per-trajectory values into index-addressed arrays and reduces with
numpy's pairwise summation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import FloquetParams, NoiseState, build_cycle, realize_noisy_cycle
from .engine import (
    apply_cycle,
    init_all_zero,
    otoc_from_cycles,
    z_site_expectations,
)
from .lattice import Lattice


# --------------------------------------------------------------------------
# noise-calibration conversion chain
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class NoiseCalibration:
    """Conversion chain from per-gate error rate to the sign-flip rate."""

    eps_cnot: float
    m_cnot: int
    m_a: int

    @property
    def eta(self) -> float:
        return eta_from_gates(self.eps_cnot, self.m_a, self.m_cnot)

    @property
    def q(self) -> float:
        return p_from_eta(self.eta)

    @property
    def p(self) -> float:
        return self.q


def p_from_eta(eta: float) -> float:
    """Sign-flip probability per step from the per-cycle ancilla fidelity."""
    if not 0.0 < eta <= 1.0:
        raise ValueError("eta must be in (0, 1]")
    return (1.0 - eta) / 2.0


def eta_from_gates(eps_cnot: float, m_a: int, m_cnot: int) -> float:
    """Per-cycle ancilla fidelity from the per-CNOT error rate: an ancilla
    sees m_a * m_cnot native gates per cycle."""
    if not 0.0 <= eps_cnot < 1.0:
        raise ValueError("eps_cnot must be in [0, 1)")
    if m_a < 1 or m_cnot < 1:
        raise ValueError("m_a and m_cnot must be >= 1")
    return (1.0 - eps_cnot) ** (m_a * m_cnot)


def signflip_rate_single_flip(m_a: int, q: float) -> float:
    """Probability that a randomly chosen one of the m_a gadget uses per
    step runs with a flipped angle, assuming at most one bit flip per step
    uniformly placed before one of the m_a gates."""
    if m_a < 1:
        raise ValueError("m_a must be >= 1")
    if not 0.0 <= q <= 1.0:
        raise ValueError("q must be in [0, 1]")
    return (m_a + 1) / (2.0 * m_a) * q


# --------------------------------------------------------------------------
# observables
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ZAvg:
    """Magnetization averaged over a named region."""

    region: str = "all"


@dataclass(frozen=True)
class Snapshot:
    """Per-site <Z_j> recorded at the listed steps."""

    steps: tuple[int, ...]


@dataclass(frozen=True)
class Otoc:
    """<X_j(t) Z_k X_j(t) Z_k> at the listed steps (all steps if None)."""

    j: int
    k: int
    steps: tuple[int, ...] | None = None


@dataclass
class SeriesColumn:
    observable: str
    region: str
    steps: np.ndarray
    mean: np.ndarray
    stderr: np.ndarray


@dataclass
class EnsembleSeries:
    times: np.ndarray
    columns: list[SeriesColumn]
    snapshots: dict[int, tuple[np.ndarray, np.ndarray]]
    n_trajectories: int
    seed: int

    def column(self, observable: str, region: str = "all") -> SeriesColumn:
        for c in self.columns:
            if c.observable == observable and c.region == region:
                return c
        raise KeyError(f"no column {observable!r} / {region!r}")


def region_average(snapshot, region) -> float:
    """Arithmetic mean of per-site values over a region."""
    region = sorted(region)
    if not region:
        raise ValueError("empty region")
    snapshot = np.asarray(snapshot, dtype=float)
    return float(snapshot[region].mean())


def _traj_rng(seed: int, traj: int, channel: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(traj, channel))
    return np.random.Generator(np.random.Philox(ss))


def _region_weights(lattice: Lattice, sites) -> tuple[np.ndarray, int]:
    """w[idx] = sum_{j in A} (-1)^{bit_j(idx)}, so <Z_avg> = (p . w)/|A|."""
    mask = np.uint64(0)
    for s in sites:
        mask |= np.uint64(1) << np.uint64(s)
    idx = np.arange(1 << lattice.n_sites, dtype=np.uint64)
    ones = np.bitwise_count(idx & mask).astype(np.float64)
    return len(sites) - 2.0 * ones, len(sites)


def _binomial_sample(rng: np.random.Generator, value: float, n_shots: int) -> float:
    pr = min(max((1.0 + value) / 2.0, 0.0), 1.0)
    return 2.0 * rng.binomial(n_shots, pr) / n_shots - 1.0


def run_ensemble(
    lattice: Lattice,
    params: FloquetParams,
    p: float,
    n_steps: int,
    n_traj: int,
    observables=(ZAvg("all"),),
    seed: int = 0,
    custom_regions: dict[str, frozenset[int]] | None = None,
    n_shots: int | None = None,
) -> EnsembleSeries:
    """Evolve n_traj independent noise realizations and aggregate.

    Trajectory i draws from a Philox stream keyed by (seed, i); a p = 0
    ensemble is computed once since every trajectory is identical.  The
    optional n_shots layer resamples each recorded magnetization through a
    binomial of that many measurement shots.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    if n_traj < 1:
        raise ValueError("n_traj must be >= 1")
    regions = dict(lattice.regions())
    if custom_regions:
        for name, sites in custom_regions.items():
            bad = [s for s in sites if not 0 <= s < lattice.n_sites]
            if bad:
                raise ValueError(f"region {name!r}: invalid sites {bad}")
        regions.update(custom_regions)

    zavg_specs = []
    snapshot_steps: set[int] = set()
    otoc_specs = []
    for obs in observables:
        if isinstance(obs, ZAvg):
            sites = regions.get(obs.region)
            if sites is None:
                raise ValueError(f"unknown region {obs.region!r}")
            if not sites:
                raise ValueError(f"region {obs.region!r} is empty")
            zavg_specs.append((obs.region, _region_weights(lattice, sites)))
        elif isinstance(obs, Snapshot):
            bad = [s for s in obs.steps if not 0 <= s <= n_steps]
            if bad:
                raise ValueError(f"snapshot steps out of range: {bad}")
            snapshot_steps.update(obs.steps)
        elif isinstance(obs, Otoc):
            steps = tuple(obs.steps) if obs.steps is not None else tuple(
                range(n_steps + 1)
            )
            otoc_specs.append((obs.j, obs.k, steps))
        else:
            raise TypeError(f"unknown observable {obs!r}")

    snapshot_steps = sorted(snapshot_steps)
    effective_traj = 1 if p == 0.0 and n_shots is None else n_traj
    base = build_cycle(lattice, params)

    za = np.zeros((effective_traj, len(zavg_specs), n_steps + 1))
    sn = np.zeros((effective_traj, len(snapshot_steps), lattice.n_sites))
    ot = [
        np.zeros((effective_traj, len(steps))) for _, _, steps in otoc_specs
    ]

    for t in range(effective_traj):
        rng = _traj_rng(seed, t, 0)
        shot_rng = _traj_rng(seed, t, 99) if n_shots else None
        noise = NoiseState.for_lattice(lattice, p, rng)
        state = init_all_zero(lattice.n_sites)

        def record(step: int) -> None:
            amps = state.amps
            probs = amps.real * amps.real + amps.imag * amps.imag
            for c, (_, (w, size)) in enumerate(zavg_specs):
                val = float(np.einsum("i,i->", probs, w)) / size
                if shot_rng is not None:
                    val = _binomial_sample(shot_rng, val, n_shots)
                za[t, c, step] = val
            if step in snapshot_steps:
                zs = z_site_expectations(state)
                if shot_rng is not None:
                    zs = np.array(
                        [_binomial_sample(shot_rng, v, n_shots) for v in zs]
                    )
                sn[t, snapshot_steps.index(step)] = zs

        record(0)
        for step in range(1, n_steps + 1):
            apply_cycle(state, realize_noisy_cycle(base, noise))
            state.check_norm()
            record(step)

        for o, (j, k, steps) in enumerate(otoc_specs):
            orng = _traj_rng(seed, t, 1 + o)
            onoise = NoiseState.for_lattice(lattice, p, orng)
            n_max = max(steps)
            if p == 0.0:
                seq = [base] * n_max
            else:
                seq = [realize_noisy_cycle(base, onoise) for _ in range(n_max)]
            for s_i, nn in enumerate(steps):
                ot[o][t, s_i] = otoc_from_cycles(
                    lattice.n_sites, seq[:nn], j, k
                )

    def reduce(arr: np.ndarray):
        mean = arr.mean(axis=0)
        if arr.shape[0] > 1:
            stderr = arr.std(axis=0, ddof=1) / math.sqrt(arr.shape[0])
        else:
            stderr = np.zeros_like(mean)
        return mean, stderr

    columns = []
    times = np.arange(n_steps + 1)
    for c, (region, _) in enumerate(zavg_specs):
        mean, err = reduce(za[:, c, :])
        columns.append(SeriesColumn("z_avg", region, times.copy(), mean, err))
    for o, (j, k, steps) in enumerate(otoc_specs):
        mean, err = reduce(ot[o])
        # colon separator: the label must stay a single CSV field
        columns.append(
            SeriesColumn(f"otoc[{j}:{k}]", "-", np.array(steps), mean, err)
        )
    snapshots = {}
    for s_i, step in enumerate(snapshot_steps):
        mean, err = reduce(sn[:, s_i, :])
        snapshots[step] = (mean, err)
    return EnsembleSeries(
        times=times,
        columns=columns,
        snapshots=snapshots,
        n_trajectories=n_traj,
        seed=seed,
    )


# --------------------------------------------------------------------------
# CSV serialization (17 significant digits, bit-stable)
# --------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def series_to_csv(series: EnsembleSeries) -> str:
    lines = ["step,observable,region,mean,stderr"]
    for col in series.columns:
        for s, m, e in zip(col.steps, col.mean, col.stderr):
            lines.append(
                f"{int(s)},{col.observable},{col.region},{_fmt(m)},{_fmt(e)}"
            )
    return "\n".join(lines) + "\n"


def snapshots_to_csv(series: EnsembleSeries) -> str:
    lines = ["step,site,mean,stderr"]
    for step in sorted(series.snapshots):
        mean, err = series.snapshots[step]
        for site in range(len(mean)):
            lines.append(
                f"{step},{site},{_fmt(mean[site])},{_fmt(err[site])}"
            )
    return "\n".join(lines) + "\n"
