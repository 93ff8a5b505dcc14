"""Ancilla noise stabilizing period doubling (the noise-induced regime).

Kagome19 has no charge-pumped sites, so the noiseless subharmonic decays
rapidly.  Random sign flips of the bond rotation angle - one persistent
bit per ancilla group, flipped with probability p before each gate - act
as spatiotemporal disorder and *extend* the oscillation lifetime for
moderate p.  At p = 1 the flips become deterministic (no disorder) and
the stabilization disappears.

The matching CLI configs live in demos/configs/kagome19_p*.json.
"""
import math

import numpy as np

from floqsim import FloquetParams, ZAvg, build_preset, run_ensemble

lat = build_preset("Kagome19")
params = FloquetParams(0.95 * math.pi)

print("window mean of |<Z_avg>| over cycles 20..40, 200 trajectories:\n")
for p in (0.0, 0.2, 0.5, 0.9, 1.0):
    series = run_ensemble(
        lat, params, p=p, n_steps=40, n_traj=200,
        observables=(ZAvg("all"),), seed=0,
    )
    col = series.column("z_avg", "all")
    w = np.abs(col.mean[20:41]).mean()
    print(f"  p = {p:<4}  W = {w:.4f}")

print("""
Moderate noise (p ~ 0.2-0.9) beats both the clean run (p = 0) and the
deterministic strong-flip limit (p = 1): it is the *randomness* of the
sign flips, not their mere presence, that slows thermalization.
""")
