"""Global-depolarizing error mitigation and exponential fidelity-decay fits.

Mitigation divides a raw magnetization series by the magnitude of the
pi-pulse reference run; for a traceless observable under global
depolarization the two share the same decay factor, so the ratio recovers
the ideal signal.  Fidelity decays are fitted with eta^n or with
a1 * eta1^n + a2 * eta2^n.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

REFERENCE_FLOOR = 1e-3


@dataclass
class MitigatedSeries:
    steps: np.ndarray
    values: np.ndarray
    valid: np.ndarray  # False where the reference fell below the floor


@dataclass
class ExpFit:
    """Double-exponential fit a1*eta1^n + a2*eta2^n with a1 >= a2."""

    alpha1: float
    eta1: float
    alpha2: float
    eta2: float
    residual: float

    def __call__(self, n):
        n = np.asarray(n, dtype=float)
        return self.alpha1 * self.eta1 ** n + self.alpha2 * self.eta2 ** n


def mitigate(raw, reference, floor: float = REFERENCE_FLOOR) -> MitigatedSeries:
    """value_n = raw_n / |reference_n|; steps with |reference| < floor are
    flagged invalid instead of amplifying garbage."""
    raw = np.asarray(raw, dtype=float)
    reference = np.asarray(reference, dtype=float)
    if raw.shape != reference.shape:
        raise ValueError(
            f"length mismatch: raw {raw.shape} vs reference {reference.shape}"
        )
    mag = np.abs(reference)
    valid = mag >= floor
    values = np.zeros_like(raw)
    values[valid] = raw[valid] / mag[valid]
    values[~valid] = np.nan
    return MitigatedSeries(np.arange(len(raw)), values, valid)


def synth_depolarize(ideal, f: float) -> np.ndarray:
    """Raw series under a global depolarizing channel of per-step strength
    f acting on a traceless observable: raw_n = f^n * ideal_n."""
    if not 0.0 < f <= 1.0:
        raise ValueError("f must be in (0, 1]")
    ideal = np.asarray(ideal, dtype=float)
    return ideal * f ** np.arange(len(ideal))


def fit_single_exp(values, stderr=None, tol: float = 1e-10) -> float:
    """Least-squares eta for the model value_n = eta^n.

    Seeded from a log-space linear fit, refined by a bounded trust-region
    solver.  Points weight equally unless stderr is given (then inverse
    variance).
    """
    values = np.asarray(values, dtype=float)
    if len(values) < 3:
        raise ValueError("need at least 3 points")
    if np.any(values <= 0.0):
        raise ValueError("single-exponential fit needs positive values")
    n = np.arange(len(values), dtype=float)
    w = _weights(values, stderr)
    slope = np.polyfit(n, np.log(values), 1, w=w)[0]
    eta0 = min(math.exp(slope), 1.0)

    def resid(x):
        return (x[0] ** n - values) * w

    res = least_squares(
        resid, x0=[eta0], bounds=([1e-12], [1.0]), xtol=tol, ftol=tol, gtol=tol
    )
    return float(res.x[0])


_ETA_GRID = (0.5, 0.7, 0.9, 0.99)


def fit_double_exp(values, stderr=None) -> ExpFit:
    """Nonlinear least squares for a1*eta1^n + a2*eta2^n.

    Constraints a_i >= 0 and 0 < eta_i <= 1; the objective is multimodal,
    so the solver multi-starts from an eta grid and keeps the best result.
    Genuinely single-exponential data comes back with alpha2 ~ 0.
    """
    values = np.asarray(values, dtype=float)
    if len(values) < 6:
        raise ValueError("need at least 6 points")
    n = np.arange(len(values), dtype=float)
    w = _weights(values, stderr)
    a0 = float(values[0])

    def resid(x):
        a1, e1, a2, e2 = x
        return (a1 * e1 ** n + a2 * e2 ** n - values) * w

    best = None
    for e1 in _ETA_GRID:
        for e2 in _ETA_GRID:
            x0 = [0.75 * a0, e1, 0.25 * a0, e2]
            res = least_squares(
                resid,
                x0=x0,
                bounds=([0.0, 1e-12, 0.0, 1e-12], [np.inf, 1.0, np.inf, 1.0]),
                xtol=1e-12,
                ftol=1e-12,
                gtol=1e-12,
            )
            if best is None or res.cost < best.cost:
                best = res
    a1, e1, a2, e2 = best.x
    if a1 < a2:
        a1, e1, a2, e2 = a2, e2, a1, e1
    residual = float(np.linalg.norm(resid(best.x)))
    return ExpFit(float(a1), float(e1), float(a2), float(e2), residual)


def _weights(values, stderr):
    if stderr is None:
        return np.ones(len(values))
    stderr = np.asarray(stderr, dtype=float)
    if stderr.shape != np.shape(values):
        raise ValueError("stderr length mismatch")
    floor = max(stderr[stderr > 0].min(), 1e-12) if np.any(stderr > 0) else 1.0
    return 1.0 / np.maximum(stderr, floor)
