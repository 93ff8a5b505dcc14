"""Numba JIT kernels for the dense statevector engine.

All kernels are elementwise or pairwise over amplitude indices, so results
are bit-identical regardless of the number of threads.  Reductions that
feed observables are done in numpy (pairwise summation), never in prange.
"""
import numpy as np
from numba import njit, prange


@njit(parallel=True, cache=True)
def rx_one(amps, q, c, s):
    """exp(-i theta X / 2) on qubit q; c = cos(theta/2), s = sin(theta/2)."""
    half = amps.size >> 1
    mis = -1j * s
    for t in prange(half):
        low = t & ((1 << q) - 1)
        i0 = ((t >> q) << (q + 1)) | low
        i1 = i0 | (1 << q)
        a = amps[i0]
        b = amps[i1]
        amps[i0] = c * a + mis * b
        amps[i1] = mis * a + c * b


@njit(parallel=True, cache=True)
def x_one(amps, q):
    half = amps.size >> 1
    for t in prange(half):
        low = t & ((1 << q) - 1)
        i0 = ((t >> q) << (q + 1)) | low
        i1 = i0 | (1 << q)
        a = amps[i0]
        amps[i0] = amps[i1]
        amps[i1] = a


@njit(parallel=True, cache=True)
def diag_one(amps, q, phase):
    """Multiply the bit-set half by a phase (Z, S, SDAG)."""
    half = amps.size >> 1
    for t in prange(half):
        low = t & ((1 << q) - 1)
        i1 = ((t >> q) << (q + 1)) | low | (1 << q)
        amps[i1] *= phase


@njit(parallel=True, cache=True)
def zz_layer(amps, ii, jj, signs, table, offset):
    """Apply prod_e exp(-i theta_e Z_i Z_j / 2) with theta_e = signs[e]*theta.

    table[d + offset] = exp(-i * (theta/2) * d) for d = sum_e signs[e] *
    (+1 if bits i,j equal else -1).
    """
    ne = ii.size
    for t in prange(amps.size):
        d = 0
        for e in range(ne):
            par = ((t >> ii[e]) ^ (t >> jj[e])) & 1
            d += signs[e] * (1 - 2 * par)
        amps[t] *= table[d + offset]


@njit(parallel=True, cache=True)
def cz_layer(amps, ii, jj):
    """Apply prod_e CZ_{i j}: sign (-1)^(# bonds with both bits set)."""
    ne = ii.size
    for t in prange(amps.size):
        par = 0
        for e in range(ne):
            par ^= (t >> ii[e]) & (t >> jj[e]) & 1
        if par:
            amps[t] = -amps[t]


@njit(cache=True)
def z_site_sums(amps, n_qubits):
    """<Z_q> for every qubit in one serial pass (deterministic order)."""
    out = np.zeros(n_qubits)
    for t in range(amps.size):
        p = amps[t].real * amps[t].real + amps[t].imag * amps[t].imag
        for q in range(n_qubits):
            if (t >> q) & 1:
                out[q] -= p
            else:
                out[q] += p
    return out
