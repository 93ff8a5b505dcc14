"""Global-depolarizing mitigation and fidelity-decay fitting.

A depolarizing channel shrinks every traceless observable by f per step.
Dividing a raw series by the magnitude of the pi-pulse reference run
cancels that decay exactly.  Ancilla fidelities are extracted with
single- or double-exponential fits; the conversion chain then turns a
per-gate error rate into the sign-flip probability p.
"""
import numpy as np

from floqsim import (
    eta_from_gates,
    fit_double_exp,
    fit_single_exp,
    mitigate,
    p_from_eta,
    signflip_rate_single_flip,
    synth_depolarize,
)

# --- mitigation round trip -------------------------------------------------
ideal = np.array([(-1.0) ** n for n in range(20)])
raw = synth_depolarize(ideal, 0.9)          # what a noisy device would show
reference = synth_depolarize(ideal, 0.9)    # pi-pulse reference decays alike
recovered = mitigate(raw, np.abs(reference))
print("mitigation error:", np.max(np.abs(recovered.values - ideal)))

# --- exponential fits --------------------------------------------------------
n = np.arange(30)
eta = fit_single_exp(0.95 ** n)
print(f"single-exponential fit: eta = {eta:.6f} (true 0.95)")

two = 0.7 * 0.95 ** n + 0.3 * 0.6 ** n
fit = fit_double_exp(two)
print(
    "double-exponential fit: "
    f"a1={fit.alpha1:.3f} eta1={fit.eta1:.3f} "
    f"a2={fit.alpha2:.3f} eta2={fit.eta2:.3f}"
)

# --- calibration chain -------------------------------------------------------
eps_cnot, m_a, m_cnot = 0.02, 3, 3
eta = eta_from_gates(eps_cnot, m_a, m_cnot)
print(f"\nper-CNOT error {eps_cnot} -> per-cycle ancilla fidelity "
      f"eta = {eta:.4f}")
print(f"bit-flip rate per cycle q = (1-eta)/2 = {p_from_eta(eta):.4f}")
print(f"single-flip gate rate for m_a={m_a}: "
      f"{signflip_rate_single_flip(m_a, p_from_eta(eta)):.4f}")
