"""Observable density matrices of two and three detected photons.

Shows the X-shaped two-photon matrix, its closed-form coefficients, the
Bell-state limit at weak flux, Born-rule detection probabilities, and what
optical-phase averaging destroys.
"""

import numpy as np

from polsqueeze import (
    StateParams,
    born_probability,
    build_odm,
    closed_form_r2,
    concurrence,
    phase_average,
)

np.set_printoptions(precision=4, suppress=True)

print("=== two detected photons at nc=1, ns=0.3 ===")
p = StateParams(1.0, 0.3, 0.0)
odm = build_odm(p, 2)
rho = odm.dense()
print(rho)
print("closed-form coefficients (unnormalized): ")
print(closed_form_r2(p))

print("\n=== the weak-flux limit is a Bell state ===")
for nc in (0.3, 0.1, 0.01):
    pb = StateParams(nc, nc**2, 0.0)
    rho_b = build_odm(pb, 2).dense()
    bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    print(f"nc = {nc:5.2f}: corner/diag balance, Bell fidelity = {bell @ rho_b @ bell:.4f},"
          f" concurrence = {concurrence(rho_b):.4f}")

print("\n=== Born probabilities are diagonal reads in any product basis ===")
H, V = (1, 0), (0, 1)
D = (2**-0.5, 2**-0.5)
A = (2**-0.5, -(2**-0.5))
for pair, name in [((H, H), "HH"), ((H, V), "HV"), ((D, D), "DD"), ((D, A), "DA")]:
    print(f"P({name}) = {born_probability(odm, pair):.4f}")

print("\n=== phase averaging kills the number-changing coherence ===")
dec = phase_average(odm)
print(dec.dense())
print(f"concurrence before: {concurrence(rho):.4f}, after: {concurrence(dec.dense()):.4f}")
