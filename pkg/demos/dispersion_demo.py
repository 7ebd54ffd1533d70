"""Spectrum and mixing weights of the moving bound state.

The moving state mixes the localized level with the continuum; the closed
forms give a relativistic branch pair E = +-sqrt(E0^2 + P^2) and momentum
dependent mixing weights (L, K). This script takes the rest energy from a
fresh scan, tabulates the spectrum, and checks the exact invariants.
"""

import numpy as np

from solitonscf import (
    RunConfig,
    ScanConfig,
    find_a0,
    group_velocity,
    mixing_coefficients,
    spectrum,
)

grid = RunConfig().build_grid()
E0 = find_a0(ScanConfig(), grid).report.E0_over_m0
print(f"rest energy from the scan: E(0)/m0 = {E0:.6f}")
print()

momenta = E0 * np.array([0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0])
print(f"{'P':>10} {'E':>10} {'L':>9} {'K':>9} {'v_group':>9}")
for P in momenta:
    e_plus, _ = spectrum(E0, P)
    L, K, *_ = mixing_coefficients(E0, P)
    v = group_velocity(E0, P)
    print(f"{P:10.5f} {e_plus:10.6f} {L:9.6f} {K:9.6f} {v:9.6f}")

print()
sweep = E0 * np.logspace(-8, 1, 40)
worst_norm = max(
    abs(sum(c * c for c in mixing_coefficients(E0, P)[:2]) - 1.0)
    for P in sweep
)
worst_inv = max(
    abs(spectrum(E0, P)[0] ** 2 - P**2 - E0**2) / E0**2 for P in sweep
)
print(f"max |L^2 + K^2 - 1| over the sweep: {worst_norm:.1e}")
print(f"max |E^2 - P^2 - E0^2| / E0^2:      {worst_inv:.1e}")

# the rest frame keeps the state purely localized
L, K, L1, K1, Lp, Kp = mixing_coefficients(E0, 0.0)
print(f"P = 0 weights: electron ({L:g}, {K:g}), positron ({Lp:g}, {Kp:g})")
