"""The automorphism orbit as a flat direction, and the Lichnerowicz kernel.

The dilation orbit through the round potential is an exact weak geodesic
along which the K-energy is constant; the F functional stays strictly
convex on it and picks a unique minimizer.  The kernel of the
Lichnerowicz operator at the round metric is four dimensional: constants
plus the three holomorphic deformations.
"""

import numpy as np

from kenergy import (
    OrbitPath,
    hrma_residual,
    kernel_dimension,
    lichnerowicz_assemble,
    orbit_flatness_and_F,
    orbit_hamiltonian_residual,
    reference_density,
    round_potential,
)

orbit = OrbitPath(round_potential(512), 1.0, m=32, t_range=(-1.0, 1.0))

sup, moment = orbit_hamiltonian_residual(orbit, 0.3)
print("Hamiltonian residual sup |udot/2 - h| = %.3e" % sup)
print("moment map identity sup |h' - a psi''| = %.3e" % moment)
print("orbit certificate hrma = %.3e" % hrma_residual(orbit.as_geodesic(),
                                                      n_s=4096, n_t=512))

rep = orbit_flatness_and_F(orbit)
print("\nK-energy spread along the orbit: %.3e (flat)" % rep["mabuchi_spread"])
print("F second differences along the orbit:  min %.6f (strictly convex)"
      % rep["F_second_difference_min"])
print("F minimizer with the reference measure: t = %+.8f" % rep["t_min"])


def shifted_mu(s):
    return reference_density(s - 0.5)


rep_shift = orbit_flatness_and_F(orbit, mu_density=shifted_mu)
print("F minimizer after translating the measure by 0.5: t = %+.8f" % rep_shift["t_min"])

op = lichnerowicz_assemble(round_potential(512))
print("\nLichnerowicz blocks at the round metric (lowest eigenvalues):")
for m in range(0, 3):
    ev = op.eigenvalues(m)[:5]
    print("  mode %+d: %s" % (m, "  ".join("%10.4f" % v for v in ev)))
print("kernel dimension (refinement-stable): %d" % kernel_dimension(op))
print("PSD residual %.2e, realness residual %.2e"
      % (op.psd_residual(), op.realness_residual()))
