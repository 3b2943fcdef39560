"""Tour of the scalar functionals on a few explicit sphere metrics.

Builds the round potential and two perturbations, runs both K-energy
quadrature routes against each other, and checks the identities that pin
the normalizations: E(u0 - x) = 1, exact response of E to constants, and
Gauss-Bonnet for the scalar curvature.
"""

import numpy as np

from kenergy import (
    SymplecticPotential,
    calabi_energy,
    curvature_integral,
    energy_E,
    functional_report,
    legendre_to_s,
    mabuchi,
    mabuchi_moment,
    metric_density,
    round_potential,
)

x = np.linspace(0.0, 1.0, 512)
u0 = round_potential(512)
u1 = SymplecticPotential(x, 0.05 * np.sin(2.0 * np.pi * x))
u2 = SymplecticPotential(x, 0.05 * np.sin(np.pi * x) - 0.01 * np.sin(3.0 * np.pi * x))

print("potential        M (transform)   M (moment)      Calabi      int R dx")
for name, u in (("round", u0), ("sin(2 pi x)", u1), ("mixed", u2)):
    print("%-14s  %14.10f  %14.10f  %10.3e  %.10f"
          % (name, mabuchi(u), mabuchi_moment(u), calabi_energy(u),
             curvature_integral(u)))

# E is normalized so that the slope shift u0 - x carries unit energy
shift = u0.shifted(alpha=-1.0)
psi = legendre_to_s(shift)
print("\nE(u0 - x) = %.12f (exact value 1)" % energy_E(psi.relative(), psi))

# adding a constant c to the potential changes E by exactly -2c
c = 0.25
pa = legendre_to_s(u1)
pb = legendre_to_s(u1.shifted(beta=c))
Ea = energy_E(pa.relative(), pa)
Eb = energy_E(pb.relative(), pb)
print("E(u + %.2f) - E(u) = %+.12f (exact value %+.2f)" % (c, Eb - Ea, -2.0 * c))

# the metric measure always pushes forward to unit mass
dens = metric_density(legendre_to_s(u2, n_s=8192))
print("pushforward mass of the mixed metric: %.12f" % dens.mass())

print("\nfull report for the mixed metric:")
print("  " + repr(functional_report(u2)))
