"""Certifying weak geodesics: Monge-Ampere and ODE residuals.

The complexified potential of a weak geodesic solves the degenerate
Monge-Ampere equation det Hess Psi = 0 with slice convexity; the same
path satisfies the geodesic ODE udotdot = |dbar udot|^2.  Both residuals
are computed on a product grid and should shrink at second order when
the grid is refined.
"""

import numpy as np

from kenergy import (
    complexify,
    geodesic_ode_residual,
    hrma_residual,
    second_variation_fiber_integral,
    d2_mabuchi_fd,
    mabuchi_along,
    weak_geodesic,
)
from kenergy.experiments import sample_potential

rng = np.random.default_rng(42)
u0, u1 = sample_potential(rng), sample_potential(rng)
path = weak_geodesic(u0, u1, m=16)

print("grid (n_s, n_t)    hrma residual    ode residual")
prev = None
for n_s, n_t in ((2048, 256), (4096, 512), (8192, 1024)):
    sol = complexify(path, n_s=n_s, n_t=n_t)
    r = hrma_residual(path, solution=sol)
    o = geodesic_ode_residual(path, solution=sol)
    note = ""
    if prev is not None:
        note = "   (ratios %.2f, %.2f)" % (prev[0] / r, prev[1] / o)
    print("(%5d, %4d)      %.3e        %.3e%s" % (n_s, n_t, r, o, note))
    prev = (r, o)

# second variation: the fiber integral reproduces d^2 M / dt^2
path64 = weak_geodesic(u0, u1, m=64)
_, vals = mabuchi_along(path64)
d2 = d2_mabuchi_fd(path64, 0.5, values=vals)
fib = second_variation_fiber_integral(path64, 0.5, details=True)
print("\nd^2M/dt^2 at t=1/2:  centered difference %.8f" % d2)
print("                     fiber integral      %.8f" % fib.value)
print("pointwise integrand minimum: %+.3e (nonnegative up to rounding)"
      % fib.min_integrand)
