"""Weak geodesics between rotation-invariant metrics.

In symplectic coordinates the weak geodesic between u0 and u1 is the linear
path u_t = (1-t) u0 + t u1: every slice is again a valid potential (u''
interpolates linearly), and on the complex side the resulting surface
Psi(t,s) = psi_t(s) solves the degenerate Monge-Ampere equation
det Hess_(t,s) Psi = 0.  That is not assumed here but certified a
posteriori by finite-difference residuals (hrma_residual,
geodesic_ode_residual).

The second variation of the K-energy along the path localizes as a fiber
integral: with W = log psi_t'' and Phi = psi_t,

    d^2M/dt^2 = int ( W_tt Phi_ss + W_ss Phi_tt - 2 W_ts Phi_ts ) ds

on any path with det Hess Phi = 0, and the integrand is pointwise
nonnegative there.  All the second derivatives pass through the Legendre
solve x*(t,s) and are evaluated in closed form from the slice models, so
the pointwise sign is resolved at roundoff scale rather than
finite-difference scale.
"""

import numpy as np
from scipy.integrate import simpson

from .radial import (
    DENSITY_FLOOR,
    SymplecticPotential,
    _SineModel,
    _solve_moment,
    legendre_to_s,
)
from .functionals import mabuchi


class GeodesicPath:
    """Linear symplectic path u_t = (1-t) u0 + t u1 on a uniform t-grid.

    The t-grid has m+1 nodes with step 1/m; slices at arbitrary t in [0,1]
    are materialized on demand and cached.  The symplectic velocity is
    constant in t and equals u1 - u0.
    """

    def __init__(self, u0, u1, m=64):
        if not isinstance(u0, SymplecticPotential) or not isinstance(u1, SymplecticPotential):
            raise TypeError("endpoints must be SymplecticPotential instances")
        if not np.array_equal(u0.x_grid, u1.x_grid):
            raise ValueError("endpoint potentials must share a grid")
        if m < 2:
            raise ValueError("need at least 2 t-steps")
        self.u0 = u0
        self.u1 = u1
        self.m = int(m)
        self.t_grid = np.linspace(0.0, 1.0, self.m + 1)
        self.delta_f = u1.f_values - u0.f_values
        self._delta_model = _SineModel(u0.x_grid, self.delta_f)
        self._slices = {}
        self._transforms = {}

    def slice(self, t):
        """Potential at time t (any t in [0,1], cached)."""
        t = float(t)
        if t < -1e-12 or t > 1.0 + 1e-12:
            raise ValueError("t outside [0,1]")
        key = round(t, 14)
        if key not in self._slices:
            f_t = (1.0 - t) * self.u0.f_values + t * self.u1.f_values
            self._slices[key] = SymplecticPotential(self.u0.x_grid, f_t)
        return self._slices[key]

    def transform(self, t, n_s=2048, s_max=18.0):
        """Radial potential of the slice at t (cached per (t, grid))."""
        key = (round(float(t), 14), int(n_s), float(s_max))
        if key not in self._transforms:
            self._transforms[key] = legendre_to_s(self.slice(t), n_s=n_s, s_max=s_max)
        return self._transforms[key]

    def velocity(self):
        """d(u_t)/dt in moment coordinates (constant in t)."""
        return self.delta_f.copy()

    def speed(self, t, n_s=2048, s_max=18.0):
        """Riemannian speed sqrt(int psidot^2 psi'' ds) at time t.

        psidot = -(u1-u0)(x*) in closed form; by the pushforward property
        the value is t-independent up to quadrature error and equals the
        moment-coordinate L^2 norm of u1-u0.
        """
        psi = self.transform(t, n_s=n_s, s_max=s_max)
        x = psi.d1()
        vdot = self._delta_model.f(x)
        core = simpson(vdot * vdot * psi.d2(), x=psi.s_grid)
        tail = (self._delta_model.f(np.array([0.0]))[0] ** 2 * max(x[0], 0.0)
                + self._delta_model.f(np.array([1.0]))[0] ** 2 * max(1.0 - x[-1], 0.0))
        return float(np.sqrt(core + tail))

    def __repr__(self):
        return "GeodesicPath(m=%d, |u1-u0|_inf=%.3g)" % (self.m, np.max(np.abs(self.delta_f)))


def weak_geodesic(u0, u1, m=64):
    """The weak geodesic between two potentials (linear symplectic path)."""
    return GeodesicPath(u0, u1, m=m)


class ComplexifiedSolution:
    """Values Psi(t,s) = psi_t(s) on the product grid, with slice densities.

    The associated rotation-invariant function of the complexified time
    depends only on Re tau = t, so the product grid carries the whole
    solution.  ``min_hessian_eigen`` reports the smallest eigenvalue of the
    centered-difference (t,s) Hessian over interior nodes, which degenerate
    convexity pushes to zero from above.
    """

    def __init__(self, t_grid, s_grid, psi_matrix, rho_matrix, x_matrix,
                 pts_matrix=None):
        self.t_grid = t_grid
        self.s_grid = s_grid
        self.psi = psi_matrix
        self.rho = rho_matrix
        self.x_star = x_matrix
        self.pts = pts_matrix

    def hessian_blocks(self):
        """Hessian entries on the interior node block.

        Only the time direction needs a centered stencil; the s-row of the
        Hessian is known in closed form per slice (Psi_ss is the density,
        Psi_ts = -delta u'(x*) rho by the envelope formula), which keeps
        sharp density features from polluting the certificate through
        under-resolved s-stencils.  Without the analytic mixed entry (a
        solution built by hand) both s-entries fall back to differences.
        """
        dt = self.t_grid[1] - self.t_grid[0]
        ds = self.s_grid[1] - self.s_grid[0]
        P = self.psi
        Ptt = (P[2:, 1:-1] - 2.0 * P[1:-1, 1:-1] + P[:-2, 1:-1]) / dt ** 2
        if self.pts is None:
            Pss = (P[1:-1, 2:] - 2.0 * P[1:-1, 1:-1] + P[1:-1, :-2]) / ds ** 2
            Pts = (P[2:, 2:] - P[2:, :-2] - P[:-2, 2:] + P[:-2, :-2]) / (4.0 * dt * ds)
        else:
            Pss = self.rho[1:-1, 1:-1]
            Pts = self.pts[1:-1, 1:-1]
        return Ptt, Pss, Pts

    def min_hessian_eigen(self):
        """Smallest eigenvalue of the discrete Hessian over interior nodes."""
        Ptt, Pss, Pts = self.hessian_blocks()
        tr = Ptt + Pss
        disc = np.sqrt((Ptt - Pss) ** 2 + 4.0 * Pts ** 2)
        return float(np.min(0.5 * (tr - disc)))


def complexify(path, n_s=2048, s_max=18.0, n_t=None):
    """Materialize the path's complexified solution on a product grid.

    n_t = None uses the path's own t nodes (and their transform cache);
    an integer n_t lays down n_t+1 fresh uniform t rows, which residual
    certificates use to refine the time direction independently of the
    path resolution.
    """
    if n_t is None:
        t_grid = path.t_grid
        transforms = [path.transform(t, n_s=n_s, s_max=s_max) for t in t_grid]
    else:
        t_grid = np.linspace(0.0, 1.0, int(n_t) + 1)
        transforms = []
        y_prev = None
        for t in t_grid:
            tr = legendre_to_s(path.slice(t), n_s=n_s, s_max=s_max, y_init=y_prev)
            y_prev = tr._logit
            transforms.append(tr)
    s = np.linspace(-s_max, s_max, n_s)
    psi = np.stack([tr.psi_values for tr in transforms])
    rho = np.stack([tr.d2() for tr in transforms])
    xs = np.stack([tr.d1() for tr in transforms])
    # Psi_ts = d/ds of psidot = -(u1-u0)'(x*) rho, exact per node
    pts = -path._delta_model.df(xs.ravel()).reshape(xs.shape) * rho
    return ComplexifiedSolution(t_grid, s, psi, rho, xs, pts)


def _det_residual_blocks(sol):
    Ptt, Pss, Pts = sol.hessian_blocks()
    det = Ptt * Pss - Pts ** 2
    included = sol.rho[1:-1, 1:-1] > DENSITY_FLOOR
    return det, included


def hrma_residual(path, n_s=4096, s_max=18.0, n_t=512, solution=None, per_t=False):
    """Sup-norm of the degenerate Monge-Ampere residual |det Hess Psi|.

    Time direction by centered differences, s-row of the Hessian analytic
    per slice; nodes whose density falls at or below the 1e-10 floor are
    excluded from the sup (their count is available via hrma_details).
    The default grid is finer than the path's report grid: slices are
    exact at any t, so the stencil error scales with dt^2 until it sits
    well under the certificate threshold.  With per_t=True returns the
    per-row sup over interior s instead of the global scalar.  A
    precomputed ``solution`` (from complexify) is reused when given.
    """
    sol = solution if solution is not None else complexify(
        path, n_s=n_s, s_max=s_max, n_t=n_t)
    det, included = _det_residual_blocks(sol)
    ad = np.where(included, np.abs(det), 0.0)
    if per_t:
        return np.max(ad, axis=1)
    return float(np.max(ad))


def hrma_details(path, n_s=4096, s_max=18.0, n_t=512, solution=None):
    """(sup, excluded_fraction) for the Monge-Ampere residual."""
    sol = solution if solution is not None else complexify(
        path, n_s=n_s, s_max=s_max, n_t=n_t)
    det, included = _det_residual_blocks(sol)
    sup = float(np.max(np.where(included, np.abs(det), 0.0)))
    return sup, float(1.0 - included.mean())


def geodesic_ode_residual(path, n_s=4096, s_max=18.0, n_t=512, solution=None,
                          per_t=False):
    """L^1 residual of the geodesic equation udotdot = |dbar udot|^2.

    In reduced coordinates |dbar v|^2 = (v_s)^2 / psi'' for an invariant v;
    the normalization is pinned by the translation family psi0(s + at),
    which solves the equation exactly.  Time derivatives by centered
    differences, s-derivative of the velocity and the density analytic per
    slice.  Returns the integral of the absolute residual against the
    metric measure and dt over interior nodes.
    """
    sol = solution if solution is not None else complexify(
        path, n_s=n_s, s_max=s_max, n_t=n_t)
    dt = sol.t_grid[1] - sol.t_grid[0]
    P = sol.psi
    pj = (P[2:, :] - 2.0 * P[1:-1, :] + P[:-2, :]) / dt ** 2      # psi_tt
    if sol.pts is None:
        ds = sol.s_grid[1] - sol.s_grid[0]
        pd = (P[2:, :] - P[:-2, :]) / (2.0 * dt)
        pds = (pd[:, 2:] - pd[:, :-2]) / (2.0 * ds)
    else:
        pds = sol.pts[1:-1, 1:-1]                                 # (psi_t)_s
    rho = sol.rho[1:-1, 1:-1]
    ok = rho > DENSITY_FLOOR
    resid = np.zeros_like(rho)
    resid[ok] = np.abs(pj[:, 1:-1][ok] - pds[ok] ** 2 / rho[ok])
    weighted = resid * rho
    per_row = simpson(weighted, x=sol.s_grid[1:-1], axis=1)
    if per_t:
        return per_row
    return float(simpson(per_row, x=sol.t_grid[1:-1]))


def mabuchi_along(path):
    """K-energy at every t node: arrays (t_grid, M values)."""
    vals = np.array([mabuchi(path.slice(t)) for t in path.t_grid])
    return path.t_grid.copy(), vals


def convexity_margin(values):
    """Smallest second difference of a sampled function (>= 0 when convex)."""
    v = np.asarray(values, dtype=float)
    return float(np.min(v[2:] - 2.0 * v[1:-1] + v[:-2]))


def d2_mabuchi_fd(path, t, values=None):
    """Centered second difference of M(u_t) at interior node t, step 1/m.

    With precomputed ``values`` from mabuchi_along the evaluation is a
    lookup; otherwise three slices are evaluated.
    """
    dt = 1.0 / path.m
    if values is not None:
        i = int(round(t * path.m))
        if i <= 0 or i >= path.m:
            raise ValueError("t must be an interior node")
        return float((values[i + 1] - 2.0 * values[i] + values[i - 1]) / dt ** 2)
    return float((mabuchi(path.slice(t + dt)) - 2.0 * mabuchi(path.slice(t))
                  + mabuchi(path.slice(t - dt))) / dt ** 2)


class FiberIntegrand:
    """Second-variation data along one fiber {t} x s-window."""

    def __init__(self, s_grid, integrand, included, value, det_phi_sup):
        self.s_grid = s_grid
        self.integrand = integrand
        self.included = included
        self.value = value
        self.det_phi_sup = det_phi_sup

    @property
    def min_integrand(self):
        return float(np.min(self.integrand[self.included]))

    @property
    def excluded_fraction(self):
        return float(1.0 - self.included.mean())


def second_order_data(path, t, s):
    """Closed-form first and second derivatives of Phi and W at (t, s-array).

    Phi(t,s) = psi_t(s) and W(t,s) = log psi_t'' pass through the Legendre
    solve u_t'(x*) = s; the chain rule turns their (t,s) Hessians into
    rational expressions in the slice derivatives u'', u''', u'''' and the
    velocity derivatives d', d'', d''' at x*.  det Hess Phi vanishes
    identically in exact arithmetic.
    """
    u_t = path.slice(t)
    dm = path._delta_model
    x = _solve_moment(u_t, s)
    u2 = u_t.d2u(x)
    u3 = u_t.d3u(x)
    u4 = u_t.d4u(x)
    d0 = dm.f(x)
    d1 = dm.df(x)
    d2 = dm.d2f(x)
    d3 = dm.d3f(x)

    phi_ss = 1.0 / u2
    phi_ts = -d1 / u2
    phi_tt = d1 ** 2 / u2

    x_t = -d1 / u2
    w_ss = -u4 / u2 ** 3 + 2.0 * u3 ** 2 / u2 ** 4
    # W_t = -d2/u2 + u3 d1 / u2^2; differentiate in s (x_s = 1/u2) and t
    w_ts = (-d3 / u2 + (2.0 * d2 * u3 + u4 * d1) / u2 ** 2
            - 2.0 * u3 ** 2 * d1 / u2 ** 3) / u2
    w_tt = (-d3 * x_t / u2 + d2 * (d2 + u3 * x_t) / u2 ** 2
            + ((d3 + u4 * x_t) * d1 + u3 * d2 * x_t) / u2 ** 2
            - 2.0 * u3 * d1 * (d2 + u3 * x_t) / u2 ** 3)
    return {
        "x_star": x, "u2": u2, "delta": d0,
        "phi_ss": phi_ss, "phi_ts": phi_ts, "phi_tt": phi_tt,
        "w_ss": w_ss, "w_ts": w_ts, "w_tt": w_tt,
    }


def second_variation_fiber_integral(path, t, n_s=2048, s_max=18.0, details=False):
    """Fiber integral of the second-variation form at interior time t.

    Evaluates T = W_tt Phi_ss + W_ss Phi_tt - 2 W_ts Phi_ts in closed form
    on the s-window and integrates.  Along the linear path det Hess Phi = 0
    identically, so the value equals d^2M/dt^2 (cross-checked against the
    centered difference of the K-energy) and T itself is pointwise
    nonnegative.  Nodes with density at or below the 1e-10 floor are
    excluded and reported via the details object.
    """
    if not (0.0 < t < 1.0):
        raise ValueError("t must be interior")
    s = np.linspace(-s_max, s_max, n_s)
    d = second_order_data(path, t, s)
    T = (d["w_tt"] * d["phi_ss"] + d["w_ss"] * d["phi_tt"]
         - 2.0 * d["w_ts"] * d["phi_ts"])
    rho = d["phi_ss"]
    included = rho > DENSITY_FLOOR
    det_phi = d["phi_tt"] * d["phi_ss"] - d["phi_ts"] ** 2
    value = float(simpson(np.where(included, T, 0.0), x=s))
    if details:
        return FiberIntegrand(s, T, included, value,
                              float(np.max(np.abs(det_phi))))
    return value
