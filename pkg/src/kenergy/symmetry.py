"""One-parameter automorphism orbits and the Lichnerowicz operator.

The rotation field of the sphere generates a holomorphic C*-action; the
dilation part exp(t J W) pulls a radial potential back by translation in
the log-radial coordinate, psi -> psi(. + 2at).  On the symplectic side the
orbit slices are affine,

    u_t = u0 - 2 a t x + c(t),    c(t) = c0 + a t,

with c fixed by the normalization E(u_t) = 0, so the orbit is an exact
weak geodesic with Hamiltonian h_t = a (x_t - 1/2) of vanishing average.

The Lichnerowicz operator D*D is assembled per angular mode: for
v = g(x) e^{i m theta} the reduced first-order factor is
G = g' - (m/2) u'' g and D*D's quadratic form is int |D_m g|^2 dx with
D_m g = G'/u'' - (m/2) G, the metric measure being Lebesgue in moment
coordinates.  Modes decouple; each block is a Gram matrix, hence PSD.  The
kernel at any radial metric contains the constants and x in mode 0 and one
profile in each of the modes +-1 (the complex Hamiltonians of the three
sphere fields), which at the round metric are captured exactly by the
polynomial basis.
"""

import numpy as np
from numpy.polynomial.legendre import legder, legval
from scipy.linalg import eigh
from scipy.optimize import minimize_scalar

from .radial import (
    SymplecticPotential,
    _gauss01,
    legendre_to_s,
)
from .functionals import energy_E, f_functional, mabuchi


# ---------------------------------------------------------------------------
# orbit paths

class OrbitPath:
    """Automorphism orbit through u0 with generator strength a.

    Slices are u0 - 2 a t x + c(t) with c(t) = c0 + a t chosen so that the
    mixed energy E vanishes along the whole path; in particular the slices
    are affine in t and the path is an exact weak geodesic.  The t-grid has
    m+1 uniform nodes over t_range.
    """

    def __init__(self, u0, a, m=64, t_range=(0.0, 1.0)):
        if not isinstance(u0, SymplecticPotential):
            raise TypeError("u0 must be a SymplecticPotential")
        self.u0 = u0
        self.a = float(a)
        self.m = int(m)
        self.t_range = (float(t_range[0]), float(t_range[1]))
        if not self.t_range[1] > self.t_range[0]:
            raise ValueError("t_range must be increasing")
        self.t_grid = np.linspace(self.t_range[0], self.t_range[1], self.m + 1)
        psi0 = legendre_to_s(u0)
        # E(u + c) = E(u) - 2c, so this constant zeroes E on every slice
        self._c0 = 0.5 * energy_E(psi0.relative(), psi0)
        self._slices = {}

    def c(self, t):
        """Normalization constant of the slice at t."""
        return self._c0 + self.a * float(t)

    def slice(self, t):
        """Potential at time t (cached)."""
        t = float(t)
        key = round(t, 14)
        if key not in self._slices:
            f_t = (self.u0.f_values - 2.0 * self.a * t * self.u0.x_grid
                   + self.c(t))
            self._slices[key] = SymplecticPotential(self.u0.x_grid, f_t)
        return self._slices[key]

    def as_geodesic(self, m=None):
        """The same path as a GeodesicPath between its own endpoints."""
        from .geodesics import GeodesicPath

        t0, t1 = self.t_range
        g = GeodesicPath(self.slice(t0), self.slice(t1), m=m or self.m)
        return g

    def __repr__(self):
        return "OrbitPath(a=%.3g, t_range=(%.3g, %.3g))" % (
            self.a, self.t_range[0], self.t_range[1])


def orbit_geodesic(u0, a, m=64, t_range=(0.0, 1.0)):
    """Orbit path through u0 (an exact weak geodesic, see OrbitPath)."""
    return OrbitPath(u0, a, m=m, t_range=t_range)


def orbit_hamiltonian(path, t, n_s=2048, s_max=18.0):
    """Hamiltonian h_t = a (x_t - 1/2) on the s-grid of the slice transform.

    Equals half the complex-side time derivative of the orbit potential;
    its average against the slice metric vanishes (the moment map pushes
    the metric measure to Lebesgue measure, whose mean is 1/2).
    Returns (s_grid, h values, transform).
    """
    psi = legendre_to_s(path.slice(t), n_s=n_s, s_max=s_max)
    h = path.a * (psi.d1() - 0.5)
    return psi.s_grid, h, psi


def orbit_hamiltonian_residual(path, t, h_step=1e-4, n_s=2048, s_max=18.0):
    """sup |(1/2) d(psi_t)/dt - h_t|, time derivative by centered difference.

    Also returns the moment-map identity residual sup |h' - a psi''|, which
    expresses dh = iota_W omega in reduced coordinates.
    """
    s, h, psi = orbit_hamiltonian(path, t, n_s=n_s, s_max=s_max)
    pp = legendre_to_s(path.slice(t + h_step), n_s=n_s, s_max=s_max)
    pm = legendre_to_s(path.slice(t - h_step), n_s=n_s, s_max=s_max)
    udot_half = 0.5 * (pp.psi_values - pm.psi_values) / (2.0 * h_step)
    sup = float(np.max(np.abs(udot_half - h)))
    ds = s[1] - s[0]
    # dh = iota_W omega reduces to h' = a psi''; fourth-order stencil
    dh = (h[:-4] - 8.0 * h[1:-3] + 8.0 * h[3:-1] - h[4:]) / (12.0 * ds)
    moment_res = float(np.max(np.abs(dh - path.a * psi.d2()[2:-2])))
    return sup, moment_res


def orbit_flatness_and_F(path, mu_density=None, n_s=2048, s_max=18.0):
    """Per-t report of M and F along the orbit, plus the F minimizer.

    Returns a dict with the t-grid, K-energy values (constant along the
    orbit up to quadrature error), F values, the second-difference lower
    bound certifying strict convexity of F, the monotone-growth flags
    beyond the window ends (properness proxy), and the interior minimizer
    located by golden-section search.
    """
    t_grid = path.t_grid
    M_vals = np.empty(t_grid.size)
    F_vals = np.empty(t_grid.size)
    mu_ref = mu_density

    def F_of(t):
        u_t = path.slice(t)
        psi = legendre_to_s(u_t, n_s=n_s, s_max=s_max)
        if mu_ref is None:
            from .radial import reference_density
            mu = reference_density(psi.s_grid)
        else:
            mu = mu_ref(psi.s_grid) if callable(mu_ref) else np.asarray(mu_ref)
        return f_functional(u_t, mu, psi=psi)

    for i, t in enumerate(t_grid):
        u_t = path.slice(t)
        M_vals[i] = mabuchi(u_t)
        F_vals[i] = F_of(t)
    sec = F_vals[2:] - 2.0 * F_vals[1:-1] + F_vals[:-2]
    res = minimize_scalar(F_of, bracket=None,
                          bounds=path.t_range, method="bounded",
                          options={"xatol": 1e-10})
    grow_left = bool(np.all(np.diff(F_vals[: max(t_grid.size // 8, 2)]) < 0)
                     or F_vals[0] > F_vals.min())
    grow_right = bool(F_vals[-1] > F_vals.min())
    return {
        "t_grid": t_grid,
        "mabuchi": M_vals,
        "F": F_vals,
        "mabuchi_spread": float(M_vals.max() - M_vals.min()),
        "F_second_difference_min": float(np.min(sec)),
        "t_min": float(res.x),
        "F_min": float(res.fun),
        "grows_beyond_window": grow_left and grow_right,
    }


# ---------------------------------------------------------------------------
# Lichnerowicz operator, one block per angular mode

def _leg_shift(j):
    c = np.zeros(j + 1)
    c[j] = 1.0
    return c


def basis_profile(m, j, x, u=None):
    """Radial profile of basis element j in angular mode m: w^{|m|/2} P_j.

    P_j is the shifted Legendre polynomial on [0,1]; w = x(1-x).  Returns
    the profile values (the full sphere function is profile * e^{i m theta}).
    """
    x = np.asarray(x, dtype=float)
    t = 2.0 * x - 1.0
    p = legval(t, _leg_shift(j))
    if m == 0:
        return p
    w = x * (1.0 - x)
    return w ** (abs(m) / 2.0) * p


def _profile_derivs(j, x):
    """(P_j, P_j', P_j'') of the shifted Legendre P_j on [0,1]."""
    c = _leg_shift(j)
    t = 2.0 * x - 1.0
    p = legval(t, c)
    dp = 2.0 * legval(t, legder(c)) if j >= 1 else np.zeros_like(x)
    d2p = 4.0 * legval(t, legder(c, 2)) if j >= 2 else np.zeros_like(x)
    return p, dp, d2p


def _reduced_D(u, m, j, x):
    """D_m applied to basis element (m, j) at points x, in closed form.

    D_m g = G'/u'' - (m/2) G with G = g' - (m/2) u'' g.  The Guillemin
    singularities are combined analytically: for |m| = 1 the w^{-1/2} and
    w^{-3/2} pieces of G and G' recombine into bounded expressions, and for
    m = 0 the formula is plain (g''/u'')' free.
    """
    p, dp, d2p = _profile_derivs(j, x)
    w = x * (1.0 - x)
    wp = 1.0 - 2.0 * x
    f2 = u._model.d2f(x)
    f3 = u._model.d3f(x)
    u2 = 1.0 / w + f2              # u''
    if m == 0:
        G = dp
        Gp = d2p
        return Gp / u2
    a = abs(m) / 2.0
    sgn = 1.0 if m > 0 else -1.0
    # g = w^a p ; g' = w^a p' + a w^{a-1} w' p
    # G = g' - (m/2) u'' g = w^{a-1} [ w p' + (a w' - m/2) p ] - (m/2) f'' w^a p
    q = w * dp + (a * wp - 0.5 * m) * p
    G = w ** (a - 1.0) * q - 0.5 * m * f2 * w ** a * p
    # G' needs q' and the product rules
    qp = w * d2p + wp * dp + (a * wp - 0.5 * m) * dp - 2.0 * a * p
    Gp = (w ** (a - 1.0) * qp + (a - 1.0) * w ** (a - 2.0) * wp * q
          - 0.5 * m * (f3 * w ** a * p + f2 * (w ** a * dp + a * w ** (a - 1.0) * wp * p)))
    return Gp / u2 - 0.5 * m * G


class LichnerowiczOperator:
    """Per-mode Gram blocks (A, mass) of the Lichnerowicz quadratic form.

    A[m]_{ij} = int (D_m e_i)(D_m e_j) dx and mass[m]_{ij} = int e_i e_j dx
    over the moment interval, e_j = w^{|m|/2} P_j.  Hermitian PSD by
    construction; at a constant-curvature metric the blocks of m and -m
    coincide (the operator is real).
    """

    def __init__(self, u, blocks, mass, m_max, j_max, n_quad):
        self.u = u
        self.blocks = blocks
        self.mass = mass
        self.m_max = m_max
        self.j_max = j_max
        self.n_quad = n_quad

    def eigenvalues(self, m):
        """Generalized eigenvalues of (A[m], mass[m]), ascending."""
        return eigh(self.blocks[m], self.mass[m], eigvals_only=True)

    def psd_residual(self):
        """Most negative generalized eigenvalue over all modes (PSD check)."""
        worst = 0.0
        for m in self.blocks:
            worst = min(worst, float(self.eigenvalues(m)[0]))
        return worst

    def realness_residual(self):
        """max_m ||A[m] - A[-m]||_inf (zero iff the operator is real)."""
        worst = 0.0
        for m in self.blocks:
            if m < 0:
                continue
            worst = max(worst, float(np.max(np.abs(self.blocks[m] - self.blocks[-m]))))
        return worst

    def spectral_scale(self):
        return max(float(np.max(self.eigenvalues(m))) for m in self.blocks)


def lichnerowicz_assemble(u, m_max=3, j_max=24, n_quad=256):
    """Assemble the per-mode blocks of D*D at the metric of u.

    Gauss-Legendre quadrature of the closed-form integrands; blocks for
    m in {-m_max..m_max}, j_max basis profiles each.
    """
    nodes, weights = _gauss01(n_quad)
    blocks = {}
    mass = {}
    for m in range(-m_max, m_max + 1):
        D = np.empty((j_max, nodes.size))
        E = np.empty((j_max, nodes.size))
        for j in range(j_max):
            D[j] = _reduced_D(u, m, j, nodes)
            E[j] = basis_profile(m, j, nodes)
        A = (D * weights) @ D.T
        Mm = (E * weights) @ E.T
        blocks[m] = 0.5 * (A + A.T)
        mass[m] = 0.5 * (Mm + Mm.T)
    return LichnerowiczOperator(u, blocks, mass, m_max, j_max, n_quad)


def kernel_dimension(op, tol=1e-6, require_stable=True):
    """Number of near-zero eigenvalues across all modes.

    Threshold is tol times the largest eigenvalue.  With require_stable the
    count is recomputed with two more basis profiles per mode and must
    agree, otherwise a ValueError reports the discrepancy.
    """
    scale = op.spectral_scale()
    count = sum(int(np.sum(op.eigenvalues(m) < tol * scale)) for m in op.blocks)
    if require_stable:
        finer = lichnerowicz_assemble(op.u, m_max=op.m_max,
                                      j_max=op.j_max + 2, n_quad=op.n_quad)
        scale2 = finer.spectral_scale()
        count2 = sum(int(np.sum(finer.eigenvalues(m) < tol * scale2))
                     for m in finer.blocks)
        if count2 != count:
            raise ValueError(
                "kernel count unstable under refinement: %d vs %d" % (count, count2))
    return count


def complex_hamiltonian_check(u, m, coeffs, n_quad=256):
    """Normalized residual ||D v|| / ||v|| for v given in the mode-m basis.

    Zero exactly when v is the complex Hamiltonian of a holomorphic field;
    at the round metric that span is {1, x} in mode 0 and the lowest
    profile in modes +-1.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    nodes, weights = _gauss01(n_quad)
    Dv = np.zeros(nodes.size)
    v = np.zeros(nodes.size)
    for j, cj in enumerate(coeffs):
        if cj == 0.0:
            continue
        Dv += cj * _reduced_D(u, m, j, nodes)
        v += cj * basis_profile(m, j, nodes)
    num = float(np.dot(weights, Dv * Dv))
    den = float(np.dot(weights, v * v))
    if den <= 0.0:
        raise ValueError("zero test function")
    return float(np.sqrt(num / den))
