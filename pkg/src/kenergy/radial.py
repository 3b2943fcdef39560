"""Rotation-invariant sphere metrics in dual coordinate systems.

A rotation-invariant metric of unit area on the sphere is encoded two ways:

* by a symplectic potential u(x) on the moment interval [0,1],
      u(x) = x log x + (1-x) log(1-x) + f(x),
  with f smooth and u'' > 0 on the interior;
* by a convex potential psi(s) of the log-radial coordinate s = log|z|^2,
  with slopes psi'(-inf) = 0, psi'(+inf) = 1.

The two are Legendre transforms of each other.  The reference (round) metric
is psi0(s) = log(1 + e^s), u0(x) = x log x + (1-x) log(1-x).  The angular
2*pi is absorbed into the s-measure: the metric area density is rho = psi''
with total mass 1, and the moment map x = psi' pushes rho ds forward to
Lebesgue measure on [0,1].

Derivatives of f are taken from its sine-series interpolant (affine part
through the endpoint values plus a DST-I of the interior residual), so the
singular boundary terms coming from the x log x piece are always handled in
closed form and never by differencing across the interval ends.
"""

import io

import numpy as np
from scipy.fft import dst
from scipy.integrate import simpson
from scipy.special import expit, xlogy


class DegenerateMetricError(ValueError):
    """Raised when a potential fails strict convexity beyond the 1e-10 floor."""


# floor below which a metric density counts as degenerate; used for error
# reporting only, values are never clamped
DENSITY_FLOOR = 1e-10

_CONVEXITY_MARGIN = 0.0  # u'' must exceed this at interior nodes


# ---------------------------------------------------------------------------
# reference (round) metric, closed forms

def reference_psi(s):
    """psi0(s) = log(1 + e^s), evaluated overflow-safely."""
    return np.logaddexp(0.0, s)


def reference_moment(s):
    """x0(s) = psi0'(s) = e^s / (1 + e^s)."""
    return expit(s)


def reference_density(s):
    """rho0(s) = psi0''(s) = e^s / (1 + e^s)^2."""
    p = expit(s)
    return p * expit(-s)


def reference_ricci(s):
    """Ricci density of the round metric, r0(s) = 2 e^s/(1+e^s)^2."""
    return 2.0 * reference_density(s)


def guillemin_term(x):
    """x log x + (1-x) log(1-x) with the 0 log 0 = 0 convention."""
    return xlogy(x, x) + xlogy(1.0 - x, 1.0 - x)


# ---------------------------------------------------------------------------
# sine-series model for the smooth part f

class _SineModel:
    """Interpolant f(x) = f(0)(1-x) + f(1)x + sum_j b_j sin(j pi x).

    The coefficients come from a DST-I of the interior residual, so the model
    reproduces the grid values exactly.  Coefficients below a relative floor
    are dropped; for band-limited input (the random ensemble, all shipped
    examples) the retained modes are exactly the generating ones and all
    derivatives below are closed-form evaluations.
    """

    def __init__(self, x_grid, f_values, rel_floor=1e-12):
        n = x_grid.size
        self.a0 = float(f_values[0])
        self.a1 = float(f_values[-1])
        resid = f_values[1:-1] - (self.a0 * (1.0 - x_grid[1:-1]) + self.a1 * x_grid[1:-1])
        coef = dst(resid, type=1) / (n - 1)
        # threshold against the overall function scale so that the DST noise
        # of an exactly affine f (all coefficients ~1e-17) keeps no modes
        scale = max(float(np.max(np.abs(f_values))), 1.0e-300)
        if coef.size:
            scale = max(scale, float(np.max(np.abs(coef))))
            keep = np.abs(coef) > rel_floor * scale
        else:
            keep = np.zeros(coef.size, dtype=bool)
        self.j = (np.nonzero(keep)[0] + 1).astype(float)
        self.b = coef[keep]
        self.n_modes = self.j.size

    def _sin(self, x):
        return np.sin(np.multiply.outer(np.asarray(x, dtype=float), np.pi * self.j))

    def _cos(self, x):
        return np.cos(np.multiply.outer(np.asarray(x, dtype=float), np.pi * self.j))

    def f(self, x):
        base = self.a0 * (1.0 - np.asarray(x, dtype=float)) + self.a1 * np.asarray(x, dtype=float)
        if self.n_modes == 0:
            return base
        return base + self._sin(x) @ self.b

    def df(self, x):
        base = np.full(np.shape(x), self.a1 - self.a0, dtype=float)
        if self.n_modes == 0:
            return base
        return base + self._cos(x) @ (self.b * (np.pi * self.j))

    def d2f(self, x):
        if self.n_modes == 0:
            return np.zeros(np.shape(x), dtype=float)
        return -(self._sin(x) @ (self.b * (np.pi * self.j) ** 2))

    def d3f(self, x):
        if self.n_modes == 0:
            return np.zeros(np.shape(x), dtype=float)
        return -(self._cos(x) @ (self.b * (np.pi * self.j) ** 3))

    def d4f(self, x):
        if self.n_modes == 0:
            return np.zeros(np.shape(x), dtype=float)
        return self._sin(x) @ (self.b * (np.pi * self.j) ** 4)


# ---------------------------------------------------------------------------
# symplectic side

class SymplecticPotential:
    """Symplectic potential u = x log x + (1-x) log(1-x) + f on [0,1].

    Parameters
    ----------
    x_grid : array, uniform ascending grid on [0,1] including the endpoints
    f_values : array, values of the smooth correction f at the grid nodes

    The constructor validates the grid and strict convexity u'' > 0 at all
    interior nodes (the Guillemin term is added analytically, so the check is
    1 + x(1-x) f''(x) > 0).  Instances are immutable.
    """

    def __init__(self, x_grid, f_values):
        x_grid = np.asarray(x_grid, dtype=float).copy()
        f_values = np.asarray(f_values, dtype=float).copy()
        if x_grid.ndim != 1 or x_grid.size < 8:
            raise ValueError("x_grid must be a 1-d array with at least 8 nodes")
        if f_values.shape != x_grid.shape:
            raise ValueError("f_values and x_grid must have matching shapes")
        if not np.all(np.isfinite(f_values)):
            raise ValueError("f_values contains non-finite entries")
        n = x_grid.size
        h = 1.0 / (n - 1)
        if abs(x_grid[0]) > 1e-12 or abs(x_grid[-1] - 1.0) > 1e-12:
            raise ValueError("x_grid must span [0,1]")
        if np.max(np.abs(np.diff(x_grid) - h)) > 1e-9 * h:
            raise ValueError("x_grid must be uniform and ascending")
        self.x_grid = x_grid
        self.f_values = f_values
        self._model = _SineModel(x_grid, f_values)
        xi = x_grid[1:-1]
        w = xi * (1.0 - xi)
        conv = 1.0 + w * self._model.d2f(xi)
        bad = np.nonzero(conv <= _CONVEXITY_MARGIN)[0]
        if bad.size:
            i = int(bad[0]) + 1
            raise DegenerateMetricError(
                "u'' <= 0 at node %d (x = %.6f); potential is not convex" % (i, x_grid[i])
            )
        self.f_second_max = float(np.max(np.abs(self._model.d2f(xi))))
        self.x_grid.flags.writeable = False
        self.f_values.flags.writeable = False

    # -- pointwise evaluations (vectorized over x) --

    def f(self, x):
        return self._model.f(x)

    def u(self, x):
        return guillemin_term(np.asarray(x, dtype=float)) + self._model.f(x)

    def du(self, x):
        x = np.asarray(x, dtype=float)
        return np.log(x / (1.0 - x)) + self._model.df(x)

    def d2u(self, x):
        x = np.asarray(x, dtype=float)
        return 1.0 / (x * (1.0 - x)) + self._model.d2f(x)

    def d3u(self, x):
        x = np.asarray(x, dtype=float)
        w = x * (1.0 - x)
        return (2.0 * x - 1.0) / w ** 2 + self._model.d3f(x)

    def d4u(self, x):
        x = np.asarray(x, dtype=float)
        w = x * (1.0 - x)
        return 2.0 / w ** 2 + 2.0 * (2.0 * x - 1.0) ** 2 / w ** 3 + self._model.d4f(x)

    def u_values(self):
        return self.u(self.x_grid)

    def shifted(self, alpha=0.0, beta=0.0):
        """Potential with f replaced by f + alpha*x + beta (same metric)."""
        return SymplecticPotential(self.x_grid, self.f_values + alpha * self.x_grid + beta)

    def __eq__(self, other):
        return (
            isinstance(other, SymplecticPotential)
            and self.x_grid.shape == other.x_grid.shape
            and np.array_equal(self.f_values, other.f_values)
        )

    def __repr__(self):
        return "SymplecticPotential(n=%d, max|f''|=%.3g)" % (self.x_grid.size, self.f_second_max)


def round_potential(n_x=512):
    """The round metric: f = 0 on an (n_x)-node grid."""
    return SymplecticPotential(np.linspace(0.0, 1.0, n_x), np.zeros(n_x))


# ---------------------------------------------------------------------------
# radial (complex) side

class RadialPotential:
    """Convex potential psi(s) on a symmetric window [-S, S].

    Carries the grid values plus, when constructed by ``legendre_to_s``,
    analytically evaluated first and second derivative arrays (the moment map
    and the metric density) and a handle on the source symplectic potential.
    Discrete convexity and the slope range (0,1) are validated on the grid.
    """

    def __init__(self, s_grid, psi_values, d1=None, d2=None, source=None,
                 slope_left=0.0, slope_right=1.0):
        s_grid = np.asarray(s_grid, dtype=float).copy()
        psi_values = np.asarray(psi_values, dtype=float).copy()
        if s_grid.ndim != 1 or s_grid.size < 16:
            raise ValueError("s_grid must be a 1-d array with at least 16 nodes")
        if psi_values.shape != s_grid.shape:
            raise ValueError("psi_values and s_grid must have matching shapes")
        if not np.all(np.isfinite(psi_values)):
            raise ValueError("psi_values contains non-finite entries")
        h = s_grid[1] - s_grid[0]
        if np.max(np.abs(np.diff(s_grid) - h)) > 1e-9 * h:
            raise ValueError("s_grid must be uniform and ascending")
        sec = psi_values[2:] - 2.0 * psi_values[1:-1] + psi_values[:-2]
        scale = max(1.0, np.max(np.abs(psi_values)))
        bad = np.nonzero(sec < -1e-10 * scale)[0]
        if bad.size:
            i = int(bad[0]) + 1
            raise ValueError(
                "psi fails discrete convexity at node %d (s = %.4f)" % (i, s_grid[i])
            )
        slopes = (psi_values[2:] - psi_values[:-2]) / (2.0 * h)
        if np.any(slopes <= -1e-12) or np.any(slopes >= 1.0 + 1e-12):
            raise ValueError("psi slopes leave the moment interval (0,1)")
        self.s_grid = s_grid
        self.psi_values = psi_values
        self.h = float(h)
        self.slope_left = float(slope_left)
        self.slope_right = float(slope_right)
        self._d1 = None if d1 is None else np.asarray(d1, dtype=float)
        self._d2 = None if d2 is None else np.asarray(d2, dtype=float)
        self.source = source
        self._logit = None  # warm-start cache for the moment solve
        self.s_grid.flags.writeable = False
        self.psi_values.flags.writeable = False

    @property
    def s_max(self):
        return float(self.s_grid[-1])

    def d1(self):
        """psi'(s) on the grid: analytic when available, else centered."""
        if self._d1 is not None:
            return self._d1
        g = np.gradient(self.psi_values, self.h, edge_order=2)
        return g

    def d2(self):
        """psi''(s) on the grid: analytic when available, else centered."""
        if self._d2 is not None:
            return self._d2
        d = np.empty_like(self.psi_values)
        d[1:-1] = (self.psi_values[2:] - 2.0 * self.psi_values[1:-1]
                   + self.psi_values[:-2]) / self.h ** 2
        d[0] = d[1]
        d[-1] = d[-2]
        return d

    def relative(self):
        """psi - psi0 on the grid (the Kahler potential of the metric)."""
        return self.psi_values - reference_psi(self.s_grid)

    def __repr__(self):
        return "RadialPotential(n=%d, S=%.1f)" % (self.s_grid.size, self.s_max)


def reference_radial(n_s=2048, s_max=18.0):
    """Round-metric radial potential psi0 on the standard window."""
    s = np.linspace(-s_max, s_max, n_s)
    return RadialPotential(s, reference_psi(s), d1=reference_moment(s),
                           d2=reference_density(s))


# ---------------------------------------------------------------------------
# Legendre transforms

def legendre_to_s(u, n_s=2048, s_max=18.0, y_init=None):
    """Legendre transform psi(s) = sup_x (x s - u(x)) of a symplectic potential.

    The supremum is located by solving u'(x) = s with a bracketed Newton
    iteration in the logit variable y = log(x/(1-x)), which is exact for the
    round metric and globally monotone.  The returned potential carries the
    analytic moment map psi' = x*(s) and density psi'' = 1/u''(x*).

    Parameters
    ----------
    u : SymplecticPotential
    n_s : number of s nodes
    s_max : half-width S of the window [-S, S]
    y_init : optional warm start for the logit iteration

    Returns
    -------
    RadialPotential
    """
    if not isinstance(u, SymplecticPotential):
        raise TypeError("u must be a SymplecticPotential")
    s = np.linspace(-s_max, s_max, n_s)
    x, y = _solve_moment(u, s, y_init=y_init, with_logit=True)
    psi = x * s - (guillemin_term(x) + u._model.f(x))
    d2 = 1.0 / u.d2u(x)
    out = RadialPotential(s, psi, d1=x, d2=d2, source=u)
    out._logit = y
    return out


def _solve_moment(u, s, y_init=None, with_logit=False):
    """Solve u'(x) = s for x, vectorized and bracketed.

    In the logit variable y = log(x/(1-x)) the residual g(y) = y + f'(x) - s
    is strictly increasing, so a Newton iteration safeguarded by bisection
    (fall back to the bracket midpoint whenever the Newton candidate leaves
    the bracket) converges globally even where 1 + x(1-x) f'' is tiny.
    Converged nodes are frozen; y_init warm-starts the iteration (useful
    when solving a continuum of nearby potentials).
    """
    model = u._model
    s = np.asarray(s, dtype=float)
    fp = model.df(np.linspace(0.0, 1.0, 257))
    ylo = s - (np.max(fp) + 1.0)
    yhi = s - (np.min(fp) - 1.0)
    if y_init is not None:
        y = np.clip(np.asarray(y_init, dtype=float), ylo, yhi)
    else:
        y = np.clip(s - (model.a1 - model.a0), ylo, yhi)
    for _ in range(200):
        x = expit(y)
        w = x * (1.0 - x)
        g = y + model.df(x) - s
        done = np.abs(g) < 1e-13
        if done.all():
            break
        pos = g > 0.0
        yhi = np.where(pos & ~done, y, yhi)
        ylo = np.where(~pos & ~done, y, ylo)
        gp = 1.0 + w * model.d2f(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            yn = y - g / gp
        bad = ~((yn > ylo) & (yn < yhi))
        y = np.where(done, y, np.where(bad, 0.5 * (ylo + yhi), yn))
    else:
        raise DegenerateMetricError("moment solve failed to converge")
    if with_logit:
        return expit(y), y
    return expit(y)


def legendre_to_x(psi, n_x=512):
    """Legendre transform u(x) = sup_s (x s - psi(s)) back to the moment side.

    The supremum is located by monotone matching of slopes: psi'(s*) = x is
    inverted on the grid (analytic slopes when available, else fourth-order
    centered differences) and psi is evaluated at s* through a cubic spline.
    By the envelope theorem the value error is second order in the slope
    matching error.  The exact endpoints x = 0, 1 take the window boundary
    value, off by O(e^{-S}).

    Returns
    -------
    SymplecticPotential on an n_x-node grid.
    """
    if not isinstance(psi, RadialPotential):
        raise TypeError("psi must be a RadialPotential")
    from scipy.interpolate import CubicSpline

    x = np.linspace(0.0, 1.0, n_x)
    s = psi.s_grid
    if psi._d1 is not None:
        p = psi._d1
    else:
        p = _slope_fd4(psi.psi_values, psi.h)
    if np.any(np.diff(p) < -1e-13):
        raise ValueError("slope data is not monotone; cannot invert the moment map")
    spline = CubicSpline(s, psi.psi_values)
    s_star = np.interp(x, p, s)
    u = x * s_star - spline(s_star)
    # x below/above the window's slope range saturates at the boundary
    u[x <= p[0]] = -psi.psi_values[0] + x[x <= p[0]] * s[0]
    u[x >= p[-1]] = x[x >= p[-1]] * s[-1] - psi.psi_values[-1]
    f = u - guillemin_term(x)
    return SymplecticPotential(x, f)


def _slope_fd4(v, h):
    """Fourth-order centered first derivative, one-sided at the edges."""
    p = np.empty_like(v)
    p[2:-2] = (-v[4:] + 8.0 * v[3:-1] - 8.0 * v[1:-3] + v[:-4]) / (12.0 * h)
    p[1] = (v[2] - v[0]) / (2.0 * h)
    p[-2] = (v[-1] - v[-3]) / (2.0 * h)
    p[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)
    p[-1] = (3.0 * v[-1] - 4.0 * v[-2] + v[-3]) / (2.0 * h)
    return p


# ---------------------------------------------------------------------------
# metric density and integration

class MetricDensity:
    """Area density rho = psi'' on the s grid plus the analytic tail masses.

    The window [-S, S] misses mass psi'(-S) on the left and 1 - psi'(S) on
    the right; both are recorded exactly from the moment map so integrals can
    be tail-corrected instead of silently truncated.
    """

    def __init__(self, s_grid, rho, tail_left, tail_right):
        rho = np.asarray(rho, dtype=float)
        if np.any(rho < -1e-14):
            raise DegenerateMetricError("negative metric density")
        self.s_grid = np.asarray(s_grid, dtype=float)
        self.rho = rho
        self.tail_left = float(tail_left)
        self.tail_right = float(tail_right)

    @property
    def min_density(self):
        return float(np.min(self.rho))

    def mass(self):
        return integrate_x(np.ones_like(self.rho), self)


def metric_density(psi):
    """Metric density of a radial potential, with exact tail masses."""
    d1 = psi.d1()
    d2 = psi.d2()
    return MetricDensity(psi.s_grid, d2, tail_left=max(d1[0], 0.0),
                         tail_right=max(1.0 - d1[-1], 0.0))


def integrate_x(g, density, tails=None):
    """Integral of g against the metric measure rho ds, tail corrected.

    Parameters
    ----------
    g : array of integrand values on the density's s grid
    density : MetricDensity
    tails : optional pair (g_left, g_right) of the integrand's boundary
        limits; defaults to the first and last grid values.  The tail mass
        beyond the window is assigned to these limits, which is exact up to
        the oscillation of g over the tails.

    Returns
    -------
    float
    """
    g = np.asarray(g, dtype=float)
    if not np.all(np.isfinite(g)):
        raise ValueError("integrand contains non-finite values")
    core = simpson(g * density.rho, x=density.s_grid)
    if tails is None:
        gl, gr = g[0], g[-1]
    else:
        gl, gr = tails
    return float(core + gl * density.tail_left + gr * density.tail_right)


def moment_map(psi):
    """Moment map x(s) = psi'(s); validates monotonicity."""
    x = psi.d1()
    if np.any(np.diff(x) < -1e-12):
        raise ValueError("moment map is not monotone")
    return x


# ---------------------------------------------------------------------------
# curvature

def _curvature_from_model(u, x):
    """R = -(1/u'')'' evaluated through the w = x(1-x) split.

    With g = 1/u'' = w / (1 + w f''), the first two derivatives of g are
    rational in (w, f'', f''', f'''') and stay finite at the interval ends,
    where they reduce to R(0) = 2 + 2 f''(0), R(1) = 2 + 2 f''(1).
    """
    x = np.asarray(x, dtype=float)
    m = u._model
    w = x * (1.0 - x)
    wp = 1.0 - 2.0 * x
    f2 = m.d2f(x)
    f3 = m.d3f(x)
    f4 = m.d4f(x)
    q = 1.0 + w * f2
    if np.any(q <= 0.0):
        raise DegenerateMetricError("metric density vanishes inside the interval")
    # g' = (w' - w^2 f''') / q^2
    num1 = wp - w ** 2 * f3
    # g'' = [w'' - 2 w w' f''' - w^2 f''''] / q^2 - 2 num1 (w' f'' + w f''') / q^3
    num2 = -2.0 - 2.0 * w * wp * f3 - w ** 2 * f4
    g2 = num2 / q ** 2 - 2.0 * num1 * (wp * f2 + w * f3) / q ** 3
    return -g2


def scalar_curvature(u):
    """Scalar curvature R(x) = -(1/u'')'' at the interior grid nodes.

    Raises DegenerateMetricError when the density 1/u'' falls below the
    1e-10 floor anywhere on the grid (no clamping is applied).
    """
    x = u.x_grid[1:-1]
    d2 = u.d2u(x)
    if np.any(1.0 / d2 < DENSITY_FLOOR):
        raise DegenerateMetricError("metric density below the 1e-10 floor")
    return _curvature_from_model(u, x)


def scalar_curvature_at(u, x):
    """Scalar curvature at arbitrary points of [0,1] (endpoints allowed)."""
    return _curvature_from_model(u, x)


def curvature_integral(u, n_quad=400):
    """Gauss-Legendre quadrature of int_0^1 R dx (Gauss-Bonnet check)."""
    nodes, weights = _gauss01(n_quad)
    return float(np.dot(weights, _curvature_from_model(u, nodes)))


def ricci_density(psi):
    """Ricci density r(s) = -(log psi'')''(s) on the grid.

    Uses the closed chain-rule form through the source symplectic potential
    when available, otherwise centered differences of log psi''.
    """
    d2 = psi.d2()
    if np.any(d2 < DENSITY_FLOOR):
        raise DegenerateMetricError("metric density below the 1e-10 floor")
    if psi.source is not None:
        u = psi.source
        x = psi.d1()
        u2 = u.d2u(x)
        u3 = u.d3u(x)
        u4 = u.d4u(x)
        return u4 / u2 ** 3 - 2.0 * u3 ** 2 / u2 ** 4
    lg = np.log(d2)
    r = np.empty_like(lg)
    r[1:-1] = -(lg[2:] - 2.0 * lg[1:-1] + lg[:-2]) / psi.h ** 2
    r[0] = r[1]
    r[-1] = r[-2]
    return r


def ricci_integral(psi, refine=8):
    """int r ds over the line: window quadrature plus exact tail fluxes.

    The tails contribute 1 -+ (log psi'')'(+-S); the boundary derivative is
    taken from the chain-rule form when the source potential is known, and
    the window quadrature then runs on a grid refined by the given factor
    (r carries fourth derivatives of the potential, so it oscillates harder
    than the density itself).
    """
    # int_{S}^{inf} r = 1 + (log psi'')'(S); int_{-inf}^{-S} r = 1 - (log psi'')'(-S)
    if psi.source is not None:
        u = psi.source
        n_fine = refine * (psi.s_grid.size - 1) + 1
        s = np.linspace(psi.s_grid[0], psi.s_grid[-1], n_fine)
        x = _solve_moment(u, s)
        u2 = u.d2u(x)
        u3 = u.d3u(x)
        u4 = u.d4u(x)
        r = u4 / u2 ** 3 - 2.0 * u3 ** 2 / u2 ** 4
        core = simpson(r, x=s)
        dlog = -u3 / u2 ** 2  # (log psi'')'(s)
        left = 1.0 - dlog[0]
        right = 1.0 + dlog[-1]
    else:
        r = ricci_density(psi)
        core = simpson(r, x=psi.s_grid)
        lg = np.log(psi.d2())
        left = 1.0 - (lg[1] - lg[0]) / psi.h
        right = 1.0 + (lg[-1] - lg[-2]) / psi.h
    return float(core + left + right)


def _gauss01(n):
    nodes, weights = np.polynomial.legendre.leggauss(n)
    return 0.5 * (nodes + 1.0), 0.5 * weights


# ---------------------------------------------------------------------------
# CSV interface: header "x,f", one row per node

def potential_to_csv(u, path_or_buf):
    """Write a potential as CSV with header ``x,f``."""
    close = False
    if isinstance(path_or_buf, (str, bytes)):
        fh = open(path_or_buf, "w")
        close = True
    else:
        fh = path_or_buf
    try:
        fh.write("x,f\n")
        for xv, fv in zip(u.x_grid, u.f_values):
            fh.write("%.17g,%.17g\n" % (xv, fv))
    finally:
        if close:
            fh.close()


def potential_from_csv(path_or_buf):
    """Read a potential from CSV with header ``x,f``.

    Malformed rows, a wrong header, or a non-uniform grid raise ValueError
    naming the offending row.
    """
    close = False
    if isinstance(path_or_buf, (str, bytes)):
        fh = open(path_or_buf, "r")
        close = True
    else:
        fh = path_or_buf
    try:
        header = fh.readline().strip()
        if header != "x,f":
            raise ValueError("expected header 'x,f', got %r" % header)
        xs, fs = [], []
        for i, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise ValueError("row %d: expected two comma-separated fields" % i)
            try:
                xs.append(float(parts[0]))
                fs.append(float(parts[1]))
            except ValueError:
                raise ValueError("row %d: could not parse floats" % i) from None
    finally:
        if close:
            fh.close()
    x = np.array(xs)
    if x.size < 8:
        raise ValueError("potential CSV needs at least 8 rows")
    h = 1.0 / (x.size - 1)
    d = np.diff(x)
    bad = np.nonzero(np.abs(d - h) > 1e-9 * max(h, 1e-300))[0]
    if abs(x[0]) > 1e-12 or abs(x[-1] - 1.0) > 1e-12 or bad.size:
        row = int(bad[0]) + 3 if bad.size else 2
        raise ValueError("row %d: grid is not the uniform ascending grid on [0,1]" % row)
    return SymplecticPotential(x, np.array(fs))


def potential_csv_string(u):
    buf = io.StringIO()
    potential_to_csv(u, buf)
    return buf.getvalue()
