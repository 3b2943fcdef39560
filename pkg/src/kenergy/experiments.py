"""Reproducible experiment drivers behind the command line interface.

Each driver samples from a seeded band-limited ensemble, runs one module
suite, writes CSV reports plus a summary.txt with one PASS/FAIL line per
asserted property, and returns a process exit code.  CSV is the contract:
all floats are written with %.17g so a fixed config and seed reproduce the
files byte for byte (everything runs sequentially; nothing here depends on
thread scheduling).  SVG plots are a convenience layer over matplotlib and
are never parsed by anything.

The uniqueness experiment minimizes M + s F over the coefficients of
f = alpha x + sum_j a_j sin(j pi x).  Objective and gradient are evaluated
in moment coordinates on a fixed quadrature rule, where every s-integral
substitutes s = u'(x) exactly (no window truncation), so the gradient is
the exact derivative of the discretized objective and descent is monotone
down to the 1e-8 gradient floor.
"""

import os

import numpy as np
from scipy.special import expit

from .radial import (
    DegenerateMetricError,
    SymplecticPotential,
    _gauss01,
    legendre_to_s,
    reference_density,
    round_potential,
)
from .functionals import (
    chen_inequality_check,
    energy_E,
    entropy,
    geodesic_distance,
    mabuchi,
)
from .geodesics import (
    complexify,
    convexity_margin,
    geodesic_ode_residual,
    hrma_residual,
    mabuchi_along,
    weak_geodesic,
)
from .symmetry import (
    OrbitPath,
    kernel_dimension,
    lichnerowicz_assemble,
    orbit_flatness_and_F,
    orbit_hamiltonian_residual,
)
from . import bergman as bg


# ---------------------------------------------------------------------------
# configuration

_INT_KEYS = ("seed", "n_x", "n_s", "m", "n_pairs", "n_pairs_chen", "n_starts",
             "j_modes")
_FLOAT_KEYS = ("t_min", "t_max", "amplitude", "mu_shift", "orbit_a",
               "tol_convexity", "tol_slack", "tol_identity", "tol_hrma",
               "tol_ode", "tol_hamiltonian", "tol_flat", "tol_spectral",
               "tol_pairwise")
_LIST_KEYS = ("k_list", "s_list")
_STR_KEYS = ("out",)
_BOOL_KEYS = ("svg",)

_DEFAULTS = {
    "seed": 1234,
    "n_x": 512,
    "n_s": 2048,
    "m": 64,
    "n_pairs": 20,
    "n_pairs_chen": 50,
    "n_starts": 3,
    "j_modes": 8,
    "t_min": -1.0,
    "t_max": 1.0,
    "amplitude": 0.2,
    "mu_shift": 0.35,
    "orbit_a": 1.0,
    "k_list": [5.0, 10.0, 20.0, 50.0, 100.0],
    "s_list": [0.3, 0.1, 0.03, 0.01],
    "tol_convexity": 1e-6,
    "tol_slack": 1e-6,
    "tol_identity": 1e-4,
    "tol_hrma": 1e-4,
    "tol_ode": 1e-3,
    "tol_hamiltonian": 1e-8,
    "tol_flat": 1e-6,
    "tol_spectral": 1e-8,
    "tol_pairwise": 1e-4,
    "svg": False,
    "out": ".",
}


class ExperimentConfig:
    """Validated key/value configuration shared by all drivers."""

    def __init__(self, **kwargs):
        values = dict(_DEFAULTS)
        for key, val in kwargs.items():
            if key not in values:
                raise ValueError("unknown config key: %s" % key)
            values[key] = val
        for key, val in values.items():
            setattr(self, key, val)
        for key in _INT_KEYS:
            if getattr(self, key) <= 0:
                raise ValueError("config %s must be positive" % key)
        for key in _FLOAT_KEYS:
            if key.startswith("tol") and getattr(self, key) <= 0.0:
                raise ValueError("config %s must be positive" % key)
        if not (self.t_max > self.t_min):
            raise ValueError("config t_max must exceed t_min")
        if any(k <= 0 for k in self.k_list):
            raise ValueError("config k_list entries must be positive")
        if any(s <= 0 for s in self.s_list):
            raise ValueError("config s_list entries must be positive")

    @classmethod
    def from_file(cls, path, overrides=None):
        kwargs = {}
        with open(path) as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError("%s:%d: expected key = value" % (path, lineno))
                key, val = (part.strip() for part in line.split("=", 1))
                if key in _INT_KEYS:
                    kwargs[key] = int(val)
                elif key in _FLOAT_KEYS:
                    kwargs[key] = float(val)
                elif key in _LIST_KEYS:
                    kwargs[key] = [float(v) for v in val.split(",") if v.strip()]
                elif key in _BOOL_KEYS:
                    kwargs[key] = val.lower() in ("1", "true", "yes", "on")
                elif key in _STR_KEYS:
                    kwargs[key] = val
                else:
                    raise ValueError("%s:%d: unknown config key: %s"
                                     % (path, lineno, key))
        if overrides:
            kwargs.update(overrides)
        return cls(**kwargs)


# ---------------------------------------------------------------------------
# report plumbing

def _fmt(x):
    return "%.17g" % float(x)


def _write_csv(path, header, rows):
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) if isinstance(v, float) or isinstance(v, np.floating)
                              else str(v) for v in row) + "\n")
    return path


class Summary:
    """Collects PASS/FAIL lines; writes summary.txt; tracks exit status."""

    def __init__(self, title):
        self.title = title
        self.lines = []
        self.failed = 0

    def check(self, name, ok, detail):
        tag = "PASS" if ok else "FAIL"
        if not ok:
            self.failed += 1
        self.lines.append("%s  %s: %s" % (tag, name, detail))
        return ok

    def note(self, text):
        self.lines.append("note  %s" % text)

    def write(self, out_dir):
        path = os.path.join(out_dir, "summary.txt")
        with open(path, "w") as fh:
            fh.write("# %s\n" % self.title)
            for line in self.lines:
                fh.write(line + "\n")
            fh.write("result: %s\n" % ("FAIL" if self.failed else "PASS"))
        return path

    @property
    def exit_code(self):
        return 1 if self.failed else 0


def _svg_plot(path, xs, ys_list, labels, xlabel, ylabel, stem=False):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    for ys, lab in zip(ys_list, labels):
        if stem:
            ax.stem(xs, ys, label=lab)
        else:
            ax.plot(xs, ys, label=lab, lw=1.2)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if any(labels):
        ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


# ---------------------------------------------------------------------------
# seeded ensemble

_FLOOR_GRID = np.linspace(0.0, 1.0, 4097)


def sample_potential(rng, n_x=512, j_modes=8, amplitude=0.2, max_tries=256,
                     q_floor=0.2):
    """Draw u from the band-limited ensemble a_j ~ U[-A/j^2, A/j^2].

    The amplitude bound keeps most draws convex but does not control
    sum_j |a_j| (j pi)^2 in the worst case, and draws where the relative
    density q = 1 + x(1-x) f'' merely comes close to zero concentrate the
    metric density into s-features too narrow for the fixed transform
    grids (the uniform-grid entropy and mass quadratures then lose several
    digits).  Draws with min q < q_floor are therefore rejected; weak
    geodesic slices inherit the floor because q is affine along them.
    """
    x = np.linspace(0.0, 1.0, n_x)
    j = np.arange(1, j_modes + 1)
    wf = _FLOOR_GRID * (1.0 - _FLOOR_GRID)
    sin_f = np.sin(np.pi * np.outer(_FLOOR_GRID, j))
    for _ in range(max_tries):
        a = rng.uniform(-amplitude / j ** 2, amplitude / j ** 2)
        q = 1.0 - wf * (sin_f @ (a * (np.pi * j) ** 2))
        if float(np.min(q)) < q_floor:
            continue
        return SymplecticPotential(x, np.sin(np.pi * np.outer(x, j)) @ a)
    raise RuntimeError("ensemble rejection loop exhausted")


def _mu_of(config):
    """Two-translate mixture used as the fixed reference density mu.

    A single translated reference has its F critical point exactly on the
    orbit (the pushforward of mu under the shifted round moment map is
    already Lebesgue), which collapses the perturbation experiment: the
    minimizer of M + sF would sit at the orbit F-minimizer for every s.
    The mixture keeps the orbit F-minimizer at t = -mu_shift/(2a) while
    pulling the unrestricted minimizer off the orbit by O(s).
    """
    b = config.mu_shift
    return lambda s: 0.5 * (reference_density(np.asarray(s))
                            + reference_density(np.asarray(s) - 2.0 * b))


# ---------------------------------------------------------------------------
# uniqueness optimizer

class MinimizerState:
    """State of one projected-gradient run on (alpha, a_1..a_J)."""

    __slots__ = ("coeffs", "objective", "grad_norm", "iterations", "converged")

    def __init__(self, coeffs, objective, grad_norm, iterations, converged):
        self.coeffs = coeffs
        self.objective = objective
        self.grad_norm = grad_norm
        self.iterations = iterations
        self.converged = converged


def _uni_quadrature(n_quad=400):
    return _gauss01(n_quad)


def _uni_value_grad(theta, s_weight, b, nodes, weights, j_modes):
    """(M + s F)(theta) and its exact gradient on the fixed quadrature rule.

    All s-line integrals are substituted to moment coordinates via s = u'(x),
    which is exact over the whole line; mu is the reference density shifted
    by b.  Raises DegenerateMetricError when 1 + w f'' <= 0 at a node.
    """
    x = nodes
    w = x * (1.0 - x)
    jj = np.arange(1, j_modes + 1)
    sin_t = np.sin(np.pi * np.outer(x, jj))
    cos_t = np.cos(np.pi * np.outer(x, jj))
    alpha, a = theta[0], theta[1:]
    f = alpha * x + sin_t @ a
    f1 = alpha + cos_t @ (a * (np.pi * jj))
    f2 = -(sin_t @ (a * (np.pi * jj) ** 2))
    q = 1.0 + w * f2
    if np.min(q) <= 1e-12:
        raise DegenerateMetricError("u'' <= 0 inside the ensemble step")
    # u' = log(x/(1-x)) + f', u = x log x + (1-x) log(1-x) + f
    s_of = np.log(x / (1.0 - x)) + f1
    u_of = x * np.log(x) + (1.0 - x) * np.log1p(-x) + f
    sig = expit(s_of)                          # moment of the reference at s
    psi_rel = x * s_of - u_of - np.logaddexp(0.0, s_of)
    rho0 = sig * (1.0 - sig)
    mu = 0.5 * (_shifted_rho0(s_of, 0.0) + _shifted_rho0(s_of, 2.0 * b))
    mu_p = 0.5 * (_shifted_rho0_prime(s_of, 0.0)
                  + _shifted_rho0_prime(s_of, 2.0 * b))
    u2 = q / w

    def quad(vals):
        return float(np.dot(weights, vals))

    E = quad(psi_rel * (1.0 + rho0 * u2))
    Z = quad(mu * u2)
    if not np.isfinite(Z) or Z < 1e-280:
        raise DegenerateMetricError("mu mass underflows at this step")
    N = quad(psi_rel * mu * u2)
    # f(0) = 0 and f(1) = alpha for this coefficient family
    M = -quad(np.log(q)) + alpha - 2.0 * quad(f)
    F = N / Z - 0.5 * E
    value = M + s_weight * F

    # directional pieces shared by all coefficients
    rho0_p = rho0 * (1.0 - 2.0 * sig)
    dA_fac = x - sig                      # dA = (x - sig) dphi' - dphi
    grads = np.empty(theta.size)
    for idx in range(theta.size):
        if idx == 0:
            phi, phi1, phi2 = x, np.ones_like(x), np.zeros_like(x)
            endsum = 1.0   # phi(0) + phi(1)
            phint = 0.5
        else:
            jm = idx
            phi = sin_t[:, jm - 1]
            phi1 = np.pi * jm * cos_t[:, jm - 1]
            phi2 = -(np.pi * jm) ** 2 * sin_t[:, jm - 1]
            endsum = 0.0
            phint = (1.0 - np.cos(np.pi * jm)) / (np.pi * jm)
        dM = -quad(w * phi2 / q) + endsum - 2.0 * phint
        dA = dA_fac * phi1 - phi
        # u'' = 1/w + f'' so its variation along phi is phi'' exactly
        dE = quad(dA * (1.0 + rho0 * u2) + psi_rel * (rho0_p * phi1 * u2
                                                      + rho0 * phi2))
        dZ = quad(mu_p * phi1 * u2 + mu * phi2)
        dN = quad(dA * mu * u2 + psi_rel * (mu_p * phi1 * u2 + mu * phi2))
        dF = dN / Z - N * dZ / Z ** 2 - 0.5 * dE
        grads[idx] = dM + s_weight * dF
    return value, grads


def _shifted_rho0(s, b):
    e = expit(np.asarray(s) - b)
    return e * (1.0 - e)

def _shifted_rho0_prime(s, b):
    e = expit(np.asarray(s) - b)
    return e * (1.0 - e) * (1.0 - 2.0 * e)


def minimize_objective(s_weight, b, rng, j_modes=8, grad_tol=1e-8,
                       max_iter=10000, theta0=None):
    """Projected gradient descent with Armijo backtracking on M + s F.

    Diagonal preconditioning: the sine modes see the (j pi)^4 stiffness of
    the K-energy Hessian, the affine direction is curved only by s F.  The
    E-normalization lives in the constant direction, which the coefficient
    space omits, so the projection is the identity there and the objective
    is evaluated on the normalized representative implicitly.
    """
    nodes, weights = _uni_quadrature()
    jj = np.arange(1, j_modes + 1)
    # measured diagonal curvatures: F_alpha,alpha = 1/6 exactly; the sine
    # modes see (j pi)^4 / 45..60 from the K-energy plus ~6 j s from F
    precond = np.empty(j_modes + 1)
    precond[0] = 6.0 / s_weight
    precond[1:] = 1.0 / ((np.pi * jj) ** 4 / 45.0 + 6.0 * jj * s_weight)
    if theta0 is None:
        for _ in range(50):
            theta = np.concatenate(([rng.uniform(-0.2, 0.7)],
                                    rng.uniform(-0.1 / jj ** 2, 0.1 / jj ** 2)))
            try:
                value, grad = _uni_value_grad(theta, s_weight, b, nodes,
                                              weights, j_modes)
                break
            except DegenerateMetricError:
                continue
        else:
            raise RuntimeError("could not draw an admissible starting point")
    else:
        theta = np.asarray(theta0, dtype=float).copy()
        value, grad = _uni_value_grad(theta, s_weight, b, nodes, weights, j_modes)
    it = 0
    gnorm = float(np.linalg.norm(grad))
    for it in range(1, max_iter + 1):
        gnorm = float(np.linalg.norm(grad))
        if gnorm < grad_tol:
            return MinimizerState(theta, value, gnorm, it - 1, True)
        if gnorm < 1e-5:
            break   # objective differences fall below float resolution here
        step = precond * grad
        decrease = float(np.dot(grad, step))
        accepted = False
        eta = 1.0   # fixed trial step; backtracking only, no growth memory
        for _ in range(40):
            cand = theta - eta * step
            try:
                v2, g2 = _uni_value_grad(cand, s_weight, b, nodes, weights, j_modes)
            except DegenerateMetricError:
                eta *= 0.5
                continue
            if v2 <= value - 1e-4 * eta * decrease:
                theta, value, grad = cand, v2, g2
                accepted = True
                break
            eta *= 0.5
        if not accepted:
            break
    # terminal polish: the Armijo gate is blind once the true decrease per
    # step drops under the quadrature round-off of the objective (~1e-17),
    # while the gradient still resolves ~1e-15; iterate the diagonal-Newton
    # map gated on gradient decrease instead
    for extra in range(1, 301):
        if gnorm < grad_tol:
            return MinimizerState(theta, value, gnorm, it + extra - 1, True)
        try:
            cand = theta - precond * grad
            v2, g2 = _uni_value_grad(cand, s_weight, b, nodes, weights, j_modes)
        except DegenerateMetricError:
            break
        g2n = float(np.linalg.norm(g2))
        if not np.isfinite(g2n) or g2n >= gnorm:
            break
        theta, grad, gnorm = cand, g2, g2n
        value = min(value, v2)
    return MinimizerState(theta, value, gnorm, min(it + 300, max_iter),
                          gnorm < grad_tol)


def potential_from_coeffs(theta, n_x=512):
    x = np.linspace(0.0, 1.0, n_x)
    jj = np.arange(1, theta.size)
    f = theta[0] * x + np.sin(np.pi * np.outer(x, jj)) @ theta[1:]
    return SymplecticPotential(x, f)


def _normalized(u):
    """Shift by the constant that zeroes the mixed energy E."""
    psi = legendre_to_s(u)
    c = 0.5 * energy_E(psi.relative(), psi)
    return u.shifted(0.0, c)


# ---------------------------------------------------------------------------
# drivers

def cmd_convexity(config):
    rng = np.random.default_rng(config.seed)
    summary = Summary("convexity of the K-energy along weak geodesics")
    rows = []
    worst = np.inf
    for pair in range(config.n_pairs):
        u0 = sample_potential(rng, config.n_x, config.j_modes, config.amplitude)
        u1 = sample_potential(rng, config.n_x, config.j_modes, config.amplitude)
        path = weak_geodesic(u0, u1, m=config.m)
        _, vals = mabuchi_along(path)
        margin = convexity_margin(vals)
        scale = 1.0 + float(np.max(np.abs(vals)))
        worst = min(worst, margin / scale)
        for t, v in zip(path.t_grid, vals):
            rows.append((pair, float(t), float(v)))
        summary.check("convexity.pair_%02d" % pair, margin >= -config.tol_convexity * scale,
                      "min second difference %.3e (scale %.3g)" % (margin, scale))
    files = [_write_csv(os.path.join(config.out, "convexity.csv"),
                        "pair,t,mabuchi", rows)]
    summary.note("worst normalized margin %.3e" % worst)
    files.append(summary.write(config.out))
    return summary.exit_code, files


def cmd_chen(config):
    rng = np.random.default_rng(config.seed)
    summary = Summary("distance-Calabi lower bound for K-energy differences")
    rows = []
    for pair in range(config.n_pairs_chen):
        u0 = sample_potential(rng, config.n_x, config.j_modes, config.amplitude)
        u1 = sample_potential(rng, config.n_x, config.j_modes, config.amplitude)
        lhs, rhs, slack = chen_inequality_check(u0, u1)
        rows.append((pair, lhs, rhs, slack))
        summary.check("chen.pair_%02d" % pair, slack >= -config.tol_slack,
                      "slack %.3e" % slack)
    u0 = round_potential(config.n_x)
    m_round = mabuchi(u0)
    summary.check("chen.round_base_zero", abs(m_round) <= 1e-8,
                  "M(round) = %.3e" % m_round)
    ok_min = True
    for pair in range(10):
        u1 = sample_potential(rng, config.n_x, config.j_modes, config.amplitude)
        m1 = mabuchi(u1)
        ok_min = ok_min and (m1 >= -config.tol_slack)
    summary.check("chen.round_base_minimizes", ok_min,
                  "all sampled M(u) >= -%g" % config.tol_slack)
    files = [_write_csv(os.path.join(config.out, "chen.csv"),
                        "pair,lhs,rhs,slack", rows)]
    files.append(summary.write(config.out))
    return summary.exit_code, files


def cmd_geodesic(config):
    rng = np.random.default_rng(config.seed)
    summary = Summary("weak geodesic certification and energies along the path")
    u0 = sample_potential(rng, config.n_x, config.j_modes, config.amplitude)
    u1 = sample_potential(rng, config.n_x, config.j_modes, config.amplitude)
    path = weak_geodesic(u0, u1, m=config.m)
    _, vals = mabuchi_along(path)
    sol = complexify(path, n_s=8193, n_t=config.m)
    hrma_t = hrma_residual(path, solution=sol, per_t=True)
    ode_t = geodesic_ode_residual(path, solution=sol, per_t=True)
    rows = []
    for i, t in enumerate(path.t_grid):
        psi = path.transform(t)
        rows.append((float(t), float(vals[i]),
                     energy_E(psi.relative(), psi),
                     entropy(psi),
                     path.speed(t),
                     float(hrma_t[i - 1]) if 0 < i < config.m else float("nan"),
                     float(ode_t[i - 1]) if 0 < i < config.m else float("nan")))
    hrma = hrma_residual(path)
    ode = geodesic_ode_residual(path)
    summary.check("geodesic.hrma", hrma <= config.tol_hrma,
                  "sup degenerate-determinant residual %.3e" % hrma)
    summary.check("geodesic.ode", ode <= config.tol_ode,
                  "L1 two-point boundary residual %.3e" % ode)
    margin = convexity_margin(vals)
    scale = 1.0 + float(np.max(np.abs(vals)))
    summary.check("geodesic.convexity", margin >= -config.tol_convexity * scale,
                  "min second difference %.3e" % margin)
    files = [_write_csv(os.path.join(config.out, "geodesic.csv"),
                        "t,mabuchi,E,entropy,speed,hrma_sup,ode_l1", rows)]
    if config.svg:
        files.append(_svg_plot(os.path.join(config.out, "geodesic.svg"),
                               path.t_grid, [vals], ["M(u_t)"], "t", "K-energy"))
    files.append(summary.write(config.out))
    return summary.exit_code, files


def cmd_orbit(config):
    summary = Summary("automorphism orbits: flat K-energy, convex F")
    u0 = round_potential(config.n_x)
    path = OrbitPath(u0, config.orbit_a, m=config.m,
                     t_range=(config.t_min, config.t_max))
    geo = path.as_geodesic()
    sol = complexify(geo, n_s=8192, n_t=1024)
    hrma = hrma_residual(geo, solution=sol)
    ode = geodesic_ode_residual(geo, solution=sol)
    sup_h, moment_res = orbit_hamiltonian_residual(path, 0.5 * (config.t_min
                                                                + config.t_max))
    rep = orbit_flatness_and_F(path, mu_density=_mu_of(config))
    sol_path = complexify(geo, n_s=8192, n_t=config.m)
    hrma_t = hrma_residual(geo, solution=sol_path, per_t=True)
    rows = []
    for i, t in enumerate(path.t_grid):
        u_t = path.slice(t)
        psi = legendre_to_s(u_t)
        rows.append((float(t), float(rep["mabuchi"][i]), float(rep["F"][i]),
                     energy_E(psi.relative(), psi),
                     float(hrma_t[i - 1]) if 0 < i < config.m else float("nan")))
    summary.check("orbit.hrma", hrma <= config.tol_hrma,
                  "residual %.3e (also against the 1e-6 orbit bar: %s)"
                  % (hrma, "ok" if hrma <= 1e-6 else "above"))
    summary.check("orbit.ode", ode <= config.tol_ode, "residual %.3e" % ode)
    summary.check("orbit.hamiltonian", sup_h <= config.tol_hamiltonian,
                  "sup |udot/2 - h| = %.3e" % sup_h)
    summary.check("orbit.moment_map", moment_res <= config.tol_hamiltonian,
                  "sup |dh - a psi''| = %.3e" % moment_res)
    summary.check("orbit.flat", rep["mabuchi_spread"] <= config.tol_flat,
                  "K-energy spread %.3e" % rep["mabuchi_spread"])
    summary.check("orbit.F_convex", rep["F_second_difference_min"] > 0.0,
                  "min F second difference %.3e" % rep["F_second_difference_min"])
    interior = config.t_min < rep["t_min"] < config.t_max
    summary.check("orbit.F_minimizer", interior and rep["grows_beyond_window"],
                  "t_min = %.6f, F grows toward both window ends" % rep["t_min"])
    files = [_write_csv(os.path.join(config.out, "orbit.csv"),
                        "t,mabuchi,F,E,hrma_sup", rows)]
    if config.svg:
        files.append(_svg_plot(os.path.join(config.out, "orbit.svg"),
                               path.t_grid, [rep["mabuchi"], rep["F"]],
                               ["M", "F"], "t", "energy"))
    files.append(summary.write(config.out))
    return summary.exit_code, files


def cmd_lichnerowicz(config):
    summary = Summary("Lichnerowicz operator: kernel and reality at the round metric")
    u0 = round_potential(config.n_x)
    op = lichnerowicz_assemble(u0)
    rows = []
    for mode in sorted(op.blocks):
        for rank, ev in enumerate(op.eigenvalues(mode)):
            rows.append((mode, rank, float(ev)))
    scale = op.spectral_scale()
    dim = kernel_dimension(op)
    summary.check("lichnerowicz.kernel_dim", dim == 4,
                  "kernel dimension %d (tol 1e-6 x largest eigenvalue)" % dim)
    psd = op.psd_residual()
    summary.check("lichnerowicz.psd", psd >= -config.tol_spectral * scale,
                  "most negative eigenvalue %.3e" % psd)
    real = op.realness_residual()
    summary.check("lichnerowicz.real", real <= config.tol_spectral,
                  "max block asymmetry %.3e" % real)
    files = [_write_csv(os.path.join(config.out, "lichnerowicz.csv"),
                        "mode_m,eigenvalue_rank,eigenvalue", rows)]
    if config.svg:
        ev0 = op.eigenvalues(0)
        files.append(_svg_plot(os.path.join(config.out, "lichnerowicz.svg"),
                               np.arange(ev0.size), [ev0], ["mode 0"],
                               "rank", "eigenvalue", stem=True))
    files.append(summary.write(config.out))
    return summary.exit_code, files


def cmd_bergman(config):
    rng = np.random.default_rng(config.seed)
    summary = Summary("Bergman kernels: density limit and log-kernel positivity")
    rows = []
    w_model = bg.weight_quadratic()
    rep0 = bg.density_limit_check(w_model, 0.0, k_list=config.k_list)
    for k, B, gap in zip(rep0["k_list"], rep0["B"], rep0["gaps"]):
        rows.append((float(k), 0.0, float(B), rep0["limit_density"], float(gap)))
    kmax = max(config.k_list)
    summary.check("bergman.model_limit",
                  rep0["gaps"][-1] <= 0.02 * rep0["limit_density"],
                  "gap at k=%g is %.3e against the closed form" % (kmax, rep0["gaps"][-1]))
    for w, z in ((bg.weight_quartic(0.5), 0.3), (bg.weight_fubini_study(), 0.2)):
        rep = bg.density_limit_check(w, z, k_list=config.k_list)
        for k, B, gap in zip(rep["k_list"], rep["B"], rep["gaps"]):
            rows.append((float(k), float(z), float(B), rep["limit_density"], float(gap)))
        summary.check("bergman.monotone.%s" % w.name, rep["monotone"],
                      "gaps " + " > ".join("%.2e" % g for g in rep["gaps"]))
    files = [_write_csv(os.path.join(config.out, "bergman.csv"),
                        "k,z,B,limit_density,gap", rows)]
    # positivity on the certified families at k = 50
    u0 = round_potential(config.n_x)
    u1 = sample_potential(rng, config.n_x, config.j_modes, config.amplitude)
    fams = [bg.family_constant(bg.weight_quadratic()),
            bg.family_translate(),
            bg.family_geodesic(weak_geodesic(u0, u1, m=16))]
    for fam in fams:
        rep = bg.log_psh_check(fam, k=50)
        tk = bg.tk_positivity(fam, k=50)
        name = fam.kind
        summary.check("bergman.log_psh.%s" % name,
                      rep["min_eig"] >= -1e-6 * max(rep["scale"], 1.0),
                      "min Hessian eigenvalue %.3e (scale %.3g)"
                      % (rep["min_eig"], rep["scale"]))
        summary.check("bergman.tk.%s" % name,
                      tk["min_T"] >= -1e-4 * max(tk["scale"], 1.0),
                      "min T_k %.3e (scale %.3g)" % (tk["min_T"], tk["scale"]))
        files.append(_write_csv(
            os.path.join(config.out, "bergman_family_%s.csv" % name),
            "min_eig,node_count,excluded_fraction",
            [(rep["min_eig"], rep["node_count"], rep["excluded_fraction"])]))
    fam = bg.family_power()
    rep = bg.log_psh_check(fam, k=50)
    summary.note("power family precondition fails (%s); measured min eigenvalue "
                 "%.3e is inconclusive about positivity" % (rep["detail"], rep["min_eig"]))
    if config.svg:
        files.append(_svg_plot(os.path.join(config.out, "bergman.svg"),
                               list(config.k_list),
                               [rep0["B"] / np.asarray(config.k_list)],
                               ["B_k/k at 0"], "k", "density"))
    files.append(summary.write(config.out))
    return summary.exit_code, files


def cmd_uniqueness(config):
    if not config.s_list:
        raise ValueError("s_list must not be empty")
    if list(config.s_list) != sorted(config.s_list, reverse=True):
        raise ValueError("s_list must be positive descending")
    rng = np.random.default_rng(config.seed)
    summary = Summary("perturbed functionals M + sF: unique minimizer, orbit limit")
    b = config.mu_shift
    # orbit reference point: minimizer of F along the round orbit
    orbit = OrbitPath(round_potential(config.n_x), config.orbit_a, m=config.m,
                      t_range=(config.t_min, config.t_max))
    orep = orbit_flatness_and_F(orbit, mu_density=_mu_of(config))
    u_orbit = orbit.slice(orep["t_min"])
    rows = []
    distances = []
    all_ok = True
    for s_val in config.s_list:
        states = []
        for start in range(config.n_starts):
            st = minimize_objective(s_val, b, rng, j_modes=config.j_modes)
            states.append(st)
            if not st.converged:
                summary.note("s=%g start %d stopped at |g|=%.2e after %d iterations"
                             % (s_val, start, st.grad_norm, st.iterations))
        pots = [_normalized(potential_from_coeffs(st.coeffs, config.n_x))
                for st in states]
        pairwise = 0.0
        for i in range(len(pots)):
            for j in range(i + 1, len(pots)):
                pairwise = max(pairwise, geodesic_distance(pots[i], pots[j]))
        dist = geodesic_distance(pots[0], u_orbit)
        distances.append(dist)
        ok = pairwise < config.tol_pairwise and all(st.converged for st in states)
        all_ok = all_ok and ok
        summary.check("uniqueness.s_%g" % s_val, ok,
                      "pairwise %.3e, distance to orbit minimizer %.6f"
                      % (pairwise, dist))
        for start, st in enumerate(states):
            rows.append((s_val, start, st.iterations, st.objective,
                         st.grad_norm, pairwise, dist))
    mono = all(distances[i] > distances[i + 1] for i in range(len(distances) - 1))
    summary.check("uniqueness.monotone_distance", mono,
                  "distances " + " > ".join("%.5f" % d for d in distances))
    files = [_write_csv(os.path.join(config.out, "uniqueness.csv"),
                        "s,start,iterations,objective,grad_norm,pairwise_max,distance_to_orbit",
                        rows)]
    files.append(summary.write(config.out))
    return summary.exit_code, files


COMMANDS = {
    "geodesic": cmd_geodesic,
    "convexity": cmd_convexity,
    "chen": cmd_chen,
    "bergman": cmd_bergman,
    "lichnerowicz": cmd_lichnerowicz,
    "orbit": cmd_orbit,
    "uniqueness": cmd_uniqueness,
}
