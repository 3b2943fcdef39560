"""Weighted Bergman kernels of radial weights on the unit disc.

For a radial weight phi(|z|) the monomials z^m are orthogonal in
L^2(e^{-k phi}), so the kernel restricted to the diagonal is

    K_k(z) = sum_m |z|^{2m} / c_m,    c_m = 4 pi int_0^1 r^{2m+1} e^{-k phi(r)} dr,

(the 4 pi normalizes area measure dA = 2 pi r dr together with the complex
square |z^m|^2 convention used throughout).  Everything downstream works in
the log domain: with s = log|z|^2,

    log K = LSE_m ( m s - log c_m ),

a convex increasing function of s, and its s-derivatives are the cumulants
of the softmax distribution pi_m over modes: d/ds log K = E[m],
d^2/ds^2 log K = Var[m].  For a weight family phi_tau the tau-derivatives
of log c_m are quadratures of the family velocity, so complex Hessians of
log K are evaluated in closed form instead of by noisy high-order finite
differences; grids only choose where the Hessian is sampled.

The rescaled density B_k = K_k e^{-k phi} obeys k^{-1} B_k -> Laplacian
phi / (2 pi) pointwise in the interior for subharmonic smooth weights, with
a boundary layer of width ~ 1/sqrt(k) that the checks flag.
"""

import numpy as np
from scipy.special import logsumexp

from .radial import SymplecticPotential, _gauss01, _solve_moment

TAIL_TOL = 1e-12


class WeightError(ValueError):
    pass


def _fd_density(phi, r):
    """(r phi')'/(4 r) by centered differences, for weights without lap."""
    h = 1e-6
    r = np.asarray(r, dtype=float)
    d1 = (phi(r + h) - phi(r - h)) / (2.0 * h)
    d2 = (phi(r + h) - 2.0 * phi(r) + phi(r - h)) / h ** 2
    return (d2 + d1 / np.maximum(r, 1e-12)) / 4.0


class RadialWeight:
    """Radial weight phi(r) on the closed unit disc.

    lap, when given, is the density phi_{z zbar} = (r phi')'/(4 r) in closed
    form; otherwise a finite-difference fallback is used.  Construction
    checks subharmonicity ((r phi')' >= 0 up to rounding) and boundedness
    below on a check grid; smoothness is a tag ("smooth" or "c11") recording
    how much regularity the density-limit arguments may rely on.
    """

    def __init__(self, phi, name="weight", lap=None, smoothness="smooth",
                 splits=(), check_n=2049):
        self.phi = phi
        self.name = str(name)
        self._lap = lap
        self.smoothness = smoothness
        self.splits = tuple(float(b) for b in splits)
        r = np.linspace(1e-4, 1.0, check_n)
        vals = np.asarray(phi(r), dtype=float)
        if not np.all(np.isfinite(vals)):
            raise WeightError("%s: non-finite values" % self.name)
        dens = self.density(r[:-1])
        floor = -1e-9 * (1.0 + np.max(np.abs(dens)))
        if np.min(dens) < floor:
            j = int(np.argmin(dens))
            raise WeightError("%s: (r phi')' < 0 at r=%.4f" % (self.name, r[j]))
        self.phi_min = float(np.min(vals))
        self.phi_max = float(np.max(vals))

    def density(self, r):
        """phi_{z zbar}(r), the 2 pi-normalized limit of k^{-1} B_k."""
        r = np.asarray(r, dtype=float)
        if self._lap is not None:
            return np.asarray(self._lap(r), dtype=float)
        return _fd_density(self.phi, r)

    def __repr__(self):
        return "RadialWeight(%s, %s)" % (self.name, self.smoothness)


def weight_zero():
    return RadialWeight(lambda r: np.zeros_like(np.asarray(r, dtype=float)),
                        name="zero", lap=lambda r: np.zeros_like(np.asarray(r, dtype=float)))


def weight_quadratic(c=1.0):
    """phi = c |z|^2, density c; c=1 is the model weight with closed forms."""
    c = float(c)
    return RadialWeight(lambda r: c * np.asarray(r, dtype=float) ** 2,
                        name="quadratic(%g)" % c,
                        lap=lambda r: np.full(np.shape(r), c, dtype=float))


def weight_quartic(c):
    """phi = |z|^2 + c |z|^4 (subharmonic for c >= -1/4 on the disc)."""
    c = float(c)

    def phi(r):
        r2 = np.asarray(r, dtype=float) ** 2
        return r2 + c * r2 ** 2

    return RadialWeight(phi, name="quartic(%g)" % c,
                        lap=lambda r: 1.0 + 4.0 * c * np.asarray(r, dtype=float) ** 2)


def weight_fubini_study():
    """phi = log(1 + |z|^2), density 1/(1+r^2)^2."""
    return RadialWeight(lambda r: np.log1p(np.asarray(r, dtype=float) ** 2),
                        name="fubini-study",
                        lap=lambda r: (1.0 + np.asarray(r, dtype=float) ** 2) ** -2)


def weight_hinge(r0=0.5):
    """phi = max(|z|^2 - r0^2, 0)^2, C^{1,1} but not C^2 across |z| = r0.

    Exercises the Lipschitz-second-derivative form of the density limit.
    """
    r0 = float(r0)

    def phi(r):
        h = np.maximum(np.asarray(r, dtype=float) ** 2 - r0 ** 2, 0.0)
        return h ** 2

    def lap(r):
        r = np.asarray(r, dtype=float)
        h = np.maximum(r ** 2 - r0 ** 2, 0.0)
        return 2.0 * h + 2.0 * r ** 2 * (r ** 2 > r0 ** 2)

    return RadialWeight(phi, name="hinge(%g)" % r0, lap=lap, smoothness="c11",
                        splits=(r0,))


def weight_from_potential(u, name=None):
    """Kaehler weight of the sphere chart: phi(r) = psi_u(log r^2).

    psi is the Legendre transform of u evaluated by the moment solver, so
    phi is smooth on [0, 1) with density psi''(s)/r^2 (Fubini-Study when u
    is the round potential).  phi(0) = -u(0).
    """
    if not isinstance(u, SymplecticPotential):
        raise TypeError("u must be a SymplecticPotential")
    model = u._model

    def phi(r):
        r = np.asarray(r, dtype=float)
        out = np.full(r.shape, -model.f(0.0), dtype=float)
        pos = r > 0.0
        if np.any(pos):
            s = 2.0 * np.log(r[pos])
            x = _solve_moment(u, s)
            out[pos] = x * s - (x * np.log(x) + (1.0 - x) * np.log1p(-x)
                                + model.f(x))
        return out

    def lap(r):
        r = np.asarray(r, dtype=float)
        out = np.empty(r.shape, dtype=float)
        pos = r > 1e-12
        s = 2.0 * np.log(np.clip(r, 1e-12, None))
        x = _solve_moment(u, s)
        w = x * (1.0 - x)
        psi2 = w / (1.0 + w * model.d2f(x))
        out = psi2 / np.clip(r, 1e-12, None) ** 2
        out[~pos] = np.exp(-model.df(0.0))
        return out

    return RadialWeight(phi, name=name or "potential-chart", lap=lap)


# ---------------------------------------------------------------------------
# coefficients and kernel

def bergman_coefficients(weight, k, m_max, rel_tol=1e-12, n0=128, n_cap=8192):
    """c_m = 4 pi int_0^1 r^{2m+1} e^{-k phi} dr for m = 0..m_max.

    Gauss-Legendre with node doubling until every c_m is stable to rel_tol;
    raises WeightError if the cap is hit (c11 weights converge too, just
    later, since the kink only costs the rule its spectral rate).
    """
    k = float(k)
    bounds = [0.0] + [b for b in getattr(weight, "splits", ()) if 0.0 < b < 1.0] + [1.0]
    prev = None
    n = n0
    while n <= n_cap:
        base_r, base_w = _gauss01(n)
        r = np.concatenate([a + (b - a) * base_r for a, b in zip(bounds, bounds[1:])])
        wq = np.concatenate([(b - a) * base_w for a, b in zip(bounds, bounds[1:])])
        expo = np.multiply.outer(2.0 * np.arange(m_max + 1) + 1.0, np.log(r))
        vals = np.exp(expo - k * weight.phi(r))
        c = 4.0 * np.pi * (vals @ wq)
        if prev is not None:
            if np.max(np.abs(c - prev) / np.maximum(np.abs(c), 1e-300)) < rel_tol:
                if np.min(c) <= 0.0:
                    raise WeightError("non-positive Bergman coefficient")
                return c
        prev = c
        n *= 2
    raise WeightError("coefficient quadrature did not converge (n > %d)" % n_cap)


def _tail_bound_rel(k, phi_max, m_max, r, log_K):
    """Relative bound on the omitted modes m > m_max at radius r.

    Uses c_m >= 2 pi e^{-k phi_max} / (m+1) and the closed geometric sum
    sum_{m>M} (m+1) rho^m = rho^{M+1} ((M+2) - (M+1) rho) / (1-rho)^2.
    """
    r = float(r)
    if r >= 1.0:
        return np.inf
    if r == 0.0:
        return 0.0
    rho = r * r
    lg_tail = (k * phi_max - np.log(2.0 * np.pi) + (m_max + 1) * np.log(rho)
               + np.log((m_max + 2) - (m_max + 1) * rho) - 2.0 * np.log1p(-rho))
    return float(np.exp(lg_tail - log_K))


class BergmanKernel:
    """Diagonal Bergman kernel of a radial weight at level k.

    Stores log c_m; log_K/B evaluate in the log domain and certify that the
    omitted tail is below tol at the requested radius.
    """

    def __init__(self, weight, k, c, r_cert):
        self.weight = weight
        self.k = float(k)
        self.c = c
        self.log_c = np.log(c)
        self.m_max = c.size - 1
        self.r_cert = float(r_cert)

    def log_K(self, r):
        r = np.asarray(r, dtype=float)
        scalar = r.ndim == 0
        r = np.atleast_1d(r)
        out = np.empty(r.shape, dtype=float)
        pos = r > 0.0
        if np.any(pos):
            s = 2.0 * np.log(r[pos])
            a = np.multiply.outer(s, np.arange(self.m_max + 1.0)) - self.log_c
            out[pos] = logsumexp(a, axis=-1)
        out[~pos] = -self.log_c[0]
        return out[0] if scalar else out

    def tail_check(self, r, tol=1e-10):
        worst = max(np.max(np.atleast_1d(r)), 0.0)
        rel = _tail_bound_rel(self.k, self.weight.phi_max, self.m_max, worst,
                              float(np.min(np.atleast_1d(self.log_K(worst)))))
        if rel > tol:
            raise WeightError(
                "Bergman tail not certified at r=%.3f (bound %.2e)" % (worst, rel))
        return rel

    def B(self, r, tol=1e-10):
        """Rescaled density K e^{-k phi}, tail-certified at r."""
        self.tail_check(r, tol=tol)
        r = np.asarray(r, dtype=float)
        return np.exp(self.log_K(r) - self.k * self.weight.phi(r))

    def mode_moments(self, r):
        """(E[m], Var[m]) of the softmax mode distribution at radius r.

        These are the first two s-derivatives of log K at s = log r^2.
        """
        r = np.atleast_1d(np.asarray(r, dtype=float))
        m = np.arange(self.m_max + 1.0)
        s = 2.0 * np.log(np.clip(r, 1e-300, None))
        a = np.multiply.outer(s, m) - self.log_c
        a -= logsumexp(a, axis=-1, keepdims=True)
        pi = np.exp(a)
        mean = pi @ m
        var = pi @ (m * m) - mean ** 2
        return mean, np.maximum(var, 0.0)


def bergman_kernel(weight, k, r_eval=0.75, m_max=None, tail_tol=TAIL_TOL):
    """Kernel with m_max chosen so the tail at r_eval is certified < tail_tol."""
    if m_max is None:
        m_max = max(32, int(2.0 * k * r_eval ** 2) + 16)
        for _ in range(12):
            c = bergman_coefficients(weight, k, m_max)
            ker = BergmanKernel(weight, k, c, r_eval)
            rel = _tail_bound_rel(k, weight.phi_max, m_max, r_eval,
                                  float(ker.log_K(r_eval)))
            if rel < tail_tol:
                return ker
            m_max *= 2
        raise WeightError("tail not certifiable at r=%.3f" % r_eval)
    c = bergman_coefficients(weight, k, m_max)
    return BergmanKernel(weight, k, c, r_eval)


def bergman_B(weight, k, r, tol=1e-10):
    """One-call certified evaluation of B_k at radius r."""
    ker = bergman_kernel(weight, k, r_eval=max(np.max(np.atleast_1d(r)), 0.1))
    return ker.B(r, tol=tol)


def density_limit_check(weight, z, k_list=(5, 10, 20, 50, 100)):
    """Gap |k^{-1} B_k(z) - density/(2 pi)| for each k.

    Returns the gaps, the limit density, and per-k boundary flags (set when
    z is within ~2/sqrt(k) of the unit circle, where the pointwise limit is
    polluted by the boundary layer).
    """
    r = float(abs(z))
    if r >= 1.0:
        raise WeightError("evaluation point outside the open disc")
    target = float(weight.density(np.array([r]))[0]) / (2.0 * np.pi)
    gaps, Bs, flags = [], [], []
    for k in k_list:
        ker = bergman_kernel(weight, k, r_eval=max(r, 0.1))
        B = float(ker.B(np.array([r]))[0])
        Bs.append(B)
        gaps.append(abs(B / k - target))
        flags.append((1.0 - r) * np.sqrt(k) < 2.0)
    gaps = np.asarray(gaps)
    return {
        "k_list": list(k_list),
        "B": np.asarray(Bs),
        "limit_density": target,
        "gaps": gaps,
        "monotone": bool(np.all(np.diff(gaps) < 0.0)),
        "boundary_flag": flags,
    }


# ---------------------------------------------------------------------------
# weight families and joint positivity

class WeightFamily:
    """Family of radial-in-z weights Phi(tau, z) over a tau-disc.

    kind selects how tau enters:
      constant   Phi(tau, z) = phi(z)
      power      Phi(tau, z) = |z|^2 + Re(tau) |z|^4
      translate  Phi(tau, z) = |z - tau|^2 (radial only at tau=0; handled
                 through the exact kernel transformation law)
      geodesic   Phi(t + i y, z) = psi_t(log|z|^2) along a weak geodesic
    certify() decides whether Phi itself is plurisubharmonic on the family
    domain, which is the hypothesis under which log K inherits positivity;
    when it fails the log-PSH check still measures but reports inconclusive.
    """

    def __init__(self, kind, label, tau_radius, payload):
        self.kind = kind
        self.label = label
        self.tau_radius = float(tau_radius)
        self.payload = payload

    def certify(self):
        if self.kind == "constant":
            return True, "tau-independent; Hessian diag(0, density) >= 0"
        if self.kind == "translate":
            return True, "Hessian [[1,-1],[-1,1]] >= 0 identically"
        if self.kind == "geodesic":
            return True, ("weak geodesic: det Hess = 0 with Phi_ss > 0, "
                          "certified by the path residuals")
        if self.kind == "power":
            return False, ("det of the (tau,z) complex Hessian is -|z|^6 < 0; "
                           "family is not jointly plurisubharmonic")
        raise ValueError("unknown family kind %r" % self.kind)

    def __repr__(self):
        return "WeightFamily(%s, %s)" % (self.kind, self.label)


def family_constant(weight=None, tau_radius=0.2):
    w = weight if weight is not None else weight_quadratic()
    return WeightFamily("constant", "constant-in-tau %s" % w.name, tau_radius, w)


def family_power(tau_radius=0.1):
    return WeightFamily("power", "quartic power family", tau_radius, None)


def family_translate(tau_radius=0.15):
    return WeightFamily("translate", "translated quadratic", tau_radius,
                        weight_quadratic())


def family_geodesic(path, t_window=(0.2, 0.8)):
    return WeightFamily("geodesic", "geodesic localization", 0.0,
                        (path, (float(t_window[0]), float(t_window[1]))))


def _min_eig_2x2(a, c, b2):
    """Smallest eigenvalue of [[a, b], [conj(b), c]] given |b|^2."""
    half = 0.5 * (a + c)
    return half - np.sqrt(np.maximum(0.25 * (a - c) ** 2 + b2, 0.0))


def _geodesic_kernel_data(path, k, t, m_max):
    """log c_m and its first two t-derivatives for the geodesic family.

    c_m(t) = 4 pi int r^{2m+1} e^{-k psi_t(2 log r)} dr with the analytic
    family velocity psi_dot = -delta(x*) and acceleration
    psi_ddot = delta'(x*)^2 / u_t''(x*); returns (log_c, alpha, beta) where
    alpha = d/dt log(1/c_m) and beta = d^2/dt^2 log(1/c_m).
    """
    u_t = path.slice(t)
    model_u = u_t._model
    delta = path._delta_model
    rq, wq = _gauss01(512)
    s = 2.0 * np.log(rq)
    x = _solve_moment(u_t, s)
    w = x * (1.0 - x)
    u2 = 1.0 / np.maximum(w, 1e-300) + model_u.d2f(x)
    psi = x * s - (x * np.log(np.maximum(x, 1e-300))
                   + (1.0 - x) * np.log1p(-np.minimum(x, 1.0 - 1e-16))
                   + model_u.f(x))
    pdot = -delta.f(x)
    pddot = delta.df(x) ** 2 / u2
    base = np.exp(np.multiply.outer(2.0 * np.arange(m_max + 1) + 1.0, np.log(rq))
                  - k * psi)
    c = 4.0 * np.pi * (base @ wq)
    cdot = 4.0 * np.pi * (base @ (wq * (-k * pdot)))
    cddot = 4.0 * np.pi * (base @ (wq * (k * k * pdot ** 2 - k * pddot)))
    g1 = cdot / c
    alpha = -g1
    beta = g1 ** 2 - cddot / c
    return np.log(c), alpha, beta


def _softmax_stats(s_vals, log_c, alpha=None, beta=None):
    """Cumulants of the mode distribution at each s: E[m], Var[m], and when
    alpha/beta are given also E[alpha], Var[alpha], Cov(m, alpha), E[beta]."""
    m = np.arange(log_c.size, dtype=float)
    a = np.multiply.outer(np.atleast_1d(s_vals), m) - log_c
    a -= logsumexp(a, axis=-1, keepdims=True)
    pi = np.exp(a)
    Em = pi @ m
    Vm = np.maximum(pi @ (m * m) - Em ** 2, 0.0)
    if alpha is None:
        return Em, Vm
    Ea = pi @ alpha
    Va = np.maximum(pi @ (alpha * alpha) - Ea ** 2, 0.0)
    Cma = pi @ (m * alpha) - Em * Ea
    Eb = pi @ beta
    return Em, Vm, Ea, Va, Cma, Eb


def log_psh_check(family, k=50, n_tau=9, n_r=33, r_range=(0.05, 0.65),
                  fd_step=1e-3):
    """Minimum eigenvalue of the complex Hessian of (tau, z) -> log K.

    Certified kinds evaluate the Hessian entries in closed form (cumulant
    identities in s, exact family derivatives in tau); the uncertified
    power family falls back to finite differences of a fixed quadrature
    rule.  Returns min_eig, the entry scale, the certification flag, and
    conclusive = certified (a negative eigenvalue under a failed
    precondition refutes nothing).
    """
    certified, detail = family.certify()
    r_nodes = np.linspace(r_range[0], r_range[1], n_r)
    s_nodes = 2.0 * np.log(r_nodes)
    entries = []

    if family.kind == "constant":
        ker = bergman_kernel(family.payload, k, r_eval=r_range[1])
        _, Vm = ker.mode_moments(r_nodes)
        Fzz = Vm / r_nodes ** 2
        for v in Fzz:
            entries.append((0.0, float(v), 0.0))
    elif family.kind == "translate":
        ker = bergman_kernel(family.payload, k, r_eval=r_range[1] + family.tau_radius)
        _, Vm = ker.mode_moments(r_nodes)
        Fzz = Vm / r_nodes ** 2
        for v in Fzz:
            entries.append((float(k), float(v), float(k) ** 2))
    elif family.kind == "geodesic":
        path, (t0, t1) = family.payload
        m_cap = max(32, int(2.0 * k * r_range[1] ** 2) + 16) * 4
        for t in np.linspace(t0, t1, n_tau):
            log_c, alpha, beta = _geodesic_kernel_data(path, k, t, m_cap)
            Em, Vm, Ea, Va, Cma, Eb = _softmax_stats(s_nodes, log_c, alpha, beta)
            F_tt = Eb + Va
            F_ts = Cma
            F_ss = Vm
            for i in range(n_r):
                a = 0.25 * F_tt[i]
                c = F_ss[i] / r_nodes[i] ** 2
                b2 = F_ts[i] ** 2 / (4.0 * r_nodes[i] ** 2)
                entries.append((a, c, b2))
    elif family.kind == "power":
        h = fd_step
        taus = [t * family.tau_radius for t in (-0.5, 0.0, 0.5)]
        n_fixed = 1024
        rq, wq = _gauss01(n_fixed)

        def log_c_of(t1, t2):
            # radial for every tau: only Re(tau) enters the weight
            phi = rq ** 2 + t1 * rq ** 4
            m = np.arange(int(2.0 * k * 0.65 ** 2) + 80.0)
            vals = np.exp(np.multiply.outer(2.0 * m + 1.0, np.log(rq)) - k * phi)
            return np.log(4.0 * np.pi * (vals @ wq))

        for t1 in taus:
            lc0 = log_c_of(t1, 0.0)
            lcp = log_c_of(t1 + h, 0.0)
            lcm = log_c_of(t1 - h, 0.0)

            def F(lc):
                m = np.arange(lc.size, dtype=float)
                return logsumexp(np.multiply.outer(s_nodes, m) - lc, axis=-1)

            F0, Fp, Fm = F(lc0), F(lcp), F(lcm)
            F_t1t1 = (Fp - 2.0 * F0 + Fm) / h ** 2
            Em0, _ = _softmax_stats(s_nodes, lc0)
            Emp, _ = _softmax_stats(s_nodes, lcp)
            Emm, _ = _softmax_stats(s_nodes, lcm)
            F_t1s = (Emp - Emm) / (2.0 * h)
            _, Vm0 = _softmax_stats(s_nodes, lc0)
            # Im(tau) does not enter: F_t2t2 = 0, F_t2s = 0
            for i in range(n_r):
                a = 0.25 * F_t1t1[i]
                c = Vm0[i] / r_nodes[i] ** 2
                b2 = F_t1s[i] ** 2 / (4.0 * r_nodes[i] ** 2)
                entries.append((a, c, b2))
    else:
        raise ValueError("unknown family kind %r" % family.kind)

    entries = np.asarray(entries)
    eigs = _min_eig_2x2(entries[:, 0], entries[:, 1], entries[:, 2])
    scale = float(np.max(np.abs(entries)))
    return {
        "min_eig": float(np.min(eigs)),
        "scale": scale,
        "certified": certified,
        "conclusive": certified,
        "detail": detail,
        "node_count": int(entries.shape[0]),
        "excluded_fraction": 0.0,
    }


def tk_positivity(family, k=50, n_tau=9, n_r=33, r_range=(0.05, 0.65)):
    """Minimum of T_k, the mixed discriminant of Hess(log B) against Hess(Phi).

    Along a geodesic family Hess(Phi) is rank one, so the -k Phi part of
    log B drops out exactly and T_k = lambda * v_perp' Hess(log K) v_perp,
    which is nonnegative in the large-k limit for certified families; here
    it is evaluated from the closed-form Hessian entries.  Constant families give
    T_k = 0 identically.
    """
    r_nodes = np.linspace(r_range[0], r_range[1], n_r)
    s_nodes = 2.0 * np.log(r_nodes)
    if family.kind == "constant":
        return {"min_T": 0.0, "scale": 1.0, "node_count": n_r,
                "excluded_fraction": 0.0}
    if family.kind == "translate":
        ker = bergman_kernel(family.payload, k, r_eval=r_range[1] + family.tau_radius)
        _, Vm = ker.mode_moments(r_nodes)
        T = Vm / r_nodes ** 2 - k
        scale = float(max(np.max(np.abs(Vm / r_nodes ** 2)), k))
        return {"min_T": float(np.min(T)), "scale": scale,
                "node_count": n_r, "excluded_fraction": 0.0}
    if family.kind != "geodesic":
        raise ValueError("T_k is defined against a certified family")
    path, (t0, t1) = family.payload
    m_cap = max(32, int(2.0 * k * r_range[1] ** 2) + 16) * 4
    T_all = []
    scale = 0.0
    for t in np.linspace(t0, t1, n_tau):
        log_c, alpha, beta = _geodesic_kernel_data(path, k, t, m_cap)
        Em, Vm, Ea, Va, Cma, Eb = _softmax_stats(s_nodes, log_c, alpha, beta)
        L_tt = Eb + Va
        L_ts = Cma
        L_ss = Vm
        u_t = path.slice(t)
        delta = path._delta_model
        x = _solve_moment(u_t, s_nodes)
        u2 = 1.0 / np.maximum(x * (1.0 - x), 1e-300) + u_t._model.d2f(x)
        P_ss = 1.0 / u2
        P_ts = -delta.df(x) / u2
        P_tt = delta.df(x) ** 2 / u2
        T = L_tt * P_ss + L_ss * P_tt - 2.0 * L_ts * P_ts
        T_all.append(T)
        scale = max(scale, float(np.max(np.abs(L_tt * P_ss))),
                    float(np.max(np.abs(L_ss * P_tt))),
                    float(np.max(np.abs(2.0 * L_ts * P_ts))))
    T_all = np.concatenate(T_all)
    return {"min_T": float(np.min(T_all)), "scale": max(scale, 1e-300),
            "node_count": int(T_all.size), "excluded_fraction": 0.0}
