"""Weak geodesics, convexity, complexified certificates, second variation."""

import numpy as np
import pytest

from kenergy import (
    complexify,
    convexity_margin,
    d2_mabuchi_fd,
    geodesic_ode_residual,
    hrma_details,
    hrma_residual,
    mabuchi_along,
    mabuchi_norm,
    round_potential,
    second_variation_fiber_integral,
    weak_geodesic,
)
from kenergy.experiments import sample_potential

rng = np.random.default_rng(2024)
U0 = sample_potential(rng)
U1 = sample_potential(rng)
PATH = weak_geodesic(U0, U1, m=16)


def test_slices_are_affine_and_cached():
    mid = PATH.slice(0.5)
    assert np.max(np.abs(mid.f_values - 0.5 * (U0.f_values + U1.f_values))) < 1e-15
    assert PATH.slice(0.5) is mid
    assert PATH.slice(0.0) == U0 and PATH.slice(1.0) == U1


def test_slice_rejects_outside_interval():
    with pytest.raises(ValueError):
        PATH.slice(1.5)


def test_endpoint_grid_mismatch_rejected():
    with pytest.raises(ValueError):
        weak_geodesic(round_potential(256), round_potential(512))


def test_speed_is_t_independent_and_equals_moment_norm():
    s_a, s_b = PATH.speed(0.25), PATH.speed(0.75)
    assert abs(s_a - s_b) < 1e-10
    assert abs(s_a - mabuchi_norm(U1.f_values - U0.f_values, U0)) < 1e-10


def test_kenergy_convex_along_path():
    path = weak_geodesic(U0, U1, m=64)
    t, vals = mabuchi_along(path)
    scale = 1.0 + np.max(np.abs(vals))
    assert convexity_margin(vals) >= -1e-6 * scale


def test_convexity_margin_on_exact_parabola():
    t = np.linspace(0.0, 1.0, 33)
    assert convexity_margin(3.0 * (t - 0.4) ** 2) > 0.0


def test_second_variation_matches_centered_difference():
    path = weak_geodesic(U0, U1, m=64)
    _, vals = mabuchi_along(path)
    d2 = d2_mabuchi_fd(path, 0.5, values=vals)
    fib = second_variation_fiber_integral(path, 0.5, details=True)
    assert abs(fib.value - d2) / max(1.0, abs(d2)) < 1e-3
    scale = float(np.max(np.abs(fib.integrand[fib.included])))
    # the integrand is pointwise nonnegative along the linear path
    assert fib.min_integrand >= -1e-6 * scale
    assert fib.excluded_fraction < 0.05


def test_second_variation_requires_interior_t():
    with pytest.raises(ValueError):
        second_variation_fiber_integral(PATH, 0.0)


def test_complexified_solution_shapes_and_density():
    sol = complexify(PATH, n_s=512, n_t=8)
    assert sol.psi.shape == (9, 512)
    assert sol.rho.shape == (9, 512)
    assert sol.pts.shape == (9, 512)
    assert np.all(sol.rho >= 0.0)


def test_hessian_s_row_matches_fd_fallback():
    sol = complexify(PATH, n_s=8192, n_t=64)
    _, pss, pts = sol.hessian_blocks()
    # hand-built solution without the analytic mixed entry
    sol_fd = type(sol)(sol.t_grid, sol.s_grid, sol.psi, sol.rho, sol.x_star)
    _, pss_fd, pts_fd = sol_fd.hessian_blocks()
    core = slice(32, -32)
    assert np.max(np.abs(pss - pss_fd)[:, core]) < 2e-3
    assert np.max(np.abs(pts - pts_fd)[:, core]) < 2e-3


def test_certificates_small_and_halving():
    r1 = hrma_residual(PATH, n_s=2048, n_t=256)
    o1 = geodesic_ode_residual(PATH, n_s=2048, n_t=256)
    r2 = hrma_residual(PATH, n_s=4096, n_t=512)
    o2 = geodesic_ode_residual(PATH, n_s=4096, n_t=512)
    assert r2 < 1e-4 and o2 < 1e-3
    # second-order stencils: doubling both grids cuts residuals by >= 2
    assert r1 / r2 >= 2.0 and o1 / o2 >= 2.0


def test_hrma_details_reports_exclusions():
    sup, excluded = hrma_details(PATH, n_s=1024, n_t=64)
    assert abs(sup - hrma_residual(PATH, n_s=1024, n_t=64)) < 1e-18
    assert 0.0 <= excluded < 0.05


def test_round_pair_certificate_tiny():
    # both endpoints round up to an affine shift: the path stays on the
    # orbit closure and the certificate residual is near machine level
    u0 = round_potential(512)
    u1 = u0.shifted(alpha=0.3, beta=0.1)
    path = weak_geodesic(u0, u1, m=16)
    assert hrma_residual(path, n_s=2048, n_t=128) < 1e-7
