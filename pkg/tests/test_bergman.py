"""Radial Bergman kernels on the disc: densities, limits, positivity."""

import numpy as np
import pytest

from kenergy import (
    WeightError,
    bergman_B,
    bergman_coefficients,
    bergman_kernel,
    density_limit_check,
    family_constant,
    family_geodesic,
    family_power,
    family_translate,
    log_psh_check,
    round_potential,
    tk_positivity,
    weak_geodesic,
    weight_from_potential,
    weight_fubini_study,
    weight_hinge,
    weight_quadratic,
    weight_quartic,
    weight_zero,
)
from kenergy.experiments import sample_potential


def test_zero_weight_coefficients_exact():
    # int_D |z|^{2m} dA = 2 pi / (2m + 2); normalization doubles it
    c = bergman_coefficients(weight_zero(), 1, 8)
    want = np.array([2.0 * np.pi / (m + 1) for m in range(9)])
    assert np.max(np.abs(c[:9] - want) / want) < 1e-12


def test_zero_weight_kernel_closed_form():
    # truncated geometric kernel: sum of (m+1) r^{2m} / (2 pi)
    k = 1
    ker = bergman_kernel(weight_zero(), k, m_max=40)
    r = np.array([0.3])
    m = np.arange(41)
    want = np.sum((m + 1) * r[0] ** (2 * m)) / (2.0 * np.pi)
    assert abs(ker.B(r)[0] - want) / want < 1e-10


def test_quadratic_weight_center_closed_form():
    # B_k(0) = k / (2 pi (1 - e^{-k})) for the quadratic weight
    for k in (10, 50, 100):
        got = bergman_B(weight_quadratic(), k, 0.0)
        want = k / (2.0 * np.pi * (1.0 - np.exp(-k)))
        assert abs(got - want) / want < 1e-9


def test_density_limit_quadratic_center():
    rep = density_limit_check(weight_quadratic(), 0.0, k_list=(5, 10, 20, 50, 100))
    # limit density for phi = |z|^2 at 0 is 1/(2 pi)
    assert abs(rep["limit_density"] - 1.0 / (2.0 * np.pi)) < 1e-12
    # gaps bottom out at machine noise by k = 50, so only the head of the
    # sequence decays strictly
    assert np.all(np.diff(rep["gaps"][:4]) < 0.0)
    assert rep["gaps"][-1] <= 0.02 * rep["limit_density"]


def test_density_limit_monotone_weights():
    rep_q = density_limit_check(weight_quartic(0.5), 0.3)
    assert rep_q["monotone"]
    rep_fs = density_limit_check(weight_fubini_study(), 0.2)
    assert rep_fs["monotone"]


def test_density_limit_rejects_boundary():
    with pytest.raises(WeightError):
        density_limit_check(weight_quadratic(), 1.0)


def test_weight_hinge_density():
    w = weight_hinge(0.5)
    r = np.array([0.2, 0.4, 0.6, 0.8])
    d = w.density(r)
    # flat inside the hinge radius, positive curvature outside
    assert np.all(d[:2] >= 0.0) and np.all(np.isfinite(d))


def test_weight_from_potential_round():
    u = round_potential(512)
    w = weight_from_potential(u)
    r = np.array([0.2, 0.5, 0.7])
    assert np.all(np.isfinite(w.phi(r))) and np.all(w.density(r) > 0.0)


def test_log_psh_certified_families():
    for fam in (family_constant(), family_translate()):
        rep = log_psh_check(fam, k=20)
        assert rep["certified"]
        assert rep["min_eig"] >= -1e-6 * rep["scale"]


def test_log_psh_power_family_inconclusive():
    # det of the complex Hessian of the power deformation is negative at
    # interior points, so the certificate must refuse to certify
    rep = log_psh_check(family_power(), k=20)
    assert not rep["certified"]
    assert rep["min_eig"] < 0.0


def test_geodesic_family_positive():
    rng = np.random.default_rng(8)
    path = weak_geodesic(sample_potential(rng), sample_potential(rng), m=8)
    rep = log_psh_check(family_geodesic(path), k=20)
    assert rep["certified"]
    assert rep["min_eig"] >= -1e-6 * rep["scale"]


def test_tk_positivity_translate():
    rep = tk_positivity(family_translate(), k=20)
    assert rep["min_T"] >= -1e-4 * rep["scale"]


def test_weight_quartic_validates():
    with pytest.raises(WeightError):
        weight_quartic(-3.0)
