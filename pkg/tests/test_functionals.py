"""Energies, entropy, K-energy routes, distance, and inequality checks."""

import numpy as np
import pytest

from kenergy import (
    calabi_energy,
    chen_inequality_check,
    energy_E,
    energy_E_ricci,
    entropy,
    entropy_tail_bound,
    f_functional,
    functional_report,
    geodesic_distance,
    gradient_identity_check,
    legendre_to_s,
    mabuchi,
    mabuchi_moment,
    mabuchi_norm,
    reference_density,
    reference_radial,
    round_potential,
    weak_geodesic,
)
from kenergy.experiments import sample_potential

# frozen by independent quadrature of -log(1 + x(1-x) f'') + f(0)+f(1) - 2 int f
# for f = 0.05 sin(2 pi x) (adaptive quadrature, estimated error 3e-15)
M_SINE2_ORACLE = 0.0355125598632119802


def wave(amps, n_x=512):
    x = np.linspace(0.0, 1.0, n_x)
    f = np.zeros(n_x)
    for j, a in enumerate(amps, start=1):
        f += a * np.sin(j * np.pi * x)
    from kenergy import SymplecticPotential

    return SymplecticPotential(x, f)


def test_energy_of_slope_shift():
    # u0 - x has relative Kahler potential log(1+e^s) - s on the complex
    # side; E evaluates to 1 exactly
    u = round_potential(512).shifted(alpha=-1.0)
    psi = legendre_to_s(u)
    assert abs(energy_E(psi.relative(), psi) - 1.0) < 1e-12


def test_energy_constant_response_exact():
    u = sample_potential(np.random.default_rng(5))
    c = 0.37
    pa = legendre_to_s(u)
    pb = legendre_to_s(u.shifted(beta=c))
    Ea = energy_E(pa.relative(), pa)
    Eb = energy_E(pb.relative(), pb)
    # E(u + c) = E(u) - 2c with the control-variate correction exact
    assert abs(Eb - (Ea - 2.0 * c)) < 1e-12


def test_entropy_reference_zero_and_positive():
    assert entropy(reference_radial()) == 0.0
    psi = legendre_to_s(wave([0.08, -0.03]))
    H = entropy(psi)
    assert H > 0.0
    assert entropy_tail_bound(psi) < 1e-6


def test_mabuchi_round_zero():
    assert abs(mabuchi(round_potential(512))) < 1e-10
    assert abs(mabuchi_moment(round_potential(512))) < 1e-14


def test_mabuchi_moment_oracle():
    assert abs(mabuchi_moment(wave([0.0, 0.05])) - M_SINE2_ORACLE) < 1e-12


def test_mabuchi_routes_agree():
    rng = np.random.default_rng(21)
    for _ in range(6):
        u = sample_potential(rng)
        assert abs(mabuchi(u) - mabuchi_moment(u)) < 1e-6


def test_mabuchi_constant_invariance():
    u = wave([0.06, 0.01])
    assert abs(mabuchi_moment(u.shifted(beta=0.4)) - mabuchi_moment(u)) < 1e-13
    assert abs(mabuchi(u.shifted(beta=0.4)) - mabuchi(u)) < 1e-9


def test_mabuchi_nonnegative_on_ensemble():
    # the round metric minimizes the K-energy
    rng = np.random.default_rng(33)
    for _ in range(8):
        assert mabuchi_moment(sample_potential(rng)) > 0.0


def test_calabi_round_zero():
    assert calabi_energy(round_potential(512)) < 1e-18


def test_geodesic_distance_oracle():
    u0 = round_potential(512)
    x = u0.x_grid
    from kenergy import SymplecticPotential

    u1 = SymplecticPotential(x, 0.1 * x * (1.0 - x))
    # ||x(1-x)||_{L^2(0,1)} = sqrt(1/30) exactly
    assert abs(geodesic_distance(u0, u1) / 0.1 - np.sqrt(1.0 / 30.0)) < 1e-8
    assert geodesic_distance(u0, u1) == geodesic_distance(u1, u0)
    assert geodesic_distance(u0, u0) == 0.0


def test_mabuchi_norm_is_moment_l2():
    u = round_potential(512)
    v = np.sin(3.0 * np.pi * u.x_grid)
    # int sin^2(3 pi x) dx = 1/2
    assert abs(mabuchi_norm(v, u) - np.sqrt(0.5)) < 1e-9


def test_f_functional_round_reference():
    u = round_potential(512)
    psi = legendre_to_s(u)
    mu = reference_density(psi.s_grid)
    assert abs(f_functional(u, mu, psi=psi)) < 1e-15


def test_f_functional_constant_invariance():
    u = wave([0.05])
    psi = legendre_to_s(u)
    mu = reference_density(psi.s_grid)
    Fa = f_functional(u, mu, psi=psi)
    ub = u.shifted(beta=0.7)
    Fb = f_functional(ub, mu, psi=legendre_to_s(ub))
    assert abs(Fa - Fb) < 1e-12


def test_f_functional_rejects_bad_mass():
    u = round_potential(512)
    psi = legendre_to_s(u)
    with pytest.raises(ValueError, match="mass"):
        f_functional(u, 2.0 * reference_density(psi.s_grid), psi=psi)


def test_gradient_identity_on_affine_family():
    rng = np.random.default_rng(9)
    u0, u1 = sample_potential(rng), sample_potential(rng)
    path = weak_geodesic(u0, u1, m=8)
    res, dM = gradient_identity_check(path.slice, 0.4)
    assert res < 1e-5 * (1.0 + abs(dM))


def test_chen_inequality_random_pair():
    rng = np.random.default_rng(13)
    u0, u1 = sample_potential(rng), sample_potential(rng)
    lhs, rhs, slack = chen_inequality_check(u0, u1)
    assert slack >= -1e-6
    assert abs((lhs - rhs) - slack) < 1e-14


def test_functional_report_fields():
    u = wave([0.04])
    rep = functional_report(u)
    assert abs(rep.mabuchi - mabuchi(u)) < 1e-12
    assert rep.calabi >= 0.0
    row = rep.csv_row()
    assert len(row.split(",")) == len(rep.CSV_HEADER.split(","))
