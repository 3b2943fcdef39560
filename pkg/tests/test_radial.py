"""Grids, transforms, densities, curvature, and potential I/O."""

import io

import numpy as np
import pytest

from kenergy import (
    DegenerateMetricError,
    SymplecticPotential,
    curvature_integral,
    guillemin_term,
    legendre_to_s,
    legendre_to_x,
    metric_density,
    moment_map,
    potential_csv_string,
    potential_from_csv,
    potential_to_csv,
    reference_density,
    reference_radial,
    round_potential,
    scalar_curvature,
    scalar_curvature_at,
)
from kenergy.functionals import REFINED_N_S


def wave(amps, n_x=512):
    x = np.linspace(0.0, 1.0, n_x)
    f = np.zeros(n_x)
    for j, a in enumerate(amps, start=1):
        f += a * np.sin(j * np.pi * x)
    return SymplecticPotential(x, f)


def test_guillemin_term_midpoint():
    # x log x + (1-x) log(1-x) at 1/2 is -log 2
    assert abs(guillemin_term(np.array([0.5]))[0] + np.log(2.0)) < 1e-15
    # endpoint limits are 0
    assert guillemin_term(np.array([0.0]))[0] == 0.0
    assert guillemin_term(np.array([1.0]))[0] == 0.0


def test_round_potential_is_flat_correction():
    u = round_potential(256)
    assert np.all(u.f_values == 0.0)
    x = np.linspace(0.05, 0.95, 19)
    # u'' = 1/(x(1-x)) for the round metric
    assert np.max(np.abs(u.d2u(x) - 1.0 / (x * (1.0 - x)))) < 1e-8


def test_round_curvature_is_two_everywhere():
    u = round_potential(512)
    x = np.linspace(0.01, 0.99, 197)
    R = scalar_curvature_at(u, x)
    assert np.max(np.abs(R - 2.0)) < 1e-9
    assert np.max(np.abs(scalar_curvature(u) - 2.0)) < 1e-9


def test_curvature_integral_round():
    assert abs(curvature_integral(round_potential(512)) - 2.0) < 1e-12


def test_curvature_integral_perturbed():
    # Gauss-Bonnet: total curvature is 2 for every admissible potential
    u = wave([0.05, -0.02, 0.01])
    assert abs(curvature_integral(u) - 2.0) < 1e-10


def test_constructor_rejects_nonconvex():
    x = np.linspace(0.0, 1.0, 512)
    with pytest.raises(DegenerateMetricError):
        SymplecticPotential(x, 2.0 * np.sin(np.pi * x))


def test_constructor_rejects_bad_grids():
    with pytest.raises(ValueError):
        SymplecticPotential(np.linspace(0.0, 0.9, 64), np.zeros(64))
    with pytest.raises(ValueError):
        SymplecticPotential(np.linspace(0.0, 1.0, 64), np.zeros(32))
    x = np.linspace(0.0, 1.0, 64)
    bad = x.copy()
    bad[10] += 1e-3
    with pytest.raises(ValueError):
        SymplecticPotential(bad, np.zeros(64))


def test_shifted_adds_affine_correction():
    u = wave([0.03])
    v = u.shifted(alpha=0.2, beta=-0.1)
    assert np.max(np.abs(v.f_values - (u.f_values + 0.2 * u.x_grid - 0.1))) < 1e-15


def test_reference_density_mass_and_symmetry():
    s = np.linspace(-30.0, 30.0, 40001)
    rho0 = reference_density(s)
    mass = np.trapezoid(rho0, s)
    assert abs(mass - 1.0) < 1e-10
    assert np.max(np.abs(rho0 - rho0[::-1])) < 1e-15


def test_reference_radial_slopes_and_density():
    psi0 = reference_radial()
    x = psi0.d1()
    assert np.all(x > 0.0) and np.all(x < 1.0)
    assert np.all(np.diff(x) > 0.0)
    assert np.max(np.abs(psi0.d2() - reference_density(psi0.s_grid))) < 1e-14


def test_legendre_round_trip():
    u = wave([0.05, 0.02])
    psi = legendre_to_s(u, n_s=4096)
    # Young equality u(x*) + psi(s) = s x* at the optimizer
    x = psi.d1()
    young = u.u(x) + psi.psi_values - psi.s_grid * x
    assert np.max(np.abs(young)) < 1e-10
    back = legendre_to_x(psi, n_x=u.x_grid.size)
    assert np.max(np.abs(back.f_values - u.f_values)) < 1e-7


def test_moment_map_matches_slope():
    u = wave([0.04, -0.03])
    psi = legendre_to_s(u)
    x = moment_map(psi)
    # s = u'(x) inverts to x = psi'(s); slope error grows like e^{|s|}
    # toward the window ends, so test the bulk |s| <= 12
    core = np.abs(psi.s_grid) <= 12.0
    assert np.max(np.abs(u.du(x)[core] - psi.s_grid[core])) < 1e-10


def test_metric_density_mass_refined():
    u = wave([0.07, 0.01, -0.02])
    dens = metric_density(legendre_to_s(u, n_s=REFINED_N_S))
    assert abs(dens.mass() - 1.0) < 1e-9
    assert dens.min_density >= 0.0


def test_csv_round_trip_bytes():
    u = wave([0.05, -0.01])
    text = potential_csv_string(u)
    v = potential_from_csv(io.StringIO(text))
    assert v == u
    assert potential_csv_string(v) == text


def test_csv_file_round_trip(tmp_path):
    u = wave([0.02])
    p = str(tmp_path / "pot.csv")
    potential_to_csv(u, p)
    assert potential_from_csv(p) == u


def test_csv_errors_name_the_row():
    with pytest.raises(ValueError, match="header"):
        potential_from_csv(io.StringIO("a,b\n0,0\n"))
    lines = potential_csv_string(round_potential(16)).splitlines()
    lines[5] = "not,a,row"
    with pytest.raises(ValueError, match="row 6"):
        potential_from_csv(io.StringIO("\n".join(lines) + "\n"))
    lines = potential_csv_string(round_potential(16)).splitlines()
    lines[4] = "0.5,oops"
    with pytest.raises(ValueError, match="row 5"):
        potential_from_csv(io.StringIO("\n".join(lines) + "\n"))
