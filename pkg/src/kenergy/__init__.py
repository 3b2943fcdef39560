"""Numerical laboratory for rotation-invariant sphere metrics and disc Bergman kernels."""

from .radial import (
    DegenerateMetricError,
    MetricDensity,
    RadialPotential,
    SymplecticPotential,
    curvature_integral,
    guillemin_term,
    integrate_x,
    legendre_to_s,
    legendre_to_x,
    metric_density,
    moment_map,
    potential_csv_string,
    potential_from_csv,
    potential_to_csv,
    reference_density,
    reference_moment,
    reference_psi,
    reference_radial,
    ricci_density,
    ricci_integral,
    round_potential,
    scalar_curvature,
    scalar_curvature_at,
)
from .functionals import (
    FunctionalReport,
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
    mabuchi,
    mabuchi_moment,
    mabuchi_norm,
)
from .geodesics import (
    ComplexifiedSolution,
    GeodesicPath,
    complexify,
    convexity_margin,
    d2_mabuchi_fd,
    geodesic_ode_residual,
    hrma_details,
    hrma_residual,
    mabuchi_along,
    second_order_data,
    second_variation_fiber_integral,
    weak_geodesic,
)
from .symmetry import (
    LichnerowiczOperator,
    OrbitPath,
    basis_profile,
    complex_hamiltonian_check,
    kernel_dimension,
    lichnerowicz_assemble,
    orbit_flatness_and_F,
    orbit_geodesic,
    orbit_hamiltonian,
    orbit_hamiltonian_residual,
)
from .bergman import (
    BergmanKernel,
    RadialWeight,
    WeightError,
    WeightFamily,
    bergman_B,
    bergman_coefficients,
    bergman_kernel,
    density_limit_check,
    family_constant,
    family_geodesic,
    family_power,
    family_translate,
    log_psh_check,
    tk_positivity,
    weight_from_potential,
    weight_fubini_study,
    weight_hinge,
    weight_quadratic,
    weight_quartic,
    weight_zero,
)
from .experiments import (
    ExperimentConfig,
    MinimizerState,
    minimize_objective,
    potential_from_coeffs,
    sample_potential,
)

__version__ = "0.1.0"
