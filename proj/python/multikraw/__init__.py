"""Reproducing kernel orthogonal polynomials on the multinomial distribution.

Exact values cross the boundary as fractions.Fraction; rational parameters
accept int, Fraction, or strings like "1/2".
"""

from ._core import (  # noqa: F401
    OrthonormalBasis,
    UrnChainSpec,
    __version__,
    binomial,
    chain_eigenvalues,
    charlier,
    chi2_exact,
    chi2_spectral,
    chi_squared_survival,
    cutoff_bounds,
    cutoff_bounds_general_z,
    duplication_pair,
    enumerate_configurations,
    gof_report,
    gof_report_estimated,
    kernel,
    kernel_all_degrees,
    krawtchouk,
    krawtchouk_norm,
    lumped_moments,
    matching_simulate,
    mixing_curve_csv,
    mixing_measure,
    multinomial_pmf,
    mvk,
    mvk_raw,
    poisson_kernel,
    poisson_kernel_rho_min,
    poisson_limit_kernel,
    transition_matrix,
    triple_product_1d,
    triple_sum,
    tv_exact,
)
