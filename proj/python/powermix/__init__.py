"""Directed power mixtures and two-sided power (TSP) laws."""

from ._powermix import (
    DivergenceError,
    DomainError,
    Distribution,
    MixtureSpec,
    NoFiniteMomentError,
    PreconditionError,
    Support,
    __version__,
    conditional_cdf,
    directed_transform_residual,
    double_stieltjes,
    iid_square_residual,
    ks_statistic,
    moments,
    normal_moment_formula,
    ordered_pair_transform,
    parse,
    partial_fraction_residual,
    scenario_ids,
    specfun,
    tsp_pdf_uniform,
    tsp_pdf_uniform_betaweight,
    tsp_third_derivative_residual,
    tsp_third_derivative_residual_corrected,
    uniform_moment_formula,
    verify,
)

__all__ = [name for name in dir() if not name.startswith("_")]
