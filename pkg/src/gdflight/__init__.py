"""Isotropic random flights with generalized Dirichlet step durations."""
from .density import (
    RadialLaw,
    atom_unconditional,
    cdf_solvable_first,
    cdf_solvable_second,
    cdf_unconditional,
    cf_conditional,
    cf_general_numeric,
    density_d3_two_step,
    density_general_numeric,
    density_solvable_first,
    density_solvable_second,
    density_two_step,
    density_two_step_equal,
    density_unconditional,
    radial_law,
    radial_moment,
)
from .errors import DomainError, NumericError
from .flight import FlightConfig, PositionBatch, PositionSample, SolvableModel, expand_model, sample_batch
from .sampling import DurationVector, GDParams, RngStream, gd_density, sample_gd

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "DurationVector",
    "FlightConfig",
    "GDParams",
    "NumericError",
    "PositionBatch",
    "PositionSample",
    "RadialLaw",
    "RngStream",
    "SolvableModel",
    "atom_unconditional",
    "cdf_solvable_first",
    "cdf_solvable_second",
    "cdf_unconditional",
    "cf_conditional",
    "cf_general_numeric",
    "density_d3_two_step",
    "density_general_numeric",
    "density_solvable_first",
    "density_solvable_second",
    "density_two_step",
    "density_two_step_equal",
    "density_unconditional",
    "expand_model",
    "gd_density",
    "radial_law",
    "radial_moment",
    "sample_batch",
    "sample_gd",
    "__version__",
]
