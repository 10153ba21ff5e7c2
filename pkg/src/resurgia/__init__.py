"""Exact sum-product series, nir-transforms, linear ODE discovery and monodromy of singularity stars."""

__version__ = "0.1.0"

from .exact.bernoulli import BetaChoice  # noqa: E402
from .exact.puiseux import PuiseuxSeries  # noqa: E402
from .sp import DrivingFunction, locate_closest_singularity, sp_coefficient, sp_series  # noqa: E402
from .nir import nir_transform, nur_numeric  # noqa: E402
from .ode import (DiffOperator, apply_operator, dimension_scan, find_annihilators,  # noqa: E402
                  nonexistence_report, structural_variable_ode)
from .covariance import canonical_covariant, eps_derive, leading_covariant_lambda  # noqa: E402
from .monodromy import build_schedule, compose_turn  # noqa: E402
from .reftables import ref_poly, structural_check  # noqa: E402

__all__ = [
    "__version__", "BetaChoice", "PuiseuxSeries", "DrivingFunction", "sp_coefficient", "sp_series",
    "locate_closest_singularity", "nir_transform", "nur_numeric", "DiffOperator", "apply_operator",
    "find_annihilators", "dimension_scan", "nonexistence_report", "structural_variable_ode",
    "canonical_covariant", "eps_derive", "leading_covariant_lambda", "build_schedule", "compose_turn",
    "ref_poly", "structural_check",
]
