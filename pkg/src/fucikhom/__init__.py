"""Fucik eigencurves of the weighted one-dimensional p-Laplacian and their
homogenization rates under rapidly oscillating periodic weights."""

__version__ = "0.1.0"

from .errors import (
    BoundViolation,
    ConfigError,
    FucikError,
    SolverError,
)
from .fucik1d import CurvePoint, Partition, c_value, closed_form_constant, trace_curve
from .homrates import RateConstant, RateRecord, SweepReport, rate_constants, sweep_eigen, sweep_fucik
from .plap1d import EigenEstimate, lambda1_rayleigh, lambda1_shoot, mu_k, pi_p
from .weights import Interval, PeriodicWeight

__all__ = [
    "BoundViolation",
    "ConfigError",
    "CurvePoint",
    "EigenEstimate",
    "FucikError",
    "Interval",
    "Partition",
    "PeriodicWeight",
    "RateConstant",
    "RateRecord",
    "SolverError",
    "SweepReport",
    "c_value",
    "closed_form_constant",
    "lambda1_rayleigh",
    "lambda1_shoot",
    "mu_k",
    "pi_p",
    "rate_constants",
    "sweep_eigen",
    "sweep_fucik",
    "trace_curve",
]
