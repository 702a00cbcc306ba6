"""Invertible weighted composition operators with hyperbolic symbol on
Hardy/weighted Bergman spaces: spectral-annulus predictions and numerical
certification of the universality hypotheses (infinite-dimensional kernel,
surjectivity) for the translated operators."""

__version__ = "0.1.0"

from .mobius import Automorphism, canonical, canonical_r, classify, from_fixed_points, inverse, iterate
from .series import TaylorSeries, compose, derivative, exp_log, fractional_power
from .spaces import SpaceSpec, monomial_norm, norm, pnorm_quadrature
from .spectra import AnnulusPrediction, gelfand_radius, predict_annuli, resolvent_backward, resolvent_forward, truncated_eigenvalues
from .symbolparse import WeightExpr, WeightSymbol, analyze, analyze_text, parse, winding_check
from .universality import (
    caradus_report,
    decompose,
    eigenfunction,
    gk_family,
    generator_check,
    kernel_probe,
    omega_ratio_limits,
    omega_weight,
    surjectivity_probe,
    twisted_weight,
)
from .wco import GalerkinMatrix, WCOperator, constant_weight, isometry_weight, normalized_isometry

__all__ = [
    "Automorphism",
    "AnnulusPrediction",
    "GalerkinMatrix",
    "SpaceSpec",
    "TaylorSeries",
    "WCOperator",
    "WeightExpr",
    "WeightSymbol",
    "analyze",
    "analyze_text",
    "canonical",
    "canonical_r",
    "caradus_report",
    "classify",
    "compose",
    "constant_weight",
    "decompose",
    "derivative",
    "eigenfunction",
    "exp_log",
    "fractional_power",
    "from_fixed_points",
    "gelfand_radius",
    "generator_check",
    "gk_family",
    "inverse",
    "isometry_weight",
    "iterate",
    "kernel_probe",
    "monomial_norm",
    "norm",
    "normalized_isometry",
    "omega_ratio_limits",
    "omega_weight",
    "parse",
    "pnorm_quadrature",
    "predict_annuli",
    "resolvent_backward",
    "resolvent_forward",
    "surjectivity_probe",
    "truncated_eigenvalues",
    "twisted_weight",
    "winding_check",
    "__version__",
]
