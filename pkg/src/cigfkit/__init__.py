"""Cumulative information generating function toolkit.

The generating function itself is ``cigfkit.cigf.cigf``; it is not re-exported
here so that the name keeps referring to the submodule.
"""

from .cigf import (
    MeasureReport,
    Membership,
    Method,
    ParamPair,
    cigf_erlang_series,
    cigf_odds,
    closed_form,
    h_measure,
    in_domain,
    k_measure,
)
from .distributions import (
    Distribution,
    EmpiricalDiscrete,
    affine,
    equilibrium,
    from_samples,
    make_family,
    parse_spec,
    prop_hazard,
    prop_rev_hazard,
)
from .numerics import DEFAULT_QUAD, AccuracyError, DomainError, FracDiffSpec, QuadSpec
from .reliability import MonteCarloConfig, SystemSpec

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_QUAD", "AccuracyError", "Distribution", "DomainError", "EmpiricalDiscrete",
    "FracDiffSpec", "MeasureReport", "Membership", "Method", "MonteCarloConfig", "ParamPair",
    "QuadSpec", "SystemSpec", "affine", "cigf_erlang_series", "cigf_odds", "closed_form",
    "equilibrium", "from_samples", "h_measure", "in_domain", "k_measure", "make_family",
    "parse_spec", "prop_hazard", "prop_rev_hazard",
]
