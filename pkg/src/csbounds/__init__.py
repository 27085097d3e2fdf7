"""Copula-stability bounds on counterfactual distributions and welfare effects."""

__version__ = "0.1.0"

from .bounds import (  # noqa: E402
    BoundsPair,
    DistDidEstimate,
    GroupedSample,
    ai2006_discrete_bounds,
    check_support_condition,
    cic_point_estimate,
    cs_bounds,
    dist_did,
    envelope,
    raw_cs_values,
)
from .stepdist import EvaluableCdf, StepCdf, from_samples  # noqa: E402

__all__ = [
    "BoundsPair", "DistDidEstimate", "EvaluableCdf", "GroupedSample", "StepCdf",
    "ai2006_discrete_bounds", "check_support_condition", "cic_point_estimate", "cs_bounds",
    "dist_did", "envelope", "from_samples", "raw_cs_values",
]
