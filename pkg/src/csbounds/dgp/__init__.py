"""Analytic DGP oracle suite."""

from .config import dump_config, load_config, parse_config
from .copula import ClaytonCopula, GaussianCopula, HorizontalSection, IndependenceCopula, clayton
from .marginals import (
    AnalyticCdf,
    Bunching,
    Chi2,
    ConditionalCdf,
    LeftCensored,
    Normal,
    Poisson,
    RightCensored,
    conditional_pair,
    left_censored_chi2,
    right_censored_chi2,
)
from .models import FAMILIES, AnalyticDgp, DgpSpec, analytic_grid, example_presets, build, marginal, sample
from .roy import censored_roy, monte_carlo_pt_gap, pt_gap, roy_model, treatment_covariance

__all__ = [
    "AnalyticCdf", "AnalyticDgp", "Bunching", "Chi2", "ClaytonCopula", "ConditionalCdf",
    "DgpSpec", "FAMILIES", "GaussianCopula", "HorizontalSection", "IndependenceCopula",
    "LeftCensored", "Normal", "Poisson", "RightCensored", "analytic_grid", "example_presets",
    "build", "censored_roy", "clayton", "conditional_pair", "dump_config", "left_censored_chi2",
    "load_config", "marginal", "monte_carlo_pt_gap", "parse_config", "pt_gap",
    "right_censored_chi2", "roy_model", "sample", "treatment_covariance",
]
