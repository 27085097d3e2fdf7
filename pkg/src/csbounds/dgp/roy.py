"""Gaussian Roy model with selection on the gain, and its censored variant.

Latent (U0, U1, eta) are jointly normal with unit-variance eta; the unit is
treated when eta >= 0, so q = 1/2 and the horizontal copula of period t is
Phi_2(Phi^-1(u), 0; rho_t). Copula stability therefore holds iff
rho0 == rho1, while mean parallel trends needs rho0 sigma0 == rho1 sigma1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .models import AnalyticDgp, DgpSpec, rng_for, roy_correlation

__all__ = [
    "roy_model",
    "censored_roy",
    "pt_gap",
    "treatment_covariance",
    "MonteCarloGap",
    "monte_carlo_pt_gap",
]

_HALF_NORMAL_MEAN = math.sqrt(2.0 / math.pi)  # E[eta | eta >= 0]


def roy_model(spec: DgpSpec) -> AnalyticDgp:
    if spec.family != "roy_gaussian":
        raise ValueError("roy_model needs a roy_gaussian spec")
    return AnalyticDgp(spec)


def censored_roy(spec: DgpSpec) -> AnalyticDgp:
    if spec.family != "censored_roy":
        raise ValueError("censored_roy needs a censored_roy spec")
    return AnalyticDgp(spec)


def pt_gap(sigma0: float, sigma1: float, rho0: float, rho1: float) -> float:
    """E[Y10 - Y00 | D=1] - E[Y10 - Y00 | D=0].

    E[U_t | D=1] = rho_t sigma_t sqrt(2/pi) and E[U_t | D=0] is its negative.
    """
    return 2.0 * _HALF_NORMAL_MEAN * (rho1 * sigma1 - rho0 * sigma0)


def treatment_covariance(sigma: float, rho: float) -> float:
    """Cov(Y_t0, D) = E[U_t 1{eta >= 0}] = rho sigma / sqrt(2 pi)."""
    return rho * sigma / math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class MonteCarloGap:
    estimate: float
    std_error: float
    n: int

    def within(self, target: float, k: float = 3.0) -> bool:
        return abs(self.estimate - target) <= k * self.std_error


def monte_carlo_pt_gap(spec: DgpSpec, n: int = 1_000_000, seed: int = 0) -> MonteCarloGap:
    """Simulated parallel-trends gap with its standard error."""
    if spec.family != "roy_gaussian":
        raise ValueError("Monte Carlo gap is defined for the roy_gaussian family")
    p = spec.params
    chol = np.linalg.cholesky(roy_correlation(p) + 1e-15 * np.eye(3))
    z = rng_for(seed).standard_normal((n, 3)) @ chol.T
    u0, u1 = p["sigma0"] * z[:, 0], p["sigma1"] * z[:, 1]
    treated = z[:, 2] >= 0.0
    diff = u1 - u0
    a, b = diff[treated], diff[~treated]
    est = a.mean() - b.mean()
    se = math.sqrt(a.var(ddof=1) / a.size + b.var(ddof=1) / b.size)
    return MonteCarloGap(float(est), se, n)
