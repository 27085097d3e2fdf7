"""Special functions used by the analytic families."""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate, special

__all__ = [
    "std_normal_cdf",
    "inv_std_normal_cdf",
    "std_normal_pdf",
    "reg_lower_gamma",
    "inv_reg_lower_gamma",
    "chi2_cdf",
    "chi2_ppf",
    "poisson_cdf_table",
    "bvn_cdf",
    "bvn_cdf_half",
]


def std_normal_cdf(x):
    return special.ndtr(x)


def inv_std_normal_cdf(u):
    return special.ndtri(u)


def std_normal_pdf(x):
    x = np.asarray(x, dtype=float)
    return np.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


def reg_lower_gamma(s, x):
    """P(s, x) = gamma(s, x) / Gamma(s); zero for x <= 0."""
    s = np.asarray(s, dtype=float)
    if np.any(s <= 0):
        raise ValueError("shape parameter must be positive")
    x = np.asarray(x, dtype=float)
    return special.gammainc(s, np.maximum(x, 0.0))


def inv_reg_lower_gamma(s, p):
    return special.gammaincinv(s, p)


def chi2_cdf(y, k):
    if k <= 0:
        raise ValueError("degrees of freedom must be positive")
    return reg_lower_gamma(0.5 * k, 0.5 * np.asarray(y, dtype=float))


def chi2_ppf(u, k):
    if k <= 0:
        raise ValueError("degrees of freedom must be positive")
    u = np.asarray(u, dtype=float)
    return 2.0 * inv_reg_lower_gamma(0.5 * k, u)


def poisson_cdf_table(lam: float, tail: float = 1e-16) -> np.ndarray:
    """Cumulative Poisson probabilities Pi(0), Pi(1), ... until the tail drops below ``tail``.

    Each prefix is an exactly rounded sum of the pmf terms.
    """
    if not lam > 0:
        raise ValueError("Poisson mean must be positive")
    terms = []
    term = math.exp(-lam)
    k = 0
    cum = []
    while True:
        terms.append(term)
        cum.append(math.fsum(terms))
        # for k + 2 > lam the remaining tail is below a geometric series
        r = lam / (k + 2)
        if r < 1 and term * (lam / (k + 1)) / (1.0 - r) < tail:
            break
        k += 1
        term *= lam / k
        if k > 10_000:
            raise RuntimeError("Poisson table did not converge")
    return np.array(cum)


def _bvn_scalar(x: float, y: float, rho: float) -> float:
    if x == -math.inf or y == -math.inf:
        return 0.0
    if x == math.inf:
        return float(special.ndtr(y))
    if y == math.inf:
        return float(special.ndtr(x))
    r = math.sqrt((1.0 - rho) * (1.0 + rho))

    def integrand(s):
        return math.exp(-0.5 * s * s) * special.ndtr((y - rho * s) / r)

    # integrand vanishes below -38 in double precision
    lo = min(-38.0, x - 1.0)
    val, _ = integrate.quad(integrand, lo, x, epsabs=1e-14, epsrel=1e-13, limit=200,
                            points=[0.0] if lo < 0.0 < x else None)
    return val / math.sqrt(2.0 * math.pi)


def bvn_cdf(x, y, rho: float):
    """Standard bivariate normal CDF Phi_2(x, y; rho) by a one-dimensional integral."""
    if not abs(rho) < 1:
        raise ValueError("correlation must satisfy |rho| < 1")
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    out = np.empty(x.shape)
    for idx in np.ndindex(x.shape):
        out[idx] = _bvn_scalar(float(x[idx]), float(y[idx]), rho)
    return out[()] if out.ndim == 0 else out


def bvn_cdf_half(x, rho: float):
    """Phi_2(x, 0; rho), via Owen's T: Phi(x)/2 + T(x, rho / sqrt(1 - rho^2))."""
    if not abs(rho) < 1:
        raise ValueError("correlation must satisfy |rho| < 1")
    x = np.asarray(x, dtype=float)
    a = rho / math.sqrt((1.0 - rho) * (1.0 + rho))
    fin = np.where(np.isfinite(x), x, 0.0)
    out = 0.5 * special.ndtr(fin) + special.owens_t(fin, a)
    out = np.where(x == np.inf, 0.5, np.where(x == -np.inf, 0.0, out))
    return out[()] if out.ndim == 0 else out
