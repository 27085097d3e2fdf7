"""Copulas between the untreated outcome and group membership.

Only the horizontal section u -> C(u, q) at q = P(D=0) enters the
conditional CDFs, so each copula exposes that section together with the
two induced maps on the marginal CDF value::

    control(v) = C(v, q) / q          F_{.|D=0} = control o F
    treated(v) = (v - C(v, q)) / p    F_{.|D=1} = treated o F

Both maps are continuous, strictly increasing bijections of [0, 1] for the
families here, which is what keeps quantiles of the conditionals exact.
"""

from __future__ import annotations

import numpy as np

from .special import bvn_cdf, bvn_cdf_half, inv_std_normal_cdf

__all__ = [
    "clayton",
    "ClaytonCopula",
    "IndependenceCopula",
    "GaussianCopula",
    "HorizontalSection",
    "invert_increasing",
]


def clayton(u, q, theta: float):
    """Clayton copula (max(u^-theta + q^-theta - 1, 0))^(-1/theta); zero on the axes."""
    if not theta > 0:
        raise ValueError("Clayton parameter must be positive")
    u = np.asarray(u, dtype=float)
    q = np.asarray(q, dtype=float)
    u, q = np.broadcast_arrays(u, q)
    out = np.zeros(u.shape)
    pos = (u > 0) & (q > 0)
    with np.errstate(over="ignore", divide="ignore"):
        s = np.maximum(u[pos] ** -theta + q[pos] ** -theta - 1.0, 0.0)
        out[pos] = s ** (-1.0 / theta)
    return out[()] if out.ndim == 0 else out


def invert_increasing(fn, u, iters: int = 80):
    """Vectorized bisection for the inverse of an increasing map of [0, 1] onto itself."""
    u = np.asarray(u, dtype=float)
    lo = np.zeros(u.shape)
    hi = np.ones(u.shape)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        below = np.asarray(fn(mid)) < u
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.all(hi - lo <= np.spacing(hi)):
            break
    out = np.where(u <= 0.0, 0.0, np.where(u >= 1.0, 1.0, hi))
    return out[()] if out.ndim == 0 else out


class ClaytonCopula:
    name = "clayton"

    def __init__(self, theta: float = 1.0):
        if not theta > 0:
            raise ValueError("Clayton parameter must be positive")
        self.theta = float(theta)

    def __call__(self, u, q):
        return clayton(u, q, self.theta)

    def control_inverse(self, w, q):
        # solves C(v, q) = w q in closed form
        th = self.theta
        w = np.asarray(w, dtype=float)
        out = np.zeros(w.shape)
        pos = w > 0
        with np.errstate(over="ignore", divide="ignore"):
            s = (w[pos] * q) ** -th - q ** -th + 1.0
            out[pos] = s ** (-1.0 / th)
        out = np.clip(out, 0.0, 1.0)
        return out[()] if out.ndim == 0 else out

    def treated_inverse(self, w, q):
        p = 1.0 - q
        w = np.asarray(w, dtype=float)
        if self.theta == 1.0:
            # v^2 / (q + p v) = w
            out = 0.5 * (w * p + np.sqrt((w * p) ** 2 + 4.0 * w * q))
            out = np.clip(out, 0.0, 1.0)
            return out[()] if out.ndim == 0 else out
        return invert_increasing(lambda v: (v - self(v, q)) / p, w)

    def __repr__(self):
        return f"ClaytonCopula(theta={self.theta:g})"


class IndependenceCopula:
    name = "independence"

    def __call__(self, u, q):
        return np.asarray(u, dtype=float) * q

    def control_inverse(self, w, q):
        return np.asarray(w, dtype=float)

    def treated_inverse(self, w, q):
        return np.asarray(w, dtype=float)

    def __repr__(self):
        return "IndependenceCopula()"


class GaussianCopula:
    """Gaussian copula; its horizontal section is Phi_2(Phi^-1(u), Phi^-1(q); rho)."""

    name = "gaussian"

    def __init__(self, rho: float):
        if not abs(rho) < 1:
            raise ValueError("correlation must satisfy |rho| < 1")
        self.rho = float(rho)

    def __call__(self, u, q):
        u = np.asarray(u, dtype=float)
        x = inv_std_normal_cdf(u)
        if q == 0.5:
            return bvn_cdf_half(x, self.rho)
        return bvn_cdf(x, inv_std_normal_cdf(q), self.rho)

    def control_inverse(self, w, q):
        return invert_increasing(lambda v: self(v, q) / q, w)

    def treated_inverse(self, w, q):
        p = 1.0 - q
        return invert_increasing(lambda v: (v - self(v, q)) / p, w)

    def __repr__(self):
        return f"GaussianCopula(rho={self.rho:g})"


class HorizontalSection:
    """The maps v -> P(F(Y) <= v | D = d) induced by a copula at fixed q."""

    def __init__(self, copula, q: float):
        if not 0.0 < q < 1.0:
            raise ValueError("q must lie in (0, 1)")
        self.copula = copula
        self.q = float(q)
        self.p = 1.0 - self.q

    def control(self, v):
        out = np.asarray(self.copula(v, self.q), dtype=float) / self.q
        out = np.clip(out, 0.0, 1.0)
        return out[()] if out.ndim == 0 else out

    def treated(self, v):
        v = np.asarray(v, dtype=float)
        out = (v - np.asarray(self.copula(v, self.q))) / self.p
        out = np.clip(out, 0.0, 1.0)
        return out[()] if out.ndim == 0 else out

    def control_inverse(self, w):
        return self.copula.control_inverse(w, self.q)

    def treated_inverse(self, w):
        return self.copula.treated_inverse(w, self.q)

    def is_strictly_increasing(self, n: int = 1000) -> bool:
        v = np.linspace(0.0, 1.0, n + 1)[1:]
        c = np.asarray(self.copula(v, self.q))
        return bool(np.all(np.diff(c) > 0))

    def __repr__(self):
        return f"HorizontalSection({self.copula!r}, q={self.q:g})"
