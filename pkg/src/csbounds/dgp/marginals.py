"""Analytic marginal families and their copula-induced conditionals.

Each family implements the full EvaluableCdf contract in closed form,
including atoms, flat stretches and both generalized quantiles, so the
bounds can be evaluated exactly on any grid.
"""

from __future__ import annotations

import math

import numpy as np

from ..stepdist import EvaluableCdf, _as_output, _check_probs
from .copula import ClaytonCopula, HorizontalSection
from .special import chi2_cdf, chi2_ppf, inv_std_normal_cdf, poisson_cdf_table, std_normal_cdf

__all__ = [
    "AnalyticCdf",
    "Chi2",
    "Normal",
    "LeftCensored",
    "RightCensored",
    "Poisson",
    "Bunching",
    "ConditionalCdf",
    "conditional_pair",
    "left_censored_chi2",
    "right_censored_chi2",
]


class AnalyticCdf(EvaluableCdf):
    """Closed-form distribution.

    Subclasses provide vectorized ``_cdf``, ``_left`` and the two quantiles on
    the open interval (0, 1); the endpoints are fixed here:
    Q^-(0) = -inf, Q^+(1) = +inf, Q^-(1) = ``upper_end``, Q^+(0) = ``lower_end``.
    """

    label = ""
    lower_end = -math.inf
    upper_end = math.inf

    def evaluate(self, y):
        scalar = np.ndim(y) == 0
        y = np.asarray(y, dtype=float)
        out = np.where(y == np.inf, 1.0, 0.0).astype(float)
        fin = np.isfinite(y)
        if np.any(fin):
            out[fin] = self._cdf(y[fin])
        return _as_output(out, scalar)

    __call__ = evaluate

    def left_limit(self, y):
        scalar = np.ndim(y) == 0
        y = np.asarray(y, dtype=float)
        out = np.where(y == np.inf, 1.0, 0.0).astype(float)
        fin = np.isfinite(y)
        if np.any(fin):
            out[fin] = self._left(y[fin])
        return _as_output(out, scalar)

    def quantile_left(self, u):
        scalar = np.ndim(u) == 0
        u = _check_probs(u)
        out = np.full(u.shape, -np.inf)
        out[u == 1.0] = self.upper_end
        mid = (u > 0.0) & (u < 1.0)
        if np.any(mid):
            out[mid] = self._qleft(u[mid])
        return _as_output(out, scalar)

    def quantile_right(self, u):
        scalar = np.ndim(u) == 0
        u = _check_probs(u)
        out = np.full(u.shape, np.inf)
        out[u == 0.0] = self.lower_end
        mid = (u > 0.0) & (u < 1.0)
        if np.any(mid):
            out[mid] = self._qright(u[mid])
        return _as_output(out, scalar)

    @property
    def atoms(self) -> tuple:
        """``(location, mass)`` pairs."""
        return ()

    def __repr__(self):
        return f"{type(self).__name__}({self.label})"


class Chi2(AnalyticCdf):
    lower_end = 0.0

    def __init__(self, k: float):
        if not k > 0:
            raise ValueError("degrees of freedom must be positive")
        self.k = float(k)
        self.label = f"chi2(k={k:g})"

    def _cdf(self, y):
        return chi2_cdf(y, self.k)

    _left = _cdf

    def _qleft(self, u):
        return chi2_ppf(u, self.k)

    _qright = _qleft

    def support(self):
        return ((0.0, math.inf),)


class Normal(AnalyticCdf):
    def __init__(self, mu: float = 0.0, sigma: float = 1.0):
        if not sigma > 0:
            raise ValueError("sigma must be positive")
        self.mu = float(mu)
        self.sigma = float(sigma)
        self.label = f"normal(mu={mu:g}, sigma={sigma:g})"

    def _cdf(self, y):
        return std_normal_cdf((y - self.mu) / self.sigma)

    _left = _cdf

    def _qleft(self, u):
        return self.mu + self.sigma * inv_std_normal_cdf(u)

    _qright = _qleft

    def support(self):
        return ((-math.inf, math.inf),)


class LeftCensored(AnalyticCdf):
    """max(X, c) for a continuous, strictly increasing base X: atom F_X(c) at c."""

    def __init__(self, base: AnalyticCdf, c: float):
        self.base = base
        self.c = float(c)
        self.mass = float(base.evaluate(self.c))
        if not self.mass > 0:
            raise ValueError("censoring point must lie inside the base support")
        self.lower_end = self.c
        self.upper_end = base.upper_end
        self.label = f"left_censored({base.label}, c={c:g})"

    def _cdf(self, y):
        return np.where(y < self.c, 0.0, self.base._cdf(np.maximum(y, self.c)))

    def _left(self, y):
        return np.where(y <= self.c, 0.0, self.base._left(np.maximum(y, self.c)))

    def _qleft(self, u):
        u = np.asarray(u)
        return np.where(u <= self.mass, self.c, self.base._qleft(np.maximum(u, self.mass)))

    _qright = _qleft

    def support(self):
        hi = self.base.support()[-1][1]
        return ((self.c, self.c), (self.c, hi))

    @property
    def atoms(self):
        return ((self.c, self.mass),)


class RightCensored(AnalyticCdf):
    """min(X, c) for a continuous, strictly increasing base X: atom 1 - F_X(c-) at c."""

    def __init__(self, base: AnalyticCdf, c: float):
        self.base = base
        self.c = float(c)
        self.below = float(base.left_limit(self.c))
        if not self.below < 1:
            raise ValueError("censoring point must lie inside the base support")
        self.lower_end = base.lower_end
        self.upper_end = self.c
        self.label = f"right_censored({base.label}, c={c:g})"

    def _cdf(self, y):
        return np.where(y >= self.c, 1.0, self.base._cdf(np.minimum(y, self.c)))

    def _left(self, y):
        return np.where(y > self.c, 1.0, self.base._left(np.minimum(y, self.c)))

    def _qleft(self, u):
        u = np.asarray(u)
        return np.where(u <= self.below, self.base._qleft(np.minimum(u, self.below)), self.c)

    def _qright(self, u):
        u = np.asarray(u)
        return np.where(u < self.below, self.base._qright(np.minimum(u, self.below)), self.c)

    def support(self):
        lo = self.base.support()[0][0]
        return ((lo, self.c), (self.c, self.c))

    @property
    def atoms(self):
        return ((self.c, 1.0 - self.below),)


def left_censored_chi2(c: float, k: float) -> LeftCensored:
    return LeftCensored(Chi2(k), c)


def right_censored_chi2(c: float, k: float) -> RightCensored:
    return RightCensored(Chi2(k), c)


class Poisson(AnalyticCdf):
    """Poisson CDF from an exactly summed table; mass beyond the table is below 1e-16."""

    lower_end = 0.0

    def __init__(self, lam: float):
        self.lam = float(lam)
        self.table = poisson_cdf_table(self.lam)
        self.table.flags.writeable = False
        self.kmax = self.table.size  # F(k) is taken as 1 for k >= kmax
        self.label = f"poisson(lambda={lam:g})"

    def _at(self, k):
        k = np.asarray(k)
        out = np.where(k >= self.kmax, 1.0, self.table[np.clip(k, 0, self.kmax - 1)])
        return np.where(k < 0, 0.0, out)

    def _cdf(self, y):
        return self._at(np.floor(y).astype(np.int64))

    def _left(self, y):
        return self._at(np.ceil(y).astype(np.int64) - 1)

    def _qleft(self, u):
        return np.searchsorted(self.table, u, side="left").astype(float)

    def _qright(self, u):
        return np.searchsorted(self.table, u, side="right").astype(float)

    def support(self):
        return tuple((float(k), float(k)) for k in range(self.kmax + 1))

    @property
    def atoms(self):
        pmf = np.diff(self.table, prepend=0.0)
        tail = (float(self.kmax), 1.0 - float(self.table[-1]))
        return tuple((float(k), float(m)) for k, m in enumerate(pmf)) + (tail,)


class Bunching(AnalyticCdf):
    """Normal outcome whose mass on (c, w) is partly moved onto an atom at c.

    A share ``b`` of P(c < Y < w) sits at c; the rest keeps its normal shape
    compressed by (1 - b).
    """

    def __init__(self, mu: float = 0.0, sigma: float = 1.0, c: float = 0.5,
                 w: float = 1.0, b: float = 0.25):
        if not sigma > 0:
            raise ValueError("sigma must be positive")
        if not c < w:
            raise ValueError("bunching window needs c < w")
        if not 0.0 <= b <= 1.0:
            raise ValueError("bunching share must lie in [0, 1]")
        self.normal = Normal(mu, sigma)
        self.c, self.w, self.b = float(c), float(w), float(b)
        self.pc = float(self.normal.evaluate(self.c))
        self.pw = float(self.normal.evaluate(self.w))
        self.at_c = self.pc + self.b * (self.pw - self.pc)
        self.label = f"bunching(mu={mu:g}, sigma={sigma:g}, c={c:g}, w={w:g}, b={b:g})"

    def _inside(self, y):
        return self.at_c + (1.0 - self.b) * (self.normal._cdf(y) - self.pc)

    def _cdf(self, y):
        phi = self.normal._cdf(y)
        return np.where(y < self.c, phi,
                        np.where(y == self.c, self.at_c,
                                 np.where(y < self.w, self._inside(y), phi)))

    def _left(self, y):
        phi = self.normal._cdf(y)
        return np.where(y <= self.c, phi, np.where(y <= self.w, self._inside(y), phi))

    def _unsqueeze(self, u):
        # normal quantile of the level reached inside (c, w)
        if self.b >= 1.0:
            return np.full(np.shape(u), self.c)
        lev = self.pc + (np.asarray(u) - self.at_c) / (1.0 - self.b)
        return self.normal._qleft(np.clip(lev, self.pc, self.pw))

    def _qleft(self, u):
        u = np.asarray(u)
        nq = self.normal._qleft(u)
        return np.where(u <= self.pc, nq,
                        np.where(u <= self.at_c, self.c,
                                 np.where(u < self.pw, self._unsqueeze(u), nq)))

    def _qright(self, u):
        u = np.asarray(u)
        nq = self.normal._qright(u)
        out = np.where(u < self.pc, nq,
                       np.where(u < self.at_c, self.c,
                                np.where(u < self.pw, self._unsqueeze(u), nq)))
        if self.b >= 1.0:
            # (c, w) carries no mass, so the level pw is flat up to w
            out = np.where(u == self.pw, self.w, out)
        return out

    def support(self):
        return ((-math.inf, math.inf),)

    @property
    def atoms(self):
        return ((self.c, self.at_c - self.pc),)


class ConditionalCdf(AnalyticCdf):
    """phi o F for a continuous strictly increasing bijection phi of [0, 1]."""

    def __init__(self, base: AnalyticCdf, transform, inverse, label: str = ""):
        self.base = base
        self.transform = transform
        self.inverse = inverse
        self.lower_end = base.lower_end
        self.upper_end = base.upper_end
        self.label = label or f"conditional({base.label})"

    def _cdf(self, y):
        return self.transform(self.base._cdf(y))

    def _left(self, y):
        return self.transform(self.base._left(y))

    def _qleft(self, u):
        return self.base.quantile_left(np.clip(self.inverse(u), 0.0, 1.0))

    def _qright(self, u):
        return self.base.quantile_right(np.clip(self.inverse(u), 0.0, 1.0))

    def support(self):
        return self.base.support()

    @property
    def atoms(self):
        out = []
        for x, _ in self.base.atoms:
            hi = float(self.transform(self.base.evaluate(x)))
            lo = float(self.transform(self.base.left_limit(x)))
            out.append((x, hi - lo))
        return tuple(out)


def conditional_pair(F: AnalyticCdf, q: float = 0.5, theta: float = 1.0,
                     copula=None) -> tuple[ConditionalCdf, ConditionalCdf]:
    """(F_{Y|D=0}, F_{Y|D=1}) generated from marginal F and a copula with D.

    ``copula`` defaults to Clayton(theta); pass IndependenceCopula() or
    GaussianCopula(rho) for the other families.
    """
    section = HorizontalSection(copula if copula is not None else ClaytonCopula(theta), q)
    ctrl = ConditionalCdf(F, section.control, section.control_inverse,
                          label=f"{F.label} | D=0")
    trt = ConditionalCdf(F, section.treated, section.treated_inverse,
                         label=f"{F.label} | D=1")
    return ctrl, trt
