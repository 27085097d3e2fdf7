"""Finite step distributions and generalized quantile functions.

Every distribution in the package, empirical or analytic, satisfies the
:class:`EvaluableCdf` contract. Quantile functions map into the extended
reals; the two infinities are represented by IEEE ``-inf`` / ``+inf``, which
carry the required total order. No arithmetic is ever done on them: callers
only compare them or feed them back into ``evaluate`` / ``left_limit``, where
``F(-inf) = 0`` and ``F(+inf) = F(+inf-) = 1``.
"""

from __future__ import annotations

import abc
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "EvaluableCdf",
    "StepCdf",
    "from_samples",
    "quantile_left",
    "quantile_right",
    "quantile_left_on_support",
    "quantile_right_on_support",
    "left_limit",
    "cdf_range",
    "TERMINAL_TOL",
]

#: drift allowed between the accumulated total mass and 1
TERMINAL_TOL = 1e-12


def _as_output(arr, scalar_input):
    if scalar_input:
        return float(arr[()])
    return arr


def _check_probs(u):
    u = np.asarray(u, dtype=float)
    if np.any(~(u >= 0.0) | ~(u <= 1.0)):
        raise ValueError("probability arguments must lie in [0, 1]")
    return u


class EvaluableCdf(abc.ABC):
    """Behavioral contract shared by step and analytic distributions.

    Methods accept scalars or arrays and return the same shape.
    """

    @abc.abstractmethod
    def evaluate(self, y):
        """F(y), right-continuous."""

    @abc.abstractmethod
    def left_limit(self, y):
        """F(y-) = sup of F over arguments strictly below y."""

    @abc.abstractmethod
    def quantile_left(self, u):
        """inf {x in R u {+inf} : F(x) >= u}."""

    @abc.abstractmethod
    def quantile_right(self, u):
        """sup {x in R u {-inf} : F(x) <= u}."""

    @abc.abstractmethod
    def support(self):
        """Closed support as a tuple of ``(lo, hi)`` intervals; atoms have lo == hi."""

    def in_support(self, y, tol: float = 0.0):
        y = np.asarray(y, dtype=float)
        out = np.zeros(y.shape, dtype=bool)
        for lo, hi in self.support():
            out |= (y >= lo - tol) & (y <= hi + tol)
        return out

    def in_range(self, u, tol: float = 1e-12):
        """Whether u lies in the closure of the achieved CDF values.

        Uses the identity F(Q^-(u)) = u, which holds exactly on the range.
        """
        u = _check_probs(u)
        back = self.evaluate(self.quantile_left(u))
        return np.abs(np.asarray(back) - u) <= tol


@dataclass(frozen=True, eq=False)
class StepCdf(EvaluableCdf):
    """Right-continuous step CDF on finitely many jump points.

    ``points`` are strictly ascending, ``cumprobs`` strictly ascending in
    (0, 1] with the final entry exactly 1.
    """

    points: np.ndarray
    cumprobs: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=float).reshape(-1)
        cp = np.array(self.cumprobs, dtype=float).reshape(-1)
        if pts.size == 0:
            raise ValueError("a StepCdf needs at least one point")
        if pts.shape != cp.shape:
            raise ValueError("points and cumprobs differ in length")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite")
        if np.any(np.diff(pts) <= 0):
            raise ValueError("points must be strictly ascending")
        if np.any(np.diff(cp) <= 0):
            raise ValueError("cumprobs must be strictly ascending")
        if not cp[0] > 0:
            raise ValueError("cumprobs must be positive")
        if abs(cp[-1] - 1.0) > TERMINAL_TOL:
            raise ValueError(f"final cumprob is {cp[-1]!r}, not 1")
        cp[-1] = 1.0
        if cp.size > 1 and cp[-2] >= 1.0:
            raise ValueError("cumprobs must be strictly ascending")
        pts.flags.writeable = False
        cp.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "cumprobs", cp)

    def __len__(self):
        return self.points.size

    def __repr__(self):
        body = ", ".join(f"{x:g}: {c:.6g}" for x, c in zip(self.points[:6], self.cumprobs[:6]))
        more = ", ..." if len(self) > 6 else ""
        return f"StepCdf({{{body}{more}}})"

    @property
    def masses(self) -> np.ndarray:
        return np.diff(self.cumprobs, prepend=0.0)

    @property
    def _ext(self) -> np.ndarray:
        # cumprob reached after i points, i = 0..n
        return np.concatenate(([0.0], self.cumprobs))

    def evaluate(self, y):
        scalar = np.ndim(y) == 0
        y = np.asarray(y, dtype=float)
        idx = np.searchsorted(self.points, y, side="right")
        return _as_output(self._ext[idx], scalar)

    __call__ = evaluate

    def left_limit(self, y):
        scalar = np.ndim(y) == 0
        y = np.asarray(y, dtype=float)
        idx = np.searchsorted(self.points, y, side="left")
        return _as_output(self._ext[idx], scalar)

    def quantile_left(self, u):
        scalar = np.ndim(u) == 0
        u = _check_probs(u)
        idx = np.searchsorted(self.cumprobs, u, side="left")
        out = self.points[np.minimum(idx, len(self) - 1)].astype(float)
        out = np.where(u == 0.0, -np.inf, out)
        return _as_output(out, scalar)

    def quantile_right(self, u):
        scalar = np.ndim(u) == 0
        u = _check_probs(u)
        idx = np.searchsorted(self.cumprobs, u, side="right")
        out = np.where(idx >= len(self), np.inf,
                       self.points[np.minimum(idx, len(self) - 1)])
        return _as_output(out.astype(float), scalar)

    def support(self):
        return tuple((x, x) for x in self.points)

    def in_support(self, y, tol: float = 0.0):
        y = np.asarray(y, dtype=float)
        idx = np.searchsorted(self.points, y)
        lo = self.points[np.clip(idx - 1, 0, len(self) - 1)]
        hi = self.points[np.clip(idx, 0, len(self) - 1)]
        return (np.abs(y - lo) <= tol) | (np.abs(y - hi) <= tol)

    def cdf_range(self) -> np.ndarray:
        return np.concatenate(([0.0], self.cumprobs))

    def mean(self) -> float:
        """Expectation, accumulated over quantile segments."""
        return math.fsum(self.points * self.masses)

    def mapped(self, fn) -> "StepCdf":
        """Distribution of fn(X) for a strictly increasing fn."""
        return StepCdf(fn(self.points), self.cumprobs)


def from_samples(values, weights=None) -> StepCdf:
    """Weighted empirical CDF; duplicate values are merged.

    Cumulative probabilities are formed as cumulative raw weight divided by
    the total, so integer weights give correctly rounded rationals and equal
    fractions from different samples compare equal.
    """
    x = np.asarray(values, dtype=float).reshape(-1)
    if x.size == 0:
        raise ValueError("no sample values")
    if not np.all(np.isfinite(x)):
        raise ValueError("sample values must be finite")
    if weights is None:
        w = np.ones_like(x)
    else:
        w = np.asarray(weights, dtype=float).reshape(-1)
        if w.shape != x.shape:
            raise ValueError("weights and values differ in length")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise ValueError("weights must be finite and positive")
    pts, inv = np.unique(x, return_inverse=True)
    agg = np.bincount(inv.reshape(-1), weights=w, minlength=pts.size)
    total = math.fsum(agg)
    cum = np.cumsum(agg)
    cum[-1] = total
    return StepCdf(pts, cum / total)


def quantile_left(F: EvaluableCdf, u):
    return F.quantile_left(u)


def quantile_right(F: EvaluableCdf, u):
    return F.quantile_right(u)


def left_limit(F: EvaluableCdf, y):
    return F.left_limit(y)


def cdf_range(F: StepCdf) -> np.ndarray:
    return F.cdf_range()


def _support_values(F: EvaluableCdf, S):
    S = np.asarray(S, dtype=float).reshape(-1)
    if S.size == 0:
        raise ValueError("support set is empty")
    if np.any(np.diff(S) <= 0):
        raise ValueError("support set must be strictly ascending")
    return S, np.asarray(F.evaluate(S), dtype=float)


def quantile_left_on_support(F: EvaluableCdf, u, S):
    """inf {x in S u {+inf} : F(x) >= u} for a finite ascending S."""
    scalar = np.ndim(u) == 0
    u = _check_probs(u)
    S, vals = _support_values(F, S)
    # vals is nondecreasing, so the first qualifying index is a search
    idx = np.searchsorted(vals, u, side="left")
    out = np.where(idx >= S.size, np.inf, S[np.minimum(idx, S.size - 1)])
    return _as_output(out, scalar)


def quantile_right_on_support(F: EvaluableCdf, u, S):
    """sup {x in S u {-inf} : F(x) <= u} for a finite ascending S."""
    scalar = np.ndim(u) == 0
    u = _check_probs(u)
    S, vals = _support_values(F, S)
    idx = np.searchsorted(vals, u, side="right") - 1
    out = np.where(idx < 0, -np.inf, S[np.maximum(idx, 0)])
    return _as_output(out, scalar)
