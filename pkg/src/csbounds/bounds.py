"""Bounds on the counterfactual CDF F_{Y10|D=1}.

With the four cells

    g0 = F_{Y0|D=0}   g1 = F_{Y1|D=0}   h0 = F_{Y0|D=1}   (h1 = F_{Y1|D=1})

the copula-stability bounds at each t in the support of g1, with u = g1(t), are

    raw_ub(t) = h0(Q^-_{g0}(u))          raw_lb(t) = h0(Q^+_{g0}(u) -)

and the reported bound CDFs are right-continuous running maxima of these
values over support points <= y, with -inf carrying the value 0.

Cells can be any :class:`EvaluableCdf`. For step cells the evaluation
support is read off g1; analytic cells need an explicit grid, which is
intersected with the support of g1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .stepdist import (
    TERMINAL_TOL,
    EvaluableCdf,
    StepCdf,
    quantile_left_on_support,
    quantile_right_on_support,
)

__all__ = [
    "GroupedSample",
    "BoundsPair",
    "DistDidEstimate",
    "SupportReport",
    "raw_cs_values",
    "envelope",
    "cs_bounds",
    "cic_point_estimate",
    "ai2006_discrete_bounds",
    "dist_did",
    "check_support_condition",
    "SUPPORT_TOL",
    "CROSSING_TOL",
]

#: absolute tolerance when matching outcome values across cells
SUPPORT_TOL = 1e-9
#: lb may exceed ub by this much before a crossing is reported
CROSSING_TOL = 1e-12
#: DistDiD values may leave [0, 1] or dip by this much before it counts
VIOLATION_TOL = 1e-12


@dataclass(frozen=True)
class GroupedSample:
    """The observed cells and the treated share p = P(D=1)."""

    g0: EvaluableCdf
    g1: EvaluableCdf
    h0: EvaluableCdf
    p: float
    h1: EvaluableCdf | None = None
    counts: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise ValueError("treated share p must lie strictly between 0 and 1")
        for name in ("g0", "g1", "h0"):
            if not isinstance(getattr(self, name), EvaluableCdf):
                raise TypeError(f"{name} must be an EvaluableCdf")
        if self.h1 is not None and not isinstance(self.h1, EvaluableCdf):
            raise TypeError("h1 must be an EvaluableCdf")

    @property
    def q(self) -> float:
        return 1.0 - self.p

    def mapped(self, fn) -> "GroupedSample":
        """Same sample after a strictly increasing transform of every outcome."""
        cells = {k: getattr(self, k).mapped(fn) for k in ("g0", "g1", "h0")}
        h1 = self.h1.mapped(fn) if self.h1 is not None else None
        return GroupedSample(p=self.p, h1=h1, counts=dict(self.counts), **cells)


@dataclass(frozen=True)
class SupportReport:
    """Whether support(h0) lies in support(g0); the post period is untestable."""

    passed: bool
    offending: tuple = ()
    post_period: str = "assumed"
    tol: float = SUPPORT_TOL

    def as_dict(self) -> dict:
        return {"t0": "pass" if self.passed else "fail", "t1": self.post_period,
                "offending": [float(x) for x in self.offending], "tol": self.tol}


@dataclass(frozen=True)
class BoundsPair:
    """Lower and upper bound CDFs plus the arrays they were built from.

    ``lb_values`` / ``ub_values`` are the envelopes at ``eval_points``
    before the terminal value is pinned to 1.
    """

    lb: StepCdf
    ub: StepCdf
    eval_points: np.ndarray
    raw_lb: np.ndarray
    raw_ub: np.ndarray
    lb_values: np.ndarray
    ub_values: np.ndarray
    diagnostics: dict

    @property
    def crossings(self) -> list:
        return self.diagnostics["crossings"]

    @property
    def has_violations(self) -> bool:
        d = self.diagnostics
        support_ok = d.get("support") is None or d["support"].passed
        return bool(d["crossings"] or d["incomplete"] or not support_ok)

    def width(self) -> np.ndarray:
        return self.ub_values - self.lb_values


@dataclass(frozen=True)
class DistDidEstimate:
    points: np.ndarray
    values: np.ndarray
    monotone_violations: list
    rearranged: StepCdf

    @property
    def rearranged_values(self) -> np.ndarray:
        return np.asarray(self.rearranged.evaluate(self.points))


def _support_points(F: EvaluableCdf, grid) -> np.ndarray:
    if grid is None:
        if not isinstance(F, StepCdf):
            raise ValueError("analytic cells need an explicit evaluation grid")
        return np.asarray(F.points, dtype=float)
    grid = np.unique(np.asarray(grid, dtype=float))
    grid = grid[np.isfinite(grid)]
    return grid[F.in_support(grid)]


def raw_cs_values(sample: GroupedSample, grid=None):
    """Pre-envelope bound values on the support of g1.

    Returns ``(points, raw_lb, raw_ub)``.
    """
    t = _support_points(sample.g1, grid)
    u = np.clip(np.asarray(sample.g1.evaluate(t), dtype=float), 0.0, 1.0)
    raw_ub = np.asarray(sample.h0.evaluate(sample.g0.quantile_left(u)), dtype=float)
    raw_lb = np.asarray(sample.h0.left_limit(sample.g0.quantile_right(u)), dtype=float)
    return t, raw_lb, raw_ub


def _running_max(raw) -> np.ndarray:
    raw = np.asarray(raw, dtype=float)
    if np.any(raw < -TERMINAL_TOL) or np.any(raw > 1.0 + TERMINAL_TOL):
        raise ValueError("raw bound values must lie in [0, 1]")
    return np.maximum.accumulate(np.clip(raw, 0.0, 1.0)) if raw.size else raw


def _step_from_values(points, values) -> StepCdf:
    """StepCdf whose value at each point is ``values`` (already nondecreasing, last = 1)."""
    jump = np.diff(values, prepend=0.0) > 0
    return StepCdf(points[jump], values[jump])


def _pinned(points, values):
    # the last value is the total mass; pin it to exactly 1
    complete = bool(values.size and values[-1] >= 1.0 - TERMINAL_TOL)
    out = values.copy()
    if out.size:
        out[-1] = 1.0
    return out, complete


def envelope(points, raw) -> StepCdf:
    """Right-continuous running maximum of ``raw`` over ascending ``points``."""
    points = np.asarray(points, dtype=float)
    if points.size == 0:
        raise ValueError("empty evaluation support")
    if np.any(np.diff(points) <= 0):
        raise ValueError("points must be strictly ascending")
    values, _ = _pinned(points, _running_max(raw))
    return _step_from_values(points, values)


def _crossings(points, lb, ub, tol: float = CROSSING_TOL) -> list:
    bad = lb > ub + tol
    out = []
    i = 0
    while i < bad.size:
        if not bad[i]:
            i += 1
            continue
        j = i
        while j + 1 < bad.size and bad[j + 1]:
            j += 1
        out.append({"start": float(points[i]), "end": float(points[j]),
                    "max_gap": float(np.max(lb[i:j + 1] - ub[i:j + 1]))})
        i = j + 1
    return out


def _assemble(points, raw_lb, raw_ub, support=None) -> BoundsPair:
    lb_vals = _running_max(raw_lb)
    ub_vals = _running_max(raw_ub)
    lb_pin, lb_ok = _pinned(points, lb_vals)
    ub_pin, ub_ok = _pinned(points, ub_vals)
    incomplete = []
    if not lb_ok:
        incomplete.append({"bound": "lb", "terminal": float(lb_vals[-1])})
    if not ub_ok:
        incomplete.append({"bound": "ub", "terminal": float(ub_vals[-1])})
    diagnostics = {
        "crossings": _crossings(points, lb_vals, ub_vals),
        "incomplete": incomplete,
        "support": support,
    }
    for arr in (points, raw_lb, raw_ub, lb_vals, ub_vals):
        arr.flags.writeable = False
    return BoundsPair(
        lb=_step_from_values(points, lb_pin),
        ub=_step_from_values(points, ub_pin),
        eval_points=points,
        raw_lb=raw_lb,
        raw_ub=raw_ub,
        lb_values=lb_vals,
        ub_values=ub_vals,
        diagnostics=diagnostics,
    )


def cs_bounds(sample: GroupedSample, grid=None) -> BoundsPair:
    """Copula-stability bounds with crossing, completeness and support diagnostics.

    Violations are reported in ``diagnostics``, never raised.
    """
    support = check_support_condition(sample)
    points, raw_lb, raw_ub = raw_cs_values(sample, grid)
    if points.size == 0:
        raise ValueError("no evaluation points in the support of g1")
    return _assemble(points, raw_lb, raw_ub, support)


def cic_point_estimate(sample: GroupedSample, grid=None) -> StepCdf:
    """Changes-in-changes estimate of F_{Y10|D=1}; identical to the CS upper bound.

    It point-identifies the counterfactual when the control outcome is
    continuous with a strictly increasing CDF.
    """
    points, _, raw_ub = raw_cs_values(sample, grid)
    return envelope(points, raw_ub)


def _interval_quantile_left(F: EvaluableCdf, u, intervals) -> np.ndarray:
    """inf {x in S u {+inf}: F(x) >= u} for S a union of closed intervals."""
    lo = np.array([a for a, _ in intervals], dtype=float)
    hi = np.array([b for _, b in intervals], dtype=float)
    ell = np.asarray(F.quantile_left(u), dtype=float)[..., None]
    cand = np.where(hi >= ell, np.maximum(lo, ell), np.inf)
    return cand.min(axis=-1)


def _interval_quantile_right(F: EvaluableCdf, u, intervals) -> np.ndarray:
    """sup {x in S u {-inf}: F(x) <= u} for S a union of closed intervals."""
    lo = np.array([a for a, _ in intervals], dtype=float)
    hi = np.array([b for _, b in intervals], dtype=float)
    u = np.asarray(u, dtype=float)
    r = np.asarray(F.quantile_right(u), dtype=float)
    closed = (np.asarray(F.evaluate(r)) <= u)[..., None]
    r = r[..., None]
    cand = np.where(lo < r, np.minimum(hi, r), -np.inf)
    cand = np.where((lo == r) & closed, r, cand)
    return cand.max(axis=-1)


def ai2006_discrete_bounds(sample: GroupedSample, grid=None) -> BoundsPair:
    """Discrete-outcome bounds using quantiles restricted to the support of g0.

    The lower bound evaluates h0 at the restricted right quantile itself,
    without a left limit.
    """
    t = _support_points(sample.g1, grid)
    u = np.clip(np.asarray(sample.g1.evaluate(t), dtype=float), 0.0, 1.0)
    g0 = sample.g0
    if isinstance(g0, StepCdf):
        qlo = quantile_left_on_support(g0, u, g0.points)
        qhi = quantile_right_on_support(g0, u, g0.points)
    else:
        ivals = g0.support()
        qlo = _interval_quantile_left(g0, u, ivals)
        qhi = _interval_quantile_right(g0, u, ivals)
    raw_ub = np.asarray(sample.h0.evaluate(qlo), dtype=float)
    raw_lb = np.asarray(sample.h0.evaluate(qhi), dtype=float)
    return _assemble(t, raw_lb, raw_ub, check_support_condition(sample))


def _union_points(sample: GroupedSample, grid) -> np.ndarray:
    if grid is not None:
        g = np.unique(np.asarray(grid, dtype=float))
        return g[np.isfinite(g)]
    cells = (sample.h0, sample.g0, sample.g1)
    if not all(isinstance(F, StepCdf) for F in cells):
        raise ValueError("analytic cells need an explicit evaluation grid")
    return np.unique(np.concatenate([F.points for F in cells]))


def dist_did(sample: GroupedSample, grid=None) -> DistDidEstimate:
    """Distributional DiD: h0 + g1 - g0, with its CDF violations and a rearranged CDF.

    The rearrangement clamps to [0, 1] and takes running maxima; the raw
    values and the list of violations are always returned alongside it.
    """
    pts = _union_points(sample, grid)
    # grouped so that g0 == g1 returns h0 exactly
    raw = np.asarray(sample.h0.evaluate(pts), dtype=float) + (
        np.asarray(sample.g1.evaluate(pts), dtype=float)
        - np.asarray(sample.g0.evaluate(pts), dtype=float))
    violations = []
    for i, v in enumerate(raw):
        if v < -VIOLATION_TOL:
            violations.append({"kind": "below_zero", "start": float(pts[i]),
                               "end": float(pts[i]), "magnitude": float(-v)})
        elif v > 1.0 + VIOLATION_TOL:
            violations.append({"kind": "above_one", "start": float(pts[i]),
                               "end": float(pts[i]), "magnitude": float(v - 1.0)})
        if i and v < raw[i - 1] - VIOLATION_TOL:
            violations.append({"kind": "decrease", "start": float(pts[i - 1]),
                               "end": float(pts[i]), "magnitude": float(raw[i - 1] - v)})
    vals = np.maximum.accumulate(np.clip(raw, 0.0, 1.0))
    vals[-1] = 1.0
    pts.flags.writeable = False
    raw.flags.writeable = False
    return DistDidEstimate(pts, raw, violations, _step_from_values(pts, vals))


def check_support_condition(sample: GroupedSample, tol: float = SUPPORT_TOL) -> SupportReport:
    """Test support(h0) within support(g0) up to ``tol`` on outcome values."""
    g0, h0 = sample.g0, sample.h0
    if isinstance(h0, StepCdf):
        inside = np.asarray(g0.in_support(h0.points, tol=tol))
        bad = h0.points[~inside]
        return SupportReport(bad.size == 0, tuple(float(x) for x in bad), tol=tol)
    bad = []
    g_ivals = g0.support()
    for lo, hi in h0.support():
        if lo == hi:
            ok = bool(g0.in_support(lo, tol=tol))
        else:
            ok = any(a - tol <= lo and hi <= b + tol for a, b in g_ivals)
        if not ok:
            bad.append(lo)
    return SupportReport(not bad, tuple(bad), tol=tol)
