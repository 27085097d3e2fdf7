"""Rank-dependent social welfare and its treatment effects on the treated.

For a weight function omega on [0, 1],

    SW(F) = integral_0^1 omega(tau) Q^-_F(tau) dtau.

Q^-_F of a step CDF is constant on each (c_{i-1}, c_i] between consecutive
cumulative probabilities, and every supported omega is piecewise linear,
so each segment integrates in closed form. Nothing here uses quadrature.

Because omega >= 0 and a pointwise smaller CDF has pointwise larger
quantiles, SW is antitone in the CDF. Bounds [lb, ub] on the counterfactual
CDF therefore give SW(obs) - SW(lb) <= SWTT <= SW(obs) - SW(ub).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bounds import BoundsPair, DistDidEstimate, GroupedSample
from .stepdist import StepCdf

__all__ = [
    "WeightSpec",
    "Interval",
    "utilitarian",
    "gini",
    "dominance",
    "lower_tail_gini",
    "interquantile_gini",
    "sw",
    "mean",
    "gini_index",
    "truncate_lower",
    "truncate_range",
    "swtt_interval",
    "gini_decomposition",
    "Decomposition",
    "dominance_curve",
    "policy_shares",
    "policy_table",
    "swtt_report",
    "DEFAULT_TAILS",
]

DEFAULT_TAILS = (0.01, 0.025, 0.05, 0.10, 0.25, 0.50)


def _prob(x, name: str) -> Fraction:
    f = Fraction(x)
    if not 0 <= f <= 1:
        raise ValueError(f"{name} must lie in [0, 1]")
    return f


@dataclass(frozen=True)
class WeightSpec:
    """omega(tau) = c0 + c1 tau on each piece (a, b], zero elsewhere.

    Coefficients are stored as exact rationals of the float parameters.
    Build instances with the family constructors below.
    """

    family: str
    params: tuple
    pieces: tuple

    def integral(self) -> Fraction:
        """Exact integral of omega over [0, 1]."""
        return sum((c0 * (b - a) + c1 * (b * b - a * a) / 2 for a, b, c0, c1 in self.pieces),
                   Fraction(0))

    def __call__(self, tau):
        tau = np.asarray(tau, dtype=float)
        out = np.zeros(tau.shape)
        for a, b, c0, c1 in self.pieces:
            on = (tau > float(a)) & (tau <= float(b))
            out = np.where(on, float(c0) + float(c1) * tau, out)
        return out[()] if out.ndim == 0 else out

    def segment_weights(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        """integral of omega over each (lo[i], hi[i]]."""
        out = np.zeros(np.shape(lo))
        for a, b, c0, c1 in self.pieces:
            left = np.maximum(lo, float(a))
            right = np.minimum(hi, float(b))
            span = np.maximum(right - left, 0.0)
            out = out + span * (float(c0) + float(c1) * (left + right) / 2.0)
        return out

    @property
    def label(self) -> str:
        if not self.params:
            return self.family
        return f"{self.family}({', '.join(f'{float(p):g}' for p in self.params)})"

    def as_dict(self) -> dict:
        return {"family": self.family, "params": [float(p) for p in self.params]}


def utilitarian() -> WeightSpec:
    return WeightSpec("utilitarian", (), ((Fraction(0), Fraction(1), Fraction(1), Fraction(0)),))


def gini() -> WeightSpec:
    return WeightSpec("gini", (), ((Fraction(0), Fraction(1), Fraction(2), Fraction(-2)),))


def dominance(u: float) -> WeightSpec:
    """omega = 1{tau <= u}; SW is the generalized Lorenz ordinate at u."""
    f = _prob(u, "u")
    if f == 0:
        raise ValueError("u must be positive")
    return WeightSpec("dominance", (f,), ((Fraction(0), f, Fraction(1), Fraction(0)),))


def lower_tail_gini(u: float) -> WeightSpec:
    """omega = (2/u^2)(u - tau) on (0, u]."""
    f = _prob(u, "u")
    if f == 0:
        raise ValueError("u must be positive")
    return WeightSpec("lower_tail_gini", (f,), ((Fraction(0), f, 2 / f, -2 / (f * f)),))


def interquantile_gini(u_lo: float, u_hi: float) -> WeightSpec:
    """omega = 2/(u_hi - u_lo)^2 (u_hi - tau) on (u_lo, u_hi]."""
    lo, hi = _prob(u_lo, "u_lo"), _prob(u_hi, "u_hi")
    if not lo < hi:
        raise ValueError("need u_lo < u_hi")
    d2 = (hi - lo) ** 2
    return WeightSpec("interquantile_gini", (lo, hi), ((lo, hi, 2 * hi / d2, -2 / d2),))


def _range_mean_weight(lo: Fraction, hi: Fraction) -> WeightSpec:
    # uniform weight on (lo, hi]: SW is the mean of the range-truncated variable
    return WeightSpec("range_mean", (lo, hi), ((lo, hi, 1 / (hi - lo), Fraction(0)),))


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    tag: str = "sharp"

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"interval ends out of order: {self.lo} > {self.hi}")

    @classmethod
    def of(cls, a: float, b: float, tag: str = "sharp") -> "Interval":
        return cls(min(a, b), max(a, b), tag)

    def scaled(self, c: float) -> "Interval":
        return Interval.of(c * self.lo, c * self.hi, self.tag)

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= x <= self.hi + tol

    def as_list(self) -> list:
        return [self.lo, self.hi]


def _segments(F: StepCdf):
    cp = F.cumprobs
    return np.concatenate(([0.0], cp[:-1])), cp


def sw(F: StepCdf, w: WeightSpec) -> float:
    """SW_omega(F), exact per quantile segment."""
    if not isinstance(F, StepCdf):
        raise TypeError("sw needs a StepCdf")
    lo, hi = _segments(F)
    return math.fsum(F.points * w.segment_weights(lo, hi))


def mean(F: StepCdf) -> float:
    return F.mean()


def gini_index(F: StepCdf) -> float:
    """integral_0^1 (2 tau - 1) Q^-_F(tau) dtau / E[X].

    Warns when the support has negative values, where the index loses its
    usual reading.
    """
    m = F.mean()
    if m == 0:
        raise ValueError("Gini index undefined for a zero-mean distribution")
    if F.points[0] < 0:
        warnings.warn("Gini index on a support with negative values: nonstandard domain",
                      stacklevel=2)
    lo, hi = _segments(F)
    # integral of (2 tau - 1) over (lo, hi] is (hi - lo)(hi + lo - 1)
    return math.fsum(F.points * (hi - lo) * (hi + lo - 1.0)) / m


def truncate_lower(F: StepCdf, u: float) -> StepCdf:
    """Distribution of Q^-_F(V) for V uniform on [0, u]."""
    if not 0.0 < u <= 1.0:
        raise ValueError("u must lie in (0, 1]")
    if u == 1.0:
        return F
    cut = F.quantile_left(u)
    below = F.points < cut
    pts = np.append(F.points[below], cut)
    cp = np.append(F.cumprobs[below] / u, 1.0)
    return StepCdf(pts, cp)


def truncate_range(F: StepCdf, u_lo: float, u_hi: float) -> StepCdf:
    """Distribution of Q^-_F(V) for V uniform on [u_lo, u_hi]."""
    if not 0.0 <= u_lo < u_hi <= 1.0:
        raise ValueError("need 0 <= u_lo < u_hi <= 1")
    if u_lo == 0.0 and u_hi == 1.0:
        return F
    start = F.quantile_left(u_lo)
    cut = F.quantile_left(u_hi)
    mid = (F.points >= start) & (F.points < cut)
    vals = (F.cumprobs[mid] - u_lo) / (u_hi - u_lo)
    keep = vals > 0
    pts = np.append(F.points[mid][keep], cut)
    cp = np.append(vals[keep], 1.0)
    return StepCdf(pts, cp)


def _bound_cdfs(b: BoundsPair):
    if b.diagnostics.get("incomplete"):
        raise ValueError("bound CDF does not reach 1 on the evaluation support; "
                         "its upper quantiles are infinite")
    return b.lb, b.ub


def swtt_interval(F_obs: StepCdf, b: BoundsPair, w: WeightSpec) -> Interval:
    """[SW(obs) - SW(lb), SW(obs) - SW(ub)] for a nonnegative weight."""
    lb, ub = _bound_cdfs(b)
    base = sw(F_obs, w)
    return Interval.of(base - sw(lb, w), base - sw(ub, w), "sharp")


@dataclass(frozen=True)
class Decomposition:
    """SWTT = Delta_M - Delta_I with Delta_I bounded by interval arithmetic."""

    att: Interval
    swtt: Interval
    delta_m: Interval
    delta_i: Interval
    factor: float

    def as_dict(self) -> dict:
        return {"att": self.att.as_list(), "swtt": self.swtt.as_list(),
                "delta_m": self.delta_m.as_list(), "delta_i": self.delta_i.as_list(),
                "delta_i_tag": self.delta_i.tag, "factor": self.factor}


def _tail_objects(F_obs: StepCdf, tail):
    """(mean weight, Gini-type weight, truncated observed distribution)."""
    if tail is None:
        return utilitarian(), gini(), F_obs
    if np.ndim(tail) == 0:
        u = float(tail)
        return _dominance_mean(u), lower_tail_gini(u), truncate_lower(F_obs, u)
    lo, hi = (float(x) for x in tail)
    w = interquantile_gini(lo, hi)
    return _range_mean_weight(*w.params), w, truncate_range(F_obs, lo, hi)


def _dominance_mean(u: float) -> WeightSpec:
    # (1/u) 1{tau <= u}: SW is E[X^u]
    f = _prob(u, "u")
    if f == 0:
        raise ValueError("u must be positive")
    return _range_mean_weight(Fraction(0), f)


def gini_decomposition(F_obs: StepCdf, b: BoundsPair, tail=None) -> Decomposition:
    """Mean and inequality components of a Gini-type SWTT.

    ``tail`` is None for the whole distribution, a probability u for the
    lower tail, or a pair (u_lo, u_hi) for a quantile range. Delta_M is the
    ATT interval scaled by 1 - I_Gini of the observed (truncated)
    distribution; Delta_I is [Delta_M.lo - SWTT.hi, Delta_M.hi - SWTT.lo],
    which is valid but not sharp.
    """
    w_mean, w_gini, trunc = _tail_objects(F_obs, tail)
    att = swtt_interval(F_obs, b, w_mean)
    swtt = swtt_interval(F_obs, b, w_gini)
    factor = 1.0 - gini_index(trunc)
    dm = att.scaled(factor)
    di = Interval(dm.lo - swtt.hi, dm.hi - swtt.lo, "outerset")
    return Decomposition(att, swtt, dm, di, factor)


def _point_decomposition(F_obs: StepCdf, F_cf: StepCdf, tail=None) -> dict:
    w_mean, w_gini, trunc = _tail_objects(F_obs, tail)
    att = sw(F_obs, w_mean) - sw(F_cf, w_mean)
    swtt = sw(F_obs, w_gini) - sw(F_cf, w_gini)
    dm = att * (1.0 - gini_index(trunc))
    return {"att": att, "swtt": swtt, "delta_m": dm, "delta_i": dm - swtt}


def dominance_curve(F_obs: StepCdf, b: BoundsPair, grid) -> list:
    """Intervals for integral_0^u (Q_obs - Q_cf) with a verdict per u."""
    out = []
    for u in np.asarray(grid, dtype=float).reshape(-1):
        if not 0.0 < u <= 1.0:
            raise ValueError("dominance grid must lie in (0, 1]")
        iv = swtt_interval(F_obs, b, dominance(float(u)))
        verdict = "dominates" if iv.lo > 0 else "dominated" if iv.hi < 0 else "ambiguous"
        out.append({"u": float(u), "interval": iv, "verdict": verdict})
    return out


def policy_shares(F_obs, F_cf, mw: float, wbar: float, zero: float = 0.0) -> tuple:
    """(Delta_b, Delta_a, Delta_e): employment share changes below and above ``mw``.

    Delta_b compares the mass on (zero, mw], Delta_a the mass on (mw, wbar],
    and Delta_e = Delta_a + Delta_b.
    """
    if not zero < mw < wbar:
        raise ValueError("need zero < mw < wbar")
    o = [float(F_obs.evaluate(x)) for x in (zero, mw, wbar)]
    c = [float(F_cf.evaluate(x)) for x in (zero, mw, wbar)]
    db = (o[1] - o[0]) - (c[1] - c[0])
    da = (o[2] - o[1]) - (c[2] - c[1])
    return db, da, da + db


def policy_table(F_obs: StepCdf, b: BoundsPair, distdid: DistDidEstimate | None,
                 mw: float, wbar: float, zero: float = 0.0) -> dict:
    """Delta_b, Delta_a, Delta_e for each counterfactual, plus the CS interval of each."""
    if not zero < mw < wbar:
        raise ValueError("need zero < mw < wbar")
    o = [float(F_obs.evaluate(x)) for x in (zero, mw, wbar)]
    rows = {"observed": {"b": o[1] - o[0], "a": o[2] - o[1], "e": o[2] - o[0]}}
    cfs = {"lb": b.lb, "ub": b.ub}
    if distdid is not None:
        cfs["distdid"] = distdid.rearranged
    for name, F_cf in cfs.items():
        db, da, de = policy_shares(F_obs, F_cf, mw, wbar, zero)
        rows[name] = {"b": db, "a": da, "e": de}
    rows["cs"] = {k: Interval.of(rows["lb"][k], rows["ub"][k]).as_list() for k in "bae"}
    return rows


@dataclass
class SwttReport:
    rows: list = field(default_factory=list)
    dominance: list = field(default_factory=list)
    distdid_violations: list = field(default_factory=list)


def did_att(sample: GroupedSample) -> float | None:
    """Mean DiD: E[h1] - E[h0] - (E[g1] - E[g0])."""
    if sample.h1 is None:
        return None
    cells = (sample.h1, sample.h0, sample.g1, sample.g0)
    if not all(isinstance(F, StepCdf) for F in cells):
        return None
    m = [F.mean() for F in cells]
    return m[0] - m[1] - (m[2] - m[3])


def swtt_report(F_obs: StepCdf, b: BoundsPair, distdid: DistDidEstimate | None = None,
                tails=DEFAULT_TAILS, ranges=(), dominance_grid=None,
                sample: GroupedSample | None = None) -> SwttReport:
    """Table-shaped welfare summary: ATT and Gini SWTT overall, per tail u and per range."""
    rep = SwttReport()
    dd = distdid.rearranged if distdid is not None else None
    if distdid is not None:
        rep.distdid_violations = list(distdid.monotone_violations)
    specs = [("overall", None)] + [("tail", float(u)) for u in tails] + \
            [("range", (float(lo), float(hi))) for lo, hi in ranges]
    for kind, tail in specs:
        w_mean, w_gini, _ = _tail_objects(F_obs, tail)
        dec = gini_decomposition(F_obs, b, tail)
        point = _point_decomposition(F_obs, dd, tail) if dd is not None else None
        tail_out = tail if not isinstance(tail, tuple) else list(tail)
        mean_row = {"quantity": "mean", "scope": kind, "tail": tail_out,
                    "observed": sw(F_obs, w_mean), "cs": dec.att.as_list(), "cs_tag": dec.att.tag,
                    "distdid": point["att"] if point else None}
        if kind == "overall":
            mean_row["did"] = did_att(sample) if sample is not None else None
        gini_row = {"quantity": "gini", "scope": kind, "tail": tail_out,
                    "observed": sw(F_obs, w_gini), "cs": dec.swtt.as_list(),
                    "cs_tag": dec.swtt.tag, "distdid": point["swtt"] if point else None,
                    "delta_m": dec.delta_m.as_list(), "delta_i": dec.delta_i.as_list(),
                    "delta_i_tag": dec.delta_i.tag,
                    "distdid_delta_m": point["delta_m"] if point else None,
                    "distdid_delta_i": point["delta_i"] if point else None}
        rep.rows += [mean_row, gini_row]
    if dominance_grid is not None:
        rep.dominance = [{"u": r["u"], "interval": r["interval"].as_list(), "verdict": r["verdict"]}
                         for r in dominance_curve(F_obs, b, dominance_grid)]
    return rep
