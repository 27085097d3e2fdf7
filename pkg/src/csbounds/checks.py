"""Named invariant checks behind the ``validate`` command."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bounds import GroupedSample, check_support_condition, cic_point_estimate, cs_bounds, dist_did
from .stepdist import TERMINAL_TOL, StepCdf, from_samples

__all__ = ["Check", "step_checks", "sample_checks", "FIXTURES", "fixture"]


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def _first_bad(mask) -> str:
    idx = np.flatnonzero(~np.asarray(mask, dtype=bool))
    return "" if idx.size == 0 else f"first failure at index {int(idx[0])}"


def step_checks(points, cumprobs, prefix: str = "") -> list:
    """Invariants of a step CDF given as raw arrays; later checks need the earlier ones."""
    pts = np.asarray(points, dtype=float).reshape(-1)
    cp = np.asarray(cumprobs, dtype=float).reshape(-1)
    out = []

    def add(name, ok, detail=""):
        out.append(Check(prefix + name, bool(ok), detail))
        return bool(ok)

    shape_ok = add("same_length", pts.shape == cp.shape and pts.size > 0,
                   f"{pts.size} points, {cp.size} cumprobs")
    if not shape_ok:
        return out
    ok = add("points_finite", np.all(np.isfinite(pts)), _first_bad(np.isfinite(pts)))
    ok &= add("points_ascending", np.all(np.diff(pts) > 0), _first_bad(np.diff(pts) > 0))
    ok &= add("cumprobs_in_unit", np.all((cp > 0) & (cp <= 1 + TERMINAL_TOL)),
              _first_bad((cp > 0) & (cp <= 1 + TERMINAL_TOL)))
    ok &= add("cumprobs_ascending", np.all(np.diff(cp) > 0), _first_bad(np.diff(cp) > 0))
    ok &= add("terminal_one", abs(cp[-1] - 1.0) <= TERMINAL_TOL, f"last cumprob {float(cp[-1])!r}")
    if not ok:
        return out
    F = StepCdf(pts, cp)
    u = np.unique(np.concatenate([np.linspace(0.0, 1.0, 101), F.cumprobs]))
    upper = np.asarray(F.evaluate(F.quantile_left(u))) >= u
    lower = np.asarray(F.left_limit(F.quantile_right(u))) <= u
    add("quantile_bracket", np.all(upper) and np.all(lower),
        _first_bad(upper) or _first_bad(lower))
    rng = F.cumprobs
    add("range_identity", np.all(np.asarray(F.evaluate(F.quantile_left(rng))) == rng),
        _first_bad(np.asarray(F.evaluate(F.quantile_left(rng))) == rng))
    ql, qr = np.asarray(F.quantile_left(u)), np.asarray(F.quantile_right(u))
    add("quantiles_monotone", np.all(np.diff(ql) >= 0) and np.all(np.diff(qr) >= 0))
    return out


def _cdf_values_ok(values) -> bool:
    v = np.asarray(values)
    return bool(np.all(np.diff(v) >= 0) and v.size and v[0] >= 0 and v[-1] <= 1 + TERMINAL_TOL)


def sample_checks(sample: GroupedSample) -> list:
    """Cell invariants plus bound-level invariants for a step-cell sample."""
    out = []
    for name in ("g0", "g1", "h0", "h1"):
        F = getattr(sample, name)
        if F is not None:
            out += step_checks(F.points, F.cumprobs, prefix=f"{name}.")
    sup = check_support_condition(sample)
    out.append(Check("support_condition", sup.passed,
                     "" if sup.passed else f"h0 points outside g0 support: {list(sup.offending)[:5]}"))
    b = cs_bounds(sample)
    out.append(Check("lb_is_cdf", _cdf_values_ok(b.lb_values)))
    out.append(Check("ub_is_cdf", _cdf_values_ok(b.ub_values)))
    out.append(Check("bounds_complete", not b.diagnostics["incomplete"],
                     str(b.diagnostics["incomplete"]) if b.diagnostics["incomplete"] else ""))
    cr = b.diagnostics["crossings"]
    out.append(Check("no_crossing", not cr, f"{len(cr)} crossing interval(s), first {cr[0]}" if cr else ""))
    cic = cic_point_estimate(sample)
    out.append(Check("cic_equals_ub", np.array_equal(cic.points, b.ub.points)
                     and np.array_equal(cic.cumprobs, b.ub.cumprobs)))
    doubled = cs_bounds(sample.mapped(lambda x: 2.0 * x))
    same = (np.array_equal(doubled.lb_values, b.lb_values)
            and np.array_equal(doubled.ub_values, b.ub_values)
            and np.array_equal(doubled.eval_points, 2.0 * b.eval_points))
    out.append(Check("monotone_transform_invariance", same))
    dd = dist_did(sample)
    v = dd.monotone_violations
    out.append(Check("distdid_is_cdf", not v, f"{len(v)} violation(s), first {v[0]}" if v else ""))
    return out


def _step(d: dict) -> StepCdf:
    return StepCdf(list(d), list(d.values()))


# small hand-built samples; "crossing" breaks the support condition on purpose
FIXTURES = {
    "stationary": dict(g0={1: 0.5, 2: 1.0}, g1={1: 0.5, 2: 1.0}, h0={1: 0.3, 2: 1.0},
                       h1={1: 0.2, 2: 1.0}),
    "two_point": dict(g0={1: 0.5, 2: 1.0}, g1={1: 0.25, 2: 1.0}, h0={1: 0.8, 2: 1.0},
                      h1={1: 0.5, 2: 1.0}),
    "crossing": dict(g0={1: 0.5, 3: 1.0}, g1={1: 0.5, 3: 1.0}, h0={2: 0.5, 3: 1.0},
                     h1={2: 0.5, 3: 1.0}),
}
CLEAN_FIXTURES = ("stationary", "two_point", "discrete_sample")


def fixture(name: str) -> GroupedSample:
    if name == "discrete_sample":
        rng = np.random.Generator(np.random.Philox(7))
        cells = {k: from_samples(rng.poisson(lam, 500)) for k, lam in
                 (("g0", 2.0), ("g1", 2.5), ("h0", 1.5), ("h1", 2.2))}
        if not check_support_condition(GroupedSample(p=0.5, **cells)).passed:
            raise RuntimeError("fixture draw broke the support condition")
        return GroupedSample(p=0.5, **cells)
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES) + ['discrete_sample']}")
    cells = {k: _step(v) for k, v in FIXTURES[name].items()}
    return GroupedSample(p=0.5, **cells)
