"""Coverage experiments on analytic DGPs.

Analytic runs evaluate the bounds on exact cells and compare them with the
known counterfactual. Sampled runs draw each observed cell, build empirical
bounds, and check them against a band derived from the
Dvoretzky-Kiefer-Wolfowitz inequality: if every empirical cell is within
eps of its population CDF, then with v = g1(y)

    h0(Q^-_{g0}(v - 2 eps)) - eps  <=  sampled ub(y)  <=  h0(Q^-_{g0}(v + 2 eps)) + eps

and the same holds for lb with Q^+ and left limits. The probabilities are
clipped to [0, 1].
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .bounds import GroupedSample, ai2006_discrete_bounds, cs_bounds
from .dgp.models import AnalyticDgp, DgpSpec, build, sample
from .stepdist import from_samples

__all__ = [
    "analytic_coverage",
    "dkw_epsilon",
    "dkw_band",
    "sampled_sample",
    "sampled_check",
    "run_replications",
]

COVERAGE_TOL = 1e-9
CELLS = ("g0", "g1", "h0")


def analytic_coverage(dgp: AnalyticDgp, grid=None, tol: float = COVERAGE_TOL) -> dict:
    """Bounds on exact cells versus the true counterfactual at every grid point."""
    grid = dgp.grid() if grid is None else grid
    s = GroupedSample(dgp.g0, dgp.g1, dgp.h0, p=dgp.p)
    b = cs_bounds(s, grid)
    y = b.eval_points
    truth = np.asarray(dgp.truth.evaluate(y), dtype=float)
    lb = np.asarray(b.lb.evaluate(y))
    ub = np.asarray(b.ub.evaluate(y))
    below = lb - tol <= truth
    above = truth <= ub + tol
    pid = dgp.point_identified(y)
    width = ub - lb
    out = {
        "family": dgp.spec.family,
        "params": dict(dgp.spec.params),
        "n_points": int(y.size),
        "covered": bool(np.all(below & above)),
        "max_violation": float(max(np.max(lb - truth), np.max(truth - ub), 0.0)),
        "max_width": float(width.max()),
        "mean_width": float(width.mean()),
        "point_identified_points": int(pid.sum()),
        "point_identified_max_width": float(width[pid].max()) if pid.any() else 0.0,
        "crossings": b.diagnostics["crossings"],
    }
    if dgp.spec.family == "poisson":
        a = ai2006_discrete_bounds(s, grid)
        out["ai2006_max_diff"] = float(max(np.max(np.abs(a.lb_values - b.lb_values)),
                                           np.max(np.abs(a.ub_values - b.ub_values))))
    return out


def dkw_epsilon(n: int, alpha: float = 0.001) -> float:
    """Uniform band half-width: P(sup |F_n - F| > eps) <= alpha."""
    return math.sqrt(math.log(2.0 / alpha) / (2.0 * n))


def dkw_band(dgp: AnalyticDgp, y, eps: float) -> dict:
    """Band for sampled bound values at points y when each cell is within eps."""
    v = np.asarray(dgp.g1.evaluate(y), dtype=float)
    lo_v = np.clip(v - 2.0 * eps, 0.0, 1.0)
    hi_v = np.clip(v + 2.0 * eps, 0.0, 1.0)
    g0, h0 = dgp.g0, dgp.h0
    return {
        "ub_lo": np.asarray(h0.evaluate(g0.quantile_left(lo_v))) - eps,
        "ub_hi": np.asarray(h0.evaluate(g0.quantile_left(hi_v))) + eps,
        "lb_lo": np.asarray(h0.left_limit(g0.quantile_right(lo_v))) - eps,
        "lb_hi": np.asarray(h0.left_limit(g0.quantile_right(hi_v))) + eps,
    }


def sampled_sample(dgp: AnalyticDgp, n: int, seed: int, replication: int = 0) -> GroupedSample:
    """Empirical cells from n draws each; streams are (seed, 3 * replication + cell)."""
    draws = {name: sample(getattr(dgp, name), n, seed, 3 * replication + i)
             for i, name in enumerate(CELLS)}
    cells = {name: from_samples(x) for name, x in draws.items()}
    return GroupedSample(p=dgp.p, counts={k: n for k in CELLS}, **cells)


def sampled_check(dgp: AnalyticDgp, n: int, seed: int, replication: int = 0,
                  alpha: float = 0.001) -> dict:
    s = sampled_sample(dgp, n, seed, replication)
    b = cs_bounds(s)
    eps = dkw_epsilon(n, alpha)
    band = dkw_band(dgp, b.eval_points, eps)
    ub_ok = (band["ub_lo"] <= b.ub_values) & (b.ub_values <= band["ub_hi"])
    lb_ok = (band["lb_lo"] <= b.lb_values) & (b.lb_values <= band["lb_hi"])
    return {
        "family": dgp.spec.family,
        "replication": replication,
        "n": n,
        "eps": eps,
        "within_band": bool(np.all(ub_ok) and np.all(lb_ok)),
        "ub_outside": int((~ub_ok).sum()),
        "lb_outside": int((~lb_ok).sum()),
        "crossings": len(b.diagnostics["crossings"]),
        "max_width": float(np.max(b.ub_values - b.lb_values)),
    }


def _replication_task(args):
    spec, n, seed, rep, alpha = args
    return sampled_check(build(spec), n, seed, rep, alpha)


def run_replications(spec: DgpSpec, n: int, seed: int, replications: int = 1,
                     alpha: float = 0.001, workers: int = 1) -> list:
    """Sampled checks for replications 0..R-1, ordered by replication index."""
    tasks = [(spec, n, seed, r, alpha) for r in range(replications)]
    if workers <= 1 or replications <= 1:
        return [_replication_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_replication_task, tasks))
