"""Analytic data-generating processes with a known counterfactual.

A DGP fixes the period-t marginal of the untreated outcome and a copula
linking it to group membership. The four cells are then

    g0 = F_{Y00|D=0}, h0 = F_{Y00|D=1}, g1 = F_{Y10|D=0}, truth = F_{Y10|D=1}

all computed in closed form, so bounds built from (g0, g1, h0) can be
checked against ``truth`` without sampling noise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..stepdist import EvaluableCdf
from .copula import ClaytonCopula, GaussianCopula, HorizontalSection, IndependenceCopula
from .marginals import (
    AnalyticCdf,
    Bunching,
    Chi2,
    ConditionalCdf,
    LeftCensored,
    Normal,
    Poisson,
    left_censored_chi2,
    right_censored_chi2,
)
from .special import std_normal_cdf

__all__ = [
    "FAMILIES",
    "DgpSpec",
    "AnalyticDgp",
    "build",
    "marginal",
    "analytic_grid",
    "sample",
    "rng_for",
    "example_presets",
]

# family -> (required parameters, defaulted parameters)
FAMILIES = {
    "poisson": (("lam0", "lam1"), {}),
    "chi2": (("k0", "k1"), {}),
    "left_censored_chi2": (("c0", "c1", "k0", "k1"), {}),
    "right_censored_chi2": (("c0", "c1", "k0", "k1"), {}),
    "bunching_normal": (("c0", "w0", "b0", "c1", "w1", "b1"),
                        {"mu0": 0.0, "sigma0": 1.0, "mu1": 0.0, "sigma1": 1.0}),
    "roy_gaussian": (("sigma0", "sigma1", "rho0", "rho1"), {"delta": 0.0}),
    "censored_roy": (("sigma0", "sigma1", "rho0", "rho1", "wmin0", "wmin1"),
                     {"delta": 0.0, "psi": 0.0}),
}

ROY_FAMILIES = ("roy_gaussian", "censored_roy")
COPULAS = ("clayton", "independence")


@dataclass(frozen=True)
class DgpSpec:
    """Family tag, its parameters, and the copula with group membership.

    ``q`` and ``copula`` are ignored by the Roy families, where the model
    itself fixes both.
    """

    family: str
    params: dict = field(default_factory=dict)
    q: float = 0.5
    theta: float = 1.0
    copula: str = "clayton"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown DGP family {self.family!r}; choose from {sorted(FAMILIES)}")
        required, defaults = FAMILIES[self.family]
        params = {k: float(v) for k, v in defaults.items()}
        for key, val in self.params.items():
            if key not in required and key not in defaults:
                raise ValueError(f"{self.family} has no parameter {key!r}")
            params[key] = float(val)
        missing = [k for k in required if k not in params]
        if missing:
            raise ValueError(f"{self.family} is missing parameters {missing}")
        object.__setattr__(self, "params", params)
        if self.copula not in COPULAS:
            raise ValueError(f"copula must be one of {COPULAS}")
        if not 0.0 < self.q < 1.0:
            raise ValueError("q must lie in (0, 1)")
        if self.copula == "clayton" and not self.theta > 0:
            raise ValueError("Clayton parameter must be positive")
        _validate(self.family, params)

    @property
    def effective_q(self) -> float:
        if self.family == "roy_gaussian":
            return 0.5
        if self.family == "censored_roy":
            return float(std_normal_cdf(self.params["psi"]))
        return self.q


def _validate(family: str, p: dict) -> None:
    def need(cond, msg):
        if not cond:
            raise ValueError(f"{family}: {msg}")

    if family == "poisson":
        need(p["lam0"] > 0 and p["lam1"] > 0, "Poisson means must be positive")
    if family in ("chi2", "left_censored_chi2", "right_censored_chi2"):
        need(p["k0"] >= 1 and p["k1"] >= 1, "degrees of freedom must be at least 1")
    if family in ("left_censored_chi2", "right_censored_chi2"):
        need(p["c0"] > 0 and p["c1"] > 0, "censoring points must be positive")
    if family == "bunching_normal":
        for t in "01":
            need(p["sigma" + t] > 0, "sigma must be positive")
            need(p["c" + t] < p["w" + t], "bunching window needs c < w")
            need(0.0 <= p["b" + t] <= 1.0, "bunching share must lie in [0, 1]")
    if family in ROY_FAMILIES:
        need(p["sigma0"] > 0 and p["sigma1"] > 0, "sigma must be positive")
        for key in ("rho0", "rho1", "delta"):
            need(abs(p[key]) < 1, f"|{key}| must be below 1")
        need(np.linalg.eigvalsh(roy_correlation(p)).min() >= -1e-12,
             "latent covariance matrix is not positive semidefinite")
    if family == "censored_roy":
        need(p["wmin1"] > p["wmin0"], "the new floor must exceed the old one")


def roy_correlation(p: dict) -> np.ndarray:
    """Correlation matrix of (U0, U1, eta)."""
    return np.array([[1.0, p["delta"], p["rho0"]],
                     [p["delta"], 1.0, p["rho1"]],
                     [p["rho0"], p["rho1"], 1.0]])


def marginal(spec: DgpSpec, t: int) -> AnalyticCdf:
    """Marginal CDF of the untreated outcome in period t."""
    if t not in (0, 1):
        raise ValueError("period must be 0 or 1")
    p, s = spec.params, str(t)
    fam = spec.family
    if fam == "poisson":
        return Poisson(p["lam" + s])
    if fam == "chi2":
        return Chi2(p["k" + s])
    if fam == "left_censored_chi2":
        return left_censored_chi2(p["c" + s], p["k" + s])
    if fam == "right_censored_chi2":
        return right_censored_chi2(p["c" + s], p["k" + s])
    if fam == "bunching_normal":
        return Bunching(p["mu" + s], p["sigma" + s], p["c" + s], p["w" + s], p["b" + s])
    if fam == "roy_gaussian":
        return Normal(0.0, p["sigma" + s])
    # censored_roy: both untreated periods sit under the old floor
    return LeftCensored(Normal(0.0, p["sigma" + s]), p["wmin0"])


def _copula(spec: DgpSpec, t: int):
    if spec.family in ROY_FAMILIES:
        return GaussianCopula(spec.params["rho" + str(t)])
    if spec.copula == "independence":
        return IndependenceCopula()
    return ClaytonCopula(spec.theta)


class AnalyticDgp:
    """Closed-form cells of a DGP; ``truth`` is the counterfactual F_{Y10|D=1}."""

    def __init__(self, spec: DgpSpec):
        self.spec = spec
        self.q = spec.effective_q
        self.p = 1.0 - self.q
        self.marginals = (marginal(spec, 0), marginal(spec, 1))
        self.sections = tuple(HorizontalSection(_copula(spec, t), self.q) for t in (0, 1))
        cells = []
        for t in (0, 1):
            F, sec = self.marginals[t], self.sections[t]
            cells.append((
                ConditionalCdf(F, sec.control, sec.control_inverse, label=f"Y{t}0 | D=0"),
                ConditionalCdf(F, sec.treated, sec.treated_inverse, label=f"Y{t}0 | D=1"),
            ))
        (self.g0, self.h0), (self.g1, self.truth) = cells

    @property
    def cells(self) -> dict:
        return {"g0": self.g0, "g1": self.g1, "h0": self.h0, "truth": self.truth}

    def grid(self, n: int = 2001) -> np.ndarray:
        return analytic_grid(list(self.cells.values()), n=n)

    def horizontal_copula(self, t: int, u):
        """q F_{Yt0|D=0}(Q^-_{Yt0}(u)), recovered from the period-t cells."""
        g = (self.g0, self.g1)[t]
        return self.q * np.asarray(g.evaluate(self.marginals[t].quantile_left(u)))

    def point_identified(self, y, tol: float = 1e-12) -> np.ndarray:
        """Where g1(y) lies in the closed range of g0, so the bounds collapse."""
        return np.asarray(self.g0.in_range(np.asarray(self.g1.evaluate(y)), tol=tol))

    def __repr__(self):
        return f"AnalyticDgp({self.spec.family}, {self.spec.params})"


def build(spec: DgpSpec) -> AnalyticDgp:
    return AnalyticDgp(spec)


def analytic_grid(cells, n: int = 2001, tail: float = 1e-6, closing: float = 1e-14) -> np.ndarray:
    """Evaluation grid for analytic cells.

    ``n`` equispaced points between the smallest ``tail`` quantile and the
    largest ``1 - tail`` quantile across cells, every atom in that span, and
    one closing point far enough out that every cell is within ``closing``
    of 1 there.
    """
    lo = min(float(F.quantile_left(tail)) for F in cells)
    hi = max(float(F.quantile_left(1.0 - tail)) for F in cells)
    end = max(float(F.quantile_left(1.0 - closing)) for F in cells)
    pts = [np.linspace(lo, hi, n)]
    for F in cells:
        atoms = [x for x, m in getattr(F, "atoms", ()) if m > 0 and lo <= x <= end]
        pts.append(np.asarray(atoms, dtype=float))
    pts.append(np.array([max(end, hi)]))
    out = np.unique(np.concatenate(pts))
    return out[np.isfinite(out)]


def rng_for(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator; (seed, stream) pairs give independent reproducible streams."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(stream)])))


def sample(F: EvaluableCdf, n: int, seed: int, stream: int = 0) -> np.ndarray:
    """n inverse-transform draws Q^-(U)."""
    if n < 1:
        raise ValueError("sample size must be positive")
    u = rng_for(seed, stream).random(n)
    u[u == 0.0] = np.nextafter(0.0, 1.0)
    return np.asarray(F.quantile_left(u), dtype=float)


def example_presets() -> dict:
    """Named parameterizations of the numerical examples, Clayton theta = 1, q = 0.5."""
    return {
        "poisson": DgpSpec("poisson", {"lam0": 1, "lam1": 3}),
        "left_censored_53": DgpSpec("left_censored_chi2", {"c0": 5, "c1": 5, "k0": 5, "k1": 3}),
        "left_censored_35": DgpSpec("left_censored_chi2", {"c0": 5, "c1": 5, "k0": 3, "k1": 5}),
        "right_censored": DgpSpec("right_censored_chi2", {"c0": 5, "c1": 10, "k0": 3, "k1": 5}),
        "bunching": DgpSpec("bunching_normal", {"c0": 0.5, "w0": 1, "b0": 0.25,
                                                "c1": 2.5, "w1": 3, "b1": 0.75}),
    }
