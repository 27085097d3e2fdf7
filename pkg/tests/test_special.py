import math

import mpmath as mp
import numpy as np
import pytest
from scipy import stats

from csbounds.dgp.special import (
    bvn_cdf,
    bvn_cdf_half,
    chi2_cdf,
    chi2_ppf,
    inv_std_normal_cdf,
    poisson_cdf_table,
    reg_lower_gamma,
    std_normal_cdf,
)

NORMAL_TOL = 1e-12
GAMMA_RTOL = 1e-12
BVN_TOL = 1e-10

mp.mp.dps = 40


def test_normal_cdf_against_mpmath():
    xs = np.linspace(-8, 8, 161)
    got = std_normal_cdf(xs)
    want = np.array([float(mp.ncdf(x)) for x in xs])
    assert np.max(np.abs(got - want)) <= NORMAL_TOL
    assert std_normal_cdf(0.0) == 0.5


def test_normal_inverse_round_trip():
    u = np.linspace(1e-6, 1 - 1e-6, 101)
    assert np.allclose(std_normal_cdf(inv_std_normal_cdf(u)), u, rtol=0, atol=1e-14)


@pytest.mark.parametrize("s", [0.5, 1.0, 1.5, 2.5, 7.0])
def test_reg_lower_gamma_against_mpmath(s):
    # both sides of the usual s + 1 split between series and continued fraction
    for x in (0.01, 0.3, s, s + 1.0, 3.0 * s + 4.0):
        want = float(mp.gammainc(s, 0, x, regularized=True))
        assert float(reg_lower_gamma(s, x)) == pytest.approx(want, rel=GAMMA_RTOL)


def test_chi2_two_degrees_is_exponential():
    assert float(chi2_cdf(2.0, 2)) == pytest.approx(1 - math.exp(-1), rel=GAMMA_RTOL)


def test_chi2_quantile_round_trip():
    u = np.linspace(0.001, 0.999, 51)
    assert np.allclose(chi2_cdf(chi2_ppf(u, 3), 3), u, atol=1e-13)


@pytest.mark.parametrize("lam", [0.5, 1.0, 3.0, 10.0])
def test_poisson_table_against_scipy(lam):
    table = poisson_cdf_table(lam)
    k = np.arange(table.size)
    assert np.max(np.abs(table - stats.poisson.cdf(k, lam))) <= 1e-15
    assert 1.0 - table[-1] <= 1e-15


@pytest.mark.parametrize("rho", [-0.9, -0.3, 0.0, 0.5, 0.95])
def test_bvn_orthant_identity(rho):
    want = 0.25 + math.asin(rho) / (2 * math.pi)
    assert float(bvn_cdf(0.0, 0.0, rho)) == pytest.approx(want, abs=BVN_TOL)
    assert float(bvn_cdf_half(0.0, rho)) == pytest.approx(want, abs=BVN_TOL)


def _mp_bvn_half(x, rho):
    r = mp.sqrt(1 - rho * rho)
    return mp.quad(lambda s: mp.npdf(s) * mp.ncdf(-rho * s / r), [-mp.inf, x])


@pytest.mark.parametrize("rho", [-0.7, 0.25, 0.5, 0.9])
def test_bvn_half_against_mpmath_integral(rho):
    for x in (-4.0, -1.3, 0.0, 0.7, 3.5):
        want = float(_mp_bvn_half(mp.mpf(x), mp.mpf(rho)))
        assert float(bvn_cdf_half(x, rho)) == pytest.approx(want, abs=BVN_TOL)
        assert float(bvn_cdf(x, 0.0, rho)) == pytest.approx(want, abs=BVN_TOL)


def test_bvn_general_against_scipy():
    rho = 0.4
    mvn = stats.multivariate_normal(mean=[0, 0], cov=[[1, rho], [rho, 1]])
    for x, y in ((0.3, -0.5), (-1.0, 1.2), (2.0, 0.4)):
        assert float(bvn_cdf(x, y, rho)) == pytest.approx(mvn.cdf([x, y]), abs=1e-7)


def test_bvn_limits():
    assert float(bvn_cdf_half(math.inf, 0.3)) == 0.5
    assert float(bvn_cdf_half(-math.inf, 0.3)) == 0.0
    assert float(bvn_cdf(math.inf, 0.0, 0.3)) == 0.5


def test_domain_errors():
    with pytest.raises(ValueError):
        bvn_cdf_half(0.0, 1.0)
    with pytest.raises(ValueError):
        bvn_cdf(0.0, 0.0, -1.0)
    with pytest.raises(ValueError):
        reg_lower_gamma(0.0, 1.0)
    with pytest.raises(ValueError):
        chi2_cdf(1.0, -2)
