import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from csbounds.stepdist import (
    StepCdf,
    cdf_range,
    from_samples,
    left_limit,
    quantile_left,
    quantile_left_on_support,
    quantile_right,
    quantile_right_on_support,
)

from conftest import step

F12 = step({1: 0.5, 2: 1.0})


def test_from_samples_counts_duplicates():
    F = from_samples([2, 1, 2])
    assert F.points.tolist() == [1, 2]
    assert F.cumprobs.tolist() == [1 / 3, 1.0]


def test_from_samples_single_weighted_atom():
    F = from_samples([5], weights=[7])
    assert F.points.tolist() == [5] and F.cumprobs.tolist() == [1.0]


def test_from_samples_normalizes_weights():
    assert from_samples([0, 1], weights=[1, 3]).cumprobs.tolist() == [0.25, 1.0]


@pytest.mark.parametrize("values, weights", [
    ([], None),
    ([1.0, math.nan], None),
    ([1.0, 2.0], [1.0, 0.0]),
    ([1.0, 2.0], [1.0, -1.0]),
    ([1.0, 2.0], [1.0, math.inf]),
    ([1.0, 2.0], [1.0]),
])
def test_from_samples_rejects_bad_input(values, weights):
    with pytest.raises(ValueError):
        from_samples(values, weights)


@pytest.mark.parametrize("points, cumprobs", [
    ([1, 1], [0.5, 1]),
    ([2, 1], [0.5, 1]),
    ([1, 2], [0.5, 0.5]),
    ([1, 2], [0.5, 0.9]),
    ([1, 2], [0.0, 1.0]),
    ([1, math.inf], [0.5, 1.0]),
    ([1], [0.5, 1.0]),
])
def test_stepcdf_rejects_invalid(points, cumprobs):
    with pytest.raises(ValueError):
        StepCdf(points, cumprobs)


def test_terminal_drift_within_tolerance_is_pinned():
    F = StepCdf([0, 1], [0.5, 1 - 1e-13])
    assert F.cumprobs[-1] == 1.0


def test_quantile_left_examples():
    assert quantile_left(F12, 0.5) == 1
    assert quantile_left(F12, 0.7) == 2
    assert quantile_left(F12, 0.0) == -math.inf


def test_quantile_right_examples():
    assert quantile_right(F12, 0.5) == 2
    assert quantile_right(F12, 0.3) == 1
    assert quantile_right(F12, 1.0) == math.inf


@pytest.mark.parametrize("u", [-0.1, 1.1, math.nan])
def test_quantiles_reject_out_of_range(u):
    with pytest.raises(ValueError):
        quantile_left(F12, u)
    with pytest.raises(ValueError):
        quantile_right(F12, u)


def test_on_support_quantiles_differ_from_real_line_versions():
    S = [1, 2]
    assert quantile_left_on_support(F12, 0.0, S) == 1
    assert quantile_left_on_support(F12, 0.5, S) == 1
    # F(1) = 0.5 > 0.4 and nothing in S lies below 1
    assert quantile_right_on_support(F12, 0.4, S) == -math.inf
    assert quantile_right(F12, 0.4) == 1


def test_left_limit_examples():
    assert left_limit(F12, 2) == 0.5
    assert left_limit(F12, -math.inf) == 0.0
    assert left_limit(F12, math.inf) == 1.0


def test_evaluate_at_infinities():
    assert F12.evaluate(-math.inf) == 0.0
    assert F12.evaluate(math.inf) == 1.0


def test_cdf_range_examples():
    assert cdf_range(F12).tolist() == [0.0, 0.5, 1.0]
    assert cdf_range(step({3: 1.0})).tolist() == [0.0, 1.0]
    assert cdf_range(step({0: 0.25, 1: 0.5, 2: 1.0})).tolist() == [0, 0.25, 0.5, 1]


@st.composite
def step_cdfs(draw):
    n = draw(st.integers(1, 12))
    pts = draw(st.lists(st.integers(-100, 100), min_size=n, max_size=n, unique=True))
    w = draw(st.lists(st.integers(1, 20), min_size=n, max_size=n))
    return from_samples(pts, w)


levels = st.one_of(st.sampled_from([0.0, 1.0]), st.floats(0.0, 1.0))


@settings(max_examples=300, deadline=None)
@given(step_cdfs(), levels)
def test_quantile_bracket(F, u):
    assert F.evaluate(F.quantile_left(u)) >= u
    assert F.left_limit(F.quantile_right(u)) <= u


@settings(max_examples=200, deadline=None)
@given(step_cdfs())
def test_range_identity_exact(F):
    r = F.cdf_range()[1:]
    assert np.array_equal(np.asarray(F.evaluate(F.quantile_left(r))), r)


@settings(max_examples=200, deadline=None)
@given(step_cdfs(), st.lists(levels, min_size=2, max_size=20))
def test_quantiles_monotone(F, us):
    u = np.sort(us)
    for q in (np.asarray(F.quantile_left(u)), np.asarray(F.quantile_right(u))):
        assert np.all(q[:-1] <= q[1:])


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=1, max_size=40),
       st.data())
def test_from_samples_round_trip(values, data):
    w = data.draw(st.lists(st.integers(1, 9), min_size=len(values), max_size=len(values)))
    F = from_samples(values, w)
    total = sum(w)
    for x in set(values):
        expect = sum(wi for v, wi in zip(values, w) if v <= x) / total
        assert F.evaluate(x) == expect


def test_atoms_at_shared_levels_compare_equal():
    # equal fractions from different samples must be bitwise equal
    a = from_samples([1, 2, 3, 4, 5, 6])
    b = from_samples([0, 0, 7, 7, 9, 9])
    assert a.evaluate(2) == b.evaluate(0) == 1 / 3


def test_mapped_keeps_cumprobs():
    G = F12.mapped(np.exp)
    assert G.points.tolist() == [math.exp(1), math.exp(2)]
    assert np.array_equal(G.cumprobs, F12.cumprobs)


def test_mean_and_masses():
    F = step({0: 0.25, 1: 0.5, 2: 1.0})
    assert F.masses.tolist() == [0.25, 0.25, 0.5]
    assert F.mean() == 1.25


def test_vector_and_scalar_outputs():
    assert isinstance(F12.evaluate(1.5), float)
    assert F12.evaluate([0, 1, 1.5, 2]).tolist() == [0, 0.5, 0.5, 1]
