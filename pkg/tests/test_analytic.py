import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bvnoise import analytic
from bvnoise.analytic import (
    NoiseParams,
    bisect_decreasing,
    success_probability,
    threshold_closed_form,
    threshold_p,
    threshold_small_p_approx,
)

from oracles import qubit_factor_polynomial

unit = st.floats(0.0, 1.0, allow_nan=False)


@given(unit)
def test_noise_params_ranges(p):
    params = NoiseParams(p)
    assert 0.0 <= params.alpha <= 1.0
    assert 0.0 <= params.beta <= 0.5
    assert 0.5 <= params.qubit_factor <= 1.0


@given(unit)
def test_alpha_plus_beta_identity(p):
    assert abs(NoiseParams(p).qubit_factor - (1 + (1 - p) ** 3) / 2) <= 1e-14


def test_noise_params_reported_values():
    params = NoiseParams(0.1)
    assert params.alpha == pytest.approx(0.729, abs=1e-15)
    assert params.beta == pytest.approx(0.1355, abs=1e-15)


@pytest.mark.parametrize("p", [-0.01, 1.01, math.nan])
def test_noise_params_rejects(p):
    with pytest.raises(ValueError):
        NoiseParams(p)


def test_qubit_factor_non_increasing_on_grid():
    ps = np.linspace(0, 1, 1001)
    values = [NoiseParams(p).qubit_factor for p in ps]
    assert all(b < a for a, b in zip(values[:-1], values[1:-1]))
    assert values[-1] <= values[-2]


def test_derivative_matches_finite_difference():
    for p in (0.05, 0.3, 0.8):
        h = 1e-6
        fd = (NoiseParams(p + h).qubit_factor - NoiseParams(p - h).qubit_factor) / (2 * h)
        assert fd == pytest.approx(-1.5 * (1 - p) ** 2, rel=1e-8)


def test_success_probability_examples():
    assert success_probability(57, 0.0).prob == 1.0
    assert success_probability(4, 1.0).prob == pytest.approx(1 / 16, abs=1e-15)
    assert success_probability(3, 0.1).prob == pytest.approx(0.646092936125, abs=1e-12)


def test_success_probability_log2_finite_for_huge_n():
    res = success_probability(10**6, 0.3)
    assert res.prob == 0.0
    assert math.isfinite(res.log2_prob)
    assert res.log2_prob == pytest.approx(10**6 * math.log2(qubit_factor_polynomial(0.3)), rel=1e-12)


@pytest.mark.parametrize("n,p", [(0, 0.1), (2, 1.5), (1.5, 0.1)])
def test_success_probability_rejects(n, p):
    with pytest.raises(ValueError):
        success_probability(n, p)


def test_threshold_n1_equals_cube_root_form():
    res = threshold_p(1)
    assert res.p_star == pytest.approx(1 - (1 / 3) ** (1 / 3), abs=1e-12)
    assert res.p_star == pytest.approx(0.306639, abs=1e-6)
    assert res.residual <= 1e-10


def test_threshold_n2():
    assert threshold_p(2).p_star == pytest.approx(0.1413826246443, abs=1e-12)


@pytest.mark.parametrize("n", [1, 2, 5, 10, 100, 1000])
def test_bisection_agrees_with_closed_form(n):
    res = threshold_p(n)
    assert abs(res.p_star - threshold_closed_form(n)) <= 1e-10
    assert abs(qubit_factor_polynomial(res.p_star) ** n - 2 / 3) <= 1e-10
    assert res.iterations <= analytic.MAX_BISECT_ITER


@pytest.mark.parametrize("target", [0.3, 0.5, 0.9, 0.999])
def test_threshold_other_targets(target):
    n = 8
    res = threshold_p(n, target)
    assert abs(res.p_star - threshold_closed_form(n, target)) <= 1e-10
    assert res.residual <= 1e-10


@pytest.mark.parametrize("n,target", [(3, 1.0), (3, 0.125), (1, 0.4), (3, 1.2)])
def test_threshold_unreachable(n, target):
    with pytest.raises(ValueError):
        threshold_p(n, target)


def test_bisect_requires_bracket():
    with pytest.raises(ValueError):
        bisect_decreasing(lambda x: x, 0.0, 1.0, 1e-12, 1e-10, 100)


def test_bisect_generic_root():
    root, its = bisect_decreasing(lambda x: 0.3 - x**2, 0.0, 1.0, 1e-12, 1e-12, 200)
    assert root == pytest.approx(math.sqrt(0.3), abs=1e-12)
    assert its < 200


def test_small_p_examples():
    assert threshold_small_p_approx(1) == pytest.approx(2 / 9, abs=1e-15)
    assert threshold_small_p_approx(100) == pytest.approx(0.0026976280546736, rel=1e-12)
    exact = threshold_p(100).p_star
    assert exact == pytest.approx(0.0027049381479931, rel=1e-10)
    assert abs(exact - threshold_small_p_approx(100)) / exact == pytest.approx(0.0027025, abs=1e-6)


def test_small_p_decreases_to_zero():
    values = [threshold_small_p_approx(n) for n in (1, 10, 100, 1000, 10**5, 10**8)]
    assert all(b < a for a, b in zip(values, values[1:]))
    assert values[-1] < 1e-8


def test_asymptote_relative_error_shrinks():
    ns = [100, 150, 200, 400, 1000, 5000]
    rel = [abs(threshold_p(n).p_star - threshold_small_p_approx(n)) / threshold_p(n).p_star for n in ns]
    assert all(r <= 0.01 for r in rel)
    assert all(b < a for a, b in zip(rel, rel[1:]))
