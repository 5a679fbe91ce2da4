import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kgnc.errors import DomainError
from kgnc.special_functions import (
    LaguerreSpec,
    laguerre_derivative,
    laguerre_eval,
    laguerre_series,
    log_factorial_ratio,
)


def exact_series(k, alpha, x):
    """Rational-arithmetic Laguerre series for integer alpha and rational x."""
    x = Fraction(x)
    total = Fraction(0)
    for i in range(k + 1):
        total += (-1) ** i * math.comb(k + alpha, k - i) * x**i / math.factorial(i)
    return total


def test_degree_zero_is_one():
    assert laguerre_eval(LaguerreSpec(0, 3), 7.2) == 1.0


def test_degree_one():
    assert laguerre_eval(LaguerreSpec(1, 3), 2.0) == 2.0


def test_degree_two_against_series():
    # frozen from the rational series: 3 - 3x + x^2/2 at x = 3/2
    assert exact_series(2, 1, Fraction(3, 2)) == Fraction(-3, 8)
    assert laguerre_eval(LaguerreSpec(2, 1), 1.5) == pytest.approx(-0.375, rel=1e-15)


@pytest.mark.parametrize("k", [0, 3, 7, 12])
@pytest.mark.parametrize("alpha", [1, 3, 5, 7])
def test_recurrence_matches_exact_series(k, alpha):
    xs = [Fraction(1, 4), Fraction(5, 2), Fraction(9), Fraction(31, 2)]
    for x in xs:
        expected = float(exact_series(k, alpha, x))
        got = laguerre_eval(LaguerreSpec(k, alpha), float(x))
        assert got == pytest.approx(expected, rel=1e-12, abs=1e-12)


def test_float_series_helper_agrees_on_small_x():
    spec = LaguerreSpec(6, 2.5)
    x = np.linspace(0, 3, 13)
    assert np.allclose(laguerre_series(spec, x), laguerre_eval(spec, x), rtol=1e-12, atol=1e-12)


def test_vector_input_shape():
    x = np.linspace(0, 10, 7)
    assert laguerre_eval(LaguerreSpec(4, 3), x).shape == (7,)


@settings(max_examples=200, deadline=None)
@given(
    k=st.integers(1, 29),
    alpha=st.sampled_from([1, 3, 5, 7]),
    x=st.floats(0, 80, allow_nan=False),
)
def test_recurrence_residual(k, alpha, x):
    lm1 = laguerre_eval(LaguerreSpec(k - 1, alpha), x)
    l0 = laguerre_eval(LaguerreSpec(k, alpha), x)
    lp1 = laguerre_eval(LaguerreSpec(k + 1, alpha), x)
    residual = (k + 1) * lp1 - (2 * k + 1 + alpha - x) * l0 + (k + alpha) * lm1
    assert abs(residual) <= 1e-9 * max(1.0, abs(lp1))


def test_derivative_of_constant():
    assert laguerre_derivative(LaguerreSpec(0, 2), 3.0) == 0.0


def test_derivative_degree_one():
    assert laguerre_derivative(LaguerreSpec(1, 3), 2.0) == -1.0


def central_difference(spec, x, h=1e-6):
    return (laguerre_eval(spec, x + h) - laguerre_eval(spec, x - h)) / (2 * h)


def test_derivative_finite_difference_example():
    spec = LaguerreSpec(3, 1)
    fd = central_difference(spec, 0.7)
    assert laguerre_derivative(spec, 0.7) == pytest.approx(fd, rel=1e-6)


@pytest.mark.parametrize("k", [1, 4, 9])
@pytest.mark.parametrize("alpha", [1, 3, 5, 7])
@pytest.mark.parametrize("x", [0.5, 3.0, 11.0, 25.0])
def test_derivative_identity_on_grid(k, alpha, x):
    spec = LaguerreSpec(k, alpha)
    h = 1e-5 * max(1.0, x)
    fd = central_difference(spec, x, h)
    assert laguerre_derivative(spec, x) == pytest.approx(fd, rel=1e-6, abs=1e-6)


@pytest.mark.parametrize("degree, order", [(-1, 1), (2, -1), (2, -3.5), (1.5, 0)])
def test_invalid_spec(degree, order):
    with pytest.raises(DomainError):
        LaguerreSpec(degree, order)


def test_negative_x_rejected():
    with pytest.raises(DomainError):
        laguerre_eval(LaguerreSpec(2, 1), -0.1)


def test_log_factorial_ratio_examples():
    assert log_factorial_ratio(5, 5) == 0.0
    assert log_factorial_ratio(3, 0) == pytest.approx(math.log(6), abs=1e-15)


def test_log_factorial_ratio_big_integer_oracle():
    exact = math.log(math.factorial(50) // math.factorial(30))
    assert abs(log_factorial_ratio(50, 30) - exact) < 1e-12


@settings(max_examples=200, deadline=None)
@given(a=st.integers(0, 200), b=st.integers(0, 200))
def test_log_factorial_ratio_accuracy(a, b):
    exact = math.log(Fraction(math.factorial(a), math.factorial(b)).numerator) - math.log(
        Fraction(math.factorial(a), math.factorial(b)).denominator
    )
    assert abs(log_factorial_ratio(a, b) - exact) < 1e-12 * max(1.0, abs(exact))
    assert log_factorial_ratio(a, b) == -log_factorial_ratio(b, a)


def test_log_factorial_ratio_rejects_negative():
    with pytest.raises(DomainError):
        log_factorial_ratio(-1, 2)
