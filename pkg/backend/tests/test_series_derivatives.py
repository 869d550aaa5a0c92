# backend/tests/test_series_derivatives.py
import math

import numpy as np
import pytest

from latmin.errors import DomainError
from latmin.series_derivatives import (
    LHOSPITAL_WINDOW,
    SQRT3,
    SpeciesTag,
    axis_derivative,
    axis_jet,
    axis_series_terms,
    difference_series,
    gradient_series,
    ratio_Y0_over_Y1,
)


def test_derivatives_at_i(budget):
    assert axis_derivative(SpeciesTag.ZERO, 1, 1.0, budget) == pytest.approx(0.2982, abs=5e-4)
    assert axis_derivative(SpeciesTag.ONE, 1, 1.0, budget) == pytest.approx(-1.298, abs=5e-3)


def test_lhospital_limit(budget):
    assert ratio_Y0_over_Y1(1.0, budget) == pytest.approx(-0.2297, abs=5e-4)


def test_ratio_is_continuous_across_taylor_window(budget):
    inside = ratio_Y0_over_Y1(1.0 + 0.99 * LHOSPITAL_WINDOW, budget)
    outside = ratio_Y0_over_Y1(1.0 + 1.01 * LHOSPITAL_WINDOW, budget)
    assert inside == pytest.approx(outside, abs=1e-7)


def test_ratio_domain():
    with pytest.raises(DomainError):
        ratio_Y0_over_Y1(0.99)
    with pytest.raises(DomainError):
        ratio_Y0_over_Y1(1.8)


def test_ratio_increases_on_the_interval(budget):
    values = [ratio_Y0_over_Y1(y, budget) for y in np.linspace(1.001, SQRT3 - 1e-3, 60)]
    assert np.all(np.diff(values) > 0.0)


@pytest.mark.parametrize("tag", list(SpeciesTag))
def test_zeros_on_the_axis(tag, budget):
    assert abs(axis_derivative(tag, 0, 1.0, budget)) < 1e-10


@pytest.mark.parametrize("y", [SQRT3 / 3.0, SQRT3])
def test_extra_zeros_of_y0(y, budget):
    assert abs(axis_derivative(SpeciesTag.ZERO, 0, y, budget)) < 1e-9


@pytest.mark.parametrize("tag", list(SpeciesTag))
@pytest.mark.parametrize("order", [1, 2, 3])
def test_axis_derivatives_match_finite_differences(tag, order, budget):
    h = 1e-4
    for y in (1.05, 1.4, 2.2):
        exact = axis_derivative(tag, order, y, budget)
        fd = (axis_derivative(tag, order - 1, y + h, budget) - axis_derivative(tag, order - 1, y - h, budget)) / (2 * h)
        assert fd == pytest.approx(exact, rel=1e-5, abs=1e-8)


@pytest.mark.parametrize("tag", list(SpeciesTag))
def test_scaling_identity(tag, budget):
    ys = np.linspace(1.05, 3.0, 25)
    inverted = -axis_derivative(tag, 0, 1.0 / ys, budget) / ys**2
    assert np.allclose(axis_derivative(tag, 0, ys, budget), inverted, atol=1e-10)


@pytest.mark.parametrize("tag", list(SpeciesTag))
def test_second_derivative_recursion_at_i(tag, budget):
    first = axis_derivative(tag, 1, 1.0, budget)
    assert axis_derivative(tag, 2, 1.0, budget) == pytest.approx(-3.0 * first, abs=1e-10)


def test_axis_derivative_vectorized_matches_scalar(budget):
    ys = np.array([0.8, 1.3, 2.0])
    values = axis_derivative(SpeciesTag.ZERO, 2, ys, budget)
    assert values.shape == (3,)
    assert values[1] == pytest.approx(axis_derivative(SpeciesTag.ZERO, 2, 1.3, budget), rel=1e-13)


def test_axis_derivative_rejects_nonpositive_y():
    with pytest.raises(DomainError):
        axis_derivative(SpeciesTag.ONE, 0, 0.0)
    with pytest.raises(ValueError):
        axis_derivative(SpeciesTag.ONE, 4, 1.0)


def test_axis_jet_orders(budget):
    jet = axis_jet(SpeciesTag.ONE, 1.2, budget)
    assert [d.order for d in jet] == [0, 1, 2, 3]
    assert jet[1].value == pytest.approx(axis_derivative(SpeciesTag.ONE, 1, 1.2, budget))


@pytest.mark.parametrize("tag", list(SpeciesTag))
def test_gradient_series_on_axis(tag, budget):
    x_part, y_part = gradient_series(tag, 1.7j, budget)
    assert abs(x_part) < 1e-14
    assert y_part == pytest.approx(axis_derivative(tag, 0, 1.7, budget), abs=1e-12)


def test_gradient_series_reflection(budget):
    z = 0.37 + 1.15j
    for tag in SpeciesTag:
        x_plus, y_plus = gradient_series(tag, z, budget)
        x_minus, y_minus = gradient_series(tag, -z.conjugate(), budget)
        assert x_plus == pytest.approx(-x_minus, abs=1e-12)
        assert y_plus == pytest.approx(y_minus, abs=1e-12)


@pytest.mark.parametrize("order", [0, 1, 2])
def test_difference_series_matches_axis(order, budget):
    for y in (1.0, 1.25, 2.0):
        zero = axis_derivative(SpeciesTag.ZERO, order, y, budget)
        expected = zero - axis_derivative(SpeciesTag.ONE, order, y, budget)
        assert difference_series(order, y, budget) == pytest.approx(expected, abs=1e-11)


def test_alternating_terms_decrease_beyond_sqrt3():
    terms = np.abs(axis_series_terms(SpeciesTag.ZERO, 1, np.linspace(SQRT3, 4.0, 10), 8))
    assert np.all(np.diff(terms, axis=0) < 0.0)


def test_species_rates():
    assert SpeciesTag.ONE.rate == pytest.approx(2 * math.pi)
    assert SpeciesTag.ZERO.rate == pytest.approx(math.pi)
    assert SpeciesTag.ZERO.alternating and not SpeciesTag.ONE.alternating


def test_ratio_vanishes_at_sqrt3(budget):
    assert abs(ratio_Y0_over_Y1(SQRT3, budget)) <= 1e-8


def test_ratio_between_endpoints(budget):
    assert ratio_Y0_over_Y1(1.0, budget) < ratio_Y0_over_Y1(1.3, budget) < 0.0
