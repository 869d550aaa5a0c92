# backend/tests/test_modular_core.py
import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from latmin.errors import BudgetExceeded, DomainError
from latmin.modular_core import (
    Generator,
    GroupWord,
    SeriesBudget,
    UhpPoint,
    apply_generator,
    canonicalize,
    e_of,
    eta4,
    in_fundamental_set,
    inverse_generator,
    log_abs_im_eta,
    reduce_modular,
)

xs = st.floats(min_value=-0.5, max_value=0.5, allow_nan=False)
ys = st.floats(min_value=0.3, max_value=3.0, allow_nan=False)


def eta4_oracle(z: complex, terms: int = 200) -> complex:
    mpmath.mp.dps = 30
    w = mpmath.mpc(z.real, z.imag)
    q = mpmath.exp(2j * mpmath.pi * w)
    product = mpmath.fprod(1 - q**n for n in range(1, terms + 1))
    return complex(mpmath.exp(2j * mpmath.pi * w / 6) * product**4)


def test_uhp_point_rejects_lower_half_plane():
    with pytest.raises(DomainError):
        UhpPoint.from_complex(0.3 - 1j)
    with pytest.raises(DomainError):
        UhpPoint.from_complex(complex(0.3, 0.0))


def test_uhp_point_properties():
    p = UhpPoint(x=0.0, y=2.0)
    assert p.z == 2j
    assert p.modulus == 2.0
    assert p.arg == pytest.approx(math.pi / 2)


def test_budget_terms_grow_as_decay_shrinks():
    budget = SeriesBudget()
    assert budget.terms_for(2 * math.pi) < budget.terms_for(0.1)


def test_budget_exceeded_names_the_series():
    budget = SeriesBudget(rel_tol=1e-14, max_terms=16)
    with pytest.raises(BudgetExceeded, match="eta4"):
        eta4(0.01j + 0.2, budget)


def test_doubled_budget():
    assert SeriesBudget(max_terms=100).doubled().max_terms == 200


@pytest.mark.parametrize("z", [1j, 0.5 + 0.8660254037844386j, 0.13 + 0.45j, -0.31 + 1.7j, 0.2 + 0.3j])
def test_eta4_matches_extended_precision_product(z, budget):
    expected = eta4_oracle(z)
    assert abs(eta4(z, budget) - expected) <= 1e-12 * abs(expected)


@given(xs, ys)
def test_eta4_unit_shift(x, y):
    z = complex(x, y)
    value = eta4(z)
    assert abs(eta4(z + 1.0) - cmath.exp(2j * math.pi / 6) * value) <= 1e-11 * abs(value)


@given(xs, ys)
def test_eta4_inversion(x, y):
    z = complex(x, y)
    value = z * z * eta4(z)
    assert abs(eta4(-1.0 / z) + value) <= 1e-11 * abs(value)


@given(xs, ys)
def test_eta4_reflection_keeps_modulus(x, y):
    z = complex(x, y)
    assert abs(eta4(-z.conjugate())) == pytest.approx(abs(eta4(z)), rel=1e-12)


def test_log_abs_im_eta_matches_eta4(budget):
    z = 0.21 + 1.3j
    assert log_abs_im_eta(z, budget) == pytest.approx(math.log(z.imag * abs(eta4(z, budget))), abs=1e-13)


def test_log_abs_im_eta_vectorized(budget):
    zs = np.array([1j, 0.4 + 1.1j, -0.2 + 2.5j])
    values = log_abs_im_eta(zs, budget)
    assert values.shape == (3,)
    assert values[1] == pytest.approx(log_abs_im_eta(zs[1], budget), abs=1e-15)


def test_reduce_modular_lands_in_standard_domain():
    for z in (0.3 + 0.01j, 3.7 + 0.2j, -2.2 + 0.05j):
        w = reduce_modular(z)
        assert abs(w.real) <= 0.5 + 1e-12
        assert abs(w) >= 1.0 - 1e-12


@given(
    st.floats(min_value=-3.0, max_value=3.0),
    st.floats(min_value=0.05, max_value=5.0),
    st.sampled_from(list(Generator)),
)
def test_generator_inverse_replays(x, y, g):
    z = complex(x, y)
    back = apply_generator(apply_generator(z, inverse_generator(g)), g).z
    assert abs(back - z) <= 1e-13 * max(1.0, abs(z))


def test_canonicalize_reflection_example():
    w, word = canonicalize(-0.4 + 1.2j)
    assert w.z == pytest.approx(0.4 + 1.2j, abs=1e-15)
    assert word.generators == (Generator.R,)
    assert str(word) == "[R]"


def test_canonicalize_fixed_point():
    w, word = canonicalize(1j)
    assert w.z == 1j
    assert len(word) == 0


@given(st.floats(min_value=-4.0, max_value=4.0), st.floats(min_value=0.05, max_value=5.0))
def test_canonicalize_lands_in_fundamental_set_and_replays(x, y):
    z = complex(x, y)
    w, word = canonicalize(z)
    assert in_fundamental_set(w)
    assert abs(word.apply(z).z - w.z) <= 1e-12 * max(1.0, abs(w.z))


def test_canonical_representative_is_orbit_invariant(rng):
    for z in rng.uniform(0.05, 0.95, 20) + 1j * rng.uniform(1.05, 3.0, 20):
        w, _ = canonicalize(z)
        for g in Generator:
            image, _ = canonicalize(apply_generator(z, g))
            assert abs(image.z - w.z) < 1e-9


def test_group_word_str():
    assert str(GroupWord(generators=(Generator.T2INV, Generator.S, Generator.R))) == "[T2inv, S, R]"


def test_e_of_examples():
    assert e_of(0.0) == pytest.approx(1.0, abs=1e-15)
    assert e_of(1j) == pytest.approx(math.exp(-2 * math.pi), rel=1e-14)
    assert e_of(0.5) == pytest.approx(-1.0, abs=1e-15)


def test_eta4_deep_in_the_cusp(budget):
    assert eta4(10j, budget) == pytest.approx(math.exp(-10 * math.pi / 3), rel=1e-12)


@pytest.mark.parametrize(
    "z, g, expected",
    [
        (1j, Generator.S, 1j),
        (0.4 + 1.2j, Generator.R, -0.4 + 1.2j),
        (2.3 + 0.9j, Generator.T2INV, 0.3 + 0.9j),
    ],
)
def test_apply_generator_examples(z, g, expected):
    assert apply_generator(z, g).z == pytest.approx(expected, abs=1e-15)


def test_canonicalize_matches_breadth_first_orbit_search():
    start = 2.35 + 0.17j
    seen = {(round(start.real, 9), round(start.imag, 9))}
    frontier = [start]
    found = None
    for _ in range(12):
        found = next((w for w in frontier if in_fundamental_set(w, slack=0.0)), None)
        if found is not None:
            break
        successors = []
        for w in frontier:
            for g in Generator:
                image = apply_generator(w, g).z
                key = (round(image.real, 9), round(image.imag, 9))
                if key not in seen:
                    seen.add(key)
                    successors.append(image)
        frontier = successors
    assert found is not None
    assert canonicalize(start)[0].z == pytest.approx(found, abs=1e-12)
