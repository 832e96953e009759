import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from horomaps.errors import InvalidDiscreteParameter
from horomaps.sl2core import (
    STRUCTURE_CONSTANTS,
    THETA,
    U,
    V,
    Y,
    basis_element,
    classify,
    commutator,
    discrete_mu,
    horocycle_matrix,
)


@pytest.mark.parametrize("left,right,coef,result", STRUCTURE_CONSTANTS)
def test_brackets_are_exact(left, right, coef, result):
    got = commutator(basis_element(left), basis_element(right))
    assert got.dtype.kind == "i"
    assert np.array_equal(got, coef * basis_element(result).matrix)


def test_u_and_v_in_terms_of_y_and_theta():
    assert np.array_equal(2 * U.matrix, THETA.matrix - Y.matrix)
    assert np.array_equal(2 * V.matrix, -Y.matrix - THETA.matrix)


def test_unknown_element():
    with pytest.raises(KeyError):
        basis_element("Z")


@pytest.mark.parametrize(
    "mu,kind,nu",
    [(5.0, "Principal", 2j), (1.0, "Principal", 0j), (0.75, "Complementary", 0.5), (0.0, "Discrete", 1), (-8.0, "Discrete", 3)],
)
def test_classify_examples(mu, kind, nu):
    s = classify(mu)
    assert s.kind == kind
    assert s.nu == pytest.approx(nu)


def test_lowest_weight():
    assert classify(-8).lowest_weight == 2
    assert classify(-48).lowest_weight == 4
    assert classify(2).lowest_weight is None


@pytest.mark.parametrize("mu", [-1.0, -3.0, -7.5])
def test_classify_rejects_non_odd(mu):
    with pytest.raises(InvalidDiscreteParameter):
        classify(mu)


def test_nu_int_only_for_discrete():
    with pytest.raises(ValueError):
        classify(2.0).nu_int


@given(st.sampled_from([1, 3, 5, 7, 9, 11, 13]))
def test_discrete_mu_and_classify_are_inverse(nu):
    s = classify(discrete_mu(nu))
    assert s.is_discrete and s.nu_int == nu and s.lowest_weight == (1 + nu) // 2


@given(st.floats(min_value=1e-6, max_value=1e6))
def test_nu_squared_recovers_mu(mu):
    s = classify(mu)
    assert 1 - (s.nu**2).real == pytest.approx(mu, rel=1e-9, abs=1e-9)


@given(st.fractions(max_denominator=50).filter(lambda q: abs(q) < 100),
       st.fractions(max_denominator=50).filter(lambda q: abs(q) < 100))
def test_horocycle_group_law_exact(s, t):
    assert np.array_equal(horocycle_matrix(s) @ horocycle_matrix(t), horocycle_matrix(s + t))


def test_horocycle_is_exponential_of_u():
    from scipy.linalg import expm

    assert np.allclose(expm(0.7 * U.matrix.astype(float)), horocycle_matrix(0.7).astype(float))
    assert horocycle_matrix(Fraction(1, 3))[0, 1] == Fraction(1, 3)
    assert math.isclose(np.linalg.det(horocycle_matrix(2.5).astype(float)), 1.0)
