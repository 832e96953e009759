import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from horomaps import distributions as dist
from horomaps import quad
from horomaps.errors import UnsupportedIndex
from horomaps.models import SpectralFunction, model_for
from strategies import spectral


def test_boundary_jets_on_basis_vectors():
    m = model_for(2.0)
    for k in (-3, 0, 2, 5):
        u = SpectralFunction.basis(m, k)
        for r in range(4):
            assert dist.eval_boundary_jet(u, r) == pytest.approx((2j * k) ** r * (-1) ** k)
    d = model_for(-8.0)
    assert dist.eval_boundary_jet(SpectralFunction.basis(d, 3), 2) == pytest.approx((6j) ** 2)


@pytest.mark.parametrize("mu", [2.0, 0.75, -8.0, -24.0])
def test_boundary_value_from_samples(mu):
    m = model_for(mu)
    k0 = m.min_index if m.is_discrete else -2
    f = SpectralFunction(m, k0, [1.0, -0.5j, 0.25, 0.1])
    sampled = dist.boundary_value(lambda z: f(z), m)
    assert sampled == pytest.approx(dist.eval_boundary_jet(f, 0), abs=1e-7)


@settings(max_examples=25, deadline=None)
@given(spectral(), st.floats(-2, 2))
def test_translate_jets_match_projection(f, t):
    # jets of f(x - t) from the exponential action vs from re-expanded coefficients.
    # The re-expansion converges slowly near the boundary point and the jet
    # weights grow like k^r, so the oracle is only good to ~1e-6 relative.
    shifted = f.shifted(t)
    via_action = dist.boundary_jets(shifted, 3)
    m = f.model
    window = (m.min_index, m.min_index + 256) if m.is_discrete else (-256, 256)
    via_coeffs = dist.boundary_jets(shifted.project(window=window, tol=1e-6), 3)
    scale = 1 + np.max(np.abs(via_coeffs))
    assert np.allclose(via_action, via_coeffs, rtol=0, atol=1e-5 * scale)


def test_distribution_objects_validate():
    m = model_for(-8.0)
    with pytest.raises(ValueError):
        dist.delta_hat(m, 1, 1.0)  # needs y
    with pytest.raises(ValueError):
        dist.delta_hat(model_for(2.0), 1, 1.0, y=1.0)
    with pytest.raises(ValueError):
        dist.delta_hat(model_for(2.0), 1, -1.0)
    assert dist.delta_r(model_for(0.75), 2).sobolev_order() == pytest.approx(2.75)
    assert dist.delta0(model_for(0.75)).params() == {"mu": 0.75}


@pytest.mark.parametrize("mu,k", [(5.0, 1), (2.0, -2), (0.75, 0), (0.75, 2)])
def test_deltahat_is_translation_invariant(mu, k):
    m = model_for(mu)
    f = SpectralFunction(m, -1, [0.5, 1.0, 0.25j])
    T = 1.0
    a = dist.eval_deltahat(f, k, T)
    b = dist.eval_deltahat(f.shifted(T), k, T)
    assert abs(a - b) <= 1e-9


@pytest.mark.parametrize("k", [1, 2])
def test_discrete_deltahat_is_line_independent(k):
    m = model_for(-8.0)
    f = SpectralFunction(m, 2, [1.0, 0.5, -0.25j])
    assert dist.eval_deltahat(f, k, 2.0, 0.5) == pytest.approx(dist.eval_deltahat(f, k, 2.0, 2.0), abs=1e-10)


def test_discrete_deltahat_vanishes_for_nonpositive_k():
    m = model_for(-24.0)
    f = SpectralFunction(m, 3, [1.0, 2.0, 0.5j])
    for k in (-2, -1, 0):
        assert abs(dist.eval_deltahat(f, k, 1.0, 1.0)) < 1e-10


@pytest.mark.parametrize("mu", [2.0, 0.75, -8.0])
@pytest.mark.parametrize("k", [1, 2])
def test_dual_functions_are_biorthogonal(mu, k):
    m = model_for(mu)
    T = 1.0
    chi = dist.dual_function(k, T, m)
    y = 1.0 if m.is_discrete else None
    for j in (1, 2, 3):
        got = dist.eval_deltahat(chi, j, T, y)
        assert got == pytest.approx(1.0 if j == k else 0.0, abs=1e-8)


def test_dual_function_argument_checks():
    with pytest.raises(UnsupportedIndex):
        dist.dual_function(0, 1.0, model_for(-8.0))
    with pytest.raises(ValueError):
        dist.dual_function(1, 1.0, model_for(2.0), width=0.6)


def test_bump_profile():
    assert dist.bump(0.0) == pytest.approx(1.0)
    assert np.all(dist.bump(np.array([-1.0, 1.0, 1.5])) == 0)


def test_flow_average_pointwise():
    m = model_for(2.0)
    f = SpectralFunction(m, 0, [1.0, 0.5])
    A = dist.apply_AT(f, 0.7)
    x = np.array([0.0, 1.3])
    ref = [quad.integrate_interval(lambda t: f(xx - t), 0.0, 0.7).value for xx in x]
    assert np.allclose(A(x), ref, atol=1e-12)


def test_flow_average_multiplier():
    m = model_for(5.0)
    f = SpectralFunction(m, -1, [0.3, 1.0, 0.2j])
    T, xi = 0.8, 0.9
    lhs = quad.fourier_transform(dist.apply_AT(f, T), xi)
    rhs = dist.at_fourier_multiplier(np.array([xi]), T)[0] * quad.fourier_transform(f, xi)
    assert lhs == pytest.approx(rhs, abs=1e-9)
    assert dist.at_fourier_multiplier(np.array([0.0]), 2.5)[0] == 2.5


@pytest.mark.parametrize("k", [1, -1, 2])
def test_flow_average_kills_lattice_frequencies(k):
    m = model_for(2.0)
    f = SpectralFunction(m, -1, [0.3, 1.0, 0.2j])
    T = 1.0
    assert abs(quad.fourier_transform(dist.apply_AT(f, T), k / T)) < 1e-9


def test_order_estimate_decreases_in_s():
    d = dist.delta0(model_for(2.0))
    est = dist.distribution_order_estimate(d, [0.5, 1.0, 2.0], 64)
    assert est[0.5] > est[1.0] > est[2.0]


def test_report_rows_shape():
    m = model_for(2.0)
    f = SpectralFunction.basis(m, 1)
    rows = dist.report_rows(f, [dist.delta0(m), dist.delta_r(m, 1), dist.delta_hat(m, 1, 1.0)])
    assert [r["kind"] for r in rows] == ["Delta0", "DeltaR", "DeltaHat"]
    assert rows[0]["value_re"] == pytest.approx(-1.0)
