import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import gamma

from horomaps import quad
from horomaps.errors import OscillationUnderresolved, TailDivergence
from horomaps.models import SpectralFunction, model_for
from strategies import spectral


# ---------------------------------------------------------- rules


def test_panel_rule_integrates_polynomials_exactly():
    x, w = quad.panel_rule(np.linspace(-1, 2, 4), 8)
    assert np.sum(w * x**15) == pytest.approx((2**16 - 1) / 16, rel=1e-13)


def test_graded_breaks_endpoints_and_order():
    for toward in (None, "left", "right", "both"):
        b = quad.graded_breaks(-1.0, 3.0, 10, 3.0, toward)
        assert b[0] == -1.0 and b[-1] == 3.0 and np.all(np.diff(b) > 0)
    left = quad.graded_breaks(0.0, 1.0, 10, 3.0, "left")
    assert left[1] - left[0] < left[-1] - left[-2]


def test_quadrature_settings_validation():
    with pytest.raises(ValueError):
        quad.QuadratureSpec(grading=0.5)
    with pytest.raises(ValueError):
        quad.QuadratureSpec(panels=10**6, order=16)
    assert quad.QuadratureSpec(panels=8).refined().panels == 16


# ------------------------------------------------------------ line


def test_line_integral_of_lorentzian():
    est = quad.integrate_line(lambda x: 1 / (1 + x * x))
    assert est.value == pytest.approx(math.pi, rel=1e-8)


@pytest.mark.parametrize("a", [1.25, 1.5, 3.0])
def test_line_integral_beta_family(a):
    # int (1+x^2)^-a dx = sqrt(pi) Gamma(a - 1/2) / Gamma(a)
    est = quad.integrate_line(lambda x: (1 + x * x) ** -a)
    exact = math.sqrt(math.pi) * gamma(a - 0.5) / gamma(a)
    assert est.value == pytest.approx(exact, rel=1e-6)


def test_line_integral_refuses_slow_decay():
    with pytest.raises(TailDivergence):
        quad.integrate_line(lambda x: (1 + x * x) ** -0.5)


def test_interval_integral():
    est = quad.integrate_interval(np.cos, 0.0, math.pi / 2)
    assert est.value == pytest.approx(1.0, rel=1e-12)


# ------------------------------------------------------ complementary


def _norm_closed_form(nu, ks):
    ks = np.asarray(ks)
    return 2 * math.pi**2 * (-1.0) ** ks * gamma(nu) / (2**nu * gamma((nu + 1) / 2 + ks) * gamma((nu + 1) / 2 - ks))


@pytest.mark.parametrize("nu", [0.1, 0.5, 0.9])
def test_complementary_norms_match_gamma_closed_form(nu):
    q = quad.complementary_basis_norms(nu, 40)
    assert np.allclose(q, _norm_closed_form(nu, np.arange(41)), rtol=1e-10)


def test_pairing_reproduces_norms_and_orthogonality():
    m = model_for(0.75)
    u2 = SpectralFunction.basis(m, 2)
    u3 = SpectralFunction.basis(m, 3)
    assert quad.integrate_complementary_pairing(u2, u2).value == pytest.approx(_norm_closed_form(0.5, 2), rel=1e-8)
    assert abs(quad.integrate_complementary_pairing(u2, u3).value) < 1e-9


@settings(max_examples=20, deadline=None)
@given(spectral((0.75, 0.51)), spectral((0.75, 0.51)))
def test_pairing_conjugate_symmetry(f, g):
    if f.model != g.model:
        g = SpectralFunction(f.model, g.k_min, g.coeffs)
    a = quad.integrate_complementary_pairing(f, g).value
    b = quad.integrate_complementary_pairing(g, f).value
    assert a == pytest.approx(np.conj(b), rel=1e-9, abs=1e-9)


def test_pairing_rejects_other_series():
    f = SpectralFunction.basis(model_for(2.0), 0)
    with pytest.raises(ValueError):
        quad.integrate_complementary_pairing(f, f)


# ---------------------------------------------------------- half-plane


@pytest.mark.parametrize("method", ["disk", "rectangle"])
def test_halfplane_norm_of_lowest_vector(method):
    u = SpectralFunction.basis(model_for(-8.0), 2)
    est = quad.integrate_halfplane(lambda z: np.abs(u(z)) ** 2, 3.0, method=method)
    tol = 1e-8 if method == "disk" else 1e-3
    assert est.value == pytest.approx(math.pi / 192, rel=tol)


# ---------------------------------------------------------- Fourier


@pytest.mark.parametrize("xi", [0.3, 1.0, -0.7])
def test_transform_of_lorentzian(xi):
    # residue calculus: pi exp(-2 pi |xi|); sampled callables are truncated,
    # so the reported error bar has to cover the truncation
    f = lambda x: 1 / (1 + x * x)  # noqa: E731
    exact = math.pi * math.exp(-2 * math.pi * abs(xi))
    est = quad.fourier_estimate(f, xi)
    assert abs(est.value - exact) <= est.error_estimate
    wide = quad.fourier_estimate(f, xi, spec=quad.QuadratureSpec(extent=400.0))
    assert wide.value == pytest.approx(exact, abs=1e-6)


@pytest.mark.parametrize("xi,y", [(0.25, 2.0), (1.0, 0.5), (1.0, 1.0), (2.5, 0.25), (2.5, 0.5)])
def test_discrete_transform_residue(xi, y):
    # u_1(z) = (z+i)^-2: only the pole at -i contributes, and only for xi > 0
    u = SpectralFunction.basis(model_for(0.0), 1)
    exact = -4 * math.pi**2 * xi * math.exp(-2 * math.pi * xi)
    assert quad.fourier_transform(u, xi, y) == pytest.approx(exact, rel=1e-9)
    assert abs(quad.fourier_transform(u, -xi, y)) < 1e-12


def test_discrete_transform_flags_large_exponential_factor():
    # e^{2 pi xi y} ~ 1e13 swamps the value; the refinement check notices
    u = SpectralFunction.basis(model_for(0.0), 1)
    with pytest.raises(OscillationUnderresolved):
        quad.fourier_transform(u, 2.5, 2.0)


def test_complementary_transform_at_zero():
    # int (1+x^2)^-(1+nu)/2 dx, with the slow |x|^-1.5 tail added back
    nu = 0.5
    u = SpectralFunction.basis(model_for(0.75), 0)
    exact = math.sqrt(math.pi) * gamma(nu / 2) / gamma((1 + nu) / 2)
    assert quad.fourier_transform(u, 0.0).real == pytest.approx(exact, rel=1e-8)


@settings(max_examples=15, deadline=None)
@given(spectral((5.0, 2.0, -8.0), max_len=3), spectral((5.0, 2.0, -8.0), max_len=3),
       st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False))
def test_transform_is_linear(f, g, c):
    g = SpectralFunction(f.model, max(g.k_min, f.model.min_index or g.k_min), g.coeffs)
    y = 1.0 if f.model.is_discrete else 0.0
    xi = 0.6
    lhs = quad.fourier_transform(f + g * c, xi, y)
    rhs = quad.fourier_transform(f, xi, y) + c * quad.fourier_transform(g, xi, y)
    assert lhs == pytest.approx(rhs, abs=1e-9 * (1 + abs(lhs)))


def test_translation_is_a_phase():
    f = SpectralFunction(model_for(2.0), -1, [1.0, 0.3j, 0.2])
    xi, t = 0.8, 0.6
    a = quad.fourier_transform(f.shifted(t), xi)
    b = np.exp(-2j * np.pi * xi * t) * quad.fourier_transform(f, xi)
    assert a == pytest.approx(b, abs=1e-10)


def test_batch_agrees_with_pointwise():
    f = SpectralFunction(model_for(5.0), 0, [1.0, -0.5])
    xis = np.array([-1.5, 0.4, 2.0])
    batch = quad.fourier_transform_batch(f, xis)
    single = np.array([quad.fourier_transform(f, x) for x in xis])
    assert np.allclose(batch, single, atol=1e-10)
