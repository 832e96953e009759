import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from horomaps.errors import DomainError, IllConditioned
from horomaps.models import (
    GridFunction,
    ModelSpace,
    SpectralFunction,
    TranslateSum,
    basis_eval,
    basis_norm_sq,
    chart_map,
    coeffs_from_samples,
    diagonal_apply,
    ladder_apply,
    model_for,
    sampling_nodes,
    sobolev_norm,
    theta_eigenvalues,
    u_field_apply,
    v_field_apply,
    vector_field,
    x_field_apply,
    y_field_apply,
)
from strategies import DISCRETE, FLAT, same_model_pair, spectral


# ------------------------------------------------------------ frozen values


def test_lowest_discrete_vector_at_i():
    # u_n(z) = (z + i)^(-2n); n = 2 gives (2i)^-4
    assert basis_eval(-8.0, 2, 1j, "HalfPlane") == pytest.approx(1 / 16)


def test_complementary_ground_state_at_one():
    # u_0(x) = (1 + x^2)^(-(1+nu)/2), nu = 1/2
    assert basis_eval(0.75, 0, 1.0, "Line") == pytest.approx(2 ** -0.75)


def test_derivative_of_lowest_vector():
    assert basis_eval(-8.0, 2, 1j, "HalfPlane", derivative_order=1) == pytest.approx(-4 * (2j) ** -5)


def test_principal_basis_has_unit_modulus_phase():
    x = np.linspace(-5, 5, 11)
    for k in (-3, 0, 4):
        v = basis_eval(2.0, k, x, "Line")
        assert np.allclose(np.abs(v), (1 + x * x) ** -0.5)


def test_discrete_norm_closed_form():
    assert basis_norm_sq(-8.0, 2) == pytest.approx(math.pi / 192)
    assert basis_norm_sq(5.0, 7) == pytest.approx(math.pi)


def test_sobolev_norm_value():
    f = SpectralFunction.basis(model_for(1.0), 2)
    assert sobolev_norm(f, 1) == pytest.approx(math.sqrt(34 * math.pi))


def test_circle_and_line_agree():
    th = np.linspace(-1.4, 1.4, 9)
    for k in (-2, 0, 3):
        a = basis_eval(0.75, k, th, "Circle")
        b = basis_eval(0.75, k, np.tan(th), "Line")
        assert np.allclose(a, b)


def test_disk_and_halfplane_agree():
    z = np.array([0.3 + 0.5j, -2 + 1j, 1j])
    xi = chart_map(z, "HalfPlane", "Disk")
    for k in (2, 3, 6):
        assert np.allclose(basis_eval(-8.0, k, xi, "Disk"), basis_eval(-8.0, k, z, "HalfPlane"))


# ------------------------------------------------------------ domain checks


def test_chart_domains():
    with pytest.raises(DomainError):
        basis_eval(2.0, 0, 2.0, "Circle")
    with pytest.raises(DomainError):
        basis_eval(-8.0, 2, -1j, "HalfPlane")
    with pytest.raises(DomainError):
        basis_eval(-8.0, 2, 1.0, "Disk")
    with pytest.raises(IndexError):
        basis_eval(-8.0, 1, 1j, "HalfPlane")
    with pytest.raises(ValueError):
        ModelSpace(model_for(2.0).series, "Disk")


def test_chart_round_trip():
    z = np.array([0.1 + 0.2j, 3 + 4j])
    assert np.allclose(chart_map(chart_map(z, "HalfPlane", "Disk"), "Disk", "HalfPlane"), z)
    th = np.array([-1.0, 0.5])
    assert np.allclose(chart_map(chart_map(th, "Circle", "Line"), "Line", "Circle"), th)


def test_immutable():
    f = SpectralFunction.basis(model_for(2.0), 0)
    with pytest.raises(AttributeError):
        f.k_min = 3
    with pytest.raises(ValueError):
        f.coeffs[0] = 2


def test_discrete_window_below_lowest_weight():
    with pytest.raises(IndexError):
        SpectralFunction(model_for(-8.0), 1, [1.0])


# ------------------------------------------------------ coefficient calculus


def _bracket(a, b, f):
    return a(b(f)) - b(a(f))


theta = lambda f: diagonal_apply(f, "Theta")  # noqa: E731


@given(spectral())
def test_bracket_relations_in_coefficients(f):
    lo = f.model.min_index if f.model.is_discrete else f.k_min - 3
    win = lambda g: g.on_window(lo, f.k_max + 3)  # noqa: E731
    X, Y = x_field_apply, y_field_apply
    assert win(_bracket(X, Y, f)).allclose(win(theta(f) * -2), 1e-9)
    assert win(_bracket(theta, X, f)).allclose(win(Y(f) * 2), 1e-9)
    assert win(_bracket(theta, Y, f)).allclose(win(X(f) * -2), 1e-9)


@given(spectral())
def test_casimir_acts_as_mu(f):
    X, Y = x_field_apply, y_field_apply
    box = -X(X(f)) - Y(Y(f)) + theta(theta(f))
    assert box.allclose(f * f.mu, 1e-8 * (1 + 64 * np.max(np.abs(f.coeffs))))


@given(spectral())
def test_laplacian_is_diagonal(f):
    X, Y = x_field_apply, y_field_apply
    lap = -(X(X(f)) + Y(Y(f)) + theta(theta(f)))
    assert lap.allclose(diagonal_apply(f, "Laplacian"), 1e-8 * (1 + 64 * np.max(np.abs(f.coeffs))))


@given(spectral())
def test_u_and_v_fields_decompose(f):
    y = y_field_apply(f)
    assert u_field_apply(f).allclose((theta(f) - y) * 0.5, 1e-12)
    assert v_field_apply(f).allclose((-y - theta(f)) * 0.5, 1e-12)


def test_theta_eigenvalue_convention():
    assert np.array_equal(theta_eigenvalues([3]), [-6j])


def test_lowering_kills_lowest_weight():
    m = model_for(-24.0)
    out = ladder_apply(SpectralFunction.basis(m, m.min_index), "lower")
    assert np.all(out.coeffs == 0)


@pytest.mark.parametrize("mu", [2.0, 0.75, -8.0])
@pytest.mark.parametrize("name", ["X", "Y", "Theta", "U", "V"])
def test_pointwise_fields_match_coefficients(mu, name):
    from horomaps.models import FIELD_APPLY

    m = model_for(mu)
    k0 = m.min_index if m.is_discrete else -1
    f = SpectralFunction(m, k0, [1.0, 0.5 - 0.25j, 0.3j])
    a, b = vector_field(name, m)
    p = np.array([0.3, -1.1, 2.0]) + (1j if m.is_discrete else 0)
    h = 1e-5
    df = (-f(p + 2 * h) + 8 * f(p + h) - 8 * f(p - h) + f(p - 2 * h)) / (12 * h)
    pointwise = a(p) * f(p) + b(p) * df
    exact = FIELD_APPLY[name](f)(p)
    assert np.allclose(pointwise, exact, rtol=1e-7, atol=1e-9)


@given(spectral())
def test_derivative_matches_finite_difference(f):
    x = np.array([0.2, -0.7]) + (1j if f.model.is_discrete else 0)
    h = 1e-5
    fd = (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)
    scale = 1 + np.max(np.abs(fd))
    assert np.allclose(f.derivative()(x), fd, atol=1e-6 * scale)


# -------------------------------------------------------------- norms


@given(spectral(), st.floats(0, 4), st.floats(0, 4))
def test_sobolev_monotone_in_order(f, s, t):
    lo, hi = sorted((s, t))
    assert sobolev_norm(f, lo) <= sobolev_norm(f, hi) * (1 + 1e-12)


@given(same_model_pair())
def test_sobolev_triangle_inequality(pair):
    f, g = pair
    assert sobolev_norm(f + g, 2) <= (sobolev_norm(f, 2) + sobolev_norm(g, 2)) * (1 + 1e-12)


@given(spectral(), st.complex_numbers(min_magnitude=1e-3, max_magnitude=10, allow_nan=False, allow_infinity=False))
def test_sobolev_homogeneous(f, c):
    # stay clear of the subnormal range, where |c|^2 underflows
    assume(np.all((np.abs(f.coeffs) == 0) | (np.abs(f.coeffs) > 1e-100)))
    assert sobolev_norm(f * c, 1) == pytest.approx(abs(c) * sobolev_norm(f, 1), rel=1e-12, abs=1e-300)


# ---------------------------------------------------------- sampling


@settings(max_examples=30, deadline=None)
@given(spectral())
def test_sampling_round_trip(f):
    m = f.model
    win = (m.min_index, f.k_max + 2) if m.is_discrete else (f.k_min - 2, f.k_max + 2)
    nodes = sampling_nodes(m, win)
    g = GridFunction(m.chart, nodes, f(nodes))
    back = coeffs_from_samples(g, m, win, tol=1e-8)
    assert back.allclose(f, 1e-9)


def test_sampling_rejects_short_grid():
    m = model_for(2.0)
    nodes = sampling_nodes(m, (-2, 2))[:10]
    with pytest.raises(ValueError):
        coeffs_from_samples(GridFunction("Line", nodes, np.ones(10)), m, (-2, 2))


def test_undersized_window_is_ill_conditioned():
    m = model_for(2.0)
    f = SpectralFunction(m, -5, np.ones(11))
    win = (-1, 1)
    nodes = sampling_nodes(m, win, oversample=4)
    with pytest.raises(IllConditioned):
        coeffs_from_samples(GridFunction("Line", nodes, f(nodes)), m, win)


# -------------------------------------------------------- translate sums


@settings(max_examples=25, deadline=None)
@given(spectral(), st.floats(-2, 2))
def test_shift_semantics(f, t):
    x = np.array([0.1, 1.5]) + (1j if f.model.is_discrete else 0)
    assert np.allclose(f.shifted(t)(x), f(x - t))


@given(spectral(), st.floats(-2, 2), st.floats(-2, 2))
def test_shift_group_law(f, s, t):
    a = f.shifted(s).shifted(t)
    x = np.array([0.4]) + (1j if f.model.is_discrete else 0)
    assert np.allclose(a(x), f.shifted(s + t)(x))


def test_translate_sum_projection_recovers_coefficients():
    m = model_for(2.0)
    f = SpectralFunction(m, -1, [1.0, 2.0, 0.5j])
    ts = f.shifted(0.7) - f.shifted(0.7) + f
    assert ts.project().trimmed(1e-10).allclose(f, 1e-9)


def test_translate_sum_rejects_mixed_models():
    a = SpectralFunction.basis(model_for(2.0), 0)
    b = SpectralFunction.basis(model_for(5.0), 0)
    with pytest.raises(ValueError):
        TranslateSum(((0.0, a), (1.0, b)))


# -------------------------------------------------------- serialization


@given(spectral())
def test_json_round_trip(f):
    assert SpectralFunction.from_json(f.to_json()) == f


def test_grid_csv_round_trip():
    f = SpectralFunction.basis(model_for(-8.0), 3)
    g = f.evaluate(np.array([0.5j, 1 + 1j, -2 + 0.25j]), "HalfPlane")
    back = GridFunction.from_csv(g.to_csv(), "HalfPlane")
    assert np.allclose(back.nodes, g.nodes) and np.allclose(back.values, g.values, rtol=1e-15)


def test_evaluate_derivative_cap():
    f = SpectralFunction.basis(model_for(2.0), 0)
    with pytest.raises(ValueError):
        f.evaluate(np.array([0.0]), derivative_order=7)
