"""Quadrature engines used as independent oracles.

Every engine returns an :class:`IntegralEstimate` whose error estimate is
the difference between the last two refinement levels (plus a fitted
power-law tail allowance where a tail is truncated).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

from .config import DEFAULTS
from .errors import (
    OscillationUnderresolved,
    SingularityResolutionFailure,
    TailDivergence,
)


@dataclass(frozen=True)
class QuadratureSpec:
    # defaults are read at construction so that a loaded config applies
    extent: float = field(default_factory=lambda: DEFAULTS["quad"]["extent"])
    panels: int = field(default_factory=lambda: DEFAULTS["quad"]["panels"])
    order: int = field(default_factory=lambda: DEFAULTS["quad"]["order"])
    grading: float = field(default_factory=lambda: DEFAULTS["quad"]["grading"])
    tolerance: float = field(default_factory=lambda: DEFAULTS["quad"]["tolerance"])
    max_nodes: int = field(default_factory=lambda: DEFAULTS["quad"]["max_nodes"])

    def __post_init__(self):
        if self.grading < 1:
            raise ValueError("grading must be >= 1")
        if self.panels * self.order > self.max_nodes:
            raise ValueError("panels * order exceeds the node cap")
        if self.extent <= 0 or self.panels < 1 or self.order < 2:
            raise ValueError("invalid quadrature spec")

    def refined(self) -> "QuadratureSpec":
        return replace(self, panels=2 * self.panels)

    @classmethod
    def from_config(cls, cfg: dict) -> "QuadratureSpec":
        q = cfg["quad"]
        return cls(q["extent"], q["panels"], q["order"], q["grading"], q["tolerance"], q["max_nodes"])


@dataclass(frozen=True)
class IntegralEstimate:
    value: complex
    error_estimate: float

    def __complex__(self):
        return complex(self.value)


# ------------------------------------------------------------- primitives


@lru_cache(maxsize=32)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


@lru_cache(maxsize=64)
def _gauss_jacobi(order: int, beta: float) -> tuple[np.ndarray, np.ndarray]:
    x, w = roots_jacobi(order, 0.0, beta)
    return x, w


def panel_rule(breaks, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes and weights on consecutive breaks."""
    b = np.asarray(breaks, dtype=float)
    x, w = gauss_legendre(order)
    mid = 0.5 * (b[1:] + b[:-1])
    half = 0.5 * (b[1:] - b[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def graded_breaks(a: float, b: float, panels: int, grading: float = 1.0, toward: str | None = None) -> np.ndarray:
    """Panel breaks on [a, b], polynomially graded toward an endpoint."""
    s = np.linspace(0.0, 1.0, panels + 1)
    if toward == "left":
        s = s**grading
    elif toward == "right":
        s = 1 - (1 - s) ** grading
    elif toward == "both":
        s = 0.5 * np.where(s < 0.5, (2 * s) ** grading, 2 - (2 - 2 * s) ** grading)
    return a + (b - a) * s


def geometric_breaks(a: float, b: float, smallest: float, ratio: float = 0.5) -> np.ndarray:
    """Breaks on [a, b] refined geometrically toward ``a`` down to ``smallest``."""
    length = b - a
    pts = [b]
    d = length
    while d * ratio > smallest:
        d *= ratio
        pts.append(a + d)
    pts.append(a)
    return np.array(pts[::-1])


def _sum(f, nodes, weights) -> complex:
    vals = np.asarray(f(nodes), dtype=complex)
    return complex(np.sum(vals * weights))


# ------------------------------------------------------------ real line


def _decay_exponent(f, L: float) -> float:
    """Fitted power-law exponent of |f| over x in [L, 16L] on both sides."""
    xs = L * 2.0 ** np.arange(5)
    worst = np.inf
    for sign in (1.0, -1.0):
        v = np.abs(np.asarray(f(sign * xs), dtype=complex))
        if np.all(v == 0):
            continue
        v = np.maximum(v, 1e-300)
        slope = np.polyfit(np.log(xs), np.log(v), 1)[0]
        worst = min(worst, -slope)
    return worst


def _line_value(f, L: float, panels: int, order: int, layers: int) -> complex:
    nodes, weights = panel_rule(np.linspace(-L, L, panels + 1), order)
    total = _sum(f, nodes, weights)
    # x = +-L/t maps the tails onto (0, 1], refined geometrically toward 0.
    tb = geometric_breaks(0.0, 1.0, 2.0 ** (-layers))[1:]
    tn, tw = panel_rule(tb, order)
    jac = L / tn**2
    total += _sum(lambda t: f(L / t), tn, tw * jac)
    total += _sum(lambda t: f(-L / t), tn, tw * jac)
    return total


def integrate_line(f, spec: QuadratureSpec | None = None) -> IntegralEstimate:
    """Integral of f over the real line.

    [-extent, extent] uses composite Gauss panels; the two tails are mapped
    onto finite intervals.  The sampled decay exponent must exceed 1.
    """
    spec = spec or QuadratureSpec()
    L = spec.extent
    p = _decay_exponent(f, L)
    if not p > 1.0:
        raise TailDivergence(f"sampled decay exponent {p:.3f} <= 1")
    # Innermost mapped layer t_min = 2**-layers; the omitted piece is bounded
    # by the fitted power law.
    layers = 60
    coarse = _line_value(f, L, spec.panels, spec.order, layers)
    fine = _line_value(f, L, 2 * spec.panels, spec.order, layers + 4)
    if np.isfinite(p):
        scale = max(abs(complex(f(np.array([L]))[0])), abs(complex(f(np.array([-L]))[0])))
        t_min = 2.0 ** -(layers + 4)
        omitted = 2 * scale * L * t_min ** (p - 1) / (p - 1)
    else:
        omitted = 0.0
    return IntegralEstimate(fine, abs(fine - coarse) + omitted)


def integrate_interval(f, a: float, b: float, spec: QuadratureSpec | None = None, toward: str | None = None) -> IntegralEstimate:
    spec = spec or QuadratureSpec()
    vals = []
    for panels in (spec.panels, 2 * spec.panels):
        n, w = panel_rule(graded_breaks(a, b, panels, spec.grading if toward else 1.0, toward), spec.order)
        vals.append(_sum(f, n, w))
    return IntegralEstimate(vals[1], abs(vals[1] - vals[0]))


# ------------------------------------------------- complementary pairing


def _singular_rule(half_width: float, beta: float, panels: int, order: int, layers: int = 12):
    """Nodes/weights for int_0^half_width psi**beta g(psi) dpsi.

    The first panel carries the exact Jacobi weight; the next ``layers``
    panels grow geometrically away from the singular point, the rest are
    uniform.  Returned weights absorb psi**beta.
    """
    first = half_width * 2.0 ** (-layers) / max(panels, 1)
    xj, wj = _gauss_jacobi(order, beta)
    n0 = first * (1 + xj) / 2
    w0 = wj * (first / 2) ** (beta + 1)
    outer = [first * 2.0**j for j in range(1, layers + 1) if first * 2.0**j < half_width / panels]
    breaks = np.concatenate([[first], outer, np.linspace(outer[-1] if outer else first, half_width, panels + 1)[1:]])
    n1, w1 = panel_rule(breaks, order)
    return np.concatenate([n0, n1]), np.concatenate([w0, w1 * n1**beta])


def _theta_series(f, theta: np.ndarray) -> np.ndarray:
    w = np.exp(2j * theta)
    acc = np.full(theta.shape, f.coeffs[-1], dtype=complex)
    for c in f.coeffs[-2::-1]:
        acc = acc * w + c
    return acc * w ** f.k_min


def _pairing_value(f, g, nu: float, panels: int, order: int) -> complex:
    span = max(f.index_span, g.index_span)
    m = max(64, 4 * (2 * span + 1))
    theta = -np.pi / 2 + np.pi * (np.arange(m) + 0.5) / m
    phi_f = _theta_series(f, theta)
    psi, wpsi = _singular_rule(np.pi / 2, nu - 1.0, panels, order)
    # sin(psi)**(nu-1) = psi**(nu-1) * (sin(psi)/psi)**(nu-1)
    smooth = (np.sin(psi) / psi) ** (nu - 1.0)
    total = 0j
    for sign in (1.0, -1.0):
        shifted = theta[None, :] - sign * psi[:, None]
        inner = (phi_f[None, :] * np.conj(_theta_series(g, shifted))).mean(axis=1) * np.pi
        total += np.sum(inner * smooth * wpsi)
    return total


def integrate_complementary_pairing(f, g, spec: QuadratureSpec | None = None) -> IntegralEstimate:
    """Double integral of f(x) conj(g(y)) |x - y|**(nu - 1).

    In circle coordinates the cosine weights cancel and the kernel becomes
    |sin(theta - phi)|**(nu-1); the theta variable is integrated by the
    periodic trapezoid rule and the difference psi = theta - phi by a mesh
    refined toward the diagonal psi = 0.
    """
    spec = spec or QuadratureSpec()
    nu = float(np.real(f.nu))
    if not 0 < nu < 1:
        raise ValueError("pairing is defined for the complementary series (0 < nu < 1)")
    if not np.any(f.coeffs) or not np.any(g.coeffs):
        return IntegralEstimate(0j, 0.0)
    span = max(f.index_span, g.index_span)
    panels = max(spec.panels // 4, 8, span // 2 + 4)
    coarse = _pairing_value(f, g, nu, panels, spec.order)
    fine = _pairing_value(f, g, nu, 2 * panels, spec.order)
    err = abs(fine - coarse)
    scale = max(1.0, abs(fine))
    if err > 10 * 1e-8 * scale:
        raise SingularityResolutionFailure(f"diagonal refinements differ by {err:.3e}")
    return IntegralEstimate(fine, err)


def complementary_basis_norms(nu: float, kmax: int, spec: QuadratureSpec | None = None) -> np.ndarray:
    """||u_k||^2, k = 0..kmax, for the complementary series by quadrature.

    Uses the reduction of the pairing to pi * int e^{2ik psi}|sin psi|^{nu-1}.
    """
    spec = spec or QuadratureSpec()
    ks = np.arange(kmax + 1)
    out = []
    for panels in (max(32, kmax // 2 + 8), max(64, kmax + 16)):
        psi, w = _singular_rule(np.pi / 2, nu - 1.0, panels, spec.order)
        smooth = (np.sin(psi) / psi) ** (nu - 1.0)
        out.append(2 * np.pi * (np.cos(2 * np.outer(ks, psi)) @ (smooth * w)))
    diff = np.max(np.abs(out[1] - out[0]) / np.abs(out[1]))
    if diff > 1e-9:
        raise SingularityResolutionFailure(f"complementary norms unstable ({diff:.2e})")
    return out[1]


# ------------------------------------------------------------ half-plane


def integrate_halfplane(f, nu: float, spec: QuadratureSpec | None = None, method: str = "disk") -> IntegralEstimate:
    """Integral of f(z) y**(nu-1) dx dy over the upper half-plane.

    ``method="disk"`` pulls back to the unit disk (the default);
    ``method="rectangle"`` integrates on the truncated rectangle
    [-X, X] x [y_min, y_max] with a mesh graded toward y = 0.
    """
    spec = spec or QuadratureSpec()
    if nu < 1:
        raise ValueError("the half-plane model needs nu >= 1")
    if method == "rectangle":
        return _halfplane_rectangle(f, nu, spec)
    vals = []
    for level in (1, 2):
        m = 64 * 2**level
        radial = max(16, spec.panels // 2) * level
        r_breaks = graded_breaks(0.0, 1.0, radial, spec.grading if nu < 2 else 1.0, "right")
        rn, rw = panel_rule(r_breaks, spec.order)
        ang = 2 * np.pi * (np.arange(m) + 0.5) / m
        xi = rn[:, None] * np.exp(1j * ang[None, :])
        z = -1j * (xi + 1) / (xi - 1)
        weight = 4 * (1 - rn[:, None] ** 2) ** (nu - 1) / np.abs(xi - 1) ** (2 * nu + 2)
        vals_grid = np.asarray(f(z), dtype=complex) * weight
        vals.append(complex(np.sum(vals_grid.mean(axis=1) * 2 * np.pi * rn * rw)))
    return IntegralEstimate(vals[1], abs(vals[1] - vals[0]))


def _halfplane_rectangle(f, nu: float, spec: QuadratureSpec) -> IntegralEstimate:
    q = DEFAULTS["quad"]
    X, y0, y1 = q["halfplane_x_extent"], q["halfplane_y_min"], q["halfplane_y_max"]
    vals = []
    for level in (1, 2):
        p = spec.panels * level
        xn, xw = panel_rule(graded_breaks(-X, X, p, spec.grading, "both"), spec.order)
        yn, yw = panel_rule(graded_breaks(y0, y1, p, spec.grading, "left"), spec.order)
        z = xn[:, None] + 1j * yn[None, :]
        grid = np.asarray(f(z), dtype=complex) * yn[None, :] ** (nu - 1)
        vals.append(complex(xw @ grid @ yw))
    return IntegralEstimate(vals[1], abs(vals[1] - vals[0]))


# --------------------------------------------------- Fourier transforms


def _is_analytic(f) -> bool:
    return hasattr(f, "shift_extent") and hasattr(f, "index_span")


def _core_breaks(L: float, xi: float, h_f: float, refine: int) -> np.ndarray:
    h = min(1.0 / (8 * abs(xi) + 1), h_f) / refine
    n = max(2, int(math.ceil(2 * L / h)))
    return np.linspace(-L, L, n + 1)


def _vertical_breaks(c: float, start_scale: float, refine: int) -> np.ndarray:
    """Breaks on [0, S] with e^{-cS} negligible, resolving e^{-cs} and f."""
    S = 40.0 / c
    pts = [0.0]
    b = 0.0
    while b < S:
        step = min(0.5 * (start_scale + b), 2.0 / c) / refine
        b = min(b + step, S)
        pts.append(b)
    return np.array(pts)


def _ft_analytic(f, xi: float, y: float, order: int, refine: int) -> complex:
    L = f.shift_extent + 2.0
    h_f = min(1.0, 4.0 / (1 + f.index_span))
    gx, gw = panel_rule(_core_breaks(L, xi, h_f, refine), order)
    z = gx + 1j * y
    total = complex(np.sum(np.asarray(f(z)) * np.exp(-2j * np.pi * xi * z) * gw))
    if xi == 0.0:
        tb = geometric_breaks(0.0, 1.0, 2.0 ** (-60 - 4 * refine))[1:]
        tn, tw = panel_rule(tb, order)
        jac = L / tn**2
        X = L / tb[0]
        for sgn in (1.0, -1.0):
            total += complex(np.sum(np.asarray(f(sgn * L / tn + 1j * y)) * tw * jac))
            # Beyond X the integrand is a power law A|x|^-p.  Only 1 < p < 2
            # leaves a visible remainder; p = 1 is the rounding floor of a
            # cancelled leading term and is skipped.
            f1, f2 = (complex(np.asarray(f(np.array([sgn * s * X + 1j * y])))[0]) for s in (1.0, 2.0))
            if f1 != 0 and f2 != 0:
                p = -cmath.log(f2 / f1) / math.log(2.0)
                if 1 + 1e-6 < p.real < 2 - 1e-6:
                    total += X * f1 / (p - 1)
        return total
    sigma = 1.0 if xi > 0 else -1.0
    c = 2 * np.pi * abs(xi)
    sn, sw = panel_rule(_vertical_breaks(c, 2.0, refine), order)
    damp = np.exp(-c * sn) * sw * (-1j * sigma)
    for side in (1.0, -1.0):
        z0 = side * L + 1j * y
        vals = np.asarray(f(z0 - 1j * sigma * sn))
        part = np.exp(-2j * np.pi * xi * z0) * np.sum(vals * damp)
        total += side * part
    return total


def _ft_sampled(f, xi: float, y: float, L: float, order: int, refine: int) -> tuple[complex, float]:
    gx, gw = panel_rule(_core_breaks(L, xi, 1.0, refine), order)
    z = gx + 1j * y
    val = complex(np.sum(np.asarray(f(z), dtype=complex) * np.exp(-2j * np.pi * xi * z) * gw))
    edge = max(abs(complex(f(np.array([L + 1j * y]))[0])), abs(complex(f(np.array([-L + 1j * y]))[0])))
    p = _decay_exponent(lambda x: f(x + 1j * y), L)
    if not p > 1.0:
        raise TailDivergence(f"sampled decay exponent {p:.3f} <= 1")
    tail = 0.0 if not np.isfinite(p) else 2 * edge * L / (p - 1)
    return val, tail


def fourier_estimate(f, xi: float, y: float = 0.0, spec: QuadratureSpec | None = None, analytic: bool | None = None) -> IntegralEstimate:
    """Transform int f(x + iy) exp(-2 pi i xi (x + iy)) dx with an error bar.

    Objects exposing an analytic continuation (spectral functions and their
    translate sums) have their tails integrated along vertical rays, where
    the oscillatory factor decays exponentially.  Plain callables are
    integrated on [-extent, extent] with a decay-based tail bound.
    """
    spec = spec or QuadratureSpec()
    xi = float(xi)
    analytic = _is_analytic(f) if analytic is None else analytic
    band = getattr(f, "band", None)
    if band is not None and not analytic:
        return _ft_bandlimited(f, xi, y, band)
    if analytic:
        coarse = _ft_analytic(f, xi, y, spec.order, 1)
        fine = _ft_analytic(f, xi, y, spec.order, 2)
        tail = 0.0
    else:
        coarse, _ = _ft_sampled(f, xi, y, spec.extent, spec.order, 1)
        fine, tail = _ft_sampled(f, xi, y, spec.extent, spec.order, 2)
    diff = abs(fine - coarse)
    if diff > max(spec.tolerance, 1e-3 * tail) * max(1.0, abs(fine)) and diff > 1e-14 * _scale(f, y):
        raise OscillationUnderresolved(f"halving the panel width changed the value by {diff:.3e}")
    return IntegralEstimate(fine, diff + tail)


def _scale(f, y: float) -> float:
    x = np.linspace(-4, 4, 33) + 1j * y
    return float(np.max(np.abs(np.asarray(f(x))))) + 1e-300


def fourier_transform(f, xi: float, y: float = 0.0, spec: QuadratureSpec | None = None, analytic: bool | None = None) -> complex:
    return fourier_estimate(f, xi, y, spec, analytic).value


def _ft_nodes(L: float, h_f: float, xi: float, y: float, order: int, refine: int):
    """Contour nodes z and weights w with F(xi) = sum w * f(z) (analytic f)."""
    gx, gw = panel_rule(_core_breaks(L, xi, h_f, refine), order)
    z = [gx + 1j * y]
    w = [gw * np.exp(-2j * np.pi * xi * (gx + 1j * y))]
    if xi == 0.0:
        tn, tw = panel_rule(geometric_breaks(0.0, 1.0, 2.0 ** (-60 - 4 * refine))[1:], order)
        for sgn in (1.0, -1.0):
            z.append(sgn * L / tn + 1j * y)
            w.append(tw * L / tn**2)
    else:
        sigma = 1.0 if xi > 0 else -1.0
        c = 2 * np.pi * abs(xi)
        sn, sw = panel_rule(_vertical_breaks(c, 2.0, refine), order)
        damp = np.exp(-c * sn) * sw * (-1j * sigma)
        for side in (1.0, -1.0):
            z0 = side * L + 1j * y
            z.append(z0 - 1j * sigma * sn)
            w.append(side * np.exp(-2j * np.pi * xi * z0) * damp)
    return np.concatenate(z), np.concatenate(w)


def fourier_transform_batch(f, xis, y: float = 0.0, order: int = 16, refine: int = 1, chunk: int = 400000) -> np.ndarray:
    """Transforms of an analytic object at many frequencies in few vectorized calls.

    Same contours as the single-frequency routine, without the refinement
    comparison; callers that need error bars use fourier_estimate.
    """
    xis = np.asarray(xis, dtype=float).ravel()
    L = f.shift_extent + 2.0
    h_f = min(1.0, 4.0 / (1 + f.index_span))
    out = np.empty(xis.size, dtype=complex)
    zs, ws, owner = [], [], []
    size = 0

    def flush():
        z = np.concatenate(zs)
        vals = np.asarray(f(z), dtype=complex) * np.concatenate(ws)
        idx = np.concatenate(owner)
        out[np.unique(idx)] = np.bincount(idx, vals.real, xis.size)[np.unique(idx)] + 1j * np.bincount(idx, vals.imag, xis.size)[np.unique(idx)]

    for i, xi in enumerate(xis):
        z, w = _ft_nodes(L, h_f, float(xi), y, order, refine)
        zs.append(z)
        ws.append(w)
        owner.append(np.full(z.size, i))
        size += z.size
        if size >= chunk:
            flush()
            zs, ws, owner, size = [], [], [], 0
    if zs:
        flush()
    return out


def _bandlimited_sum(f, xi: float, y: float, h: float, offset: float, X: float) -> complex:
    j = np.arange(-int(X / h) - 1, int(X / h) + 2)
    z = (j + offset) * h + 1j * y
    grid_values = getattr(f, "grid_values", None)
    vals = grid_values(h, offset, X, y) if grid_values else np.asarray(f(z), dtype=complex)
    return complex(h * np.sum(vals * np.exp(-2j * np.pi * xi * z)))


def _ft_bandlimited(f, xi: float, y: float, band) -> IntegralEstimate:
    """Transform of a function whose spectrum lies in ``band``.

    The trapezoid rule with step h is exact for such integrands once
    1/h exceeds the shifted spectral reach (no aliasing), so the only
    error is truncation; the extent grows until the samples are negligible.
    Two interleaved grids give the error bar.
    """
    lo, hi = band
    reach = max(abs(lo - xi), abs(hi - xi), 1e-3)
    # power-of-two steps let callers cache samples across frequencies
    h = 2.0 ** -math.ceil(math.log2(2 * reach))
    X = 40.0
    probe = lambda a, b: float(np.max(np.abs(np.asarray(f(np.concatenate([np.linspace(a, b, 64), -np.linspace(a, b, 64)]) + 1j * y)))))
    peak = probe(0.0, 4.0)
    while probe(0.75 * X, X) > 1e-12 * peak and X < 2560:
        X *= 2
    edge = probe(0.75 * X, X)
    a = _bandlimited_sum(f, xi, y, h, 0.0, X)
    b = _bandlimited_sum(f, xi, y, h, 0.5, X)
    damp = abs(np.exp(2 * np.pi * xi * y))
    return IntegralEstimate(0.5 * (a + b), abs(a - b) + 2 * edge * X * damp)
