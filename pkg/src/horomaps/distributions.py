"""Boundary jets, invariant distributions, the A_T average and dual functions."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import quad
from .errors import UnsupportedIndex
from .models import (
    ModelSpace,
    SpectralFunction,
    TranslateSum,
    basis_norms_sq,
    model_for,
)

DELTA0, DELTAR, DELTAHAT = "Delta0", "DeltaR", "DeltaHat"


@dataclass(frozen=True)
class InvariantDistribution:
    kind: str
    model: ModelSpace
    r: int = 0
    k: int | None = None
    T: float | None = None
    y: float | None = None

    def __post_init__(self):
        if self.kind not in (DELTA0, DELTAR, DELTAHAT):
            raise ValueError(f"unknown distribution kind {self.kind!r}")
        if self.kind == DELTAHAT:
            if self.k is None or self.T is None or self.T <= 0:
                raise ValueError("DeltaHat needs an integer k and T > 0")
            if self.model.is_discrete and (self.y is None or self.y <= 0):
                raise ValueError("discrete-series DeltaHat needs y > 0")
            if not self.model.is_discrete and self.y is not None:
                raise ValueError("DeltaHat for mu > 0 takes no y")

    def sobolev_order(self, eps: float = 0.0) -> float:
        """Claimed order: the distribution is bounded on W^(order)."""
        base = (1 + self.model.nu.real) / 2
        if self.kind == DELTA0:
            return base + eps
        if self.kind == DELTAR:
            return self.r + base + eps
        return (1.0 if self.model.is_discrete else base) + eps

    def __call__(self, f):
        if self.kind == DELTAHAT:
            return eval_deltahat(f, self.k, self.T, self.y)
        return eval_boundary_jet(f, self.r if self.kind == DELTAR else 0)

    def params(self) -> dict:
        out = {"mu": self.model.mu}
        if self.kind == DELTAR:
            out["r"] = self.r
        if self.kind == DELTAHAT:
            out.update(k=self.k, T=self.T)
            if self.y is not None:
                out["y"] = self.y
        return out


def delta0(model: ModelSpace) -> InvariantDistribution:
    return InvariantDistribution(DELTA0, model)


def delta_r(model: ModelSpace, r: int) -> InvariantDistribution:
    return InvariantDistribution(DELTAR, model, r=r)


def delta_hat(model: ModelSpace, k: int, T: float, y: float | None = None) -> InvariantDistribution:
    return InvariantDistribution(DELTAHAT, model, k=k, T=T, y=y)


# --------------------------------------------------------- boundary jets


def _jet_weights(f: SpectralFunction, r: int) -> np.ndarray:
    ks = f.indices.astype(float)
    w = (2j * ks) ** r
    if not f.model.is_discrete:
        w = w * np.where(f.indices % 2 == 0, 1.0, -1.0)
    return w


def boundary_jets(f, rmax: int) -> np.ndarray:
    """(delta^(0)(f), ..., delta^(rmax)(f)).

    Exact in coefficient space.  For translate sums each term is moved back
    by the matrix exponential of the U action on the jets.
    """
    if isinstance(f, SpectralFunction):
        return np.array([np.sum(f.coeffs * _jet_weights(f, r)) for r in range(rmax + 1)])
    if isinstance(f, TranslateSum):
        from .solver import exp_action, lu_delta_matrix

        c = lu_delta_matrix(rmax, f.nu)
        total = np.zeros(rmax + 1, dtype=complex)
        for t, s in f.terms:
            e = exp_action(c, t)
            total += e.T @ boundary_jets(s, rmax)
        return total
    if hasattr(f, "boundary_jets"):
        return f.boundary_jets(rmax)
    raise TypeError("boundary jets need a SpectralFunction or a TranslateSum; use boundary_value for samples")


def eval_boundary_jet(f, r: int) -> complex:
    """delta^(r)(f) = (Theta^r delta^(0))(f)."""
    return complex(boundary_jets(f, r)[r])


def _phi_on_rays(f, model: ModelSpace, x):
    """Phi sampled toward the boundary point, x = distance parameter (1/h)."""
    x = np.asarray(x, dtype=float)
    if model.is_discrete:
        nu = model.series.nu_int
        z = 1j * x
        return [np.asarray(f(z), dtype=complex) * (z + 1j) ** (nu + 1)]
    p = 1 + model.nu
    out = []
    for side in (1.0, -1.0):
        out.append(np.asarray(f(side * x), dtype=complex) * np.exp(0.5 * p * np.log1p(x * x)))
    return out


def boundary_value(f, model: ModelSpace, steps: int = 8, degree: int = 4) -> complex:
    """delta^(0) of a plain callable, by extrapolation to the boundary point.

    mu > 0: Phi = f(x)(1+x^2)^((1+nu)/2) as x -> +-inf (both ends,
    averaged).  Discrete: Phi = f(z)(z + i)^(nu+1) as z -> i*inf.

    A geometric scan first locates where Phi stops changing.  When the
    envelope of |Phi| keeps falling until rounding takes over (Schwartz-type
    inputs) the sample at the smallest envelope is returned; otherwise a
    polynomial in 1/x through the last stable stretch is extrapolated to 0.
    """
    X = 10.0 * 2.0 ** np.arange(17)
    env = []
    for a in X:
        xs = np.linspace(a, 2 * a, 9)
        env.append(max(float(np.max(np.abs(v))) for v in _phi_on_rays(f, model, xs)))
    env = np.array(env)
    j = int(np.argmin(env))
    if env[j] < 1e-6 * env.max():
        vals = _phi_on_rays(f, model, np.array([X[j]]))
        return complex(np.mean([v[0] for v in vals]))
    x = 1e3 * 2.0 ** np.arange(steps)
    h = 1.0 / x
    est = [np.polyval(np.polyfit(h, v, degree), 0.0) for v in _phi_on_rays(f, model, x)]
    return complex(np.mean(est))


# ------------------------------------------------------------ Fourier side


def regularized(f):
    """For mu >= 1 subtract delta^(0)(f) u_0 so the transform exists."""
    if f.model.series.kind != "Principal":
        return f
    if not isinstance(f, (SpectralFunction, TranslateSum)):
        return f
    d0 = eval_boundary_jet(f, 0)
    if d0 == 0:
        return f
    return f - SpectralFunction.basis(f.model, 0, d0)


def deltahat_estimate(f, k: int, T: float, y: float | None = None, spec: quad.QuadratureSpec | None = None, analytic: bool | None = None) -> quad.IntegralEstimate:
    model = f.model
    if model.is_discrete:
        if y is None or y <= 0:
            raise ValueError("discrete-series DeltaHat needs y > 0")
        return quad.fourier_estimate(f, k / T, y, spec, analytic)
    return quad.fourier_estimate(regularized(f), k / T, 0.0, spec, analytic)


def eval_deltahat(f, k: int, T: float, y: float | None = None, spec: quad.QuadratureSpec | None = None) -> complex:
    """The invariant distribution delta-hat_{k/T} (on the line y for mu <= 0)."""
    return complex(deltahat_estimate(f, k, T, y, spec).value)


# --------------------------------------------------------- order estimate


def distribution_order_estimate(d: InvariantDistribution, s_grid, window: int, spec: quad.QuadratureSpec | None = None) -> dict:
    """Truncated dual-norm proxy (sum_k |d(u_k)|^2 / ||u_k||_s^2)^(1/2).

    The basis is orthogonal, so this is the exact dual norm of ``d``
    restricted to the window; a diagnostic for the order at which the
    distribution becomes bounded, not a proof.
    """
    model = d.model
    if model.is_discrete:
        ks = np.arange(model.min_index, model.min_index + window + 1)
    else:
        ks = np.arange(-window, window + 1)
    values = np.empty(ks.size, dtype=complex)
    for i, k in enumerate(ks):
        values[i] = d(SpectralFunction.basis(model, int(k)))
    norms = basis_norms_sq(model.series, ks)
    lam = 1.0 + model.mu + 8.0 * ks.astype(float) ** 2
    return {float(s): float(np.sqrt(np.sum(np.abs(values) ** 2 / (lam**s * norms)))) for s in s_grid}


# ------------------------------------------------------------------- A_T


class FlowAverage:
    """x -> int_0^T f(x - t) dt, the time-T flow average of f."""

    def __init__(self, f, T: float, order: int = 16):
        self.f = f
        self.T = float(T)
        panels = max(4, int(math.ceil(4 * abs(self.T))))
        self._t, self._w = quad.panel_rule(np.linspace(0.0, self.T, panels + 1), order)

    @property
    def model(self) -> ModelSpace:
        return self.f.model

    @property
    def shift_extent(self) -> float:
        return getattr(self.f, "shift_extent", 0.0) + abs(self.T)

    @property
    def index_span(self) -> int:
        return getattr(self.f, "index_span", 0)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        flat = z.reshape(-1)
        out = np.zeros(flat.shape, dtype=complex)
        for t, w in zip(self._t, self._w):
            out += w * np.asarray(self.f(flat - t))
        return out.reshape(z.shape)

    def boundary_jets(self, rmax: int) -> np.ndarray:
        from .solver import exp_action, lu_delta_matrix

        base = boundary_jets(self.f, rmax)
        c = lu_delta_matrix(rmax, self.f.nu)
        acc = np.zeros(rmax + 1, dtype=complex)
        for t, w in zip(self._t, self._w):
            acc += w * (exp_action(c, t).T @ base)
        return acc


def apply_AT(f, T: float) -> FlowAverage:
    return FlowAverage(f, T)


def at_fourier_multiplier(xi, T: float):
    """Transform of A_T f divided by that of f: (1 - e^{-2 pi i T xi})/(2 pi i xi)."""
    xi = np.asarray(xi, dtype=float)
    out = np.empty(xi.shape, dtype=complex)
    small = np.abs(xi) < 1e-12
    out[small] = T
    x = xi[~small]
    out[~small] = (1 - np.exp(-2j * np.pi * T * x)) / (2j * np.pi * x)
    return out


# ---------------------------------------------------------- dual functions


def bump(u):
    """C-infinity bump exp(1 - 1/(1 - u^2)) on |u| < 1, equal to 1 at 0."""
    u = np.asarray(u, dtype=float)
    out = np.zeros(u.shape)
    inside = np.abs(u) < 1
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - u[inside] ** 2))
    return out


@dataclass(frozen=True)
class DualFunction:
    """Function whose transform is a bump; dual to one delta-hat."""

    target: InvariantDistribution
    center: float
    width: float
    panels: int = field(default=32)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def model(self) -> ModelSpace:
        return self.target.model

    def profile(self, eta):
        """Stored transform profile: bump, with e^{-2 pi eta} folded in for mu <= 0."""
        eta = np.asarray(eta, dtype=float)
        b = bump((eta - self.center) / self.width)
        if self.model.is_discrete:
            return b * np.exp(-2 * np.pi * eta)
        return b

    def grid_values(self, h: float, offset: float, X: float, y: float) -> np.ndarray:
        """Samples on z_j = (j + offset) h + iy, |j| <= X/h + 1, cached per grid."""
        key = (h, offset, X, y)
        if key not in self._cache:
            if len(self._cache) > 16:
                self._cache.clear()
            j = np.arange(-int(X / h) - 1, int(X / h) + 2)
            self._cache[key] = self((j + offset) * h + 1j * y)
        return self._cache[key]

    @property
    def band(self) -> tuple[float, float]:
        """Support of the transform along horizontal lines."""
        return (self.center - self.width, self.center + self.width)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        flat = z.reshape(-1)
        out = np.empty(flat.shape, dtype=complex)
        order = np.argsort(np.abs(flat.real))
        for s in range(0, flat.size, 512):
            sel = order[s : s + 512]
            reach = float(np.max(np.abs(flat[sel].real)))
            # 16-point Gauss panels integrate e^{i phi} over 10 radians to rounding
            panels = max(self.panels, int(math.ceil(2 * np.pi * 2 * self.width * reach / 10.0)) + 4)
            eta, w = quad.panel_rule(np.linspace(self.center - self.width, self.center + self.width, panels + 1), 16)
            shift = 1j if self.model.is_discrete else 0.0
            phase = np.exp(2j * np.pi * np.outer(flat[sel] - shift, eta))
            out[sel] = phase @ (self.profile(eta) * w)
        return out.reshape(z.shape)


def dual_function(k: int, T: float, model: ModelSpace, width: float | None = None) -> DualFunction:
    """Function chi with delta-hat_{j/T}(chi) = 1 if j == k else 0."""
    from .config import DEFAULTS

    if width is None:
        width = DEFAULTS["distributions"]["bump_width_fraction"] / T
    if not 0 < width < 1 / (2 * T):
        raise ValueError("width must lie in (0, 1/(2T))")
    if model.is_discrete:
        if k <= 0:
            raise UnsupportedIndex("discrete-series dual functions need k >= 1")
        target = delta_hat(model, k, T, 1.0)
    else:
        target = delta_hat(model, k, T)
    return DualFunction(target, k / T, width)


def report_rows(f, distributions, spec: quad.QuadratureSpec | None = None) -> list[dict]:
    """Rows {kind, params, value_re, value_im, error} for the CLI report."""
    rows = []
    for d in distributions:
        if d.kind == DELTAHAT:
            est = deltahat_estimate(f, d.k, d.T, d.y, spec)
            val, err = complex(est.value), float(est.error_estimate)
        else:
            val, err = eval_boundary_jet(f, d.r if d.kind == DELTAR else 0), 0.0
        rows.append({"kind": d.kind, "params": d.params(), "value_re": val.real, "value_im": val.imag, "error": err})
    return rows
