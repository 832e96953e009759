"""Representation models, their orthogonal bases and coefficient calculus.

Functions with mu > 0 live on the real line (flow coordinate ``x``) or on
the circle chart ``theta = arctan(x)``.  Discrete-series functions live on
the upper half-plane (``z``) or on the unit disk ``xi = (z - i)/(z + i)``.
A :class:`SpectralFunction` stores the coefficients of a finite
combination of the basis vectors ``u_k``; a :class:`TranslateSum` stores a
finite sum of flow translates of such functions, which is how coboundaries
and solver corrections are represented exactly.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, IllConditioned
from .sl2core import DISCRETE, SeriesClass, classify

LINE, CIRCLE, HALFPLANE, DISK = "Line", "Circle", "HalfPlane", "Disk"
CHARTS = (LINE, CIRCLE, HALFPLANE, DISK)
_FLAT_CHARTS = (LINE, CIRCLE)
_HOLO_CHARTS = (HALFPLANE, DISK)


@dataclass(frozen=True)
class ModelSpace:
    series: SeriesClass
    chart: str

    def __post_init__(self):
        if self.chart not in CHARTS:
            raise ValueError(f"unknown chart {self.chart!r}")
        allowed = _HOLO_CHARTS if self.series.is_discrete else _FLAT_CHARTS
        if self.chart not in allowed:
            raise ValueError(f"chart {self.chart} is not available for {self.series.kind}")

    @property
    def mu(self) -> float:
        return self.series.mu

    @property
    def nu(self) -> complex:
        return self.series.nu

    @property
    def is_discrete(self) -> bool:
        return self.series.is_discrete

    @property
    def min_index(self) -> int | None:
        return self.series.lowest_weight

    @property
    def flow_chart(self) -> str:
        """Chart in which the horocycle flow is a plain translation."""
        return HALFPLANE if self.is_discrete else LINE


def model_for(mu: float, chart: str | None = None) -> ModelSpace:
    series = classify(mu)
    if chart is None:
        chart = HALFPLANE if series.is_discrete else LINE
    return ModelSpace(series, chart)


def _series_of(obj) -> SeriesClass:
    if isinstance(obj, SeriesClass):
        return obj
    if isinstance(obj, ModelSpace):
        return obj.series
    return classify(obj)


# ---------------------------------------------------------------- charts


def chart_map(point, from_chart: str, to_chart: str):
    """Move points between the two charts of the same model."""
    p = np.asarray(point)
    if from_chart == to_chart:
        _check_domain(p, from_chart)
        return point
    pair = (from_chart, to_chart)
    _check_domain(p, from_chart)
    if pair == (CIRCLE, LINE):
        out = np.tan(p)
    elif pair == (LINE, CIRCLE):
        out = np.arctan(p)
    elif pair == (DISK, HALFPLANE):
        out = -1j * (p + 1) / (p - 1)
    elif pair == (HALFPLANE, DISK):
        out = (p - 1j) / (p + 1j)
    else:
        raise ValueError(f"no chart map from {from_chart} to {to_chart}")
    return out if np.ndim(point) else out.item()


def _check_domain(p: np.ndarray, chart: str) -> None:
    if chart == LINE:
        if np.iscomplexobj(p) and np.any(p.imag != 0):
            raise DomainError("line points must be real")
        if not np.all(np.isfinite(p)):
            raise DomainError("line points must be finite")
    elif chart == CIRCLE:
        if np.iscomplexobj(p) and np.any(p.imag != 0):
            raise DomainError("circle points must be real")
        if np.any(np.abs(np.real(p)) >= np.pi / 2):
            raise DomainError("circle chart is the open interval (-pi/2, pi/2)")
    elif chart == HALFPLANE:
        if np.any(np.imag(p) <= 0):
            raise DomainError("half-plane points need positive imaginary part")
    elif chart == DISK:
        if np.any(np.abs(p) >= 1):
            raise DomainError("disk points need modulus < 1")
    else:
        raise ValueError(f"unknown chart {chart!r}")


def to_flow_coordinate(points, chart: str) -> np.ndarray:
    """Convert chart points to the line/half-plane coordinate."""
    p = np.asarray(points)
    if chart in (LINE, HALFPLANE):
        return p
    if chart == CIRCLE:
        return np.tan(p)
    if chart == DISK:
        return -1j * (p + 1) / (p - 1)
    raise ValueError(f"unknown chart {chart!r}")


# ------------------------------------------------------------ basis values


def _flat_parts(x, nu: complex):
    """Return (w, amplitude) with u_k(x) = w**k * amplitude on the line.

    Written as a product of principal powers of 1 + ix and 1 - ix, which is
    the analytic continuation off the real axis away from the cuts on the
    imaginary axis beyond +-i.
    """
    x = np.asarray(x, dtype=complex)
    a, b = 1 + 1j * x, 1 - 1j * x
    p = (1 + nu) / 2
    amp = np.exp(-p * (np.log(a) + np.log(b)))
    return a / b, amp


def _holo_parts(z, n: int):
    """Return (xi, amplitude) with u_{k}(z) = xi**(k - n) * amplitude."""
    z = np.asarray(z, dtype=complex)
    zi = z + 1j
    return (z - 1j) / zi, zi ** (-2 * n)


def basis_eval(series, k: int, point, chart: str, derivative_order: int = 0):
    """Evaluate u_k (or its derivative in the flow coordinate) at ``point``.

    Derivatives use the product rule on the closed forms: powers of
    ``1 +- ix`` for mu > 0 and powers of ``z -+ i`` for the discrete series.
    """
    series = _series_of(series)
    p = np.asarray(point)
    _check_domain(p, chart)
    if series.is_discrete and k < series.lowest_weight:
        raise IndexError(f"k={k} is below the lowest weight {series.lowest_weight}")
    if series.is_discrete:
        if chart == DISK and derivative_order == 0:
            nu = series.nu_int
            n = series.lowest_weight
            out = p ** (k - n) * ((1 - p) / -2j) ** (nu + 1)
            return out if np.ndim(point) else complex(out)
        z = to_flow_coordinate(p, chart)
        n = series.lowest_weight
        out = _leibniz(z - 1j, k - n, z + 1j, -(k + n), 1.0, 1.0, derivative_order)
    else:
        if chart == CIRCLE and derivative_order == 0:
            out = np.exp(2j * k * p) * np.exp((1 + series.nu) * np.log(np.cos(p)))
            return out if np.ndim(point) else complex(out)
        x = to_flow_coordinate(p, chart)
        q = (1 + series.nu) / 2
        out = _leibniz(1 + 1j * x, k - q, 1 - 1j * x, -k - q, 1j, -1j, derivative_order)
    return out if np.ndim(point) else complex(out)


def _falling(a, m: int):
    out = 1.0 + 0j
    for j in range(m):
        out *= a - j
    return out


def _leibniz(base_a, pa, base_b, pb, da, db, r: int):
    """r-th derivative of base_a**pa * base_b**pb with d(base)/dx = da, db."""
    base_a = np.asarray(base_a, dtype=complex)
    base_b = np.asarray(base_b, dtype=complex)
    total = np.zeros(np.broadcast(base_a, base_b).shape, dtype=complex)
    for m in range(r + 1):
        coef = math.comb(r, m) * _falling(pa, m) * da**m * _falling(pb, r - m) * db ** (r - m)
        if coef == 0:
            continue
        total = total + coef * _cpow(base_a, pa - m) * _cpow(base_b, pb - (r - m))
    return total


def _cpow(base, expo):
    if isinstance(expo, (int, np.integer)) or (
        isinstance(expo, float) and float(expo).is_integer()
    ) or (isinstance(expo, complex) and expo.imag == 0 and float(expo.real).is_integer()):
        return base ** int(round(np.real(expo)))
    return np.exp(expo * np.log(base))


# ------------------------------------------------------------ basis norms


def basis_norm_sq(series, k: int) -> float:
    """Squared model norm of u_k."""
    series = _series_of(series)
    if series.is_discrete:
        return float(np.exp(log_discrete_norm_sq(series.nu_int, k)))
    if series.kind == "Principal":
        return math.pi
    return float(complementary_norms(series.nu_real, abs(k))[abs(k)])


def log_discrete_norm_sq(nu: int, k) -> np.ndarray:
    """log of (pi/nu) 4**(-nu) (k-n)! nu! / (k+n-1)! via log-gamma."""
    n = (1 + nu) // 2
    k = np.asarray(k, dtype=float)
    if np.any(k < n):
        raise IndexError("index below the lowest weight")
    return (
        math.log(math.pi / nu)
        - nu * math.log(4.0)
        + gammaln(k - n + 1)
        + gammaln(nu + 1.0)
        - gammaln(k + n)
    )


@lru_cache(maxsize=64)
def _complementary_table(nu: float, kmax: int) -> tuple:
    from . import quad

    values = quad.complementary_basis_norms(nu, kmax)
    return tuple(float(v) for v in values)


def complementary_norms(nu: float, kmax: int) -> np.ndarray:
    """Cached quadrature values of ||u_k||^2 for k = 0..kmax (0 < nu < 1).

    The table is built in blocks of 64 so that nearby requests share work;
    ||u_{-k}|| = ||u_k|| by the reflection theta -> -theta.
    """
    block = 64 * (kmax // 64 + 1)
    return np.asarray(_complementary_table(round(float(nu), 15), block)[: kmax + 1])


def basis_norms_sq(series, ks) -> np.ndarray:
    series = _series_of(series)
    ks = np.asarray(ks, dtype=int)
    if series.is_discrete:
        return np.exp(log_discrete_norm_sq(series.nu_int, ks))
    if series.kind == "Principal":
        return np.full(ks.shape, math.pi)
    table = complementary_norms(series.nu_real, int(np.max(np.abs(ks))) if ks.size else 0)
    return table[np.abs(ks)]


# ------------------------------------------------------- spectral functions


class SpectralFunction:
    """Finite combination sum_k c_k u_k over the window k_min..k_max."""

    __slots__ = ("model", "k_min", "coeffs")

    def __init__(self, model: ModelSpace, k_min: int, coeffs):
        c = np.array(coeffs, dtype=complex).reshape(-1)
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        if model.is_discrete and k_min < model.min_index:
            raise IndexError("discrete-series window starts below the lowest weight")
        c.setflags(write=False)
        object.__setattr__(self, "model", model)
        object.__setattr__(self, "k_min", int(k_min))
        object.__setattr__(self, "coeffs", c)

    def __setattr__(self, name, value):
        raise AttributeError("SpectralFunction is immutable")

    # construction helpers
    @classmethod
    def basis(cls, model: ModelSpace, k: int, scale: complex = 1.0) -> "SpectralFunction":
        return cls(model, k, [scale])

    @classmethod
    def zero(cls, model: ModelSpace) -> "SpectralFunction":
        k0 = model.min_index if model.is_discrete else 0
        return cls(model, k0, [0.0])

    @classmethod
    def from_dict(cls, model: ModelSpace, mapping: dict) -> "SpectralFunction":
        ks = sorted(mapping)
        out = np.zeros(ks[-1] - ks[0] + 1, dtype=complex)
        for k in ks:
            out[k - ks[0]] = mapping[k]
        return cls(model, ks[0], out)

    @property
    def k_max(self) -> int:
        return self.k_min + self.coeffs.size - 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.k_min, self.k_max + 1)

    @property
    def nu(self) -> complex:
        return self.model.nu

    @property
    def mu(self) -> float:
        return self.model.mu

    def coeff(self, k: int) -> complex:
        if self.k_min <= k <= self.k_max:
            return complex(self.coeffs[k - self.k_min])
        return 0j

    def on_window(self, k_min: int, k_max: int) -> "SpectralFunction":
        """Same function re-expressed on a window (truncating if smaller)."""
        out = np.zeros(k_max - k_min + 1, dtype=complex)
        lo, hi = max(k_min, self.k_min), min(k_max, self.k_max)
        if lo <= hi:
            out[lo - k_min : hi - k_min + 1] = self.coeffs[lo - self.k_min : hi - self.k_min + 1]
        return SpectralFunction(self.model, k_min, out)

    def trimmed(self, tol: float = 0.0) -> "SpectralFunction":
        nz = np.nonzero(np.abs(self.coeffs) > tol)[0]
        if nz.size == 0:
            return SpectralFunction.zero(self.model) if self.model.is_discrete else SpectralFunction(self.model, 0, [0])
        return SpectralFunction(self.model, self.k_min + nz[0], self.coeffs[nz[0] : nz[-1] + 1])

    def with_chart(self, chart: str) -> "SpectralFunction":
        return SpectralFunction(ModelSpace(self.model.series, chart), self.k_min, self.coeffs)

    # algebra
    def _check_same(self, other: "SpectralFunction") -> None:
        if other.model.series != self.model.series:
            raise ValueError("functions live in different models")

    def __add__(self, other):
        if isinstance(other, TranslateSum):
            return TranslateSum.of(self) + other
        if not isinstance(other, SpectralFunction):
            return NotImplemented
        self._check_same(other)
        lo, hi = min(self.k_min, other.k_min), max(self.k_max, other.k_max)
        a, b = self.on_window(lo, hi), other.on_window(lo, hi)
        return SpectralFunction(self.model, lo, a.coeffs + b.coeffs)

    def __neg__(self):
        return SpectralFunction(self.model, self.k_min, -self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return SpectralFunction(self.model, self.k_min, self.coeffs * complex(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / complex(scalar))

    def __eq__(self, other):
        if not isinstance(other, SpectralFunction):
            return NotImplemented
        return (
            self.model == other.model
            and self.k_min == other.k_min
            and np.array_equal(self.coeffs, other.coeffs)
        )

    __hash__ = None

    def __repr__(self):
        return (
            f"SpectralFunction(mu={self.mu:g}, chart={self.model.chart}, "
            f"k=[{self.k_min},{self.k_max}])"
        )

    def allclose(self, other: "SpectralFunction", atol: float = 1e-12) -> bool:
        lo, hi = min(self.k_min, other.k_min), max(self.k_max, other.k_max)
        return bool(
            np.allclose(self.on_window(lo, hi).coeffs, other.on_window(lo, hi).coeffs, rtol=0, atol=atol)
        )

    # evaluation
    def __call__(self, z):
        """Value (or analytic continuation) at flow-coordinate points."""
        return _eval_flow(self, np.asarray(z, dtype=complex))

    def derivative(self, r: int = 1) -> "SpectralFunction":
        """Coefficients of d^r f/dx^r, using d/dx = -U."""
        out = self
        for _ in range(r):
            out = -u_field_apply(out)
        return out

    def evaluate(self, nodes, chart: str | None = None, derivative_order: int = 0) -> "GridFunction":
        return evaluate(self, nodes, chart, derivative_order)

    def shifted(self, t: float) -> "TranslateSum":
        """x -> f(x - t), the flow by time t."""
        return TranslateSum(((float(t), self),))

    @property
    def shift_extent(self) -> float:
        return 0.0

    @property
    def index_span(self) -> int:
        return max(abs(self.k_min), abs(self.k_max))

    # serialization
    def to_json_dict(self) -> dict:
        return {
            "mu": self.mu,
            "chart": self.model.chart,
            "k_min": self.k_min,
            "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, data: dict) -> "SpectralFunction":
        model = model_for(float(data["mu"]), data.get("chart"))
        coeffs = [complex(re, im) for re, im in data["coeffs"]]
        return cls(model, int(data["k_min"]), coeffs)

    @classmethod
    def from_json(cls, text: str) -> "SpectralFunction":
        return cls.from_json_dict(json.loads(text))


def _horner(coeffs: np.ndarray, w: np.ndarray) -> np.ndarray:
    acc = np.full(w.shape, coeffs[-1], dtype=complex)
    for c in coeffs[-2::-1]:
        acc = acc * w + c
    return acc


def _eval_flow(f: SpectralFunction, z: np.ndarray) -> np.ndarray:
    if f.model.is_discrete:
        n = f.model.min_index
        xi, amp = _holo_parts(z, n)
        base = xi ** (f.k_min - n) if f.k_min != n else 1.0
        return amp * base * _horner(f.coeffs, xi)
    w, amp = _flat_parts(z, f.nu)
    base = w ** f.k_min if f.k_min else 1.0
    return amp * base * _horner(f.coeffs, w)


def _eval_chart(f: SpectralFunction, p: np.ndarray, chart: str) -> np.ndarray:
    if chart == CIRCLE:
        w = np.exp(2j * p)
        amp = np.exp((1 + f.nu) * np.log(np.cos(p)))
        return amp * w ** f.k_min * _horner(f.coeffs, w)
    if chart == DISK:
        n = f.model.min_index
        nu = f.model.series.nu_int
        amp = ((1 - p) / -2j) ** (nu + 1)
        return amp * p ** (f.k_min - n) * _horner(f.coeffs, p)
    return _eval_flow(f, np.asarray(p, dtype=complex))


# ----------------------------------------------------------- grid functions


@dataclass(frozen=True)
class GridFunction:
    chart: str
    nodes: np.ndarray
    values: np.ndarray
    derivative_order: int = 0

    def __post_init__(self):
        nodes = np.asarray(self.nodes)
        values = np.asarray(self.values, dtype=complex)
        if nodes.shape != values.shape or nodes.ndim != 1:
            raise ValueError("nodes and values must be matching 1-D arrays")
        if self.chart in _FLAT_CHARTS or np.isrealobj(nodes):
            if nodes.size > 1 and not np.all(np.diff(np.real(nodes)) > 0):
                raise ValueError("nodes must be strictly increasing")
        elif np.unique(nodes).size != nodes.size:
            raise ValueError("nodes must be pairwise distinct")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", values)

    def to_csv(self) -> str:
        lines = ["node,re,im"]
        for z, v in zip(self.nodes, self.values):
            node = _format_node(z)
            lines.append(f"{node},{v.real:.17g},{v.imag:.17g}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str, chart: str) -> "GridFunction":
        rows = [r for r in text.strip().splitlines()[1:] if r]
        nodes, vals = [], []
        for row in rows:
            node, re, im = row.rsplit(",", 2)
            nodes.append(complex(node.replace(" ", "")) if "j" in node else float(node))
            vals.append(complex(float(re), float(im)))
        return cls(chart, np.array(nodes), np.array(vals))


def _format_node(z) -> str:
    if np.iscomplexobj(z) and np.imag(z) != 0:
        return f"{complex(z)}".strip("()")
    return f"{float(np.real(z)):.17g}"


def evaluate(f, nodes, chart: str | None = None, derivative_order: int = 0, cap: int | None = None) -> GridFunction:
    """Sample f (or its r-th derivative in the flow coordinate) at nodes.

    The derivative is computed exactly in coefficient space (d/dx = -U is
    tridiagonal on the basis), then evaluated in the requested chart.
    """
    from .config import DEFAULTS

    cap = DEFAULTS["models"]["max_derivative_order"] if cap is None else cap
    if derivative_order > cap:
        raise ValueError(f"derivative order {derivative_order} exceeds the cap {cap}")
    chart = chart or f.model.chart
    p = np.asarray(nodes)
    _check_domain(p, chart)
    if isinstance(f, TranslateSum):
        g = f.derivative(derivative_order) if derivative_order else f
        vals = g(to_flow_coordinate(p, chart))
    else:
        allowed = _HOLO_CHARTS if f.model.is_discrete else _FLAT_CHARTS
        if chart not in allowed:
            raise DomainError(f"chart {chart} does not belong to this model")
        g = f.derivative(derivative_order) if derivative_order else f
        vals = _eval_chart(g, p, chart)
    return GridFunction(chart, p, np.asarray(vals, dtype=complex), derivative_order)


# ------------------------------------------------------ coefficient calculus


def _ladder_sign(model: ModelSpace) -> float:
    # The half-plane basis differs from the circle one by (-1)**(k-n), which
    # flips the sign of both ladder coefficients.
    return -1.0 if model.is_discrete else 1.0


def raise_coefficients(nu: complex, ks: np.ndarray, sign: float) -> np.ndarray:
    return -sign * (1 + nu + 2 * ks)


def lower_coefficients(nu: complex, ks: np.ndarray, sign: float) -> np.ndarray:
    return sign * (2 * ks - (1 + nu))


def ladder_apply(f: SpectralFunction, direction: str) -> SpectralFunction:
    """Apply eta_+ = X + iY ("raise") or eta_- = X - iY ("lower")."""
    ks = f.indices
    s = _ladder_sign(f.model)
    if direction == "raise":
        return SpectralFunction(f.model, f.k_min + 1, raise_coefficients(f.nu, ks, s) * f.coeffs)
    if direction == "lower":
        new = lower_coefficients(f.nu, ks, s) * f.coeffs
        k0 = f.k_min - 1
        if f.model.is_discrete and k0 < f.model.min_index:
            # eta_- kills the lowest weight vector.
            if f.coeffs.size == 1:
                return SpectralFunction.zero(f.model)
            return SpectralFunction(f.model, f.k_min, new[1:])
        return SpectralFunction(f.model, k0, new)
    raise ValueError("direction must be 'raise' or 'lower'")


def theta_eigenvalues(ks) -> np.ndarray:
    """Theta u_k = -2ik u_k for the realizations used here."""
    return -2j * np.asarray(ks)


def diagonal_apply(f: SpectralFunction, operator: str, power: int = 1) -> SpectralFunction:
    ks = f.indices
    if operator == "Theta":
        mult = theta_eigenvalues(ks) ** power
    elif operator == "Laplacian":
        mult = (f.mu + 8.0 * ks**2) ** power
    elif operator == "Casimir":
        mult = np.full(ks.shape, f.mu**power)
    else:
        raise ValueError("operator must be Theta, Laplacian or Casimir")
    return SpectralFunction(f.model, f.k_min, f.coeffs * mult)


def u_field_apply(f: SpectralFunction) -> SpectralFunction:
    """U = (Theta - Y)/2 with Y = (eta_+ - eta_-)/(2i), in coefficients."""
    theta = diagonal_apply(f, "Theta")
    up = ladder_apply(f, "raise")
    down = ladder_apply(f, "lower")
    y = (up - down) * (1 / 2j)
    return (theta - y) * 0.5


def v_field_apply(f: SpectralFunction) -> SpectralFunction:
    """V = (-Y - Theta)/2."""
    theta = diagonal_apply(f, "Theta")
    y = (ladder_apply(f, "raise") - ladder_apply(f, "lower")) * (1 / 2j)
    return (-y - theta) * 0.5


def x_field_apply(f: SpectralFunction) -> SpectralFunction:
    return (ladder_apply(f, "raise") + ladder_apply(f, "lower")) * 0.5


def y_field_apply(f: SpectralFunction) -> SpectralFunction:
    return (ladder_apply(f, "raise") - ladder_apply(f, "lower")) * (1 / 2j)


FIELD_APPLY = {
    "U": u_field_apply,
    "V": v_field_apply,
    "X": x_field_apply,
    "Y": y_field_apply,
    "Theta": lambda f: diagonal_apply(f, "Theta"),
}


def vector_field(name: str, model: ModelSpace, chart: str | None = None):
    """First-order operator a(p) + b(p) d/dp of a basis field in a chart.

    Returns the pair of callables (a, b).
    """
    chart = chart or model.chart
    nu = model.nu
    c = 1 + nu
    if chart in (LINE, HALFPLANE):
        table = {
            "X": (lambda p: -c + 0 * p, lambda p: -2 * p),
            "Theta": (lambda p: -c * p, lambda p: -(1 + p * p)),
            "Y": (lambda p: -c * p, lambda p: 1 - p * p),
            "U": (lambda p: 0 * p, lambda p: -1 + 0 * p),
            "V": (lambda p: c * p, lambda p: p * p),
        }
    elif chart == CIRCLE:
        table = {
            "X": (lambda p: -c + 0 * p, lambda p: -np.sin(2 * p)),
            "Theta": (lambda p: -c * np.tan(p), lambda p: -1 + 0 * p),
            "Y": (lambda p: -c * np.tan(p), lambda p: np.cos(2 * p)),
            "U": (lambda p: 0 * p, lambda p: -np.cos(p) ** 2),
            "V": (lambda p: c * np.tan(p), lambda p: np.sin(p) ** 2),
        }
    elif chart == DISK:
        table = {
            "X": (lambda p: -c + 0 * p, lambda p: p * p - 1),
            "Theta": (lambda p: c * 1j * (p + 1) / (p - 1), lambda p: -2j * p),
            "Y": (lambda p: c * 1j * (p + 1) / (p - 1), lambda p: -1j * (p * p + 1)),
            "U": (lambda p: 0 * p, lambda p: 1j * (p - 1) ** 2 / 2),
            "V": (lambda p: -c * 1j * (p + 1) / (p - 1), lambda p: 1j * (p + 1) ** 2 / 2),
        }
    else:
        raise ValueError(f"unknown chart {chart!r}")
    return table[name]


def sobolev_norm(f, s: float) -> float:
    """(sum_k |c_k|^2 (1 + mu + 8k^2)^s ||u_k||^2)^(1/2)."""
    if isinstance(f, TranslateSum):
        f = f.project()
    ks = f.indices
    weights = (1.0 + f.mu + 8.0 * ks.astype(float) ** 2) ** s
    norms = basis_norms_sq(f.model.series, ks)
    return float(math.sqrt(np.sum(np.abs(f.coeffs) ** 2 * weights * norms)))


# ------------------------------------------------------ sampling round trip


def sampling_nodes(model: ModelSpace, window: tuple[int, int], oversample: int = 4, rho: float | None = None, chart: str | None = None) -> np.ndarray:
    """Canonical nodes for :func:`coeffs_from_samples`.

    mu > 0: offset uniform grid on the circle chart (period pi).
    discrete: uniform grid on the circle |xi| = rho in the disk chart.
    Returned in ``chart`` (default: the model's chart).
    """
    from .config import DEFAULTS

    size = window[1] - window[0] + 1
    m = max(oversample * size, 8)
    chart = chart or model.chart
    if model.is_discrete:
        rho = DEFAULTS["models"]["rho"] if rho is None else rho
        xi = rho * np.exp(2j * np.pi * (np.arange(m) + 0.5) / m)
        return xi if chart == DISK else chart_map(xi, DISK, HALFPLANE)
    theta = -np.pi / 2 + np.pi * (np.arange(m) + 0.5) / m
    return theta if chart == CIRCLE else np.tan(theta)


def coeffs_from_samples(g: GridFunction, model: ModelSpace, window: tuple[int, int], tol: float = 1e-8) -> SpectralFunction:
    """Recover coefficients from samples taken on :func:`sampling_nodes`."""
    k_lo, k_hi = window
    size = k_hi - k_lo + 1
    m = g.nodes.size
    if m < 4 * size:
        raise ValueError(f"need at least {4 * size} samples for a window of {size}, got {m}")
    ks = np.arange(k_lo, k_hi + 1)
    if model.is_discrete:
        xi = g.nodes if g.chart == DISK else chart_map(g.nodes, g.chart, DISK)
        nu = model.series.nu_int
        n = model.min_index
        if k_lo < n:
            raise IndexError("window starts below the lowest weight")
        phi = g.values / ((1 - xi) / -2j) ** (nu + 1)
        rad = np.abs(xi)
        if np.ptp(rad) > 1e-12 * max(1.0, rad.max()):
            raise ValueError("disk samples must lie on one circle")
        kern = xi[None, :] ** (-(ks[:, None] - n))
        coeffs = kern @ phi / m
        recon = (xi[:, None] ** (ks[None, :] - n)) @ coeffs
    else:
        theta = g.nodes if g.chart == CIRCLE else np.arctan(np.real(g.nodes))
        theta = np.real(theta)
        amp = np.exp((1 + model.nu) * np.log(np.cos(theta)))
        phi = g.values / amp
        kern = np.exp(-2j * ks[:, None] * theta[None, :])
        coeffs = kern @ phi / m
        recon = np.exp(2j * theta[:, None] * ks[None, :]) @ coeffs
    resid = float(np.max(np.abs(recon - phi))) if m else 0.0
    scale = max(1.0, float(np.max(np.abs(phi))))
    if resid > tol * scale:
        raise IllConditioned(f"round-trip residual {resid:.3e} exceeds {tol:g}")
    return SpectralFunction(ModelSpace(model.series, model.chart), k_lo, coeffs)


# ----------------------------------------------------------- translate sums


class TranslateSum:
    """Finite sum x -> sum_j S_j(x - t_j) of flow translates.

    ``terms`` is a tuple of (shift, SpectralFunction) with distinct shifts.
    All functions in one sum share the same model.
    """

    __slots__ = ("terms",)

    def __init__(self, terms):
        merged: dict[float, SpectralFunction] = {}
        model = None
        for t, s in terms:
            if isinstance(s, TranslateSum):
                for t2, s2 in s.terms:
                    merged[t + t2] = merged[t + t2] + s2 if t + t2 in merged else s2
                continue
            if model is None:
                model = s.model.series
            elif s.model.series != model:
                raise ValueError("translates must share one model")
            t = float(t)
            merged[t] = merged[t] + s if t in merged else s
        object.__setattr__(self, "terms", tuple(sorted(merged.items())))
        if not self.terms:
            raise ValueError("empty translate sum")

    def __setattr__(self, name, value):
        raise AttributeError("TranslateSum is immutable")

    @classmethod
    def of(cls, f: SpectralFunction) -> "TranslateSum":
        return cls(((0.0, f),))

    @property
    def model(self) -> ModelSpace:
        return self.terms[0][1].model

    @property
    def mu(self) -> float:
        return self.model.mu

    @property
    def nu(self) -> complex:
        return self.model.nu

    @property
    def shift_extent(self) -> float:
        return max(abs(t) for t, _ in self.terms)

    @property
    def index_span(self) -> int:
        return max(s.index_span for _, s in self.terms)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for t, s in self.terms:
            out = out + _eval_flow(s, z - t)
        return out

    def evaluate(self, nodes, chart: str | None = None, derivative_order: int = 0) -> GridFunction:
        chart = chart or self.model.flow_chart
        return evaluate(self, nodes, chart, derivative_order)

    def derivative(self, r: int = 1) -> "TranslateSum":
        return TranslateSum(tuple((t, s.derivative(r)) for t, s in self.terms))

    def shifted(self, t: float) -> "TranslateSum":
        return TranslateSum(tuple((t0 + float(t), s) for t0, s in self.terms))

    def __add__(self, other):
        if isinstance(other, SpectralFunction):
            other = TranslateSum.of(other)
        if not isinstance(other, TranslateSum):
            return NotImplemented
        return TranslateSum(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return TranslateSum(tuple((t, -s) for t, s in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return TranslateSum(tuple((t, s * scalar) for t, s in self.terms))

    __rmul__ = __mul__

    def __repr__(self):
        shifts = ", ".join(f"{t:g}" for t, _ in self.terms)
        return f"TranslateSum(mu={self.mu:g}, shifts=[{shifts}])"

    def project(self, window: tuple[int, int] | None = None, tol: float = 1e-8) -> SpectralFunction:
        """Coefficient projection on a window (grown until it represents f)."""
        model = self.model
        if window is not None:
            return _project(self, model, window, tol)
        lo_base = model.min_index if model.is_discrete else None
        half = 64
        while True:
            if model.is_discrete:
                win = (lo_base, lo_base + 2 * half)
            else:
                win = (-half, half)
            try:
                return _project(self, model, win, tol)
            except IllConditioned:
                if half >= 2048:
                    raise
                half *= 2


def _project(f, model: ModelSpace, window, tol) -> SpectralFunction:
    flat = ModelSpace(model.series, DISK if model.is_discrete else CIRCLE)
    if model.is_discrete:
        nodes = sampling_nodes(flat, window, rho=1.0)
        z = -1j * (nodes + 1) / (nodes - 1)
        vals = f(z)
    else:
        nodes = sampling_nodes(flat, window)
        vals = f(np.tan(nodes))
    g = GridFunction(flat.chart, nodes if not model.is_discrete else nodes, vals)
    out = coeffs_from_samples(g, flat, window, tol=tol)
    return out.with_chart(model.chart)


def as_translate_sum(f) -> TranslateSum:
    return f if isinstance(f, TranslateSum) else TranslateSum.of(f)
