"""Equidistribution bookkeeping: exponents, bound assembly, averages, Fourier decay."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import quad
from .config import DEFAULTS
from .distributions import regularized, eval_boundary_jet, eval_deltahat
from .errors import OscillationUnderresolved, SeriesTruncationFailure
from .models import SpectralFunction, TranslateSum, as_translate_sum, sobolev_norm
from .sl2core import classify

_CFG = DEFAULTS["harness"]


def log_plus(n) -> np.ndarray | float:
    """max(1, ln N)."""
    return np.maximum(1.0, np.log(np.maximum(n, 1.0)))


def alpha(mu0: float) -> float:
    """Twisted-rate exponent (1 - nu0)^2 / (8 (3 - nu0)) with nu0 = Re sqrt(1 - mu0)."""
    if mu0 <= 0:
        raise ValueError("the spectral gap must be positive")
    nu0 = math.sqrt(1 - mu0) if mu0 < 1 else 0.0
    return (1 - nu0) ** 2 / (8 * (3 - nu0))


@dataclass(frozen=True)
class RateRow:
    kind: str  # "D0" (delta0), "D_0" (delta-hat at 0), "D_k" (k != 0)
    exponent: float
    log_factor: bool
    coefficient_bound: str


@dataclass(frozen=True)
class RatePrediction:
    mu: float
    mu0: float
    alpha: float
    rows: tuple

    def row(self, kind: str) -> RateRow:
        for r in self.rows:
            if r.kind == kind:
                return r
        raise KeyError(kind)

    def to_json_dict(self) -> dict:
        return {
            "mu": self.mu,
            "mu0": self.mu0,
            "alpha": self.alpha,
            "constant_free": True,
            "rows": [r.__dict__ for r in self.rows],
        }


def exponent_table(mu: float, mu0: float) -> RatePrediction:
    series = classify(mu)
    a = alpha(mu0)
    nu = series.nu_real
    if series.is_discrete:
        rows = (
            RateRow("D0", 1.0, True, "C_s"),
            RateRow("D_k", a, False, "C_eps tau^(5/2+eps)"),
        )
    else:
        rows = (
            RateRow("D0", (1 + nu) / 2, True, "C_s"),
            RateRow("D_0", (1 - nu) / 2, True, "C_s"),
            RateRow("D_k", a, False, "C_eps tau^(5/2+eps)"),
        )
    return RatePrediction(float(mu), float(mu0), a, rows)


# -------------------------------------------------------- bound assembly


@dataclass
class SpectralAssembly:
    components: list
    mu0: float
    s: float = 14.0
    T: float = 1.0

    def __post_init__(self):
        if self.mu0 <= 0:
            raise ValueError("mu0 must be positive")
        if self.s < 6:
            raise ValueError("bound formulas need s >= 6")
        for mu, f in self.components:
            if abs(f.mu - mu) > 1e-12:
                raise ValueError("component mu does not match its function")
            if mu > 0 and mu < self.mu0 - 1e-12:
                raise ValueError(f"component mu = {mu} lies below the spectral gap {self.mu0}")

    @property
    def full_form(self) -> bool:
        return self.s >= 14


@dataclass
class BoundTerm:
    mu: float
    kind: str
    k: int | None
    weight: float  # |coefficient bound| * |D(f)|
    exponent: float
    log_factor: bool

    def at(self, N):
        N = np.asarray(N, dtype=float)
        out = self.weight * N ** (-self.exponent)
        return out * log_plus(N) if self.log_factor else out


@dataclass
class BoundReport:
    N: int
    value: float
    raw_value: float
    terms: list = field(repr=False)
    tau_cutoffs: dict = field(default_factory=dict)
    constant_free: bool = True

    def to_json_dict(self) -> dict:
        return {
            "N": self.N,
            "bound": self.value,
            "raw_bound": self.raw_value,
            "constant_free": self.constant_free,
            "tau_cutoffs": {str(k): v for k, v in self.tau_cutoffs.items()},
            "terms": [t.__dict__ for t in self.terms if t.weight > 0],
        }


def _distribution_terms(mu: float, f, mu0: float, s: float, T: float, eps: float, tol: float, tau_window: int, y: float):
    table = exponent_table(mu, mu0)
    terms = []
    d0 = abs(eval_boundary_jet(f, 0))
    row = table.row("D0")
    terms.append(BoundTerm(mu, "D0", None, d0, row.exponent, row.log_factor))
    model = f.model
    if not model.is_discrete:
        row = table.row("D_0")
        terms.append(BoundTerm(mu, "D_0", 0, abs(eval_deltahat(f, 0, T)), row.exponent, row.log_factor))
    row = table.row("D_k")
    ks = []
    k = 1
    cutoff = None
    # tail anchored at the last computed value, assuming (1+|xi|)^-s decay
    while k <= tau_window:
        for kk in ((k,) if model.is_discrete else (k, -k)):
            yy = min(y, 1.0 / (1.0 + abs(kk) / T)) if model.is_discrete else None
            try:
                v = abs(eval_deltahat(f, kk, T, yy))
            except OscillationUnderresolved:
                v = 0.0
            terms.append(BoundTerm(mu, "D_k", kk, float(k) ** (2.5 + eps) * v, row.exponent, row.log_factor))
            ks.append((kk, v))
        edge = max(v for kk, v in ks if abs(kk) == k)
        xi = k / T
        ms = np.arange(k + 1, k + 2000)
        tail = edge * (1 + xi) ** s * np.sum(ms ** (2.5 + eps) * (1 + ms / T) ** (-s)) * (1 if model.is_discrete else 2)
        if tail < tol:
            cutoff = k
            break
        k += 1
    if cutoff is None:
        raise SeriesTruncationFailure(f"tau tail still above {tol:g} at the window edge {tau_window}")
    return terms, cutoff


_TERM_CACHE: dict = {}


def bound_terms(assembly: SpectralAssembly, tol: float | None = None, tau_window: int | None = None, y: float = 1.0):
    tol = _CFG["tolerance"] if tol is None else tol
    tau_window = _CFG["tau_window"] if tau_window is None else tau_window
    eps = _CFG["epsilon"]
    all_terms, cutoffs = [], {}
    for i, (mu, f) in enumerate(assembly.components):
        terms, cutoff = _distribution_terms(mu, f, assembly.mu0, assembly.s, assembly.T, eps, tol, tau_window, y)
        all_terms.extend(terms)
        cutoffs[i] = cutoff
    return all_terms, cutoffs


def raw_bound(terms, N) -> np.ndarray:
    N = np.asarray(N, dtype=float)
    total = 1.0 / N  # remainder C_s / N with C_s = 1
    for t in terms:
        if t.weight > 0:
            total = total + t.at(N)
    return total


def majorant(terms, N: float) -> float:
    """sup_{M >= N} of the raw bound (a nonincreasing envelope)."""
    active = [t for t in terms if t.weight > 0]
    lnN = math.log(max(N, 1.0))
    peaks = [1.0 / t.exponent for t in active if t.log_factor and t.exponent > 0]
    far = max([lnN] + peaks) + 60.0
    grid = np.unique(np.concatenate([np.linspace(lnN, far, 4096), [p for p in peaks if p >= lnN]]))
    return float(np.max(raw_bound(active, np.exp(grid))))


def predict_ergodic_bound(assembly: SpectralAssembly, N: int, tol: float | None = None, tau_window: int | None = None,
                          terms=None) -> BoundReport:
    """Constant-free bound: sum |coef bound| |D(f)| N^-S (log+ N) + 1/N, then its nonincreasing majorant.

    Pass precomputed ``terms`` (from :func:`bound_terms`) to evaluate many N cheaply.
    """
    if terms is None:
        terms, cutoffs = bound_terms(assembly, tol, tau_window)
    else:
        cutoffs = {}
    if not assembly.full_form:
        terms = [t for t in terms if t.kind != "D_k"]
    raw = float(raw_bound(terms, N))
    return BoundReport(int(N), majorant(terms, N), raw, list(terms), cutoffs)


# ------------------------------------------------------------ averages


class Coboundary:
    """f = g o phi_T - g, i.e. f(x) = g(x - T) - g(x), remembering g."""

    def __init__(self, g, T: float):
        self.g = g
        self.T = float(T)
        if isinstance(g, (SpectralFunction, TranslateSum)):
            self.f = as_translate_sum(g).shifted(T) - g
        else:
            self.f = None

    @property
    def model(self):
        return self.g.model

    def __call__(self, z):
        if self.f is not None:
            return self.f(z)
        z = np.asarray(z, dtype=complex)
        return np.asarray(self.g(z - self.T)) - np.asarray(self.g(z))


@dataclass(frozen=True)
class ErgodicResult:
    direct: complex
    telescoped: complex | None


def ergodic_average(f, x, T: float, N: int) -> ErgodicResult:
    """(1/N) sum_{n<N} f(x + nT); coboundaries also get the telescoped form."""
    if N < 1:
        raise ValueError("N must be at least 1")
    pts = complex(x) + T * np.arange(N)
    total = 0.0 + 0.0j
    for s in range(0, N, 65536):
        total += complex(np.sum(np.asarray(f(pts[s : s + 65536]))))
    tele = None
    if isinstance(f, Coboundary) and abs(f.T - T) < 1e-15:
        g = f.g
        ends = np.asarray(g(np.array([complex(x) - T, complex(x) + (N - 1) * T])))
        tele = complex(ends[0] - ends[1]) / N
    return ErgodicResult(total / N, tele)


def twisted_average(f, x, tau: float, N: float, order: int = 16) -> complex:
    """(1/N) int_0^N e^{2 pi i tau t} f(x + t) dt."""
    if N <= 0:
        raise ValueError("N must be positive")
    width = min(0.5, 1.0 / (8 * abs(tau) + 1))
    panels = max(4, int(math.ceil(N / width)))
    t, w = quad.panel_rule(np.linspace(0.0, N, panels + 1), order)
    total = 0.0 + 0.0j
    step = 262144
    for s in range(0, t.size, step):
        ts = t[s : s + step]
        total += complex(np.sum(np.exp(2j * np.pi * tau * ts) * np.asarray(f(complex(x) + ts)) * w[s : s + step]))
    return total / N


# ---------------------------------------------------------- Fourier decay


def _transform_for_decay(f, xi: float, y: float) -> complex:
    model = f.model
    if model.is_discrete:
        if xi <= 0:
            return quad.fourier_transform(f, xi, y)
        # the value does not depend on the line; keep e^{2 pi xi y} moderate
        return quad.fourier_transform(f, xi, min(y, 1.0 / (1.0 + xi)))
    # for mu >= 1 the raw transform can blow up at 0 when delta0(f) != 0
    return quad.fourier_transform(regularized(f), xi, 0.0)


def fourier_decay_check(f, s: int, extents=(20.0, 40.0), points_per_unit: int = 4, y: float = 1.0,
                        cache: dict | None = None) -> dict:
    """sup_{|xi| <= E} |f-hat(xi)| (1+|xi|)^s / ||f||_{3s+2} for each extent E.

    For mu >= 1 the transform is that of f - delta0(f) u_0, which stays
    bounded near 0; discrete-series transforms are taken on horizontal
    lines chosen per frequency.  Pass the same ``cache`` dict to
    reuse transforms of one function across calls.
    """
    if s < 2:
        raise ValueError("s must be at least 2")
    norm = sobolev_norm(f, 3 * s + 2)
    out = {}
    if norm == 0:
        return {float(E): 0.0 for E in extents}
    cache = {} if cache is None else cache
    for E in sorted(extents):
        n = int(E * points_per_unit)
        xis = np.linspace(-E, E, 2 * n + 1)
        best = 0.0
        for xi in xis:
            key = float(xi)
            if key not in cache:
                try:
                    cache[key] = abs(_transform_for_decay(f, key, y))
                except OscillationUnderresolved:
                    cache[key] = float("nan")
            v = cache[key]
            if np.isfinite(v):
                best = max(best, v * (1 + abs(xi)) ** s)
        out[float(E)] = best / norm
    return out
