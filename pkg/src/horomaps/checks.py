"""Self-verification suites shared by ``horomaps verify`` and the acceptance tests.

Each suite returns a list of :class:`Check` rows.  A row passes when its
measured value sits on the right side of its pinned tolerance.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from . import distributions as dist
from . import harness, quad, solver
from .models import (
    FIELD_APPLY,
    SpectralFunction,
    TranslateSum,
    basis_norm_sq,
    diagonal_apply,
    ladder_apply,
    model_for,
    sobolev_norm,
    vector_field,
)
from .sl2core import STRUCTURE_CONSTANTS, basis_element, commutator


@dataclass
class Check:
    suite: str
    name: str
    value: float
    tol: float
    relation: str = "<="
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        if not np.isfinite(self.value):
            return False
        if self.relation == "<=":
            return self.value <= self.tol
        if self.relation == ">=":
            return self.value >= self.tol
        return self.value == self.tol

    def row(self) -> dict:
        return {"suite": self.suite, "check": self.name, "value": self.value, "relation": self.relation,
                "tol": self.tol, "passed": self.passed, "seconds": round(self.seconds, 3)}


# ------------------------------------------------------------ test inputs

FLAT_MUS = (5.0, 2.0, 1.0, 0.75, 0.51, 0.19)
DISCRETE_MUS = (0.0, -8.0, -24.0, -48.0)


def random_function(model, rng, half: int = 4) -> SpectralFunction:
    """Window-limited random element with O(1) complex coefficients."""
    size = half + 1 if model.is_discrete else 2 * half + 1
    k_min = model.min_index if model.is_discrete else -half
    coeffs = (rng.normal(size=size) + 1j * rng.normal(size=size)) / math.sqrt(2)
    return SpectralFunction(model, k_min, coeffs)


def battery(seed: int = 0) -> list[SpectralFunction]:
    """Ten test functions: six on the line (mu > 0), four discrete."""
    rng = np.random.default_rng(seed)
    return [random_function(model_for(mu), rng, 3) for mu in FLAT_MUS + DISCRETE_MUS]


def coboundary(g, T: float) -> TranslateSum:
    """g(. - T) - g."""
    return TranslateSum.of(g).shifted(T) - g


def _base_vector(model) -> SpectralFunction:
    return SpectralFunction.basis(model, model.min_index if model.is_discrete else 0)


def without_delta0(g) -> SpectralFunction:
    """g minus the multiple of the lowest vector that carries its delta0."""
    return g - _base_vector(g.model) * dist.eval_boundary_jet(g, 0)


def _relmax(a, b) -> float:
    a, b = np.asarray(a), np.asarray(b)
    scale = max(float(np.max(np.abs(b))), 1e-300)
    return float(np.max(np.abs(a - b))) / scale


class _Collector:
    def __init__(self, suite: str):
        self.suite = suite
        self.rows: list[Check] = []
        self._t = time.perf_counter()

    def add(self, name: str, value, tol: float, relation: str = "<="):
        now = time.perf_counter()
        self.rows.append(Check(self.suite, name, float(value), float(tol), relation, now - self._t))
        self._t = now


# ----------------------------------------------------------- 1 algebra


def suite_algebra(seed: int = 0) -> list[Check]:
    out = _Collector("algebra")
    for left, right, coef, res in STRUCTURE_CONSTANTS:
        diff = commutator(basis_element(left), basis_element(right)) - coef * basis_element(res).matrix
        out.add(f"[{left},{right}] = {coef}{res}", np.max(np.abs(diff)), 0, "==")
    U, V, Y, TH = (basis_element(n).matrix for n in ("U", "V", "Y", "Theta"))
    # integer form of U = (Theta - Y)/2 and V = (-Y - Theta)/2
    out.add("2U = Theta - Y", np.max(np.abs(2 * U - (TH - Y))), 0, "==")
    out.add("2V = -Y - Theta", np.max(np.abs(2 * V - (-Y - TH))), 0, "==")
    return out.rows


# ------------------------------------------------------------- 2 ladder


def _coefficient_identities(model) -> float:
    """Worst relative defect of the bracket and Casimir identities in coefficients."""
    rng = np.random.default_rng(11)
    f = random_function(model, rng, 6)
    A = FIELD_APPLY
    X, Y, TH = A["X"], A["Y"], A["Theta"]
    worst = 0.0

    lo = f.k_min if model.is_discrete else f.k_min - 3

    def dense(h):
        return h.on_window(lo, f.k_max + 3).coeffs

    pairs = (
        (X(Y(f)) - Y(X(f)), TH(f) * -2.0),
        (TH(X(f)) - X(TH(f)), Y(f) * 2.0),
        (TH(Y(f)) - Y(TH(f)), X(f) * -2.0),
        # Casimir -X^2 - Y^2 + Theta^2 acts as mu
        (-X(X(f)) - Y(Y(f)) + TH(TH(f)), f * model.mu),
        # Laplacian -(X^2 + Y^2 + Theta^2) is diagonal with mu + 8k^2
        (-X(X(f)) - Y(Y(f)) - TH(TH(f)), diagonal_apply(f, "Laplacian")),
        (A["U"](f), (TH(f) - Y(f)) * 0.5),
        (A["V"](f), (-Y(f) - TH(f)) * 0.5),
    )
    scale = float(np.max(np.abs(dense(diagonal_apply(f, "Laplacian")))))
    for lhs, rhs in pairs:
        worst = max(worst, float(np.max(np.abs(dense(lhs) - dense(rhs)))) / scale)
    return worst


def _ladder_values(model) -> float:
    """Raise/lower coefficients against the closed forms, as an exact comparison."""
    nu = model.nu
    sign = -1.0 if model.is_discrete else 1.0
    ks = range(model.min_index, model.min_index + 11) if model.is_discrete else range(-10, 11)
    worst = 0.0
    for k in ks:
        u = SpectralFunction.basis(model, k)
        up = ladder_apply(u, "raise")
        worst = max(worst, abs(up.coeff(k + 1) - sign * -(1 + nu + 2 * k)))
        down = ladder_apply(u, "lower")
        if model.is_discrete and k == model.min_index:
            worst = max(worst, float(np.max(np.abs(down.coeffs))))
        else:
            worst = max(worst, abs(down.coeff(k - 1) - sign * (2 * k - 1 - nu)))
        th = diagonal_apply(u, "Theta")
        worst = max(worst, abs(th.coeff(k) - (-2j * k)))
    return worst


def _pointwise_fields(model, h: float = 1e-5) -> float:
    """Chart realization a + b d/dp of each field versus the coefficient action."""
    x = np.array([-1.3, -0.4, 0.25, 0.9, 2.1])
    if model.is_discrete:
        x = x + 0.8j
    ks = range(model.min_index, model.min_index + 11) if model.is_discrete else range(-10, 11)
    worst = 0.0
    for k in ks:
        u = SpectralFunction.basis(model, k)
        val = u(x)
        # fourth-order central difference
        der = (-u(x + 2 * h) + 8 * u(x + h) - 8 * u(x - h) + u(x - 2 * h)) / (12 * h)
        for name in ("X", "Y", "Theta", "U", "V"):
            a, b = vector_field(name, model)
            pointwise = a(x) * val + b(x) * der
            exact = FIELD_APPLY[name](u)(x)
            # Theta u_0 = 0, so normalize by the size of u_k as well
            scale = max(float(np.max(np.abs(exact))), float(np.max(np.abs(val))))
            worst = max(worst, float(np.max(np.abs(pointwise - exact))) / scale)
    return worst


def suite_ladder(seed: int = 0) -> list[Check]:
    out = _Collector("ladder")
    models = [model_for(mu) for mu in (5.0, 2.0, 0.75)] + [model_for(1.0 - nu * nu) for nu in (1, 3, 5)]
    for m in models:
        tag = f"mu={m.mu:g}"
        out.add(f"{tag} ladder/Theta coefficients", _ladder_values(m), 1e-12)
        out.add(f"{tag} brackets+Casimir in coefficients", _coefficient_identities(m), 1e-12)
        out.add(f"{tag} pointwise fields vs finite differences", _pointwise_fields(m), 1e-6)
    return out.rows


# -------------------------------------------------------------- 3 norms


def suite_norms(seed: int = 0) -> list[Check]:
    out = _Collector("norms")
    for mu in (5.0, 2.0, 1.0):
        m = model_for(mu)
        worst = 0.0
        for k in range(0, 11):
            u = SpectralFunction.basis(m, k)
            est = quad.integrate_line(lambda x: np.abs(u(x)) ** 2)
            worst = max(worst, abs(est.value / math.pi - 1))
        out.add(f"principal mu={mu:g} ||u_k||^2 = pi, k<=10", worst, 1e-4)
    for nu in (3, 5, 7):
        m = model_for(1.0 - nu * nu)
        n = m.min_index
        worst = 0.0
        for k in range(n, n + 11):
            u = SpectralFunction.basis(m, k)
            closed = math.pi / nu * 4.0 ** (-nu) * math.exp(gammaln(k - n + 1) + gammaln(nu + 1) - gammaln(k + n))
            est = quad.integrate_halfplane(lambda z: np.abs(u(z)) ** 2, float(nu))
            worst = max(worst, abs(est.value / closed - 1))
        out.add(f"discrete nu={nu} closed-form norms, k<=n+10", worst, 1e-4)
    for mu in (0.19, 0.51, 0.75):
        nu = math.sqrt(1 - mu)
        ks = np.arange(0, 201)
        weighted = quad.complementary_basis_norms(nu, 200) * (1.0 + ks) ** nu
        out.add(f"complementary mu={mu:g} band max/min, k<=200", weighted.max() / weighted.min(), 10.0)
    return out.rows


# ---------------------------------------------------------- 4 invariance


def suite_invariance(seed: int = 0) -> list[Check]:
    out = _Collector("invariance")
    T = 1.0
    for i, f in enumerate(battery(seed)):
        m = f.model
        tag = f"f{i} mu={m.mu:g}"
        y = 1.0 if m.is_discrete else None
        ks = (1, 2) if m.is_discrete else (-2, -1, 0, 1, 2)
        worst = 0.0
        for k in ks:
            a = dist.eval_deltahat(f, k, T, y)
            b = dist.eval_deltahat(f.shifted(T), k, T, y)
            worst = max(worst, abs(a - b))
        out.add(f"{tag} translation invariance", worst, 1e-8)
        if m.is_discrete:
            T2 = 2.0
            diff = max(abs(dist.eval_deltahat(f, k, T2, 0.5) - dist.eval_deltahat(f, k, T2, 2.0)) for k in (1, 2))
            out.add(f"{tag} y-independence (0.5 vs 2)", diff, 1e-8)
            low = max(abs(dist.eval_deltahat(f, k, T, y)) for y in (0.5, 2.0) for k in (-2, -1, 0))
            out.add(f"{tag} vanishing for k<=0", low, 1e-8)
    return out.rows


# ----------------------------------------------------------- 5 roundtrip


ROUNDTRIP_MUS = (2.0, 1.0, 0.75, 0.0, -8.0, -24.0)


def suite_roundtrip(seed: int = 0, count: int = 20) -> list[Check]:
    out = _Collector("roundtrip")
    rng = np.random.default_rng(seed)
    for mu in ROUNDTRIP_MUS:
        m = model_for(mu)
        for T in (0.5, 1.0, 2.0):
            worst = 0.0
            for _ in range(count):
                g = random_function(m, rng, 4)
                rep = solver.solve_series(coboundary(g, T), T, check_obstructions=False, ratios=False)
                worst = max(worst, float(np.max(np.abs(rep.u.values - g(rep.u.nodes)))))
            out.add(f"mu={mu:g} T={T:g} max ||u-g|| over {count}", worst, 1e-6)
    return out.rows


# --------------------------------------------------------------- 6 cross


def suite_cross(seed: int = 0) -> list[Check]:
    out = _Collector("cross")
    rng = np.random.default_rng(seed + 1)
    for mu in (5.0, 2.0, 1.0):
        m = model_for(mu)
        for T in (0.5, 1.0, 2.0):
            g = random_function(m, rng, 4)
            f = coboundary(g, T)
            rs = solver.solve_series(f, T, check_obstructions=False, ratios=False)
            rf = solver.solve_fourier_division(f, T, check_obstructions=False, ratios=False)
            tag = f"mu={mu:g} T={T:g}"
            out.add(f"{tag} series vs Fourier division", np.max(np.abs(rs.u.values - rf.u.values)), 1e-5)
            out.add(f"{tag} residual (series, Fourier)", max(rs.residual_sup, rf.residual_sup), 1e-6)
    return out.rows


# ------------------------------------------------------------- 7 removal


def finite_difference_jets(f, r: int, h: float) -> float:
    """Relative gap between (J(f(. - h)) - J(f))/h and the matrix prediction c^T J(f)."""
    c = solver.lu_delta_matrix(r, f.nu)
    J = dist.boundary_jets(f, r)
    pred = c.T @ J
    Jh = (dist.boundary_jets(TranslateSum.of(f).shifted(h), r) - J) / h
    return float(np.max(np.abs(Jh - pred)) / np.max(np.abs(pred)))


def suite_removal(seed: int = 0) -> list[Check]:
    out = _Collector("removal")
    rng = np.random.default_rng(seed + 2)
    R = 4
    for mu in (2.0, 0.75, -8.0, -24.0):
        m = model_for(mu)
        worst = 0.0
        for T in (0.5, 1.0, 2.0):
            f = without_delta0(random_function(m, rng, 4))
            led = solver.omega_removal(f, R, m, T)
            J = dist.boundary_jets(led.f_d, R)
            for k in range(R + 1):
                worst = max(worst, abs(J[k]) / sobolev_norm(f, k + 2))
        out.add(f"mu={mu:g} max_k |delta^(k)(f_d)|/||f||_(k+2), k<=4", worst, 1e-8)
        g = random_function(m, rng, 4)
        e1, e2 = finite_difference_jets(g, 5, 1e-3), finite_difference_jets(g, 5, 5e-4)
        out.add(f"mu={mu:g} jet-matrix FD error / h at h=1e-3", e1 / 1e-3, 10.0)
        out.add(f"mu={mu:g} jet-matrix FD error / h at h=5e-4", e2 / 5e-4, 10.0)
        out.add(f"mu={mu:g} first-order convergence |ratio - 2|", abs(e1 / e2 - 2.0), 0.1)
    return out.rows


# -------------------------------------------------------------- 8 decay


def _weighted_sup(f, p: float, E: float, rays=None, step: float = 0.05) -> float:
    r = np.arange(0.0, E + step / 2, step)
    if rays is None:
        z = np.concatenate([-r[::-1], r])
        mod = np.abs(z)
    else:
        z = np.concatenate([1j + r * np.exp(1j * th) for th in rays])
        mod = np.abs(z)
    return float(np.max(np.abs(np.asarray(f(z))) * (1 + mod) ** p))


def disk_profile(f: TranslateSum, xi):
    """Phi(xi) = (f o alpha)(xi) ((1 - xi)/(-2i))^-(nu+1), continued past the unit circle.

    Written in a = 1 - xi so that the neighbourhood of xi = 1 (z = infinity)
    is evaluated without overflow.
    """
    xi = np.asarray(xi, dtype=complex)
    a = 1.0 - xi
    nu = f.model.series.nu_int
    n = f.model.min_index
    total = np.zeros(xi.shape, dtype=complex)
    for t, s in f.terms:
        den = 2j - t * a
        q = 1.0 - 2j * a / den
        factor = (-den / 2j) ** (-(nu + 1))
        poly = np.zeros(xi.shape, dtype=complex)
        for c in s.coeffs[::-1]:
            poly = poly * q + c
        total = total + factor * q ** (s.k_min - n) * poly
    return total


def taylor_at_one(f: TranslateSum, rmax: int, points: int = 128) -> np.ndarray:
    """Phi^(r)(1) for r <= rmax by a Cauchy integral around xi = 1."""
    rho = min(0.5, 1.0 / max(1.0, f.shift_extent))
    th = 2 * np.pi * np.arange(points) / points
    vals = disk_profile(f, 1.0 + rho * np.exp(1j * th))
    out = np.empty(rmax + 1, dtype=complex)
    for r in range(rmax + 1):
        out[r] = math.factorial(r) * np.mean(vals * np.exp(-1j * r * th)) / rho**r
    return out


def suite_decay(seed: int = 0) -> list[Check]:
    out = _Collector("decay")
    rng = np.random.default_rng(seed + 3)
    R, T = 3, 1.0
    s = R + 1  # jets of order < s vanish
    for mu in (5.0, 2.0, 0.75, 0.19):
        m = model_for(mu)
        f = solver.omega_removal(coboundary(random_function(m, rng, 4), T), R, m, T).f_d
        p = s + 1 + m.nu.real
        a, b = _weighted_sup(f, p, 100.0), _weighted_sup(f, p, 200.0)
        out.add(f"mu={mu:g} line gate |x|^{p:.2f}: relative change 100->200", abs(b - a) / a, 0.25)
        # one more power must make the weighted sup grow: the exponent is sharp
        a1, b1 = _weighted_sup(f, p + 1, 800.0, step=0.25), _weighted_sup(f, p + 1, 1600.0, step=0.25)
        out.add(f"mu={mu:g} sharpness: growth at |x|^{p + 1:.2f}", (b1 - a1) / a1, 0.5, ">=")
    rays = (0.0, np.pi / 4, np.pi / 2, 3 * np.pi / 4, np.pi)
    for nu in (1, 3, 5):
        m = model_for(1.0 - nu * nu)
        f = solver.omega_removal(coboundary(random_function(m, rng, 4), T), R, m, T).f_d
        p = nu + 1 + s
        a, b = _weighted_sup(f, p, 100.0, rays), _weighted_sup(f, p, 200.0, rays)
        out.add(f"nu={nu} ray gate |z|^{p}: relative change 100->200", abs(b - a) / a, 0.25)
        a1, b1 = _weighted_sup(f, p + 1, 800.0, rays, 0.25), _weighted_sup(f, p + 1, 1600.0, rays, 0.25)
        out.add(f"nu={nu} sharpness: growth at |z|^{p + 1}", (b1 - a1) / a1, 0.5, ">=")
        s_norm = 2 * R + 3  # r < floor((s_norm - 1)/2) covers r <= R
        taylor = taylor_at_one(f, R)
        out.add(f"nu={nu} Taylor vanishing max_r<={R} |Phi^(r)(1)|/||f||_{s_norm}",
                np.max(np.abs(taylor)) / sobolev_norm(f, s_norm), 1e-6)
    return out.rows


# ------------------------------------------------------------ 9 Poisson


def suite_poisson(seed: int = 0) -> list[Check]:
    out = _Collector("poisson")
    rng = np.random.default_rng(seed + 4)
    R = 4
    for mu in (2.0, 0.75, -8.0, -24.0):
        m = model_for(mu)
        for T in (0.5, 1.0, 2.0):
            f = solver.omega_removal(coboundary(random_function(m, rng, 4), T), R, m, T).f_d
            p = solver._decay_exponent_theory(m, R)
            start = f.shift_extent + R * T + 4.0
            y = 1.0 if m.is_discrete else 0.0
            _, far = solver.decay_constant(f, p, start, y)
            n_tail = max(solver._tail_terms(2 * far, p, T, 1e-8), int(start / T) + 8)
            x = rng.uniform(-5, 5, 20) + 1j * y
            n = np.arange(-n_tail, n_tail + 1) * T
            total = np.asarray(f(x[:, None] + n[None, :])).sum(axis=1)
            out.add(f"mu={mu:g} T={T:g} max |sum_|n|<={n_tail} f(x+nT)|", np.max(np.abs(total)), 1e-6)
    return out.rows


# -------------------------------------------------------- 10 obstruction


def suite_obstruction(seed: int = 0) -> list[Check]:
    out = _Collector("obstruction")
    for i, f in enumerate(battery(seed)):
        m = f.model
        for T in (0.5, 1.0):
            A = dist.apply_AT(f, T)
            ks = (1, 2) if m.is_discrete else (-2, -1, 1, 2)
            worst = 0.0
            for k in ks:
                xi = k / T
                y = min(1.0, 1.0 / (1.0 + xi)) if m.is_discrete else 0.0
                worst = max(worst, abs(quad.fourier_transform(A, xi, y)))
            out.add(f"f{i} mu={m.mu:g} T={T:g} max_k |(A_T f)^(k/T)|", worst, 1e-6)
    m = model_for(-24.0)
    f = SpectralFunction.basis(m, m.min_index)
    T = 1.0
    A = dist.apply_AT(f, T)
    out.add("nu=5 |delta0(A_T u_n)| from boundary samples", abs(dist.boundary_value(A, m)), 0.01, ">=")
    flow = solver.solve_flow(f, m)
    z = np.linspace(-4, 4, 33) + 1j
    out.add("nu=5 A_T u_n = u(.-T) - u for the flow solution", np.max(np.abs(flow(z - T) - flow(z) - A(z))), 1e-6)
    return out.rows


# -------------------------------------------------------------- 11 rates


def suite_rates(seed: int = 0) -> list[Check]:
    out = _Collector("rates")
    rng = np.random.default_rng(seed + 5)
    Ns = 2 ** np.arange(4, 15)
    for mu in (2.0, 0.75, -8.0):
        m = model_for(mu)
        g = random_function(m, rng, 4)
        cb = harness.Coboundary(g, 1.0)
        x0 = 0.3 + (1j if m.is_discrete else 0)
        res = [harness.ergodic_average(cb, x0, 1.0, int(N)) for N in Ns]
        slope = np.polyfit(np.log(Ns), np.log([abs(r.direct) for r in res]), 1)[0]
        out.add(f"mu={mu:g} ergodic slope |slope + 1|", abs(slope + 1), 0.05)
        out.add(f"mu={mu:g} telescoping identity", max(abs(r.direct - r.telescoped) for r in res), 1e-10)
    out.add("alpha(0.75) - 0.0125", abs(harness.alpha(0.75) - 0.0125), 0, "==")
    expected = {
        1.0: {"D0": 0.5, "D_0": 0.5, "D_k": 0.0125},
        0.75: {"D0": 0.75, "D_0": 0.25, "D_k": 0.0125},
        -8.0: {"D0": 1.0, "D_k": 0.0125},
    }
    for mu, rows in expected.items():
        table = harness.exponent_table(mu, 0.75)
        gap = max(abs(table.row(kind).exponent - v) for kind, v in rows.items())
        out.add(f"exponent table mu={mu:g}", gap, 1e-15)
    # bound calculator sanity: coboundaries give exactly the remainder row
    m = model_for(2.0)
    g = random_function(m, rng, 4)
    asm = harness.SpectralAssembly([(2.0, coboundary(g, 1.0))], 0.75)
    terms, _ = harness.bound_terms(asm)
    out.add("coboundary bound * N - 1 at N=100",
            abs(harness.predict_ergodic_bound(asm, 100, terms=terms).value * 100 - 1), 1e-6)
    f0 = lambda z: 1.0 / (1.0 + np.asarray(z) ** 2)  # noqa: E731
    tw = [abs(harness.twisted_average(f0, 0.0, 0.3, float(N))) for N in Ns]
    out.add("twisted average slope |slope + 1|", abs(np.polyfit(np.log(Ns), np.log(tw), 1)[0] + 1), 0.05)
    return out.rows


# ------------------------------------------------------------ 12 Fourier


def suite_fourier(seed: int = 0) -> list[Check]:
    # doubling the grid doubles both the extent and the resolution
    out = _Collector("fourier")
    for i, f in enumerate(battery(seed)):
        cache: dict = {}
        for s in (2, 3):
            a = harness.fourier_decay_check(f, s, extents=(20.0,), points_per_unit=4, cache=cache)[20.0]
            b = harness.fourier_decay_check(f, s, extents=(40.0,), points_per_unit=8, cache=cache)[40.0]
            out.add(f"f{i} mu={f.model.mu:g} s={s} ratio change under grid doubling", abs(b - a) / a, 0.25)
    return out.rows


SUITES = {
    "algebra": suite_algebra,
    "ladder": suite_ladder,
    "norms": suite_norms,
    "invariance": suite_invariance,
    "roundtrip": suite_roundtrip,
    "cross": suite_cross,
    "removal": suite_removal,
    "decay": suite_decay,
    "poisson": suite_poisson,
    "obstruction": suite_obstruction,
    "rates": suite_rates,
    "fourier": suite_fourier,
}
CRITERIA = {i + 1: name for i, name in enumerate(SUITES)}


def run_suite(name: str, seed: int = 0) -> list[Check]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return SUITES[name](seed)
