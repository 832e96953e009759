"""The sl(2, R) skeleton: basis matrices, brackets, series classification."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidDiscreteParameter

_MATRICES = {
    "U": ((0, 1), (0, 0)),
    "V": ((0, 0), (1, 0)),
    "X": ((1, 0), (0, -1)),
    "Y": ((0, -1), (-1, 0)),
    "Theta": ((0, 1), (-1, 0)),
}

PRINCIPAL = "Principal"
COMPLEMENTARY = "Complementary"
DISCRETE = "Discrete"


@dataclass(frozen=True)
class LieElement:
    name: str
    matrix: np.ndarray = field(compare=False, repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if m.shape != (2, 2) or m[0, 0] + m[1, 1] != 0:
            raise ValueError("Lie elements are traceless 2x2 matrices")


def basis_element(name: str) -> LieElement:
    """The named basis vector as an integer matrix."""
    if name not in _MATRICES:
        raise KeyError(f"unknown basis element {name!r}")
    return LieElement(name, np.array(_MATRICES[name], dtype=np.int64))


U, V, X, Y, THETA = (basis_element(n) for n in ("U", "V", "X", "Y", "Theta"))


def _as_matrix(a) -> np.ndarray:
    return a.matrix if isinstance(a, LieElement) else np.asarray(a)


def commutator(a, b) -> np.ndarray:
    """ab - ba; exact when both entries are integer matrices."""
    ma, mb = _as_matrix(a), _as_matrix(b)
    return ma @ mb - mb @ ma


# Brackets among X, Y, Theta as (left, right, coefficient, result).
STRUCTURE_CONSTANTS = (
    ("X", "Y", -2, "Theta"),
    ("Y", "X", 2, "Theta"),
    ("Theta", "X", 2, "Y"),
    ("X", "Theta", -2, "Y"),
    ("Theta", "Y", -2, "X"),
    ("Y", "Theta", 2, "X"),
)


@dataclass(frozen=True)
class SeriesClass:
    """Series class of the irreducible model with Casimir parameter ``mu``."""

    kind: str
    mu: float
    nu: complex
    lowest_weight: int | None = None

    @property
    def is_discrete(self) -> bool:
        return self.kind == DISCRETE

    @property
    def nu_real(self) -> float:
        return float(self.nu.real)

    @property
    def nu_int(self) -> int:
        if not self.is_discrete:
            raise ValueError("integer nu only exists for the discrete series")
        return int(round(self.nu.real))


def nu_from_mu(mu: float) -> complex:
    """Principal branch of sqrt(1 - mu)."""
    return complex(cmath.sqrt(complex(1.0 - mu, 0.0)))


def classify(mu: float, tol: float = 1e-9) -> SeriesClass:
    mu = float(mu)
    nu = nu_from_mu(mu)
    if mu >= 1.0:
        return SeriesClass(PRINCIPAL, mu, complex(0.0, math.sqrt(mu - 1.0)))
    if mu > 0.0:
        return SeriesClass(COMPLEMENTARY, mu, complex(math.sqrt(1.0 - mu), 0.0))
    root = math.sqrt(1.0 - mu)
    odd = round(root)
    if odd % 2 != 1 or abs(root - odd) > tol:
        raise InvalidDiscreteParameter(
            f"mu={mu} gives nu={root}, which is not an odd positive integer"
        )
    return SeriesClass(DISCRETE, mu, complex(float(odd), 0.0), (1 + odd) // 2)


def discrete_mu(nu: int) -> float:
    """Casimir parameter of the discrete series with integer parameter ``nu``."""
    return float(1 - nu * nu)


def horocycle_matrix(t):
    """exp(tU); exact for integer or Fraction input."""
    return np.array([[1, t], [0, 1]])
