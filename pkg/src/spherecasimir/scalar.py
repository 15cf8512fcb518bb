"""Classical Casimir free energy of a Dirichlet scalar field between two spheres.

All energies are dimensionless, Phi = F/(k_B T/2).  Two exact
representations are provided, a sum over round trips and a sum over
bispherical multipoles, together with the closed-form determinant of the
cyclic round-trip matrix and the short-distance expansion in mu.
"""

from __future__ import annotations

import math

import numpy as np

from .geometry import GeometryDerived
from .series import MAX_TERMS, SeriesResult, sum_series
from .specfun import CONSTANTS, LOG2, bernoulli_number

MAX_EXPANSION_ORDER = 10


def _roundtrip_terms(mu: float):
    def terms(r: np.ndarray) -> np.ndarray:
        x = r * mu
        e = np.exp(-x)
        # cosh(x)/sinh(x)^2 = 2 e^-x (1 + e^-2x)/(1 - e^-2x)^2
        one_minus = -np.expm1(-2.0 * x)
        return -(2.0 * e * (1.0 + e * e) / (one_minus * one_minus)) / (2.0 * r)

    return terms


def dirichlet_free_energy_roundtrip(
    geom: GeometryDerived, tol: float = 1e-14, max_terms: int = MAX_TERMS
) -> SeriesResult:
    """Phi_D = -sum_{r>=1} cosh(r mu)/(2 r sinh(r mu)^2)."""
    return sum_series(_roundtrip_terms(geom.mu), tol=tol, start=1, max_terms=max_terms)


def _log1mexp(x: np.ndarray) -> np.ndarray:
    """log(1 - exp(-x)) for x > 0."""
    return np.where(x < LOG2, np.log(-np.expm1(-x)), np.log1p(-np.exp(-x)))


def dirichlet_free_energy_multipole(
    geom: GeometryDerived, tol: float = 1e-14, max_terms: int = MAX_TERMS
) -> SeriesResult:
    """Phi_D = sum_{l>=0} (2l+1) log(1 - Z^(2l+1))."""
    mu = geom.mu

    def terms(l: np.ndarray) -> np.ndarray:
        m = 2.0 * l + 1.0
        return m * _log1mexp(m * mu)

    return sum_series(terms, tol=tol, start=0, max_terms=max_terms)


def dirichlet_cyclic_determinant(r: int, sign: str, geom: GeometryDerived) -> float:
    """det M_r^(+/-) = 2 (rho1 rho2)^r [cosh(r mu) -/+ 1].

    ``sign='+'`` is the class with an even number of minus signs on the
    off-diagonal, ``'-'`` the odd class.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    x = r * geom.mu
    if sign == "+":
        # cosh(x) - 1 without cancellation
        bracket = 2.0 * math.sinh(0.5 * x) ** 2
    elif sign == "-":
        bracket = math.cosh(x) + 1.0
    else:
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    return 2.0 * geom.rho12**r * bracket


def dirichlet_expansion_coefficient(n: int) -> float:
    """Coefficient of mu^(2n), n >= 1, in the short-distance expansion of Phi_D."""
    if n < 1:
        raise ValueError("n must be >= 1")
    c = (
        bernoulli_number(2 * n)
        * bernoulli_number(2 * n + 2)
        / math.factorial(2 * n + 2)
        * (2 ** (2 * n + 1) - 1)
        * (2 * n + 1)
        / (2 * n)
    )
    return float(c)


def dirichlet_short_distance(mu: float, order: int = 2) -> float:
    """Short-distance expansion of Phi_D through mu^(2*order).

    The leading term -zeta(3)/(2 mu^2) is the proximity-force result.
    """
    if not mu > 0:
        raise ValueError("mu must be > 0")
    if not 0 <= order <= MAX_EXPANSION_ORDER:
        raise ValueError(f"order must lie in [0, {MAX_EXPANSION_ORDER}], got {order}")
    parts = [
        -CONSTANTS.zeta3 / (2.0 * mu * mu),
        math.log(mu) / 12.0,
        1.0 / 12.0,
        -CONSTANTS.glaisher_logA,
        LOG2 / 6.0,
    ]
    for n in range(1, order + 1):
        parts.append(dirichlet_expansion_coefficient(n) * mu ** (2 * n))
    return math.fsum(parts)
