"""Special functions used by the round-trip sums and the short-distance expansion.

Exact tables (Bernoulli numbers, Stirling numbers of the second kind) are
built with :class:`fractions.Fraction` and Python integers and cached; they
are only converted to floats at the point of evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

import numpy as np

from .geometry import GeometryDerived

Number = Union[int, float, Fraction]


@dataclass(frozen=True)
class Constants:
    zeta3: float
    glaisher_logA: float
    euler_gamma: float


CONSTANTS = Constants(
    zeta3=1.2020569031595942854,
    glaisher_logA=0.24875447703378426,
    euler_gamma=0.57721566490153286061,
)

EULER_GAMMA = CONSTANTS.euler_gamma
LOG2 = math.log(2.0)


# --- Chebyshev polynomials of the second kind ------------------------------


def chebyshev_u_recurrence(n: int, y: float) -> float:
    """U_n(y) from the three-term recurrence U_{k+1} = 2y U_k - U_{k-1}."""
    if n < 0:
        raise ValueError("n must be >= 0")
    prev, cur = 0.0, 1.0
    for _ in range(n):
        prev, cur = cur, 2.0 * y * cur - prev
    return cur


def chebyshev_U(n: int, geom: GeometryDerived) -> float:
    """U_n(y) for y = cosh(mu) in the form sinh((n+1) mu)/sinh(mu).

    Returns ``inf`` once the value exceeds the double range; use
    :func:`inverse_chebyshev_U` when only 1/U_n is needed.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    mu = geom.mu
    if (n + 1) * mu > 700.0:
        # sinh((n+1)mu)/sinh(mu) = exp(n mu) (1 - Z^{2(n+1)})/(1 - Z^2)
        log_val = n * mu + math.log(-math.expm1(-2 * (n + 1) * mu)) - math.log(-math.expm1(-2 * mu))
        return math.exp(log_val) if log_val < 709.0 else math.inf
    return math.sinh((n + 1) * mu) / math.sinh(mu)


def inverse_chebyshev_U(n, mu: float):
    """1/U_n(cosh mu) = (Z^-1 - Z) Z^{n+1}/(1 - Z^{2(n+1)}), free of overflow.

    ``n`` may be an integer or an integer array.
    """
    n1 = np.asarray(n, dtype=float) + 1.0
    val = 2.0 * math.sinh(mu) * np.exp(-n1 * mu) / -np.expm1(-2.0 * n1 * mu)
    return float(val) if np.ndim(val) == 0 else val


# --- Bernoulli numbers and polynomials --------------------------------------


@lru_cache(maxsize=None)
def _bernoulli_table(kmax: int) -> tuple[Fraction, ...]:
    # sum_{j=0}^{k} C(k+1, j) B_j = 0  for k >= 1
    table = [Fraction(1)]
    for k in range(1, kmax + 1):
        acc = Fraction(0)
        for j in range(k):
            acc += math.comb(k + 1, j) * table[j]
        table.append(-acc / (k + 1))
    return tuple(table)


def bernoulli_number(k: int) -> Fraction:
    """Exact Bernoulli number B_k with the convention B_1 = -1/2."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k > 1 and k % 2:
        return Fraction(0)
    return _bernoulli_table(max(k, 32))[k]


def bernoulli_poly(n: int, c: Number) -> Number:
    """Bernoulli polynomial B_n(c) = sum_k C(n, k) B_k c^(n-k).

    Exact when ``c`` is an int or Fraction, float otherwise.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if isinstance(c, (int, Fraction)):
        return sum(math.comb(n, k) * bernoulli_number(k) * Fraction(c) ** (n - k) for k in range(n + 1))
    return math.fsum(math.comb(n, k) * float(bernoulli_number(k)) * c ** (n - k) for k in range(n + 1))


# --- Stirling numbers of the second kind -----------------------------------


@lru_cache(maxsize=None)
def _stirling2_row(n: int) -> tuple[int, ...]:
    if n == 0:
        return (1,)
    prev = _stirling2_row(n - 1)
    row = [0] * (n + 1)
    for k in range(1, n + 1):
        left = prev[k] if k < len(prev) else 0
        row[k] = k * left + prev[k - 1]
    return tuple(row)


def stirling2(n: int, k: int) -> int:
    """Exact S(n, k); zero for k > n."""
    if n < 0 or k < 0:
        raise ValueError("n and k must be >= 0")
    if k > n:
        return 0
    return _stirling2_row(n)[k]


# --- partial ordinary Bell polynomials --------------------------------------


def bell_partial_ordinary(n: int, k: int, coeffs: Sequence[Number]) -> Number:
    """Coefficient of x^n in (c_1 x + c_2 x^2 + ...)^k; ``coeffs[0]`` is c_1.

    Works for any numeric type supporting + and *; Fractions stay exact.
    """
    if n < 0 or k < 0:
        raise ValueError("n and k must be >= 0")
    if k == 0:
        return 1 if n == 0 else 0
    if n < k:
        return 0
    base = [0] * (n + 1)
    for i in range(1, n + 1):
        if i - 1 < len(coeffs):
            base[i] = coeffs[i - 1]
    poly = [1] + [0] * n
    for _ in range(k):
        nxt = [0] * (n + 1)
        for i, a in enumerate(poly):
            if not a:
                continue
            for j in range(1, n + 1 - i):
                if base[j]:
                    nxt[i + j] += a * base[j]
        poly = nxt
    return poly[n]


# --- digamma and polygamma --------------------------------------------------

_ASYMPTOTIC_X = 20.0
_ASYMPTOTIC_TERMS = 14


def polygamma(n: int, x: float) -> float:
    """psi^(n)(x) for real x > 0.

    The argument is shifted upward with psi^(n)(x) = psi^(n)(x+1) - (-1)^n n!/x^(n+1)
    until x >= 20 + n and then the asymptotic Bernoulli series is used.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if not x > 0:
        raise ValueError(f"polygamma needs x > 0, got {x!r}")
    x = float(x)
    fact = math.factorial(n)
    sign = -1.0 if n % 2 == 0 else 1.0  # -(-1)^n
    parts: list[float] = []
    while x < _ASYMPTOTIC_X + n:
        parts.append(sign * fact / x ** (n + 1))
        x += 1.0
    if n == 0:
        parts.append(math.log(x))
        parts.append(-0.5 / x)
        x2 = x * x
        pw = x2
        for k in range(1, _ASYMPTOTIC_TERMS + 1):
            parts.append(-float(bernoulli_number(2 * k)) / (2 * k * pw))
            pw *= x2
        return math.fsum(parts)
    outer = 1.0 if n % 2 else -1.0  # (-1)^(n+1)
    parts.append(outer * math.factorial(n - 1) / x**n)
    parts.append(outer * fact / (2.0 * x ** (n + 1)))
    for k in range(1, _ASYMPTOTIC_TERMS + 1):
        coef = float(bernoulli_number(2 * k)) * math.factorial(2 * k + n - 1) / math.factorial(2 * k)
        parts.append(outer * coef / x ** (2 * k + n))
    return math.fsum(parts)


def digamma(x: float) -> float:
    return polygamma(0, x)
