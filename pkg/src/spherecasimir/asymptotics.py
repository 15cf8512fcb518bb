"""Short-distance expansion of the monopole correction in powers of mu.

Writing g_alpha = Z^(1/2 + v(mu)) turns the monopole correction into

    Phi_Delta = log[(1 + J+ I+)(1 + J- I-) - J+ J- I(1)^2]

with I(c) = sum_l Z^(c(2l+1))/(1 - Z^(2l+1)), J(c) = 2 sinh((c-1) mu) and
c = 3/2 +- v(mu).  Both I and J have complete expansions in s = mu^2; the
-log(mu/2) piece of I is carried symbolically through

    Lam = gamma - log(mu/2)

so that every coefficient below is an array indexed by (power of s, power of Lam).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .specfun import (
    EULER_GAMMA,
    LOG2,
    bell_partial_ordinary,
    bernoulli_number,
    polygamma,
    stirling2,
)

MAX_TAYLOR_ORDER = 10
SOFT_MU_BOUND = 0.5


# --- v(mu) and c(mu) --------------------------------------------------------


@dataclass(frozen=True)
class VTaylor:
    """Taylor coefficients of v(mu) = sum_n v[n] mu^(2n); v[0] == v0."""

    v0: float
    v: tuple[float, ...]


def _check_u(u: float) -> None:
    if not 0.0 <= u <= 0.25:
        raise ValueError(f"u must lie in [0, 1/4], got {u!r}")


def v0_from_u(u: float, sign: int = 1) -> float:
    _check_u(u)
    return math.copysign(0.5 * math.sqrt(1.0 - 4.0 * u), sign)


def v_taylor(u: float, N: int = 2, sign: int = 1) -> VTaylor:
    """Coefficients v_0..v_N; ``sign`` is sgn(R1 - R2).

    v_n = 1/(2n+1)! sum_{k=0}^{2n} k! S(2n+1, k+1) (v0 - 1/2)^(k+1) for n >= 1.
    The alternating sum is evaluated exactly on the binary value of v0.
    """
    if not 0 <= N <= MAX_TAYLOR_ORDER:
        raise ValueError(f"N must lie in [0, {MAX_TAYLOR_ORDER}], got {N}")
    v0 = v0_from_u(u, sign)
    w = Fraction(v0) - Fraction(1, 2)
    coeffs = [v0]
    for n in range(1, N + 1):
        acc = sum(math.factorial(k) * stirling2(2 * n + 1, k + 1) * w ** (k + 1) for k in range(2 * n + 1))
        coeffs.append(float(acc / math.factorial(2 * n + 1)))
    return VTaylor(v0, tuple(coeffs))


def v_function(mu: float, alpha: float) -> float:
    """v(mu) = 1/2 - [log(1 + alpha e^mu) - log(1 + alpha e^-mu)]/(2 mu)."""
    return 0.5 - math.atanh(alpha * math.sinh(mu) / (1.0 + alpha * math.cosh(mu))) / mu


def c_series(u: float, sign: int, N: int = 2, v_sign: int = 1) -> list[float]:
    """Coefficients of c(mu) = 3/2 +- v(mu) in powers of mu^2.

    ``sign`` picks the +/- branch, ``v_sign`` the sign of v0.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    vt = v_taylor(u, N, v_sign)
    return [1.5 + sign * vt.v[0]] + [sign * vn for vn in vt.v[1:]]


# --- series arithmetic in (s, Lam) --------------------------------------------


def _mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of two truncated double series; s-order is min of the inputs."""
    m = min(a.shape[0], b.shape[0])
    p = a.shape[1] + b.shape[1] - 1
    out = np.zeros((m, p))
    for i in range(m):
        for j in range(m - i):
            out[i + j] += np.convolve(a[i], b[j])
    return out


def _pad(a: np.ndarray, p: int) -> np.ndarray:
    out = np.zeros((a.shape[0], p))
    out[:, : a.shape[1]] = a
    return out


# --- I(c) and J(c) coefficients -----------------------------------------------


def I_coefficients(c: Sequence[float], m_max: int = 2) -> np.ndarray:
    """Coefficients I_m of I(c) = (1/(2 mu)) sum_m I_m mu^(2m).

    Returns an array of shape (m_max+1, 2): column 0 is the constant part,
    column 1 the coefficient of Lam = gamma - log(mu/2).  Only I_0 carries Lam:
    I_0 = Lam - (psi(c0) + gamma).
    """
    c = list(c)
    if len(c) < m_max + 1:
        c = c + [0.0] * (m_max + 1 - len(c))
    out = np.zeros((m_max + 1, 2))
    out[0] = (-(polygamma(0, c[0]) + EULER_GAMMA), 1.0)
    shifted = c[1:]
    for m in range(1, m_max + 1):
        parts = []
        for n in range(1, m + 1):
            b2n = float(bernoulli_number(2 * n))
            pref = b2n * (2 ** (2 * n) - 2) / (2 * n)
            inner = math.fsum(
                float(bernoulli_number(n + k))
                * bell_partial_ordinary(m - k, n - k, c)
                / (math.factorial(n - k) * math.factorial(n + k))
                for k in range(-n, n + 1)
            )
            parts.append(pref * inner)
            parts.append(-polygamma(n, c[0]) / math.factorial(n) * bell_partial_ordinary(m, n, shifted))
        out[m, 0] = math.fsum(parts)
    return out


def J_coefficients(c: Sequence[float], m_max: int = 2) -> np.ndarray:
    """Coefficients J_m of J(c) = 2 mu sum_m J_m mu^(2m)."""
    c = list(c)
    if len(c) < m_max + 1:
        c = c + [0.0] * (m_max + 1 - len(c))
    args = [c[0] - 1.0] + c[1:]
    return np.array(
        [
            math.fsum(
                bell_partial_ordinary(m + n + 1, 2 * n + 1, args) / math.factorial(2 * n + 1)
                for n in range(m + 1)
            )
            for m in range(m_max + 1)
        ]
    )


# --- Psi, phi, theta aggregates -------------------------------------------------


@dataclass(frozen=True)
class PsiTable:
    """Psi_n^(+/-) for n = 0, 1, 2 and the derived phi/theta aggregates."""

    v0: float
    plus: tuple[float, float, float]
    minus: tuple[float, float, float]

    def phi(self, n: int, m: int) -> float:
        return (0.5 + self.v0) ** m * self.plus[n] + (0.5 - self.v0) ** m * self.minus[n]

    def theta(self, n: int, m: int) -> float:
        return self.plus[n] * self.minus[m]


def psi_table(u: float, sign: int = 1) -> PsiTable:
    vt = v_taylor(u, 2, sign)
    v0, v1, v2 = vt.v

    def branch(s: int) -> tuple[float, float, float]:
        c0 = 1.5 + s * v0
        d1 = polygamma(1, c0)
        return (
            polygamma(0, c0) + EULER_GAMMA,
            s * v1 * d1,
            s * v2 * d1 + 0.5 * v1 * v1 * polygamma(2, c0),
        )

    return PsiTable(v0, branch(1), branch(-1))


# --- expansion coefficients ---------------------------------------------------


@dataclass(frozen=True)
class ExpansionCoefficients:
    eps: tuple[float, float, float]
    dels: tuple[float, float, float]

    def as_row(self) -> tuple[float, ...]:
        """(eps0, del0, eps1, del1, eps2, del2), the column order of the u-limit table."""
        return tuple(x for pair in zip(self.eps, self.dels) for x in pair)


def epsilon_delta(u: float, sign: int = 1) -> ExpansionCoefficients:
    """eps_n(u), delta_n(u) for n = 0, 1, 2 from the closed phi/theta formulas."""
    _check_u(u)
    pt = psi_table(u, sign)
    phi, th = pt.phi, pt.theta
    w = 1.0 - 4.0 * u
    e0 = 1.0 - u * phi(0, 0)
    d0 = 1.0 - phi(0, 1) + u * th(0, 0)
    e1 = 1.0 - 2.0 * u - u * u - 2.0 * u * (1.0 - 3.0 * u) * phi(0, 0) - 6.0 * u * phi(1, 0)
    d1 = math.fsum(
        [
            (13.0 - 30.0 * u) / 12.0,
            -u * (13.0 - 6.0 * u) / 12.0 * phi(0, 0),
            -w * phi(0, 1),
            -6.0 * phi(1, 1),
            2.0 * u * (1.0 - 3.0 * u) * th(0, 0),
            6.0 * u * (th(0, 1) + th(1, 0)),
        ]
    )
    p3 = 8.0 - 75.0 * u + 180.0 * u * u
    e2 = math.fsum(
        [
            (6.0 - 64.0 * u + 132.0 * u * u + 193.0 * u**3) / 6.0,
            -2.0 / 3.0 * u * p3 * phi(0, 0),
            -40.0 * u * (1.0 - 3.0 * u) * phi(1, 0),
            -120.0 * u * phi(2, 0),
        ]
    )
    d2 = math.fsum(
        [
            (467.0 - 5240.0 * u + 14810.0 * u * u + 300.0 * u**3) / 360.0,
            -u * (589.0 - 3040.0 * u + 1930.0 * u * u) / 120.0 * phi(0, 0),
            -(3.0 - 58.0 * u + 208.0 * u * u) / 3.0 * phi(0, 1),
            -5.0 / 3.0 * u * (13.0 - 6.0 * u) * phi(1, 0),
            -20.0 * w * phi(1, 1),
            -120.0 * phi(2, 1),
            2.0 / 3.0 * u * p3 * th(0, 0),
            40.0 * u * (1.0 - 3.0 * u) * (th(0, 1) + th(1, 0)),
            120.0 * u * th(1, 1),
            120.0 * u * (th(0, 2) + th(2, 0)),
        ]
    )
    return ExpansionCoefficients((e0, e1, e2), (d0, d1, d2))


def argument_series(u: float, order: int = 2, sign: int = 1) -> np.ndarray:
    """Expansion of the log argument, shape (order+1, 3) in (s, Lam).

    Built directly from the I and J coefficients, without the closed
    phi/theta formulas.  Column 2 (Lam^2) vanishes identically.
    """
    _check_u(u)
    cp = c_series(u, 1, order, sign)
    cm = c_series(u, -1, order, sign)
    ip, im = I_coefficients(cp, order), I_coefficients(cm, order)
    i1 = I_coefficients([1.0] + [0.0] * order, order)
    jp = J_coefficients(cp, order)[:, None]
    jm = J_coefficients(cm, order)[:, None]
    one = np.zeros((order + 1, 1))
    one[0, 0] = 1.0
    fp = _pad(one, 2) + _mul(jp, ip)
    fm = _pad(one, 2) + _mul(jm, im)
    return _pad(_mul(fp, fm), 3) - _mul(_mul(jp, jm), _mul(i1, i1))


def epsilon_delta_series(u: float, order: int = 2, sign: int = 1) -> ExpansionCoefficients:
    """eps_n, delta_n read off :func:`argument_series` (independent route)."""
    arg = argument_series(u, order, sign)
    fact = [math.factorial(2 * n + 1) for n in range(order + 1)]
    eps = tuple(fact[n] * arg[n, 1] for n in range(order + 1))
    dels = tuple(fact[n] * arg[n, 0] for n in range(order + 1))
    return ExpansionCoefficients(eps[:3], dels[:3])


@dataclass(frozen=True)
class ShortDistanceResult:
    """mu^4 approximations of Phi_Delta.

    ``log_form`` is log of the truncated argument, ``mercator`` its expansion
    in powers of mu^2; ``next_order`` is mu^2 times the magnitude of the mu^4
    term, a proxy for the omitted remainder.
    """

    log_form: float
    mercator: float
    next_order: float
    beyond_soft_bound: bool


def delta_short_distance(u: float, mu: float, sign: int = 1) -> ShortDistanceResult:
    """Short-distance approximation of Phi_Delta through order mu^4."""
    if not mu > 0:
        raise ValueError("mu must be > 0")
    co = epsilon_delta(u, sign)
    lam = EULER_GAMMA - math.log(0.5 * mu)
    p = [co.eps[n] * lam + co.dels[n] for n in range(3)]
    s = mu * mu
    log_form = math.log(p[0] + p[1] * s / 6.0 + p[2] * s * s / 120.0)
    second = p[1] / (6.0 * p[0]) * s
    fourth = (3.0 * p[2] / p[0] - 5.0 * p[1] ** 2 / p[0] ** 2) / 360.0 * s * s
    mercator = math.fsum([math.log(p[0]), second, fourth])
    return ShortDistanceResult(log_form, mercator, abs(fourth) * s, mu > SOFT_MU_BOUND)


def gamma_constants() -> tuple[float, float, float, float]:
    """gamma_1..gamma_4 of the sphere-plane expansion in closed form."""
    g1 = EULER_GAMMA + LOG2
    g2 = g1 + 1.0 / 12.0
    g3 = 0.5 * (5.0 * g2 * g2 - 3.0 * g1 * g1 - 107.0 / 120.0 * g1)
    g4 = 5.0 * g2 - 3.0 * g1 - 107.0 / 240.0
    return g1, g2, g3, g4


def table_limits() -> dict[float, tuple[float, ...]]:
    """Reference values of (eps0, del0, eps1, del1, eps2, del2) at u = 0 and u = 1/4."""
    l2 = LOG2
    return {
        0.0: (1.0, 0.0, 1.0, 1.0 / 12.0, 1.0, 107.0 / 360.0),
        0.25: (
            l2,
            l2 * l2,
            0.5 * (l2 - 1.0 / 8.0),
            0.5 * (l2 * l2 - l2 / 12.0),
            (l2 - 47.0 / 128.0) / 3.0,
            (l2 * l2 - 83.0 / 320.0 * l2 - 5.0 / 384.0) / 3.0,
        ),
    }
