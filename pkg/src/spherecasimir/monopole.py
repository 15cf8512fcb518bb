"""Monopole correction, full Drude free energy, and the two-sphere capacitance matrix.

The correction Delta = F - F_D is

    Phi_Delta = log[(1 + A_e)(1 + B_e) - A_o^2]

with the Chebyshev series

    A_e = sum_{n>=1} 1/(U_n + alpha U_{n-1}),   alpha = R2/R1
    B_e = sum_{n>=1} 1/(U_n + beta U_{n-1}),    beta  = R1/R2
    A_o = B_o = sqrt(rho1 rho2) sum_{n>=0} 1/U_n

evaluated at y = cosh(mu).  The same quantities give the capacitance
coefficients c11 = R1 (1 + B_e), c22 = R2 (1 + A_e), c12 = -sqrt(R1 R2) A_o.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CasimirError
from .geometry import GeometryDerived, SphereGeometry, derive_parameters
from .scalar import _log1mexp, dirichlet_free_energy_multipole, dirichlet_free_energy_roundtrip
from .series import MAX_TERMS, SeriesResult, sum_series


@dataclass(frozen=True)
class MonopoleSeries:
    Ae: SeriesResult
    Be: SeriesResult
    Ao: SeriesResult

    @property
    def Bo(self) -> SeriesResult:
        return self.Ao

    @property
    def log_argument(self) -> float:
        ae, be, ao = self.Ae.value, self.Be.value, self.Ao.value
        # (1+Ae)(1+Be) - Ao^2 with the leading 1 kept separate
        return 1.0 + math.fsum([ae, be, ae * be, -ao * ao])

    @property
    def terms_used(self) -> int:
        return self.Ae.terms_used + self.Be.terms_used + self.Ao.terms_used


@dataclass(frozen=True)
class CapacitanceMatrix:
    """Capacitance coefficients of two conducting spheres (length units)."""

    c11: float
    c22: float
    c12: float

    @property
    def c21(self) -> float:
        return self.c12

    @property
    def det(self) -> float:
        return self.c11 * self.c22 - self.c12 * self.c12

    def as_array(self) -> np.ndarray:
        return np.array([[self.c11, self.c12], [self.c12, self.c22]])


def _even_terms(mu: float, ratio: float):
    """Terms 1/(U_n + ratio*U_{n-1}), n >= 1, in overflow-free Z-form."""
    two_sinh = 2.0 * math.sinh(mu)
    z = math.exp(-mu)

    def terms(n: np.ndarray) -> np.ndarray:
        n = n.astype(float)
        if math.isinf(ratio):
            return np.zeros_like(n)
        denom = -np.expm1(-2.0 * (n + 1.0) * mu) + ratio * z * -np.expm1(-2.0 * n * mu)
        return two_sinh * np.exp(-(n + 1.0) * mu) / denom

    return terms


def _odd_terms(mu: float):
    two_sinh = 2.0 * math.sinh(mu)

    def terms(n: np.ndarray) -> np.ndarray:
        n1 = n.astype(float) + 1.0
        return two_sinh * np.exp(-n1 * mu) / -np.expm1(-2.0 * n1 * mu)

    return terms


def monopole_series(geom: GeometryDerived, tol: float = 1e-15, max_terms: int = MAX_TERMS) -> MonopoleSeries:
    """A_e, B_e and A_o (= B_o) for the given geometry."""
    mu = geom.mu
    ae = sum_series(_even_terms(mu, geom.alpha), tol=tol, start=1, max_terms=max_terms)
    be = sum_series(_even_terms(mu, geom.beta), tol=tol, start=1, max_terms=max_terms)
    odd = sum_series(_odd_terms(mu), tol=tol, start=0, max_terms=max_terms)
    s = geom.sqrt_rho12
    ao = SeriesResult(s * odd.value, odd.terms_used, s * odd.last_term, odd.converged)
    return MonopoleSeries(ae, be, ao)


def monopole_delta(geom: GeometryDerived, tol: float = 1e-15, max_terms: int = MAX_TERMS) -> SeriesResult:
    """Phi_Delta = log[(1 + A_e)(1 + B_e) - A_o^2]."""
    ms = monopole_series(geom, tol, max_terms)
    arg = ms.log_argument
    if not arg > 0:
        raise CasimirError(f"non-positive log argument {arg!r}: monopole series failed")
    last = max(abs(ms.Ae.last_term), abs(ms.Be.last_term), abs(ms.Ao.last_term))
    return SeriesResult(math.log(arg), ms.terms_used, last, True)


def capacitance_matrix(g: SphereGeometry, tol: float = 1e-15, max_terms: int = MAX_TERMS) -> CapacitanceMatrix:
    """Capacitance coefficients c11, c22, c12 of two conducting spheres."""
    geom = derive_parameters(g)
    ms = monopole_series(geom, tol, max_terms)
    return CapacitanceMatrix(
        c11=geom.R1 * (1.0 + ms.Be.value),
        c22=geom.R2 * (1.0 + ms.Ae.value),
        c12=-math.sqrt(geom.R1 * geom.R2) * ms.Ao.value,
    )


def free_energy_total(
    geom: GeometryDerived,
    tol: float = 1e-15,
    max_terms: int = MAX_TERMS,
    representation: str = "roundtrip",
) -> SeriesResult:
    """Phi = Phi_D + Phi_Delta for two Drude spheres.

    ``representation`` selects the Dirichlet series ('roundtrip' or 'multipole').
    """
    if representation == "roundtrip":
        d = dirichlet_free_energy_roundtrip(geom, tol, max_terms)
    elif representation == "multipole":
        d = dirichlet_free_energy_multipole(geom, tol, max_terms)
    else:
        raise ValueError(f"unknown representation {representation!r}")
    delta = monopole_delta(geom, tol, max_terms)
    return SeriesResult(
        d.value + delta.value,
        d.terms_used + delta.terms_used,
        max(abs(d.last_term), abs(delta.last_term)),
        True,
    )


# --- explicit Z-form ---------------------------------------------------------


def g_exponent(mu: float, ratio: float) -> float:
    """lambda with g_ratio(Z) = exp(-lambda), g = ((Z^2 + ratio Z)/(1 + ratio Z))^(1/2).

    Uses lambda = artanh(sinh(mu)/(ratio + cosh(mu))), which avoids the
    cancellation of the logarithmic form at small mu and large ratio.
    """
    if math.isinf(ratio):
        return 0.0
    e2 = math.exp(-2.0 * mu)
    return math.atanh(-math.expm1(-2.0 * mu) / (2.0 * ratio * math.exp(-mu) + 1.0 + e2))


def g_function(Z: float, ratio: float) -> float:
    """g_ratio(Z) = ((Z^2 + ratio Z)/(1 + ratio Z))^(1/2)."""
    if math.isinf(ratio):
        return 1.0
    return math.sqrt((Z * Z + ratio * Z) / (1.0 + ratio * Z))


@dataclass(frozen=True)
class ZFormResult:
    phi_D: SeriesResult
    phi_delta: SeriesResult

    @property
    def value(self) -> float:
        return self.phi_D.value + self.phi_delta.value


def free_energy_z_form(geom: GeometryDerived, tol: float = 1e-15, max_terms: int = MAX_TERMS) -> ZFormResult:
    """Full free energy written entirely in Z = exp(-mu) and g_alpha, g_beta.

    Independent of the Chebyshev series used by :func:`monopole_delta`.
    """
    mu = geom.mu
    lam_a = g_exponent(mu, geom.alpha)
    lam_b = g_exponent(mu, geom.beta)

    def weighted(lam: float):
        def terms(l: np.ndarray) -> np.ndarray:
            m = 2.0 * l + 1.0
            return np.exp(-m * (mu + lam)) / -np.expm1(-m * mu)

        return terms

    phi_d = dirichlet_free_energy_multipole(geom, tol, max_terms)
    s_a = sum_series(weighted(lam_a), tol=tol, max_terms=max_terms)
    s_b = sum_series(weighted(lam_b), tol=tol, max_terms=max_terms)
    s_1 = sum_series(weighted(0.0), tol=tol, max_terms=max_terms)
    # (1 - g^2)/g = 2 sinh(lambda); (1 - g_a^2)(1 - g_b^2)/Z = 4 sinh(lam_a) sinh(lam_b)
    ka = 2.0 * math.sinh(lam_a)
    kb = 2.0 * math.sinh(lam_b)
    xa = ka * s_a.value
    xb = kb * s_b.value
    cross = ka * kb * s_1.value * s_1.value
    arg = 1.0 + math.fsum([xa, xb, xa * xb, -cross])
    terms_used = s_a.terms_used + s_b.terms_used + s_1.terms_used
    last = max(abs(s_a.last_term), abs(s_b.last_term), abs(s_1.last_term))
    return ZFormResult(phi_d, SeriesResult(math.log(arg), terms_used, last, True))


# --- limiting geometries ----------------------------------------------------


def _z_from_aspect(eps: float) -> tuple[float, float]:
    """(Z, mu) for Z = 1 + eps - sqrt(eps (2 + eps))."""
    if not (math.isfinite(eps) and eps > 0):
        raise ValueError(f"aspect ratio must be positive and finite, got {eps!r}")
    mu = math.log1p(eps + math.sqrt(eps * (2.0 + eps)))
    return math.exp(-mu), mu


def delta_sphere_plane(eps: float, tol: float = 1e-15, max_terms: int = MAX_TERMS) -> SeriesResult:
    """Phi_Delta for a sphere of radius R at distance L = eps*R from a plane."""
    _, mu = _z_from_aspect(eps)

    def terms(l: np.ndarray) -> np.ndarray:
        l = l.astype(float)
        return np.exp(-(4.0 * l + 1.0) * mu) / -np.expm1(-(2.0 * l + 1.0) * mu)

    s = sum_series(terms, tol=tol, max_terms=max_terms)
    one_minus_z2 = -math.expm1(-2.0 * mu)
    return SeriesResult(math.log1p(one_minus_z2 * s.value), s.terms_used, s.last_term, True)


def delta_equal_spheres(delta_ratio: float, tol: float = 1e-15, max_terms: int = MAX_TERMS) -> SeriesResult:
    """Phi_Delta for two spheres of equal radius R at distance L = 2*delta*R.

    Evaluated in the three-logarithm form in Y = 1 + delta - sqrt(delta (2 + delta)).
    """
    _, nu = _z_from_aspect(delta_ratio)  # Y = exp(-nu)
    one_minus_y2 = -math.expm1(-2.0 * nu)

    def common(l: np.ndarray) -> np.ndarray:
        l = l.astype(float)
        return one_minus_y2 * -np.expm1(-2.0 * l * nu) * np.exp(-(2.0 * l + 1.0) * nu)

    def minus_terms(l: np.ndarray) -> np.ndarray:
        return common(l) / -np.expm1(-(2.0 * l.astype(float) + 1.0) * nu)

    def plus_terms(l: np.ndarray) -> np.ndarray:
        return common(l) / (1.0 + np.exp(-(2.0 * l.astype(float) + 1.0) * nu))

    s_minus = sum_series(minus_terms, tol=tol, start=1, max_terms=max_terms)
    s_plus = sum_series(plus_terms, tol=tol, start=1, max_terms=max_terms)
    value = math.log1p(-s_minus.value) + math.log1p(s_plus.value) - math.log(one_minus_y2)
    last = max(abs(s_minus.last_term), abs(s_plus.last_term))
    return SeriesResult(value, s_minus.terms_used + s_plus.terms_used, last, True)


def dirichlet_log1mexp(x):
    return _log1mexp(np.asarray(x, dtype=float))
