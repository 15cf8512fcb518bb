"""Sphere-sphere geometry and the dimensionless parameters derived from it.

Two spheres of radii R1, R2 have closest surface distance L and centre
distance R1 + R2 + L.  Everything downstream depends on

* ``y``  -- the geometry invariant, ``y = cosh(mu)``,
* ``mu`` and ``Z = exp(-mu)``,
* ``u = Reff**2/(R1*R2)`` in [0, 1/4] and ``v0 = (R1 - R2)/(2(R1 + R2))``,
* the radius ratios ``alpha = R2/R1`` and ``beta = R1/R2``.

The sphere-plane limit (R1 -> infinity) is representable through
:func:`geometry_from_mu` with ``u = 0``: it carries ``R1 = inf``,
``alpha = 0`` and ``beta = inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateGeometryError, InvalidGeometryError


@dataclass(frozen=True)
class SphereGeometry:
    """Radii R1, R2 and closest surface-to-surface distance L (common length unit)."""

    R1: float
    R2: float
    L: float

    def __post_init__(self) -> None:
        for name in ("R1", "R2", "L"):
            value = getattr(self, name)
            try:
                ok = math.isfinite(value) and value > 0
            except TypeError:
                ok = False
            if not ok:
                if name == "L" and value == 0:
                    raise DegenerateGeometryError("L = 0: spheres in contact, every series diverges")
                raise InvalidGeometryError(f"{name} must be positive and finite, got {value!r}")

    @property
    def center_distance(self) -> float:
        return (self.R1 + self.R2) + self.L

    def swapped(self) -> SphereGeometry:
        return SphereGeometry(self.R2, self.R1, self.L)


@dataclass(frozen=True)
class GeometryDerived:
    """All dimensionless parameters of a sphere-sphere arrangement.

    ``y_minus_1`` is stored separately because ``y`` itself loses all
    information about the separation when the spheres nearly touch.
    """

    R1: float
    R2: float
    L: float
    rho1: float
    rho2: float
    rho12: float
    y: float
    y_minus_1: float
    mu: float
    Z: float
    u: float
    v0: float
    alpha: float
    beta: float
    Reff: float

    @property
    def sqrt_rho12(self) -> float:
        return math.sqrt(self.rho12)

    @property
    def is_sphere_plane(self) -> bool:
        return math.isinf(self.R1) or math.isinf(self.R2)


def _mu_from_y_minus_1(t: float) -> float:
    # arcosh(1 + t) without forming 1 + t
    return math.log1p(t + math.sqrt(t * (2.0 + t)))


def derive_parameters(g: SphereGeometry) -> GeometryDerived:
    """Derive every dimensionless parameter from radii and separation.

    Raises
    ------
    DegenerateGeometryError
        If L is so small relative to the radii that mu underflows to zero.
    """
    R1, R2, L = float(g.R1), float(g.R2), float(g.L)
    rsum = R1 + R2
    prod = R1 * R2
    reff = prod / rsum
    t = L / reff + L * L / (2.0 * reff * rsum)
    mu = _mu_from_y_minus_1(t)
    if not mu > 0.0:
        raise DegenerateGeometryError(
            f"geometry-degenerate: mu underflows to 0 for L={L!r}, R1={R1!r}, R2={R2!r}"
        )
    cdist = rsum + L
    v0 = 0.5 * (R1 - R2) / rsum
    return GeometryDerived(
        R1=R1,
        R2=R2,
        L=L,
        rho1=R1 / cdist,
        rho2=R2 / cdist,
        rho12=(prod / cdist) / cdist,
        y=1.0 + t,
        y_minus_1=t,
        mu=mu,
        Z=math.exp(-mu),
        u=min(0.25, reff / rsum),  # rounding can push equal radii past 1/4
        v0=v0,
        alpha=R2 / R1,
        beta=R1 / R2,
        Reff=reff,
    )


def geometry_from_mu(mu: float, u: float) -> GeometryDerived:
    """Geometry with prescribed ``mu`` and ``u``; radii normalised to R1 + R2 = 1.

    The larger sphere is sphere 1 (``v0 >= 0``).  For ``u = 0`` the
    sphere-plane limit is returned with R2 = 1 and R1 = inf, so that L is the
    aspect ratio L/R of the remaining sphere.
    """
    if mu == 0.0:
        raise DegenerateGeometryError("mu = 0: spheres in contact, every series diverges")
    if not (math.isfinite(mu) and mu > 0.0):
        raise InvalidGeometryError(f"mu must be positive and finite, got {mu!r}")
    if not (0.0 <= u <= 0.25):
        raise InvalidGeometryError(f"u must lie in [0, 1/4], got {u!r}")
    # y - 1 = cosh(mu) - 1 = 2 sinh(mu/2)^2
    t = 2.0 * math.sinh(0.5 * mu) ** 2
    if u == 0.0:
        return GeometryDerived(
            R1=math.inf,
            R2=1.0,
            L=t,
            rho1=1.0,
            rho2=0.0,
            rho12=0.0,
            y=1.0 + t,
            y_minus_1=t,
            mu=mu,
            Z=math.exp(-mu),
            u=0.0,
            v0=0.5,
            alpha=0.0,
            beta=math.inf,
            Reff=1.0,
        )
    root = math.sqrt(1.0 - 4.0 * u)
    R2 = 2.0 * u / (1.0 + root)
    R1 = 1.0 - R2
    # L^2 + 2L - 2u(y-1) = 0 with Reff = u
    s = 2.0 * u * t
    L = s / (1.0 + math.sqrt(1.0 + s))
    return derive_parameters(SphereGeometry(R1, R2, L))


def y_from_rho(rho1: float, rho2: float) -> float:
    """Quotient form (1 - rho1^2 - rho2^2)/(2 rho1 rho2); loses accuracy near contact."""
    return (1.0 - rho1 * rho1 - rho2 * rho2) / (2.0 * rho1 * rho2)
