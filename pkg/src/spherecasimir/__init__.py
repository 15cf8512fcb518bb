"""Classical Casimir free energy and capacitance of two Drude spheres.

Energies are dimensionless, Phi = F/(k_B T/2).  The Dirichlet scalar part,
the monopole correction, independent matrix oracles and the short-distance
expansion are exposed at package level.
"""

__version__ = "0.1.0"

from .errors import (
    CasimirError,
    DegenerateGeometryError,
    InvalidGeometryError,
    SeriesStalledError,
    VerificationError,
)
from .geometry import GeometryDerived, SphereGeometry, derive_parameters, geometry_from_mu
from .series import SeriesResult, sum_series
from .scalar import (
    dirichlet_cyclic_determinant,
    dirichlet_expansion_coefficient,
    dirichlet_free_energy_multipole,
    dirichlet_free_energy_roundtrip,
    dirichlet_short_distance,
)
from .monopole import (
    CapacitanceMatrix,
    capacitance_matrix,
    delta_equal_spheres,
    delta_sphere_plane,
    free_energy_total,
    free_energy_z_form,
    monopole_delta,
    monopole_series,
)
from .asymptotics import delta_short_distance, epsilon_delta

__all__ = [
    "__version__",
    "CasimirError",
    "DegenerateGeometryError",
    "InvalidGeometryError",
    "SeriesStalledError",
    "VerificationError",
    "GeometryDerived",
    "SphereGeometry",
    "derive_parameters",
    "geometry_from_mu",
    "SeriesResult",
    "sum_series",
    "dirichlet_cyclic_determinant",
    "dirichlet_expansion_coefficient",
    "dirichlet_free_energy_multipole",
    "dirichlet_free_energy_roundtrip",
    "dirichlet_short_distance",
    "CapacitanceMatrix",
    "capacitance_matrix",
    "delta_equal_spheres",
    "delta_sphere_plane",
    "free_energy_total",
    "free_energy_z_form",
    "monopole_delta",
    "monopole_series",
    "delta_short_distance",
    "epsilon_delta",
]
