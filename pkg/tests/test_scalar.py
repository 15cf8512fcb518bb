import itertools
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings

from conftest import geometries
from spherecasimir import (
    derive_parameters,
    dirichlet_cyclic_determinant,
    dirichlet_expansion_coefficient,
    dirichlet_free_energy_multipole,
    dirichlet_free_energy_roundtrip,
    dirichlet_short_distance,
    geometry_from_mu,
)
from spherecasimir.oracle import cyclic_matrix_determinant, dirichlet_trace_enumeration

mp.mp.dps = 30


def reference_phi_d(mu: float) -> float:
    m = mp.mpf(mu)
    return float(mp.nsum(lambda l: (2 * l + 1) * mp.log(1 - mp.exp(-(2 * l + 1) * m)), [0, mp.inf]))


@pytest.mark.parametrize("mu", [0.05, 0.3, 1.0, 4.0, 30.0])
def test_dirichlet_against_high_precision(mu):
    g = geometry_from_mu(mu, 0.1)
    ref = reference_phi_d(mu)
    assert dirichlet_free_energy_roundtrip(g).value == pytest.approx(ref, rel=1e-13)
    assert dirichlet_free_energy_multipole(g).value == pytest.approx(ref, rel=1e-13)


@settings(max_examples=60, deadline=None)
@given(geometries())
def test_representations_agree(sg):
    g = derive_parameters(sg)
    rt = dirichlet_free_energy_roundtrip(g, tol=1e-15).value
    mp_ = dirichlet_free_energy_multipole(g, tol=1e-15).value
    assert rt == pytest.approx(mp_, rel=1e-12)
    assert rt < 0


def test_energy_depends_on_mu_only():
    a = dirichlet_free_energy_roundtrip(geometry_from_mu(0.4, 0.01)).value
    b = dirichlet_free_energy_roundtrip(geometry_from_mu(0.4, 0.25)).value
    assert a == b


def test_term_counts_compare():
    # the multipole sum needs fewer terms than the round-trip sum at short distance
    g = geometry_from_mu(0.05, 0.2)
    assert dirichlet_free_energy_multipole(g).terms_used < dirichlet_free_energy_roundtrip(g).terms_used


@pytest.mark.parametrize("mu", [0.1, 1.3])
def test_cyclic_determinant_all_sign_patterns(mu):
    g = geometry_from_mu(mu, 0.15)
    for r in (1, 2, 3):
        for signs in itertools.product((1, -1), repeat=2 * r):
            cls = "+" if signs.count(-1) % 2 == 0 else "-"
            dense = cyclic_matrix_determinant(r, cls, g, signs)
            assert dense == pytest.approx(dirichlet_cyclic_determinant(r, cls, g), rel=1e-11)


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_trace_over_sign_patterns(r):
    g = geometry_from_mu(0.8, 0.2)
    x = r * g.mu
    expected = math.cosh(x) / (2 * math.sinh(x) ** 2)
    assert dirichlet_trace_enumeration(r, g) == pytest.approx(expected, rel=1e-12)


def test_expansion_coefficients():
    assert dirichlet_expansion_coefficient(1) == pytest.approx(-7 / 2880, rel=1e-15)
    with pytest.raises(ValueError):
        dirichlet_expansion_coefficient(0)


def test_short_distance_remainder_order():
    errs = []
    for mu in (0.2, 0.1):
        exact = dirichlet_free_energy_roundtrip(geometry_from_mu(mu, 0.25), tol=1e-16).value
        errs.append(abs(dirichlet_short_distance(mu, order=2) - exact))
    assert 50 < errs[0] / errs[1] < 80


def test_short_distance_rejects_bad_input():
    with pytest.raises(ValueError):
        dirichlet_short_distance(0.0)
    with pytest.raises(ValueError):
        dirichlet_short_distance(0.1, order=11)


def test_single_term_dominance_and_far_limit():
    g = geometry_from_mu(5.0, 0.2)
    first = -0.5 * math.cosh(5.0) / math.sinh(5.0) ** 2
    assert dirichlet_free_energy_roundtrip(g).value == pytest.approx(first, rel=math.exp(-5.0))
    far = geometry_from_mu(40.0, 0.2)
    assert dirichlet_free_energy_multipole(far).value == pytest.approx(-far.Z, rel=1e-15)
    assert -1e-17 < dirichlet_free_energy_roundtrip(far).value < 0


def test_first_cyclic_determinant():
    g = geometry_from_mu(0.9, 0.1)
    assert dirichlet_cyclic_determinant(1, "+", g) == pytest.approx(2 * g.rho12 * (g.y - 1), rel=1e-14)
    assert dirichlet_cyclic_determinant(1, "-", g) == pytest.approx(2 * g.rho12 * (g.y + 1), rel=1e-14)
    assert all(dirichlet_cyclic_determinant(r, "-", g) > 0 for r in range(1, 20))


def test_monotone_in_mu():
    values = [dirichlet_free_energy_roundtrip(geometry_from_mu(mu, 0.2)).value for mu in np.geomspace(0.02, 10, 30)]
    assert all(a < b for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("tol", [1e-6, 1e-9, 1e-12])
def test_duality_scales_with_tolerance(tol):
    for mu in (0.05, 0.5, 5.0):
        g = geometry_from_mu(mu, 0.1)
        rt = dirichlet_free_energy_roundtrip(g, tol).value
        mp_ = dirichlet_free_energy_multipole(g, tol).value
        assert abs(rt - mp_) <= 10 * tol * abs(mp_)
