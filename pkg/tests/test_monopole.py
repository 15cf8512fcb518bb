import math

import mpmath as mp
import pytest
from hypothesis import given, settings

from conftest import geometries
from spherecasimir import (
    SphereGeometry,
    capacitance_matrix,
    delta_equal_spheres,
    delta_sphere_plane,
    derive_parameters,
    free_energy_total,
    free_energy_z_form,
    geometry_from_mu,
    monopole_delta,
    monopole_series,
)
from spherecasimir.monopole import g_exponent, g_function

mp.mp.dps = 40


def image_charge_capacitance(R1: float, R2: float, L: float, sweeps: int = 4000):
    """c11, c21 by iterated images: sphere 1 at unit potential, sphere 2 grounded."""
    d = mp.mpf(R1) + R2 + L
    R1, R2 = mp.mpf(R1), mp.mpf(R2)
    q, x = R1, mp.mpf(0)  # charge inside sphere 1, distance from its centre
    total1, total2 = q, mp.mpf(0)
    for _ in range(sweeps):
        a = d - x
        q2, p = -q * R2 / a, R2**2 / a  # image in sphere 2, p from centre 2
        total2 += q2
        b = d - p
        q, x = -q2 * R1 / b, R1**2 / b
        total1 += q
        if abs(q) < mp.mpf(10) ** -35 * abs(total1):
            break
    return float(total1), float(total2)


def reference_series(g, n_terms=4000):
    y = mp.cosh(mp.mpf(g.mu))
    U = [mp.mpf(1), 2 * y]
    while len(U) < n_terms + 2:
        U.append(2 * y * U[-1] - U[-2])
    ae = mp.fsum(1 / (U[n] + g.alpha * U[n - 1]) for n in range(1, n_terms))
    be = mp.fsum(1 / (U[n] + g.beta * U[n - 1]) for n in range(1, n_terms))
    ao = mp.sqrt(g.rho12) * mp.fsum(1 / U[n] for n in range(n_terms))
    return float(ae), float(be), float(ao)


@pytest.mark.parametrize("R1,R2,L", [(1.0, 1.0, 1.0), (1.0, 3.0, 0.2), (5.0, 0.5, 2.0), (2.0, 1.0, 0.05)])
def test_series_against_chebyshev_recurrence(R1, R2, L):
    g = derive_parameters(SphereGeometry(R1, R2, L))
    ms = monopole_series(g)
    ae, be, ao = reference_series(g)
    assert ms.Ae.value == pytest.approx(ae, rel=1e-14)
    assert ms.Be.value == pytest.approx(be, rel=1e-14)
    assert ms.Ao.value == pytest.approx(ao, rel=1e-14)
    assert ms.Bo is ms.Ao


@pytest.mark.parametrize("R1,R2,L", [(1.0, 1.0, 1.0), (1.0, 3.0, 0.2), (5.0, 0.5, 2.0), (1.0, 1.0, 10.0)])
def test_capacitance_against_image_charges(R1, R2, L):
    cap = capacitance_matrix(SphereGeometry(R1, R2, L))
    c11, c21 = image_charge_capacitance(R1, R2, L)
    assert cap.c11 == pytest.approx(c11, rel=1e-13)
    assert cap.c12 == pytest.approx(c21, rel=1e-13)
    c22, c12 = image_charge_capacitance(R2, R1, L)
    assert cap.c22 == pytest.approx(c22, rel=1e-13)
    assert cap.c21 == pytest.approx(c12, rel=1e-13)


def test_capacitance_far_apart():
    R1, R2, L = 1.0, 2.0, 1e4
    cap = capacitance_matrix(SphereGeometry(R1, R2, L))
    d = R1 + R2 + L
    assert cap.c11 == pytest.approx(R1, rel=1e-6)
    assert cap.c12 == pytest.approx(-R1 * R2 / d, rel=1e-6)
    assert cap.as_array().shape == (2, 2)


@settings(max_examples=60, deadline=None)
@given(geometries())
def test_determinant_link(sg):
    cap = capacitance_matrix(sg)
    phi = monopole_delta(derive_parameters(sg)).value
    assert cap.det == pytest.approx(sg.R1 * sg.R2 * math.exp(phi), rel=1e-12)
    assert phi > 0


@settings(max_examples=60, deadline=None)
@given(geometries())
def test_z_form_matches_composition(sg):
    g = derive_parameters(sg)
    zf = free_energy_z_form(g)
    assert zf.phi_delta.value == pytest.approx(monopole_delta(g).value, rel=1e-12)
    assert zf.value == pytest.approx(free_energy_total(g, representation="multipole").value, rel=1e-12, abs=1e-14)


def test_g_function_and_exponent():
    for mu, ratio in [(0.01, 1.0), (0.7, 0.2), (2.0, 50.0)]:
        Z = math.exp(-mu)
        assert math.exp(-g_exponent(mu, ratio)) == pytest.approx(g_function(Z, ratio), rel=1e-13)
    assert g_exponent(1.0, math.inf) == 0.0


def test_representations_of_total_agree():
    g = derive_parameters(SphereGeometry(1.0, 2.0, 0.3))
    rt = free_energy_total(g, representation="roundtrip").value
    mp_ = free_energy_total(g, representation="multipole").value
    assert rt == pytest.approx(mp_, rel=1e-12)
    with pytest.raises(ValueError):
        free_energy_total(g, representation="spectral")


@pytest.mark.parametrize("eps", [0.01, 0.3, 2.0])
def test_sphere_plane_limit(eps):
    plane = geometry_from_mu(math.acosh(1 + eps), 0.0)
    assert monopole_delta(plane).value == pytest.approx(delta_sphere_plane(eps).value, rel=1e-12)
    near = derive_parameters(SphereGeometry(1e7, 1.0, eps))
    assert monopole_delta(near).value == pytest.approx(delta_sphere_plane(eps).value, rel=1e-5)


@pytest.mark.parametrize("delta", [1e-4, 0.1, 3.0])
def test_equal_sphere_limit(delta):
    g = derive_parameters(SphereGeometry(2.0, 2.0, 4.0 * delta))
    assert monopole_delta(g).value == pytest.approx(delta_equal_spheres(delta).value, rel=1e-12)


def test_correction_vanishes_at_large_separation():
    far = monopole_delta(derive_parameters(SphereGeometry(1.0, 1.0, 1e6))).value
    assert 0 < far < 1e-11


@pytest.mark.parametrize("mu", [0.05, 0.5, 3.0])
@pytest.mark.parametrize("u", [0.02, 0.15, 0.25])
def test_total_energy_sign_and_ordering(mu, u):
    g = geometry_from_mu(mu, u)
    total = free_energy_total(g).value
    from spherecasimir import dirichlet_free_energy_roundtrip

    assert total < 0
    assert abs(total) < abs(dirichlet_free_energy_roundtrip(g).value)


def test_g_identities():
    for Z in (0.1, 0.6, 0.97):
        for alpha in (0.3, 2.0, 17.0):
            assert g_function(Z, alpha) * g_function(Z, 1 / alpha) == pytest.approx(Z, rel=1e-15)
        assert g_function(Z, 1.0) == pytest.approx(math.sqrt(Z), rel=1e-15)


def test_sphere_plane_special_values():
    from spherecasimir.monopole import _z_from_aspect

    assert _z_from_aspect(1.0)[0] == pytest.approx(2 - math.sqrt(3), rel=1e-15)
    far = 1e4
    Z = _z_from_aspect(far)[0]
    # agreement is to leading order only; the next terms differ at O(Z^2)
    assert delta_sphere_plane(far).value == pytest.approx(math.log1p(Z), rel=3 * Z)


@pytest.mark.parametrize("delta", [0.01, 0.4, 5.0])
def test_equal_sphere_factorisation(delta):
    g = derive_parameters(SphereGeometry(1.0, 1.0, 2.0 * delta))
    ms = monopole_series(g)
    a, o = ms.Ae.value, ms.Ao.value
    three_log = delta_equal_spheres(delta).value
    assert three_log == pytest.approx(math.log((1 + a) ** 2 - o * o), rel=1e-12)
    assert three_log == pytest.approx(math.log1p(a + o) + math.log1p(a - o), rel=1e-12)
    assert delta_equal_spheres(1e5).value < 1e-10


def test_series_far_apart_and_equal_radii():
    g = derive_parameters(SphereGeometry(1.0, 2.0, 1e5))
    ms = monopole_series(g)
    assert ms.Ae.value < 1e-9 and ms.Be.value < 1e-9
    assert ms.Ao.value == pytest.approx(g.sqrt_rho12, rel=1e-9)
    eq = monopole_series(derive_parameters(SphereGeometry(3.0, 3.0, 0.7)))
    assert eq.Ae.value == eq.Be.value
