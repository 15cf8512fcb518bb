import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spherecasimir import epsilon_delta, geometry_from_mu, monopole_delta
from spherecasimir.asymptotics import (
    I_coefficients,
    argument_series,
    delta_short_distance,
    epsilon_delta_series,
    gamma_constants,
    table_limits,
    v_function,
    v_taylor,
)
from spherecasimir.specfun import EULER_GAMMA

mp.mp.dps = 30
U_GRID = [0.0, 0.01, 0.07, 0.13, 0.2, 0.24, 0.25]


@pytest.mark.parametrize("u", [0.0, 0.25])
def test_limit_rows(u):
    row = epsilon_delta(u).as_row()
    assert row == pytest.approx(table_limits()[u], abs=1e-12)


def test_limit_row_at_zero_in_words():
    assert epsilon_delta(0.0).as_row() == pytest.approx((1, 0, 1, 1 / 12, 1, 107 / 360), abs=1e-14)


@pytest.mark.parametrize("u", U_GRID)
def test_closed_formulas_match_series_route(u):
    closed = epsilon_delta(u).as_row()
    series = epsilon_delta_series(u).as_row()
    assert series == pytest.approx(closed, rel=1e-11, abs=1e-13)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.0, 0.25))
def test_log_squared_terms_cancel(u):
    assert np.all(np.abs(argument_series(u)[:, 2]) < 1e-13)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.0, 0.25))
def test_independent_of_which_sphere_is_larger(u):
    a = epsilon_delta(u, 1).as_row()
    b = epsilon_delta(u, -1).as_row()
    assert a == pytest.approx(b, rel=1e-12, abs=1e-14)


def test_unit_shift_coefficients():
    i = I_coefficients([1.0, 0.0, 0.0])
    assert i[0] == pytest.approx([0.0, 1.0], abs=1e-15)
    assert i[1, 0] == pytest.approx(1 / 72, rel=1e-14)
    assert i[2, 0] == pytest.approx(7 / 43200, rel=1e-14)
    assert np.all(i[1:, 1] == 0)


@pytest.mark.parametrize("alpha", [0.05, 0.4, 1.0])
def test_v_taylor_against_numerical_expansion(alpha):
    v0 = (1 - alpha) / (2 * (1 + alpha))
    u = 0.25 - v0 * v0
    vt = v_taylor(u, N=3, sign=1 if v0 >= 0 else -1)
    a = mp.mpf(alpha)
    coeffs = mp.taylor(
        lambda m: mp.mpf(1) / 2 - mp.atanh(a * mp.sinh(m) / (1 + a * mp.cosh(m))) / m if m else (1 - a) / (2 * (1 + a)),
        mp.mpf(0),
        6,
    )
    assert vt.v[0] == pytest.approx(v0, abs=1e-15)
    for n in range(1, 4):
        assert vt.v[n] == pytest.approx(float(coeffs[2 * n]), rel=1e-9, abs=1e-15)
    assert v_function(1e-3, alpha) == pytest.approx(v0 + vt.v[1] * 1e-6, rel=1e-9)


def test_leading_term_at_zero_u():
    mu = 0.03
    g1 = gamma_constants()[0]
    assert g1 == pytest.approx(EULER_GAMMA + math.log(2), rel=1e-16)
    leading = delta_short_distance(0.0, mu)
    # the leading log argument is Lam = gamma1 - log(mu)
    assert math.exp(leading.mercator) == pytest.approx(g1 - math.log(mu), rel=1e-3)


@pytest.mark.parametrize("u", U_GRID)
@pytest.mark.parametrize("mu", [0.05, 0.1, 0.2])
def test_error_within_next_order_proxy(u, mu):
    sd = delta_short_distance(u, mu)
    exact = monopole_delta(geometry_from_mu(mu, u), tol=1e-17).value
    assert abs(sd.mercator - exact) <= sd.next_order
    assert abs(sd.log_form - sd.mercator) <= sd.next_order
    assert not sd.beyond_soft_bound


def test_soft_bound_flag():
    assert delta_short_distance(0.1, 0.8).beyond_soft_bound
    with pytest.raises(ValueError):
        delta_short_distance(0.1, 0.0)
    with pytest.raises(ValueError):
        epsilon_delta(0.3)


def test_v_coefficients_special_values():
    from spherecasimir.asymptotics import v0_from_u

    assert v_taylor(0.25, 4).v == (0.0,) * 5
    for u in (0.03, 0.2):
        vt = v_taylor(u, 2)
        assert vt.v[1] == pytest.approx(-vt.v0 / 3 * u, rel=1e-14)
        assert vt.v0 == v0_from_u(u)


def test_v_polynomial_fit_on_small_mu():
    u = 0.2
    v0 = 0.5 * math.sqrt(1 - 4 * u)
    alpha = (1 - 2 * v0) / (1 + 2 * v0)
    mus = np.linspace(1e-3, 1e-1, 40)
    vals = np.array([v_function(m, alpha) for m in mus])
    fit = np.polynomial.polynomial.polyfit(mus**2, vals, 3)
    vt = v_taylor(u, 2)
    assert fit[:3] == pytest.approx(vt.v, abs=1e-8)


def test_c_series_special_values():
    from spherecasimir.asymptotics import c_series

    # lower branch with v0 = +1/2 at u = 0 collapses to c = 1
    assert c_series(0.0, -1, 2) == pytest.approx([1.0, 0.0, 0.0], abs=1e-16)
    assert c_series(0.25, 1, 2) == [1.5, 0.0, 0.0]
    u = 0.2
    v0 = 0.5 * math.sqrt(1 - 4 * u)
    for s in (1, -1):
        assert c_series(u, s, 2)[2] == pytest.approx(-s * v0 / 60 * u * (1 - 12 * u), rel=1e-12)


@pytest.mark.parametrize("u", [0.05, 0.2])
@pytest.mark.parametrize("s", [1, -1])
def test_I_and_J_closed_forms(u, s):
    from spherecasimir.asymptotics import J_coefficients, c_series, psi_table, v0_from_u

    c = c_series(u, s, 2)
    v0 = v0_from_u(u)
    psi = psi_table(u)
    big_psi = psi.plus if s == 1 else psi.minus
    half = 0.5 + s * v0
    assert I_coefficients(c)[1, 0] == pytest.approx(1 / 72 - u / 12 + half / 6 - big_psi[1], rel=1e-13)
    j = J_coefficients(c)
    assert j[0] == pytest.approx(half, rel=1e-15)
    assert j[1] == pytest.approx((1 - 3 * u) / 6 * half, rel=1e-14)
    assert j[2] == pytest.approx((1 - 15 * u * (1 - 3 * u)) / 120 * half, rel=1e-13)


def test_lower_branch_at_zero_u_reduces_to_unit_shift():
    from spherecasimir.asymptotics import c_series

    lower = I_coefficients(c_series(0.0, -1, 2))
    assert lower == pytest.approx(I_coefficients([1.0, 0.0, 0.0]), abs=1e-15)


def test_gamma_constant_relations():
    g1, g2, g3, g4 = gamma_constants()
    assert g1 == pytest.approx(1.27036, abs=1e-5)
    assert g2 - g1 == pytest.approx(1 / 12, rel=1e-14)
    assert g4 == pytest.approx(5 * g2 - 3 * g1 - 107 / 240, rel=1e-15)


@pytest.mark.parametrize("u", [0.0, 0.1, 0.25])
def test_log_and_mercator_forms_agree_to_sixth_order(u):
    diffs = [abs(delta_short_distance(u, mu).log_form - delta_short_distance(u, mu).mercator) for mu in (0.1, 0.05)]
    assert 50 < diffs[0] / diffs[1] < 80
