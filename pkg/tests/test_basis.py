import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from riesz_jacobi import (
    CoeffVector,
    JacobiParams,
    fourier_coeffs,
    gauss_jacobi_rule,
    mu_density,
    mu_total,
    pi0_project,
    resolve_function,
    synthesize,
    trig_poly,
    trig_poly_deriv,
)
from riesz_jacobi.basis import jacobi_poly_table, norm_constants, trig_poly_all

from conftest import PAIRS

CHEB = JacobiParams(-0.5, -0.5)


def cheb_poly(n, theta):
    # P_n = sqrt(2/pi) cos(n theta) for n >= 1, 1/sqrt(pi) for n = 0
    if n == 0:
        return 1.0 / math.sqrt(math.pi)
    return math.sqrt(2.0 / math.pi) * math.cos(n * theta)


# --- measure -------------------------------------------------------------


def test_mu_density_pointwise():
    assert mu_density(CHEB, 0.3) == pytest.approx(1.0, abs=1e-15)
    assert mu_density(JacobiParams(0.5, 0.5), math.pi / 2) == pytest.approx(
        0.25, abs=1e-15)
    assert mu_density(JacobiParams(1.0, 0.0), math.pi / 2) == pytest.approx(
        0.25, abs=1e-15)


def test_mu_density_domain():
    with pytest.raises(ValueError):
        mu_density(CHEB, 0.0)
    with pytest.raises(ValueError):
        mu_density(CHEB, math.pi)


def test_mu_total_beta_values():
    assert mu_total(CHEB) == pytest.approx(math.pi, rel=1e-14)
    assert mu_total(JacobiParams(1.0, 0.0)) == pytest.approx(0.5, rel=1e-14)
    assert mu_total(JacobiParams(0.0, 0.0)) == pytest.approx(1.0, rel=1e-14)


def test_mu_total_matches_quadrature(pair):
    params = JacobiParams(*pair)
    rule = gauss_jacobi_rule(params, 50)
    assert float(np.sum(rule.weights)) == pytest.approx(mu_total(params),
                                                        rel=1e-12)


# --- quadrature ----------------------------------------------------------


def test_rule_single_node_mass():
    rule = gauss_jacobi_rule(JacobiParams(0.0, 0.0), 1)
    assert float(np.sum(rule.weights)) == pytest.approx(1.0, rel=1e-14)


def test_rule_cos_squared_cheb():
    rule = gauss_jacobi_rule(CHEB, 40)
    val = float(rule.weights @ np.cos(rule.nodes) ** 2)
    assert val == pytest.approx(math.pi / 2.0, abs=1e-12)


def test_rule_gram_identity():
    params = JacobiParams(1.0, 0.0)
    rule = gauss_jacobi_rule(params, 60)
    table = np.array([
        [trig_poly(params, n, th) for th in rule.nodes] for n in range(11)
    ])
    gram = (table * rule.weights) @ table.T
    assert np.max(np.abs(gram - np.eye(11))) < 1e-11


def test_rule_nodes_interior_weights_positive(pair):
    rule = gauss_jacobi_rule(JacobiParams(*pair), 80)
    assert np.all(rule.nodes > 0.0) and np.all(rule.nodes < math.pi)
    assert np.all(np.diff(rule.nodes) > 0.0)
    assert np.all(rule.weights > 0.0)


# --- basis polynomials ---------------------------------------------------


def test_trig_poly_constant_mode(pair):
    params = JacobiParams(*pair)
    want = 1.0 / math.sqrt(mu_total(params))
    for th in (0.3, 1.5, 2.9):
        assert trig_poly(params, 0, th) == pytest.approx(want, rel=1e-14)


def test_trig_poly_cheb_closed_form():
    assert trig_poly(CHEB, 2, math.pi / 3) == pytest.approx(
        -0.5 * math.sqrt(2.0 / math.pi), rel=1e-13)
    for n in range(1, 9):
        for th in np.linspace(0.2, 3.0, 7):
            assert trig_poly(CHEB, n, th) == pytest.approx(
                cheb_poly(n, th), abs=1e-13)


def test_trig_poly_unit_norm():
    params = JacobiParams(1.0, 0.0)
    rule = gauss_jacobi_rule(params, 60)
    vals = np.array([trig_poly(params, 3, th) for th in rule.nodes])
    assert float(rule.weights @ vals**2) == pytest.approx(1.0, abs=1e-11)


def test_trig_poly_all_consistent(pair):
    params = JacobiParams(*pair)
    vals = trig_poly_all(params, 12, 1.1)
    for n in (0, 3, 12):
        assert vals[n] == pytest.approx(trig_poly(params, n, 1.1), rel=1e-13)


def test_orthonormality_gram(pair):
    params = JacobiParams(*pair)
    rule = gauss_jacobi_rule(params, 200)
    table = jacobi_poly_table(params.alpha, params.beta,
                              np.cos(rule.nodes), 20)
    table = norm_constants(params, 20)[:, None] * table
    gram = (table * rule.weights) @ table.T
    assert np.max(np.abs(gram - np.eye(21))) < 1e-10


@given(
    alpha=st.floats(-0.95, 3.0),
    beta=st.floats(-0.95, 3.0),
)
def test_orthonormality_property(alpha, beta):
    params = JacobiParams(alpha, beta)
    rule = gauss_jacobi_rule(params, 100)
    table = jacobi_poly_table(alpha, beta, np.cos(rule.nodes), 12)
    table = norm_constants(params, 12)[:, None] * table
    gram = (table * rule.weights) @ table.T
    assert np.max(np.abs(gram - np.eye(13))) < 1e-9


# --- derivatives ---------------------------------------------------------


def test_deriv_order_zero_is_value(pair):
    params = JacobiParams(*pair)
    for n in (0, 1, 5):
        assert trig_poly_deriv(params, n, 0, 0.9) == pytest.approx(
            trig_poly(params, n, 0.9), rel=1e-14)


def test_deriv_cheb_closed_form():
    # d/dtheta sqrt(2/pi) cos(2 theta) at pi/4
    assert trig_poly_deriv(CHEB, 2, 1, math.pi / 4) == pytest.approx(
        -2.0 * math.sqrt(2.0 / math.pi), rel=1e-12)


def test_deriv_matches_finite_difference(pair):
    params = JacobiParams(*pair)
    h = 1e-4
    fd = (trig_poly(params, 4, 1.0 + h) - 2.0 * trig_poly(params, 4, 1.0)
          + trig_poly(params, 4, 1.0 - h)) / h**2
    got = trig_poly_deriv(params, 4, 2, 1.0)
    assert got == pytest.approx(fd, rel=1e-6)


def test_deriv_rule_lowers_parameters(pair):
    # d P_n^{a,b} = -(1/2) sqrt(n (n+a+b+1)) sin(theta) P_{n-1}^{a+1,b+1}
    params = JacobiParams(*pair)
    up = JacobiParams(params.alpha + 1.0, params.beta + 1.0)
    for n in (1, 2, 6):
        for th in (0.4, 1.3, 2.7):
            want = (-0.5
                    * math.sqrt(n * (n + params.alpha + params.beta + 1.0))
                    * math.sin(th) * trig_poly(up, n - 1, th))
            assert trig_poly_deriv(params, n, 1, th) == pytest.approx(
                want, abs=1e-12)


def test_deriv_rejects_negative_order():
    with pytest.raises(ValueError):
        trig_poly_deriv(CHEB, 2, -1, 1.0)


# --- analysis / synthesis -------------------------------------------------


def test_fourier_coeffs_unit_vector(pair):
    params = JacobiParams(*pair)
    coeffs = fourier_coeffs(lambda th: trig_poly(params, 3, th), params, 8)
    want = np.zeros(9)
    want[3] = 1.0
    assert np.max(np.abs(coeffs.a - want)) < 1e-12


def test_fourier_coeffs_cheb_cosine():
    coeffs = fourier_coeffs(np.cos, CHEB, 6)
    assert coeffs.a[1] == pytest.approx(math.sqrt(math.pi / 2.0), rel=1e-13)
    rest = np.delete(coeffs.a, 1)
    assert np.max(np.abs(rest)) < 1e-13


def test_fourier_coeffs_tail_warning():
    # step function: coefficients decay too slowly for n_max = 8
    with pytest.warns(UserWarning, match="tail"):
        fourier_coeffs(lambda th: np.where(th < 1.5, 1.0, 0.0), CHEB, 8,
                       tail_tol=1e-12)


def test_bump_roundtrip():
    # the bump's coefficients decay like exp(-c sqrt(n)); at n_max=64 the
    # pointwise error sits at the 1e-4..1e-5 scale, by n_max=300 below 1e-6
    f = resolve_function("bump(1,2)", CHEB)
    for ab in [(-0.5, -0.5), (1.0, 0.0), (0.5, -0.3)]:
        params = JacobiParams(*ab)
        c64 = fourier_coeffs(f, params, 64, tail_tol=1.0)
        assert abs(synthesize(c64, 1.5) - f(1.5)) < 2e-4
        c300 = fourier_coeffs(f, params, 300, tail_tol=1.0)
        assert abs(synthesize(c300, 1.5) - f(1.5)) < 1e-6


def test_bump_coefficient_decay():
    # the coefficients oscillate under an exp(-c sqrt(n)) envelope with
    # c ~ 0.8, so |a_n| (n+1)^8 turns over near n ~ 420 and the decay
    # beats (n+1)^{-8} beyond it; block maxima tame the oscillation
    f = resolve_function("bump(1,2)", CHEB)
    coeffs = fourier_coeffs(f, CHEB, 800, tail_tol=1.0)
    n = np.arange(801)
    weighted = np.abs(coeffs.a) * (n + 1.0) ** 8
    k = int(np.argmax(weighted))
    assert 30 < k < 550
    blocks = [np.abs(coeffs.a[lo:hi]).max()
              for lo, hi in [(300, 420), (420, 550), (550, 680), (680, 801)]]
    for prev, cur in zip(blocks, blocks[1:]):
        assert cur < 0.2 * prev
    assert weighted[680:].max() < weighted[k]
    assert abs(coeffs.a[800]) < 1e-10


def test_synthesize_unit_vector(pair):
    params = JacobiParams(*pair)
    a = np.zeros(7)
    a[4] = 1.0
    coeffs = CoeffVector(params=params, n_max=6, a=a)
    assert synthesize(coeffs, 1.2) == pytest.approx(
        trig_poly(params, 4, 1.2), rel=1e-13)


def test_pi0_project_idempotent():
    a = np.arange(1.0, 6.0)
    coeffs = CoeffVector(params=CHEB, n_max=4, a=a)
    once = pi0_project(coeffs)
    twice = pi0_project(once)
    assert once.a[0] == 0.0
    assert np.array_equal(once.a, twice.a)
    assert np.array_equal(once.a[1:], a[1:])


def test_pi0_kills_constants_cheb():
    coeffs = fourier_coeffs(lambda th: np.ones_like(th), CHEB, 6)
    proj = pi0_project(coeffs)
    assert abs(synthesize(proj, 1.0)) < 1e-13


def test_coeff_vector_shape_checked():
    with pytest.raises(ValueError):
        CoeffVector(params=CHEB, n_max=3, a=np.zeros(5))


# --- function registry ----------------------------------------------------


def test_registry_bump_support():
    f = resolve_function("bump(1,2)", CHEB)
    assert f(0.5) == 0.0 and f(2.5) == 0.0
    assert f(1.5) == pytest.approx(math.exp(-1.0), rel=1e-14)


def test_registry_cosk_poly():
    assert resolve_function("cosk(2)", CHEB)(0.7) == pytest.approx(
        math.cos(1.4), rel=1e-14)
    g = resolve_function("poly(3)", CHEB)
    assert g(0.7) == pytest.approx(trig_poly(CHEB, 3, 0.7), rel=1e-14)


@pytest.mark.parametrize("name", ["bump(2,1)", "gauss(1)", "bump(1)", "poly"])
def test_registry_rejects_bad_names(name):
    with pytest.raises(ValueError):
        resolve_function(name, CHEB)


def test_params_validation():
    with pytest.raises(ValueError):
        JacobiParams(-1.0, 0.0)
    with pytest.raises(ValueError):
        JacobiParams(0.0, -1.5)
