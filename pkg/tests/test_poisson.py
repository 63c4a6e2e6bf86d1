import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from riesz_jacobi import (
    JacobiParams,
    NumericalError,
    TruncationError,
    envelope_bound,
    gauss_jacobi_rule,
    poisson_deriv_theta,
    poisson_kernel,
    poisson_kernel_compensated,
)
from riesz_jacobi.config import SeriesTruncation
from riesz_jacobi.poisson import (
    QPoint,
    dq_dtheta,
    gegenbauer_rule,
    product_deriv_theta,
    q_function,
)

CHEB = JacobiParams(-0.5, -0.5)
PRODUCT_PAIRS = [(-0.5, -0.5), (1.0, 0.0), (0.0, 0.5)]


def disc_poisson(r, x):
    return (1.0 - r * r) / (1.0 - 2.0 * r * math.cos(x) + r * r)


def cheb_kernel(t, theta, phi):
    # H_t = (1/2pi)[P_r(theta-phi) + P_r(theta+phi)], r = e^{-t}
    r = math.exp(-t)
    return (disc_poisson(r, theta - phi) + disc_poisson(r, theta + phi)) / (
        2.0 * math.pi)


def cheb_kernel_dtheta(t, theta, phi):
    r = math.exp(-t)

    def dp(x):
        den = 1.0 - 2.0 * r * math.cos(x) + r * r
        return -(1.0 - r * r) * 2.0 * r * math.sin(x) / den**2

    return (dp(theta - phi) + dp(theta + phi)) / (2.0 * math.pi)


# --- q machinery ----------------------------------------------------------


@given(
    th=st.floats(0.05, math.pi - 0.05),
    ph=st.floats(0.05, math.pi - 0.05),
    u=st.floats(-1.0, 1.0),
    v=st.floats(-1.0, 1.0),
)
def test_q_range_and_diagonal(th, ph, u, v):
    q = float(q_function(u, v, th, ph))
    assert -1e-12 <= q <= 2.0 + 1e-12
    q11 = float(q_function(1.0, 1.0, th, ph))
    assert q11 == pytest.approx(2.0 * math.sin((th - ph) / 4.0) ** 2,
                                abs=1e-12)


def test_dq_antisymmetric_at_corner():
    # q(.,.,1,1) depends on theta - phi only
    for th, ph in [(0.7, 2.0), (1.2, 1.3)]:
        assert float(dq_dtheta(1.0, 1.0, th, ph)) == pytest.approx(
            -float(dq_dtheta(1.0, 1.0, ph, th)), rel=1e-13)


def test_qpoint_validates():
    with pytest.raises(ValueError):
        QPoint(theta=1.0, phi=2.0, u=1.5, v=0.0)


def test_gegenbauer_rule_atoms_and_mass():
    u, w = gegenbauer_rule(-0.5, 8)
    assert np.allclose(u, [-1.0, 1.0]) and np.allclose(w, [0.5, 0.5])
    u, w = gegenbauer_rule(1.0, 32)
    assert float(np.sum(w)) == pytest.approx(1.0, rel=1e-13)
    assert float(w @ u) == pytest.approx(0.0, abs=1e-14)


# --- kernel values ----------------------------------------------------------


def test_mass_identity():
    params = JacobiParams(1.0, 0.0)
    rule = gauss_jacobi_rule(params, 300)
    row = np.array([poisson_kernel(params, 1.0, 1.3, ph)
                    for ph in rule.nodes])
    assert float(rule.weights @ row) == pytest.approx(math.exp(-1.0),
                                                      abs=1e-8)


def test_cheb_closed_form():
    assert poisson_kernel(CHEB, 0.5, 1.0, 2.0) == pytest.approx(
        cheb_kernel(0.5, 1.0, 2.0), abs=1e-10)
    for t in (0.1, 1.0, 3.0):
        for th, ph in [(0.4, 2.8), (1.5, 1.6)]:
            assert poisson_kernel(CHEB, t, th, ph) == pytest.approx(
                cheb_kernel(t, th, ph), abs=1e-10)


def test_symmetry_and_positivity():
    params = JacobiParams(1.0, 0.0)
    grid = np.linspace(0.15, math.pi - 0.15, 20)
    for th in grid[::4]:
        for ph in grid:
            a = poisson_kernel(params, 0.7, th, ph)
            b = poisson_kernel(params, 0.7, ph, th)
            assert a == pytest.approx(b, rel=1e-11, abs=1e-13)
            assert a > 0.0


def test_series_product_agree(pair):
    alpha, beta = pair
    if alpha < -0.5 or beta < -0.5:
        pytest.skip("product form needs alpha, beta >= -1/2")
    params = JacobiParams(alpha, beta)
    for t in (0.3, 1.0):
        for th, ph in [(0.9, 1.8), (2.5, 0.4)]:
            s = poisson_kernel(params, t, th, ph, mode="series")
            p = poisson_kernel(params, t, th, ph, mode="product")
            assert s == pytest.approx(p, abs=1e-8)


def test_product_mode_rejected_outside_range():
    with pytest.raises((ValueError, NumericalError)):
        poisson_kernel(JacobiParams(-0.7, 2.0), 0.5, 1.0, 2.0,
                       mode="product")


def test_auto_mode_small_t_matches_product():
    params = JacobiParams(0.0, 0.0)
    got = poisson_kernel(params, 1e-3, 0.9, 2.1, mode="auto")
    want = poisson_kernel(params, 1e-3, 0.9, 2.1, mode="product")
    assert got == want


def test_series_cap_is_explicit_error():
    with pytest.raises(TruncationError):
        poisson_kernel(JacobiParams(9.0, 9.0), 1e-6, 1.0, 1.0,
                       mode="series",
                       trunc=SeriesTruncation(t_min=1e-9, n_cap=20000))


def test_kernel_domain_errors():
    with pytest.raises(ValueError):
        poisson_kernel(CHEB, 0.0, 1.0, 2.0)
    with pytest.raises(ValueError):
        poisson_kernel(CHEB, 1.0, -0.1, 2.0)
    with pytest.raises(ValueError):
        poisson_kernel(CHEB, 1.0, 1.0, 2.0, mode="exact")


# --- compensated kernel -----------------------------------------------------


def test_compensated_cheb_shift():
    got = poisson_kernel_compensated(CHEB, 0.8, 1.1, 2.3)
    want = poisson_kernel(CHEB, 0.8, 1.1, 2.3) - 1.0 / math.pi
    assert got == pytest.approx(want, abs=1e-12)


def test_compensated_zero_row_mean(pair):
    params = JacobiParams(*pair)
    rule = gauss_jacobi_rule(params, 300)
    row = np.array([poisson_kernel_compensated(params, 0.6, 1.4, ph)
                    for ph in rule.nodes])
    assert abs(float(rule.weights @ row)) < 1e-9


def test_compensated_large_t_decay_cheb():
    h5 = poisson_kernel_compensated(CHEB, 5.0, 1.0, 2.0)
    h10 = poisson_kernel_compensated(CHEB, 10.0, 1.0, 2.0)
    assert abs(h10 / h5) == pytest.approx(math.exp(-5.0), rel=0.1)


# --- theta derivatives -------------------------------------------------------


def test_deriv_order_zero_reduces():
    params = JacobiParams(0.5, -0.3)
    assert poisson_deriv_theta(params, 0, 0.7, 1.0, 2.0) == pytest.approx(
        poisson_kernel(params, 0.7, 1.0, 2.0, mode="series"), rel=1e-13)


def test_deriv_zero_mean():
    params = JacobiParams(0.5, -0.3)
    rule = gauss_jacobi_rule(params, 300)
    row = np.array([poisson_deriv_theta(params, 1, 0.5, 1.2, ph)
                    for ph in rule.nodes])
    assert abs(float(rule.weights @ row)) < 1e-8


def test_deriv_cheb_closed_form():
    for t, th, ph in [(0.5, 1.0, 2.0), (1.2, 2.6, 0.7)]:
        assert poisson_deriv_theta(CHEB, 1, t, th, ph) == pytest.approx(
            cheb_kernel_dtheta(t, th, ph), abs=1e-9)


def test_product_deriv_matches_series():
    params = JacobiParams(0.0, 0.0)
    got = product_deriv_theta(params, 0.3, 1.0, 1.4)
    want = poisson_deriv_theta(params, 1, 0.3, 1.0, 1.4)
    assert got == pytest.approx(want, abs=1e-8)


def test_product_deriv_cheb_atom_sum():
    # dPi_{-1/2} = atoms at +-1 with weight 1/2: the double integral is a
    # 4-term sum, which must land on the closed-form derivative
    got = product_deriv_theta(CHEB, 0.4, 1.1, 1.9)
    assert got == pytest.approx(cheb_kernel_dtheta(0.4, 1.1, 1.9), abs=1e-9)


def test_deriv_rejects_negative_order():
    with pytest.raises(ValueError):
        poisson_deriv_theta(CHEB, -1, 0.5, 1.0, 2.0)


# --- envelope ----------------------------------------------------------------


def test_envelope_cheb_reduces_to_singular_factor():
    # zero exponents kill the first two factors
    t, th, ph = 0.3, 1.0, 1.7
    assert envelope_bound(CHEB, 0, t, th, ph) == pytest.approx(
        t / (t * t + (th - ph) ** 2), rel=1e-14)


def test_envelope_direct_substitution():
    # (0,0), j=2, theta=phi=pi/2: the two endpoint factors multiply to
    # (t^2+pi^2/2)^{-1} (exponent -(alpha+1/2) = -1/2 each), times
    # t/(t^2)^2
    val = envelope_bound(JacobiParams(0.0, 0.0), 2, 0.1, math.pi / 2,
                         math.pi / 2)
    want = 1000.0 / (0.01 + math.pi**2 / 2.0)
    assert val == pytest.approx(want, rel=1e-13)


def test_envelope_domain():
    with pytest.raises(ValueError):
        envelope_bound(CHEB, 0, 1.5, 1.0, 2.0)
    with pytest.raises(ValueError):
        envelope_bound(CHEB, -1, 0.5, 1.0, 2.0)
    with pytest.raises(ValueError):
        envelope_bound(CHEB, 0, 0.5, 0.0, 2.0)


def test_envelope_dominates_kernel_spot():
    # not the full sweep (verify handles that); one interior spot check
    params = JacobiParams(0.5, -0.3)
    for t in (0.05, 0.4):
        k = abs(poisson_deriv_theta(params, 1, t, 1.1, 1.3))
        env = envelope_bound(params, 1, t, 1.1, 1.3)
        assert k < 60.0 * env


# --- semigroup ----------------------------------------------------------------


def test_semigroup_composition():
    params = JacobiParams(0.5, -0.3)
    rule = gauss_jacobi_rule(params, 250)
    th, ph = 1.0, 2.2
    r1 = np.array([poisson_kernel(params, 0.25, th, x) for x in rule.nodes])
    r2 = np.array([poisson_kernel(params, 0.5, x, ph) for x in rule.nodes])
    got = float(rule.weights @ (r1 * r2))
    assert got == pytest.approx(poisson_kernel(params, 0.75, th, ph),
                                abs=1e-7)
