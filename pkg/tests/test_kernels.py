import math

import numpy as np
import pytest
from scipy.integrate import quad

from riesz_jacobi import (
    JacobiParams,
    dtheta_potential_kernel,
    mu_density,
    potential_kernel,
    riesz_kernel,
    riesz_kernel_interlaced,
)
from riesz_jacobi.basis import trig_poly_all
from riesz_jacobi.config import EvalConfig, TSplitConfig

CHEB = JacobiParams(-0.5, -0.5)


def cheb_r1(theta, phi):
    return -(1.0 / (2.0 * math.pi)) * (
        1.0 / math.tan((theta - phi) / 2.0)
        + 1.0 / math.tan((theta + phi) / 2.0)
    )


# --- potential kernel --------------------------------------------------------


def test_potential_row_integral_is_tau_power():
    # int K_sigma(theta,.) dmu = |tau|^{-2 sigma}; (1,0) has tau = 1
    params = JacobiParams(1.0, 0.0)

    def f(ph):
        return potential_kernel(params, 1.0, 1.0, ph) * mu_density(params, ph)

    got = quad(f, 0.0, 1.0, limit=200)[0] + quad(f, 1.0, math.pi,
                                                 limit=200)[0]
    assert got == pytest.approx(1.0, abs=1e-7)


def test_potential_symmetry():
    params = JacobiParams(0.5, -0.3)
    for th, ph in [(0.8, 2.1), (1.4, 1.6), (2.9, 0.3)]:
        assert potential_kernel(params, 0.75, th, ph) == pytest.approx(
            potential_kernel(params, 0.75, ph, th), rel=1e-9)


def test_potential_compensated_cheb_series():
    # K~_1(theta,phi) = sum_{n>=1} n^{-2} (2/pi) cos(n theta) cos(n phi)
    n = np.arange(1, 10_001, dtype=float)
    oracle = float(np.sum(np.cos(n) * np.cos(2.0 * n) / n**2)) * 2.0 / math.pi
    got = potential_kernel(CHEB, 1.0, 1.0, 2.0, compensated=True)
    assert got == pytest.approx(oracle, abs=1e-6)


def test_potential_rejects_bad_sigma():
    with pytest.raises(ValueError):
        potential_kernel(CHEB, 0.0, 1.0, 2.0)


def test_quadrature_node_doubling_stable():
    # invariant: values reproduced within 1e-8 under near/far node doubling
    dense = EvalConfig(tsplit=TSplitConfig(near_nodes=128, far_nodes=128))
    cases = [
        (JacobiParams(0.5, -0.3), 1.0, 1.2, 2.0),
        (JacobiParams(-0.6, -0.8), 0.75, 2.4, 0.9),
    ]
    for params, sg, th, ph in cases:
        a = potential_kernel(params, sg, th, ph)
        b = potential_kernel(params, sg, th, ph, config=dense)
        assert a == pytest.approx(b, abs=1e-8)
    a = riesz_kernel(JacobiParams(1.0, 0.0), 2, 1.0, 2.0)
    b = riesz_kernel(JacobiParams(1.0, 0.0), 2, 1.0, 2.0, config=dense)
    assert a == pytest.approx(b, abs=1e-8)


# --- derivative kernels --------------------------------------------------------


def test_dtheta_order_zero_reduces():
    params = JacobiParams(0.5, -0.3)
    assert dtheta_potential_kernel(params, 0, 0.8, 1.1, 2.2) == pytest.approx(
        potential_kernel(params, 0.8, 1.1, 2.2), rel=1e-12)


def test_dtheta_half_power_is_first_riesz():
    # tau = 0, so only the compensated kernel exists; R_1 is built on it
    for th, ph in [(1.0, 2.0), (2.2, 0.5)]:
        assert dtheta_potential_kernel(
            CHEB, 1, 0.5, th, ph, compensated=True
        ) == pytest.approx(riesz_kernel(CHEB, 1, th, ph), rel=1e-12)
    with pytest.raises(ValueError, match="tau"):
        dtheta_potential_kernel(CHEB, 1, 0.5, 1.0, 2.0)


def test_dtheta_near_diagonal_converges():
    params = JacobiParams(0.0, 0.0)
    dense = EvalConfig(tsplit=TSplitConfig(near_nodes=128, far_nodes=128))
    a = dtheta_potential_kernel(params, 1, 1.5, 1.0, 1.01)
    b = dtheta_potential_kernel(params, 1, 1.5, 1.0, 1.01, config=dense)
    assert math.isfinite(a)
    assert a == pytest.approx(b, abs=1e-8)


# --- Riesz kernels --------------------------------------------------------------


def test_riesz1_cheb_closed_form():
    assert riesz_kernel(CHEB, 1, 1.0, 2.0) == pytest.approx(
        cheb_r1(1.0, 2.0), abs=1e-7)
    for th, ph in [(0.5, 2.5), (2.0, 0.8)]:
        assert riesz_kernel(CHEB, 1, th, ph) == pytest.approx(
            cheb_r1(th, ph), abs=1e-7)


def test_riesz2_cheb_constant():
    for th, ph in [(1.0, 2.0), (0.4, 2.9), (1.5, 1.6), (2.4, 0.3),
                   (0.9, 1.1)]:
        assert riesz_kernel(CHEB, 2, th, ph) == pytest.approx(
            1.0 / math.pi, abs=1e-7)


def test_riesz1_singularity_strength_cheb():
    # |R_1| * |theta-phi| -> 1/pi toward the diagonal; the regular
    # cot((theta+phi)/2) term leaves an O(d) relative remainder
    for k in (6, 8, 10):
        d = 2.0**-k
        val = abs(riesz_kernel(CHEB, 1, 1.0, 1.0 + d)) * d
        assert val == pytest.approx(1.0 / math.pi, rel=d)


def test_riesz2_bounded_near_diagonal():
    # no blow-up along a dyadic approach; the values settle near 0.63
    params = JacobiParams(0.5, -0.3)
    vals = [riesz_kernel(params, 2, math.pi / 2, math.pi / 2 + 2.0**-k)
            for k in range(3, 13)]
    assert max(abs(v) for v in vals) < 1.0
    assert abs(vals[-1] - vals[-2]) < 1e-3
    assert abs(vals[-2] - vals[-3]) < 2e-3


def test_riesz_rejects_bad_order():
    with pytest.raises(ValueError):
        riesz_kernel(CHEB, 0, 1.0, 2.0)


# --- interlaced variant ----------------------------------------------------------


def test_interlaced_first_order_identical(pair):
    params = JacobiParams(*pair)
    assert riesz_kernel_interlaced(params, 1, 1.0, 2.2) == pytest.approx(
        riesz_kernel(params, 1, 1.0, 2.2), abs=1e-12)


def test_interlaced_tau_zero_even_is_projection_kernel():
    # tau = 0: R_{2m} = I - Pi_0 on the complement, so the off-diagonal
    # kernel is -P_0(theta)P_0(phi) = -1/pi, independent of m
    for N in (2, 4):
        for th, ph in [(1.0, 2.0), (0.7, 2.6)]:
            assert riesz_kernel_interlaced(CHEB, N, th, ph) == pytest.approx(
                -1.0 / math.pi, abs=1e-8)


def test_interlaced_tau_zero_odd_is_first_riesz():
    assert riesz_kernel_interlaced(CHEB, 3, 1.0, 2.0) == pytest.approx(
        riesz_kernel(CHEB, 1, 1.0, 2.0), abs=1e-8)


def test_interlaced_even_matches_spectral_series():
    # direct spectral kernel: Abel part -P_0^2 plus the absolutely
    # convergent -tau^2 sum_{n>=1} (n+tau)^{-2} P_n(theta) P_n(phi)
    params = JacobiParams(1.0, 0.0)
    got = riesz_kernel_interlaced(params, 2, 1.0, 2.0)
    errs = []
    for m in (1_000, 50_000):
        p1 = trig_poly_all(params, m, 1.0)
        p2 = trig_poly_all(params, m, 2.0)
        n = np.arange(1, m + 1, dtype=float)
        oracle = -2.0 - float(np.sum(p1[1:] * p2[1:] / (n + 1.0) ** 2))
        errs.append(abs(got - oracle))
    assert errs[1] < errs[0]
    assert errs[1] < 1e-8
