"""Jacobi trigonometric polynomials, the measure dmu_{a,b}, Gauss-Jacobi
quadrature, and Fourier-Jacobi analysis/synthesis on (0, pi).

The working objects are the L2(dmu)-normalized polynomials

    P_n(theta) = c_n * P_n^{alpha,beta}(cos theta),

where P_n^{alpha,beta} is the classical Jacobi polynomial evaluated by its
three-term recurrence and c_n is fixed by the classical squared norm h_n
(with the x = cos theta change of variable absorbed), so that the family is
orthonormal with respect to

    dmu(theta) = (sin(theta/2))^(2 alpha + 1) (cos(theta/2))^(2 beta + 1) dtheta.
"""

from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import betaln, gammaln

from . import _accel

TAU_ZERO_EPS = 1e-14


@dataclass(frozen=True)
class JacobiParams:
    """Parameter pair (alpha, beta) with the derived offset tau."""

    alpha: float
    beta: float
    tau: float = field(init=False)
    tau_is_zero: bool = field(init=False)

    def __post_init__(self):
        a, b = float(self.alpha), float(self.beta)
        if not (a > -1.0 and b > -1.0):
            raise ValueError(f"require alpha, beta > -1, got ({a}, {b})")
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ValueError("alpha, beta must be finite")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)
        object.__setattr__(self, "tau", 0.5 * (a + b + 1.0))
        object.__setattr__(self, "tau_is_zero", abs(a + b + 1.0) < TAU_ZERO_EPS)

    @property
    def lam(self) -> float:
        """alpha + beta + 1, the shift in the eigenvalue product n(n+lam)."""
        return self.alpha + self.beta + 1.0

    def key(self) -> tuple:
        return (self.alpha, self.beta)


def mu_density(params: JacobiParams, theta) -> np.ndarray | float:
    """Density of dmu at theta in (0, pi)."""
    th = np.asarray(theta, dtype=float)
    if np.any(th <= 0.0) or np.any(th >= math.pi):
        raise ValueError("theta must lie strictly inside (0, pi)")
    val = np.sin(th / 2.0) ** (2.0 * params.alpha + 1.0) * np.cos(th / 2.0) ** (
        2.0 * params.beta + 1.0
    )
    return float(val) if np.isscalar(theta) else val


def mu_total(params: JacobiParams) -> float:
    """Total mass of dmu on (0, pi), the Beta function B(alpha+1, beta+1)."""
    return math.exp(betaln(params.alpha + 1.0, params.beta + 1.0))


# --- normalization -------------------------------------------------------

def _log_h(alpha: float, beta: float, n: np.ndarray) -> np.ndarray:
    """log of the classical squared L2 norm of P_n^{alpha,beta} on (-1,1).

    The generic formula has a removable 0/0 shape at n=0 when
    alpha+beta+1 <= 0, so n=0 gets the Beta-function form.
    """
    n = np.asarray(n, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        generic = (
            (alpha + beta + 1.0) * math.log(2.0)
            - np.log(2.0 * n + alpha + beta + 1.0)
            + gammaln(n + alpha + 1.0)
            + gammaln(n + beta + 1.0)
            - gammaln(n + alpha + beta + 1.0)
            - gammaln(n + 1.0)
        )
    zero = (alpha + beta + 1.0) * math.log(2.0) + betaln(alpha + 1.0, beta + 1.0)
    return np.where(n == 0, zero, generic)


def norm_constants(params: JacobiParams, n_max: int) -> np.ndarray:
    """c_n for n = 0..n_max: c_n = 2^((alpha+beta+1)/2) / sqrt(h_n)."""
    if n_max >= 200_000:
        # kernel rows near the spectral floor ask for tens of millions of
        # constants repeatedly; the gammaln pass dominates without this
        return _norm_constants_big(params.alpha, params.beta, n_max)
    return _norm_constants_raw(params.alpha, params.beta, n_max)


def _norm_constants_raw(alpha: float, beta: float, n_max: int) -> np.ndarray:
    n = np.arange(n_max + 1, dtype=float)
    return np.exp(
        0.5 * ((alpha + beta + 1.0) * math.log(2.0) - _log_h(alpha, beta, n))
    )


@lru_cache(maxsize=4)
def _norm_constants_big(alpha: float, beta: float, n_max: int) -> np.ndarray:
    arr = _norm_constants_raw(alpha, beta, n_max)
    arr.flags.writeable = False
    return arr


# --- evaluation ----------------------------------------------------------

def jacobi_poly_table(alpha: float, beta: float, x: np.ndarray, n_max: int) -> np.ndarray:
    """Table P_n^{alpha,beta}(x[j]), shape (n_max+1, len(x)). Vectorized in x."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty((n_max + 1, x.size))
    out[0] = 1.0
    if n_max >= 1:
        out[1] = 0.5 * (alpha - beta) + (0.5 * (alpha + beta) + 1.0) * x
    for n in range(2, n_max + 1):
        c1 = 2.0 * n * (n + alpha + beta) * (2.0 * n + alpha + beta - 2.0)
        c2 = (2.0 * n + alpha + beta - 1.0) * (alpha * alpha - beta * beta)
        c3 = (2.0 * n + alpha + beta - 1.0) * (2.0 * n + alpha + beta) * (
            2.0 * n + alpha + beta - 2.0
        )
        c4 = 2.0 * (n + alpha - 1.0) * (n + beta - 1.0) * (2.0 * n + alpha + beta)
        out[n] = ((c2 + c3 * x) * out[n - 1] - c4 * out[n - 2]) / c1
    return out


def _check_theta(theta) -> np.ndarray:
    th = np.atleast_1d(np.asarray(theta, dtype=float))
    if np.any(th <= 0.0) or np.any(th >= math.pi):
        raise ValueError("theta must lie strictly inside (0, pi)")
    return th


def trig_poly(params: JacobiParams, n: int, theta):
    """Normalized P_n(theta) = c_n P_n^{alpha,beta}(cos theta)."""
    if n < 0:
        raise ValueError("degree must be >= 0")
    th = _check_theta(theta)
    tab = jacobi_poly_table(params.alpha, params.beta, np.cos(th), n)
    c = norm_constants(params, n)[n]
    val = c * tab[n]
    return float(val[0]) if np.isscalar(theta) else val


def trig_poly_all(params: JacobiParams, n_max: int, theta: float) -> np.ndarray:
    """Vector P_0(theta)..P_nmax(theta) at a single angle."""
    th = float(theta)
    if not (0.0 < th < math.pi):
        raise ValueError("theta must lie strictly inside (0, pi)")
    vals = _accel.jacobi_values(params.alpha, params.beta, math.cos(th), n_max)
    return norm_constants(params, n_max) * vals


@lru_cache(maxsize=64)
def _chain_terms(j: int) -> tuple:
    """Expansion of d^j/dtheta^j f(cos theta) into terms
    coef * sin^p(theta) * cos^q(theta) * f^(k)(cos theta).

    One differentiation maps (p, q, k) to (p-1, q+1, k) * p, to
    (p+1, q-1, k) * (-q), and to (p+1, q, k+1) * (-1).
    """
    terms = {(0, 0, 0): 1.0}
    for _ in range(j):
        new: dict = {}
        for (p, q, k), c in terms.items():
            if p:
                key = (p - 1, q + 1, k)
                new[key] = new.get(key, 0.0) + c * p
            if q:
                key = (p + 1, q - 1, k)
                new[key] = new.get(key, 0.0) - c * q
            key = (p + 1, q, k + 1)
            new[key] = new.get(key, 0.0) - c
        terms = new
    return tuple(sorted(terms.items()))


def trig_poly_deriv_all(params: JacobiParams, n_max: int, j: int, theta: float) -> np.ndarray:
    """Vector of j-th theta-derivatives of P_0..P_nmax at a single angle.

    Uses the exact parameter-shift rule for x-derivatives of Jacobi
    polynomials composed with the chain rule for x = cos theta; no
    numerical differentiation.
    """
    if j < 0:
        raise ValueError("derivative order must be >= 0")
    th = float(theta)
    if not (0.0 < th < math.pi):
        raise ValueError("theta must lie strictly inside (0, pi)")
    if j == 0:
        return trig_poly_all(params, n_max, th)
    a, b = params.alpha, params.beta
    lam = params.lam
    x, s = math.cos(th), math.sin(th)
    shifted = [
        _accel.jacobi_values(a + k, b + k, x, n_max) for k in range(j + 1)
    ]
    n = np.arange(n_max + 1, dtype=float)
    out = np.zeros(n_max + 1)
    for (p, q, k), coef in _chain_terms(j):
        rise = np.ones(n_max + 1)
        for i in range(k):
            rise *= n + lam + i
        vals = np.zeros(n_max + 1)
        if k <= n_max:
            # d^k/dx^k P_n = 2^-k (n+lam)...(n+lam+k-1) P_{n-k}^{a+k,b+k}
            vals[k:] = shifted[k][: n_max + 1 - k]
        out += coef * (s ** p) * (x ** q) * (2.0 ** -k) * rise * vals
    return norm_constants(params, n_max) * out


def trig_poly_deriv(params: JacobiParams, n: int, j: int, theta):
    """j-th theta-derivative of the normalized P_n at theta."""
    th = _check_theta(theta)
    vals = np.array([trig_poly_deriv_all(params, n, j, t)[n] for t in th])
    return float(vals[0]) if np.isscalar(theta) else vals


# --- quadrature ----------------------------------------------------------

@dataclass(frozen=True)
class QuadratureRule:
    """Nodes/weights on (0, pi) integrating f(theta) against dmu exactly
    for f = (polynomial of degree <= 2*order-1 in cos theta)."""

    params: JacobiParams
    order: int
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, f) -> float:
        vals = f(self.nodes) if callable(f) else np.asarray(f, dtype=float)
        return float(np.dot(self.weights, vals))


class NumericalRuleError(RuntimeError):
    pass


def jacobi_gauss_xw(a: float, b: float, order: int) -> tuple:
    """Golub-Welsch nodes/weights on (-1, 1) for the weight (1-x)^a (1+x)^b.

    Nodes ascending; weights sum to 2^(a+b+1) B(a+1, b+1)."""
    if order < 1:
        raise ValueError("order must be >= 1")
    k = np.arange(order, dtype=float)
    diag = np.empty(order)
    diag[0] = (b - a) / (a + b + 2.0)
    if order > 1:
        kk = k[1:]
        diag[1:] = (b * b - a * a) / (
            (2.0 * kk + a + b) * (2.0 * kk + a + b + 2.0)
        )
    off = np.empty(max(order - 1, 0))
    if order > 1:
        off[0] = math.sqrt(
            4.0 * (a + 1.0) * (b + 1.0) / ((a + b + 2.0) ** 2 * (a + b + 3.0))
        )
        kk = k[2:]
        off[1:] = np.sqrt(
            4.0 * kk * (kk + a) * (kk + b) * (kk + a + b)
            / ((2.0 * kk + a + b) ** 2 * (2.0 * kk + a + b + 1.0) * (2.0 * kk + a + b - 1.0))
        )
    try:
        xs, vecs = eigh_tridiagonal(diag, off)
    except Exception as exc:  # construction error contract
        raise NumericalRuleError(f"tridiagonal eigensolve failed: {exc}") from exc
    mu0 = 2.0 ** (a + b + 1.0) * math.exp(betaln(a + 1.0, b + 1.0))
    return xs, mu0 * vecs[0, :] ** 2


def gauss_jacobi_rule(params: JacobiParams, order: int) -> QuadratureRule:
    """Golub-Welsch rule for the weight (1-x)^alpha (1+x)^beta mapped onto
    (0, pi) by x = cos theta with the Jacobian absorbed into the weights."""
    a, b = params.alpha, params.beta
    xs, wx = jacobi_gauss_xw(a, b, order)
    # theta = arccos(x) reverses the ordering; Jacobian factor 2^-(a+b+1)
    nodes = np.arccos(xs)[::-1].copy()
    weights = (2.0 ** -(a + b + 1.0)) * wx[::-1].copy()
    return QuadratureRule(params=params, order=order, nodes=nodes, weights=weights)


# --- Fourier-Jacobi analysis / synthesis ---------------------------------

@dataclass(frozen=True)
class CoeffVector:
    params: JacobiParams
    n_max: int
    a: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.a, dtype=float)
        if arr.shape != (self.n_max + 1,):
            raise ValueError("coefficient array must have length n_max+1")
        object.__setattr__(self, "a", arr)


def fourier_coeffs(
    f,
    params: JacobiParams,
    n_max: int,
    rule: QuadratureRule | None = None,
    tail_tol: float = 1e-10,
) -> CoeffVector:
    """a_n = <f, P_n>_dmu by quadrature. Warns when the last retained
    coefficient is above tail_tol, since truncation is then unsafe."""
    if rule is None:
        rule = gauss_jacobi_rule(params, max(200, 2 * n_max + 20))
    fv = f(rule.nodes) if callable(f) else np.asarray(f, dtype=float)
    table = jacobi_poly_table(params.alpha, params.beta, np.cos(rule.nodes), n_max)
    coeffs = table @ (rule.weights * fv)
    coeffs *= norm_constants(params, n_max)
    if abs(coeffs[n_max]) > tail_tol:
        warnings.warn(
            f"coefficient tail |a_{n_max}| = {abs(coeffs[n_max]):.2e} exceeds "
            f"{tail_tol:g}; truncation unsafe",
            stacklevel=2,
        )
    return CoeffVector(params=params, n_max=n_max, a=coeffs)


def synthesize(coeffs: CoeffVector, theta):
    """sum_n a_n P_n(theta)."""
    th = _check_theta(theta)
    p = coeffs.params
    table = jacobi_poly_table(p.alpha, p.beta, np.cos(th), coeffs.n_max)
    vals = (norm_constants(p, coeffs.n_max) * coeffs.a) @ table
    return float(vals[0]) if np.isscalar(theta) else vals


def pi0_project(coeffs: CoeffVector) -> CoeffVector:
    """Zero the constant mode, keep the rest."""
    a = coeffs.a.copy()
    a[0] = 0.0
    return CoeffVector(params=coeffs.params, n_max=coeffs.n_max, a=a)


# --- built-in test functions ---------------------------------------------

_NAME_RE = re.compile(r"^\s*(bump|cosk|poly)\s*\(\s*([^,()]+)(?:\s*,\s*([^,()]+))?\s*\)\s*$")


def resolve_function(name: str, params: JacobiParams):
    """Named test functions shared across modules.

    bump(a,b): exp(-1/(1-u^2)) with u = (2 theta - a - b)/(b - a), zero
    outside (a,b); cosk(k): cos(k theta); poly(n): the basis element P_n.
    """
    m = _NAME_RE.match(name)
    if not m:
        raise ValueError(f"unknown function name {name!r}")
    kind, arg1, arg2 = m.group(1), m.group(2), m.group(3)
    if kind == "bump":
        if arg2 is None:
            raise ValueError("bump requires two arguments: bump(a,b)")
        a, b = float(arg1), float(arg2)
        if not (0.0 <= a < b <= math.pi):
            raise ValueError("bump support must satisfy 0 <= a < b <= pi")

        def bump(theta):
            th = np.asarray(theta, dtype=float)
            u = (2.0 * th - a - b) / (b - a)
            inside = np.abs(u) < 1.0
            out = np.zeros_like(th)
            uu = np.where(inside, u, 0.0)
            with np.errstate(divide="ignore", over="ignore"):
                out = np.where(inside, np.exp(-1.0 / (1.0 - uu * uu)), 0.0)
            return float(out) if np.isscalar(theta) else out

        return bump
    if kind == "cosk":
        if arg2 is not None:
            raise ValueError("cosk takes one argument")
        kk = float(arg1)

        def cosk(theta):
            th = np.asarray(theta, dtype=float)
            out = np.cos(kk * th)
            return float(out) if np.isscalar(theta) else out

        return cosk
    if arg2 is not None:
        raise ValueError("poly takes one argument")
    n = int(arg1)

    def poly(theta):
        return trig_poly(params, n, theta)

    return poly
