"""Potential kernels K_sigma / K~_sigma and Riesz kernels R_N, curly-R_N.

Every kernel here is a Gamma-weighted t-integral of a theta-derivative of
the compensated Poisson kernel,

    (1/Gamma(a)) int_0^inf  d^j/dtheta^j H~_t(theta, phi) t^(a-1) dt,

evaluated off the diagonal. Two regimes split at d = |theta - phi|:

* d >= d_switch: explicit t-integration. [t_stop, split] is covered by
  dyadic octave panels with a Gauss-Legendre rule on each (machine
  accurate for e^(-t s) at every decay rate s at once), the far tail
  [split, inf) is summed exactly per spectral term through the upper
  incomplete gamma function, and the remaining (0, t_stop) piece uses a
  Chebyshev least-squares model of the integrand fitted on [t_stop, W],
  W proportional to d, integrated against t^(a-1) by an exact
  Gauss-Jacobi moment rule. The whole scheme collapses into one
  multiplier vector per (a, j, d-bucket), so a kernel row costs one
  streamed basis pass per bucket.

* d < d_switch: smoothed spectral sum sum_n eta(n/M) s_n^(-a) with a
  C-infinity window eta and M = window_const/d. Below d_floor this would
  exceed the term cap; when both parameter marginals are atomic
  (alpha = beta = -1/2) the closed 4-point product representation of H_t
  makes direct t-quadrature possible at any distance, otherwise the
  evaluation refuses with TruncationError rather than degrade silently.

The n = 0 spectral term is always excluded from the integrals (weight
zero) and restored in closed form where a non-compensated kernel asks
for it.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.special import gammaincc, gammaln, roots_legendre

from ._accel import jacobi_weighted_sum
from .basis import (
    JacobiParams,
    _chain_terms,
    jacobi_gauss_xw,
    norm_constants,
    trig_poly_all,
    trig_poly_deriv_all,
)
from .config import DEFAULT_CONFIG, EvalConfig, NumericalError, TruncationError
from .poisson import gegenbauer_rule, product_constant

__all__ = [
    "potential_kernel",
    "dtheta_potential_kernel",
    "riesz_kernel",
    "riesz_kernel_interlaced",
    "potential_kernel_row",
    "dtheta_potential_kernel_row",
    "riesz_kernel_row",
    "riesz_kernel_row_first",
    "dtheta_potential_row_first",
]

_TPATH_NCAP = 60000
_TAIL_LOG = math.log(1e-13)
# small-t fit window W = clip(_W_FACTOR * d_bucket, 6 t_stop, _W_MAX)
_W_FACTOR = 0.45
_W_MAX = 1.4
_ATOM_EPS = 1e-13
_DIAG_EPS = 1e-12


def _is_atomic(params: JacobiParams) -> bool:
    return (abs(params.alpha + 0.5) < _ATOM_EPS
            and abs(params.beta + 0.5) < _ATOM_EPS)


def _s_vector(params: JacobiParams, n_max: int) -> np.ndarray:
    n = np.arange(n_max + 1, dtype=float)
    return np.abs(n + params.tau)


def _tpath_nlen(params: JacobiParams, t_stop: float, j: int) -> int:
    """Series length keeping the (n+1)^p e^(-t_stop n) tail below 1e-13,
    p = alpha + beta + 2 + 3j majorizing the basis-product growth."""
    p = max(params.alpha + params.beta + 2.0 + 3.0 * j, 0.0)

    def log_tail(n):
        ratio = math.exp(-t_stop) * ((n + 3.0) / (n + 2.0)) ** p
        if ratio >= 1.0:
            return math.inf
        return (p * math.log(n + 2.0) - t_stop * (n + 1.0)
                - math.log(1.0 - ratio))

    lo, hi = 1, 1024
    while log_tail(hi) >= _TAIL_LOG:
        hi *= 2
        if hi > 8 * _TPATH_NCAP:
            raise TruncationError(
                f"t-path series exceeds {_TPATH_NCAP} terms "
                f"at t_stop={t_stop:g}, j={j}"
            )
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if log_tail(mid) < _TAIL_LOG:
            hi = mid
        else:
            lo = mid
    if hi > _TPATH_NCAP:
        raise TruncationError(
            f"t-path series needs {hi} > {_TPATH_NCAP} terms "
            f"at t_stop={t_stop:g}, j={j}"
        )
    return hi


@lru_cache(maxsize=32)
def _gl_rule(n: int):
    return roots_legendre(n)


@lru_cache(maxsize=256)
def _near_rule(a: float, t_stop: float, split: float, n_nodes: int):
    """Nodes/weights with sum w_i f(t_i) = int_{t_stop}^{split} t^(a-1) f dt.

    Dyadic octave panels so every e^(-t s) factor is smooth on the panels
    where it still matters, whatever s."""
    per_panel = max(12, n_nodes // 2)
    x, w = _gl_rule(per_panel)
    edges = [t_stop]
    while edges[-1] < split:
        edges.append(min(2.0 * edges[-1], split))
    ts, ws = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        t = half * (x + 1.0) + lo
        ts.append(t)
        ws.append(half * w * t ** (a - 1.0))
    return np.concatenate(ts), np.concatenate(ws)


@lru_cache(maxsize=256)
def _smallt_rule(a: float, t_stop: float, w_fit: float, degree: int,
                 n_samp: int):
    """Sample nodes on [t_stop, w_fit] and the vector lam with
    lam . f(samples) ~= int_0^{t_stop} t^(a-1) f(t) dt for f within the
    reach of the Chebyshev model.

    lam = pinv(A)^T m: A the Chebyshev design matrix at the samples, m
    the power-weighted moments of T_k over (0, t_stop), exact for any
    a > 0 through a Gauss-Jacobi rule with weight t^(a-1)."""
    k = np.arange(n_samp)
    # densest sampling near t_stop where the model must blend into the
    # resolved quadrature region
    t_samp = t_stop + (w_fit - t_stop) * 0.5 * (
        1.0 - np.cos(math.pi * (k + 0.5) / n_samp)
    )
    z_samp = 2.0 * t_samp / w_fit - 1.0
    design = np.polynomial.chebyshev.chebvander(z_samp, degree)
    xg, wg = jacobi_gauss_xw(0.0, a - 1.0, 32)
    tg = t_stop * 0.5 * (1.0 + xg)
    zg = 2.0 * tg / w_fit - 1.0
    mom = (t_stop * 0.5) ** a * (
        wg @ np.polynomial.chebyshev.chebvander(zg, degree)
    )
    lam = np.linalg.pinv(design, rcond=1e-13).T @ mom
    return t_samp, lam


def _bucket(d: float) -> float:
    return 2.0 ** math.floor(math.log2(d))


@lru_cache(maxsize=512)
def _mhat_cached(key: tuple) -> np.ndarray:
    """Multiplier vector m_n ~= int_0^inf e^(-t s_n) t^(a-1) dt assembled
    from the three t-regions; index 0 forced to zero (compensated)."""
    (alpha, beta, a, w_fit, t_stop, split, near_nodes,
     degree, n_samp, n_len) = key
    params = JacobiParams(alpha, beta)
    s = _s_vector(params, n_len)
    t_near, w_near = _near_rule(a, t_stop, split, near_nodes)
    m = w_near @ np.exp(-np.outer(t_near, s))
    t_samp, lam = _smallt_rule(a, t_stop, w_fit, degree, n_samp)
    m += lam @ np.exp(-np.outer(t_samp, s))
    with np.errstate(divide="ignore"):
        far = np.exp(gammaln(a) - a * np.log(s)) * gammaincc(a, s * split)
    far[0] = 0.0
    m += far
    m[0] = 0.0
    return m


def _mhat(params: JacobiParams, a: float, d_bucket: float, n_len: int,
          cfg: EvalConfig) -> np.ndarray:
    w_fit = min(_W_MAX, max(6.0 * cfg.nearfield.t_stop,
                            _W_FACTOR * d_bucket))
    key = (params.alpha, params.beta, float(a), w_fit,
           cfg.nearfield.t_stop, cfg.tsplit.split_point,
           cfg.tsplit.near_nodes, cfg.nearfield.fit_degree,
           cfg.nearfield.fit_samples, n_len)
    return _mhat_cached(key)


def _eta_window(x: np.ndarray) -> np.ndarray:
    """C-infinity cutoff: 1 on [0, 0.1], 0 from 1 on, exp-step between."""
    y = np.clip((x - 0.1) / 0.9, 0.0, 1.0)

    def f(z):
        out = np.zeros_like(z)
        pos = z > 0
        out[pos] = np.exp(-1.0 / z[pos])
        return out

    a = f(1.0 - y)
    return a / (a + f(y))


# --- kernel recipes ---------------------------------------------------------
# A kernel is sum_i coef_i * (1/Gamma(a_i)) int d^{j_i} H~ t^{a_i - 1} dt
# plus an optional multiple of P_0(theta) P_0(phi). Recipes keep the
# t-path, spectral window, and atomic-product routes in lockstep.

def _recipe(kind: str, params: JacobiParams, *, sigma: float = 0.0,
            j: int = 0, N: int = 0) -> tuple:
    """Returns (terms, const) with terms = ((coef, a, j), ...)."""
    tau2 = params.tau * params.tau
    if kind == "potential":
        return ((1.0, 2.0 * sigma, j),), 0.0
    if kind == "riesz":
        return ((1.0, float(N), N),), 0.0
    if kind == "interlaced":
        if N % 2 == 0:
            m = N // 2
            terms = () if params.tau_is_zero else tuple(
                (math.comb(m, l) * (-tau2) ** l, 2.0 * l, 0)
                for l in range(1, m + 1)
            )
            return terms, -1.0
        m = (N - 1) // 2
        terms = [(1.0, 1.0, 1)]
        if not params.tau_is_zero:
            terms += [
                (math.comb(m, l) * (-tau2) ** l, 2.0 * l + 1.0, 1)
                for l in range(1, m + 1)
            ]
        return tuple(terms), 0.0
    raise ValueError(kind)


def _spectral_mult(terms, s: np.ndarray) -> np.ndarray:
    out = np.zeros_like(s)
    with np.errstate(divide="ignore"):
        for coef, a, _ in terms:
            out[1:] += coef * s[1:] ** (-a)
    out[0] = 0.0
    return out


# --- row evaluation per regime ----------------------------------------------

def _deriv_side_sum(params: JacobiParams, j: int, thetas: np.ndarray,
                    v: np.ndarray) -> np.ndarray:
    """sum_n v_n d^j P_n(theta_i), streamed over the theta array.

    The derivative goes through the parameter-shift rule, so each chain
    term is one weighted recurrence pass at shifted (alpha+k, beta+k)."""
    n_max = v.size - 1
    x = np.cos(thetas)
    sn = np.sin(thetas)
    base = v * norm_constants(params, n_max)
    if j == 0:
        return jacobi_weighted_sum(params.alpha, params.beta, x, base)
    lam = params.lam
    n = np.arange(n_max + 1, dtype=float)
    out = np.zeros_like(thetas)
    for (p, q, k), coef in _chain_terms(j):
        if k > n_max:
            continue
        rise = np.ones(n_max + 1)
        for i in range(k):
            rise *= n + lam + i
        w_shift = (base * rise)[k:]
        inner = jacobi_weighted_sum(params.alpha + k, params.beta + k,
                                    x, w_shift)
        out += coef * (2.0 ** -k) * (sn ** p) * (x ** q) * inner
    return out


def _second_arg_sum(params, w, j, theta, phis):
    """sum_n w_n d^j P_n(theta) P_n(phi_i) with theta the fixed slot."""
    n_max = w.size - 1
    dth = trig_poly_deriv_all(params, n_max, j, theta)
    cn = norm_constants(params, n_max)
    return jacobi_weighted_sum(params.alpha, params.beta, np.cos(phis),
                               w * dth * cn)


def _tpath_row(params, terms, theta, phis, d_bucket, cfg, first_arg):
    by_j: dict = {}
    for coef, a, j in terms:
        n_len = _tpath_nlen(params, cfg.nearfield.t_stop, j)
        w = coef / math.exp(gammaln(a)) * _mhat(params, a, d_bucket,
                                                n_len, cfg)
        by_j[j] = by_j[j] + w if j in by_j else w
    out = np.zeros_like(phis)
    for j, w in by_j.items():
        if first_arg:
            pn_fixed = trig_poly_all(params, w.size - 1, theta)
            out += _deriv_side_sum(params, j, phis, w * pn_fixed)
        else:
            out += _second_arg_sum(params, w, j, theta, phis)
    return out


def _spectral_row(params, terms, theta, phis, d_bucket, cfg, first_arg):
    n_len = int(cfg.nearfield.window_const / d_bucket)
    if n_len > cfg.nearfield.n_cap:
        raise TruncationError(
            f"spectral window needs {n_len} > n_cap={cfg.nearfield.n_cap} "
            f"terms at distance bucket {d_bucket:g}"
        )
    s = _s_vector(params, n_len)
    mult = _spectral_mult(terms, s)
    mult *= _eta_window(np.arange(n_len + 1, dtype=float) / n_len)
    j = terms[0][2]  # recipes are homogeneous in j by construction
    if first_arg:
        pn_fixed = trig_poly_all(params, n_len, theta)
        return _deriv_side_sum(params, j, phis, mult * pn_fixed)
    return _second_arg_sum(params, mult, j, theta, phis)


# --- atomic closed-form route ------------------------------------------------

def _q_derivs(u, v, theta, phi):
    """q and dq/dtheta on the (u, v) grid; higher theta-derivatives
    follow from q'' = (1 - q)/4.

    q is assembled as (1-u) A + (1-v) B + 2 sin^2((theta-phi)/4), a sum
    of non-negatives equal to 1 - u A - v B: the naive form cancels
    catastrophically near the diagonal at the u = v = 1 atom, where the
    true q is of order (theta-phi)^2."""
    A = math.sin(theta / 2.0) * math.sin(phi / 2.0)
    B = math.cos(theta / 2.0) * math.cos(phi / 2.0)
    diag = 2.0 * math.sin((theta - phi) / 4.0) ** 2
    q = (1.0 - u)[:, None] * A + (1.0 - v)[None, :] * B + diag
    # dq/dtheta = ((u+v) sin((theta-phi)/2) + (v-u) sin((theta+phi)/2))/4
    sd = math.sin((theta - phi) / 2.0)
    ss = math.sin((theta + phi) / 2.0)
    dq = 0.25 * ((u[:, None] + v[None, :]) * sd
                 + (v[None, :] - u[:, None]) * ss)
    return q, dq


def _poisson_deriv_product_grid(params, ts, theta, phi, j):
    """d^j/dtheta^j H_t for an array of t via the product form: Gegenbauer
    points in (u, v), closed Faa di Bruno composition in theta, j <= 4."""
    if j > 4:
        raise NumericalError("closed-form product route implements j <= 4")
    u, wu = gegenbauer_rule(params.alpha, 64)
    v, wv = gegenbauer_rule(params.beta, 64)
    q, q1 = _q_derivs(u, v, theta, phi)
    q2 = (1.0 - q) / 4.0
    q3 = -q1 / 4.0
    q4 = -q2 / 4.0
    p = params.alpha + params.beta + 2.0
    c_ab = product_constant(params)
    out = np.empty(len(ts))
    for i, t in enumerate(ts):
        # cosh(t/2) - 1 without subtractive loss at small t
        g = 2.0 * math.sinh(t / 4.0) ** 2 + q
        gm = g ** (-p)
        if j == 0:
            F = gm
        elif j == 1:
            F = -p * gm / g * q1
        elif j == 2:
            F = p * (p + 1.0) * gm / g ** 2 * q1 ** 2 - p * gm / g * q2
        elif j == 3:
            F = (-p * (p + 1.0) * (p + 2.0) * gm / g ** 3 * q1 ** 3
                 + 3.0 * p * (p + 1.0) * gm / g ** 2 * q1 * q2
                 - p * gm / g * q3)
        else:
            F = (p * (p + 1.0) * (p + 2.0) * (p + 3.0) * gm / g ** 4
                 * q1 ** 4
                 - 6.0 * p * (p + 1.0) * (p + 2.0) * gm / g ** 3
                 * q1 ** 2 * q2
                 + p * (p + 1.0) * gm / g ** 2 * (3.0 * q2 ** 2
                                                  + 4.0 * q1 * q3)
                 - p * gm / g * q4)
        out[i] = c_ab * math.sinh(t / 2.0) * float(wu @ F @ wv)
    return out


def _atoms_kernel_value(params, a, j, theta, phi, cfg):
    """(1/Gamma(a)) int_0^inf d^j H~_t t^(a-1) dt through the closed
    product form on [t_lo, split] plus the exact per-term tail. Works at
    any diagonal distance; only routed to when both marginals are atomic,
    where the (u, v) sum is a 4-point identity with no quadrature error."""
    d = abs(theta - phi)
    split = cfg.tsplit.split_point
    t_lo = max(d, 1e-12) * 2.0 ** -20
    edges = [t_lo]
    while edges[-1] < split:
        edges.append(min(edges[-1] * 2.0, split))
    xg, wg = _gl_rule(16)
    p0sq = norm_constants(params, 0)[0] ** 2
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        ts = half * (xg + 1.0) + lo
        vals = _poisson_deriv_product_grid(params, ts, theta, phi, j)
        if j == 0:
            vals = vals - p0sq * np.exp(-ts * abs(params.tau))
        total += half * float(wg @ (vals * ts ** (a - 1.0)))
    n_len = _tpath_nlen(params, split, j)
    s = _s_vector(params, n_len)
    with np.errstate(divide="ignore"):
        far = np.exp(gammaln(a) - a * np.log(s)) * gammaincc(a, s * split)
    far[0] = 0.0
    tail = _second_arg_sum(params, far, j, theta, np.array([phi]))[0]
    return (total + tail) / math.exp(gammaln(a))


def _atoms_row(params, terms, theta, phis, cfg, first_arg):
    out = np.zeros_like(phis)
    for i, ph in enumerate(phis):
        th1, ph1 = (ph, theta) if first_arg else (theta, ph)
        out[i] = sum(
            coef * _atoms_kernel_value(params, a, j, th1, ph1, cfg)
            for coef, a, j in terms
        )
    return out


# --- assembly ----------------------------------------------------------------

def _kernel_row(params: JacobiParams, kind: str, theta, phis,
                cfg: EvalConfig | None = None, *, sigma: float = 0.0,
                j: int = 0, N: int = 0, compensated: bool = True,
                first_arg: bool = False) -> np.ndarray:
    """Kernel values at (theta, phis[i]); first_arg=True swaps the roles,
    so phis then holds the differentiated first slot."""
    cfg = cfg if cfg is not None else DEFAULT_CONFIG
    phis = np.atleast_1d(np.asarray(phis, dtype=float))
    theta = float(theta)
    if not 0.0 < theta < math.pi:
        raise ValueError("theta must lie strictly inside (0, pi)")
    if np.any(phis <= 0.0) or np.any(phis >= math.pi):
        raise ValueError("phi must lie strictly inside (0, pi)")
    d = np.abs(phis - theta)
    if np.any(d < _DIAG_EPS):
        raise ValueError("kernel is defined off the diagonal only")
    terms, const = _recipe(kind, params, sigma=sigma, j=j, N=N)
    out = np.zeros_like(phis)
    if terms:
        atomic = _is_atomic(params)
        floor = cfg.nearfield.d_floor
        buckets: dict = {}
        for i, di in enumerate(d):
            if di >= cfg.nearfield.d_switch:
                key = ("t", _bucket(di))
            elif di >= floor:
                # clamp: di one ulp above the floor can bucket below it
                key = ("s", max(_bucket(di), floor))
            elif atomic:
                key = ("a", 0.0)
            else:
                raise TruncationError(
                    f"distance {di:g} below the spectral floor {floor:g} "
                    "and no closed-form route for these parameters"
                )
            buckets.setdefault(key, []).append(i)
        for key in sorted(buckets):
            idx = np.array(buckets[key], dtype=int)
            sub = phis[idx]
            if key[0] == "t":
                vals = _tpath_row(params, terms, theta, sub, key[1], cfg,
                                  first_arg)
            elif key[0] == "s":
                vals = _spectral_row(params, terms, theta, sub, key[1],
                                     cfg, first_arg)
            else:
                vals = _atoms_row(params, terms, theta, sub, cfg,
                                  first_arg)
            out[idx] = vals
    if const != 0.0:
        out += const * norm_constants(params, 0)[0] ** 2
    if kind == "potential" and not compensated:
        if params.tau_is_zero:
            raise ValueError(
                "non-compensated potential kernel requires tau != 0"
            )
        if j == 0:
            out += (abs(params.tau) ** (-2.0 * sigma)
                    * norm_constants(params, 0)[0] ** 2)
    return out


def potential_kernel(params: JacobiParams, sigma: float, theta: float,
                     phi: float, compensated: bool = False,
                     config: EvalConfig | None = None) -> float:
    """K_sigma(theta, phi), or the compensated K~_sigma."""
    if sigma <= 0.0:
        raise ValueError("sigma must be positive")
    return float(_kernel_row(params, "potential", theta, [phi], config,
                             sigma=sigma, compensated=compensated)[0])


def dtheta_potential_kernel(params: JacobiParams, j: int, sigma: float,
                            theta: float, phi: float,
                            compensated: bool = False,
                            config: EvalConfig | None = None) -> float:
    """d^j/dtheta^j K_sigma(theta, phi); j = 0 is potential_kernel."""
    if sigma <= 0.0:
        raise ValueError("sigma must be positive")
    if j < 0:
        raise ValueError("derivative order must be >= 0")
    return float(_kernel_row(params, "potential", theta, [phi], config,
                             sigma=sigma, j=j, compensated=compensated)[0])


def riesz_kernel(params: JacobiParams, N: int, theta: float, phi: float,
                 config: EvalConfig | None = None) -> float:
    """R_N(theta, phi) = (1/Gamma(N)) int d^N/dtheta^N H~_t t^(N-1) dt."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return float(_kernel_row(params, "riesz", theta, [phi], config, N=N)[0])


def riesz_kernel_interlaced(params: JacobiParams, N: int, theta: float,
                            phi: float,
                            config: EvalConfig | None = None) -> float:
    """Interlaced-derivative Riesz kernel, reduced by the binomial
    expansion of (s^2 - tau^2)^m to compensated potential kernels.
    N = 1 coincides with riesz_kernel."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return float(_kernel_row(params, "interlaced", theta, [phi], config,
                             N=N)[0])


def potential_kernel_row(params: JacobiParams, sigma: float, theta: float,
                         phis, compensated: bool = False,
                         config: EvalConfig | None = None) -> np.ndarray:
    """K_sigma(theta, phi_i) over an array of phi."""
    if sigma <= 0.0:
        raise ValueError("sigma must be positive")
    return _kernel_row(params, "potential", theta, phis, config,
                       sigma=sigma, compensated=compensated)


def dtheta_potential_kernel_row(params: JacobiParams, j: int, sigma: float,
                                theta: float, phis,
                                compensated: bool = False,
                                config: EvalConfig | None = None
                                ) -> np.ndarray:
    if sigma <= 0.0:
        raise ValueError("sigma must be positive")
    if j < 0:
        raise ValueError("derivative order must be >= 0")
    return _kernel_row(params, "potential", theta, phis, config,
                       sigma=sigma, j=j, compensated=compensated)


def riesz_kernel_row(params: JacobiParams, N: int, theta: float, phis,
                     variant: str = "standard",
                     config: EvalConfig | None = None) -> np.ndarray:
    """R_N(theta, phi_i) (or the interlaced variant) over an array of phi."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return _kernel_row(params, _variant_kind(variant), theta, phis,
                       config, N=N)


def riesz_kernel_row_first(params: JacobiParams, N: int, thetas, phi: float,
                           variant: str = "standard",
                           config: EvalConfig | None = None) -> np.ndarray:
    """R_N(theta_i, phi) over an array of theta (differentiated slot)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return _kernel_row(params, _variant_kind(variant), phi, thetas,
                       config, N=N, first_arg=True)


def dtheta_potential_row_first(params: JacobiParams, j: int, sigma: float,
                               thetas, phi: float,
                               compensated: bool = True,
                               config: EvalConfig | None = None
                               ) -> np.ndarray:
    """d^j K_sigma(theta_i, phi) over an array of theta."""
    if sigma <= 0.0:
        raise ValueError("sigma must be positive")
    if j < 0:
        raise ValueError("derivative order must be >= 0")
    return _kernel_row(params, "potential", phi, thetas, config,
                       sigma=sigma, j=j, compensated=compensated,
                       first_arg=True)


def _variant_kind(variant: str) -> str:
    if variant == "standard":
        return "riesz"
    if variant == "interlaced":
        return "interlaced"
    raise ValueError(f"unknown variant {variant!r}")
