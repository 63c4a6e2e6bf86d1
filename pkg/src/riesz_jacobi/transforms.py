"""Riesz transforms of orders N >= 1, evaluated by two independent routes.

riesz_spectral applies the multiplier |n+tau|^(-N) (or its interlaced
counterpart) to a coefficient vector and synthesizes with the N-th
derivative of the basis. riesz_singular never sees coefficients: it
integrates the off-diagonal kernel against f. Odd orders use the
subtraction method,

    int R_N(theta, phi) [f(phi) - f(theta)] dmu(phi)
        + f(theta) * pv int R_N(theta, .) dmu,

with the principal-value row integral obtained from a symmetric-excision
ladder and never assumed to vanish. Even orders add (-1)^(N/2) f(theta)
(interlaced: +f(theta)) to an ordinary integral, the kernel being
integrable near the diagonal.

Quadrature in phi is composite Gauss-Legendre over panels graded
dyadically toward both endpoints of (0, pi) and toward phi = theta, the
innermost strip of half-width delta0 closed by a two-point rule per
side. Kernel rows and node partitions are cached per (params, order,
theta, config).
"""

from __future__ import annotations

import math
from collections import OrderedDict
from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre

from .basis import (
    CoeffVector,
    JacobiParams,
    jacobi_gauss_xw,
    mu_density,
    resolve_function,
    synthesize,
    trig_poly_deriv_all,
)
from .config import DEFAULT_CONFIG, EvalConfig, NumericalError, TruncationError
from .kernels import potential_kernel_row, riesz_kernel_row

__all__ = [
    "riesz_spectral",
    "riesz_singular",
    "pv_row_integral",
    "pv_annulus_values",
    "inverse_power",
    "annulus_integral",
]

_TAIL_ABS = 1e-8
# two-point Gauss nodes on (0, 1), used to close the diagonal strip
_STRIP_LO = 0.5 - 0.5 / math.sqrt(3.0)
_STRIP_HI = 0.5 + 0.5 / math.sqrt(3.0)


def _resolve(f, params: JacobiParams):
    return resolve_function(f, params) if isinstance(f, str) else f


# --- spectral route ----------------------------------------------------------

def _spectral_multiplier(params: JacobiParams, n_max: int, N: int,
                         variant: str) -> tuple:
    """Multiplier vector over n = 0..n_max and the derivative order that
    rides on the synthesis side."""
    n = np.arange(n_max + 1, dtype=float)
    s = np.abs(n + params.tau)
    mult = np.zeros(n_max + 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        if variant == "standard":
            mult[1:] = s[1:] ** (-float(N))
            j = N
        elif variant == "interlaced":
            m, odd = divmod(N, 2)
            ev = (n * (n + params.lam)) ** m
            mult[1:] = ev[1:] * s[1:] ** (-float(N))
            j = 1 if odd else 0
        else:
            raise ValueError(f"unknown variant {variant!r}")
    return mult, j


def riesz_spectral(coeffs: CoeffVector, N: int, theta,
                   variant: str = "standard"):
    """sum_n mult_n a_n d^j P_n(theta); theta scalar or array."""
    if N < 1:
        raise ValueError("N must be >= 1")
    params = coeffs.params
    a = coeffs.a
    if abs(a[coeffs.n_max]) > _TAIL_ABS:
        raise TruncationError(
            f"coefficient tail |a_{coeffs.n_max}| = {abs(a[coeffs.n_max]):.2e}"
            f" exceeds {_TAIL_ABS:g}; raise n_max before transforming"
        )
    mult, j = _spectral_multiplier(params, coeffs.n_max, N, variant)
    w = mult * a
    th = np.atleast_1d(np.asarray(theta, dtype=float))
    vals = np.array([
        float(np.dot(w, trig_poly_deriv_all(params, coeffs.n_max, j, t)))
        for t in th
    ])
    return float(vals[0]) if np.isscalar(theta) else vals


# --- phi-quadrature partitions ----------------------------------------------

@lru_cache(maxsize=32)
def _gl(n: int):
    return roots_legendre(n)


def _panel_nodes(panels, n_nodes):
    xg, wg = _gl(n_nodes)
    phis, ws = [], []
    for lo, hi in panels:
        half = 0.5 * (hi - lo)
        phis.append(half * (xg + 1.0) + lo)
        ws.append(half * wg)
    return np.concatenate(phis), np.concatenate(ws)


def _cap_widths(panels, w_max: float) -> list:
    """Split any panel wider than w_max into equal parts. Integrands are
    only piecewise analytic (compact support corners), so octave panels
    far from the grading centers cannot be allowed to grow arbitrarily."""
    out = []
    for lo, hi in panels:
        k = max(1, math.ceil((hi - lo) / w_max))
        if k == 1:
            out.append((lo, hi))
        else:
            edges = np.linspace(lo, hi, k + 1)
            out.extend(zip(edges[:-1], edges[1:]))
    return out


# grading stops at this edge; float spacing near pi is ~4.4e-16, so
# panels deeper than ~1e-7 would have their nodes quantized relative to
# their Gauss-Legendre positions and the rule collapses on the power
# weight -- the closure integrates the remaining stub in one shot
_STUB_EDGE = 1e-7


def _stub_levels(halfwidth: float, cfg: EvalConfig) -> int:
    if halfwidth <= _STUB_EDGE:
        return 1
    lv = int(math.ceil(math.log2(halfwidth / _STUB_EDGE)))
    return max(1, min(cfg.singular.boundary_levels, lv))


def _boundary_panels(theta: float, cfg: EvalConfig) -> list:
    """Dyadic octaves toward 0 and pi starting at the midpoints between
    theta and the endpoints, stopping at _STUB_EDGE."""
    panels = []
    left_mid = theta / 2.0
    right_half = (math.pi - theta) / 2.0
    for lvl in range(_stub_levels(left_mid, cfg)):
        e = left_mid * 2.0 ** -lvl
        panels.append((e / 2.0, e))
    for lvl in range(_stub_levels(right_half, cfg)):
        e = right_half * 2.0 ** -lvl
        panels.append((math.pi - e, math.pi - e / 2.0))
    return panels


def _closure_nodes(params: JacobiParams, theta: float, cfg: EvalConfig):
    """Two-node Gauss-Jacobi closure of the innermost boundary stubs.

    Dyadic grading leaves stubs of width ~ _STUB_EDGE at 0 and pi. Their
    dmu-mass scales like s^(2 alpha + 2) (resp. 2 beta + 2) and is
    nowhere near roundoff when an exponent approaches -1, so the stubs
    are integrated exactly in the local power weight instead of being
    dropped. Weights are stored pre-density, like panel weights, and on
    the pi side they divide by the density at the representable node
    position rather than the ideal one."""
    s_left = (theta / 2.0) * 2.0 ** -_stub_levels(theta / 2.0, cfg)
    right_half = (math.pi - theta) / 2.0
    s_right = right_half * 2.0 ** -_stub_levels(right_half, cfg)
    phis, ws = [], []
    x0, w0 = jacobi_gauss_xw(0.0, 2.0 * params.alpha + 1.0, 2)
    nodes = (s_left / 2.0) * (1.0 + x0)
    scale = (s_left / 2.0) * (s_left / 4.0) ** (2.0 * params.alpha + 1.0)
    phis.append(nodes)
    ws.append(scale * w0 / (nodes / 2.0) ** (2.0 * params.alpha + 1.0))
    x0, w0 = jacobi_gauss_xw(0.0, 2.0 * params.beta + 1.0, 2)
    # keep pi - dist representable strictly below pi
    dist = np.maximum((s_right / 2.0) * (1.0 + x0),
                      4.0 * np.finfo(float).eps)
    node_r = math.pi - dist
    dist = math.pi - node_r
    scale = (s_right / 2.0) * (s_right / 4.0) ** (2.0 * params.beta + 1.0)
    phis.append(node_r)
    ws.append(scale * w0 / (dist / 2.0) ** (2.0 * params.beta + 1.0))
    return np.concatenate(phis), np.concatenate(ws)


def _graded_panels(theta: float, delta: float, cfg: EvalConfig) -> list:
    """Dyadic panels covering (0, pi) minus (theta-delta, theta+delta),
    graded toward 0, pi, and theta; the innermost boundary stubs are
    closed separately by _closure_nodes."""
    sq = cfg.singular
    panels = _boundary_panels(theta, cfg)
    left_mid = theta / 2.0
    right_mid = theta + (math.pi - theta) / 2.0
    for mid, sign in ((left_mid, -1.0), (right_mid, 1.0)):
        h = abs(theta - mid)
        if h <= delta:
            continue
        lvl = 0
        while lvl < sq.diag_levels and h * 2.0 ** -(lvl + 1) > delta:
            a = theta + sign * h * 2.0 ** -lvl
            b = theta + sign * h * 2.0 ** -(lvl + 1)
            panels.append((min(a, b), max(a, b)))
            lvl += 1
        a = theta + sign * h * 2.0 ** -lvl
        b = theta + sign * delta
        if abs(a - b) > 0.0:
            panels.append((min(a, b), max(a, b)))
    panels = _cap_widths(panels, sq.max_panel_width)
    panels.sort()
    return panels


def _partition(params: JacobiParams, theta: float, delta: float,
               cfg: EvalConfig, strip: bool) -> tuple:
    """(phi nodes ascending, pre-density weights)."""
    phis, ws = _panel_nodes(_graded_panels(theta, delta, cfg),
                            cfg.singular.panel_nodes)
    cp, cw = _closure_nodes(params, theta, cfg)
    phis = np.concatenate([phis, cp])
    ws = np.concatenate([ws, cw])
    if strip:
        sp = np.array([theta - delta * _STRIP_HI, theta - delta * _STRIP_LO,
                       theta + delta * _STRIP_LO, theta + delta * _STRIP_HI])
        phis = np.concatenate([phis, sp])
        ws = np.concatenate([ws, np.full(4, delta / 2.0)])
    order = np.argsort(phis)
    return phis[order], ws[order]


# --- caches -------------------------------------------------------------------

_PART_CACHE: OrderedDict = OrderedDict()
_ROW_CACHE: OrderedDict = OrderedDict()


def _cached(cache: OrderedDict, key, builder, cap: int):
    if key in cache:
        cache.move_to_end(key)
        return cache[key]
    val = builder()
    cache[key] = val
    while len(cache) > cap:
        cache.popitem(last=False)
    return val


def _partition_cached(params: JacobiParams, theta: float, delta: float,
                      cfg: EvalConfig, strip: bool):
    key = (params.key(), float(theta), float(delta), strip,
           cfg.config_hash())
    return _cached(_PART_CACHE, key,
                   lambda: _partition(params, theta, delta, cfg, strip), 64)


def _row_cached(params: JacobiParams, tag: tuple, theta: float,
                phis: np.ndarray, cfg: EvalConfig, builder):
    key = (params.key(), tag, float(theta), cfg.config_hash())
    return _cached(_ROW_CACHE, key, builder, 128)


# --- principal-value row integrals --------------------------------------------

def pv_annulus_values(params: JacobiParams, N: int, theta: float,
                      ladder=None, config: EvalConfig | None = None
                      ) -> tuple:
    """(eps, I_eps) with I_eps = int_{|phi-theta|>eps} R_N(theta,.) dmu,
    symmetric excision; eps descending along the configured ladder.

    Built incrementally: the region outside the largest eps plus one
    shell per ladder step, so successive truncations share every panel."""
    cfg = config if config is not None else DEFAULT_CONFIG
    if N < 1 or N % 2 == 0:
        raise ValueError("pv row integrals are defined for odd N")
    eps = np.asarray(ladder if ladder is not None else cfg.pv.eps_seq,
                     dtype=float)
    if np.any(np.diff(eps) >= 0.0) or eps.size < 3:
        raise ValueError("ladder must be strictly decreasing, length >= 3")
    eps0 = float(eps[0])
    if not (eps0 < theta < math.pi - eps0):
        raise ValueError("theta too close to an endpoint for the ladder")
    phis, ws = _partition_cached(params, theta, eps0, cfg, strip=False)
    shells = []
    for hi, lo in zip(eps[:-1], eps[1:]):
        shells.append((theta - hi, theta - lo))
        shells.append((theta + lo, theta + hi))
    sph, spw = _panel_nodes(shells, cfg.singular.panel_nodes)
    row_all = _row_cached(
        params, ("pvrow", N, tuple(eps.tolist())), theta, None, cfg,
        lambda: riesz_kernel_row(
            params, N, theta, np.concatenate([phis, sph]), config=cfg),
    )
    outer = float(np.dot(ws * mu_density(params, phis), row_all[:phis.size]))
    shell_rows = row_all[phis.size:].reshape(eps.size - 1, -1)
    shell_phis = sph.reshape(eps.size - 1, -1)
    shell_ws = spw.reshape(eps.size - 1, -1)
    vals = [outer]
    acc = outer
    for i in range(eps.size - 1):
        acc += float(np.dot(shell_ws[i] * mu_density(params, shell_phis[i]),
                            shell_rows[i]))
        vals.append(acc)
    return eps, np.array(vals)


def _pv_extrapolate(eps: np.ndarray, vals: np.ndarray, window: int = 10
                    ) -> float:
    """Extrapolation of the truncated integrals to eps = 0.

    Away from the Chebyshev case the kernel carries a log term in its
    diagonal expansion, so the truncations behave like
    v + c1 eps + d1 eps log eps + c2 eps^2 + d2 eps^2 log eps + ... ;
    a pure power ladder misses the logs and stalls near first order.
    Least squares on the mixed basis through third order, over the
    smallest `window` excisions."""
    m = min(window, eps.size)
    e = np.asarray(eps[-m:], dtype=float)
    y = np.asarray(vals[-m:], dtype=float)
    s = e / e[0]
    ls = np.log(s)
    design = np.vstack([np.ones(m), s, s * ls, s * s, s * s * ls,
                        s ** 3, s ** 3 * ls]).T
    sol, *_ = np.linalg.lstsq(design, y, rcond=None)
    return float(sol[0])


def pv_row_integral(params: JacobiParams, N: int, theta: float,
                    ladder=None, config: EvalConfig | None = None) -> float:
    """Extrapolated pv int R_N(theta, .) dmu; raises NumericalError when
    dropping the smallest excision moves the extrapolant materially."""
    cfg = config if config is not None else DEFAULT_CONFIG
    eps, vals = pv_annulus_values(params, N, theta, ladder, cfg)
    if cfg.pv.extrapolation == "none":
        full, partial = float(vals[-1]), float(vals[-2])
    else:
        full = _pv_extrapolate(eps, vals)
        partial = _pv_extrapolate(eps[:-1], vals[:-1])
    drift = abs(full - partial)
    if drift > 0.25 * cfg.tolerances.pv_zero:
        raise NumericalError(
            f"pv ladder did not settle: extrapolant moved {drift:.3e} "
            "when the smallest excision was dropped"
        )
    return full


# --- singular-integral route ---------------------------------------------------

def riesz_singular(f, params: JacobiParams, N: int, theta: float,
                   variant: str = "standard",
                   config: EvalConfig | None = None) -> float:
    """Riesz transform at theta through the off-diagonal kernel only."""
    cfg = config if config is not None else DEFAULT_CONFIG
    if N < 1:
        raise ValueError("N must be >= 1")
    if variant not in ("standard", "interlaced"):
        raise ValueError(f"unknown variant {variant!r}")
    if not 0.0 < theta < math.pi:
        raise ValueError("theta must lie strictly inside (0, pi)")
    fn = _resolve(f, params)
    phis, ws = _partition_cached(params, theta, cfg.singular.delta0, cfg,
                                 strip=True)
    row = _row_cached(
        params, ("riesz", variant, N), theta, phis, cfg,
        lambda: riesz_kernel_row(params, N, theta, phis, variant=variant,
                                 config=cfg),
    )
    wmu = ws * mu_density(params, phis)
    f_theta = float(fn(theta))
    if N % 2 == 1:
        fv = np.asarray(fn(phis), dtype=float)
        sub = float(np.dot(wmu, row * (fv - f_theta)))
        return sub + f_theta * pv_row_integral(params, N, theta, config=cfg)
    fv = np.asarray(fn(phis), dtype=float)
    local = f_theta if variant == "interlaced" else (-1.0) ** (N // 2) * f_theta
    return local + float(np.dot(wmu, row * fv))


# --- negative powers -----------------------------------------------------------

def inverse_power(coeffs: CoeffVector, sigma: float, mode: str, theta,
                  config: EvalConfig | None = None):
    """J^(-sigma) f at theta. mode='spectral' applies |n+tau|^(-2 sigma)
    to the coefficients; mode='kernel' integrates the potential kernel
    against the synthesized f. Constants are projected away when tau = 0
    (the negative power is otherwise undefined on them)."""
    if sigma <= 0.0:
        raise ValueError("sigma must be positive")
    cfg = config if config is not None else DEFAULT_CONFIG
    params = coeffs.params
    if mode == "spectral":
        n = np.arange(coeffs.n_max + 1, dtype=float)
        s = np.abs(n + params.tau)
        mult = np.zeros(coeffs.n_max + 1)
        with np.errstate(divide="ignore"):
            mult[1:] = s[1:] ** (-2.0 * sigma)
        if not params.tau_is_zero:
            mult[0] = s[0] ** (-2.0 * sigma)
        w = mult * coeffs.a
        th = np.atleast_1d(np.asarray(theta, dtype=float))
        vals = np.array([
            float(np.dot(w, trig_poly_deriv_all(params, coeffs.n_max, 0, t)))
            for t in th
        ])
        return float(vals[0]) if np.isscalar(theta) else vals
    if mode != "kernel":
        raise ValueError(f"unknown mode {mode!r}")
    th = float(theta)
    phis, ws = _partition_cached(params, th, cfg.singular.delta0, cfg,
                                 strip=True)
    compensated = params.tau_is_zero
    row = _row_cached(
        params, ("pot", float(sigma), compensated), th, phis, cfg,
        lambda: potential_kernel_row(params, sigma, th, phis,
                                     compensated=compensated, config=cfg),
    )
    work = coeffs
    if compensated:
        a = coeffs.a.copy()
        a[0] = 0.0
        work = CoeffVector(params=params, n_max=coeffs.n_max, a=a)
    fv = synthesize(work, phis)
    return float(np.dot(ws * mu_density(params, phis), row * fv))


# --- excision experiments -------------------------------------------------------

def annulus_integral(params: JacobiParams, N: int, theta: float, f,
                     eps: float, variant: str = "standard",
                     absolute: bool = False,
                     config: EvalConfig | None = None) -> float:
    """int_{|phi-theta|>eps} R_N(theta,phi) f(phi) dmu(phi), no
    subtraction, absolute value of the integrand when absolute=True.

    Panels per side run over dyadic octaves [eps 2^i, eps 2^(i+1)] so two
    calls with eps and 2 eps share every panel outside the inner shell
    and their difference carries no recomputation noise."""
    cfg = config if config is not None else DEFAULT_CONFIG
    if not (0.0 < eps < min(theta, math.pi - theta) / 4.0):
        raise ValueError("eps must be positive and clear of the endpoints")
    fn = _resolve(f, params)
    sq = cfg.singular
    panels = []
    for sign, room in ((-1.0, theta / 2.0), (1.0, (math.pi - theta) / 2.0)):
        d = eps
        while d < room:
            hi = min(2.0 * d, room)
            a, b = theta + sign * d, theta + sign * hi
            panels.append((min(a, b), max(a, b)))
            d = hi
    panels.extend(_boundary_panels(theta, cfg))
    panels = _cap_widths(panels, sq.max_panel_width)
    panels.sort()
    phis, ws = _panel_nodes(panels, sq.panel_nodes)
    cp, cw = _closure_nodes(params, theta, cfg)
    order = np.argsort(np.concatenate([phis, cp]))
    phis = np.concatenate([phis, cp])[order]
    ws = np.concatenate([ws, cw])[order]
    row = riesz_kernel_row(params, N, theta, phis, variant=variant,
                           config=cfg)
    integrand = row * np.asarray(fn(phis), dtype=float)
    if absolute:
        integrand = np.abs(integrand)
    return float(np.dot(ws * mu_density(params, phis), integrand))
