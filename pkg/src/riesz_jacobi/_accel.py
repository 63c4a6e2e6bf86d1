"""Hot loops for Jacobi polynomial recurrences.

Two primitives back every series evaluation in the package:

* ``jacobi_values`` fills P_0..P_nmax of the classical (unnormalized)
  Jacobi polynomials at a single point x.
* ``jacobi_weighted_sum`` streams sum_n w[n] * P_n(x_j) over a vector of
  points without materializing the (nmax+1, npts) table.

Both run under numba when available; the numpy fallbacks are exact but
slower. Summation order is ascending in n in either case, so results are
bit-identical between backend choices of the same kind and across runs.
"""

from __future__ import annotations

import numpy as np

try:  # pragma: no cover - exercised implicitly
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        if args and callable(args[0]):
            return args[0]
        return wrap


@njit(cache=True, nogil=True)
def _jacobi_values_nb(a, b, x, nmax):
    out = np.empty(nmax + 1)
    out[0] = 1.0
    if nmax >= 1:
        out[1] = 0.5 * (a - b) + (0.5 * (a + b) + 1.0) * x
    for n in range(2, nmax + 1):
        c1 = 2.0 * n * (n + a + b) * (2.0 * n + a + b - 2.0)
        c2 = (2.0 * n + a + b - 1.0) * (a * a - b * b)
        c3 = (2.0 * n + a + b - 1.0) * (2.0 * n + a + b) * (2.0 * n + a + b - 2.0)
        c4 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * (2.0 * n + a + b)
        out[n] = ((c2 + c3 * x) * out[n - 1] - c4 * out[n - 2]) / c1
    return out


@njit(cache=True, nogil=True)
def _jacobi_weighted_sum_nb(a, b, xs, w):
    npts = xs.shape[0]
    nmax = w.shape[0] - 1
    out = np.empty(npts)
    for j in range(npts):
        x = xs[j]
        pm1 = 1.0
        acc = w[0] * pm1
        if nmax >= 1:
            p = 0.5 * (a - b) + (0.5 * (a + b) + 1.0) * x
            acc += w[1] * p
            for n in range(2, nmax + 1):
                c1 = 2.0 * n * (n + a + b) * (2.0 * n + a + b - 2.0)
                c2 = (2.0 * n + a + b - 1.0) * (a * a - b * b)
                c3 = (2.0 * n + a + b - 1.0) * (2.0 * n + a + b) * (2.0 * n + a + b - 2.0)
                c4 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * (2.0 * n + a + b)
                pn = ((c2 + c3 * x) * p - c4 * pm1) / c1
                pm1 = p
                p = pn
                acc += w[n] * p
        out[j] = acc
    return out


def _jacobi_values_np(a, b, x, nmax):
    out = np.empty(nmax + 1)
    out[0] = 1.0
    if nmax >= 1:
        out[1] = 0.5 * (a - b) + (0.5 * (a + b) + 1.0) * x
    for n in range(2, nmax + 1):
        c1 = 2.0 * n * (n + a + b) * (2.0 * n + a + b - 2.0)
        c2 = (2.0 * n + a + b - 1.0) * (a * a - b * b)
        c3 = (2.0 * n + a + b - 1.0) * (2.0 * n + a + b) * (2.0 * n + a + b - 2.0)
        c4 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * (2.0 * n + a + b)
        out[n] = ((c2 + c3 * x) * out[n - 1] - c4 * out[n - 2]) / c1
    return out


def _jacobi_weighted_sum_np(a, b, xs, w):
    nmax = w.shape[0] - 1
    pm1 = np.ones_like(xs)
    acc = w[0] * pm1
    if nmax >= 1:
        p = 0.5 * (a - b) + (0.5 * (a + b) + 1.0) * xs
        acc = acc + w[1] * p
        for n in range(2, nmax + 1):
            c1 = 2.0 * n * (n + a + b) * (2.0 * n + a + b - 2.0)
            c2 = (2.0 * n + a + b - 1.0) * (a * a - b * b)
            c3 = (2.0 * n + a + b - 1.0) * (2.0 * n + a + b) * (2.0 * n + a + b - 2.0)
            c4 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * (2.0 * n + a + b)
            pn = ((c2 + c3 * xs) * p - c4 * pm1) / c1
            pm1 = p
            p = pn
            acc = acc + w[n] * p
    return acc


def jacobi_values(a: float, b: float, x: float, nmax: int) -> np.ndarray:
    """P_n^{a,b}(x) for n = 0..nmax at a single point."""
    if HAVE_NUMBA:
        return _jacobi_values_nb(float(a), float(b), float(x), int(nmax))
    return _jacobi_values_np(float(a), float(b), float(x), int(nmax))


def jacobi_weighted_sum(a: float, b: float, xs: np.ndarray, w: np.ndarray) -> np.ndarray:
    """sum_n w[n] P_n^{a,b}(xs[j]) for each j, streamed over n ascending."""
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    w = np.ascontiguousarray(w, dtype=np.float64)
    if xs.size == 0:
        return np.zeros(0)
    if HAVE_NUMBA:
        return _jacobi_weighted_sum_nb(float(a), float(b), xs, w)
    return _jacobi_weighted_sum_np(float(a), float(b), xs, w)


def warmup() -> None:
    """Trigger jit compilation so timed runs do not pay for it."""
    jacobi_values(0.3, -0.2, 0.1, 4)
    jacobi_weighted_sum(0.3, -0.2, np.array([0.1, 0.2]), np.array([1.0, 0.5, 0.25]))
