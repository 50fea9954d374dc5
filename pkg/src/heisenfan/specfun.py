"""Special functions used throughout the package.

Everything here is scalar-valued and vectorized over numpy arrays: Laguerre
functions (Laguerre polynomials with their Gaussian weight attached), Bessel
kernels for the limiting ray, and normalized Hermite functions.

The weighted Laguerre functions

    ell_k^{delta}(x) = L_k^{delta}(x) * exp(-x/2)

are computed by the three-term recurrence in the *weighted* form, which is
stable for large ``x`` where the bare polynomial overflows long before the
Gaussian weight can rescue it.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import jv as _besselj


def weighted_laguerre_stack(k_max: int, delta: int, x: np.ndarray) -> np.ndarray:
    """All weighted Laguerre functions ell_k^{delta}(x) for k = 0..k_max.

    Returns an array of shape ``(k_max + 1,) + x.shape``.  Uses the standard
    recurrence (k+1) L_{k+1} = (2k+1+delta-x) L_k - (k+delta) L_{k-1}, applied
    directly to the weighted functions (the weight is k-independent).
    """
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    if delta < 0:
        raise ValueError("delta must be >= 0")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("Laguerre argument must be nonnegative")
    out = np.empty((k_max + 1,) + x.shape, dtype=float)
    w = np.exp(-0.5 * x)
    out[0] = w
    if k_max >= 1:
        out[1] = (1.0 + delta - x) * w
    for k in range(1, k_max):
        out[k + 1] = ((2 * k + 1 + delta - x) * out[k] - (k + delta) * out[k - 1]) / (k + 1)
    return out


def laguerre_poly(k: int, delta: int, x: np.ndarray) -> np.ndarray:
    """Generalized Laguerre polynomial L_k^{delta}(x) (unweighted)."""
    if k < 0:
        raise ValueError("degree k must be >= 0")
    x = np.asarray(x, dtype=float)
    # recurrence on the bare polynomials; fine for moderate x, and the
    # weighted variant below should be preferred whenever a weight exists.
    p_prev = np.ones_like(x)
    if k == 0:
        return p_prev
    p = 1.0 + delta - x
    for j in range(1, k):
        p, p_prev = ((2 * j + 1 + delta - x) * p - (j + delta) * p_prev) / (j + 1), p
    return p


def laguerre_function(k: int, n: int, lam: float, r: np.ndarray) -> np.ndarray:
    """Scaled Laguerre function phi_{k,lam}(r) = L_k^{n-1}(|lam| r^2 / 2) e^{-|lam| r^2 / 4}.

    ``r`` is the radial variable |z|; the function is radial on C^n and this
    evaluates its profile.  Requires lam != 0.
    """
    return laguerre_function_stack(k, n, lam, r)[k]


def laguerre_function_stack(k_max: int, n: int, lam: float, r: np.ndarray) -> np.ndarray:
    """phi_{k,lam}(r) for all k = 0..k_max, shape ``(k_max+1,) + r.shape``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if lam == 0:
        raise ValueError("lam must be nonzero; the limiting ray uses the Bessel kernel")
    r = np.asarray(r, dtype=float)
    x = 0.5 * abs(lam) * r * r
    return weighted_laguerre_stack(k_max, n - 1, x)


def bessel_j(m: float, t: np.ndarray) -> np.ndarray:
    """Bessel function J_m(t) of the first kind for t >= 0."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("bessel_j expects t >= 0")
    return _besselj(m, t)


def bessel_ratio(n: int, t: np.ndarray) -> np.ndarray:
    """The normalized kernel (n-1)! 2^{n-1} J_{n-1}(t) / t^{n-1}, equal to 1 at t = 0.

    Near t = 0 the ratio J_{n-1}(t)/t^{n-1} is evaluated by its power series to
    avoid 0/0; away from 0 the direct quotient is used.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("bessel_ratio expects t >= 0")
    if n == 1:
        return _besselj(0, t)
    out = np.empty_like(t)
    small = t < 0.5
    ts = t[small]
    # J_{n-1}(t)/t^{n-1} = 2^{1-n} sum_j (-1)^j (t^2/4)^j / (j! (n-1+j)!)
    # multiplied by (n-1)! 2^{n-1} this is sum_j (-1)^j (t^2/4)^j (n-1)!/(j!(n-1+j)!)
    acc = np.ones_like(ts)
    term = np.ones_like(ts)
    q = 0.25 * ts * ts
    for j in range(1, 12):
        term = term * (-q) / (j * (n - 1 + j))
        acc = acc + term
    out[small] = acc
    tl = t[~small]
    out[~small] = math.factorial(n - 1) * 2.0 ** (n - 1) * _besselj(n - 1, tl) / tl ** (n - 1)
    return out


def laguerre_asymptotic_main(k: int, n: int, lam: float, r: np.ndarray) -> np.ndarray:
    """Main term of the large-k Laguerre asymptotics: the matching Bessel kernel.

    phi_{k,lam}(r) is approximated by bessel_ratio(n, sqrt((2k+n)|lam|) r),
    with an error of order (2k+n)^{-(n-1)/2 - 3/4} uniformly on bounded r.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    r = np.asarray(r, dtype=float)
    return bessel_ratio(n, math.sqrt((2 * k + n) * abs(lam)) * r)


def hermite_functions(m_max: int, x: np.ndarray) -> np.ndarray:
    """L^2(R)-normalized Hermite functions h_0..h_{m_max}, shape ``(m_max+1,) + x.shape``.

    Recurrence in the normalized form:
        h_0 = pi^{-1/4} e^{-x^2/2},
        h_{m+1} = sqrt(2/(m+1)) x h_m - sqrt(m/(m+1)) h_{m-1}.
    """
    if m_max < 0:
        raise ValueError("m_max must be >= 0")
    x = np.asarray(x, dtype=float)
    out = np.empty((m_max + 1,) + x.shape, dtype=float)
    out[0] = np.pi ** (-0.25) * np.exp(-0.5 * x * x)
    if m_max >= 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for m in range(1, m_max):
        out[m + 1] = math.sqrt(2.0 / (m + 1)) * x * out[m] - math.sqrt(m / (m + 1.0)) * out[m - 1]
    return out


def scaled_hermite_function(alpha: tuple[int, ...], lam: float, xi: np.ndarray) -> np.ndarray:
    """Scaled Hermite function Phi_alpha^lam(xi) = |lam|^{n/4} Phi_alpha(|lam|^{1/2} xi).

    ``xi`` has shape ``(..., n)`` with ``n = len(alpha)``; the product over
    coordinates of the 1-D scaled Hermite functions is returned.
    """
    if lam == 0:
        raise ValueError("lam must be nonzero")
    xi = np.asarray(xi, dtype=float)
    n = len(alpha)
    if xi.shape[-1] != n:
        raise ValueError("last axis of xi must have length len(alpha)")
    s = math.sqrt(abs(lam))
    out = np.full(xi.shape[:-1], abs(lam) ** (n / 4.0))
    for i, a in enumerate(alpha):
        if a < 0:
            raise ValueError("multi-index entries must be >= 0")
        out = out * hermite_functions(a, s * xi[..., i])[a]
    return out
