"""Truncated operator-valued transforms: Weyl and group Fourier matrices.

The Schroedinger representation acts by

    pi_lambda(z, t) phi(xi) = e^{i lambda t} e^{i lambda (x xi + x y / 2)} phi(xi + y)

with z = x + i y.  Matrix elements are taken in the scaled Hermite basis
Phi_alpha^lambda; substituting u = sqrt(|lambda|) xi reduces every element to a
Gauss-Hermite integral in u whose scale factors cancel exactly:

    <pi_lambda(z,0) Phi_beta^lam, Phi_alpha^lam>
      = e^{i lam x y / 2} ∫ Phi_beta(u + sqrt(|lam|) y) Phi_alpha(u)
                            e^{i lam x u / sqrt(|lam|)} du.

The Weyl transform W_lambda(g) = ∫ g(z) pi_lambda(z, 0) dz is then assembled by
grid quadrature against these elements, all M x M entries at once.
"""

from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.hermite import hermgauss

from . import specfun
from .fan import RAY, FanPoint
from .field import GridSpec, ZField, central_transform, l2_norm_z


@dataclass(frozen=True)
class HermiteTruncation:
    """Finite section of L^2(R): Hermite basis indices 0..M-1."""

    M: int

    def __post_init__(self):
        if self.M < 1:
            raise ValueError("M must be >= 1")


@dataclass
class WeylMatrix:
    """entries[alpha, beta] = <W Phi_beta^lam, Phi_alpha^lam> for one lambda."""

    entries: np.ndarray
    lam: float
    M: int

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=complex)
        if self.entries.shape != (self.M, self.M):
            raise ValueError("entries must be M x M")
        if not np.all(np.isfinite(self.entries.view(float))):
            raise ValueError("entries must be finite")

    def hs_norm(self) -> float:
        return float(np.linalg.norm(self.entries))

    def column_block_hs_sq(self, k: int) -> float:
        """||W P_k||_HS^2, the squared mass of column k (rank-one P_k for n=1)."""
        if k >= self.M:
            raise ValueError("k must be below the truncation M")
        return float(np.sum(np.abs(self.entries[:, k]) ** 2))


@functools.lru_cache(maxsize=16)
def _hermgauss_cached(Q: int):
    u, w = hermgauss(Q)
    # fold the e^{u^2} compensation in so the rule integrates plain functions
    wmod = w * np.exp(u * u)
    u.flags.writeable = False
    wmod.flags.writeable = False
    return u, wmod


def _default_quad_order(M: int) -> int:
    return max(2 * M, 64)


def pi_matrix(lam: float, z: complex, M: int, quad_order: int | None = None) -> np.ndarray:
    """All matrix elements <pi_lambda(z,0) Phi_beta^lam, Phi_alpha^lam>, alpha, beta < M."""
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    Q = quad_order or _default_quad_order(M)
    u, w = _hermgauss_cached(Q)
    x, y = z.real, z.imag
    s = math.sqrt(abs(lam))
    ha = specfun.hermite_functions(M - 1, u)                      # (M, Q)
    hb = specfun.hermite_functions(M - 1, u + s * y)              # (M, Q)
    phase = np.exp(1j * lam * x * u / s) * w                      # (Q,)
    core = np.einsum("bq,aq,q->ab", hb, ha, phase)
    return math.cos(0.5 * lam * x * y) * core + 1j * math.sin(0.5 * lam * x * y) * core


def pi_matrix_element(lam: float, z: complex, alpha: int, beta: int,
                      quad_order: int | None = None) -> complex:
    if alpha < 0 or beta < 0:
        raise ValueError("orders must be >= 0")
    M = max(alpha, beta) + 1
    return complex(pi_matrix(lam, z, M, quad_order)[alpha, beta])


def weyl_transform(g: ZField, lam: float, M: int = 32,
                   quad_order: int | None = None) -> WeylMatrix:
    """W_lambda(g) = ∫ g(z) pi_lambda(z, 0) dz on the truncated Hermite basis.

    Vectorized over the grid: the x- and y-dependence of the matrix elements
    factor through two einsum contractions, so the cost is O(N^2 M Q) rather
    than O(N^2 M^2 Q).
    """
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    Q = quad_order or _default_quad_order(M)
    u, w = _hermgauss_cached(Q)
    s = math.sqrt(abs(lam))
    ax = g.grid.axis()
    X, Y = g.grid.mesh()
    ha = specfun.hermite_functions(M - 1, u)                                    # (M, Q)
    hb = np.stack([specfun.hermite_functions(M - 1, u + s * yv) for yv in ax])  # (N, M, Q)
    ex = np.exp(1j * lam * np.outer(ax, u) / s)                                 # (N_x, Q)
    gph = g.values * np.exp(0.5j * lam * X * Y)                                 # (N_x, N_y)
    t1 = np.einsum("xy,ybq->xbq", gph, hb)
    t2 = np.einsum("xbq,xq->bq", t1, ex)
    entries = np.einsum("bq,aq,q->ab", t2, ha, w) * g.grid.h ** 2
    return WeylMatrix(entries=entries, lam=lam, M=M)


def group_fourier(f, lam: float, M: int = 32, grid: GridSpec | None = None,
                  quad_order: int | None = None) -> WeylMatrix:
    """fhat(lambda) = W_lambda(f^lambda)."""
    return weyl_transform(central_transform(f, lam, grid), lam, M, quad_order)


def weyl_plancherel(g: ZField, lam: float, M: int = 32) -> tuple[float, float]:
    """(lhs, rhs) of ||W_lambda(g)||_HS^2 |lambda|^n = (2 pi)^n ||g||_2^2."""
    W = weyl_transform(g, lam, M)
    lhs = W.hs_norm() ** 2 * abs(lam)
    rhs = 2.0 * math.pi * l2_norm_z(g) ** 2
    return lhs, rhs


def projection_identity_residual(g: ZField, lam: float, k: int, M: int = 32) -> float:
    """Relative HS gap in (2pi)^{-n} |lam|^n W_lambda(g *_lam phi_k) = W_lambda(g) P_k."""
    from .twisted import phi_field, twisted_conv

    if k >= M:
        raise ValueError("k must be below the truncation M")
    conv = twisted_conv(g, phi_field(k, 1, lam, g.grid), lam)
    lhs = abs(lam) / (2.0 * math.pi) * weyl_transform(conv, lam, M).entries
    rhs = np.zeros_like(lhs)
    rhs[:, k] = weyl_transform(g, lam, M).entries[:, k]
    scale = float(np.linalg.norm(rhs))
    if scale == 0:
        return float(np.linalg.norm(lhs))
    return float(np.linalg.norm(lhs - rhs)) / scale


def hs_slice_relation(f, a: FanPoint, M: int = 32,
                      grid: GridSpec | None = None) -> tuple[float, float]:
    """(lhs, rhs) of ∫ |fhat(a, z)|^2 dz = (2 pi)^n |lam|^{-n} ||fhat(lambda) P_k||_HS^2.

    The left side is the forward Strichartz slice mass at a; the right side is
    the column-k mass of the truncated group Fourier matrix.
    """
    from .fan import FanGrid
    from .strichartz import forward

    if a.kind != RAY or a.k >= M:
        raise ValueError("need a ray point with k < M")
    lam = float(a.lam)
    fan = FanGrid(n=1, k_max=a.k, lambda_nodes=np.array([lam]),
                  lambda_weights=np.array([1.0]), tau_nodes=np.array([]))
    c = forward(f, fan, grid=grid)
    lhs = c.slice_sq_integral(a)
    W = group_fourier(f, lam, M, grid)
    rhs = 2.0 * math.pi / abs(lam) * W.column_block_hs_sq(a.k)
    return lhs, rhs


def weyl_matrix_to_csv(W: WeylMatrix, path) -> None:
    """CSV rows (row, col, re, im) with a JSON sidecar carrying lambda and M."""
    rows, cols = np.meshgrid(np.arange(W.M), np.arange(W.M), indexing="ij")
    data = np.column_stack([rows.ravel(), cols.ravel(),
                            W.entries.real.ravel(), W.entries.imag.ravel()])
    np.savetxt(path, data, delimiter=",", header="row,col,re,im", comments="",
               fmt=("%d", "%d", "%.17g", "%.17g"))
    with open(str(path) + ".json", "w") as fh:
        json.dump({"lambda": W.lam, "M": W.M}, fh)
