"""The commutative (radial) theory: spherical functions and the Gelfand transform.

For radial functions the full transform factors through the scalar spherical
transform: on rays, fhat(a, z) = Gf(a) phi_{k,lambda}(z), where Gf(a) is a
Laguerre coefficient of the central slice; on the limiting ray the pairing is
against the Bessel spherical function chi_tau.  The heat kernel of the
sublaplacian is *defined* here by its Laguerre series - its Gelfand transform
is e^{-b(2k+n)|lambda|} by construction, which round-trip tests then recover
numerically from the profile alone.

Sign convention: on a ray a = (k, lambda) the Gelfand transform is the k-th
Laguerre coefficient of the central slice at -lambda, matching the forward
transform fhat(a, .) = f^{-lambda} *_{-lambda} phi_{k,lambda}, so that the
radial factorization holds as an identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import specfun
from .fan import RAY, FanPoint, binom_ratio, normalization
from .field import (GridSpec, RadialProfile, ZField, central_transform,
                    l2_norm_z, radial_quadrature, surface_area)
from .strichartz import RADIAL_M, RADIAL_R
from .twisted import laguerre_projection_radial, phi_field, twisted_conv


def spherical_function(a: FanPoint, z: complex, t: float):
    """The bounded spherical function at a, evaluated at (z, t).

    Rays: e~_a(z,t) = normalization(k,n) e^{i lambda t} phi_{k,lambda}(|z|);
    limit ray: chi_tau(z) = bessel_ratio(n, sqrt(tau)|z|), independent of t.
    """
    r = abs(z)
    if a.kind == RAY:
        val = normalization(a.k, a.n) * specfun.laguerre_function(a.k, a.n, a.lam, np.asarray(r))
        return np.exp(1j * a.lam * np.asarray(t)) * val
    return specfun.bessel_ratio(a.n, math.sqrt(a.tau) * np.asarray(r)) + 0.0j


def gelfand_transform(f, a: FanPoint) -> complex:
    """G f(a) for radial f, via 1-D Laguerre/Hankel quadrature."""
    if not getattr(f, "is_radial", False):
        raise ValueError("the Gelfand transform is defined for radial functions")
    if a.kind == RAY:
        # widen the quadrature window with the support of phi_k, which grows
        # like sqrt(2 (4k+2) / |lambda|)
        R = max(RADIAL_R, math.sqrt(2.0 * (4 * a.k + 2) / abs(a.lam)) + 4.0)
        r, w = radial_quadrature(R, max(RADIAL_M, int(24 * R)), f.n)
        prof = RadialProfile(r, w, f.radial_slice(-a.lam, r), f.n)
        return laguerre_projection_radial(prof, a.k, a.lam, f.n)
    r, w = radial_quadrature(RADIAL_R, RADIAL_M, f.n)
    vals = f.radial_slice(0.0, r)
    chi = specfun.bessel_ratio(f.n, math.sqrt(a.tau) * r)
    return surface_area(f.n) * complex(np.sum(w * vals * chi))


def heat_kernel_profile(b: float, lam: float, K: int, n: int,
                        r_nodes: np.ndarray | None = None,
                        weights: np.ndarray | None = None) -> RadialProfile:
    """The central slice p_b^lambda as a K-truncated Laguerre series.

    p_b^lambda(r) = (2 pi)^{-n} |lam|^n sum_k e^{-b(2k+n)|lam|} phi_{k,lam}(r).
    The returned profile carries meta["tail_bound"], a geometric bound on the
    dropped terms; when it exceeds 1e-10 of the leading term a warning string
    is attached instead of silently returning a low-accuracy profile.
    """
    if b <= 0:
        raise ValueError("b must be positive")
    if lam == 0:
        raise ValueError("lambda must be nonzero; the heat kernel profile is per-ray")
    if r_nodes is None:
        r_nodes, weights = radial_quadrature(RADIAL_R, RADIAL_M, n)
    phis = specfun.laguerre_function_stack(K, n, lam, np.asarray(r_nodes, dtype=float))
    decay = np.exp(-b * (2 * np.arange(K + 1) + n) * abs(lam))
    pref = (abs(lam) / (2.0 * math.pi)) ** n
    vals = pref * (decay @ phis)
    # |phi_k| <= binom(k+n-1,k) <= (k+1)^{n-1}; bound the tail geometrically
    ratio = math.exp(-2.0 * b * abs(lam)) * ((K + 2) / (K + 1)) ** (n - 1)
    head = math.exp(-b * (2 * K + 2 + n) * abs(lam)) * (K + 2) ** (n - 1)
    tail = pref * head / max(1.0 - ratio, 1e-12)
    meta = {"tail_bound": tail}
    lead = pref * math.exp(-b * n * abs(lam))
    if tail > 1e-10 * lead:
        meta["warning"] = f"K={K} leaves tail bound {tail:.3e} (leading term {lead:.3e})"
    if weights is None:
        _, weights = radial_quadrature(RADIAL_R, RADIAL_M, n)
    return RadialProfile(np.asarray(r_nodes, dtype=float), np.asarray(weights, dtype=float),
                         vals, n, meta=meta)


@dataclass
class HeatKernel:
    """The heat kernel p_b of the sublaplacian, represented spectrally.

    Radial by construction; supports the radial pipeline in any dimension and
    synthesizes central slices on demand from the Laguerre series.
    """

    b: float
    n: int = 1
    K: int = 96
    grid: GridSpec | None = None

    def __post_init__(self):
        if self.b <= 0:
            raise ValueError("b must be positive")

    @property
    def is_radial(self) -> bool:
        return True

    def radial_slice(self, lam: float, r_nodes: np.ndarray) -> np.ndarray:
        r_nodes = np.asarray(r_nodes, dtype=float)
        if lam == 0:
            # lambda -> 0 limit of the series: the Riemann sum over
            # tau = (2k+n)|lam| converges to the Euclidean heat kernel on
            # C^n at time b, which is (4 pi b)^{-n} e^{-r^2/(4b)}
            return ((4.0 * math.pi * self.b) ** -self.n
                    * np.exp(-r_nodes ** 2 / (4.0 * self.b)) + 0.0j)
        phis = specfun.laguerre_function_stack(self.K, self.n, lam, r_nodes)
        decay = np.exp(-self.b * (2 * np.arange(self.K + 1) + self.n) * abs(lam))
        return (abs(lam) / (2.0 * math.pi)) ** self.n * (decay @ phis) + 0.0j

    def central(self, lam: float, grid: GridSpec | None = None) -> ZField:
        grid = grid or self.grid
        if grid is None:
            raise ValueError("a grid is required to materialize the central slice")
        vals = self.radial_slice(lam, grid.radius().ravel()).reshape(grid.N, grid.N)
        return ZField(grid, vals, lambda_tag=lam)

    def known_transform(self, a: FanPoint) -> float:
        """The exact Gelfand transform e^{-b tau(a)} on rays (and by continuity on the limit ray)."""
        return math.exp(-self.b * a.tau)


def radial_factorization_residual(f, a: FanPoint, grid: GridSpec | None = None) -> float:
    """Relative L^2 gap between the 2-D forward slice and Gf(a) phi_{k,lambda}.

    The slice is recomputed through the full twisted-convolution engine, so the
    residual measures how well the factorization (and nothing else) holds.
    """
    if a.kind != RAY:
        raise ValueError("the factorization is a ray-point statement")
    if grid is None:
        grid = getattr(f, "grid", None) or GridSpec(8.0, 64)
    lam = float(a.lam)
    central = central_transform(f, -lam, grid)
    pk = phi_field(a.k, 1, lam, grid)
    slice_2d = twisted_conv(central, pk, -lam)
    target = gelfand_transform(f, a) * pk.values
    scale = l2_norm_z(slice_2d)
    if scale == 0:
        return 0.0
    return l2_norm_z(ZField(grid, slice_2d.values - target)) / scale


def multiplier_residual(f, g, a: FanPoint, grid: GridSpec | None = None) -> float:
    """Residual of (f * g)hat(a, .) = Gg(a) fhat(a, .) for radial g.

    The group convolution enters through its central slices:
    (f * g)^{-lam} = f^{-lam} *_{-lam} g^{-lam}, then both sides are pushed
    through the same forward convolution against phi_{k,lambda}.
    """
    if a.kind != RAY:
        raise ValueError("the multiplier property is a ray-point statement")
    if grid is None:
        grid = getattr(f, "grid", None) or GridSpec(8.0, 64)
    lam = float(a.lam)
    f_c = central_transform(f, -lam, grid)
    g_c = central_transform(g, -lam, grid)
    pk = phi_field(a.k, 1, lam, grid)
    lhs = twisted_conv(twisted_conv(f_c, g_c, -lam), pk, -lam)
    rhs = gelfand_transform(g, a) * twisted_conv(f_c, pk, -lam).values
    scale = l2_norm_z(lhs)
    if scale == 0:
        return 0.0
    return l2_norm_z(ZField(grid, lhs.values - rhs)) / scale


def convolution_gelfand(f, g, a: FanPoint, grid: GridSpec | None = None) -> complex:
    """G(f * g)(a) computed through the 2-D engine (homomorphism cross-check)."""
    if a.kind != RAY:
        raise ValueError("ray points only")
    if grid is None:
        grid = getattr(f, "grid", None) or GridSpec(8.0, 64)
    lam = float(a.lam)
    conv = twisted_conv(central_transform(f, -lam, grid),
                        central_transform(g, -lam, grid), -lam)
    # R_k(conv) = <conv, phi_k> / binom(k+n-1, k); the plain grid sum keeps
    # the spectral accuracy that an angular re-sampling would destroy
    pk = phi_field(a.k, 1, lam, grid)
    inner = np.sum(conv.values * pk.values) * grid.h ** 2
    return complex(inner) / binom_ratio(a.k, 1)
