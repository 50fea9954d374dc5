"""Hecke-Bochner machinery on the n = 1 grid.

For f = P g with P(z) = z^p zbar^q (p q = 0, the harmonic monomials on C) and
radial g, the twisted convolution against phi_{k,lambda} factors through the
radial Laguerre machinery in the shifted dimension n' = 1 + p + q with a
shifted Laguerre index.  Two index conventions appear:

* the bare identity for g^lam *_lam phi uses index k - p when lam > 0 and
  k - q when lam < 0;
* the forward transform fhat(a, .) twists by -lambda, so for a ray with
  lam > 0 the shifted index is k - q - exactly the index the fan shift
  a(p,q) = (lambda, (2k + p - q + n)|lambda|) encodes.

Both are implemented as printed and cross-checked numerically; they are
consistent with each other once the -lambda twist of the forward transform is
taken into account.

Angular pairings are against S_{p,q}(e^{i theta}) = e^{i(p-q) theta}; the
circle coefficient below is 2 pi-normalized (the mean against e^{-i mu
theta}), and all constants in the residual formulas are stated for that
normalization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .fan import RAY, FanPoint
from .field import (GridSpec, RadialProfile, ZField, bilinear_sample,
                    central_transform, l2_norm_z, radial_quadrature)
from .twisted import laguerre_projection_radial, phi_field, twisted_conv

#: radial quadrature extent for dimension-shifted integrals (wider than the
#: default box so the r^{p+q} growth of harmonic factors is captured)
RADIAL_R_HECKE = 14.0


@dataclass(frozen=True)
class HarmonicDegree:
    """Bidegree (p, q) of a solid harmonic z^p zbar^q; on C this needs p q = 0."""

    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise ValueError("p, q must be >= 0")
        if self.p * self.q != 0:
            raise ValueError("z^p zbar^q is harmonic on C only when p = 0 or q = 0")

    @property
    def mu(self) -> int:
        return self.p - self.q


def harmonic_values(degree: HarmonicDegree, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    Z = X + 1j * Y
    return Z ** degree.p * np.conj(Z) ** degree.q


def a_shift(a: FanPoint, degree: HarmonicDegree) -> FanPoint | None:
    """The shifted fan point a(p,q) = (lambda, (2k + p - q + n)|lambda|) in dimension n + p + q.

    Returns None when the shifted Laguerre index k - q is negative (the
    annihilated case: phi with negative index is identically zero).
    """
    if a.kind != RAY:
        raise ValueError("a_shift acts on ray points")
    k_new = a.k - degree.q
    if k_new < 0:
        return None
    n_new = a.n + degree.p + degree.q
    return FanPoint.ray(k_new, a.lam, n_new)


def circle_coefficient(f, degree: HarmonicDegree, r: float, t: float,
                       grid: GridSpec | None = None, n_theta: int = 256) -> complex:
    """The 2 pi-normalized angular Fourier coefficient of f(r e^{i theta}, t).

    Equals (1/2pi) ∫ f(r e^{i theta}, t) e^{-i(p-q) theta} d theta; trapezoid
    on equispaced nodes, spectrally exact for trigonometric polynomials.
    """
    grid = grid or getattr(f, "grid", None)
    if grid is None:
        raise ValueError("a grid is needed to sample f")
    if r > grid.reach:
        raise ValueError("radius beyond the grid reach")
    if getattr(f, "u", None) is not None:
        zc = _angular_coefficient(f.u, degree.mu, r, n_theta)[0]
        return complex(zc * f.t_values(np.array([t]))[0])
    if isinstance(f, ZField):
        return complex(_angular_coefficient(f, degree.mu, r, n_theta)[0])
    raise ValueError("circle_coefficient needs a separable field or a ZField")


def _angular_coefficient(g: ZField, mu: int, r, n_theta: int = 256) -> np.ndarray:
    """(1/2pi) ∫ g(r e^{i theta}) e^{-i mu theta} d theta at each radius in r."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    theta = 2.0 * math.pi * np.arange(n_theta) / n_theta
    x = r[:, None] * np.cos(theta)[None, :]
    y = r[:, None] * np.sin(theta)[None, :]
    samples = bilinear_sample(g, x, y)
    return samples @ np.exp(-1j * mu * theta) / n_theta


def hecke_bochner_residual(g, degree: HarmonicDegree, k: int, lam: float,
                           grid: GridSpec | None = None) -> float:
    """Residual of the dimension-shift identity for f = P g against the radial path.

    LHS: (P g^lam) *_lam phi_{k,lam} on the 2-D engine.  RHS:
    (2 pi)^{-p-q} |lam|^{p+q} P(z) R_{k'}(lam, g) phi_{k',lam}^{n'-1}(z) with
    n' = 1 + p + q and k' = k - p for lam > 0, k - q for lam < 0.  When
    k' < 0 the RHS vanishes and the residual is |LHS| relative to the natural
    product scale ||g^lam|| ||phi_k|| (the annihilation check).
    """
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    if grid is None:
        from .strichartz import laguerre_adapted_grid
        base = getattr(g, "grid", None) or GridSpec(8.0, 64)
        grid = laguerre_adapted_grid(base, k + degree.p + degree.q, lam)
    p, q = degree.p, degree.q
    X, Y = grid.mesh()
    P = harmonic_values(degree, X, Y)
    g_c = central_transform(g, lam, grid)
    f_c = ZField(grid, P * g_c.values)
    pk = phi_field(k, 1, lam, grid)
    lhs = twisted_conv(f_c, pk, lam)
    k_new = k - p if lam > 0 else k - q
    n_new = 1 + p + q
    if k_new < 0:
        scale = l2_norm_z(f_c) * l2_norm_z(pk)
        return l2_norm_z(lhs) / scale
    r, w = radial_quadrature(RADIAL_R_HECKE, 240, n_new)
    prof = RadialProfile(r, w, g.radial_slice(lam, r), n_new)
    coeff = laguerre_projection_radial(prof, k_new, lam, n_new)
    rhs = ((2.0 * math.pi) ** (-(p + q)) * abs(lam) ** (p + q) * coeff
           * P * specfun.laguerre_function(k_new, n_new, lam, np.hypot(X, Y)))
    return l2_norm_z(ZField(grid, lhs.values - rhs)) / l2_norm_z(lhs)


def coefficient_theorem_residual(f, degree: HarmonicDegree, a: FanPoint,
                                 r_set: np.ndarray, grid: GridSpec | None = None,
                                 n_theta: int = 256) -> float:
    """Residual of the spherical-harmonic coefficient theorem on the forward slice.

    Tests, over the given radii,

        C_mu(fhat(a, .), r) = (2 pi)^{-p-q} (|lam| r)^{p+q}
                              G_{n'}(g_{p,q})(a(p,q)) phi_{k-q,lam}^{n'-1}(r)

    for lam > 0 (p and q swap roles for lam < 0), where C_mu is the
    2 pi-normalized angular coefficient and g_{p,q}(r) = r^{-p-q} C_mu(f(., .), r)
    is extracted from f itself at the central slice, so the two sides are
    computed through genuinely independent paths.  Returns the maximum over
    the r-set of |lhs - rhs| relative to the largest |lhs|.
    """
    if a.kind != RAY:
        raise ValueError("ray points only")
    lam = float(a.lam)
    p, q = (degree.p, degree.q) if lam > 0 else (degree.q, degree.p)
    if grid is None:
        from .strichartz import laguerre_adapted_grid
        base = getattr(f, "grid", None) or GridSpec(8.0, 64)
        grid = laguerre_adapted_grid(base, a.k + p + q, lam)
    r_set = np.asarray(r_set, dtype=float)
    central = central_transform(f, -lam, grid)
    pk = phi_field(a.k, 1, lam, grid)
    fhat = twisted_conv(central, pk, -lam)
    lhs = _angular_coefficient(fhat, degree.mu, r_set, n_theta)

    n_new = 1 + p + q
    k_new = a.k - q
    if k_new < 0:
        rhs = np.zeros_like(lhs)
    else:
        rq, wq = radial_quadrature(min(RADIAL_R_HECKE, grid.reach), 240, n_new)
        g_vals = _angular_coefficient(central, degree.mu, rq, n_theta) / rq ** (p + q)
        prof = RadialProfile(rq, wq, g_vals, n_new)
        coeff = laguerre_projection_radial(prof, k_new, lam, n_new)
        rhs = ((2.0 * math.pi) ** (-(p + q)) * (abs(lam) * r_set) ** (p + q)
               * coeff * specfun.laguerre_function(k_new, n_new, lam, r_set))
    scale = float(np.max(np.abs(lhs)))
    if scale == 0:
        return float(np.max(np.abs(rhs)))
    return float(np.max(np.abs(lhs - rhs))) / scale


def harmonic_decomposition_residual(f, degrees, r_set: np.ndarray,
                                    grid: GridSpec | None = None) -> float:
    """How well finitely many angular modes reconstruct the central slice of f.

    Returns the max relative sup-gap over the r-set between f^0(r e^{i theta})
    and the partial sum sum_mu e^{i mu theta} C_mu(f^0, r) over the listed
    degrees.  For separable f the same gap holds at every t-slice.
    """
    grid = grid or getattr(f, "grid", None)
    central = central_transform(f, 0.0, grid)
    theta = 2.0 * math.pi * np.arange(256) / 256
    r_set = np.asarray(r_set, dtype=float)
    x = r_set[:, None] * np.cos(theta)[None, :]
    y = r_set[:, None] * np.sin(theta)[None, :]
    target = bilinear_sample(central, x, y)
    recon = np.zeros_like(target)
    for d in degrees:
        cm = _angular_coefficient(central, d.mu, r_set)
        recon += cm[:, None] * np.exp(1j * d.mu * theta)[None, :]
    scale = float(np.max(np.abs(target))) or 1.0
    return float(np.max(np.abs(target - recon))) / scale
