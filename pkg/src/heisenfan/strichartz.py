"""Forward, normalized, and inverse transforms over the fan.

The forward transform assigns to each ray point a = (k, lambda) the z-slice

    fhat(a, z) = (f^{-lambda} *_{-lambda} phi_{k,lambda})(z)

and to each limit point (0, tau) the Bessel pairing of f^0.  Two engines
exist: the grid engine runs the twisted convolution directly, and the radial
engine factors each slice as a Laguerre coefficient times phi_{k,lambda},
which is exact for radial inputs and orders of magnitude faster.  Inversion
integrates the slices against the matrix coefficients e_a over the
nu-weighted fan cells; the limiting ray carries no nu-mass and contributes
nothing.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import specfun
from .fan import LIMIT, RAY, FanGrid, FanPoint, binom_ratio, normalization
from .field import (GridSpec, RadialProfile, ZField, central_transform,
                    l2_norm_h, l2_norm_z, radial_quadrature, surface_area,
                    zfield_from_callable, zfield_to_csv, zfield_from_csv)
from .twisted import phi_field, twisted_conv

#: slices whose norm falls below this fraction of the largest slice norm are
#: treated as numerically zero by the projector check
ZERO_SLICE_THRESHOLD = 1e-8

RADIAL_R = 12.0
RADIAL_M = 240


def laguerre_adapted_grid(base: GridSpec, k: int, lam: float,
                          margin: float = 4.0, h_max: float = 0.25) -> GridSpec:
    """Enlarge a grid so phi_{k,lam} decays inside it.

    The Laguerre function oscillates out to roughly r = sqrt(2(4k+2)/|lam|)
    before its Gaussian tail takes over; identity checks at large k or small
    |lam| need the box to contain that region plus a margin, otherwise the
    truncated reads dominate the residual.
    """
    r_star = math.sqrt(2.0 * (4 * k + 2) / abs(lam))
    # the Gaussian tail exp(-|lam| r^2 / 4) widens like 1/sqrt(|lam|), so a
    # fixed margin under-resolves small |lam| at low k
    L = max(base.L, math.ceil(r_star + max(margin, 5.0 / math.sqrt(abs(lam)))))
    h = min(base.h, h_max)
    N = int(math.ceil(2.0 * L / h / 16.0)) * 16
    return GridSpec(L=float(L), N=N)


@dataclass
class StrichartzCoefficients:
    """The transform of one function over a FanGrid.

    Ray slices are held either as explicit ZFields (grid storage) or, for
    radial inputs, as scalar Laguerre coefficients indexed [k, lambda-node]
    with slices synthesized on demand (radial storage).  Limit slices follow
    the same scheme with one coefficient per tau node.
    """

    fan: FanGrid
    grid: GridSpec
    n: int = 1
    normalized: bool = False
    ray_fields: dict = field(default_factory=dict, repr=False)
    limit_fields: dict = field(default_factory=dict, repr=False)
    ray_coeffs: np.ndarray | None = field(default=None, repr=False)
    limit_coeffs: np.ndarray | None = field(default=None, repr=False)

    @property
    def is_radial(self) -> bool:
        return self.ray_coeffs is not None

    def _lam_index(self, lam: float) -> int:
        j = int(np.argmin(np.abs(self.fan.lambda_nodes - lam)))
        if abs(self.fan.lambda_nodes[j] - lam) > 1e-12:
            raise KeyError(f"lambda = {lam} is not a node of this fan grid")
        return j

    def ray_coefficient(self, a: FanPoint) -> complex:
        if not self.is_radial:
            raise ValueError("coefficients available in radial storage only")
        return complex(self.ray_coeffs[a.k, self._lam_index(a.lam)])

    def slice(self, a: FanPoint) -> ZField:
        """The z-slice fhat(a, .) as a field on the shared grid."""
        if a.kind == RAY:
            if not self.is_radial:
                return self.ray_fields[a]
            c = self.ray_coeffs[a.k, self._lam_index(a.lam)]
            vals = c * specfun.laguerre_function(a.k, self.n, a.lam, self.grid.radius())
            return ZField(self.grid, vals, lambda_tag=a.lam)
        if not self.is_radial:
            return self.limit_fields[a]
        j = int(np.argmin(np.abs(self.fan.tau_nodes - a.tau)))
        c = self.limit_coeffs[j]
        vals = c * specfun.bessel_ratio(self.n, math.sqrt(a.tau) * self.grid.radius())
        return ZField(self.grid, vals, lambda_tag=0.0)

    def slice_sq_integral(self, a: FanPoint) -> float:
        """∫ |fhat(a, z)|^2 dz, analytic in radial storage, quadrature otherwise."""
        if a.kind == RAY and self.is_radial:
            c = self.ray_coeffs[a.k, self._lam_index(a.lam)]
            return float(abs(c) ** 2) * phi_sq_norm(a.k, self.n, a.lam)
        return l2_norm_z(self.slice(a)) ** 2

    def ray_slice_norms(self) -> np.ndarray:
        """L^2 norms of all ray slices, indexed [k, lambda-node]."""
        out = np.empty((self.fan.k_max + 1, len(self.fan.lambda_nodes)))
        for k in range(self.fan.k_max + 1):
            for j, lam in enumerate(self.fan.lambda_nodes):
                a = FanPoint.ray(k, float(lam), self.n)
                out[k, j] = math.sqrt(self.slice_sq_integral(a))
        return out


def phi_sq_norm(k: int, n: int, lam: float) -> float:
    """∫ |phi_{k,lam}|^2 dz over C^n = (2 pi)^n |lam|^{-n} binom(k+n-1, k)."""
    return (2.0 * math.pi / abs(lam)) ** n * binom_ratio(k, n)


def _radial_input_profile(f, lam: float) -> RadialProfile:
    r, w = radial_quadrature(RADIAL_R, RADIAL_M, f.n)
    return RadialProfile(r, w, f.radial_slice(lam, r), f.n)


def forward(f, fan: FanGrid, grid: GridSpec | None = None, engine: str = "auto") -> StrichartzCoefficients:
    """The transform of f over every ray and limit point of the fan grid."""
    if engine == "auto":
        engine = "radial" if getattr(f, "is_radial", False) else "grid"
    if engine == "radial":
        return _forward_radial(f, fan, grid)
    if engine == "grid":
        return _forward_grid(f, fan, grid)
    raise ValueError(f"unknown engine {engine!r}")


def _forward_radial(f, fan: FanGrid, grid: GridSpec | None) -> StrichartzCoefficients:
    from .twisted import laguerre_projection_radial_stack

    grid = grid or getattr(f, "grid", None) or GridSpec(8.0, 64)
    n = f.n
    coeffs = np.empty((fan.k_max + 1, len(fan.lambda_nodes)), dtype=complex)
    for j, lam in enumerate(fan.lambda_nodes):
        prof = _radial_input_profile(f, -float(lam))
        coeffs[:, j] = laguerre_projection_radial_stack(prof, fan.k_max, float(lam), n)
    # limit ray: for radial f the slice factors as (Hankel coefficient) x
    # bessel_ratio kernel, since the kernel's plane Fourier transform is the
    # circle measure of radius sqrt(tau)
    prof0 = _radial_input_profile(f, 0.0)
    lcoeffs = np.empty(len(fan.tau_nodes), dtype=complex)
    for i, tau in enumerate(fan.tau_nodes):
        chi = specfun.bessel_ratio(n, math.sqrt(float(tau)) * prof0.r_nodes)
        lcoeffs[i] = surface_area(n) * complex(np.sum(prof0.weights * prof0.values * chi))
    return StrichartzCoefficients(fan=fan, grid=grid, n=n,
                                  ray_coeffs=coeffs, limit_coeffs=lcoeffs)


def _forward_grid(f, fan: FanGrid, grid: GridSpec | None) -> StrichartzCoefficients:
    grid = grid or f.grid
    if fan.n != 1:
        raise ValueError("the grid engine requires n = 1")
    rays = {}
    for j, lam in enumerate(fan.lambda_nodes):
        lam = float(lam)
        central = central_transform(f, -lam, grid)
        phis = specfun.laguerre_function_stack(fan.k_max, 1, lam, grid.radius())
        for k in range(fan.k_max + 1):
            pk = ZField(grid, phis[k].astype(complex))
            rays[FanPoint.ray(k, lam, 1)] = twisted_conv(central, pk, -lam)
    limits = {}
    f0 = central_transform(f, 0.0, grid)
    for tau in fan.tau_nodes:
        tau = float(tau)
        ker = zfield_from_callable(
            grid, lambda X, Y: specfun.bessel_ratio(1, math.sqrt(tau) * np.hypot(X, Y)))
        limits[FanPoint.limit(tau, 1)] = twisted_conv(f0, ker, 0.0)
    return StrichartzCoefficients(fan=fan, grid=grid, n=1,
                                  ray_fields=rays, limit_fields=limits)


def normalize(c: StrichartzCoefficients) -> StrichartzCoefficients:
    """Scale each ray slice by k!(n-1)!/(k+n-1)!; limit slices are unchanged."""
    if c.normalized:
        raise ValueError("coefficients are already normalized")
    scale = np.array([normalization(k, c.n) for k in range(c.fan.k_max + 1)])
    if c.is_radial:
        return StrichartzCoefficients(
            fan=c.fan, grid=c.grid, n=c.n, normalized=True,
            ray_coeffs=c.ray_coeffs * scale[:, None], limit_coeffs=c.limit_coeffs.copy())
    rays = {a: ZField(s.grid, scale[a.k] * s.values, s.lambda_tag)
            for a, s in c.ray_fields.items()}
    return StrichartzCoefficients(fan=c.fan, grid=c.grid, n=c.n, normalized=True,
                                  ray_fields=rays, limit_fields=dict(c.limit_fields))


def inverse(c: StrichartzCoefficients, eval_points: np.ndarray) -> np.ndarray:
    """The inversion integral at the requested (x, y, t) points.

    For each ray cell the integrand is fhat(a, w) e_a((-w, 0)(z, t)) with

        e_a((-w, 0)(z, t)) = e^{i lam (t - Im(w zbar)/2)} phi_{k,lam}(z - w),

    summed over the grid in w and over fan cells with nu-weights.
    """
    if c.normalized:
        raise ValueError("inversion consumes unnormalized coefficients")
    if c.n != 1:
        raise ValueError("inversion evaluates on the n = 1 pipeline")
    pts = np.asarray(eval_points, dtype=float).reshape(-1, 3)
    grid = c.grid
    X, Y = grid.mesh()
    h2 = grid.h ** 2
    out = np.zeros(len(pts), dtype=complex)
    kmax = c.fan.k_max
    for j, lam in enumerate(c.fan.lambda_nodes):
        lam = float(lam)
        w_cell = float(c.fan.lambda_weights[j])
        slices = np.empty((kmax + 1, grid.N, grid.N), dtype=complex)
        for k in range(kmax + 1):
            slices[k] = c.slice(FanPoint.ray(k, lam, 1)).values
        for p, (zx, zy, t) in enumerate(pts):
            # Im(w zbar) = y_w x_z - x_w y_z
            phase = np.exp(1j * lam * (t - 0.5 * (Y * zx - X * zy)))
            rr = np.hypot(zx - X, zy - Y)
            phis = specfun.laguerre_function_stack(kmax, 1, lam, rr)
            out[p] += w_cell * h2 * np.sum(np.einsum("kij,kij->ij", slices, phis) * phase)
    return out


def plancherel_pair(f, c: StrichartzCoefficients) -> tuple[float, float, float]:
    """(lhs, rhs, tail): ||f||^2 vs the nu-weighted slice masses; tail = top-k share."""
    lhs = l2_norm_h(f) ** 2
    rhs = 0.0
    tail = 0.0
    for k in range(c.fan.k_max + 1):
        term = 0.0
        for j, lam in enumerate(c.fan.lambda_nodes):
            a = FanPoint.ray(k, float(lam), c.n)
            term += float(c.fan.lambda_weights[j]) * c.slice_sq_integral(a)
        rhs += term
        if k == c.fan.k_max:
            tail = term / rhs if rhs > 0 else 0.0
    return lhs, rhs, tail


def projector_residual(c: StrichartzCoefficients, a: FanPoint) -> float:
    """Relative residual of the ray projector identity on the slice at a.

    Applies P(g) = (2 pi)^{-n} |lam|^n (phi_{k,lam} *_lam g), which reproduces
    every genuine transform slice for either sign of lambda.  Slices whose
    norm is below ZERO_SLICE_THRESHOLD times the largest slice norm are
    reported as 0: their values sit at the quadrature noise floor and carry no
    Plancherel mass at working precision.
    """
    if a.kind != RAY:
        raise ValueError("the projector is defined on ray points")
    norm = math.sqrt(c.slice_sq_integral(a))
    if norm <= ZERO_SLICE_THRESHOLD * float(np.max(c.ray_slice_norms())):
        return 0.0
    if c.is_radial:
        return _projector_residual_radial(c, a, norm)
    if c.n != 1:
        raise ValueError("sampled projector residuals run on the n = 1 grid pipeline")
    s = c.slice(a)
    proj = apply_projector(s, a.k, float(a.lam))
    return l2_norm_z(proj - s) / norm


def _projector_residual_radial(c: StrichartzCoefficients, a: FanPoint,
                               norm: float) -> float:
    """Projector residual of a radial-storage slice, in the radial picture.

    The slice is re-expanded over the Laguerre functions on a quadrature wide
    enough to cover its support; the residual collects all mass landing away
    from index k plus the defect of the k-th coefficient itself.
    """
    lam = float(a.lam)
    n = c.n
    R = max(RADIAL_R, math.sqrt(2.0 * (4 * a.k + 2) / abs(lam)) + 4.0)
    m = max(RADIAL_M, int(24 * R))
    r, w = radial_quadrature(R, m, n)
    from .twisted import laguerre_projection_radial_stack
    coeff = c.ray_coeffs[a.k, c._lam_index(lam)]
    prof = RadialProfile(r, w, coeff * specfun.laguerre_function(a.k, n, lam, r), n)
    k_hi = max(c.fan.k_max, a.k + 8)
    hats = laguerre_projection_radial_stack(prof, k_hi, lam, n)
    hats *= (abs(lam) / (2.0 * math.pi)) ** n
    err_sq = 0.0
    for j in range(k_hi + 1):
        want = coeff if j == a.k else 0.0
        err_sq += abs(hats[j] - want) ** 2 * phi_sq_norm(j, n, lam)
    return math.sqrt(err_sq) / norm


def apply_projector(s: ZField, k: int, lam: float) -> ZField:
    pk = phi_field(k, 1, lam, s.grid)
    out = twisted_conv(pk, s, lam)
    return ZField(s.grid, abs(lam) / (2.0 * math.pi) * out.values, s.lambda_tag)


def synthesize(c: StrichartzCoefficients, eval_points: np.ndarray,
               projector_tol: float = 1e-2) -> np.ndarray:
    """Evaluate the synthesis integral after checking membership in the range.

    Every ray slice carrying mass must satisfy the projector identity within
    ``projector_tol``; inputs failing it are rejected with a diagnostic, since
    the inversion formula only reproduces functions from coefficients lying in
    the projector-invariant subspace.
    """
    bad = []
    for a in c.fan.ray_points():
        res = projector_residual(c, a)
        if res > projector_tol:
            bad.append((a.k, a.lam, res))
    if bad:
        worst = max(bad, key=lambda kv: kv[2])
        raise ValueError(
            f"{len(bad)} slice(s) fail the projector check; worst: "
            f"k={worst[0]}, lambda={worst[1]:+.4f}, residual={worst[2]:.3e} "
            f"> tolerance {projector_tol:.1e}")
    return inverse(c, eval_points)


# ---------------------------------------------------------------------------
# serialization


def _ray_csv_name(a: FanPoint) -> str:
    return f"ray_k{a.k}_lam{a.lam:+.4f}.csv"


def _limit_csv_name(a: FanPoint) -> str:
    return f"limit_tau{a.tau:.4f}.csv"


def _sha256(path) -> str:
    hsh = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            hsh.update(chunk)
    return hsh.hexdigest()


def save_coefficients(c: StrichartzCoefficients, dirpath) -> None:
    """Write fan.json, one CSV per slice, and a manifest with checksums."""
    os.makedirs(dirpath, exist_ok=True)
    with open(os.path.join(dirpath, "fan.json"), "w") as fh:
        fh.write(c.fan.to_json())
    names = []
    for a in c.fan.ray_points():
        name = _ray_csv_name(a)
        zfield_to_csv(c.slice(a), os.path.join(dirpath, name))
        names.append(name)
    for a in c.fan.limit_points():
        name = _limit_csv_name(a)
        zfield_to_csv(c.slice(a), os.path.join(dirpath, name))
        names.append(name)
    manifest = {
        "grid": {"L": c.grid.L, "N": c.grid.N, "n": c.n},
        "normalized": c.normalized,
        "checksums": {name: _sha256(os.path.join(dirpath, name)) for name in ["fan.json"] + names},
    }
    with open(os.path.join(dirpath, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)


def load_coefficients(dirpath) -> StrichartzCoefficients:
    with open(os.path.join(dirpath, "manifest.json")) as fh:
        manifest = json.load(fh)
    for name, digest in manifest["checksums"].items():
        actual = _sha256(os.path.join(dirpath, name))
        if actual != digest:
            raise ValueError(f"checksum mismatch for {name}")
    with open(os.path.join(dirpath, "fan.json")) as fh:
        fan = FanGrid.from_json(fh.read())
    g = manifest["grid"]
    grid = GridSpec(L=g["L"], N=g["N"])
    c = StrichartzCoefficients(fan=fan, grid=grid, n=g["n"],
                               normalized=manifest["normalized"])
    for a in fan.ray_points():
        zf = zfield_from_csv(os.path.join(dirpath, _ray_csv_name(a)))
        zf.lambda_tag = a.lam
        c.ray_fields[a] = zf
    for a in fan.limit_points():
        c.limit_fields[a] = zfield_from_csv(os.path.join(dirpath, _limit_csv_name(a)))
    return c
