"""Discretized functions on C (z-grids) and on the full group (z, t).

The z-grid is uniform on [-L, L)^2 with spacing h = 2L/N and carries
trapezoidal product quadrature, which is spectrally accurate for the smooth,
rapidly decaying fields used throughout.  Functions of (z, t) come in two
flavors: separable products u(z) v(t) with an analytic central transform
v_hat, and fully sampled (z, t)-arrays integrated numerically in t.  Radial
profiles hold Gauss-Legendre data on [0, R] with the surface factor r^{2n-1}
folded into the weights.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss


@dataclass(frozen=True)
class GridSpec:
    """Uniform n=1 z-grid on [-L, L)^2 with N points per axis."""

    L: float
    N: int
    n: int = 1

    def __post_init__(self):
        if self.L <= 0:
            raise ValueError("half-width L must be positive")
        if self.N < 8:
            raise ValueError("N must be >= 8")
        if self.n != 1:
            raise ValueError("sampled z-grids support n=1 only; use the radial pipeline")

    @property
    def h(self) -> float:
        return 2.0 * self.L / self.N

    def axis(self) -> np.ndarray:
        return _grid_axis(self.L, self.N)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return _grid_mesh(self.L, self.N)

    def radius(self) -> np.ndarray:
        X, Y = self.mesh()
        return np.hypot(X, Y)

    @property
    def reach(self) -> float:
        """Largest radius fully surrounded by grid points (bilinear-safe)."""
        return self.L - self.h


@functools.lru_cache(maxsize=64)
def _grid_axis(L: float, N: int) -> np.ndarray:
    ax = -L + (2.0 * L / N) * np.arange(N)
    ax.flags.writeable = False
    return ax


@functools.lru_cache(maxsize=64)
def _grid_mesh(L: float, N: int):
    X, Y = np.meshgrid(_grid_axis(L, N), _grid_axis(L, N), indexing="ij")
    X.flags.writeable = False
    Y.flags.writeable = False
    return X, Y


@dataclass
class ZField:
    """Complex samples of a function of z on a GridSpec."""

    grid: GridSpec
    values: np.ndarray
    lambda_tag: float | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.grid.N, self.grid.N):
            raise ValueError("values shape must match the grid")
        if not np.all(np.isfinite(self.values.view(float))):
            raise ValueError("field values must be finite")

    def __add__(self, other: "ZField") -> "ZField":
        _check_same_grid(self, other)
        return ZField(self.grid, self.values + other.values)

    def __sub__(self, other: "ZField") -> "ZField":
        _check_same_grid(self, other)
        return ZField(self.grid, self.values - other.values)

    def __mul__(self, c) -> "ZField":
        return ZField(self.grid, self.values * c, self.lambda_tag)

    __rmul__ = __mul__


def _check_same_grid(f: ZField, g: ZField) -> None:
    if f.grid != g.grid:
        raise ValueError("fields live on different grids")


def zfield_from_callable(grid: GridSpec, fn, lambda_tag: float | None = None) -> ZField:
    X, Y = grid.mesh()
    return ZField(grid, np.asarray(fn(X, Y), dtype=complex), lambda_tag)


def integrate_z(g: ZField) -> complex:
    """Trapezoidal integral of g over the truncated grid."""
    return complex(np.sum(g.values) * g.grid.h ** 2)


def l2_norm_z(g: ZField) -> float:
    return math.sqrt(float(np.sum(np.abs(g.values) ** 2)) * g.grid.h ** 2)


def l1_norm_z(g: ZField) -> float:
    return float(np.sum(np.abs(g.values)) * g.grid.h ** 2)


def inner_z(f: ZField, g: ZField) -> complex:
    """L^2 inner product ∫ f conj(g) dz."""
    _check_same_grid(f, g)
    return complex(np.sum(f.values * np.conj(g.values)) * f.grid.h ** 2)


@functools.lru_cache(maxsize=32)
def _leggauss_cached(m: int):
    x, w = leggauss(m)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


def t_quadrature(T: float, m: int = 400) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights on [-T, T] for central-variable integrals."""
    x, w = _leggauss_cached(m)
    return T * x, T * w


@dataclass
class SeparableHField:
    """f(z, t) = u(z) v(t) with the central transform of v supplied analytically.

    ``v_hat(lam)`` must equal the integral of e^{i lam t} v(t) dt.  When the
    z-part is radial, pass ``u0`` (the radial profile callable) to unlock the
    fast radial pipeline; ``n`` may then exceed 1.
    """

    grid: GridSpec | None
    u: ZField | None
    v: callable
    v_hat: callable
    t_half_width: float
    u0: callable | None = None
    uz: callable | None = None
    n: int = 1

    def __post_init__(self):
        if self.u is None and self.u0 is None and self.uz is None:
            raise ValueError("need a z-profile: grid samples u, radial u0, or uz(X, Y)")
        if self.u is not None and self.grid is None:
            self.grid = self.u.grid
        if self.n > 1 and self.u0 is None:
            raise ValueError("n >= 2 requires the radial pipeline (u0)")

    @property
    def is_radial(self) -> bool:
        return self.u0 is not None

    def central(self, lam: float, grid: GridSpec | None = None) -> ZField:
        g = grid or self.grid
        if self.u is not None and g == self.grid:
            u = self.u
        elif self.u0 is not None:
            u = zfield_from_callable(g, lambda X, Y: self.u0(np.hypot(X, Y)))
        elif self.uz is not None:
            u = zfield_from_callable(g, self.uz)
        else:
            raise ValueError("no z-samples available on the requested grid")
        return ZField(u.grid, u.values * self.v_hat(lam), lambda_tag=lam)

    def radial_slice(self, lam: float, r_nodes: np.ndarray) -> np.ndarray:
        if self.u0 is None:
            raise ValueError("field is not known to be radial")
        return self.u0(np.asarray(r_nodes, dtype=float)) * self.v_hat(lam)

    def t_values(self, t: np.ndarray) -> np.ndarray:
        return np.asarray(self.v(np.asarray(t, dtype=float)))

    def point_values(self, points: np.ndarray) -> np.ndarray:
        """Evaluate f at rows (x, y, t), preferring the exact radial profile."""
        pts = np.asarray(points, dtype=float).reshape(-1, 3)
        if self.u0 is not None:
            uz = self.u0(np.hypot(pts[:, 0], pts[:, 1]))
        elif self.uz is not None:
            uz = self.uz(pts[:, 0], pts[:, 1])
        else:
            uz = bilinear_sample(self.u, pts[:, 0], pts[:, 1])
        return uz * self.t_values(pts[:, 2])


@dataclass
class SampledHField:
    """f(z, t) sampled on grid x uniform t-axis of half-width T."""

    grid: GridSpec
    t_half_width: float
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        N = self.grid.N
        if self.values.ndim != 3 or self.values.shape[:2] != (N, N):
            raise ValueError("values must be (N, N, N_t)")

    @property
    def n(self) -> int:
        return 1

    @property
    def is_radial(self) -> bool:
        return False

    @property
    def t_axis(self) -> np.ndarray:
        Nt = self.values.shape[2]
        return -self.t_half_width + (2.0 * self.t_half_width / Nt) * np.arange(Nt)

    def central(self, lam: float, grid: GridSpec | None = None) -> ZField:
        if grid is not None and grid != self.grid:
            raise ValueError("sampled fields cannot be re-gridded")
        t = self.t_axis
        dt = 2.0 * self.t_half_width / self.values.shape[2]
        if abs(lam) > math.pi / dt:
            raise ValueError(f"|lambda| = {abs(lam)} beyond the t-grid band limit {math.pi / dt:.3g}")
        phases = np.exp(1j * lam * t)
        return ZField(self.grid, self.values @ phases * dt, lambda_tag=lam)


def central_transform(f, lam: float, grid: GridSpec | None = None) -> ZField:
    """The central-variable transform f^lam(z) = ∫ e^{i lam t} f(z,t) dt."""
    return f.central(lam, grid)


def l2_norm_h(f) -> float:
    """L^2 norm over the group; separable fields factor into z- and t-norms."""
    if isinstance(f, SeparableHField):
        t, w = t_quadrature(f.t_half_width)
        tn = math.sqrt(float(np.sum(w * np.abs(f.t_values(t)) ** 2)))
        if f.u is not None:
            return l2_norm_z(f.u) * tn
        r, rw = radial_quadrature(12.0, 400, f.n)
        zn = math.sqrt(surface_area(f.n) * float(np.sum(rw * np.abs(f.u0(r)) ** 2)))
        return zn * tn
    dt = 2.0 * f.t_half_width / f.values.shape[2]
    return math.sqrt(float(np.sum(np.abs(f.values) ** 2)) * f.grid.h ** 2 * dt)


def l1_norm_h(f) -> float:
    if isinstance(f, SeparableHField):
        t, w = t_quadrature(f.t_half_width)
        tn = float(np.sum(w * np.abs(f.t_values(t))))
        if f.u is not None:
            return l1_norm_z(f.u) * tn
        r, rw = radial_quadrature(12.0, 400, f.n)
        return surface_area(f.n) * float(np.sum(rw * np.abs(f.u0(r)))) * tn
    dt = 2.0 * f.t_half_width / f.values.shape[2]
    return float(np.sum(np.abs(f.values)) * f.grid.h ** 2 * dt)


def surface_area(n: int) -> float:
    """Surface measure of the unit sphere S^{2n-1} in C^n: 2 pi^n / (n-1)!."""
    return 2.0 * math.pi ** n / math.factorial(n - 1)


def radial_quadrature(R: float, m: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes on (0, R) with weights including r^{2n-1}."""
    x, w = _leggauss_cached(m)
    r = 0.5 * R * (x + 1.0)
    return r, 0.5 * R * w * r ** (2 * n - 1)


@dataclass
class RadialProfile:
    """Samples of a radial function on Gauss-Legendre nodes over [0, R]."""

    r_nodes: np.ndarray
    weights: np.ndarray
    values: np.ndarray
    n: int = 1
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.r_nodes = np.asarray(self.r_nodes, dtype=float)
        self.weights = np.asarray(self.weights, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        if not (np.all(np.diff(self.r_nodes) > 0) and np.all(self.r_nodes > 0)):
            raise ValueError("r-nodes must be strictly increasing and positive")
        if np.any(self.weights <= 0):
            raise ValueError("weights must be positive")
        if self.r_nodes.shape != self.weights.shape or self.r_nodes.shape != self.values.shape:
            raise ValueError("nodes, weights, values must align")


def radial_profile_from_callable(fn, R: float = 12.0, m: int = 240, n: int = 1) -> RadialProfile:
    r, w = radial_quadrature(R, m, n)
    return RadialProfile(r, w, np.asarray(fn(r), dtype=complex), n)


def radialize(g: ZField, r_nodes: np.ndarray, n_theta: int = 256) -> np.ndarray:
    """Angular average of g onto the given radii by bilinear interpolation."""
    r_nodes = np.asarray(r_nodes, dtype=float)
    if np.any(r_nodes > g.grid.reach):
        raise ValueError("radial nodes exceed the grid reach")
    theta = 2.0 * math.pi * np.arange(n_theta) / n_theta
    x = r_nodes[:, None] * np.cos(theta)[None, :]
    y = r_nodes[:, None] * np.sin(theta)[None, :]
    return np.mean(bilinear_sample(g, x, y), axis=1)


def bilinear_sample(g: ZField, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Bilinear interpolation of g at arbitrary in-grid points."""
    L, h, N = g.grid.L, g.grid.h, g.grid.N
    fx = (np.asarray(x) + L) / h
    fy = (np.asarray(y) + L) / h
    i = np.clip(np.floor(fx).astype(int), 0, N - 2)
    j = np.clip(np.floor(fy).astype(int), 0, N - 2)
    sx = fx - i
    sy = fy - j
    v = g.values
    return ((1 - sx) * (1 - sy) * v[i, j] + sx * (1 - sy) * v[i + 1, j]
            + (1 - sx) * sy * v[i, j + 1] + sx * sy * v[i + 1, j + 1])


def zfield_to_csv(g: ZField, path) -> None:
    """Write the field as CSV rows (x, y, re, im); the grid is recoverable."""
    X, Y = g.grid.mesh()
    data = np.column_stack([X.ravel(), Y.ravel(), g.values.real.ravel(), g.values.imag.ravel()])
    np.savetxt(path, data, delimiter=",", header="x,y,re,im", comments="", fmt="%.17g")


def zfield_from_csv(path) -> ZField:
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    N = int(round(math.sqrt(data.shape[0])))
    x = data[:, 0].reshape(N, N)
    L = -x[0, 0]
    vals = (data[:, 2] + 1j * data[:, 3]).reshape(N, N)
    return ZField(GridSpec(L=L, N=N), vals)


def radial_profile_to_csv(p: RadialProfile, path) -> None:
    data = np.column_stack([p.r_nodes, p.values.real, p.values.imag])
    np.savetxt(path, data, delimiter=",", header="r,re,im", comments="", fmt="%.17g")
