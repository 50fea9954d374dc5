"""The Heisenberg fan and its measures.

The fan is the union of rays ``tau = (2k + n)|lambda|`` in the
(lambda, tau)-plane together with the limiting ray ``{lambda = 0, tau >= 0}``.
This module supplies the fan-point value type, the Euclidean fan metric, the
Plancherel measure nu with density ``(2 pi)^{-2n-1} |lambda|^{2n} d lambda``
per ray, the auxiliary measures nu1/nu2 used at the Hausdorff-Young
endpoints, and the discretized fan grid the transforms run over.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

RAY = "ray"
LIMIT = "limit"


def normalization(k: int, n: int) -> float:
    """The scaling k!(n-1)!/(k+n-1)! between the transform and its normalized form."""
    if k < 0 or n < 1:
        raise ValueError("need k >= 0 and n >= 1")
    out = 1.0
    for j in range(1, n):
        out *= j / (k + j)
    return out


def binom_ratio(k: int, n: int) -> float:
    """(k+n-1)!/(k!(n-1)!) = binom(k+n-1, k), the reciprocal of normalization."""
    if k < 0 or n < 1:
        raise ValueError("need k >= 0 and n >= 1")
    out = 1.0
    for j in range(1, n):
        out *= (k + j) / j
    return out


@dataclass(frozen=True)
class FanPoint:
    """A point of the fan: either Ray(k, lambda) or Limit(tau), in ambient dimension n."""

    kind: str
    n: int
    k: int | None = None
    lam: float | None = None
    tau: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.kind == RAY:
            if self.k is None or self.k < 0:
                raise ValueError("ray point needs k >= 0")
            if not self.lam:
                raise ValueError("ray point needs lambda != 0")
            object.__setattr__(self, "tau", (2 * self.k + self.n) * abs(self.lam))
        elif self.kind == LIMIT:
            if self.tau < 0:
                raise ValueError("limit point needs tau >= 0")
            if self.k is not None or self.lam is not None:
                raise ValueError("limit point carries only tau")
        else:
            raise ValueError(f"unknown fan point kind {self.kind!r}")

    @classmethod
    def ray(cls, k: int, lam: float, n: int = 1) -> "FanPoint":
        return cls(kind=RAY, n=n, k=k, lam=lam)

    @classmethod
    def limit(cls, tau: float, n: int = 1) -> "FanPoint":
        return cls(kind=LIMIT, n=n, tau=tau)

    @property
    def is_ray(self) -> bool:
        return self.kind == RAY

    def plane_coords(self) -> tuple[float, float]:
        """Coordinates (lambda, tau) of the point in the plane containing the fan."""
        return (self.lam if self.is_ray else 0.0, self.tau)


def tau_of(a: FanPoint) -> float:
    """(2k+n)|lambda| for ray points, tau itself for limit points."""
    return a.tau


def fan_distance(a: FanPoint, b: FanPoint) -> float:
    """Euclidean distance between fan points in the (lambda, tau)-plane."""
    xa, ya = a.plane_coords()
    xb, yb = b.plane_coords()
    return math.hypot(xa - xb, ya - yb)


def _cell_quadrature(cell: tuple[float, float], density, rule: str) -> float:
    lo, hi = cell
    if lo > hi:
        lo, hi = hi, lo
    if lo < 0 < hi or lo == 0 or hi == 0:
        raise ValueError("lambda cell must not contain or touch 0")
    width = hi - lo
    if rule == "midpoint":
        return density(0.5 * (lo + hi)) * width
    if rule == "gauss2":
        u = 0.5 / math.sqrt(3.0)
        x1 = 0.5 * (lo + hi) - u * width
        x2 = 0.5 * (lo + hi) + u * width
        return 0.5 * width * (density(x1) + density(x2))
    raise ValueError(f"unknown quadrature rule {rule!r}")


def nu_weight(cell: tuple[float, float], n: int, rule: str = "midpoint") -> float:
    """Quadrature weight of one lambda-cell under the Plancherel density.

    The density on each ray is (2 pi)^{-2n-1} |lambda|^{2n}; the weight is the
    cell integral under the requested rule.  Cells straddling 0 are rejected.
    """
    pref = (2.0 * math.pi) ** (-(2 * n + 1))
    return _cell_quadrature(cell, lambda lam: pref * abs(lam) ** (2 * n), rule)


def nu1_weight(cell: tuple[float, float], n: int, rule: str = "midpoint") -> float:
    """Cell weight of the flat measure nu1 with density (2 pi)^{-2n-1} d lambda."""
    pref = (2.0 * math.pi) ** (-(2 * n + 1))
    return _cell_quadrature(cell, lambda lam: pref, rule)


def nu2_weight(cell: tuple[float, float], k: int, n: int, rule: str = "midpoint") -> float:
    """Cell weight of nu2: density binom(k+n-1,k)^2 (2 pi)^{-2n-1} |lambda|^{2n}.

    nu2 differs from nu by the squared reciprocal normalization, which makes
    the Plancherel identity restated for the normalized transform exact.
    """
    return binom_ratio(k, n) ** 2 * nu_weight(cell, n, rule)


@dataclass
class FanGrid:
    """A truncated quadrature grid over the fan.

    Ray points live on the nodes ``(k, lambda_nodes[j])`` for k = 0..k_max with
    nu-weights attached per lambda cell; the limit-ray tau nodes carry no
    nu-mass (the limiting ray is Plancherel-null) and serve the continuity and
    decay checks only.
    """

    n: int
    k_max: int
    lambda_nodes: np.ndarray
    lambda_weights: np.ndarray
    tau_nodes: np.ndarray
    lambda_cells: list[tuple[float, float]] | None = field(default=None, repr=False)

    def __post_init__(self):
        self.lambda_nodes = np.asarray(self.lambda_nodes, dtype=float)
        self.lambda_weights = np.asarray(self.lambda_weights, dtype=float)
        self.tau_nodes = np.asarray(self.tau_nodes, dtype=float)
        if self.k_max < 0:
            raise ValueError("k_max must be >= 0")
        if np.any(self.lambda_nodes == 0):
            raise ValueError("lambda nodes must be nonzero")
        if np.any(self.lambda_weights <= 0):
            raise ValueError("lambda weights must be positive")
        if self.lambda_nodes.shape != self.lambda_weights.shape:
            raise ValueError("nodes and weights must align")

    @classmethod
    def build(cls, n: int = 1, eps0: float = 0.125, lam_max: float = 2.0,
              nodes_per_sign: int = 16, k_max: int = 32,
              tau_nodes=None, rule: str = "midpoint") -> "FanGrid":
        """Default desk-scale grid: lambda in +-[eps0, lam_max], midpoint cells.

        The punctured neighborhood (-eps0, eps0) is excluded: the measure
        density |lambda|^{2n} vanishes at 0, so the omitted mass is small and
        controlled by eps0.
        """
        if not (0 < eps0 < lam_max):
            raise ValueError("need 0 < eps0 < lam_max")
        edges = np.linspace(eps0, lam_max, nodes_per_sign + 1)
        cells = [(edges[i], edges[i + 1]) for i in range(nodes_per_sign)]
        cells = [(-b, -a) for (a, b) in reversed(cells)] + cells
        nodes = np.array([0.5 * (a + b) for (a, b) in cells])
        weights = np.array([nu_weight(c, n, rule) for c in cells])
        if tau_nodes is None:
            tau_nodes = np.linspace(0.0, (2 * k_max + n) * lam_max / 8.0, 9)
        return cls(n=n, k_max=k_max, lambda_nodes=nodes, lambda_weights=weights,
                   tau_nodes=np.asarray(tau_nodes, dtype=float), lambda_cells=cells)

    def ray_points(self):
        """All ray points of the grid, k-major then lambda, in fixed order."""
        for k in range(self.k_max + 1):
            for lam in self.lambda_nodes:
                yield FanPoint.ray(k, float(lam), self.n)

    def limit_points(self):
        for tau in self.tau_nodes:
            yield FanPoint.limit(float(tau), self.n)

    def ray_weight(self, a: FanPoint) -> float:
        """nu-weight of the lambda-cell represented by ray point a."""
        if not a.is_ray:
            raise ValueError("limit points carry no nu-mass")
        j = int(np.argmin(np.abs(self.lambda_nodes - a.lam)))
        if abs(self.lambda_nodes[j] - a.lam) > 1e-12:
            raise ValueError("fan point is not on this grid")
        return float(self.lambda_weights[j])

    def to_json(self) -> str:
        return json.dumps({
            "n": self.n,
            "lambda_nodes": self.lambda_nodes.tolist(),
            "lambda_weights": self.lambda_weights.tolist(),
            "k_max": self.k_max,
            "tau_nodes": self.tau_nodes.tolist(),
        }, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "FanGrid":
        d = json.loads(text)
        return cls(n=d["n"], k_max=d["k_max"],
                   lambda_nodes=np.asarray(d["lambda_nodes"], dtype=float),
                   lambda_weights=np.asarray(d["lambda_weights"], dtype=float),
                   tau_nodes=np.asarray(d["tau_nodes"], dtype=float))

    def total_mass(self) -> float:
        """Total nu-mass of the truncated grid: (k_max+1) copies of the lambda mass."""
        return float((self.k_max + 1) * np.sum(self.lambda_weights))
