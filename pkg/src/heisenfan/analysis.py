"""Theorem-level verification harnesses.

Each check returns a table of raw numbers plus a Verdict record; nothing is
asserted here, so the harnesses are pure functions of their inputs and the
caller (tests or CLI) decides what counts as failure.

A note on direction: the uncertainty results (Hardy, Ingham) conclude "f = 0"
from decay hypotheses.  That contrapositive cannot be established numerically;
these harnesses verify the *checkable* direction only - decay profiles,
envelope constants, and fitted exponents on concrete functions at desk scale.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from . import specfun
from .fan import LIMIT, RAY, FanGrid, FanPoint, normalization, nu2_weight, binom_ratio
from .field import GridSpec, l1_norm_h, l2_norm_h, radial_quadrature
from .gelfand import gelfand_transform
from .strichartz import forward, phi_sq_norm


@dataclass
class Verdict:
    test: str
    parameters: dict
    statistic: float
    threshold: float
    passed: bool

    def to_json(self) -> str:
        return json.dumps({**asdict(self), "pass": self.passed}, indent=2, sort_keys=True)


def normalized_point_value(f, a: FanPoint, z: complex) -> complex:
    """The normalized transform f~(a, z) of a radial function at one point.

    Rays factor as normalization(k, n) Gf(a) phi_{k,lambda}(|z|); the limit ray
    is Gf(0, tau) chi_tau(|z|) (no normalization there by definition).
    """
    g = gelfand_transform(f, a)
    r = np.asarray(abs(z), dtype=float)
    if a.kind == RAY:
        return complex(normalization(a.k, a.n) * g
                       * specfun.laguerre_function(a.k, a.n, a.lam, r))
    return complex(g * specfun.bessel_ratio(a.n, math.sqrt(a.tau) * r))


def rl_scan(f, z: complex, path: list[FanPoint], tail_fraction: float = 0.1):
    """Riemann-Lebesgue decay of |f~(a, z)| along a path escaping to infinity.

    Returns (rows, verdict): rows are (|a|, |f~(a, z)|) in path order, and the
    verdict compares the maximum over the last quartile of the path against
    ``tail_fraction`` times the global maximum.
    """
    rows = []
    for a in path:
        lam, tau = a.plane_coords()
        rows.append((math.hypot(lam, tau), abs(normalized_point_value(f, a, z))))
    vals = np.array([v for _, v in rows])
    peak = float(np.max(vals)) if len(vals) else 0.0
    tail = float(np.max(vals[3 * len(vals) // 4:])) if len(vals) else 0.0
    stat = tail / peak if peak > 0 else 0.0
    verdict = Verdict(test="riemann_lebesgue_decay",
                      parameters={"z": [z.real, z.imag], "points": len(path),
                                  "tail_fraction": tail_fraction},
                      statistic=stat, threshold=tail_fraction, passed=stat <= tail_fraction)
    return rows, verdict


def limit_continuity_check(f, tau: float, z: complex, ks: list[int], n: int = 1):
    """Convergence of f~ along ray points approaching (0, tau) on the limit ray.

    For each k the matching lambda is tau / (2k + n).  Returns (rows, verdict)
    where rows are (k, lambda, gap) with gap = |f~(a_k, z) - fhat(0, tau, z)|.
    The verdict requires a decreasing trend (each gap at most 1.05x the
    previous) and final gap <= 5e-2 |fhat(0, tau, z)| + 1e-4.
    """
    ref = normalized_point_value(f, FanPoint.limit(tau, n), z)
    rows = []
    for k in ks:
        lam = tau / (2 * k + n)
        a = FanPoint.ray(k, lam, n)
        gap = abs(normalized_point_value(f, a, z) - ref)
        rows.append((k, lam, gap))
    gaps = [g for _, _, g in rows]
    trend_ok = all(gaps[i + 1] <= 1.05 * gaps[i] for i in range(len(gaps) - 1))
    thresh = 5e-2 * abs(ref) + 1e-4
    final_ok = gaps[-1] <= thresh
    verdict = Verdict(test="limit_ray_continuity",
                      parameters={"tau": tau, "z": [z.real, z.imag], "ks": list(ks)},
                      statistic=gaps[-1], threshold=thresh,
                      passed=trend_ok and final_ok)
    return rows, verdict


def laguerre_bessel_rate(ks: list[int], n: int = 1, lam: float = 1.0,
                         b: float = 1.0, m: int = 400) -> float:
    """Fitted decay exponent of sup_{0 < t <= b} |phi_k - Bessel main term|.

    The uniform asymptotic estimate predicts exponent (n-1)/2 + 3/4 in
    (2k + n); this measures it directly on the special-function level.
    """
    t = np.linspace(b / m, b, m)
    sups = []
    for k in ks:
        r = t / math.sqrt(abs(lam))
        diff = (normalization(k, n) * specfun.laguerre_function(k, n, lam, r)
                - specfun.laguerre_asymptotic_main(k, n, lam, r))
        sups.append(float(np.max(np.abs(diff))))
    x = np.log([2 * k + n for k in ks])
    slope = np.polyfit(x, np.log(sups), 1)[0]
    return -float(slope)


def linf_bound_check(f, fan: FanGrid, r_samples: np.ndarray | None = None) -> dict:
    """sup |f~(a, z)| / ||f||_1 over the sampled fan, split by ray vs limit ray."""
    if r_samples is None:
        r_samples = np.linspace(1e-3, 10.0, 200)
    l1 = l1_norm_h(f)
    ray_sup = 0.0
    for a in fan.ray_points():
        g = gelfand_transform(f, a)
        prof = specfun.laguerre_function(a.k, a.n, a.lam, r_samples)
        ray_sup = max(ray_sup, normalization(a.k, a.n) * abs(g) * float(np.max(np.abs(prof))))
    limit_sup = 0.0
    for a in fan.limit_points():
        g = gelfand_transform(f, a)
        chi = specfun.bessel_ratio(a.n, math.sqrt(a.tau) * r_samples)
        limit_sup = max(limit_sup, abs(g) * float(np.max(np.abs(chi))))
    return {"ray_ratio": ray_sup / l1, "limit_ratio": limit_sup / l1, "l1_norm": l1}


def hausdorff_young_endpoints(f, fan: FanGrid) -> dict:
    """The two interpolation endpoints for the normalized transform.

    p = 1: sup over ray points of |f~| against ||f||_1 (must be <= 1).
    p = 2: the Plancherel identity restated for f~ with the measure nu2,
    whose density carries binom(k+n-1,k)^2 so that the normalization factors
    cancel exactly; checked as a relative error.
    """
    report = {}
    bound = linf_bound_check(f, fan)
    report["p1_ratio"] = bound["ray_ratio"]
    report["p1_pass"] = bound["ray_ratio"] <= 1.0 + 1e-6

    lhs = l2_norm_h(f) ** 2
    rhs = 0.0
    cells = fan.lambda_cells
    if cells is None:
        raise ValueError("the fan grid must carry its lambda cells for nu2 weights")
    for a in fan.ray_points():
        j = int(np.argmin(np.abs(fan.lambda_nodes - a.lam)))
        w2 = nu2_weight(cells[j], a.k, a.n)
        coeff = normalization(a.k, a.n) * gelfand_transform(f, a)
        rhs += w2 * abs(coeff) ** 2 * phi_sq_norm(a.k, a.n, a.lam)
    report["p2_lhs"] = lhs
    report["p2_rhs"] = rhs
    report["p2_rel_err"] = abs(lhs - rhs) / lhs if lhs > 0 else 0.0
    report["p2_pass"] = report["p2_rel_err"] <= 1e-2
    report["pass"] = report["p1_pass"] and report["p2_pass"]
    return report


def hardy_profile(f, b: float, fan: FanGrid) -> tuple[list, dict]:
    """Slice-mass decay D(k, lambda) = |lambda|^n ∫ |fhat(a, z)|^2 dz over the fan.

    Fits log(D / binom(k+n-1,k)) against tau = (2k+n)|lambda|; for the heat
    kernel p_b the profile is exactly c e^{-2b tau} so the fitted rate should
    recover 2b.  Returns (rows, fit) with rows (k, lambda, tau, D); the fit
    reports the rate, the implied largest admissible decay parameter
    (rate / 2), and whether the requested b is consistent within 5%.
    """
    c = forward(f, fan)
    rows = []
    for a in fan.ray_points():
        D = abs(a.lam) ** fan.n * c.slice_sq_integral(a)
        rows.append((a.k, a.lam, a.tau, D))
    taus = np.array([r[2] for r in rows])
    Ds = np.array([r[3] for r in rows])
    binoms = np.array([binom_ratio(r[0], fan.n) for r in rows])
    mask = Ds > np.max(Ds) * 1e-40
    slope, intercept = np.polyfit(taus[mask], np.log(Ds[mask] / binoms[mask]), 1)
    rate = -float(slope)
    fit = {
        "rate": rate,
        "largest_b": rate / 2.0,
        "constant": float(np.exp(intercept)),
        "requested_b": b,
        "rate_rel_err": abs(rate - 2.0 * b) / (2.0 * b),
        "pass": abs(rate - 2.0 * b) / (2.0 * b) <= 0.05,
    }
    return rows, fit


def ingham_admissibility(theta, t_max: float = 2.0 ** 20) -> tuple[float, str]:
    """Classify ∫_1^inf Theta(t)/t dt by the trend of its octave increments.

    Theta must be nonnegative and nonincreasing.  The increments over
    [2^j, 2^{j+1}] behave like j^{-p} for the profiles of interest; a fitted
    p > 1.5 marks the integral as converging, otherwise diverging.
    """
    probe = np.geomspace(1.0, t_max, 64)
    vals = np.asarray(theta(probe), dtype=float)
    if np.any(vals < 0):
        raise ValueError("Theta must be nonnegative")
    if np.any(np.diff(vals) > 1e-12 * max(1.0, float(np.max(vals)))):
        raise ValueError("Theta must be nonincreasing")
    x, w = np.polynomial.legendre.leggauss(64)
    n_oct = int(math.floor(math.log2(t_max)))
    increments = []
    for j in range(n_oct):
        lo, hi = 2.0 ** j, 2.0 ** (j + 1)
        t = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
        increments.append(float(np.sum(0.5 * (hi - lo) * w * np.asarray(theta(t)) / t)))
    total = float(np.sum(increments))
    inc = np.array(increments[n_oct // 2:])
    jj = np.arange(n_oct // 2, n_oct) + 1.0
    if np.all(inc <= 0):
        return total, "converging"
    p = -float(np.polyfit(np.log(jj[inc > 0]), np.log(inc[inc > 0]), 1)[0])
    return total, ("converging" if p > 1.5 else "diverging")


def ingham_decay_check(f, theta, fan: FanGrid) -> dict:
    """Empirical envelope constant for the Ingham-type decay bound.

    Finds the smallest c with D(k, lambda) <= c e^{-sqrt(tau) Theta(sqrt(tau))}
    over the fan grid and reports it; existence of a finite c on the grid is
    the checkable direction of the theorem.
    """
    c = forward(f, fan)
    best = 0.0
    for a in fan.ray_points():
        D = abs(a.lam) ** fan.n * c.slice_sq_integral(a)
        s = math.sqrt(a.tau)
        envelope = math.exp(-s * float(theta(np.array([max(s, 1.0)]))[0]))
        best = max(best, D / envelope)
    return {"envelope_constant": best, "pass": math.isfinite(best)}
