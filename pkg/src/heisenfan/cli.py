"""Command-line experiment driver.

Every subcommand reads an optional JSON config (flags override config keys),
runs one verification suite, and writes CSV tables, verdict JSONs, and a
manifest with checksums under the output directory.  Exit status: 0 when all
verdicts pass, 1 when a verdict fails (the failing statistic is in the JSON),
2 for configuration errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__, analysis, testfunctions
from .fan import FanGrid, FanPoint, normalization
from .field import GridSpec, ZField, l2_norm_z
from .gelfand import (HeatKernel, convolution_gelfand, gelfand_transform,
                      heat_kernel_profile, multiplier_residual,
                      radial_factorization_residual)
from .hecke import HarmonicDegree, coefficient_theorem_residual, hecke_bochner_residual
from .strichartz import (forward, inverse, laguerre_adapted_grid, plancherel_pair,
                         projector_residual, save_coefficients)
from .weyl import (group_fourier, hs_slice_relation, projection_identity_residual,
                   weyl_matrix_to_csv, weyl_plancherel, weyl_transform)

SUITES = ["transform", "invert", "plancherel", "project", "rl-scan",
          "limit-continuity", "gelfand", "heat", "hecke", "weyl-check",
          "hardy", "ingham", "hy-endpoints"]


class ConfigError(Exception):
    pass


@dataclass
class ExperimentConfig:
    n: int = 1
    grid: dict = field(default_factory=lambda: {"L": 8.0, "N": 64})
    fan: dict = field(default_factory=lambda: {
        "eps0": 0.125, "lam_max": 2.0, "nodes_per_sign": 16, "k_max": 32,
        "rule": "midpoint"})
    test_function: dict = field(default_factory=lambda: {
        "kind": "gaussian", "sigma_z": 1.0, "sigma_t": 10.0, "omega0": 1.0})
    output_dir: str | None = None
    seed: int = 0
    threads: int | None = None
    emit_plots_data: bool = False

    def validate(self):
        if self.n < 1:
            raise ConfigError("n must be >= 1")
        if self.grid["L"] <= 0 or self.grid["N"] < 8:
            raise ConfigError("grid needs L > 0 and N >= 8")
        for key in ("eps0", "lam_max"):
            if self.fan[key] <= 0:
                raise ConfigError(f"fan.{key} must be positive")
        if self.test_function["kind"] not in ("gaussian", "heat_kernel",
                                              "harmonic_times_radial", "bump"):
            raise ConfigError(f"unknown test function {self.test_function['kind']!r}")

    def grid_spec(self) -> GridSpec:
        return GridSpec(L=float(self.grid["L"]), N=int(self.grid["N"]))

    def fan_grid(self) -> FanGrid:
        f = self.fan
        return FanGrid.build(n=self.n, eps0=f["eps0"], lam_max=f["lam_max"],
                             nodes_per_sign=int(f["nodes_per_sign"]),
                             k_max=int(f["k_max"]), rule=f.get("rule", "midpoint"))

    def make_test_function(self, override: dict | None = None):
        tf = dict(override if override is not None else self.test_function)
        kind = tf.pop("kind")
        grid = self.grid_spec()
        if kind == "gaussian":
            return testfunctions.gaussian(grid, n=self.n, **tf)
        if kind == "bump":
            return testfunctions.bump(grid, n=self.n, **tf)
        if kind == "harmonic_times_radial":
            if self.n != 1:
                raise ConfigError("harmonic_times_radial runs on the n = 1 grid")
            return testfunctions.harmonic_times_radial(grid, **tf)
        return HeatKernel(b=float(tf.get("b", 0.25)), n=self.n, grid=grid)


def load_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig()
    if args.config:
        with open(args.config) as fh:
            doc = json.load(fh)
        for key in ("n", "output_dir", "seed", "threads", "emit_plots_data"):
            if key in doc:
                setattr(cfg, key, doc[key])
        for key in ("grid", "fan", "test_function"):
            if key in doc:
                getattr(cfg, key).update(doc[key])
    for name, target in [("n", "n"), ("seed", "seed"), ("threads", "threads"),
                         ("output_dir", "output_dir")]:
        val = getattr(args, name, None)
        if val is not None:
            setattr(cfg, target, val)
    if getattr(args, "emit_plots_data", False):
        cfg.emit_plots_data = True
    for flag, group, key in [("grid_L", "grid", "L"), ("grid_N", "grid", "N"),
                             ("fan_eps0", "fan", "eps0"), ("fan_lam_max", "fan", "lam_max"),
                             ("fan_nodes_per_sign", "fan", "nodes_per_sign"),
                             ("fan_k_max", "fan", "k_max")]:
        val = getattr(args, flag, None)
        if val is not None:
            getattr(cfg, group)[key] = val
    if getattr(args, "test_function", None):
        cfg.test_function = {"kind": args.test_function}
    for flag, key in [("sigma_z", "sigma_z"), ("sigma_t", "sigma_t"),
                      ("omega0", "omega0"), ("b", "b"), ("radius", "radius")]:
        val = getattr(args, flag, None)
        if val is not None:
            cfg.test_function[key] = val
    cfg.validate()
    return cfg


def resolve_output_dir(cfg: ExperimentConfig) -> str:
    return cfg.output_dir or os.environ.get("HEISENFAN_OUTPUT") or "./heisenfan_out"


# ---------------------------------------------------------------------------
# artifact helpers


class Artifacts:
    """Collects files and verdicts for one suite run under output_dir/<suite>/."""

    def __init__(self, root: str, suite: str):
        self.dir = os.path.join(root, suite)
        os.makedirs(self.dir, exist_ok=True)
        self.files: list[str] = []
        self.verdicts: list[dict] = []

    def path(self, name: str) -> str:
        self.files.append(name)
        return os.path.join(self.dir, name)

    def write_csv(self, name: str, header: str, rows) -> None:
        with open(self.path(name), "w") as fh:
            fh.write(header + "\n")
            for row in rows:
                fh.write(",".join(_fmt(x) for x in row) + "\n")

    def write_json(self, name: str, payload: dict) -> None:
        with open(self.path(name), "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)

    def add_verdict(self, name: str, payload: dict) -> None:
        self.verdicts.append(payload)
        self.write_json(name, payload)

    def finalize(self, cfg: ExperimentConfig, suite: str) -> bool:
        ok = all(v.get("pass", False) for v in self.verdicts)
        manifest = {
            "suite": suite,
            "version": __version__,
            "config": {"n": cfg.n, "grid": cfg.grid, "fan": cfg.fan,
                       "test_function": cfg.test_function, "seed": cfg.seed},
            "pass": ok,
            "checksums": {},
        }
        for name in self.files:
            with open(os.path.join(self.dir, name), "rb") as fh:
                manifest["checksums"][name] = hashlib.sha256(fh.read()).hexdigest()
        with open(os.path.join(self.dir, "manifest.json"), "w") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
        return ok


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, complex):
        return f"{x.real:.17g},{x.imag:.17g}"
    return f"{float(x):.17g}"


def _verdict(name: str, statistic: float, threshold: float, extra: dict | None = None) -> dict:
    out = {"test": name, "statistic": float(statistic), "threshold": float(threshold),
           "pass": bool(statistic <= threshold)}
    if extra:
        out["parameters"] = extra
    return out


# ---------------------------------------------------------------------------
# suites


def suite_transform(cfg: ExperimentConfig, art: Artifacts) -> None:
    f = cfg.make_test_function()
    fan = cfg.fan_grid()
    coeffs = forward(f, fan, grid=cfg.grid_spec())
    save_coefficients(coeffs, os.path.join(art.dir, "coefficients"))
    norms = coeffs.ray_slice_norms()
    rows = [(a.k, a.lam, a.tau, norms[a.k, j % len(fan.lambda_nodes)])
            for j, a in enumerate(fan.ray_points())]
    art.write_csv("slice_norms.csv", "k,lambda,tau,l2_norm", rows)
    art.add_verdict("verdict.json", _verdict("transform_finite",
                                             0.0 if np.all(np.isfinite(norms)) else 1.0, 0.5))


def suite_invert(cfg: ExperimentConfig, art: Artifacts) -> None:
    f = cfg.make_test_function()
    if not hasattr(f, "point_values"):
        raise ConfigError("invert needs a test function with pointwise values")
    fan = cfg.fan_grid()
    coeffs = forward(f, fan, grid=cfg.grid_spec())
    g = np.linspace(-2.0, 2.0, 5)
    ts = np.array([-1.0, 0.0, 1.0])
    pts = np.array([(x, y, t) for x in g for y in g for t in ts])
    rec = inverse(coeffs, pts)
    ref = f.point_values(pts)
    sup = float(np.max(np.abs(np.asarray(ref))))
    err = np.abs(rec - ref)
    rows = [(p[0], p[1], p[2], v.real, v.imag, r.real, e)
            for p, v, r, e in zip(pts, rec, ref, err)]
    art.write_csv("roundtrip.csv", "x,y,t,re,im,ref_re,abs_err", rows)
    art.add_verdict("verdict.json", _verdict("inversion_round_trip",
                                             float(np.max(err)) / sup, 1e-2,
                                             {"points": len(pts)}))


def suite_plancherel(cfg: ExperimentConfig, art: Artifacts) -> None:
    f = cfg.make_test_function()
    fan = cfg.fan_grid()
    lhs, rhs, tail = plancherel_pair(f, forward(f, fan, grid=cfg.grid_spec()))
    rel = abs(lhs - rhs) / lhs if lhs > 0 else 0.0
    art.add_verdict("verdict.json", _verdict(
        "plancherel_identity", rel, 1e-2, {"lhs": lhs, "rhs": rhs, "tail_share": tail}))


def suite_project(cfg: ExperimentConfig, art: Artifacts) -> None:
    f = cfg.make_test_function()
    fan = cfg.fan_grid()
    coeffs = forward(f, fan, grid=cfg.grid_spec())
    rows = []
    worst = 0.0
    for a in fan.ray_points():
        res = projector_residual(coeffs, a)
        rows.append((a.k, a.lam, res))
        worst = max(worst, res)
    art.write_csv("projector_residuals.csv", "k,lambda,residual", rows)
    art.add_verdict("verdict.json", _verdict("projector_necessary_condition", worst, 5e-3))


def suite_rl_scan(cfg: ExperimentConfig, art: Artifacts) -> None:
    f = cfg.make_test_function()
    z = 0.5 + 0.25j
    n = cfg.n
    paths = {
        "ray_k0_lambda": [FanPoint.ray(0, lam, n) for lam in np.linspace(0.25, 24.0, 40)],
        "fixed_lambda_k": [FanPoint.ray(k, 1.0, n) for k in range(0, 40)],
        "limit_ray_tau": [FanPoint.limit(tau, n) for tau in np.linspace(0.0, 400.0, 40)],
    }
    ok = True
    for name, path in paths.items():
        rows, verdict = analysis.rl_scan(f, z, path)
        art.write_csv(f"decay_{name}.csv", "abs_a,value", rows)
        art.add_verdict(f"verdict_{name}.json", json.loads(verdict.to_json()))
        ok = ok and verdict.passed


def suite_limit_continuity(cfg: ExperimentConfig, art: Artifacts) -> None:
    # Continuity along the fan is probed as lambda -> 0 at fixed tau, so the
    # test function must carry spectrum near lambda = 0.  A time-modulated
    # profile (omega0 != 0) or a wide time window would make both sides of
    # the comparison vanish; use an unmodulated narrow-time Gaussian instead.
    tf = dict(cfg.test_function)
    if tf.get("kind", "gaussian") == "gaussian":
        tf["omega0"] = 0.0
        tf["sigma_t"] = min(float(tf.get("sigma_t", 10.0)), 1.0)
    f = cfg.make_test_function(tf)
    rows, verdict = analysis.limit_continuity_check(
        f, tau=1.0, z=0.5 + 0.0j, ks=[4, 8, 16, 32, 64], n=cfg.n)
    art.write_csv("continuity_gaps.csv", "k,lambda,gap", rows)
    art.add_verdict("verdict.json", json.loads(verdict.to_json()))


def suite_gelfand(cfg: ExperimentConfig, art: Artifacts) -> None:
    f = cfg.make_test_function()
    if not getattr(f, "is_radial", False):
        raise ConfigError("the gelfand suite needs a radial test function")
    fan = cfg.fan_grid()
    rows = []
    for a in fan.ray_points():
        g = gelfand_transform(f, a)
        rows.append((a.k, a.lam, a.tau, g.real, g.imag))
    for a in fan.limit_points():
        g = gelfand_transform(f, a)
        rows.append((-1, 0.0, a.tau, g.real, g.imag))
    art.write_csv("gelfand_sweep.csv", "k,lambda,tau,re,im", rows)
    worst = 0.0
    for k, lam in [(0, 1.0), (2, -0.5), (4, 1.0)]:
        worst = max(worst, radial_factorization_residual(
            f, FanPoint.ray(k, lam, 1), cfg.grid_spec()))
    art.add_verdict("verdict.json", _verdict("radial_factorization", worst, 1e-4))


def suite_heat(cfg: ExperimentConfig, art: Artifacts) -> None:
    b = float(cfg.test_function.get("b", 0.25))
    p = HeatKernel(b=b, n=cfg.n, grid=cfg.grid_spec())
    fan = cfg.fan_grid()
    rows = []
    worst = 0.0
    for a in fan.ray_points():
        got = gelfand_transform(p, a)
        want = p.known_transform(a)
        gap = abs(got - want)
        rows.append((a.k, a.lam, a.tau, got.real, want))
        worst = max(worst, gap)
    art.write_csv("heat_transform.csv", "k,lambda,tau,re,expected", rows)
    art.add_verdict("verdict_roundtrip.json",
                    _verdict("heat_gelfand_roundtrip", worst, 1e-6))
    # semigroup law through the transform
    p2 = HeatKernel(b=2 * b, n=cfg.n, grid=cfg.grid_spec())
    worst_sg = 0.0
    for a in [FanPoint.ray(0, 0.5, cfg.n), FanPoint.ray(3, 1.0, cfg.n)]:
        lhs = gelfand_transform(p, a) ** 2
        rhs = gelfand_transform(p2, a)
        worst_sg = max(worst_sg, abs(lhs - rhs) / abs(rhs))
    art.add_verdict("verdict_semigroup.json",
                    _verdict("heat_semigroup_law", worst_sg, 1e-3))


def suite_hecke(cfg: ExperimentConfig, art: Artifacts,
                p: int | None = None, q: int | None = None,
                k: int | None = None, lam: float | None = None) -> None:
    g = testfunctions.gaussian(cfg.grid_spec(),
                               sigma_z=cfg.test_function.get("sigma", 1.0),
                               sigma_t=cfg.test_function.get("sigma_t", 10.0),
                               omega0=cfg.test_function.get("omega0", 1.0))
    if p is not None:
        cases = [(p, q or 0, k if k is not None else 1, lam if lam is not None else 1.0)]
    else:
        cases = [(1, 0, 1, 1.0), (1, 0, 2, -1.0), (0, 1, 2, 1.0), (2, 0, 3, 0.5)]
    rows = []
    worst = 0.0
    for (pp, qq, kk, ll) in cases:
        res = hecke_bochner_residual(g, HarmonicDegree(pp, qq), kk, ll)
        rows.append((pp, qq, kk, ll, res))
        worst = max(worst, res)
    art.write_csv("hecke_residuals.csv", "p,q,k,lambda,residual", rows)
    art.add_verdict("verdict.json", _verdict("hecke_bochner_identity", worst, 1e-2))


def suite_weyl_check(cfg: ExperimentConfig, art: Artifacts) -> None:
    f = cfg.make_test_function()
    grid = cfg.grid_spec()
    M = 32
    lam = 1.0
    g = f.central(lam, grid)
    lhs, rhs = weyl_plancherel(g, lam, M)
    v1 = _verdict("weyl_plancherel", abs(lhs - rhs) / rhs, 1e-3,
                  {"lhs": lhs, "rhs": rhs, "M": M})
    res = projection_identity_residual(g, lam, 2, M)
    v2 = _verdict("weyl_projection_identity", res, 1e-3)
    a = FanPoint.ray(1, 1.0, 1)
    hl, hr = hs_slice_relation(f, a, M, grid)
    v3 = _verdict("hs_slice_relation", abs(hl - hr) / hl, 1e-2, {"lhs": hl, "rhs": hr})
    art.add_verdict("verdict_plancherel.json", v1)
    art.add_verdict("verdict_projection.json", v2)
    art.add_verdict("verdict_hs_slice.json", v3)
    W = group_fourier(f, lam, M, grid)
    weyl_matrix_to_csv(W, art.path("group_fourier.csv"))
    art.files.append("group_fourier.csv.json")


def suite_hardy(cfg: ExperimentConfig, art: Artifacts) -> None:
    b = float(cfg.test_function.get("b", 0.25))
    p = HeatKernel(b=b, n=cfg.n, grid=cfg.grid_spec())
    fan = cfg.fan_grid()
    rows, fit = analysis.hardy_profile(p, b, fan)
    art.write_csv("hardy_profile.csv", "k,lambda,tau,D", rows)
    art.add_verdict("verdict.json", {"test": "hardy_decay_exponent", **fit})


def suite_ingham(cfg: ExperimentConfig, art: Artifacts) -> None:
    div_int, div_trend = analysis.ingham_admissibility(lambda t: 1.0 / np.log(math.e + t))
    conv_int, conv_trend = analysis.ingham_admissibility(lambda t: np.log(math.e + t) ** -2.0)
    ok = div_trend == "diverging" and conv_trend == "converging"
    art.write_csv("admissibility.csv", "profile,integral_truncated,trend",
                  [("one_over_log", div_int, 0 if div_trend == "diverging" else 1),
                   ("one_over_log_sq", conv_int, 1 if conv_trend == "converging" else 0)])
    f = cfg.make_test_function()
    env = analysis.ingham_decay_check(f, lambda t: 1.0 / np.log(math.e + t), cfg.fan_grid())
    art.add_verdict("verdict.json", {
        "test": "ingham_admissibility_classifier",
        "one_over_log": div_trend, "one_over_log_sq": conv_trend,
        "envelope_constant": env["envelope_constant"],
        "pass": bool(ok and env["pass"])})


def suite_hy_endpoints(cfg: ExperimentConfig, art: Artifacts) -> None:
    f = cfg.make_test_function()
    report = analysis.hausdorff_young_endpoints(f, cfg.fan_grid())
    art.add_verdict("verdict.json", {"test": "hausdorff_young_endpoints", **report})


SUITE_RUNNERS = {
    "transform": suite_transform,
    "invert": suite_invert,
    "plancherel": suite_plancherel,
    "project": suite_project,
    "rl-scan": suite_rl_scan,
    "limit-continuity": suite_limit_continuity,
    "gelfand": suite_gelfand,
    "heat": suite_heat,
    "hecke": suite_hecke,
    "weyl-check": suite_weyl_check,
    "hardy": suite_hardy,
    "ingham": suite_ingham,
    "hy-endpoints": suite_hy_endpoints,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heisenfan",
        description="Verification experiments for the scalar Fourier transform "
                    "over the Heisenberg fan")
    sub = parser.add_subparsers(dest="suite", required=True)
    for name in SUITES + ["all"]:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--output-dir", dest="output_dir")
        p.add_argument("--threads", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--n", type=int)
        p.add_argument("--grid-L", dest="grid_L", type=float)
        p.add_argument("--grid-N", dest="grid_N", type=int)
        p.add_argument("--fan-eps0", dest="fan_eps0", type=float)
        p.add_argument("--fan-lam-max", dest="fan_lam_max", type=float)
        p.add_argument("--fan-nodes-per-sign", dest="fan_nodes_per_sign", type=int)
        p.add_argument("--fan-k-max", dest="fan_k_max", type=int)
        p.add_argument("--test-function", dest="test_function",
                       choices=["gaussian", "heat_kernel", "harmonic_times_radial", "bump"])
        p.add_argument("--sigma-z", dest="sigma_z", type=float)
        p.add_argument("--sigma-t", dest="sigma_t", type=float)
        p.add_argument("--omega0", type=float)
        p.add_argument("--b", type=float)
        p.add_argument("--radius", type=float)
        p.add_argument("--emit-plots-data", action="store_true")
        if name == "hecke":
            p.add_argument("--p", type=int)
            p.add_argument("--q", type=int)
            p.add_argument("--k", type=int)
            p.add_argument("--lambda", dest="lam", type=float)
    return parser


def run(cfg: ExperimentConfig, suite: str, hecke_args: dict | None = None) -> int:
    if cfg.threads:
        import numba
        from numba import config as numba_config
        available = int(numba_config.NUMBA_NUM_THREADS)
        numba.set_num_threads(max(1, min(cfg.threads, available)))
    root = resolve_output_dir(cfg)
    suites = SUITES if suite == "all" else [suite]
    all_ok = True
    for name in suites:
        art = Artifacts(root, name)
        runner = SUITE_RUNNERS[name]
        if name == "hecke" and hecke_args:
            runner(cfg, art, **hecke_args)
        else:
            runner(cfg, art)
        ok = art.finalize(cfg, name)
        all_ok = all_ok and ok
        status = "pass" if ok else "FAIL"
        print(f"[{status}] {name} -> {art.dir}")
    return 0 if all_ok else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args)
    except (ConfigError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    hecke_args = None
    if args.suite == "hecke" and getattr(args, "p", None) is not None:
        hecke_args = {"p": args.p, "q": args.q or 0, "k": args.k, "lam": args.lam}
    try:
        return run(cfg, args.suite, hecke_args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
