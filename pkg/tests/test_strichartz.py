"""Forward/inverse transform, Plancherel pairing, projectors, and persistence."""

import math

import numpy as np
import pytest

from heisenfan import testfunctions
from heisenfan.fan import FanGrid, FanPoint
from heisenfan.field import GridSpec, l2_norm_z
from heisenfan.strichartz import (StrichartzCoefficients, forward, inverse,
                                  laguerre_adapted_grid, load_coefficients,
                                  normalize, phi_sq_norm, plancherel_pair,
                                  projector_residual, save_coefficients,
                                  synthesize)


def test_engines_agree_on_radial_input(mod_gaussian, grid):
    fan = FanGrid.build(eps0=0.75, lam_max=1.25, nodes_per_sign=2, k_max=4)
    cr = forward(mod_gaussian, fan, grid=grid, engine="radial")
    cg = forward(mod_gaussian, fan, grid=grid, engine="grid")
    a = FanPoint.ray(1, float(fan.lambda_nodes[3]), 1)
    sr = cr.slice(a).values
    sg = cg.slice(a).values
    scale = np.max(np.abs(sr))
    assert np.max(np.abs(sr - sg)) / scale < 1e-4


def test_slice_sq_integral_matches_grid_norm(mod_coeffs, fan):
    a = FanPoint.ray(0, float(fan.lambda_nodes[23]), 1)
    num = l2_norm_z(mod_coeffs.slice(a)) ** 2
    assert mod_coeffs.slice_sq_integral(a) == pytest.approx(num, rel=1e-6)


def test_ray_coefficient_definition(mod_coeffs, fan):
    # for radial input the slice is coefficient times phi_k
    a = FanPoint.ray(2, float(fan.lambda_nodes[20]), 1)
    c = mod_coeffs.ray_coefficient(a)
    assert mod_coeffs.slice_sq_integral(a) == pytest.approx(
        abs(c) ** 2 * phi_sq_norm(a.k, 1, a.lam), rel=1e-12)


def test_off_grid_lambda_rejected(mod_coeffs):
    with pytest.raises(KeyError):
        mod_coeffs.slice(FanPoint.ray(0, 0.987654, 1))


def test_plancherel_identity(mod_gaussian, mod_coeffs):
    lhs, rhs, tail = plancherel_pair(mod_gaussian, mod_coeffs)
    assert abs(lhs - rhs) / lhs < 1e-2
    assert tail < 0.05


def test_inversion_round_trip(mod_gaussian, mod_coeffs):
    pts = np.array([(0.0, 0.0, 0.0), (0.5, -0.25, 1.0), (1.0, 1.0, -2.0),
                    (-0.5, 0.75, 0.5), (2.0, 0.0, 3.0)])
    rec = inverse(mod_coeffs, pts)
    ref = mod_gaussian.point_values(pts)
    sup = np.max(np.abs(ref))
    assert np.max(np.abs(rec - ref)) / sup < 1e-2


def test_synthesize_agrees_with_inverse(mod_coeffs):
    pts = np.array([(0.25, 0.5, 0.0), (1.0, -1.0, 1.5)])
    a = synthesize(mod_coeffs, pts)
    b = inverse(mod_coeffs, pts)
    assert np.allclose(a, b, rtol=1e-12)


def test_projector_residual_small_on_active_slices(mod_coeffs, fan):
    lam = float(fan.lambda_nodes[23])
    for k in (0, 1, 2):
        res = projector_residual(mod_coeffs, FanPoint.ray(k, lam, 1))
        assert res < 5e-3, (k, res)


def test_normalize_scales_by_binom(mod_coeffs, fan):
    nc = normalize(mod_coeffs)
    assert nc.normalized and not mod_coeffs.normalized
    a = FanPoint.ray(3, float(fan.lambda_nodes[23]), 1)
    # n = 1: normalization is trivial, coefficients agree
    assert nc.ray_coefficient(a) == pytest.approx(mod_coeffs.ray_coefficient(a))


def test_save_load_roundtrip(tmp_path, mod_coeffs, fan):
    d = tmp_path / "coeffs"
    save_coefficients(mod_coeffs, d)
    assert (d / "fan.json").exists()
    assert (d / "manifest.json").exists()
    back = load_coefficients(d)
    assert isinstance(back, StrichartzCoefficients)
    assert np.array_equal(back.fan.lambda_nodes, fan.lambda_nodes)
    a = FanPoint.ray(1, float(fan.lambda_nodes[23]), 1)
    assert np.allclose(back.slice(a).values, mod_coeffs.slice(a).values,
                       rtol=0, atol=1e-15)


def test_adapted_grid_monotone_in_k():
    base = GridSpec(L=8.0, N=64)
    g1 = laguerre_adapted_grid(base, 2, 1.0)
    g2 = laguerre_adapted_grid(base, 8, 1.0)
    g3 = laguerre_adapted_grid(base, 8, 0.5)
    assert g2.L >= g1.L
    assert g3.L >= g2.L  # lower lambda spreads phi_k out
    for g in (g1, g2, g3):
        assert g.h <= 0.25 + 1e-12
        assert g.N % 16 == 0


def test_forward_bump_is_finite(fan, grid):
    f = testfunctions.bump(grid)
    c = forward(f, fan, grid=grid)
    norms = c.ray_slice_norms()
    assert np.all(np.isfinite(norms))
    assert np.max(norms) > 0
