"""Fan geometry, Plancherel weights, and the lambda-grid container."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heisenfan import fan as fan_mod
from heisenfan.fan import (FanGrid, FanPoint, binom_ratio, fan_distance,
                           normalization, nu1_weight, nu2_weight, nu_weight,
                           tau_of)


@pytest.mark.parametrize("k,n", [(0, 1), (3, 1), (0, 4), (7, 3), (20, 5)])
def test_normalization_and_binom_ratio(k, n):
    want = math.comb(k + n - 1, k)
    assert binom_ratio(k, n) == pytest.approx(want, rel=1e-14)
    assert normalization(k, n) == pytest.approx(1.0 / want, rel=1e-14)


def test_fan_point_invariants():
    a = FanPoint.ray(3, -0.5, n=2)
    assert a.tau == pytest.approx((2 * 3 + 2) * 0.5)
    assert tau_of(a) == a.tau
    assert a.plane_coords() == (-0.5, a.tau)
    b = FanPoint.limit(4.0, n=1)
    assert not b.is_ray and b.plane_coords() == (0.0, 4.0)
    with pytest.raises(ValueError):
        FanPoint.ray(-1, 1.0)
    with pytest.raises(ValueError):
        FanPoint.ray(0, 0.0)
    with pytest.raises(ValueError):
        FanPoint.limit(-1.0)


def test_fan_distance_symmetric_in_the_plane():
    a = FanPoint.ray(1, 0.5, 1)
    b = FanPoint.limit(2.0, 1)
    assert fan_distance(a, b) == pytest.approx(fan_distance(b, a))
    assert fan_distance(a, a) == 0.0
    # distance is computed between (lambda, tau) coordinates
    assert fan_distance(a, b) == pytest.approx(math.hypot(0.5, a.tau - 2.0))


def _exact_nu(cell, n):
    lo, hi = sorted(abs(x) for x in cell)
    pref = (2 * math.pi) ** (-(2 * n + 1))
    return pref * (hi ** (2 * n + 1) - lo ** (2 * n + 1)) / (2 * n + 1)


@pytest.mark.parametrize("cell", [(0.25, 0.75), (-1.5, -0.5), (0.001, 0.002)])
def test_nu_weight_gauss2_exact_for_n1(cell):
    # the density |lambda|^2 is a quadratic, integrated exactly by gauss2
    assert nu_weight(cell, 1, rule="gauss2") == pytest.approx(
        _exact_nu(cell, 1), rel=1e-13)
    # midpoint is second order: within a few percent on these cells
    assert nu_weight(cell, 1, rule="midpoint") == pytest.approx(
        _exact_nu(cell, 1), rel=0.1)


def test_nu_weight_rejects_cells_touching_zero():
    for cell in [(-0.5, 0.5), (0.0, 1.0), (-1.0, 0.0)]:
        with pytest.raises(ValueError):
            nu_weight(cell, 1)


def test_nu1_and_nu2_weights():
    cell = (0.5, 1.0)
    assert nu1_weight(cell, 1, "gauss2") == pytest.approx(
        (2 * math.pi) ** -3 * 0.5, rel=1e-14)
    for k in (0, 3):
        assert nu2_weight(cell, k, 2, "gauss2") == pytest.approx(
            binom_ratio(k, 2) ** 2 * nu_weight(cell, 2, "gauss2"), rel=1e-14)


def test_fan_grid_build_layout(fan):
    assert fan.n == 1 and fan.k_max == 32
    assert len(fan.lambda_nodes) == 32  # 16 per sign
    assert np.all(np.abs(fan.lambda_nodes) >= 0.125)
    assert np.all(np.abs(fan.lambda_nodes) <= 2.0)
    # k-major ordering of ray points
    pts = list(fan.ray_points())
    assert len(pts) == 33 * 32
    assert [a.k for a in pts[:32]] == [0] * 32
    assert pts[32].k == 1
    # ray_weight agrees with the stored lambda weights
    a = pts[5]
    j = list(fan.lambda_nodes).index(a.lam)
    assert fan.ray_weight(a) == pytest.approx(fan.lambda_weights[j])


def test_fan_grid_json_roundtrip(fan):
    other = FanGrid.from_json(fan.to_json())
    assert other.n == fan.n and other.k_max == fan.k_max
    assert np.array_equal(other.lambda_nodes, fan.lambda_nodes)
    assert np.array_equal(other.lambda_weights, fan.lambda_weights)
    assert np.array_equal(other.tau_nodes, fan.tau_nodes)
    assert other.total_mass() == pytest.approx(fan.total_mass())


def test_fan_grid_total_mass(fan):
    # sum over rays of the nu weights, one copy per k
    want = (fan.k_max + 1) * np.sum(fan.lambda_weights)
    assert fan.total_mass() == pytest.approx(want)


@given(eps0=st.floats(0.01, 0.5), lam_max=st.floats(1.0, 4.0),
       m=st.integers(2, 24))
@settings(max_examples=25, deadline=None)
def test_fan_grid_build_covers_requested_band(eps0, lam_max, m):
    g = FanGrid.build(eps0=eps0, lam_max=lam_max, nodes_per_sign=m, k_max=4)
    assert len(g.lambda_nodes) == 2 * m
    assert np.all(np.abs(g.lambda_nodes) >= eps0 - 1e-12)
    assert np.all(np.abs(g.lambda_nodes) <= lam_max + 1e-12)
    assert np.all(g.lambda_weights > 0)
