"""Grids, fields, quadratures, and CSV round trips."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heisenfan import testfunctions
from heisenfan.field import (GridSpec, RadialProfile, SampledHField,
                             ZField, bilinear_sample, central_transform,
                             inner_z, integrate_z, l1_norm_h, l2_norm_h,
                             l2_norm_z, radial_profile_from_callable,
                             radial_quadrature, radialize, surface_area,
                             t_quadrature, zfield_from_callable,
                             zfield_from_csv, zfield_to_csv)


def test_grid_spec_axis():
    g = GridSpec(L=4.0, N=8)
    assert g.h == pytest.approx(1.0)
    assert np.allclose(g.axis(), np.arange(-4.0, 4.0, 1.0))
    assert g.reach == pytest.approx(3.0)
    X, Y = g.mesh()
    assert X.shape == (8, 8)
    assert np.allclose(g.radius(), np.hypot(X, Y))


def test_integrate_gaussian(grid):
    f = zfield_from_callable(grid, lambda X, Y: np.exp(-(X**2 + Y**2) / 2))
    assert integrate_z(f) == pytest.approx(2 * math.pi, rel=1e-12)
    assert l2_norm_z(f) == pytest.approx(math.sqrt(math.pi), rel=1e-12)


def test_inner_product_conjugation(grid, rng):
    a = ZField(grid, rng.standard_normal((64, 64)) + 1j * rng.standard_normal((64, 64)))
    b = ZField(grid, rng.standard_normal((64, 64)) + 1j * rng.standard_normal((64, 64)))
    assert inner_z(a, b) == pytest.approx(np.conj(inner_z(b, a)))
    assert inner_z(a, a).real == pytest.approx(l2_norm_z(a) ** 2)


def test_field_arithmetic(grid, rng):
    v = rng.standard_normal((64, 64))
    a = ZField(grid, v + 0j)
    s = a + a - a * 0.5
    assert np.allclose(s.values, 1.5 * v)


def test_t_quadrature_integrates_gaussian():
    t, w = t_quadrature(40.0)
    assert np.sum(w * np.exp(-t * t / 2)) == pytest.approx(math.sqrt(2 * math.pi), rel=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_radial_quadrature_full_gaussian_mass(n):
    # surface_area(n) * int e^{-r^2/2} r^{2n-1} dr = (2 pi)^n
    r, w = radial_quadrature(12.0, 240, n)
    total = surface_area(n) * np.sum(w * np.exp(-r * r / 2))
    assert total == pytest.approx((2 * math.pi) ** n, rel=1e-12)


def test_central_transform_of_separable_gaussian(grid):
    f = testfunctions.gaussian(grid)
    lam = 0.8
    got = f.central(lam, grid)
    sig_t = 10.0
    vh = sig_t * math.sqrt(2 * math.pi) / 2 * (
        math.exp(-sig_t**2 * (lam - 1.0) ** 2 / 2)
        + math.exp(-sig_t**2 * (lam + 1.0) ** 2 / 2))
    want = vh * np.exp(-grid.radius()**2 / 2)
    assert np.allclose(got.values, want, atol=1e-13)
    # generic central_transform dispatches to the same slice
    assert np.allclose(central_transform(f, lam, grid).values, want, atol=1e-13)


def test_sampled_field_matches_separable(grid):
    f = testfunctions.gaussian(grid, sigma_t=1.0, omega0=0.0)
    T, Nt = 12.0, 480
    t = -T + (2 * T / Nt) * np.arange(Nt)
    vals = np.exp(-grid.radius()**2 / 2)[:, :, None] * np.exp(-t * t / 2)
    s = SampledHField(grid=grid, t_half_width=T, values=vals.astype(complex))
    lam = 0.5
    a = s.central(lam, grid).values
    b = f.central(lam, grid).values
    assert np.max(np.abs(a - b)) < 1e-8


def test_norms_of_separable_gaussian(grid):
    f = testfunctions.gaussian(grid, sigma_t=1.0, omega0=0.0)
    # ||f||_2^2 = int e^{-|z|^2} dz * int e^{-t^2} dt = pi * sqrt(pi)
    assert l2_norm_h(f) == pytest.approx(math.pi ** 0.75, rel=1e-10)
    # ||f||_1 = int e^{-|z|^2/2} dz * int e^{-t^2/2} dt = 2 pi * sqrt(2 pi)
    assert l1_norm_h(f) == pytest.approx(2 * math.pi * math.sqrt(2 * math.pi), rel=1e-10)


def test_radial_profile_and_radialize(grid):
    prof = radial_profile_from_callable(lambda r: np.exp(-r * r / 2))
    assert isinstance(prof, RadialProfile)
    f = zfield_from_callable(grid, lambda X, Y: np.exp(-(X**2 + Y**2) / 2))
    r = np.array([0.0, 0.5, 1.5, 3.0])
    vals = radialize(f, r)
    assert np.allclose(vals, np.exp(-r * r / 2), atol=2e-2)


def test_bilinear_sample_reproduces_grid_nodes(grid, rng):
    f = ZField(grid, rng.standard_normal((64, 64)) + 0j)
    X, Y = grid.mesh()
    idx = rng.integers(0, 63, size=(20, 2))
    x = X[idx[:, 0], idx[:, 1]]
    y = Y[idx[:, 0], idx[:, 1]]
    got = bilinear_sample(f, x, y)
    assert np.allclose(got, f.values[idx[:, 0], idx[:, 1]], atol=1e-13)


def test_zfield_csv_roundtrip(tmp_path, grid, rng):
    f = ZField(grid, rng.standard_normal((64, 64)) + 1j * rng.standard_normal((64, 64)))
    path = tmp_path / "field.csv"
    zfield_to_csv(f, path)
    g = zfield_from_csv(path)
    assert g.grid.N == 64 and g.grid.L == pytest.approx(8.0)
    assert np.array_equal(g.values, f.values)


@given(L=st.floats(1.0, 16.0), N=st.sampled_from([8, 16, 32, 64]))
@settings(max_examples=25, deadline=None)
def test_grid_axis_consistency(L, N):
    g = GridSpec(L=L, N=N)
    ax = g.axis()
    assert len(ax) == N
    assert ax[0] == pytest.approx(-L)
    assert np.allclose(np.diff(ax), g.h)
