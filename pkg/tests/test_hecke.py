"""Twisted convolution against harmonic-weighted Laguerre functions."""

import math

import numpy as np
import pytest

from heisenfan import testfunctions
from heisenfan.fan import FanPoint
from heisenfan.field import GridSpec
from heisenfan.strichartz import laguerre_adapted_grid
from heisenfan.hecke import (HarmonicDegree, a_shift, circle_coefficient,
                             coefficient_theorem_residual,
                             harmonic_decomposition_residual, harmonic_values,
                             hecke_bochner_residual)


def test_harmonic_degree_invariants():
    d = HarmonicDegree(2, 0)
    assert d.mu == 2
    assert HarmonicDegree(0, 3).mu == -3
    with pytest.raises(ValueError):
        HarmonicDegree(1, 1)  # p q = 0 is required in one complex variable
    with pytest.raises(ValueError):
        HarmonicDegree(-1, 0)


def test_harmonic_values_polynomial():
    X = np.array([1.0, 0.0, 0.5])
    Y = np.array([0.0, 2.0, -0.5])
    z = X + 1j * Y
    assert np.allclose(harmonic_values(HarmonicDegree(2, 0), X, Y), z**2)
    assert np.allclose(harmonic_values(HarmonicDegree(0, 1), X, Y), np.conj(z))


def test_a_shift_indices():
    d10 = HarmonicDegree(1, 0)
    d01 = HarmonicDegree(0, 1)
    # positive lambda shifts by -q, negative by -p in the transform convention
    a = FanPoint.ray(3, 1.0, 1)
    b = a_shift(a, d10)
    assert b is not None and b.k == 3 and b.n == 2
    c = a_shift(FanPoint.ray(3, 1.0, 1), d01)
    assert c is not None and c.k == 2
    assert a_shift(FanPoint.ray(0, 1.0, 1), d01) is None


def test_circle_coefficient_extracts_angular_mode(grid):
    f = testfunctions.harmonic_times_radial(grid, p=1, q=0)
    r = 1.5
    got = circle_coefficient(f, HarmonicDegree(1, 0), r, 0.0)
    # f(z, t) = z e^{-|z|^2/2} e^{-t^2/2}: the mu=1 coefficient at radius r
    # under the 2 pi-normalized pairing is r e^{-r^2/2} (times the t factor 1)
    # bilinear sampling on the circle is second order in h = 0.25
    assert got == pytest.approx(r * math.exp(-r * r / 2), rel=2e-2)


@pytest.mark.parametrize("p,q,k,lam", [(1, 0, 1, 1.0), (0, 1, 2, 1.0),
                                       (1, 0, 2, -1.0), (2, 0, 3, 0.5)])
def test_hecke_bochner_identity(p, q, k, lam, mod_gaussian):
    res = hecke_bochner_residual(mod_gaussian, HarmonicDegree(p, q), k, lam)
    assert res < 1e-2, (p, q, k, lam, res)


def test_hecke_bochner_annihilation(mod_gaussian):
    # k below the shift threshold: the convolution vanishes identically
    res = hecke_bochner_residual(mod_gaussian, HarmonicDegree(2, 0), 1, 1.0)
    assert res < 1e-3


def test_coefficient_theorem(grid, fan):
    f = testfunctions.harmonic_times_radial(grid, p=1, q=0)
    lam = float(fan.lambda_nodes[23])
    r_set = np.array([0.5, 1.0, 2.0])
    base = GridSpec(8.0, 128)  # halve h: the angular sampling is bilinear
    for k in (1, 2):
        g = laguerre_adapted_grid(base, k + 1, lam)
        res = coefficient_theorem_residual(f, HarmonicDegree(1, 0),
                                           FanPoint.ray(k, lam, 1), r_set,
                                           grid=g)
        assert res < 1e-2, (k, res)


def test_harmonic_decomposition(grid):
    f = testfunctions.harmonic_times_radial(grid, p=1, q=0)
    degrees = [HarmonicDegree(0, 0), HarmonicDegree(1, 0), HarmonicDegree(0, 1)]
    r_set = np.array([0.5, 1.5])
    res = harmonic_decomposition_residual(f, degrees, r_set)
    # the interpolation error spreads over all angular modes; the listed
    # degrees capture everything else, so the gap sits at the O(h^2) floor
    assert res < 5e-2
