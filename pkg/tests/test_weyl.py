"""Truncated Weyl transform: matrix coefficients and Hilbert-Schmidt identities."""

import json
import math

import numpy as np
import pytest

from heisenfan import testfunctions
from heisenfan.fan import FanPoint
from heisenfan.field import GridSpec, l2_norm_z, zfield_from_callable
from heisenfan.weyl import (HermiteTruncation, WeylMatrix, group_fourier,
                            hs_slice_relation, pi_matrix, pi_matrix_element,
                            projection_identity_residual, weyl_matrix_to_csv,
                            weyl_plancherel, weyl_transform)
from heisenfan.twisted import phi_field


def test_pi_matrix_at_origin_is_identity():
    P = pi_matrix(1.0, 0.0 + 0.0j, 16)
    assert np.allclose(P, np.eye(16), atol=1e-12)


def test_pi_matrix_nearly_unitary_in_truncation():
    # the infinite matrix is unitary; the top-left block of the truncation
    # deviates only by the mass leaked past the cut
    M = 48
    P = pi_matrix(0.8, 0.7 - 0.4j, M)
    G = P.conj().T @ P
    block = G[:8, :8]
    assert np.allclose(block, np.eye(8), atol=1e-10)


def test_pi_matrix_element_consistency():
    lam, z, M = -0.6, 0.3 + 1.1j, 12
    P = pi_matrix(lam, z, M)
    for (a, b) in [(0, 0), (3, 1), (7, 11)]:
        assert pi_matrix_element(lam, z, a, b) == pytest.approx(P[a, b], abs=1e-12)


def test_weyl_plancherel_gaussian(grid):
    g = zfield_from_callable(grid, lambda X, Y: np.exp(-(X**2 + Y**2) / 2) + 0j,
                             lambda_tag=1.0)
    lhs, rhs = weyl_plancherel(g, 1.0, 32)
    assert abs(lhs - rhs) / rhs < 1e-3
    # lhs is |lam| * ||W||_HS^2, rhs is 2 pi ||g||^2
    assert rhs == pytest.approx(2 * math.pi * l2_norm_z(g) ** 2, rel=1e-12)


def test_weyl_of_phi_is_scaled_projection(grid):
    # W_lam(phi_k) = (2 pi / |lam|)^n P_k in the Hermite basis
    lam, k, M = 1.0, 2, 24
    pk = phi_field(k, 1, lam, grid)
    W = weyl_transform(pk, lam, M)
    want = np.zeros((M, M))
    want[k, k] = 2 * math.pi / abs(lam)
    # high Hermite indices feel the grid edge first; the low block is sharp
    assert np.max(np.abs(W.entries[:4, :4] - want[:4, :4])) < 1e-6
    assert np.max(np.abs(W.entries - want)) < 1e-3


def test_projection_identity_residual(grid):
    g = zfield_from_callable(grid, lambda X, Y: np.exp(-(X**2 + Y**2) / 2) + 0j,
                             lambda_tag=1.0)
    assert projection_identity_residual(g, 1.0, 2, 32) < 1e-3


def test_hs_slice_relation(mod_gaussian, grid):
    a = FanPoint.ray(1, 1.0, 1)
    lhs, rhs = hs_slice_relation(mod_gaussian, a, 32, grid)
    assert abs(lhs - rhs) / lhs < 1e-2


def test_hermite_truncation_validation():
    with pytest.raises(ValueError):
        HermiteTruncation(0)
    assert HermiteTruncation(16).M == 16


def test_weyl_matrix_csv_roundtrip(tmp_path, grid):
    g = zfield_from_callable(grid, lambda X, Y: np.exp(-(X**2 + Y**2)) + 0j)
    W = group_fourier(testfunctions.gaussian(grid), 1.0, 8, grid)
    path = tmp_path / "weyl.csv"
    weyl_matrix_to_csv(W, path)
    sidecar = json.loads((tmp_path / "weyl.csv.json").read_text())
    assert sidecar["lambda"] == 1.0 and sidecar["M"] == 8
    rows = (tmp_path / "weyl.csv").read_text().strip().splitlines()
    assert rows[0] == "row,col,re,im"
    assert len(rows) == 1 + 8 * 8
    got = np.zeros((8, 8), dtype=complex)
    for line in rows[1:]:
        i, j, re, im = line.split(",")
        got[int(i), int(j)] = float(re) + 1j * float(im)
    assert np.allclose(got, W.entries, rtol=0, atol=1e-18)
