"""Bundled test functions with closed-form central transforms.

All of them decay below 1e-12 at the default grid boundary (L = 8) in z, so
out-of-grid truncation stays under the verification tolerances.

The default Gaussian is modulated in t: v(t) = cos(omega0 t) e^{-t^2/(2 s^2)}
with a wide window s.  The modulation centers the spectrum of v at
|lambda| = omega0, so essentially all of the central-variable mass lands
inside a fan grid truncated to |lambda| in [eps0, lam_max]; an unmodulated
Gaussian leaves a percent-level chunk of mass below any workable eps0 and
round-trip identities would stall there regardless of grid quality.
"""

from __future__ import annotations

import math

import numpy as np

from .field import GridSpec, SeparableHField, zfield_from_callable


def gaussian(grid: GridSpec | None = None, sigma_z: float = 1.0, sigma_t: float = 10.0,
             omega0: float = 1.0, n: int = 1) -> SeparableHField:
    """f(z, t) = e^{-|z|^2 / (2 sigma_z^2)} cos(omega0 t) e^{-t^2 / (2 sigma_t^2)}.

    The central transform of the t-factor is the two-bump Gaussian
    v_hat(lam) = (sigma_t sqrt(2 pi) / 2) (G(lam - omega0) + G(lam + omega0))
    with G(x) = e^{-sigma_t^2 x^2 / 2}.
    """
    if grid is None:
        grid = GridSpec(8.0, 64)
    s2 = 2.0 * sigma_z ** 2

    def u0(r):
        return np.exp(-np.asarray(r) ** 2 / s2)

    def v(t):
        return np.cos(omega0 * t) * np.exp(-t ** 2 / (2.0 * sigma_t ** 2))

    def v_hat(lam):
        c = sigma_t * math.sqrt(2.0 * math.pi) / 2.0
        return c * (math.exp(-0.5 * (sigma_t * (lam - omega0)) ** 2)
                    + math.exp(-0.5 * (sigma_t * (lam + omega0)) ** 2))

    u = zfield_from_callable(grid, lambda X, Y: u0(np.hypot(X, Y))) if n == 1 else None
    return SeparableHField(grid=grid if n == 1 else None, u=u, v=v, v_hat=v_hat,
                           t_half_width=8.0 * sigma_t + abs(omega0), u0=u0, n=n)


def plain_gaussian(grid: GridSpec | None = None, sigma_z: float = 1.0,
                   sigma_t: float = 1.0, n: int = 1) -> SeparableHField:
    """Unmodulated Gaussian, for checks that do not round-trip through the fan."""
    return gaussian(grid, sigma_z=sigma_z, sigma_t=sigma_t, omega0=0.0, n=n)


def bump(grid: GridSpec | None = None, radius: float = 4.0, t_radius: float = 4.0,
         sigma_t: float | None = None, n: int = 1) -> SeparableHField:
    """Compactly supported smooth bump in z (and in t unless sigma_t is given).

    The z-profile is exp(1 - 1/(1 - (r/radius)^2)) inside the ball, 0 outside;
    its central profile is a bump of half-width t_radius whose transform is
    evaluated by quadrature (no closed form exists).
    """
    if grid is None:
        grid = GridSpec(8.0, 64)
    if radius >= grid.L:
        raise ValueError("bump radius must sit inside the grid")

    def bump_profile(x, width):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        inside = np.abs(x) < width
        q = (x[inside] / width) ** 2
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - q))
        return out

    def u0(r):
        return bump_profile(r, radius)

    if sigma_t is None:
        tq, tw = np.polynomial.legendre.leggauss(200)
        tq = t_radius * tq
        tw = t_radius * tw
        samples = bump_profile(tq, t_radius)

        def v(t):
            return bump_profile(t, t_radius)

        def v_hat(lam):
            return complex(np.sum(tw * samples * np.exp(1j * lam * tq)))

        T = t_radius
    else:

        def v(t):
            return np.exp(-t ** 2 / (2.0 * sigma_t ** 2))

        def v_hat(lam):
            return sigma_t * math.sqrt(2.0 * math.pi) * math.exp(-0.5 * (sigma_t * lam) ** 2)

        T = 8.0 * sigma_t

    u = zfield_from_callable(grid, lambda X, Y: u0(np.hypot(X, Y))) if n == 1 else None
    return SeparableHField(grid=grid if n == 1 else None, u=u, v=v, v_hat=v_hat,
                           t_half_width=T, u0=u0, n=n)


def harmonic_times_radial(grid: GridSpec | None = None, p: int = 1, q: int = 0,
                          sigma: float = 1.0, sigma_t: float = 10.0,
                          omega0: float = 1.0) -> SeparableHField:
    """f(z, t) = z^p zbar^q e^{-|z|^2/(2 sigma^2)} v(t) on the n = 1 grid.

    Not radial (for p != q); exercises the Hecke-Bochner machinery.  The
    separable t-factor matches :func:`gaussian`.
    """
    if grid is None:
        grid = GridSpec(8.0, 64)
    base = gaussian(grid, sigma_z=sigma, sigma_t=sigma_t, omega0=omega0)

    def uz(X, Y):
        Z = X + 1j * Y
        return Z ** p * np.conj(Z) ** q * np.exp(-(X ** 2 + Y ** 2) / (2.0 * sigma ** 2))

    u = zfield_from_callable(grid, uz)
    return SeparableHField(grid=grid, u=u, v=base.v, v_hat=base.v_hat,
                           t_half_width=base.t_half_width, u0=None, uz=uz, n=1)
