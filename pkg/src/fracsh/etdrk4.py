"""Fourth-order exponential time differencing Runge-Kutta (Cox-Matthews).

The phi-functions are evaluated in closed form for ``|z| >= 1`` and by
averaging over a circle of radius 2 around ``z`` otherwise, following
Kassam & Trefethen (2005); the circle keeps every evaluation point at
``|w| >= 1`` where the closed forms are free of cancellation.
"""

from __future__ import annotations

import numpy as np


def phi_functions(z, n_contour: int = 64, radius: float = 2.0, small: float = 1.0):
    """Return ``(phi1, phi2, phi3)`` of the array ``z`` (real or complex)."""
    z = np.asarray(z, dtype=complex)
    phi = [np.empty_like(z) for _ in range(3)]
    big = np.abs(z) >= small
    zb = z[big]
    for k, val in enumerate(_phi_closed(zb)):
        phi[k][big] = val
    if np.any(~big):
        roots = radius * np.exp(2j * np.pi * (np.arange(n_contour) + 0.5) / n_contour)
        w = z[~big][:, None] + roots[None, :]
        for k, val in enumerate(_phi_closed(w)):
            phi[k][~big] = val.mean(axis=1)
    return tuple(phi)


def _phi_closed(z):
    ez = np.exp(z)
    p1 = (ez - 1.0) / z
    p2 = (ez - 1.0 - z) / z**2
    p3 = (ez - 1.0 - z - 0.5 * z**2) / z**3
    return p1, p2, p3


class ETDRK4:
    """ETDRK4 stepper for ``u_t = L u + N(u)`` with diagonal ``L`` in Fourier space.

    ``linear`` is the multiplier array, ``nonlinear`` maps Fourier
    coefficients to Fourier coefficients of ``N(u)``.
    """

    def __init__(self, linear, nonlinear, dt: float):
        if not dt > 0:
            raise ValueError(f"dt must be positive, got {dt}")
        self.dt = dt
        self.nonlinear = nonlinear
        lin = np.asarray(linear, dtype=complex)
        real = np.all(lin.imag == 0)
        z = dt * lin
        self.E = np.exp(z)
        self.E2 = np.exp(0.5 * z)
        h1, _, _ = phi_functions(0.5 * z)
        p1, p2, p3 = phi_functions(z)
        self.Q = 0.5 * dt * h1
        self.f1 = dt * (p1 - 3.0 * p2 + 4.0 * p3)
        self.f2 = dt * (p2 - 2.0 * p3)
        self.f3 = dt * (4.0 * p3 - p2)
        if real:
            for name in ("E", "E2", "Q", "f1", "f2", "f3"):
                setattr(self, name, getattr(self, name).real.copy())

    def step(self, v):
        N = self.nonlinear
        Nv = N(v)
        a = self.E2 * v + self.Q * Nv
        Na = N(a)
        b = self.E2 * v + self.Q * Na
        Nb = N(b)
        c = self.E2 * a + self.Q * (2.0 * Nb - Nv)
        Nc = N(c)
        return self.E * v + self.f1 * Nv + 2.0 * self.f2 * (Na + Nb) + self.f3 * Nc

    def advance(self, v, n_steps: int):
        for _ in range(n_steps):
            v = self.step(v)
        return v


def steps_for(span: float, dt_max: float) -> tuple[int, float]:
    """Smallest step count with step size ``<= dt_max`` that lands exactly on ``span``."""
    if span <= 0:
        return 0, dt_max
    n = int(np.ceil(span / dt_max - 1e-9))
    return n, span / n
