"""Fourier-multiplier calculus for the fractional Swift-Hohenberg operator.

Contains the fractional Laplacian (spectral route and an independent
singular-integral oracle), the linear symbol and its semigroup, the sharp
mode filters, and the Taylor remainder multipliers of the symbol around the
critical wavenumbers ``+-1`` and the second harmonic ``+-2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gamma as gamma_fn

import numpy as np
from scipy import integrate

from .spectral import Grid1D, SpectralField


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""


def check_alpha(alpha: float) -> float:
    if not 0.0 < alpha < 2.0:
        raise ValueError(f"alpha must lie in (0, 2), got {alpha}")
    return float(alpha)


@dataclass(frozen=True)
class FilterConfig:
    """Half-width ``delta`` of the critical bands and radius ``r0`` of the low-pass ball."""

    delta: float = 0.5
    r0: float = 0.125

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if not self.r0 > 0.0:
            raise ValueError(f"r0 must be positive, got {self.r0}")
        if not 3.0 * self.r0 < self.delta:
            raise ValueError(f"need 3*r0 < delta, got r0={self.r0}, delta={self.delta}")


# ---------------------------------------------------------------------------
# fractional Laplacian
# ---------------------------------------------------------------------------

def frac_laplacian(f: SpectralField, nu: float) -> SpectralField:
    """``(-Delta)^nu f`` via the multiplier ``|xi|^(2 nu)``."""
    if not 0.0 < nu <= 2.0:
        raise ValueError(f"nu must lie in (0, 2], got {nu}")
    return f.multiply_symbol(np.abs(f.grid.xi) ** (2.0 * nu))


def frac_laplacian_constant(alpha: float) -> float:
    """Normalisation making ``exp(i xi x)`` an eigenfunction with eigenvalue ``|xi|^alpha``."""
    alpha = check_alpha(alpha)
    return 2.0**alpha * gamma_fn(0.5 * (1.0 + alpha)) / (np.sqrt(np.pi) * abs(gamma_fn(-0.5 * alpha)))


def frac_laplacian_singular_oracle(func, x: float, alpha: float, *, tol: float = 1e-10,
                                   inner: float = 0.05, omega: float | None = None) -> float:
    """Evaluate ``(-Delta)^(alpha/2) func`` at ``x`` from the singular integral.

    Uses the symmetrised form ``c_alpha int_0^inf (2u(x) - u(x+y) - u(x-y)) / y^(1+alpha) dy``.
    The excised piece ``[0, inner]`` is integrated from the even expansion
    ``D(y) ~ a y^2 + b y^4`` fitted to the second difference at ``inner`` and
    ``inner/2``, which avoids the cancellation of the integrand at tiny ``y``.
    For a non-decaying single-frequency ``func`` (``a cos(omega x) + b sin(omega x)``)
    pass ``omega``: the symmetric tail sum is then ``2 func(x) cos(omega y)`` and is
    integrated with a Fourier-weight rule.
    """
    alpha = check_alpha(alpha)
    u0 = float(func(x))

    def second_diff(y):
        return 2.0 * u0 - func(x + y) - func(x - y)

    h = inner
    d1, d2 = second_diff(0.5 * h), second_diff(h)
    # D(y) = a y^2 + b y^4 through (h/2, d1) and (h, d2)
    s1, s2 = (0.5 * h) ** 2, h**2
    det = s1 * s2**2 - s2 * s1**2
    a = (d1 * s2**2 - d2 * s1**2) / det
    b = (s1 * d2 - s2 * d1) / det
    inner_part = a * h ** (2.0 - alpha) / (2.0 - alpha) + b * h ** (4.0 - alpha) / (4.0 - alpha)

    def integrand(y):
        return second_diff(y) / y ** (1.0 + alpha)

    mid, err_mid = integrate.quad(integrand, h, 1.0, epsabs=tol, epsrel=tol, limit=200)
    if err_mid > 10 * tol * max(1.0, abs(mid)):
        raise QuadratureError(f"near-field integral error {err_mid:.2e} above tolerance")

    # tail: 2u(x) int_1^inf y^(-1-alpha) dy  minus the shifted samples
    tail_const = 2.0 * u0 / alpha
    if omega is None:
        tail_var, err_tail = integrate.quad(
            lambda y: (func(x + y) + func(x - y)) / y ** (1.0 + alpha),
            1.0, np.inf, epsabs=tol, epsrel=tol, limit=500)
        if err_tail > 10 * tol * max(1.0, abs(tail_var)):
            raise QuadratureError(f"tail integral error {err_tail:.2e} above tolerance")
    else:
        tail_var, err_tail = integrate.quad(lambda y: y ** (-1.0 - alpha), 1.0, np.inf,
                                            weight="cos", wvar=omega, epsabs=tol, limlst=100)
        tail_var *= 2.0 * u0
    return frac_laplacian_constant(alpha) * (inner_part + mid + tail_const - tail_var)


# ---------------------------------------------------------------------------
# linear symbol and semigroup
# ---------------------------------------------------------------------------

def sh_symbol_eval(xi, alpha: float, eps: float = 0.0):
    """``-(1 - |xi|^alpha)^2 + eps^2``."""
    return -(1.0 - np.abs(xi) ** alpha) ** 2 + eps**2


def semigroup_apply(f: SpectralField, t: float, alpha: float, eps: float) -> SpectralField:
    if t < 0:
        raise ValueError(f"semigroup time must be >= 0, got {t}")
    return f.multiply_symbol(np.exp(t * sh_symbol_eval(f.grid.xi, alpha, eps)))


def sigma_s(alpha: float, delta: float) -> float:
    """Decay rate of the stable part of the semigroup outside the critical bands."""
    m = min(1.0, 1.0 - abs(1.0 - delta) ** alpha, abs(1.0 + delta) ** alpha - 1.0)
    return 0.5 * m**2


@dataclass(frozen=True)
class SemigroupBounds:
    sigma_s: float
    sigma_c: float = 1.0
    C_Lambda: float = 1.0

    @classmethod
    def for_params(cls, alpha: float, config: FilterConfig) -> "SemigroupBounds":
        s = sigma_s(alpha, config.delta)
        if not s > 0:
            raise ValueError("sigma_s must be positive")
        return cls(sigma_s=s)


def semigroup_bound_check(t: float, alpha: float, eps: float, config: FilterConfig = FilterConfig(),
                          grid: Grid1D | None = None) -> tuple[float, float]:
    """Sup of the semigroup symbol over the critical and the stable lattice modes."""
    bounds = SemigroupBounds.for_params(alpha, config)
    if eps**2 > bounds.sigma_s:
        raise ValueError(f"eps^2={eps**2} exceeds sigma_s={bounds.sigma_s}")
    grid = grid or Grid1D(K=64, N=1024)
    g = np.exp(t * sh_symbol_eval(grid.xi, alpha, eps))
    mc = critical_mask(grid.xi, config.delta)
    return float(np.max(g * mc)), float(np.max(g * (1.0 - mc)))


# ---------------------------------------------------------------------------
# mode filters
# ---------------------------------------------------------------------------

def critical_mask(xi, delta: float) -> np.ndarray:
    """Indicator of the open balls of radius ``delta`` around ``+-1``."""
    xi = np.asarray(xi)
    return ((np.abs(xi - 1.0) < delta) | (np.abs(xi + 1.0) < delta)).astype(float)


def low_mask(xi, r0: float) -> np.ndarray:
    """Indicator of ``|xi| <= r0``."""
    return (np.abs(np.asarray(xi)) <= r0).astype(float)


def band_mask(xi, k: int, halfwidth: float) -> np.ndarray:
    """Indicator of the open band ``|xi - k| < halfwidth``."""
    return (np.abs(np.asarray(xi) - k) < halfwidth).astype(float)


_FILTERS = ("critical", "stable", "low", "low_complement")


def mode_filter(f: SpectralField, which: str, config: FilterConfig = FilterConfig()) -> SpectralField:
    if which not in _FILTERS:
        raise ValueError(f"unknown filter {which!r}; choose from {_FILTERS}")
    xi = f.grid.xi
    if which in ("critical", "stable"):
        m = critical_mask(xi, config.delta)
        return f.multiply_symbol(m if which == "critical" else 1.0 - m)
    m = low_mask(xi, config.r0)
    return f.multiply_symbol(m if which == "low" else 1.0 - m)


# ---------------------------------------------------------------------------
# Taylor remainder multipliers
# ---------------------------------------------------------------------------

def _power_derivs(r, alpha):
    """First three derivatives of ``|r|^alpha`` for ``r != 0``."""
    s = np.sign(r)
    a = np.abs(r)
    d1 = s * alpha * a ** (alpha - 1.0)
    d2 = alpha * (alpha - 1.0) * a ** (alpha - 2.0)
    d3 = s * alpha * (alpha - 1.0) * (alpha - 2.0) * a ** (alpha - 3.0)
    return d1, d2, d3


def remainder_kernel(r, alpha: float):
    """``3 d|r|^a d^2|r|^a - (1 - |r|^a) d^3|r|^a``: half the third derivative of the symbol."""
    d1, d2, d3 = _power_derivs(r, alpha)
    return 3.0 * d1 * d2 - (1.0 - np.abs(r) ** alpha) * d3


def _quad(fun, a, b, tol=1e-10):
    if a == b:
        return 0.0
    val, err = integrate.quad(fun, a, b, epsabs=tol, epsrel=tol, limit=200)
    if err > 10 * tol * max(1.0, abs(val)):
        raise QuadratureError(f"quadrature on [{a}, {b}] error {err:.2e} above tolerance")
    return val


_KINDS = ("r_plus", "r_minus", "m1_plus", "m1_minus", "m2_plus", "m2_minus")


def remainder_multiplier(xi: float, alpha: float, kind: str, tol: float = 1e-10) -> float:
    """Evaluate one of the remainder multipliers ``r^+-``, ``m^{1,+-}``, ``m^{2,+-}`` at ``xi``."""
    alpha = check_alpha(alpha)
    if kind not in _KINDS:
        raise ValueError(f"unknown multiplier {kind!r}; choose from {_KINDS}")
    sign = 1.0 if kind.endswith("plus") else -1.0
    if not sign * xi > 0:
        raise ValueError(f"{kind} needs xi on the {'positive' if sign > 0 else 'negative'} half-line")
    xi = float(xi)
    kern = lambda r: remainder_kernel(r, alpha)  # noqa: E731
    if kind.startswith("r_"):
        return _quad(lambda r: kern(r) * (xi - r) ** 2, sign, xi, tol)
    if kind.startswith("m1"):
        base = _quad(lambda r: kern(r) * (xi + sign * 2.0 - 2.0 * r), sign, 2.0 * sign, tol)
        return base * (xi - sign * 2.0)
    return _quad(lambda r: kern(r) * (xi - r) ** 2, 2.0 * sign, xi, tol)


def remainder_multiplier_array(xi, alpha: float, kind: str, tol: float = 1e-10) -> np.ndarray:
    return np.array([remainder_multiplier(v, alpha, kind, tol) for v in np.ravel(xi)]).reshape(np.shape(xi))


def c_plus(alpha: float) -> float:
    """Closed form of the remainder constant at the second harmonic."""
    alpha = check_alpha(alpha)
    return 2.0 ** (2.0 * alpha) - 2.0 ** (alpha + 1.0) + (1.0 - alpha**2)


def c_pm_quadrature(alpha: float, sign: int = 1, tol: float = 1e-12) -> float:
    """The remainder constant from its defining integral over ``[+-1, +-2]``."""
    alpha = check_alpha(alpha)
    s = 1.0 if sign > 0 else -1.0
    return _quad(lambda r: remainder_kernel(r, alpha) * (2.0 * s - r) ** 2, s, 2.0 * s, tol)


def taylor_identity_defect(xi: float, alpha: float) -> float:
    """``|-(1-|xi|^a)^2 + a^2 (xi -+ 1)^2 + r^+-(xi)|`` on the half-line of ``xi``."""
    alpha = check_alpha(alpha)
    if xi == 0:
        raise ValueError("xi must be nonzero")
    s = 1.0 if xi > 0 else -1.0
    r = remainder_multiplier(xi, alpha, "r_plus" if s > 0 else "r_minus")
    return abs(-(1.0 - abs(xi) ** alpha) ** 2 + alpha**2 * (xi - s) ** 2 + r)


def remainder_reconstruction_defect(xi: float, alpha: float) -> float:
    """``|r^+- - (c^+- + m^{1,+-} + m^{2,+-})|`` at ``xi``."""
    s = "plus" if xi > 0 else "minus"
    r = remainder_multiplier(xi, alpha, f"r_{s}")
    m1 = remainder_multiplier(xi, alpha, f"m1_{s}")
    m2 = remainder_multiplier(xi, alpha, f"m2_{s}")
    return abs(r - (c_plus(alpha) + m1 + m2))


class SymbolTable:
    """Multiplier arrays on a grid for fixed ``alpha``, ``eps`` and filter configuration.

    The remainder multipliers are tabulated only on the lattice points within
    ``window`` of their base point (``+-1`` for ``r``, ``+-2`` for ``m1``/``m2``)
    and are ``nan`` elsewhere.
    """

    def __init__(self, grid: Grid1D, alpha: float, eps: float = 0.0,
                 config: FilterConfig = FilterConfig(), window: float = 0.4):
        self.grid = grid
        self.alpha = check_alpha(alpha)
        self.eps = eps
        self.config = config
        self.window = window
        xi = grid.xi
        self.sh_symbol = -(1.0 - np.abs(xi) ** alpha) ** 2
        self.linear_symbol = self.sh_symbol + eps**2
        self.m_c = critical_mask(xi, config.delta)
        self.m_s = 1.0 - self.m_c
        self.m_0 = low_mask(xi, config.r0)
        for a in (self.sh_symbol, self.linear_symbol, self.m_c, self.m_s, self.m_0):
            a.flags.writeable = False

    def _tabulate(self, base: float, kind: str) -> np.ndarray:
        xi = self.grid.xi
        out = np.full(xi.shape, np.nan)
        sel = np.abs(xi - base) <= self.window
        out[sel] = remainder_multiplier_array(xi[sel], self.alpha, kind)
        out.flags.writeable = False
        return out

    @cached_property
    def r_plus(self):
        return self._tabulate(1.0, "r_plus")

    @cached_property
    def r_minus(self):
        return self._tabulate(-1.0, "r_minus")

    @cached_property
    def m1_plus(self):
        return self._tabulate(2.0, "m1_plus")

    @cached_property
    def m1_minus(self):
        return self._tabulate(-2.0, "m1_minus")

    @cached_property
    def m2_plus(self):
        return self._tabulate(2.0, "m2_plus")

    @cached_property
    def m2_minus(self):
        return self._tabulate(-2.0, "m2_minus")

    @cached_property
    def semigroup_bounds(self) -> SemigroupBounds:
        return SemigroupBounds.for_params(self.alpha, self.config)
