"""Ginzburg-Landau amplitude equation and the first-order / improved ansatz.

The amplitude ``A(X, T)`` solves

    A_T = alpha^2 A_XX + A - gamma |A|^2 A,
    gamma = -(4 + 2/(alpha^2 + c_plus)) a1^2 + 3 a2,

on a periodic slow grid.  :func:`build_ansatz` maps a GL state to the fast
grid: ``psi`` is the plain modulated pattern, ``Psi`` adds the mean-mode and
second-harmonic corrections ``A0 = -2 a1 |A|^2`` and
``A2 = -a1/(alpha^2 + c_plus) A^2`` with every envelope low-pass filtered in
the fast frequency variable.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .etdrk4 import ETDRK4, steps_for
from .spectral import (
    Grid1D,
    SpectralField,
    cb_norm,
    dealiased_product,
    fast_grid_for,
    scale_embed,
    shift_frequency,
    slow_grid_matches,
)
from .symbols import FilterConfig, c_plus, check_alpha, mode_filter

log = logging.getLogger(__name__)


class BlowUpError(RuntimeError):
    """The solution norm exceeded the blow-up threshold or became non-finite."""

    def __init__(self, msg, time=None):
        super().__init__(msg)
        self.time = time


class ResolutionError(RuntimeError):
    """The spectral tail guard was violated."""

    def __init__(self, msg, time=None):
        super().__init__(msg)
        self.time = time


@dataclass(frozen=True)
class GLParams:
    alpha: float
    a1: float
    a2: float
    c_plus: float
    gamma: float
    diffusion: float

    @property
    def a2_coefficient(self) -> float:
        """``-a1/(alpha^2 + c_plus)``, the factor in ``A2 = coef * A^2``."""
        return -self.a1 / (self.alpha**2 + self.c_plus)


def gl_coefficients(alpha: float, a1: float, a2: float) -> GLParams:
    alpha = float(alpha)
    if alpha == 2.0:
        # classical limit: the closed form stays valid and gives c_plus = 5
        cp = 5.0
    else:
        cp = c_plus(check_alpha(alpha))
    denom = alpha**2 + cp
    if not denom > 0:
        raise ValueError(f"alpha^2 + c_plus = {denom} must be positive")
    gamma = -(4.0 + 2.0 / denom) * a1**2 + 3.0 * a2
    return GLParams(alpha=alpha, a1=float(a1), a2=float(a2), c_plus=cp, gamma=gamma,
                    diffusion=alpha**2)


@dataclass(frozen=True)
class GLState:
    A: SpectralField
    T: float = 0.0

    @property
    def slow_grid(self) -> Grid1D:
        return self.A.grid


def tail_amplitude(f: SpectralField, modes: int = 2) -> float:
    """Largest coefficient modulus among the ``modes`` outermost lattice modes on each side."""
    g = f.grid
    sel = np.abs(g.j) >= g.N // 2 - modes + 1
    return float(np.max(np.abs(f.four[sel])))


def check_guard(f: SpectralField, tol: float, time=None, what="field"):
    tail = tail_amplitude(f)
    if tail >= tol:
        raise ResolutionError(f"{what} spectral tail {tail:.2e} >= {tol:.0e} at t={time}", time)


def default_slow_grid(L_X: float = 16 * np.pi, N_slow: int = 256) -> Grid1D:
    K = L_X / (2 * np.pi)
    if abs(K - round(K)) > 1e-9:
        raise ValueError(f"slow period {L_X} must be a multiple of 2 pi")
    return Grid1D(K=int(round(K)), N=N_slow)


def sech_amplitude(grid: Grid1D, amplitude: float = 0.8, width: float = 1.0) -> SpectralField:
    """``amplitude * sech(X / width)`` centred in the slow domain."""
    return SpectralField(grid, phys=amplitude / np.cosh(grid.x / width))


def gl_linear_symbol(grid: Grid1D, params: GLParams) -> np.ndarray:
    return -params.diffusion * grid.xi**2 + 1.0


def _cubic(A: SpectralField) -> SpectralField:
    return dealiased_product(A, A.conj(), A)


def gl_rhs(state: GLState | SpectralField, params: GLParams) -> SpectralField:
    """``alpha^2 A_XX + A - gamma |A|^2 A`` with the cubic term dealiased."""
    A = state.A if isinstance(state, GLState) else state
    lin = A.multiply_symbol(gl_linear_symbol(A.grid, params))
    return lin - params.gamma * _cubic(A)


class GLSolver:
    """ETDRK4 integrator for the GL equation on a fixed slow grid."""

    blowup = 1e6

    def __init__(self, grid: Grid1D, params: GLParams, dT: float, guard: float = 1e-10):
        self.grid = grid
        self.params = params
        self.dT = dT
        self.guard = guard
        self._steppers = {}

    def _stepper(self, dt: float) -> ETDRK4:
        key = round(dt, 15)
        if key not in self._steppers:
            grid, gamma = self.grid, self.params.gamma

            def nonlinear(v):
                A = SpectralField(grid, four=v)
                return -gamma * _cubic(A).four

            self._steppers[key] = ETDRK4(gl_linear_symbol(grid, self.params), nonlinear, dt)
        return self._steppers[key]

    def advance(self, state: GLState, T_end: float) -> GLState:
        n, dt = steps_for(T_end - state.T, self.dT)
        if n == 0:
            return state
        stepper = self._stepper(dt)
        v = state.A.four
        with np.errstate(over="ignore", invalid="ignore"):
            for i in range(n):
                v = stepper.step(v)
                if not np.all(np.isfinite(v)):
                    raise BlowUpError("GL solution became non-finite", state.T + (i + 1) * dt)
        A = SpectralField(self.grid, four=v)
        peak = float(np.max(np.abs(A.phys)))
        if peak > self.blowup:
            raise BlowUpError(f"GL amplitude {peak:.3e} exceeds {self.blowup:.0e}", T_end)
        check_guard(A, self.guard, T_end, "GL amplitude")
        return GLState(A, T_end)

    def trajectory(self, state: GLState, times) -> list[GLState]:
        out = []
        for T in times:
            if T < state.T - 1e-14:
                raise ValueError("sample times must be non-decreasing")
            state = self.advance(state, T)
            out.append(state)
        return out


def gl_evolve(state: GLState, params: GLParams, T_end: float, dT: float,
              guard: float = 1e-10) -> GLState:
    """Evolve ``state`` to ``T_end`` with ETDRK4 steps of size at most ``dT``."""
    check_guard(state.A, guard, state.T, "GL initial amplitude")
    return GLSolver(state.slow_grid, params, dT, guard).advance(state, T_end)


# ---------------------------------------------------------------------------
# ansatz
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AnsatzFields:
    """First-order ``psi``, improved ``Psi`` and the analytic fast-time derivative of ``Psi``."""

    psi: SpectralField
    Psi: SpectralField
    A0: SpectralField
    A2: SpectralField
    dPsi_dt: SpectralField
    eps: float
    T: float

    @property
    def grid(self) -> Grid1D:
        return self.Psi.grid


def _modulated(envelope: SpectralField, eps: float, k: int, fast: Grid1D,
               config: FilterConfig | None) -> SpectralField:
    """``E0(envelope(eps .)) exp(i k .)``, or the unfiltered version if ``config`` is None."""
    f = scale_embed(envelope, eps, 0, fast)
    if config is not None:
        f = mode_filter(f, "low", config)
    return shift_frequency(f, k)


def _harmonic_sum(A, A2, A0, eps, fast, config):
    """``E0A e^{ix} + c.c. + eps (E0A2 e^{2ix} + c.c. + E0A0)``."""
    out = _modulated(A, eps, 1, fast, config) + _modulated(A.conj(), eps, -1, fast, config)
    if A2 is not None:
        corr = (_modulated(A2, eps, 2, fast, config) + _modulated(A2.conj(), eps, -2, fast, config)
                + _modulated(A0, eps, 0, fast, config))
        out = out + eps * corr
    return out


def first_order_psi(A: SpectralField, eps: float, fast: Grid1D) -> SpectralField:
    """``A(eps x) e^{ix} + c.c.``"""
    return _modulated(A, eps, 1, fast, None) + _modulated(A.conj(), eps, -1, fast, None)


def build_ansatz(state: GLState, params: GLParams, eps: float, fast_grid: Grid1D | None = None,
                 config: FilterConfig = FilterConfig()) -> AnsatzFields:
    A = state.A
    fast = fast_grid if fast_grid is not None else fast_grid_for(A.grid, eps)
    if not slow_grid_matches(A.grid, fast, eps):
        raise ValueError(f"incommensurate eps={eps} for slow period {A.grid.L} and fast {fast.L}")
    a1 = params.a1
    coef2 = params.a2_coefficient
    AA = dealiased_product(A, A.conj())
    A0 = -2.0 * a1 * AA
    A2 = coef2 * dealiased_product(A, A)

    A_T = gl_rhs(A, params)
    A0_T = -2.0 * a1 * (dealiased_product(A_T, A.conj()) + dealiased_product(A, A_T.conj()))
    A2_T = coef2 * 2.0 * dealiased_product(A, A_T)

    psi = first_order_psi(A, eps, fast)
    Psi = _harmonic_sum(A, A2, A0, eps, fast, config)
    # d/dt at fixed x is eps^2 d/dT of the slow envelopes
    dPsi_dt = eps**2 * _harmonic_sum(A_T, A2_T, A0_T, eps, fast, config)
    return AnsatzFields(psi=psi, Psi=Psi, A0=A0, A2=A2, dPsi_dt=dPsi_dt, eps=eps, T=state.T)


def critical_part(f: SpectralField, config: FilterConfig = FilterConfig()) -> SpectralField:
    return mode_filter(f, "critical", config)


def holder_surrogate(ansatz: AnsatzFields, config: FilterConfig = FilterConfig(), k: int = 1) -> float:
    """Sup-norm surrogate of the Hoelder bound on the critical and stable parts of ``Psi``.

    Uses the splitting ``eps Psi = eps Psi_c + eps^2 Psi_s``, i.e.
    ``Psi_c = E_c Psi`` and ``Psi_s = eps^-1 E_s Psi``; both are O(1).
    """
    Psi = ansatz.Psi
    crit = mode_filter(Psi, "critical", config)
    stab = mode_filter(Psi, "stable", config) / ansatz.eps
    return cb_norm(crit, k) + cb_norm(stab, k)
