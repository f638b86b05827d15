"""Fractional Swift-Hohenberg solver.

    u_t = -(1 - (-Delta)^(alpha/2))^2 u + eps^2 u - a1 u^2 - a2 u^3

on a periodic fast grid, integrated with ETDRK4 using the exact linear
symbol.  Nonlinear products are dealiased by zero padding.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace

import numpy as np

from .etdrk4 import ETDRK4, steps_for
from .ginzburg_landau import BlowUpError, ResolutionError, tail_amplitude
from .spectral import Grid1D, SpectralField, h_norm
from .symbols import FilterConfig, check_alpha, sh_symbol_eval, sigma_s


@dataclass(frozen=True)
class SHParams:
    alpha: float
    eps: float
    a1: float = 0.0
    a2: float = 1.0
    dt: float = 0.05
    dealias_factor: int = 2

    def __post_init__(self):
        if self.alpha != 2.0:
            check_alpha(self.alpha)
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.dealias_factor < 2:
            raise ValueError("dealias_factor must be >= 2 for an exactly dealiased cubic")

    def check_decay(self, config: FilterConfig = FilterConfig()):
        s = sigma_s(self.alpha, config.delta)
        if self.eps**2 > s:
            raise ValueError(f"eps^2={self.eps**2:.4g} exceeds sigma_s={s:.4g}")


@dataclass(frozen=True)
class SHState:
    u: SpectralField
    t: float = 0.0


def _pad_real(spec, n, m):
    """Zero-pad an rfft spectrum of length n//2+1 to one of length m//2+1."""
    out = np.zeros(m // 2 + 1, dtype=complex)
    h = n // 2
    out[:h] = spec[:h]
    out[h] = 0.5 * spec[h]
    return out


def _nonlinear_real(a1, a2, n, m):
    """``-a1 u^2 - a2 u^3`` acting on rfft coefficients, dealiased on ``m`` points."""
    scale = m / n

    def nonlinear(v):
        u = np.fft.irfft(_pad_real(v, n, m), n=m) * scale
        w = -(a1 + a2 * u) * u * u
        spec = np.fft.rfft(w)[: n // 2 + 1] / scale
        spec[n // 2] = 2.0 * spec[n // 2].real
        return spec

    return nonlinear


def sh_linear_symbol(grid: Grid1D, params: SHParams) -> np.ndarray:
    return sh_symbol_eval(grid.xi, params.alpha, params.eps)


def sh_nonlinearity(u: SpectralField, params: SHParams) -> SpectralField:
    """``-a1 u^2 - a2 u^3`` computed pseudospectrally with zero padding."""
    g = u.grid
    n, m = g.N, params.dealias_factor * g.N
    v = np.fft.rfft(u.phys.real)
    out = _nonlinear_real(params.a1, params.a2, n, m)(v)
    return SpectralField(g, phys=np.fft.irfft(out, n=n).astype(complex))


class SHSolver:
    """ETDRK4 time stepper working on the real FFT of ``u``."""

    blowup = 1e6

    def __init__(self, grid: Grid1D, params: SHParams, guard: float = 1e-8):
        self.grid = grid
        self.params = params
        self.guard = guard
        # the symbol is even, so the first N/2+1 entries cover the rfft modes
        self._lin_r = sh_linear_symbol(grid, params)[: grid.N // 2 + 1].copy()
        self._nl = _nonlinear_real(params.a1, params.a2, grid.N, params.dealias_factor * grid.N)
        self._steppers = {}

    def _stepper(self, dt):
        key = round(dt, 15)
        if key not in self._steppers:
            self._steppers[key] = ETDRK4(self._lin_r, self._nl, dt)
        return self._steppers[key]

    def _to_r(self, u: SpectralField):
        return np.fft.rfft(u.phys.real)

    def _from_r(self, v) -> SpectralField:
        return SpectralField(self.grid, phys=np.fft.irfft(v, n=self.grid.N))

    def step(self, state: SHState, dt: float | None = None) -> SHState:
        dt = self.params.dt if dt is None else dt
        v = self._stepper(dt).step(self._to_r(state.u))
        if not np.all(np.isfinite(v)):
            raise BlowUpError("SH solution became non-finite", state.t + dt)
        return SHState(self._from_r(v), state.t + dt)

    def advance(self, state: SHState, t_end: float) -> SHState:
        n, dt = steps_for(t_end - state.t, self.params.dt)
        if n == 0:
            return state
        stepper = self._stepper(dt)
        v = self._to_r(state.u)
        with np.errstate(over="ignore", invalid="ignore"):
            for i in range(n):
                v = stepper.step(v)
                if (i & 63) == 63 or i == n - 1:
                    if not np.all(np.isfinite(v)):
                        raise BlowUpError("SH solution became non-finite", state.t + (i + 1) * dt)
                    peak = np.max(np.abs(np.fft.irfft(v, n=self.grid.N)))
                    if peak > self.blowup:
                        raise BlowUpError(f"SH amplitude {peak:.3e} exceeds {self.blowup:.0e}",
                                          state.t + (i + 1) * dt)
        return SHState(self._from_r(v), t_end)

    def check_guard(self, state: SHState):
        tail = tail_amplitude(state.u)
        if tail >= self.guard:
            raise ResolutionError(f"SH spectral tail {tail:.2e} >= {self.guard:.0e} at t={state.t}",
                                  state.t)


def sh_step(state: SHState, params: SHParams) -> SHState:
    return SHSolver(state.u.grid, params).step(state)


def sh_evolve(u0: SpectralField, params: SHParams, t_end: float, samples: int,
              guard: float = 1e-8) -> list[SHState]:
    """Evolve ``u0`` and return ``samples`` uniformly spaced states on ``[0, t_end]``."""
    if samples < 2:
        raise ValueError("need at least 2 samples")
    solver = SHSolver(u0.grid, params, guard)
    state = SHState(SpectralField(u0.grid, phys=u0.phys.real), 0.0)
    solver.check_guard(state)
    out = [state]
    for t in np.linspace(0.0, t_end, samples)[1:]:
        state = solver.advance(state, float(t))
        solver.check_guard(state)
        out.append(state)
    return out


def self_convergence_probe(u0: SpectralField, params: SHParams, t_probe: float = 1.0) -> float:
    """H^0 difference at ``t_probe`` between runs with ``dt`` and ``dt/2``."""
    coarse = SHSolver(u0.grid, params).advance(SHState(u0), t_probe)
    fine = SHSolver(u0.grid, replace(params, dt=params.dt / 2)).advance(SHState(u0), t_probe)
    return h_norm(coarse.u - fine.u, 0.0)


def select_dt(u0: SpectralField, params: SHParams, tol: float = 1e-8, max_halvings: int = 6) -> SHParams:
    """Halve ``params.dt`` until the self-convergence probe at ``t = 1`` is below ``tol``."""
    for _ in range(max_halvings + 1):
        if self_convergence_probe(u0, params) <= tol:
            return params
        params = replace(params, dt=params.dt / 2)
    return params


# ---------------------------------------------------------------------------
# checkpoints
# ---------------------------------------------------------------------------

def write_checkpoint_csv(states, path):
    """One row ``t,j,re,im`` per lattice mode and sample."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "j", "re", "im"])
        for s in states:
            g = s.u.grid
            order = np.argsort(g.j)
            four = s.u.four
            for idx in order:
                w.writerow([repr(float(s.t)), int(g.j[idx]), repr(float(four[idx].real)),
                            repr(float(four[idx].imag))])


def read_checkpoint_csv(path, grid: Grid1D) -> list[SHState]:
    data = {}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            t = float(row["t"])
            data.setdefault(t, {})[int(row["j"])] = complex(float(row["re"]), float(row["im"]))
    out = []
    for t in sorted(data):
        modes = data[t]
        if len(modes) != grid.N:
            raise ValueError(f"sample t={t} has {len(modes)} modes, grid has {grid.N}")
        four = np.zeros(grid.N, dtype=complex)
        for j, c in modes.items():
            four[grid.index(j)] = c
        out.append(SHState(SpectralField(grid, four=four), t))
    return out
