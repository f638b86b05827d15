"""Residual of the improved ansatz and epsilon-scaling studies.

``Res(v) = -v_t + Lambda v + N(v)`` is evaluated for ``v = eps Psi`` on the
fast grid with the exact linear symbol, split into critical / stable parts
by the mode filters and into harmonic bands ``|xi - k| < delta``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .ginzburg_landau import (
    AnsatzFields,
    GLParams,
    GLSolver,
    GLState,
    build_ansatz,
    default_slow_grid,
    gl_coefficients,
    sech_amplitude,
)
from .spectral import Grid1D, SpectralField, fast_grid_for, h_norm
from .swift_hohenberg import SHParams, sh_linear_symbol, sh_nonlinearity
from .symbols import FilterConfig, band_mask, mode_filter

log = logging.getLogger(__name__)

BETA = 1.5
BANDS = tuple(range(-4, 5))


@dataclass
class ResiduumSample:
    t: float
    res: SpectralField
    res_c: SpectralField
    res_s: SpectralField
    z_bands: dict
    theta: float

    @property
    def norm_crit(self) -> float:
        return h_norm(self.res_c, self.theta)

    @property
    def norm_stab(self) -> float:
        return h_norm(self.res_s, self.theta)


def band_pass(f: SpectralField, k: int, halfwidth: float) -> SpectralField:
    return f.multiply_symbol(band_mask(f.grid.xi, k, halfwidth))


def compute_residuum(ansatz: AnsatzFields, params: SHParams, config: FilterConfig = FilterConfig(),
                     theta: float = 1.0, t: float | None = None) -> ResiduumSample:
    """Residual of ``eps Psi`` with the analytic time derivative of ``Psi``."""
    eps = params.eps
    if abs(eps - ansatz.eps) > 1e-14:
        raise ValueError(f"ansatz built for eps={ansatz.eps}, parameters have eps={params.eps}")
    v = eps * ansatz.Psi
    lin = v.multiply_symbol(sh_linear_symbol(v.grid, params))
    res = -eps * ansatz.dPsi_dt + lin + sh_nonlinearity(v, params)
    res = SpectralField(res.grid, four=res.four)
    res_c = mode_filter(res, "critical", config)
    res_s = mode_filter(res, "stable", config)
    bands = {k: h_norm(band_pass(res, k, config.delta), theta) for k in BANDS}
    t = ansatz.T / eps**2 if t is None else t
    return ResiduumSample(t=t, res=res, res_c=res_c, res_s=res_s, z_bands=bands, theta=theta)


def fit_slope(eps, values, floor: float = 1e-13):
    """Least-squares slope of ``log(values)`` against ``log(eps)``; ``None`` if degenerate."""
    eps = np.asarray(eps, dtype=float)
    values = np.asarray(values, dtype=float)
    if len(eps) < 2 or np.any(~np.isfinite(values)) or np.any(values <= floor):
        return None
    return float(np.polyfit(np.log(eps), np.log(values), 1)[0])


def check_eps_list(eps_list):
    eps = [float(e) for e in eps_list]
    if len(eps) < 3:
        raise ValueError(f"need at least 3 eps values, got {len(eps)}")
    if any(b >= a for a, b in zip(eps, eps[1:])):
        raise ValueError("eps_list must be strictly decreasing")
    return eps


@dataclass
class ScalingReport:
    eps_list: list
    theta: float
    norms_crit: list
    norms_stab: list
    slope_crit: float | None
    slope_stab: float | None
    rows: list = field(default_factory=list)
    argmax_t: dict = field(default_factory=dict)

    @property
    def degenerate(self) -> bool:
        return self.slope_crit is None or self.slope_stab is None

    def slopes_json(self) -> dict:
        return {"theta": self.theta, "crit_slope": self.slope_crit,
                "stab_slope": self.slope_stab, "eps_list": list(self.eps_list)}


@dataclass(frozen=True)
class AmplitudeRun:
    """A GL trajectory sampled at uniform slow times, reused across an eps sweep."""

    params: GLParams
    states: tuple

    @property
    def times(self):
        return [s.T for s in self.states]


def solve_amplitude(alpha, a1, a2, *, slow_grid: Grid1D | None = None, amplitude: float = 0.3,
                    T_star: float = 1.0, samples: int = 33, dT: float = 1.0 / 1024,
                    A0: SpectralField | None = None) -> AmplitudeRun:
    slow_grid = slow_grid or default_slow_grid()
    params = gl_coefficients(alpha, a1, a2)
    A_init = A0 if A0 is not None else sech_amplitude(slow_grid, amplitude)
    times = np.linspace(0.0, T_star, samples)
    states = GLSolver(slow_grid, params, dT).trajectory(GLState(A_init, 0.0), times)
    return AmplitudeRun(params=params, states=tuple(states))


def _envelope(config: FilterConfig, envelope_filter: bool) -> FilterConfig | None:
    return config if envelope_filter else None


def residuum_rows(run: AmplitudeRun, eps: float, alpha: float, a1: float, a2: float,
                  theta: float = 1.0, config: FilterConfig = FilterConfig(),
                  envelope_filter: bool = True) -> list:
    """Rows ``[eps, t, norm_crit, norm_stab, z0..z4]`` for every sample of ``run``."""
    fast = fast_grid_for(run.states[0].slow_grid, eps)
    params = SHParams(alpha=alpha, eps=eps, a1=a1, a2=a2)
    rows = []
    for st in run.states:
        ans = build_ansatz(st, run.params, eps, fast, _envelope(config, envelope_filter))
        smp = compute_residuum(ans, params, config, theta)
        rows.append([eps, smp.t, smp.norm_crit, smp.norm_stab] + [smp.z_bands[k] for k in range(5)])
    return rows


def report_from_rows(eps_list, theta: float, per_eps_rows) -> ScalingReport:
    """Sup over time per eps (columns 2 and 3), slopes and the argmax time of the critical norm."""
    crit, stab, argmax = [], [], {}
    for eps, rows in zip(eps_list, per_eps_rows):
        best = max(rows, key=lambda r: r[2])
        crit.append(best[2])
        stab.append(max(r[3] for r in rows))
        argmax[eps] = best[1]
        log.info("eps=%g  sup|E_c Res|=%.3e  sup|E_s Res|=%.3e", eps, crit[-1], stab[-1])
    return ScalingReport(eps_list=list(eps_list), theta=theta, norms_crit=crit, norms_stab=stab,
                         slope_crit=fit_slope(eps_list, crit), slope_stab=fit_slope(eps_list, stab),
                         rows=[r for rows in per_eps_rows for r in rows], argmax_t=argmax)


def residuum_scaling_study(eps_list, alpha: float, a1: float, a2: float, theta: float = 1.0,
                           config: FilterConfig = FilterConfig(), *, run: AmplitudeRun | None = None,
                           envelope_filter: bool = True, **amplitude_kw) -> ScalingReport:
    """Sup over the sampled times of ``||E_c Res||`` and ``||E_s Res||`` for each eps, with slopes.

    One GL trajectory (``run``) is shared by all eps.
    """
    eps_list = check_eps_list(eps_list)
    if theta < 1:
        raise ValueError("theta must be >= 1")
    run = run or solve_amplitude(alpha, a1, a2, **amplitude_kw)
    per_eps = [residuum_rows(run, eps, alpha, a1, a2, theta, config, envelope_filter)
               for eps in eps_list]
    return report_from_rows(eps_list, theta, per_eps)


# ---------------------------------------------------------------------------
# nonlinearity differences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PerturbationField:
    R_c: SpectralField
    R_s: SpectralField

    def check(self, config: FilterConfig = FilterConfig(), tol: float = 1e-12):
        for part, which in ((self.R_c, "critical"), (self.R_s, "stable")):
            diff = h_norm(mode_filter(part, which, config) - part, 0.0)
            if diff > tol * max(1.0, h_norm(part, 0.0)):
                raise ValueError(f"perturbation part is not supported in the {which} modes")


def _window(xi, centre, halfwidth):
    """``cos^2`` bump supported in ``|xi - centre| < halfwidth``."""
    d = (xi - centre) / halfwidth
    return np.where(np.abs(d) < 1.0, np.cos(0.5 * np.pi * d) ** 2, 0.0)


def bump_perturbation(grid: Grid1D, halfwidth: float = 0.45, config: FilterConfig = FilterConfig(),
                      stable_centre: float = 3.0) -> PerturbationField:
    """Real, spatially localized test perturbations built directly in Fourier space.

    ``R_c`` is a smooth bump around ``xi = +-1`` inside the critical bands,
    ``R_s`` one around ``xi = +-stable_centre``.  Both have a fixed profile in
    the fast variable (width about ``1/halfwidth``), so their norms do not
    depend on the grid, and they stay narrower than the envelope ``A(eps x)``.
    """
    if not halfwidth < config.delta:
        raise ValueError("critical bump must fit inside the critical bands")
    if not abs(stable_centre) - halfwidth > 1.0 + config.delta:
        raise ValueError("stable bump overlaps the critical bands")
    xi = grid.xi
    Rc = _window(xi, 1.0, halfwidth) + _window(xi, -1.0, halfwidth)
    Rs = _window(xi, stable_centre, halfwidth) + _window(xi, -stable_centre, halfwidth)
    return PerturbationField(SpectralField(grid, four=Rc.astype(complex)),
                             SpectralField(grid, four=Rs.astype(complex)))


def nonlinearity_difference(ansatz: AnsatzFields, R: PerturbationField, params: SHParams,
                            config: FilterConfig = FilterConfig(), theta: float = 1.0,
                            beta: float = BETA) -> tuple[float, float]:
    """Scaled critical and stable parts of ``N(eps Psi + eps^beta R) - N(eps Psi)``.

    ``R = R_c + eps R_s``.
    """
    eps = params.eps
    v = eps * ansatz.Psi
    Rfull = R.R_c + eps * R.R_s
    diff = sh_nonlinearity(v + eps**beta * Rfull, params) - sh_nonlinearity(v, params)
    qc = eps ** (-beta) * h_norm(mode_filter(diff, "critical", config), theta)
    qs = eps ** (-beta - 1.0) * h_norm(mode_filter(diff, "stable", config), theta)
    return qc, qs


def nonlinearity_difference_scaling(eps_list, alpha: float, a1: float, a2: float,
                                    theta: float = 1.0, config: FilterConfig = FilterConfig(), *,
                                    perturbation=bump_perturbation, run: AmplitudeRun | None = None,
                                    n_times: int | None = None, envelope_filter: bool = True,
                                    **amplitude_kw) -> ScalingReport:
    """Sweep eps for the nonlinearity-difference quantities.

    The sup is taken over ``n_times`` evenly spread GL samples (all of them by default).
    """
    eps_list = check_eps_list(eps_list)
    run = run or solve_amplitude(alpha, a1, a2, **amplitude_kw)
    n = len(run.states) if n_times is None else n_times
    idx = np.unique(np.linspace(0, len(run.states) - 1, n).round().astype(int))
    crit, stab, rows = [], [], []
    for eps in eps_list:
        fast = fast_grid_for(run.states[0].slow_grid, eps)
        params = SHParams(alpha=alpha, eps=eps, a1=a1, a2=a2)
        R = perturbation(fast)
        R.check(config)
        qc_max = qs_max = 0.0
        for i in idx:
            ans = build_ansatz(run.states[i], run.params, eps, fast,
                               _envelope(config, envelope_filter))
            qc, qs = nonlinearity_difference(ans, R, params, config, theta)
            rows.append([eps, run.states[i].T / eps**2, qc, qs])
            qc_max, qs_max = max(qc_max, qc), max(qs_max, qs)
        crit.append(qc_max)
        stab.append(qs_max)
    return ScalingReport(eps_list=eps_list, theta=theta, norms_crit=crit, norms_stab=stab,
                         slope_crit=fit_slope(eps_list, crit), slope_stab=fit_slope(eps_list, stab),
                         rows=rows)
