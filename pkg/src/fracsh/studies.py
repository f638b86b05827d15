"""Study configuration, orchestration and file output.

A :class:`StudyConfig` is read from a flat ``key = value`` file plus
``key=value`` overrides.  Each ``run_*`` function performs one study, writes
its CSV/JSON files and a ``manifest.json`` into ``output_dir`` and returns an
in-memory report.  Output files contain no timings, so identical configs give
byte-identical files.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .ginzburg_landau import (
    BlowUpError,
    GLSolver,
    GLState,
    ResolutionError,
    build_ansatz,
    gl_coefficients,
    sech_amplitude,
    tail_amplitude,
)
from .properties import PropertySuite
from .residuum import (
    AmplitudeRun,
    check_eps_list,
    fit_slope,
    nonlinearity_difference_scaling,
    report_from_rows,
    residuum_rows,
)
from .spectral import Grid1D, SpectralField, fast_grid_for, h_norm
from .swift_hohenberg import SHParams, SHSolver, SHState, select_dt, write_checkpoint_csv
from .symbols import (
    FilterConfig,
    QuadratureError,
    c_plus,
    c_pm_quadrature,
    check_alpha,
    remainder_multiplier,
    sh_symbol_eval,
    sigma_s,
)

log = logging.getLogger(__name__)

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERIC, EXIT_THRESHOLD = 0, 2, 3, 4
NUMERIC_ERRORS = (BlowUpError, ResolutionError, QuadratureError, FloatingPointError)

# acceptance thresholds checked by the studies (exit code 4 when missed)
RESIDUUM_CRIT_MIN = 3.2
RESIDUUM_STAB_MIN = 2.2
CONVERGENCE_WINDOW = (1.35, 2.2)
NONLINEAR_CRIT_MIN = 1.8
NONLINEAR_STAB_MIN = -0.1
SYMBOL_DEFECT_MAX = 1e-8

FILTER_CHOICES = ("auto", "fast", "none")


@dataclass(frozen=True)
class StudyConfig:
    alpha: float = 1.0
    a1: float = 1.0
    a2: float = 1.0
    theta: float = 1.0
    eps_list: tuple = (0.2, 0.1, 0.05)
    L_X: float = 16 * math.pi
    N_slow: int = 256
    samples: int = 33
    T_star: float = 1.0
    delta: float = 0.5
    r0: float = 0.125
    dt: float = 0.05
    output_dir: str = "out"
    seed: int = 0
    amplitude: float = 0.3
    dT_gl: float = 1.0 / 1024
    envelope_filter: str = "auto"

    def __post_init__(self):
        object.__setattr__(self, "eps_list", tuple(float(e) for e in self.eps_list))
        if not 0 < self.alpha <= 2:
            raise ValueError(f"alpha must lie in (0, 2], got {self.alpha}")
        check_eps_list(self.eps_list)
        for e in self.eps_list:
            if not 0 < e < 1:
                raise ValueError(f"eps must lie in (0, 1), got {e}")
            self.fast_grid(e)
        if self.theta < 0:
            raise ValueError("theta must be >= 0")
        if self.samples < 2:
            raise ValueError("samples must be >= 2")
        if not (self.T_star > 0 and self.dt > 0 and self.dT_gl > 0):
            raise ValueError("T_star, dt and dT_gl must be positive")
        if self.envelope_filter not in FILTER_CHOICES:
            raise ValueError(f"envelope_filter must be one of {FILTER_CHOICES}")
        self.filter_config  # validates delta/r0
        self.slow_grid

    @property
    def filter_config(self) -> FilterConfig:
        return FilterConfig(self.delta, self.r0)

    @property
    def slow_grid(self) -> Grid1D:
        K = self.L_X / (2 * math.pi)
        if abs(K - round(K)) > 1e-9 * max(K, 1):
            raise ValueError(f"L_X={self.L_X} must be an integer multiple of 2 pi")
        return Grid1D(K=int(round(K)), N=self.N_slow)

    def fast_grid(self, eps: float) -> Grid1D:
        return fast_grid_for(self.slow_grid, eps)

    def use_envelope_filter(self, default: bool) -> bool:
        """Whether the ansatz low-pass filters its envelopes; ``auto`` defers to the study."""
        if self.envelope_filter == "auto":
            return default
        return self.envelope_filter == "fast"

    def derived(self) -> dict:
        out = {"sigma_s": sigma_s(self.alpha, self.delta) if self.alpha < 2 else None}
        if 0 < self.alpha <= 2:
            gp = gl_coefficients(self.alpha, self.a1, self.a2)
            out.update(c_plus=gp.c_plus, gamma=gp.gamma, diffusion=gp.diffusion)
        return out

    def as_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["eps_list"] = list(self.eps_list)
        return d


_TYPES = {f.name: f.type for f in fields(StudyConfig)}


def _coerce(key: str, value: str):
    if key not in _TYPES:
        raise ValueError(f"unknown config key {key!r}")
    value = value.strip()
    kind = _TYPES[key]
    if key == "eps_list":
        return tuple(float(v) for v in value.replace(",", " ").split())
    if kind == "int":
        return int(value)
    if kind == "float":
        return float(eval_number(value))
    return value


def eval_number(text: str) -> float:
    """Parse a float, also accepting ``a*pi`` / ``pi`` / ``a/b`` forms used for domain lengths."""
    t = text.replace(" ", "").lower()
    try:
        return float(t)
    except ValueError:
        pass
    if "/" in t:
        num, den = t.split("/", 1)
        return eval_number(num) / eval_number(den)
    if t.endswith("pi"):
        head = t[:-2].rstrip("*")
        return (float(head) if head else 1.0) * math.pi
    raise ValueError(f"cannot parse number {text!r}")


def parse_assignments(lines) -> dict:
    out = {}
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"expected key=value, got {raw!r}")
        k, v = line.split("=", 1)
        out[k.strip()] = _coerce(k.strip(), v)
    return out


def load_config(path: str | os.PathLike | None = None, overrides=(), **kw) -> StudyConfig:
    """Defaults, then the config file, then ``key=value`` overrides, then keyword arguments."""
    values = {}
    if path is not None:
        values.update(parse_assignments(Path(path).read_text().splitlines()))
    values.update(parse_assignments(overrides))
    values.update(kw)
    return StudyConfig(**values)


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(path: Path, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    _atomic_write(path, buf.getvalue())


def _json_default(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.bool_):
        return bool(v)
    raise TypeError(type(v))


def write_json(path: Path, data):
    _atomic_write(path, json.dumps(data, indent=2, sort_keys=True, default=_json_default) + "\n")


def write_manifest(config: StudyConfig, study: str, extra: dict | None = None) -> Path:
    out = Path(config.output_dir)
    data = {"study": study, "config": config.as_dict(), "derived": config.derived()}
    if extra:
        data.update(extra)
    write_json(out / "manifest.json", data)
    return out / "manifest.json"


def _map(fn, jobs, workers: int):
    if workers <= 1 or len(jobs) <= 1:
        return [fn(*j) for j in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as ex:
        return list(ex.map(fn, *zip(*jobs)))


# ---------------------------------------------------------------------------
# GL trajectory shared by the sweeps
# ---------------------------------------------------------------------------

def amplitude_run(config: StudyConfig, alpha: float | None = None) -> AmplitudeRun:
    alpha = config.alpha if alpha is None else alpha
    params = gl_coefficients(alpha, config.a1, config.a2)
    slow = config.slow_grid
    A0 = sech_amplitude(slow, config.amplitude)
    times = np.linspace(0.0, config.T_star, config.samples)
    states = GLSolver(slow, params, config.dT_gl).trajectory(GLState(A0, 0.0), times)
    return AmplitudeRun(params=params, states=tuple(states))


def run_gl(config: StudyConfig) -> AmplitudeRun:
    """Solve GL and write ``gl.csv`` (norm history) and ``gl_checkpoint.csv``."""
    run = amplitude_run(config)
    out = Path(config.output_dir)
    rows = [[s.T, h_norm(s.A, 0.0), h_norm(s.A, config.theta), float(np.max(np.abs(s.A.phys))),
             tail_amplitude(s.A)] for s in run.states]
    write_csv(out / "gl.csv", ["T", "l2", "h_theta", "sup", "tail"], rows)
    write_checkpoint_csv([SHState(s.A, s.T) for s in run.states], out / "gl_checkpoint.csv")
    write_manifest(config, "gl")
    return run


# ---------------------------------------------------------------------------
# Swift-Hohenberg runs and the convergence study
# ---------------------------------------------------------------------------

@dataclass
class ConvergenceReport:
    alpha: float
    eps_list: list
    err_psi: list
    err_Psi: list
    slope_psi: float | None
    slope_Psi: float | None
    argmax_t: list
    dt_used: list
    runtimes: list = field(default_factory=list)
    envelope_filter: str = "none"

    @property
    def monotone(self) -> bool:
        return all(b < a for a, b in zip(self.err_psi, self.err_psi[1:]))

    def in_window(self, window=CONVERGENCE_WINDOW) -> bool:
        return self.slope_psi is not None and window[0] <= self.slope_psi <= window[1]

    def as_json(self) -> dict:
        return {"alpha": self.alpha, "eps_list": self.eps_list, "err_psi": self.err_psi,
                "err_Psi": self.err_Psi, "slope_psi": self.slope_psi, "slope_Psi": self.slope_Psi,
                "argmax_t": self.argmax_t, "dt": self.dt_used, "monotone": self.monotone,
                "envelope_filter": self.envelope_filter}


def sh_tracking_run(run: AmplitudeRun, eps: float, theta: float, fast: Grid1D, params: SHParams,
                    envelope: FilterConfig | None, probe: bool = True):
    """Evolve ``u0 = eps Psi(0)`` and record ``sup_t ||u - eps psi||`` and ``sup_t ||u - eps Psi||``.

    ``envelope`` is the filter configuration used for the ansatz envelopes, or
    ``None`` for unfiltered envelopes.
    """
    ans = [build_ansatz(s, run.params, eps, fast, envelope) for s in run.states]
    u0 = SpectralField(fast, phys=(eps * ans[0].Psi).phys.real)
    if probe:
        params = select_dt(u0, params)
    solver = SHSolver(fast, params)
    state = SHState(u0, 0.0)
    solver.check_guard(state)
    e_psi = e_Psi = 0.0
    t_arg = 0.0
    for s, a in zip(run.states, ans):
        state = solver.advance(state, s.T / eps**2)
        solver.check_guard(state)
        d1 = h_norm(state.u - eps * a.psi, theta)
        d2 = h_norm(state.u - eps * a.Psi, theta)
        if d1 > e_psi:
            e_psi, t_arg = d1, state.t
        e_Psi = max(e_Psi, d2)
    return e_psi, e_Psi, t_arg, params.dt


def _convergence_job(config: StudyConfig, run: AmplitudeRun, eps: float, alpha: float):
    t0 = time.perf_counter()
    fast = config.fast_grid(eps)
    params = SHParams(alpha=alpha, eps=eps, a1=config.a1, a2=config.a2, dt=config.dt)
    if alpha < 2:
        params.check_decay(config.filter_config)
    envelope = config.filter_config if config.use_envelope_filter(False) else None
    res = sh_tracking_run(run, eps, config.theta, fast, params, envelope)
    return res + (time.perf_counter() - t0,)


def run_convergence(config: StudyConfig, workers: int = 1, alpha: float | None = None,
                    write: bool = True) -> ConvergenceReport:
    alpha = config.alpha if alpha is None else alpha
    if not 1.0 <= alpha <= 2.0:
        raise ValueError(f"convergence study needs alpha in [1, 2], got {alpha}")
    if config.theta < 1:
        raise ValueError("convergence study needs theta >= 1")
    run = amplitude_run(config, alpha)
    results = _map(_convergence_job, [(config, run, e, alpha) for e in config.eps_list], workers)
    e1, e2, targ, dts, rts = (list(x) for x in zip(*results))
    rep = ConvergenceReport(alpha=alpha, eps_list=list(config.eps_list), err_psi=e1, err_Psi=e2,
                            slope_psi=fit_slope(config.eps_list, e1, floor=1e-9),
                            slope_Psi=fit_slope(config.eps_list, e2, floor=1e-9),
                            argmax_t=targ, dt_used=dts, runtimes=rts,
                            envelope_filter="fast" if config.use_envelope_filter(False) else "none")
    for e, r in zip(config.eps_list, rts):
        log.info("convergence alpha=%g eps=%g finished in %.1fs", alpha, e, r)
    if write:
        out = Path(config.output_dir)
        write_csv(out / "convergence.csv", ["eps", "err_psi", "err_Psi", "argmax_t", "dt"],
                  zip(rep.eps_list, e1, e2, targ, dts))
        write_json(out / "convergence.json", rep.as_json())
        write_manifest(config, "convergence")
    return rep


def run_sh(config: StudyConfig, workers: int = 1) -> list:
    """Plain SH runs from ``eps Psi(0)``; writes ``sh.csv`` and one checkpoint CSV per eps."""
    run = amplitude_run(config)
    out = Path(config.output_dir)
    results = _map(_sh_job, [(config, run, e) for e in config.eps_list], workers)
    rows = []
    for eps, states in zip(config.eps_list, results):
        write_checkpoint_csv(states, out / f"sh_checkpoint_eps{eps:g}.csv")
        rows += [[eps, s.t, h_norm(s.u, 0.0), h_norm(s.u, config.theta),
                  float(np.max(np.abs(s.u.phys)))] for s in states]
    write_csv(out / "sh.csv", ["eps", "t", "l2", "h_theta", "sup"], rows)
    write_manifest(config, "sh")
    return results


def _sh_job(config: StudyConfig, run: AmplitudeRun, eps: float):
    fast = config.fast_grid(eps)
    params = SHParams(alpha=config.alpha, eps=eps, a1=config.a1, a2=config.a2, dt=config.dt)
    envelope = config.filter_config if config.use_envelope_filter(False) else None
    a0 = build_ansatz(run.states[0], run.params, eps, fast, envelope)
    u0 = SpectralField(fast, phys=(eps * a0.Psi).phys.real)
    solver = SHSolver(fast, params)
    state = SHState(u0, 0.0)
    solver.check_guard(state)
    out = [state]
    for s in run.states[1:]:
        state = solver.advance(state, s.T / eps**2)
        solver.check_guard(state)
        out.append(state)
    return out


# ---------------------------------------------------------------------------
# residuum and nonlinearity-difference studies
# ---------------------------------------------------------------------------

def _residuum_job(config: StudyConfig, run: AmplitudeRun, eps: float):
    return residuum_rows(run, eps, config.alpha, config.a1, config.a2, config.theta,
                         config.filter_config, config.use_envelope_filter(True))


def run_residuum(config: StudyConfig, workers: int = 1, write: bool = True):
    """Residuum scaling study; one GL trajectory is shared by all eps jobs."""
    if config.theta < 1:
        raise ValueError("residuum study needs theta >= 1")
    check_alpha(config.alpha)
    run = amplitude_run(config)
    per_eps = _map(_residuum_job, [(config, run, e) for e in config.eps_list], workers)
    rep = report_from_rows(config.eps_list, config.theta, per_eps)
    if write:
        out = Path(config.output_dir)
        write_csv(out / "residuum.csv",
                  ["eps", "t", "norm_crit", "norm_stab", "z0", "z1", "z2", "z3", "z4"], rep.rows)
        slopes = rep.slopes_json()
        slopes["argmax_t"] = {repr(float(k)): v for k, v in rep.argmax_t.items()}
        write_json(out / "slopes.json", slopes)
        write_manifest(config, "residuum")
    return rep


def run_nonlinearity(config: StudyConfig, write: bool = True):
    run = amplitude_run(config)
    rep = nonlinearity_difference_scaling(
        config.eps_list, config.alpha, config.a1, config.a2, config.theta, config.filter_config,
        run=run, envelope_filter=config.use_envelope_filter(False))
    if write:
        out = Path(config.output_dir)
        write_csv(out / "nonlinearity.csv", ["eps", "t", "crit_quantity", "stab_quantity"], rep.rows)
        write_json(out / "nonlinearity_slopes.json", rep.slopes_json())
        write_manifest(config, "nonlinearity")
    return rep


# ---------------------------------------------------------------------------
# symbols and the property suite
# ---------------------------------------------------------------------------

SYMBOL_HEADER = ["alpha", "xi", "sh_symbol", "r", "m1", "m2", "taylor_defect",
                 "reconstruction_defect", "c_plus_closed", "c_plus_quadrature", "c_plus_diff"]


def symbol_rows(alpha: float, n: int = 200):
    """One row per sampled ``xi`` on both half-lines (``n`` per branch)."""
    alpha = check_alpha(alpha)
    cp = c_plus(alpha)
    cq = c_pm_quadrature(alpha, 1)
    rows = []
    base = np.linspace(0.05, 3.0, n)
    for s in (1.0, -1.0):
        tag = "plus" if s > 0 else "minus"
        for v in s * base:
            v = float(v)
            r = remainder_multiplier(v, alpha, f"r_{tag}")
            m1 = remainder_multiplier(v, alpha, f"m1_{tag}")
            m2 = remainder_multiplier(v, alpha, f"m2_{tag}")
            sym = float(sh_symbol_eval(v, alpha))
            taylor = abs(sym + alpha**2 * (v - s) ** 2 + r)
            recon = abs(r - (cp + m1 + m2))
            rows.append([alpha, v, sym, r, m1, m2, taylor, recon, cp, cq, abs(cp - cq)])
    return rows


def run_symbols(config: StudyConfig, n: int = 200):
    rows = symbol_rows(config.alpha, n)
    out = Path(config.output_dir)
    write_csv(out / "symbols.csv", SYMBOL_HEADER, rows)
    write_manifest(config, "symbols")
    worst = max(max(r[6], r[7], r[10]) for r in rows)
    return rows, worst


def run_property_suite(config: StudyConfig):
    checks = PropertySuite(config.seed, config.filter_config).run()
    out = Path(config.output_dir)
    write_csv(out / "properties.csv", ["name", "passed", "measured", "bound"],
              [[c.name, c.passed, c.measured, c.bound] for c in checks])
    write_json(out / "properties.json", [c.as_row() for c in checks])
    write_manifest(config, "props")
    return checks
