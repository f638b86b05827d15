"""Randomized checks of the scaling lemmas and structural invariants.

Every check returns a :class:`LemmaCheck` carrying the measured quantity and
the bound it was compared against, so a report can show how much room there
is, not just pass/fail.  Fields are random and band-limited, drawn from a
seeded generator.  Discrete norms get a 5% multiplicative slack plus a 1e-9
additive one.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import integrate

from .ginzburg_landau import (
    GLSolver,
    GLState,
    build_ansatz,
    default_slow_grid,
    gl_coefficients,
    holder_surrogate,
)
from .residuum import fit_slope
from .spectral import (
    Grid1D,
    SpectralField,
    dealiased_product,
    derivative,
    fast_grid_for,
    h_norm,
    l1_fourier_norm,
    scale_embed,
    shift_frequency,
)
from .symbols import (
    FilterConfig,
    c_plus,
    c_pm_quadrature,
    frac_laplacian,
    mode_filter,
    remainder_multiplier,
    remainder_multiplier_array,
    remainder_reconstruction_defect,
    semigroup_apply,
    semigroup_bound_check,
    sigma_s,
)

SLACK = 1.05
ABS_SLACK = 1e-9
EPS_SWEEP = (0.2, 0.1, 0.05)


@dataclass
class LemmaCheck:
    name: str
    passed: bool
    measured: float
    bound: float
    detail: dict = field(default_factory=dict)

    def as_row(self) -> dict:
        row = asdict(self)
        row.update(passed=bool(self.passed), measured=float(self.measured), bound=float(self.bound))
        row["detail"] = {k: _plain(v) for k, v in self.detail.items()}
        return row


def _plain(v):
    if isinstance(v, (np.floating, np.integer, np.bool_)):
        return v.item()
    if isinstance(v, dict):
        return {k: _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return v


def random_band_limited(grid: Grid1D, rng: np.random.Generator, bandwidth: float,
                        real: bool = True, scale: float = 1.0) -> SpectralField:
    """Random coefficients on ``|xi| <= bandwidth`` with a Gaussian taper."""
    xi = grid.xi
    sel = np.abs(xi) <= bandwidth
    four = np.zeros(grid.N, dtype=complex)
    n = int(sel.sum())
    four[sel] = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) * np.exp(
        -(xi[sel] / bandwidth) ** 2)
    f = SpectralField(grid, four=scale * four)
    if real:
        f = SpectralField(grid, phys=f.phys.real)
    return f


class PropertySuite:
    """Runs every check for one seed; ``zero=True`` replaces all random fields by 0."""

    def __init__(self, seed: int = 0, config: FilterConfig = FilterConfig(), zero: bool = False,
                 slow_grid: Grid1D | None = None, n_fields: int = 4):
        self.rng = np.random.default_rng(seed)
        self.config = config
        self.zero = zero
        self.slow = slow_grid or default_slow_grid()
        self.n_fields = n_fields
        self.fast = Grid1D(K=16, N=512)

    def field(self, grid: Grid1D, bandwidth: float, real: bool = True) -> SpectralField:
        f = random_band_limited(grid, self.rng, bandwidth, real)
        return SpectralField.zeros(grid) if self.zero else f

    # -- spectral_core -----------------------------------------------------

    def parseval(self) -> LemmaCheck:
        worst = 0.0
        for _ in range(self.n_fields):
            f = self.field(self.fast, 4.0, real=False)
            n2 = h_norm(f, 0.0) ** 2
            p2 = f.grid.dx * np.sum(np.abs(f.phys) ** 2)
            worst = max(worst, abs(n2 - p2) / max(n2, 1e-300))
        return LemmaCheck("parseval", worst <= 1e-10, worst, 1e-10)

    def product_estimate(self) -> LemmaCheck:
        """Binary and ternary product estimates with constant one; reports the largest lhs/rhs."""
        excess, ratio = 0.0, 0.0
        for mu in (1.0, 1.5, 2.0):
            for _ in range(self.n_fields):
                f, g, h = (self.field(self.fast, 2.0) for _ in range(3))
                lhs = h_norm(dealiased_product(f, g), mu)
                rhs = h_norm(f, mu) * l1_fourier_norm(g) + l1_fourier_norm(f) * h_norm(g, mu)
                lhs3 = h_norm(dealiased_product(f, g, h), mu)
                l1 = [l1_fourier_norm(v) for v in (f, g, h)]
                hn = [h_norm(v, mu) for v in (f, g, h)]
                rhs3 = hn[0] * l1[1] * l1[2] + l1[0] * hn[1] * l1[2] + l1[0] * l1[1] * hn[2]
                for a, b in ((lhs, rhs), (lhs3, rhs3)):
                    excess = max(excess, a - b)
                    ratio = max(ratio, a / b if b > 0 else 0.0)
        return LemmaCheck("product_estimate", excess <= ABS_SLACK, ratio, 1.0,
                          {"max_excess": excess})

    def l1_scaling_invariance(self) -> LemmaCheck:
        worst = 0.0
        for eps in EPS_SWEEP:
            fast = fast_grid_for(self.slow, eps)
            for k in (0, 1, 2):
                f = self.field(self.slow, 1.0, real=False)
                diff = abs(l1_fourier_norm(scale_embed(f, eps, k, fast)) - l1_fourier_norm(f))
                worst = max(worst, diff)
        return LemmaCheck("l1_scaling_invariance", worst <= 1e-9, worst, 1e-9)

    def l1_vs_sobolev(self) -> LemmaCheck:
        worst, consts = 0.0, {}
        for mu in (1.0, 2.0):
            C = np.sqrt(integrate.quad(lambda s: (1 + s * s) ** (-mu), -np.inf, np.inf)[0])
            consts[f"C_{mu:g}"] = C
            for _ in range(self.n_fields):
                f = self.field(self.fast, 4.0, real=False)
                worst = max(worst, l1_fourier_norm(f) - SLACK * C * h_norm(f, mu))
        return LemmaCheck("l1_vs_sobolev", worst <= ABS_SLACK, worst, ABS_SLACK, consts)

    def scaled_sobolev_constant(self) -> LemmaCheck:
        """``||f(eps.)e^{ik.}||_{H^mu} <= (1+k+k^2)^{mu/2} eps^{-1/2} ||f||_{H^mu}``."""
        worst = 0.0
        for eps in EPS_SWEEP:
            fast = fast_grid_for(self.slow, eps)
            for mu in (0.0, 1.0, 2.0):
                for k in (0, 1, 2):
                    f = self.field(self.slow, 1.0, real=False)
                    lhs = h_norm(scale_embed(f, eps, k, fast), mu)
                    const = (1 + k + k * k) ** (mu / 2) * eps**-0.5
                    ratio = lhs / (const * h_norm(f, mu)) if lhs > 0 else 0.0
                    worst = max(worst, ratio)
        return LemmaCheck("scaled_sobolev_constant", worst <= SLACK, worst, SLACK,
                          {"note": "largest lhs / bound ratio"})

    # -- low-pass truncation ---------------------------------------------

    def low_complement_scaling(self, mu: float = 1.0, k: int = 1, decay: float = 3.0,
                               adversarial: bool = True) -> LemmaCheck:
        """``E_0^c`` truncation: slope in eps at least ``mu - 0.6`` and the explicit constant.

        The adversarial field has algebraically decaying slow spectrum reaching
        the slow Nyquist frequency, so its bandwidth exceeds ``r0/eps`` for all eps.
        """
        slow = self.slow
        Xi = slow.xi
        if self.zero:
            f = SpectralField.zeros(slow)
        elif adversarial:
            phases = np.exp(2j * np.pi * self.rng.random(slow.N))
            f = SpectralField(slow, four=(1 + Xi**2) ** (-decay / 2) * phases)
        else:
            f = self.field(slow, 0.5, real=False)
        C = 1.0 + 1.0 / self.config.r0**2
        norms, ratios = [], []
        for eps in EPS_SWEEP:
            fast = fast_grid_for(slow, eps)
            g = mode_filter(scale_embed(f, eps, 0, fast), "low_complement", self.config)
            g = shift_frequency(g, k)
            n = h_norm(g, mu)
            norms.append(n)
            bound = C * (1 + k + k * k) ** (mu / 2) * eps ** (mu - 0.5) * h_norm(f, mu)
            ratios.append(n / bound if bound > 0 else 0.0)
        slope = fit_slope(EPS_SWEEP, norms)
        ok_const = max(ratios) <= SLACK
        if slope is None:
            ok = ok_const and max(norms) <= 1e-12
        else:
            ok = ok_const and slope >= mu - 0.6
        return LemmaCheck("low_complement_scaling", ok, slope if slope is not None else 0.0, mu - 0.6,
                          {"norms": norms, "max_ratio_to_bound": max(ratios), "C_r0": C,
                           "truncation_nonzero": bool(max(norms) > 1e-12)})

    def low_pass_band_limited(self) -> LemmaCheck:
        """For slow bandwidth ``B`` and ``eps < r0/B`` nothing is truncated."""
        B = 0.5
        worst = 0.0
        f = self.field(self.slow, B, real=False)
        f = SpectralField(self.slow, four=f.four * (np.abs(self.slow.xi) <= B))
        for eps in EPS_SWEEP:
            if eps * B >= self.config.r0:
                continue
            fast = fast_grid_for(self.slow, eps)
            g = mode_filter(scale_embed(f, eps, 0, fast), "low_complement", self.config)
            worst = max(worst, h_norm(g, 0.0))
        return LemmaCheck("low_pass_band_limited", worst == 0.0, worst, 0.0)

    # -- symbol calculus -----------------------------------------------------

    def critical_symbol_identity(self) -> LemmaCheck:
        """``(xi -+ 1)^2`` applied to ``f(eps x) e^{+-ix}`` equals ``-eps^2 f''(eps x) e^{+-ix}``."""
        worst = 0.0
        for eps in EPS_SWEEP:
            fast = fast_grid_for(self.slow, eps)
            f = self.field(self.slow, 1.0, real=False)
            f2 = derivative(f, 2)
            for s in (1, -1):
                lhs = scale_embed(f, eps, s, fast).multiply_symbol((fast.xi - s) ** 2)
                rhs = -eps**2 * scale_embed(f2, eps, s, fast)
                scale = max(1.0, float(np.max(np.abs(rhs.phys))))
                worst = max(worst, float(np.max(np.abs((lhs - rhs).phys))) / scale)
        return LemmaCheck("critical_symbol_identity", worst <= 1e-9, worst, 1e-9)

    def frac_laplacian_low_pass_commutation(self) -> LemmaCheck:
        """``(-D)^nu E_0 f(eps.) = eps^{2nu} E_0 ((-D)^nu f)(eps.)``."""
        worst = 0.0
        for eps in EPS_SWEEP:
            fast = fast_grid_for(self.slow, eps)
            f = self.field(self.slow, 2.0, real=False)
            for nu in (0.25, 0.5, 0.75, 1.0):
                lhs = frac_laplacian(mode_filter(scale_embed(f, eps, 0, fast), "low", self.config), nu)
                rhs = eps ** (2 * nu) * mode_filter(scale_embed(frac_laplacian(f, nu), eps, 0, fast),
                                                    "low", self.config)
                scale = max(1.0, float(np.max(np.abs(lhs.phys))))
                worst = max(worst, float(np.max(np.abs((lhs - rhs).phys))) / scale)
        return LemmaCheck("frac_laplacian_low_pass_commutation", worst <= 1e-10, worst, 1e-10)

    def filter_partition(self) -> LemmaCheck:
        f = self.field(self.fast, 5.0, real=False)
        c, s = mode_filter(f, "critical", self.config), mode_filter(f, "stable", self.config)
        err = h_norm(c + s - f, 0.0)
        err = max(err, h_norm(mode_filter(c, "critical", self.config) - c, 0.0),
                  h_norm(mode_filter(s, "stable", self.config) - s, 0.0),
                  h_norm(mode_filter(c, "stable", self.config), 0.0))
        return LemmaCheck("filter_partition", err <= 1e-14, err, 1e-14)

    def semigroup_law(self, alpha: float = 1.5, eps: float = 0.1) -> LemmaCheck:
        f = self.field(self.fast, 5.0, real=False)
        a = semigroup_apply(semigroup_apply(f, 0.7, alpha, eps), 1.3, alpha, eps)
        b = semigroup_apply(f, 2.0, alpha, eps)
        err = h_norm(a - b, 0.0) / max(h_norm(b, 0.0), 1e-300)
        return LemmaCheck("semigroup_law", err <= 1e-12, err, 1e-12)

    def semigroup_decay(self) -> LemmaCheck:
        worst = -np.inf
        for alpha in (1.0, 1.5, 1.9):
            s = sigma_s(alpha, self.config.delta)
            eps = min(0.1, np.sqrt(s))
            for t in (0.5, 5.0, 20.0):
                crit, stab = semigroup_bound_check(t, alpha, eps, self.config)
                worst = max(worst, crit - np.exp(eps**2 * t), stab - np.exp(-s * t))
        return LemmaCheck("semigroup_decay", worst <= 1e-12, worst, 1e-12)

    def remainder_reconstruction(self, alphas=(1.0, 1.3, 1.7), n: int = 25) -> LemmaCheck:
        worst = 0.0
        for alpha in alphas:
            for s in (1.0, -1.0):
                for xi in s * np.linspace(1.61, 2.39, n):
                    worst = max(worst, remainder_reconstruction_defect(float(xi), alpha))
        return LemmaCheck("remainder_reconstruction", worst <= 1e-8, worst, 1e-8)

    def c_symmetry(self) -> LemmaCheck:
        worst = 0.0
        for alpha in np.arange(0.25, 2.0, 0.25):
            qp, qm = c_pm_quadrature(alpha, 1), c_pm_quadrature(alpha, -1)
            worst = max(worst, abs(qp - qm), abs(qp - c_plus(alpha)))
        return LemmaCheck("c_symmetry", worst <= 1e-10, worst, 1e-10)

    def multiplier_bounds(self, alpha: float = 1.5) -> LemmaCheck:
        """Local orders of ``r``, ``m1``, ``m2`` at their base points from a log-log fit."""
        h = np.geomspace(1e-3, 0.4, 12)
        out, ok = {}, True
        for kind, base, need in (("r_plus", 1.0, 2.9), ("m1_plus", 2.0, 0.9), ("m2_plus", 2.0, 2.9),
                                 ("r_minus", -1.0, 2.9), ("m1_minus", -2.0, 0.9),
                                 ("m2_minus", -2.0, 2.9)):
            for side in (1.0, -1.0):
                vals = np.abs([remainder_multiplier(base + side * d, alpha, kind) for d in h])
                order = float(np.polyfit(np.log(h), np.log(vals), 1)[0])
                C = float(np.max(vals / h**round(need)))
                out[f"{kind}{'+' if side > 0 else '-'}"] = {"order": order, "C": C}
                ok &= order >= need
        worst = min(v["order"] - (0.9 if "m1" in k else 2.9) for k, v in out.items())
        return LemmaCheck("multiplier_bounds", ok, worst, 0.0, out)

    def multiplier_norm_scaling(self, alpha: float = 1.5) -> LemmaCheck:
        """``r^+`` on ``E_0 f(eps.) e^{i.}`` scales like eps^2.5; ``m1^+`` (at 2) like
        eps^0.5; ``m2^+`` like eps^2.5."""
        # slow bandwidth below r0/eps for every eps, so E_0 never truncates and the
        # slopes reflect the multipliers alone
        f = self.field(self.slow, 0.95 * self.config.r0 / max(EPS_SWEEP), real=False)
        norms = {"r_plus": [], "m1_plus": [], "m2_plus": []}
        for eps in EPS_SWEEP:
            fast = fast_grid_for(self.slow, eps)
            g = mode_filter(scale_embed(f, eps, 0, fast), "low", self.config)
            for kind, k in (("r_plus", 1), ("m1_plus", 2), ("m2_plus", 2)):
                gk = shift_frequency(g, k)
                sel = np.abs(fast.xi - k) <= self.config.r0
                sym = np.zeros(fast.N)
                sym[sel] = remainder_multiplier_array(fast.xi[sel], alpha, kind)
                norms[kind].append(h_norm(gk.multiply_symbol(sym), 1.0))
        need = {"r_plus": 2.4, "m1_plus": 0.4, "m2_plus": 2.4}
        slopes = {k: fit_slope(EPS_SWEEP, v) for k, v in norms.items()}
        if self.zero:
            ok = all(max(v) == 0.0 for v in norms.values())
            return LemmaCheck("multiplier_norm_scaling", ok, 0.0, 0.0, {"norms": norms})
        ok = all(slopes[k] is not None and slopes[k] >= need[k] for k in need)
        worst = min((slopes[k] or -np.inf) - need[k] for k in need)
        return LemmaCheck("multiplier_norm_scaling", ok, worst, 0.0, {"slopes": slopes})

    # -- amplitude equation ----------------------------------------------

    def gl_gauge_symmetry(self, phi: float = 0.7) -> LemmaCheck:
        params = gl_coefficients(1.5, 0.5, 1.0)
        A = SpectralField(self.slow, phys=0.4 / np.cosh(self.slow.x))
        if self.zero:
            A = SpectralField.zeros(self.slow)
        solver = GLSolver(self.slow, params, 1.0 / 256)
        rot = np.exp(1j * phi)
        a = solver.advance(GLState(A * rot, 0.0), 0.5).A
        b = solver.advance(GLState(A, 0.0), 0.5).A * rot
        err = float(np.max(np.abs((a - b).phys)))
        return LemmaCheck("gl_gauge_symmetry", err <= 1e-9, err, 1e-9)

    def ansatz_reality_and_holder(self) -> LemmaCheck:
        params = gl_coefficients(1.5, 1.0, 1.0)
        amp = 0.0 if self.zero else 0.3
        A = SpectralField(self.slow, phys=amp / np.cosh(self.slow.x) * np.exp(0.3j * self.slow.x))
        st = GLState(A, 0.0)
        imag, holder = 0.0, []
        for eps in EPS_SWEEP:
            ans = build_ansatz(st, params, eps, fast_grid_for(self.slow, eps), self.config)
            imag = max(imag, float(np.max(np.abs(ans.psi.phys.imag))),
                       float(np.max(np.abs(ans.Psi.phys.imag))))
            holder.append(holder_surrogate(ans, self.config))
        bounded = max(holder) <= 10.0 * holder[0] if holder[0] > 0 else max(holder) == 0.0
        ok = imag <= 1e-10 and bounded
        return LemmaCheck("ansatz_reality_and_holder", ok, imag, 1e-10,
                          {"holder_surrogate": holder})

    # ---------------------------------------------------------------------

    CHECKS = ("parseval", "product_estimate", "l1_scaling_invariance", "l1_vs_sobolev",
              "scaled_sobolev_constant", "low_complement_scaling", "low_pass_band_limited",
              "critical_symbol_identity", "frac_laplacian_low_pass_commutation", "filter_partition",
              "semigroup_law", "semigroup_decay", "remainder_reconstruction", "c_symmetry",
              "multiplier_bounds", "multiplier_norm_scaling", "gl_gauge_symmetry",
              "ansatz_reality_and_holder")

    def run(self, names=None) -> list[LemmaCheck]:
        return [getattr(self, n)() for n in (names or self.CHECKS)]


def run_lemma_checks(seed: int = 0, config: FilterConfig = FilterConfig(), zero: bool = False,
                     names=None) -> list[LemmaCheck]:
    return PropertySuite(seed, config, zero).run(names)

