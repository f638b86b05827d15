"""Fractional Laplacian, linear symbol, semigroup, mode filters and remainder multipliers."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from fracsh.properties import random_band_limited
from fracsh.spectral import Grid1D, SpectralField, fast_grid_for, h_norm, scale_embed
from fracsh.symbols import (
    FilterConfig,
    SymbolTable,
    c_plus,
    c_pm_quadrature,
    check_alpha,
    frac_laplacian,
    frac_laplacian_singular_oracle,
    mode_filter,
    remainder_multiplier,
    remainder_reconstruction_defect,
    semigroup_apply,
    semigroup_bound_check,
    sh_symbol_eval,
    sigma_s,
    taylor_identity_defect,
)


def gaussian_frac_lap_at_zero(alpha):
    """(-Delta)^(alpha/2) exp(-x^2/2) at 0 = (2 pi)^-1/2 int |xi|^alpha exp(-xi^2/2) dxi."""
    return 2 ** (alpha / 2) * math.gamma((1 + alpha) / 2) / math.sqrt(math.pi)


def taylor_remainder_closed(xi, alpha):
    """r^+- from the symbol identity, written without any quadrature."""
    s = 1.0 if xi > 0 else -1.0
    return (1 - abs(xi) ** alpha) ** 2 - alpha**2 * (xi - s) ** 2


class TestValidation:
    @pytest.mark.parametrize("alpha", [0.0, 2.0, -0.5, 2.5])
    def test_alpha_open_interval(self, alpha):
        with pytest.raises(ValueError):
            check_alpha(alpha)

    @pytest.mark.parametrize("delta,r0", [(0.5, 0.2), (1.0, 0.1), (0.3, 0.0), (0.0, 0.01)])
    def test_filter_config(self, delta, r0):
        with pytest.raises(ValueError):
            FilterConfig(delta=delta, r0=r0)


class TestFractionalLaplacian:
    grid = Grid1D(K=8, N=512)

    def test_laplacian_of_sine(self):
        f = SpectralField(self.grid, phys=np.sin(self.grid.x))
        np.testing.assert_allclose(frac_laplacian(f, 1.0).phys.real, np.sin(self.grid.x), atol=1e-10)

    def test_plane_wave_eigenvalue(self):
        f = SpectralField(self.grid, phys=np.exp(2j * self.grid.x))
        out = frac_laplacian(f, 0.75).phys
        np.testing.assert_allclose(out, 2**1.5 * np.exp(2j * self.grid.x), atol=1e-10)

    @staticmethod
    def _gaussian_error(K, N, alpha):
        g = Grid1D(K=K, N=N)
        f = SpectralField.from_function(g, lambda x: np.exp(-0.5 * x**2))
        assert g.x[g.N // 2] == 0.0
        val = frac_laplacian(f, alpha / 2).phys.real[g.N // 2]
        return abs(val / gaussian_frac_lap_at_zero(alpha) - 1.0)

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
    def test_gaussian_closed_form(self, alpha):
        # the grid operator acts on the periodized Gaussian, whose image tails
        # contribute O(L^-1-alpha); a 32x longer period shrinks the error by 32^(1+alpha)
        coarse = self._gaussian_error(8, 512, alpha)
        fine = self._gaussian_error(256, 8192, alpha)
        assert coarse < 1e-2
        assert coarse / fine == pytest.approx(32 ** (1 + alpha), rel=0.3)

    def test_gaussian_closed_form_large_period(self):
        assert self._gaussian_error(1024, 16384, 1.0) < 1e-7

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
    def test_scaling_property(self, alpha):
        # (-D)^(a/2)[g(2.)] = 2^a ((-D)^(a/2) g)(2.): g on L, g(2.) on L/2 share sample values
        wide = Grid1D(K=8, N=1024)
        narrow = Grid1D(K=4, N=1024)
        g = SpectralField.from_function(wide, lambda x: np.exp(-0.5 * x**2))
        g2 = SpectralField.from_function(narrow, lambda x: np.exp(-2.0 * x**2))
        lhs = frac_laplacian(g2, alpha / 2).phys.real
        rhs = 2**alpha * frac_laplacian(g, alpha / 2).phys.real
        assert np.max(np.abs(lhs - rhs)) <= 1e-8 * np.max(np.abs(rhs))

    def test_oracle_gaussian(self):
        oracle = frac_laplacian_singular_oracle(lambda x: np.exp(-0.5 * x**2), 0.0, 1.0)
        assert oracle == pytest.approx(gaussian_frac_lap_at_zero(1.0), rel=1e-6)

    @pytest.mark.parametrize("alpha", [0.5, 1.5])
    def test_oracle_cosine_eigenvalue(self, alpha):
        assert frac_laplacian_singular_oracle(np.cos, 0.0, alpha, omega=1.0) == pytest.approx(1.0, abs=1e-4)

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
    def test_oracle_sine_off_origin(self, alpha):
        val = frac_laplacian_singular_oracle(lambda x: np.sin(2 * x), 0.3, alpha, omega=2.0)
        assert val == pytest.approx(2**alpha * np.sin(0.6), abs=1e-6)

    def test_oracle_constant(self):
        assert abs(frac_laplacian_singular_oracle(lambda x: 3.0 + 0 * x, 0.4, 1.2)) < 1e-10

    def test_oracle_matches_spectral_off_centre(self):
        f = SpectralField.from_function(self.grid, lambda x: np.exp(-0.5 * x**2))
        spec = frac_laplacian(f, 0.75).phys.real
        i = self.grid.N // 2 + 16
        oracle = frac_laplacian_singular_oracle(lambda x: np.exp(-0.5 * x**2), self.grid.x[i], 1.5)
        # periodization leaves an O(L^-1-alpha) image contribution on this grid
        assert oracle == pytest.approx(spec[i], rel=1e-3)


class TestSymbolAndSemigroup:
    @pytest.mark.parametrize("alpha", [0.5, 1.0, 1.7])
    def test_critical_modes(self, alpha):
        assert sh_symbol_eval(1.0, alpha, 0.1) == pytest.approx(0.01)
        assert sh_symbol_eval(-1.0, alpha, 0.1) == pytest.approx(0.01)

    def test_values(self):
        assert sh_symbol_eval(0.0, 1.3, 0.0) == -1.0
        assert sh_symbol_eval(2.0, 1.0, 0.0) == -1.0

    def test_identity_and_plane_wave(self):
        g = Grid1D(K=8, N=128)
        f = random_band_limited(g, np.random.default_rng(3), 3.0)
        np.testing.assert_array_equal(semigroup_apply(f, 0.0, 1.2, 0.1).four, f.four)
        w = SpectralField(g, phys=np.exp(1j * g.x))
        out = semigroup_apply(w, 7.0, 1.2, 0.1)
        np.testing.assert_allclose(out.phys, np.exp(0.07) * w.phys, atol=1e-12)

    def test_negative_time(self):
        g = Grid1D(K=8, N=128)
        with pytest.raises(ValueError):
            semigroup_apply(SpectralField.zeros(g), -1.0, 1.0, 0.0)

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), t1=st.floats(0, 3), t2=st.floats(0, 3),
           alpha=st.floats(0.5, 1.9))
    def test_semigroup_law(self, seed, t1, t2, alpha):
        f = random_band_limited(Grid1D(K=4, N=64), np.random.default_rng(seed), 3.0)
        a = semigroup_apply(semigroup_apply(f, t1, alpha, 0.1), t2, alpha, 0.1)
        b = semigroup_apply(f, t1 + t2, alpha, 0.1)
        assert np.max(np.abs(a.four - b.four)) <= 1e-12 * max(1.0, np.max(np.abs(f.four)))

    def test_bound_check_at_zero(self):
        assert semigroup_bound_check(0.0, 1.0, 0.05) == (1.0, 1.0)

    def test_critical_sup(self):
        crit, stab = semigroup_bound_check(10.0, 1.0, 0.05)
        assert crit == pytest.approx(math.exp(0.025), abs=1e-12)
        assert stab <= math.exp(-10 * sigma_s(1.0, 0.5))

    def test_stable_sup(self):
        s = 0.5 * min(1.0, 1 - 0.5**1.5, 1.5**1.5 - 1) ** 2
        assert sigma_s(1.5, 0.5) == pytest.approx(s, rel=1e-15)
        _, stab = semigroup_bound_check(5.0, 1.5, 0.0)
        assert stab <= math.exp(-5 * s)

    def test_eps_too_large(self):
        with pytest.raises(ValueError):
            semigroup_bound_check(1.0, 1.0, 1.0)


class TestModeFilters:
    grid = Grid1D(K=8, N=256)

    def test_band_membership(self):
        x = self.grid.x
        e1 = SpectralField(self.grid, phys=np.exp(1j * x))
        e3 = SpectralField(self.grid, phys=np.exp(3j * x))
        np.testing.assert_allclose(mode_filter(e1, "critical").phys, e1.phys, atol=1e-14)
        assert np.max(np.abs(mode_filter(e3, "critical").four)) < 1e-13

    @settings(max_examples=15, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_partition_and_idempotence(self, seed):
        f = random_band_limited(self.grid, np.random.default_rng(seed), 4.0)
        c, s = mode_filter(f, "critical"), mode_filter(f, "stable")
        np.testing.assert_allclose((c + s).four, f.four, atol=1e-14)
        np.testing.assert_array_equal(mode_filter(c, "critical").four, c.four)
        low, high = mode_filter(f, "low"), mode_filter(f, "low_complement")
        np.testing.assert_allclose((low + high).four, f.four, atol=1e-14)

    def test_low_pass_of_embedded_band_limited(self):
        # slow bandwidth B = 1 (modes |Xi| <= 1) and eps < r0 / B: E0 keeps everything
        slow = Grid1D(K=8, N=256)
        A = SpectralField(slow, four=np.where(np.abs(slow.xi) <= 1.0, 1.0 / (1 + slow.xi**2), 0.0)
                          .astype(complex))
        eps = 0.1
        emb = scale_embed(A, eps, 0, fast_grid_for(slow, eps))
        assert h_norm(mode_filter(emb, "low_complement"), 0) == 0.0
        # at eps = 0.2 the band |xi| <= 0.2 exceeds r0 and the complement is nonzero
        emb2 = scale_embed(A, 0.2, 0, fast_grid_for(slow, 0.2))
        kept = mode_filter(emb2, "low")
        assert np.all(np.abs(emb2.grid.xi[np.abs(kept.four) > 0]) <= 0.125)
        assert h_norm(mode_filter(emb2, "low_complement"), 0) > 0.0

    def test_unknown_filter(self):
        with pytest.raises(ValueError):
            mode_filter(SpectralField.zeros(self.grid), "middle")

    def test_symbol_table(self):
        tab = SymbolTable(self.grid, 1.3, eps=0.1)
        np.testing.assert_array_equal(tab.m_c + tab.m_s, 1.0)
        assert tab.sh_symbol[self.grid.index_of(1)] == 0.0
        assert tab.sh_symbol[self.grid.index_of(-1)] == 0.0
        assert set(np.unique(tab.m_0)) <= {0.0, 1.0}
        with pytest.raises(ValueError):
            tab.m_c[0] = 0.5
        r = tab.r_plus
        i = self.grid.index_of(1.25)
        assert r[i] == pytest.approx(taylor_remainder_closed(1.25, 1.3), abs=1e-9)
        assert np.isnan(r[self.grid.index_of(3)])
        assert tab.semigroup_bounds.sigma_s == pytest.approx(sigma_s(1.3, 0.5))


class TestRemainderMultipliers:
    def test_vanishing_points(self):
        assert remainder_multiplier(1.0, 1.3, "r_plus") == 0.0
        assert remainder_multiplier(2.0, 1.3, "m1_plus") == 0.0
        assert remainder_multiplier(2.0, 1.3, "m2_plus") == 0.0

    def test_wrong_half_line(self):
        with pytest.raises(ValueError):
            remainder_multiplier(-0.5, 1.3, "r_plus")
        with pytest.raises(ValueError):
            remainder_multiplier(0.5, 1.3, "m2_minus")
        with pytest.raises(ValueError):
            remainder_multiplier(0.5, 1.3, "q_plus")

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 1.3, 1.5, 1.9])
    @pytest.mark.parametrize("xi", [0.3, 0.7, 1.2, 2.0, 2.6, 3.5])
    def test_r_matches_closed_form(self, alpha, xi):
        for x, kind in ((xi, "r_plus"), (-xi, "r_minus")):
            assert remainder_multiplier(x, alpha, kind) == pytest.approx(
                taylor_remainder_closed(x, alpha), abs=1e-9)

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
    def test_r_at_two_is_c_plus(self, alpha):
        assert abs(remainder_multiplier(2.0, alpha, "r_plus") - c_plus(alpha)) < 1e-8

    def test_c_plus_values(self):
        assert c_plus(1.0) == 0.0
        assert c_plus(0.5) == pytest.approx(2 - 2**1.5 + 0.75, abs=1e-15)
        assert c_plus(0.5) == pytest.approx(-0.078427, abs=1e-6)
        assert 0.25 + c_plus(0.5) == pytest.approx(0.171573, abs=1e-6)
        # the closed form extended to the classical exponent
        assert 2 ** 4 - 2**3 + (1 - 4) == 5

    @pytest.mark.parametrize("alpha", np.arange(0.25, 1.76, 0.25))
    def test_c_plus_quadrature_and_symmetry(self, alpha):
        assert abs(c_pm_quadrature(alpha, +1) - c_plus(alpha)) < 1e-10
        assert abs(c_pm_quadrature(alpha, -1) - c_pm_quadrature(alpha, +1)) < 1e-10

    def test_c_plus_independent_integral(self):
        # integrate the closed-form third derivative of the symbol, not the library kernel
        alpha = 1.3

        def third(r):
            p = r**alpha
            d1, d2, d3 = (alpha * r ** (alpha - 1), alpha * (alpha - 1) * r ** (alpha - 2),
                          alpha * (alpha - 1) * (alpha - 2) * r ** (alpha - 3))
            return 3 * d1 * d2 - (1 - p) * d3

        val = integrate.quad(lambda r: third(r) * (2 - r) ** 2, 1, 2, epsabs=1e-13)[0]
        assert val == pytest.approx(c_plus(alpha), abs=1e-10)

    @pytest.mark.parametrize("alpha", [1.0, 1.3, 1.7])
    def test_identities(self, alpha):
        assert taylor_identity_defect(1.0, alpha) == 0.0
        for xi in (0.5, 1.3, 3.0, -0.5, -2.2):
            assert taylor_identity_defect(xi, alpha) < 1e-8
        for xi in np.linspace(1.65, 2.35, 7):
            assert remainder_reconstruction_defect(xi, alpha) < 1e-8
            assert remainder_reconstruction_defect(-xi, alpha) < 1e-8

    def test_unit_exponent_has_no_remainder_near_one(self):
        # -(1-|xi|)^2 is exactly quadratic around +-1 on each half-line
        for xi in (0.2, 0.9, 1.4, 2.5):
            assert abs(remainder_multiplier(xi, 1.0, "r_plus")) < 1e-12

    @pytest.mark.parametrize("kind,base,order", [("r_plus", 1.0, 3), ("m1_plus", 2.0, 1),
                                                 ("m2_plus", 2.0, 3)])
    def test_vanishing_orders(self, kind, base, order):
        h = np.array([0.2, 0.1, 0.05, 0.025])
        vals = np.abs([remainder_multiplier(base + d, 1.5, kind) for d in h])
        slope = np.polyfit(np.log(h), np.log(vals), 1)[0]
        assert slope >= order - 0.1
