"""A tour of the fractional Laplacian and the Swift-Hohenberg symbol.

Run with ``python3 demos/01_operator_and_symbols.py``; every cell prints what it checks.
"""

# %% The fractional Laplacian as a Fourier multiplier
# On the periodic grid, (-Delta)^{alpha/2} multiplies each Fourier coefficient
# by |xi|^alpha.  A pure cosine is therefore an eigenfunction.
import numpy as np

from fracsh.spectral import Grid1D, SpectralField
from fracsh.symbols import (
    c_plus,
    c_pm_quadrature,
    frac_laplacian,
    frac_laplacian_singular_oracle,
    remainder_multiplier,
    sh_symbol_eval,
)

grid = Grid1D(K=8, N=256)
u = SpectralField.from_function(grid, lambda x: np.cos(2 * x))
for alpha in (0.5, 1.0, 1.5):
    out = frac_laplacian(u, alpha / 2).phys.real
    print(f"alpha={alpha}: max |L cos 2x - 2^alpha cos 2x| = {np.max(np.abs(out - 2**alpha * u.phys.real)):.1e}")

# %% The same operator as a singular integral
# The whole-line operator can also be written as a principal-value integral.
# For a Gaussian both routes agree once the period is long enough that the
# periodic images stop contributing.
big = Grid1D(K=8192, N=131072)
gauss = SpectralField.from_function(big, lambda x: np.exp(-x**2))
fourier = frac_laplacian(gauss, 0.5).phys.real
j0 = int(np.argmin(np.abs(big.x - 0.5)))
oracle = frac_laplacian_singular_oracle(lambda y: np.exp(-y**2), big.x[j0], 1.0)
print(f"(-Delta)^(1/2) Gaussian at x={big.x[j0]:.3f}: Fourier {fourier[j0]:.10f}, integral {oracle:.10f}")

# %% The linear symbol and its expansion at the critical wavenumber
# -(1 - |xi|^alpha)^2 vanishes at xi = +-1.  Near xi = 1 it behaves like
# -alpha^2 (xi - 1)^2; the rest is the remainder r(xi).
alpha = 1.3
for xi in (0.9, 1.0, 1.1, 2.0):
    r = remainder_multiplier(xi, alpha, "r_plus")
    print(f"xi={xi}: symbol {float(sh_symbol_eval(xi, alpha)):+.6f}, remainder {r:+.6f}")

# %% The constant of the remainder at xi = 2
# It has a closed form 2^{2 alpha} - 2^{alpha+1} + 1 - alpha^2 that quadrature
# reproduces; at alpha = 1 it vanishes because the symbol is exactly quadratic
# on the positive half-line.
for alpha in (0.5, 1.0, 1.5):
    print(f"alpha={alpha}: closed {c_plus(alpha):+.12f}, quadrature {c_pm_quadrature(alpha):+.12f}")
