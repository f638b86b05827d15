"""From the amplitude equation to an approximate Swift-Hohenberg solution.

Run with ``python3 demos/02_amplitude_equation.py``.
"""

# %% Coefficients of the Ginzburg-Landau equation
# The envelope A(X, T) obeys dA/dT = alpha^2 A'' + A - gamma |A|^2 A.  gamma
# collects the cubic term and the quadratic term fed back through the mean mode
# and the second harmonic.
import numpy as np

from fracsh.ginzburg_landau import (
    GLState,
    build_ansatz,
    default_slow_grid,
    gl_coefficients,
    gl_evolve,
    sech_amplitude,
)
from fracsh.residuum import compute_residuum, fit_slope, solve_amplitude
from fracsh.spectral import SpectralField, h_norm
from fracsh.swift_hohenberg import SHParams, sh_evolve

for alpha, a1, a2 in ((2.0, 0.0, 1.0), (1.0, 1.0, 1.0), (1.5, 0.0, 1.0)):
    p = gl_coefficients(alpha, a1, a2)
    print(f"alpha={alpha}, a1={a1}, a2={a2}: diffusion {p.diffusion}, gamma {p.gamma:+.4f}")

# %% Evolving the envelope
# With a stabilizing cubic term (gamma > 0) a sech pulse grows towards the
# homogeneous state 1/sqrt(gamma).
run = solve_amplitude(1.0, 0.0, 1.0, amplitude=0.3, T_star=1.0, samples=5)
for s in run.states:
    print(f"T={s.T:.2f}: max|A| = {np.max(np.abs(s.A.phys)):.4f}")

# %% Building the approximation on the fast grid
# psi = A(eps x, eps^2 t) e^{ix} + c.c.; the improved version adds the mean mode
# and second harmonic.  The residuum measures how far eps Psi is from solving
# the Swift-Hohenberg equation.
for eps in (0.2, 0.1, 0.05):
    ans = build_ansatz(run.states[2], run.params, eps)
    smp = compute_residuum(ans, SHParams(alpha=1.0, eps=eps, a1=0.0, a2=1.0))
    print(f"eps={eps}: critical part {smp.norm_crit:.2e}, stable part {smp.norm_stab:.2e}")

# %% Comparing with the full equation
# Starting from eps Psi(0), the Swift-Hohenberg solution stays close to eps psi
# over the slow time scale t = T / eps^2.
errors = []
for eps in (0.2, 0.1, 0.05):
    ans = [build_ansatz(s, run.params, eps, config=None) for s in run.states]
    u0 = SpectralField(ans[0].grid, phys=(eps * ans[0].Psi).phys.real)
    states = sh_evolve(u0, SHParams(alpha=1.0, eps=eps, a1=0.0, a2=1.0), 1.0 / eps**2, len(run.states))
    errors.append(max(h_norm(s.u - eps * a.psi, 1.0) for s, a in zip(states, ans)))
    print(f"eps={eps}: sup_t ||u - eps psi||_H1 = {errors[-1]:.3e}")
print(f"log-log slope {fit_slope([0.2, 0.1, 0.05], errors):.2f}")

# %% A destabilizing cubic term blows up
p = gl_coefficients(1.0, 1.0, 1.0)
print(f"gamma = {p.gamma}: a pulse of height 0.8 blows up before T = 1")
try:
    gl_evolve(GLState(sech_amplitude(default_slow_grid(), 0.8)), p, 1.0, 1 / 1024)
except RuntimeError as exc:
    print(f"  {type(exc).__name__} at T = {exc.time:.4f}")
