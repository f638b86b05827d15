"""The scaling studies behind the command-line tool, driven from Python.

Run with ``python3 demos/03_scaling_studies.py [output_dir]``; the same
studies are available as ``python3 -m fracsh residuum|convergence|...``.
"""

# %% Setup
import sys
import tempfile

from fracsh.studies import StudyConfig, run_convergence, run_nonlinearity, run_property_suite, run_residuum

out = sys.argv[1] if len(sys.argv) > 1 else tempfile.mkdtemp(prefix="fracsh_")
print(f"writing study files to {out}")

# %% Residuum slopes
# The critical and stable parts of the residuum should shrink like eps^3.5 and
# eps^2.5 in the scaled H^1 norm.
rep = run_residuum(StudyConfig(output_dir=out))
print(f"residuum: critical slope {rep.slope_crit:.3f}, stable slope {rep.slope_stab:.3f}")

# %% Nonlinearity differences
rep = run_nonlinearity(StudyConfig(a1=0.0, output_dir=out))
print(f"nonlinearity: critical slope {rep.slope_crit:.3f}, stable slope {rep.slope_stab:.3f}")

# %% Approximation error
# The error between the Swift-Hohenberg solution and eps psi is expected to be
# O(eps^{3/2}).  At alpha = 1 the symbol is exactly quadratic around xi = 1,
# the approximation is better than that and the slope comes out near 2.5.
for alpha in (1.0, 1.5):
    rep = run_convergence(StudyConfig(alpha=alpha, a1=0.0, output_dir=out))
    errs = ", ".join(f"{e:.2e}" for e in rep.err_psi)
    print(f"alpha={alpha}: errors {errs}, slope {rep.slope_psi:.3f}")

# %% Randomized inequality checks
for c in run_property_suite(StudyConfig(output_dir=out)):
    print(f"{c.name:38s} {'ok' if c.passed else 'FAILED'}  measured {c.measured:.3g} (bound {c.bound:.3g})")
