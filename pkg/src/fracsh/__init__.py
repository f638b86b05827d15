"""Spectral laboratory for the fractional Swift-Hohenberg equation and its
Ginzburg-Landau approximation.

Modules
-------
spectral         periodic grids, continuum-normalized transforms, discrete norms
symbols          fractional Laplacian, SH symbol and semigroup, mode filters,
                 Taylor remainder multipliers
etdrk4           exponential time differencing (Cox-Matthews / Kassam-Trefethen)
ginzburg_landau  amplitude equation solver and the approximation ansatz
swift_hohenberg  pseudospectral SH solver
residuum         residual of the ansatz and eps-scaling fits
properties       randomized lemma / invariant suite
studies          configuration, sweeps and file output (CLI: ``python -m fracsh``)
"""

from .ginzburg_landau import (
    AnsatzFields,
    BlowUpError,
    GLParams,
    GLSolver,
    GLState,
    ResolutionError,
    build_ansatz,
    gl_coefficients,
    gl_evolve,
    gl_rhs,
)
from .residuum import (
    PerturbationField,
    ResiduumSample,
    ScalingReport,
    compute_residuum,
    fit_slope,
    nonlinearity_difference_scaling,
    residuum_scaling_study,
)
from .spectral import (
    Grid1D,
    SpectralField,
    cb_norm,
    forward_transform,
    h_norm,
    inverse_transform,
    l1_fourier_norm,
    scale_embed,
)
from .swift_hohenberg import SHParams, SHSolver, SHState, sh_evolve, sh_nonlinearity, sh_step
from .symbols import (
    FilterConfig,
    SemigroupBounds,
    SymbolTable,
    c_plus,
    frac_laplacian,
    frac_laplacian_singular_oracle,
    mode_filter,
    remainder_multiplier,
    semigroup_apply,
    semigroup_bound_check,
    sh_symbol_eval,
    taylor_identity_defect,
)

__version__ = "0.1.0"
