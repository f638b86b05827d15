"""Command-line entry point: ``python -m fracsh <subcommand>``.

Subcommands ``symbols``, ``gl``, ``sh``, ``residuum``, ``convergence`` and
``props`` each run one study from :mod:`fracsh.studies`.  Exit codes: 0 on
success, 2 on invalid configuration, 3 on numeric failure (blow-up, resolution
guard, quadrature), 4 when a study finished but missed its acceptance
threshold.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import studies
from .studies import (
    CONVERGENCE_WINDOW,
    EXIT_NUMERIC,
    EXIT_OK,
    EXIT_THRESHOLD,
    EXIT_VALIDATION,
    NONLINEAR_CRIT_MIN,
    NONLINEAR_STAB_MIN,
    NUMERIC_ERRORS,
    RESIDUUM_CRIT_MIN,
    RESIDUUM_STAB_MIN,
    SYMBOL_DEFECT_MAX,
)

log = logging.getLogger("fracsh")


def _fmt_slope(s):
    return "n/a (degenerate or below floor)" if s is None else f"{s:.3f}"


def cmd_symbols(cfg, args) -> int:
    rows, worst = studies.run_symbols(cfg)
    print(f"symbols: alpha={cfg.alpha:g}, {len(rows)} rows, worst defect {worst:.2e}")
    return EXIT_OK if worst <= SYMBOL_DEFECT_MAX else EXIT_THRESHOLD


def cmd_gl(cfg, args) -> int:
    run = studies.run_gl(cfg)
    p = run.params
    print(f"gl: alpha={p.alpha:g} gamma={p.gamma:.6g} c_plus={p.c_plus:.6g}, "
          f"{len(run.states)} samples to T={run.states[-1].T:g}")
    return EXIT_OK


def cmd_sh(cfg, args) -> int:
    results = studies.run_sh(cfg, workers=args.workers)
    for eps, states in zip(cfg.eps_list, results):
        print(f"sh: eps={eps:g} reached t={states[-1].t:g}")
    return EXIT_OK


def cmd_residuum(cfg, args) -> int:
    rep = studies.run_residuum(cfg, workers=args.workers)
    print(f"residuum: crit slope {_fmt_slope(rep.slope_crit)}, stab slope {_fmt_slope(rep.slope_stab)}")
    if rep.degenerate:
        return EXIT_OK
    ok = rep.slope_crit >= RESIDUUM_CRIT_MIN and rep.slope_stab >= RESIDUUM_STAB_MIN
    return EXIT_OK if ok else EXIT_THRESHOLD


def cmd_convergence(cfg, args) -> int:
    rep = studies.run_convergence(cfg, workers=args.workers)
    print(f"convergence: alpha={rep.alpha:g} errors {['%.3e' % e for e in rep.err_psi]}, "
          f"slope {_fmt_slope(rep.slope_psi)}, monotone={rep.monotone}")
    if rep.slope_psi is None:
        return EXIT_OK
    return EXIT_OK if rep.in_window(CONVERGENCE_WINDOW) and rep.monotone else EXIT_THRESHOLD


def cmd_nonlinearity(cfg, args) -> int:
    rep = studies.run_nonlinearity(cfg)
    print(f"nonlinearity: crit slope {_fmt_slope(rep.slope_crit)}, "
          f"stab slope {_fmt_slope(rep.slope_stab)}")
    if rep.degenerate:
        return EXIT_OK
    ok = rep.slope_crit >= NONLINEAR_CRIT_MIN and rep.slope_stab >= NONLINEAR_STAB_MIN
    return EXIT_OK if ok else EXIT_THRESHOLD


def cmd_props(cfg, args) -> int:
    checks = studies.run_property_suite(cfg)
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name:40s} measured={c.measured:.3e} bound={c.bound:.3e}")
    return EXIT_OK if all(c.passed for c in checks) else EXIT_THRESHOLD


COMMANDS = {
    "symbols": (cmd_symbols, "remainder multipliers, Taylor identities and the second-harmonic constant"),
    "gl": (cmd_gl, "solve the Ginzburg-Landau amplitude equation"),
    "sh": (cmd_sh, "evolve Swift-Hohenberg from the improved ansatz"),
    "residuum": (cmd_residuum, "residuum eps-scaling study"),
    "convergence": (cmd_convergence, "approximation-error eps-scaling study"),
    "nonlinearity": (cmd_nonlinearity, "nonlinearity-difference eps-scaling study"),
    "props": (cmd_props, "randomized lemma / invariant suite"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fracsh", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override one config key (repeatable)")
        p.add_argument("--workers", type=int, default=1, help="parallel eps jobs")
        p.add_argument("--out", help="output directory (overrides output_dir)")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        extra = {"output_dir": args.out} if args.out else {}
        if args.workers < 1:
            raise ValueError("--workers must be >= 1")
        cfg = studies.load_config(args.config, args.set, **extra)
    except (ValueError, OSError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    handler = COMMANDS[args.command][0]
    try:
        return handler(cfg, args)
    except NUMERIC_ERRORS as exc:
        when = getattr(exc, "time", None)
        print(f"numeric failure{'' if when is None else f' at t={when:g}'}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
