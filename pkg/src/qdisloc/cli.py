"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 physics precondition failed,
3 oracle validation failed.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import analytic
from .errors import AllPointsInvalid, PreconditionError, QdislocError
from .oracle import RadialGrid, SCHEMES, solve_oracle
from .params import QuantumNumbers, ScalarPotential, SystemParams, effective_couplings
from .sweep import SWEEPABLE, VERIFY_GRID, SweepSpec, emit_csv, emit_plot, run_sweep, summarize

EXIT_OK, EXIT_USAGE, EXIT_PRECONDITION, EXIT_VALIDATION = 0, 1, 2, 3
OUTPUT_DIR_ENV = "QDISLOC_OUTPUT_DIR"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _g(x: float) -> str:
    return f"{x:.17g}"


def _physics_parent() -> argparse.ArgumentParser:
    parent = _Parser(add_help=False)
    g = parent.add_argument_group("physics")
    g.add_argument("--case", type=int, choices=(1, 2), default=1)
    g.add_argument("--m", type=float, default=1.0, help="particle mass")
    g.add_argument("--Q", type=float, default=1.0, help="quadrupole constant")
    g.add_argument("--lambda", dest="lam", type=float, default=0.0, help="linear charge density")
    g.add_argument("--Cm", type=float, default=1.0, help="magnetic field constant")
    g.add_argument("--beta", type=float, default=0.0, help="screw dislocation parameter")
    g.add_argument("--k", type=float, default=0.0, help="wave number along z")
    g.add_argument("--l", type=int, default=0, help="angular quantum number")
    g.add_argument("--n", type=int, nargs="+", default=[0], help="radial quantum number(s)")
    for name in ("C1", "C2", "C3"):
        g.add_argument(f"--{name}", type=float, default=None, help="case 2 potential coefficient")
    parent.add_argument("--config", type=Path, help="key=value file of defaults; flags win")
    return parent


def _grid_parent() -> argparse.ArgumentParser:
    parent = _Parser(add_help=False)
    g = parent.add_argument_group("oracle grid")
    g.add_argument("--points", type=int, default=None)
    g.add_argument("--refinement-levels", type=int, default=None)
    g.add_argument("--rho-max", type=float, default=None)
    g.add_argument("--rho-min", type=float, default=None)
    g.add_argument("--scheme", choices=SCHEMES, default="frobenius")
    return parent


def build_parser() -> argparse.ArgumentParser:
    physics = _physics_parent()
    grid = _grid_parent()
    parser = _Parser(
        prog="qdisloc",
        description="Spectrum of an electric quadrupole moment near a screw dislocation.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("spectrum", parents=[physics], help="closed-form energies")

    wf = sub.add_parser("wavefunction", parents=[physics], help="sample a normalized radial state")
    wf.add_argument("--rho-max", type=float, default=None)
    wf.add_argument("--samples", type=int, default=2001)
    wf.add_argument("--out", type=Path, default=None, help="CSV path (stdout if omitted)")

    val = sub.add_parser("validate", parents=[physics, grid], help="closed form vs oracle")
    val.add_argument("--nmax", type=int, default=3)
    val.add_argument("--tol", type=float, default=1e-6)
    val.add_argument("--oracle-beta", type=float, default=None, help=argparse.SUPPRESS)

    sw = sub.add_parser("sweep", parents=[physics, grid], help="parameter sweep to CSV/SVG")
    sw.add_argument("--param", choices=SWEEPABLE, required=True)
    sw.add_argument("--from", dest="start", type=float, required=True)
    sw.add_argument("--to", dest="stop", type=float, required=True)
    sw.add_argument("--steps", type=int, default=26)
    sw.add_argument("--levels", type=int, nargs="+", default=[1, 2, 3])
    sw.add_argument("--csv", type=Path, default=Path("sweep.csv"))
    sw.add_argument("--plot", type=Path, default=None)
    sw.add_argument("--verify", action="store_true")
    sw.add_argument("--workers", type=int, default=1)
    return parser


def read_config(path: Path) -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        out["lam" if key == "lambda" else key] = value
    return out


def _apply_config(parser: argparse.ArgumentParser, argv: Sequence[str]) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", type=Path)
    known, _ = pre.parse_known_args(argv)
    if known.config is None:
        return
    try:
        config = read_config(known.config)
    except OSError as exc:
        raise UsageError(f"cannot read config {known.config}: {exc}") from exc
    subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    for sp in subparsers.choices.values():
        actions = {a.dest: a for a in sp._actions}
        defaults = {}
        for key, text in config.items():
            action = actions.get(key)
            if action is None:
                continue
            if isinstance(action, argparse._StoreTrueAction):
                defaults[key] = text.lower() in ("1", "true", "yes", "on")
            elif action.nargs == "+":
                defaults[key] = [action.type(x) for x in text.replace(",", " ").split()]
            else:
                defaults[key] = action.type(text) if action.type else text
        sp.set_defaults(**defaults)


def output_path(path: Path) -> Path:
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        return Path(base) / path
    return path


def physics_from_args(args) -> tuple[SystemParams, Optional[ScalarPotential]]:
    cs = (args.C1, args.C2, args.C3)
    if args.case == 1:
        if any(c is not None for c in cs):
            raise UsageError("--C1/--C2/--C3 are only valid with --case 2")
        v = None
    else:
        v = ScalarPotential(*(0.0 if c is None else c for c in cs))
    try:
        p = SystemParams(args.m, args.Q, args.lam, args.Cm, args.beta, args.k)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return p, v


def _grid_from_args(args, fallback: RadialGrid) -> RadialGrid:
    points = fallback.points if args.points is None else args.points
    levels = fallback.refinement_levels if args.refinement_levels is None else args.refinement_levels
    try:
        return RadialGrid(args.rho_max, points, levels, args.rho_min)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_spectrum(args) -> int:
    p, v = physics_from_args(args)
    label = "delta" if v is None else "tau"
    rows = []
    for n in args.n:
        q = QuantumNumbers(n, args.l)
        c = effective_couplings(p, v, q)
        e = analytic.energy(p, v, q)
        qs = analytic.quantum_sum(p, v, q)
        advisory = "yes" if analytic.unbound_advisory(p, v, q) else "no"
        rows.append(f"{n}\t{args.l}\t{_g(e)}\t{_g(qs)}\t{_g(c.Omega)}\t{_g(c.L)}\tsatisfied\t{advisory}")
    print(f"# case {args.case}")
    print(f"n\tl\tenergy\t{label}\tOmega\tL\tbound_condition\tadvisory_unbound")
    print("\n".join(rows))
    return EXIT_OK


def cmd_wavefunction(args) -> int:
    p, v = physics_from_args(args)
    q = QuantumNumbers(args.n[0], args.l)
    sol, psi = analytic.eigenfunction(p, v, q, normalized=True)
    if args.samples < 2:
        raise UsageError("--samples must be >= 2")
    rho_max = args.rho_max
    if rho_max is None:
        rho_max = math.sqrt((2 * sol.quantum_sum + 40) / sol.laguerre_arg_scale)
    rho = np.linspace(0.0, rho_max, args.samples)
    values = psi(rho)
    lines = ["rho,psi,density"]
    lines += [f"{_g(r)},{_g(y)},{_g(y * y * r)}" for r, y in zip(rho, values)]
    text = "\n".join(lines) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        path = output_path(args.out)
        path.write_text(text, encoding="utf-8")
        print(f"wrote {len(rho)} samples to {path}")
    return EXIT_OK


def cmd_validate(args) -> int:
    p, v = physics_from_args(args)
    grid = _grid_from_args(args, RadialGrid())
    if args.nmax < 0:
        raise UsageError("--nmax must be >= 0")
    count = args.nmax + 1
    q0 = QuantumNumbers(0, args.l)
    exact = [analytic.energy(p, v, QuantumNumbers(n, args.l)) for n in range(count)]
    p_oracle = p
    if args.oracle_beta is not None:
        p_oracle = SystemParams(p.m, p.Q, p.lam, p.Cm, args.oracle_beta, p.k)
    try:
        res = solve_oracle(p_oracle, v, q0, count, grid=grid, scheme=args.scheme, vectors=False)
    except PreconditionError:
        raise  # physics failure of the oracle parameters: exit 2, not 3
    except QdislocError as exc:
        print(f"validation failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    print("n\tenergy_analytic\tenergy_oracle\trel_err\torder\textrapolation_error")
    errors = []
    for n in range(count):
        e, eo = exact[n], float(res.energies[n])
        rel = abs(eo - e) / abs(e)
        errors.append(rel)
        print(f"{n}\t{_g(e)}\t{_g(eo)}\t{rel:.3e}\t{res.order[n]:.4f}\t{res.extrapolation_error[n]:.3e}")
    finite = [o for o in res.order if math.isfinite(o)]
    if finite:
        print(f"# observed order {min(finite):.4f} .. {max(finite):.4f}")
    worst = int(np.argmax(errors))
    if errors[worst] >= args.tol:
        print(
            f"FAIL: worst n={worst} rel_err={errors[worst]:.3e} >= tol {args.tol:g}",
            file=sys.stderr,
        )
        return EXIT_VALIDATION
    print(f"# all {count} levels within rel_err < {args.tol:g}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    p, v = physics_from_args(args)
    try:
        spec = SweepSpec(args.param, args.start, args.stop, args.steps, tuple(args.levels), p, v, args.l)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    grid = _grid_from_args(args, VERIFY_GRID)
    rows = run_sweep(spec, verify=args.verify, grid=grid, workers=args.workers)
    csv_path = emit_csv(rows, output_path(args.csv))
    plot_path = emit_plot(rows, output_path(args.plot)) if args.plot else None
    s = summarize(rows)
    err = "n/a" if s["max_rel_err"] is None else f"{s['max_rel_err']:.3e}"
    print(f"rows={s['rows']} gaps={s['gaps']} max_rel_err={err} csv={csv_path}"
          + (f" plot={plot_path}" if plot_path else ""))
    return EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum,
    "wavefunction": cmd_wavefunction,
    "validate": cmd_validate,
    "sweep": cmd_sweep,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except (PreconditionError, AllPointsInvalid) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        # malformed inputs caught by the library's own validation
        print(f"qdisloc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
