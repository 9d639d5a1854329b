"""Command-line front end: ``p1bounds <subcommand> [flags]``.

Every subcommand writes one CSV (``%.12e`` floats, fixed column order) to
``--output``, to ``$P1BOUNDS_OUTPUT_DIR/<subcommand>.csv`` when that
variable is set, or to stdout.  The exit status is 1 when any row fails
its containment check and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Sequence

import numpy as np

from . import bounds, fem
from .bounds import (
    MEAN_VALUE,
    SAVINGS_NOTE,
    TAYLOR,
    TAYLOR_LIKE_ASYMPTOTIC,
    BoundMethod,
    constant,
    mesh_savings,
    parse_method,
    taylor_like,
)
from .expansion import taylor_like_step, taylor_step
from .functions import PRESETS, preset
from .mesh import perturbed_mesh, uniform_mesh
from .norms import QuadratureSpec, verify_bound

OUTPUT_DIR_ENV = "P1BOUNDS_OUTPUT_DIR"
SUBCOMMANDS = ("constants", "expansion", "interp", "asymptotic", "fem", "savings")


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return "%.12e" % x
    return str(x)


class Table:
    def __init__(self, columns: Sequence[str]):
        self.columns = list(columns)
        self.rows: list[list] = []
        self.failures: list[list] = []

    def add(self, *values, ok: bool | None = None) -> None:
        row = list(values)
        self.rows.append(row)
        if ok is False:
            self.failures.append(row)

    def render(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([_fmt(v) for v in row])
        return buf.getvalue()


def _methods(args) -> list[BoundMethod]:
    if args.method:
        return [parse_method(m) for m in args.method]
    return [TAYLOR, MEAN_VALUE, TAYLOR_LIKE_ASYMPTOTIC] + [taylor_like(n) for n in args.n]


def _mesh(args, cells: int):
    if args.mesh_kind == "perturbed":
        return perturbed_mesh(cells, args.amplitude, args.seed)
    return uniform_mesh(cells)


def _quad(args) -> QuadratureSpec:
    return QuadratureSpec(args.points_per_panel, args.panels_per_cell)


def _pmap(fn, items: Iterable, jobs: int) -> list:
    items = list(items)
    if jobs <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))  # map preserves input order


# -- subcommands --------------------------------------------------------------


def cmd_constants(args) -> Table:
    t = Table(["method", "p", "n", "constant_num", "constant_den", "constant_float"])
    for p in args.p:
        for m in _methods(args):
            c = constant(m, p)
            t.add(m.kind, p, m.n, c.numerator, c.denominator, float(c))
    return t


def cmd_expansion(args) -> Table:
    t = Table(["function", "mesh_kind", "num_cells", "cell", "x_i", "h_i",
               "method", "n", "remainder", "bound", "ok"])
    for name in args.function:
        f = preset(name)
        for cells in args.cells:
            mesh = _mesh(args, cells)
            for i in range(mesh.num_cells):
                a, b = mesh.cell(i)
                res = taylor_step(f, a, b - a)
                t.add(name, args.mesh_kind, cells, i, a, b - a, "taylor", None,
                      res.remainder, res.bound, res.contained, ok=res.contained)
                for n in args.n:
                    res = taylor_like_step(f, a, b - a, n)
                    t.add(name, args.mesh_kind, cells, i, a, b - a, "taylor_like", n,
                          res.remainder, res.bound, res.contained, ok=res.contained)
    return t


def cmd_interp(args) -> Table:
    t = Table(["function", "mesh_kind", "num_cells", "h", "p", "method", "n",
               "measured", "bound", "ok"])
    quad = _quad(args)
    grid = [(name, cells, p, m) for name in args.function for cells in args.cells
            for p in args.p for m in _methods(args)]

    def run(key):
        name, cells, p, m = key
        return verify_bound(preset(name), _mesh(args, cells), p, m, quad)

    for (name, cells, p, m), rep in zip(grid, _pmap(run, grid, args.jobs)):
        t.add(name, args.mesh_kind, cells, rep.h, p, m.kind, m.n,
              rep.measured_error, rep.bound_W1p, rep.ok, ok=rep.ok)
    return t


def cmd_asymptotic(args) -> Table:
    t = Table(["p", "n", "finite_constant", "asymptotic_constant", "gap",
               "power_sum_ratio", "power_sum_ratio_ok"])
    for p in args.p:
        limit = constant(TAYLOR_LIKE_ASYMPTOTIC, p)
        for n in args.n:
            finite = constant(taylor_like(n), p)
            ratio = (p + 1) * bounds.power_sum(p, n) / n ** (p + 1)
            ok = 1.0 <= ratio <= 1.0 + (p + 1) / n if n >= p else None
            t.add(p, n, float(finite), float(limit), float(finite / limit - 1),
                  float(ratio), ok, ok=ok)
    return t


def cmd_fem(args) -> Table:
    t = Table(["problem", "num_cells", "h", "p", "method", "fem_error",
               "interp_error", "bound", "cea", "ok"])
    quad = _quad(args)
    cea = fem.CeaConstant(args.cea)
    for name in args.problem:
        problem = fem.problem_preset(name)
        for p in args.p:
            errors = []
            for cells in args.cells:
                for m in _methods(args):
                    rep = fem.cea_chain(problem, _mesh(args, cells), p, cea, m, quad)
                    t.add(name, cells, rep.h, p, m.label, rep.fem_error, rep.interp_error,
                          rep.bound, rep.cea, rep.ok, ok=rep.ok)
                errors.append((rep.h, rep.fem_error))
            _report_rates(name, p, errors)
    return t


def _report_rates(name: str, p: int, errors: list[tuple[float, float]]) -> None:
    for (h0, e0), (h1, e1) in zip(errors, errors[1:]):
        if e0 > 0 and e1 > 0 and h0 != h1:
            rate = math.log(e0 / e1) / math.log(h0 / h1)
            print(f"# {name} p={p} h={h0:.4g}->{h1:.4g} observed rate {rate:.4f}",
                  file=sys.stderr)


def cmd_savings(args) -> Table:
    t = Table(["p", "dim", "coarse", "fine", "predicted_h_ratio",
               "predicted_node_factor", "problem", "target", "cells_fine",
               "cells_coarse", "h_ratio", "node_factor", "saturated"])
    coarse = parse_method(args.coarse)
    fine = parse_method(args.fine)
    cea = fem.CeaConstant(args.cea)
    print(f"# {SAVINGS_NOTE}", file=sys.stderr)
    for p in args.p:
        pred = mesh_savings(p, coarse, fine, args.dim)
        for name in args.problem:
            rep = fem.savings_experiment(fem.problem_preset(name), p, args.target, args.dim,
                                         _quad(args), cea, coarse, fine, measure=False)
            t.add(p, args.dim, coarse.label, fine.label, pred.h_ratio, pred.node_factor,
                  name, args.target, rep.cells_taylor, rep.cells_taylor_like,
                  rep.h_ratio, rep.node_factor, rep.saturated)
            print(f"# p={p} dim={args.dim}: h_ratio {pred.h_ratio:.4f}, "
                  f"node_factor {pred.node_factor:.2f} (predicted); "
                  f"{rep.h_ratio:.4f}, {rep.node_factor:.2f} ({name}, target {args.target:g})",
                  file=sys.stderr)
    return t


COMMANDS = {
    "constants": cmd_constants,
    "expansion": cmd_expansion,
    "interp": cmd_interp,
    "asymptotic": cmd_asymptotic,
    "fem": cmd_fem,
    "savings": cmd_savings,
}


# -- argument handling --------------------------------------------------------


def _pos_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def _p_value(text: str) -> int:
    v = int(text)
    if v < 2:
        raise argparse.ArgumentTypeError(f"p must be >= 2, got {text!r}")
    return v


def _function_name(text: str) -> str:
    if text not in PRESETS:
        raise argparse.ArgumentTypeError(
            f"unknown function {text!r}; choose from {', '.join(sorted(PRESETS))}")
    return text


def _problem_name(text: str) -> str:
    if text not in fem.PROBLEMS:
        raise argparse.ArgumentTypeError(
            f"unknown problem {text!r}; choose from {', '.join(sorted(fem.PROBLEMS))}")
    return text


def _method_name(text: str) -> str:
    try:
        parse_method(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text


_DEFAULTS = {
    "constants": dict(p=[2, 5], n=[2], cells=[16], function=["sin_pi"]),
    "expansion": dict(p=[2], n=[1, 2, 4, 8], cells=[16], function=["cubic"]),
    "interp": dict(p=[2, 3, 5], n=[1, 2, 4, 8], cells=[4, 8, 16, 32, 64, 128],
                   function=sorted(PRESETS)),
    "asymptotic": dict(p=[2, 3, 5, 8], n=[1, 2, 10, 100, 1000, 10000, 100000],
                       cells=[16], function=["sin_pi"]),
    "fem": dict(p=[2], n=[2], cells=[8, 16, 32, 64, 128], function=["sin_pi"],
                method=["taylor"]),
    "savings": dict(p=[2, 5], n=[2], cells=[16], function=["sin_pi"]),
}


def _common_flags() -> argparse.ArgumentParser:
    # built fresh per subcommand: parent actions are shared objects, and
    # set_defaults on one subparser would otherwise leak into the others
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file; flags take precedence")
    common.add_argument("--p", type=_p_value, nargs="+", help="norm orders")
    common.add_argument("--n", type=_pos_int, nargs="+", help="Taylor-like panel counts")
    common.add_argument("--cells", type=_pos_int, nargs="+", help="mesh cell counts")
    common.add_argument("--mesh-kind", choices=["uniform", "perturbed"], default="uniform")
    common.add_argument("--amplitude", type=float, default=0.3)
    common.add_argument("--seed", type=int, default=1)
    common.add_argument("--function", type=_function_name, nargs="+")
    common.add_argument("--method", type=_method_name, nargs="+",
                        help="taylor, mean_value, asymptotic or taylor_like:N")
    common.add_argument("--points-per-panel", type=int, default=8)
    common.add_argument("--panels-per-cell", type=int, default=16)
    common.add_argument("--cea", type=float, default=1.0)
    common.add_argument("--problem", type=_problem_name, nargs="+", default=["sin_pi"])
    common.add_argument("--dim", type=int, choices=[1, 2, 3], default=3)
    common.add_argument("--target", type=float, default=1e-2)
    common.add_argument("--coarse", type=_method_name, default="asymptotic")
    common.add_argument("--fine", type=_method_name, default="taylor")
    common.add_argument("--jobs", type=_pos_int, default=1)
    common.add_argument("-o", "--output", help="CSV path (default: stdout)")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="p1bounds", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "constants": "exact error constants of every method",
        "expansion": "Taylor and Taylor-like remainders against their bounds",
        "interp": "measured interpolation error against each bound",
        "asymptotic": "finite-n constants approaching their limit",
        "fem": "P1 FEM errors, interpolation errors and Cea-scaled bounds",
        "savings": "mesh coarsening allowed by the smaller constant",
    }
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name, parents=[_common_flags()], help=helps[name])
        sp.set_defaults(**_DEFAULTS[name])
    return parser


def read_config(path: str) -> dict[str, list[str] | str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out: dict[str, list[str] | str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value.replace(",", " ").split()
    return out


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if not args.config:
        return args
    try:
        cfg = read_config(args.config)
    except (OSError, ValueError) as exc:
        parser.error(f"--config: {exc}")
    # Re-parse with config values inserted ahead of the command-line flags,
    # so explicit flags win and config values pass the same validation.
    injected: list[str] = []
    for key, values in cfg.items():
        if key == "config":
            continue
        injected.append("--" + key.replace("_", "-"))
        injected.extend(values)
    return parser.parse_args([argv[0], *injected, *argv[1:]])


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = _apply_config(parser, argv)
    try:
        table = COMMANDS[args.command](args)
    except (ValueError, KeyError) as exc:
        print(f"p1bounds {args.command}: {exc}", file=sys.stderr)
        return 2
    text = table.render()
    out = args.output
    if out is None and os.environ.get(OUTPUT_DIR_ENV):
        out = os.path.join(os.environ[OUTPUT_DIR_ENV], f"{args.command}.csv")
    if out is None:
        sys.stdout.write(text)
    else:
        os.makedirs(os.path.dirname(os.path.abspath(out)), exist_ok=True)
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    for row in table.failures:
        print("FAILED: " + ",".join(_fmt(v) for v in row), file=sys.stderr)
    return 1 if table.failures else 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
