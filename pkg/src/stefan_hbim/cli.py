"""Command-line front end.

    stefan-hbim solve  --method p3 --ste 1 --bi 1
    stefan-hbim solve  --method p1 --ste 4 --limit
    stefan-hbim table  --preset ice-table1 [--format json]
    stefan-hbim sweep  --ste 1e-3 --bi-min 0.1 --bi-max 1e6 --points 63 --log
    stefan-hbim verify [--quick]

Exit status: 0 success, 1 numerical or invariant failure, 2 usage error.
Every command accepts ``--config PATH``, a JSON object keyed by option name
(``bi_min``, ``t`` ...); flags given on the command line win.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, fields
from typing import Any, Optional, Sequence

import numpy as np

from . import analysis, exact, hbim, verify
from .errors import DomainError, StefanError, ValidationError
from .model import PRESETS, MethodId, PhysicalParams, Scheme, dimensionless_from_physical

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2

METHOD_CHOICES = [s.value for s in Scheme]
FORMATS = ("csv", "json")

# defaults applied after the config file has been merged in
DEFAULTS: dict[str, dict[str, Any]] = {
    "solve": {"method": None, "ste": None, "bi": None, "limit": False, "preset": None, "format": "json", "out": None},
    "table": {"preset": None, "t": None, "positions": None, "physical": None, "format": "csv", "out": None},
    "sweep": {"ste": None, "bi_min": None, "bi_max": None, "points": None, "log": False, "format": "csv", "out": None},
    "verify": {"quick": False, "out": None},
}


class UsageError(Exception):
    """Bad flag combination, reported with exit status 2."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    options: dict[str, Any]

    def __getitem__(self, key: str) -> Any:
        return self.options[key]


def _sig(x: float) -> str:
    return format(x, ".12g")


def _positions(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"positions must be comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stefan-hbim",
        description="One-phase Stefan problem with a convective boundary: exact and heat-balance-integral solutions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    S = argparse.SUPPRESS  # only flags actually given reach the namespace, so config values can fill the rest

    def common(p: argparse.ArgumentParser, formats: bool = True) -> None:
        p.add_argument("--config", default=S, metavar="PATH", help="JSON file with option values; flags win")
        p.add_argument("--out", default=S, metavar="PATH", help="write output to PATH instead of stdout")
        if formats:
            p.add_argument("--format", default=S, choices=FORMATS)

    p = sub.add_parser("solve", help="solve one instance")
    p.add_argument("--method", default=S, choices=METHOD_CHOICES)
    p.add_argument("--ste", default=S, type=float, help="Stefan number")
    p.add_argument("--bi", default=S, type=float, help="Biot number")
    p.add_argument("--limit", default=S, action="store_true", help="Dirichlet limit Bi -> inf")
    p.add_argument("--preset", default=S, choices=sorted(PRESETS), help="take Ste and Bi from a physical preset")
    common(p)

    p = sub.add_parser("table", help="absolute temperature errors of P1..P4 at one instant")
    p.add_argument("--preset", default=S, help=f"one of {', '.join([*analysis.TABLE_PRESETS, *PRESETS])}")
    p.add_argument("--t", default=S, type=float, help="probe time in seconds")
    p.add_argument("--positions", default=S, type=_positions, help="comma-separated x values in metres")
    common(p)

    p = sub.add_parser("sweep", help="relative free-boundary errors against Bi")
    p.add_argument("--ste", default=S, type=float)
    p.add_argument("--bi-min", dest="bi_min", default=S, type=float)
    p.add_argument("--bi-max", dest="bi_max", default=S, type=float)
    p.add_argument("--points", default=S, type=int)
    p.add_argument("--log", default=S, action="store_true", help="log-spaced grid")
    common(p)

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("--quick", default=S, action="store_true", help="reduced grid")
    common(p, formats=False)
    return parser


def _load_config(path: str) -> dict[str, Any]:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"config: cannot read {path}: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("config: top level must be a JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}


def make_config(args: argparse.Namespace) -> RunConfig:
    given = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    merged = dict(DEFAULTS[args.command])
    if hasattr(args, "config"):
        file_opts = _load_config(args.config)
        unknown = set(file_opts) - set(merged)
        if unknown:
            raise UsageError(f"config: unknown option(s) for {args.command}: {', '.join(sorted(unknown))}")
        merged.update(file_opts)
    merged.update(given)
    return RunConfig(args.command, merged)


# -- output ----------------------------------------------------------------


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[str]], trailer: Sequence[str] = ()) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    buf.writelines(line + "\n" for line in trailer)
    return buf.getvalue()


def _json_text(doc: Any) -> str:
    return json.dumps(doc, indent=2) + "\n"


# -- commands --------------------------------------------------------------


def cmd_solve(config: RunConfig) -> int:
    method_name, ste, bi, limit, preset_name = (config[k] for k in ("method", "ste", "bi", "limit", "preset"))
    if method_name is None:
        raise UsageError("method: required (one of " + ", ".join(METHOD_CHOICES) + ")")
    if preset_name is not None:
        if ste is not None or bi is not None:
            raise UsageError("preset: cannot be combined with --ste/--bi")
        physical = PRESETS.get(preset_name)
        if physical is None:
            raise ValidationError("preset", f"unknown preset {preset_name!r}")
        dims, _ = dimensionless_from_physical(physical)
        ste, bi = dims.ste, None if limit else dims.bi
    if ste is None:
        raise UsageError("ste: required")
    if limit and bi is not None:
        raise UsageError("bi: --bi and --limit are mutually exclusive")
    if not limit and bi is None:
        raise UsageError("bi: required unless --limit is given")

    method = MethodId.parse(method_name, limit=bool(limit))
    sol = analysis.solve_method(method, float(ste), None if bi is None else float(bi))
    if method.scheme is Scheme.EXACT:
        residual = exact.equation_residual(sol)
    else:
        residual = hbim.polynomial_residual(sol)

    doc = {
        "method": method.label,
        "ste": float(_sig(sol.ste)),
        "bi": sol.bi_label if sol.bi is None else float(_sig(sol.bi)),
        "xi": float(_sig(sol.xi)),
        "A": float(_sig(sol.coeff_a)),
        "B": float(_sig(sol.coeff_b)),
        "polynomial_residual": float(_sig(residual)),
    }
    if config["format"] == "csv":
        keys = list(doc)
        text = _csv_text(keys, [[str(doc[k]) if isinstance(doc[k], str) else _sig(doc[k]) for k in keys]])
    else:
        text = _json_text(doc)
    _emit(text, config["out"])
    return EXIT_OK


def _table_inputs(config: RunConfig) -> tuple[PhysicalParams, float, tuple[float, ...]]:
    name, t, positions, physical = config["preset"], config["t"], config["positions"], config["physical"]
    if name in analysis.TABLE_PRESETS:
        tp = analysis.table_preset(name)
        return tp.physical, tp.t_probe if t is None else float(t), tp.positions if positions is None else tuple(positions)
    if name is not None and physical is not None:
        raise UsageError("preset: cannot be combined with explicit physical parameters")
    if name is not None:
        if name not in PRESETS:
            choices = ", ".join([*analysis.TABLE_PRESETS, *PRESETS])
            raise ValidationError("preset", f"unknown preset {name!r} (choose from {choices})")
        params = PRESETS[name]
    elif physical is not None:
        if not isinstance(physical, dict):
            raise UsageError("physical: must be a JSON object of PhysicalParams fields")
        expected = {f.name for f in fields(PhysicalParams)}
        if set(physical) != expected:
            raise UsageError(f"physical: needs exactly the keys {', '.join(sorted(expected))}")
        params = PhysicalParams(**physical)
    else:
        raise UsageError("preset: give a table preset, a physical preset, or physical parameters in --config")
    if t is None or positions is None:
        raise UsageError("t: --t and --positions are required without a table preset")
    return params, float(t), tuple(float(x) for x in positions)


def cmd_table(config: RunConfig) -> int:
    params, t, positions = _table_inputs(config)
    table = analysis.temperature_error_table(t, positions, params)
    labels = [m.label for m in analysis.APPROX_METHODS]
    header = ["x"] + [f"E_abs_T{label[1:]}" for label in labels]
    rows = [[f"{x:.6f}"] + [f"{v:.6f}" for v in values] for x, values in table.rows()]
    if config["format"] == "json":
        doc = {"t": t, "rows": [{h: float(v) for h, v in zip(header, row)} for row in rows]}
        text = _json_text(doc)
    else:
        text = _csv_text(header, rows)
    _emit(text, config["out"])
    return EXIT_OK


def _sweep_grid(config: RunConfig) -> tuple[float, ...]:
    bi_min, bi_max, points, log = (config[k] for k in ("bi_min", "bi_max", "points", "log"))
    if bi_min is None and bi_max is None and points is None and not log:
        return analysis.DEFAULT_BI_GRID
    bi_min = 0.1 if bi_min is None else float(bi_min)
    bi_max = 1e3 if bi_max is None else float(bi_max)
    points = 60 if points is None else points
    if not isinstance(points, int) or points < 2:
        raise ValidationError("points", f"must be an integer >= 2, got {points!r}")
    if not 0 < bi_min < bi_max:
        raise ValidationError("bi_min", f"need 0 < bi_min < bi_max, got {bi_min!r}, {bi_max!r}")
    if log:
        grid = np.logspace(np.log10(bi_min), np.log10(bi_max), points)
    else:
        grid = np.linspace(bi_min, bi_max, points)
    # pin the ends so the grid is exactly what was asked for
    grid[0], grid[-1] = bi_min, bi_max
    return tuple(grid.tolist())


def cmd_sweep(config: RunConfig) -> int:
    if config["ste"] is None:
        raise UsageError("ste: required")
    ste = float(config["ste"])
    grid = _sweep_grid(config)
    series = [analysis.bi_sweep(m, ste, grid) for m in analysis.APPROX_METHODS]
    header = ["bi"] + [f"e_rel_{m.scheme.value}" for m in analysis.APPROX_METHODS]
    rows = [[_sig(bi)] + [_sig(s.e_rel_values[j]) for s in series] for j, bi in enumerate(grid)]
    limits = [_sig(s.e_rel_limit) for s in series]
    if config["format"] == "json":
        doc = {
            "ste": float(_sig(ste)),
            "rows": [{h: float(v) for h, v in zip(header, row)} for row in rows],
            "limit": {h: float(v) for h, v in zip(header[1:], limits)},
        }
        text = _json_text(doc)
    else:
        text = _csv_text(header, rows, [f"# limit: {','.join(limits)}"])
    _emit(text, config["out"])
    return EXIT_OK


def cmd_verify(config: RunConfig) -> int:
    report = verify.run_quick() if config["quick"] else verify.run()
    _emit("\n".join(report.lines()) + "\n", config["out"])
    return EXIT_OK if report.passed else EXIT_FAILURE


COMMANDS = {"solve": cmd_solve, "table": cmd_table, "sweep": cmd_sweep, "verify": cmd_verify}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on bad flags
    try:
        config = make_config(args)
        return COMMANDS[args.command](config)
    except (UsageError, ValidationError, DomainError) as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StefanError as exc:
        print(f"{parser.prog} {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
