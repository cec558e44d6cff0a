"""Command-line entry point.

Subcommands: conductivity, quality-factor, t1, flux-noise, t2star,
fdt-check, figure N and sweep.  Errors go to stderr as one JSON object
and the exit code is nonzero.
"""

import argparse
import json
import sys

from .config import ConfigError, load_config, parse_config
from .figures import (
    SUBCOMMAND_PRESETS,
    CurveError,
    run_fdt_check,
    run_figure,
    run_quantity,
    run_sweep,
    write_config_echo,
    write_table,
    write_tables,
)

EXIT_CONFIG = 2
EXIT_PHYSICS = 3


def _common(p):
    p.add_argument("--config", metavar="PATH", help="JSON config file")
    p.add_argument("--out", metavar="DIR", help="output directory (default: output.directory)")
    p.add_argument("--format", choices=("csv", "json"), help="output format (default: output.format)")
    p.add_argument("--preset", metavar="NAME", help="preset supplying omitted fields (fig2..fig6, nbtin)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for grid points")


def build_parser():
    parser = argparse.ArgumentParser(prog="qpnoise", description="Quasiparticle dissipation and noise in superconducting circuits.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMAND_PRESETS:
        _common(sub.add_parser(name, help=f"{name} over the configured grid"))
    _common(sub.add_parser("fdt-check", help="randomized fluctuation-dissipation checks"))
    fig = sub.add_parser("figure", help="reproduce a figure (one file per curve)")
    fig.add_argument("number", type=int, choices=(2, 3, 4, 5, 6))
    _common(fig)
    sw = sub.add_parser("sweep", help="resumable cartesian sweep of sweep.quantity")
    _common(sw)
    sw.add_argument("--fresh", action="store_true", help="ignore rows from a previous run")
    return parser


def _raw(path):
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc


def _settings(cfg, args):
    out = args.out or cfg.block("output").get("directory", "out")
    fmt = args.format or cfg.block("output").get("format", "csv")
    return out, fmt


def run(args):
    """Execute parsed arguments; returns the list of written paths."""
    if args.command == "figure":
        raw = _raw(args.config)
        cfg, tables = run_figure(args.number, raw)
        out, fmt = _settings(cfg, args)
        paths = write_tables(tables, out, fmt, bundle=f"fig{args.number}")
        return paths + [write_config_echo(cfg, out)]

    preset = args.preset
    if preset is None and args.command in SUBCOMMAND_PRESETS and args.config is None:
        preset = SUBCOMMAND_PRESETS[args.command]
    cfg = load_config(args.config, preset)
    out, fmt = _settings(cfg, args)

    if args.command == "fdt-check":
        table = run_fdt_check(cfg)
        summary = {k: v for k, v in table.metadata.items() if k.startswith("max_") or k == "seed"}
        print(json.dumps(summary, sort_keys=True))
        return [write_table(table, out, fmt), write_config_echo(cfg, out)]

    if "sweep" not in cfg.data:
        raise ConfigError("a sweep block (quantity, grid) is required", "sweep")
    if args.command == "sweep":
        paths = run_sweep(cfg, out, args.jobs, resume=not args.fresh, fmt=fmt)
        return paths + [write_config_echo(cfg, out)]

    data = dict(cfg.data)
    data["sweep"] = dict(data["sweep"], quantity=args.command)
    cfg = parse_config(data)
    table = run_quantity(cfg, args.command, args.jobs)
    return [write_table(table, out, fmt), write_config_echo(cfg, out)]


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        paths = run(args)
    except ConfigError as exc:
        err = {"error": "ConfigError", "message": str(exc), "key": exc.key}
        print(json.dumps(err, sort_keys=True), file=sys.stderr)
        return EXIT_CONFIG
    except CurveError as exc:
        err = {"error": type(exc.cause).__name__, "message": str(exc.cause), "curve": exc.curve}
        print(json.dumps(err, sort_keys=True), file=sys.stderr)
        return EXIT_PHYSICS
    except (ValueError, ArithmeticError, OSError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}, sort_keys=True), file=sys.stderr)
        return 1
    for p in paths:
        print(p)
    return 0


if __name__ == "__main__":
    sys.exit(main())
