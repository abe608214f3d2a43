"""``entgrowth`` command-line tool: ``simulate``, ``bounds``, ``scaling`` and ``verify``.

Exit status is 0 on success, 1 when a checked property fails and 2 for usage
or configuration errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import experiments
from .config import DEFAULT_SEED, ConfigError, RunConfig, ScalingConfig, read_config_file
from .errors import CapacityError, DomainError, InvalidCutError, InvalidSizeError, UnsupportedModelError
from .verify import SUITES, format_report, run_suites

EXIT_OK, EXIT_PROPERTY, EXIT_USAGE = 0, 1, 2

_USAGE_ERRORS = (ConfigError, CapacityError, DomainError, InvalidCutError, InvalidSizeError,
                 UnsupportedModelError, OSError)


def _add_fields(parser, config_cls, skip=()):
    group = parser.add_argument_group("configuration overrides")
    for name in config_cls.field_kinds():
        if name in skip:
            continue
        group.add_argument("--" + name.replace("_", "-"), dest=name, default=None, metavar="VALUE")


def _overrides(args, config_cls):
    values = {k: getattr(args, k) for k in config_cls.field_kinds() if getattr(args, k, None) is not None}
    if args.out is not None:
        values["output_path"] = args.out
    if args.seed is not None:
        values["seed"] = args.seed
    return values


def _emit(text, path, stdout):
    if path:
        Path(path).write_bytes(text.encode("utf-8"))
    else:
        stdout.write(text)


def _emit_plot(args, csv_path, header, columns, **kw):
    if not args.plot:
        return
    if not csv_path:
        raise ConfigError("--plot needs --out so the script can reference the CSV")
    Path(args.plot).write_text(experiments.gnuplot_script(csv_path, columns, header, **kw), encoding="utf-8")


def cmd_simulate(args, stdout, stderr) -> int:
    config = RunConfig.load(args.config, _overrides(args, RunConfig))
    rows = experiments.simulate(config)
    header = experiments.SIMULATE_HEADER
    _emit(experiments.format_csv(header, rows), config.output_path, stdout)
    _emit_plot(args, config.output_path, header,
               ("purity", "bound_short", "bound_rank", "bound_long", "bound_combined"))
    purity = np.array([r[1] for r in rows])
    combined = np.array([r[7] for r in rows])
    if purity[0] > 1 - 1e-12 and np.any(purity < combined - 1e-9):
        bad = int(np.argmax(purity < combined - 1e-9))
        stderr.write(f"property failure: purity {purity[bad]:.12g} below combined bound "
                     f"{combined[bad]:.12g} at t = {rows[bad][0]:.12g}\n")
        return EXIT_PROPERTY
    return EXIT_OK


def cmd_bounds(args, stdout, stderr) -> int:
    values = _overrides(args, RunConfig)
    if values.get("model") == "coupled-ising":
        # only the geometry matters here
        values.setdefault("engine", "dense")
        values.setdefault("initial_state", "ghz-x")
    config = RunConfig.load(args.config, values)
    constants, rows = experiments.bound_curves(config)
    report = (f"mu = {constants.mu:.12f}\n"
              f"chi = {constants.chi:.12f}\n"
              f"t1 = {constants.t1:.12f}\n"
              f"l_max = {constants.l_max}\n")
    header = experiments.BOUNDS_HEADER
    stdout.write(report)
    _emit(experiments.format_csv(header, rows), config.output_path, stdout)
    _emit_plot(args, config.output_path, header, header[1:])
    return EXIT_OK


def cmd_scaling(args, stdout, stderr) -> int:
    config = ScalingConfig.load(args.config, _overrides(args, ScalingConfig))
    result = experiments.scaling_sweep(config)
    header = experiments.SCALING_HEADER
    _emit(experiments.format_csv(header, result.rows), config.output_path, stdout)
    _emit_plot(args, config.output_path, header, header[1:], logscale=True)
    stdout.write(f"slope = {result.slope:.12g}\n")
    return EXIT_OK


def _oracle_runs(specs):
    runs = []
    for spec in specs:
        model, _, n = spec.partition(":")
        if model not in ("xx", "xxz") or not n.isdigit():
            raise ConfigError(f"oracle run must look like xx:14 or xxz:12, got {spec!r}")
        runs.append((model, int(n)))
    return runs


def cmd_verify(args, stdout, stderr) -> int:
    values = read_config_file(args.config) if args.config else {}
    unknown = set(values) - {"suite", "seed", "oracle_runs"}
    if unknown:
        raise ConfigError(f"unknown verify key(s): {', '.join(sorted(unknown))}")
    suites = args.suite or [s.strip() for s in values.get("suite", "all").split(",")]
    if "all" in suites:
        suites = list(SUITES)
    for s in suites:
        if s not in SUITES:
            raise ConfigError(f"unknown suite {s!r}; choose from {', '.join(SUITES)} or all")
    seed = args.seed if args.seed is not None else int(values.get("seed", DEFAULT_SEED))
    specs = args.oracle_run or [s.strip() for s in values.get("oracle_runs", "").split(",") if s.strip()]
    results = run_suites(suites, seed=seed, oracle_runs=_oracle_runs(specs))
    _emit(format_report(results), args.out, stdout)
    return EXIT_OK if all(r.passed for r in results) else EXIT_PROPERTY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="entgrowth", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", metavar="PATH", help="key = value configuration file")
        p.add_argument("--out", metavar="PATH", help="output file (default: standard output)")
        p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("simulate", help="purity trace with bound columns as CSV")
    common(p)
    p.add_argument("--plot", metavar="PATH", help="also write a gnuplot script")
    _add_fields(p, RunConfig, skip=("output_path", "seed"))
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("bounds", help="print mu, chi, t1 and emit the bound curves")
    common(p)
    p.add_argument("--plot", metavar="PATH", help="also write a gnuplot script")
    _add_fields(p, RunConfig, skip=("output_path", "seed"))
    p.set_defaults(handler=cmd_bounds)

    p = sub.add_parser("scaling", help="short-time 1 - purity against the number of rungs")
    common(p)
    p.add_argument("--plot", metavar="PATH", help="also write a gnuplot script")
    _add_fields(p, ScalingConfig, skip=("output_path", "seed"))
    p.set_defaults(handler=cmd_scaling)

    p = sub.add_parser("verify", help="run property suites")
    common(p)
    p.add_argument("suite", nargs="*", help=f"{', '.join(SUITES)} or all (default all)")
    p.add_argument("--oracle-run", action="append", default=[], metavar="MODEL:N",
                   help="TEBD-vs-dense comparison for the oracle suite, e.g. xx:14")
    p.set_defaults(handler=cmd_verify)
    return parser


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.handler(args, stdout, stderr)
    except _USAGE_ERRORS as exc:
        stderr.write(f"entgrowth {args.command}: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
