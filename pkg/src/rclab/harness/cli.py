"""Command line entry point: ``rclab {run,sweep,dynamics,export}``.

Exit codes: 0 success, 1 configuration error, 2 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from ..errors import ConfigError, NumericError
from . import config as cfgmod
from .experiment import dynamics_probe, execute, pca_rows, run_sweep
from .export import export_results, read_bundle, write_pca

log = logging.getLogger("rclab")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rclab", description="Reservoir computing experiments.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, needs_config=True):
        sp.add_argument("--config", required=needs_config, help="INI or JSON config file")
        sp.add_argument("--seed", type=int, help="root seed (overrides the config)")
        sp.add_argument("--out", help="output directory (overrides output.dir)")
        sp.add_argument("--format", choices=("csv", "json"), action="append",
                        help="output format; repeat for several (default: config)")
        sp.add_argument("--repeats", type=int, help="runs per sweep point")
        sp.add_argument("--set", dest="overrides", action="append", default=[],
                        metavar="KEY=VALUE", help="override a config entry, e.g. reservoir.w=1")
        sp.add_argument("--jobs", type=int, help="parallel worker processes")
        sp.add_argument("-v", "--verbose", action="store_true")

    common(sub.add_parser("run", help="single experiment"))
    common(sub.add_parser("sweep", help="parameter sweep"))
    common(sub.add_parser("dynamics", help="free-run dynamics probe"))
    ex = sub.add_parser("export", help="re-serialize a JSON result bundle")
    ex.add_argument("--bundle", required=True, help="results.json written by another command")
    ex.add_argument("--out", required=True)
    ex.add_argument("--format", choices=("csv", "json"), action="append")
    ex.add_argument("-v", "--verbose", action="store_true")
    return p


def _load(args) -> cfgmod.ExperimentConfig:
    overrides = list(args.overrides)
    if args.seed is not None:
        overrides.append(f"seed={args.seed}")
    if args.out is not None:
        overrides.append(f"output.dir={json.dumps(args.out)}")
    if args.repeats is not None:
        overrides.append(f"sweep.repeats={args.repeats}")
    if args.jobs is not None:
        overrides.append(f"jobs={args.jobs}")
    if args.format:
        overrides.append(f"output.formats={json.dumps(args.format)}")
    return cfgmod.load_config(args.config, overrides)


def _cmd_run(config) -> None:
    out = Path(config.output.dir)
    outcome = execute(config)
    export_results([outcome.report], out, config.output.formats, config.to_dict(), "run")
    if config.output.pca:
        write_pca(pca_rows(outcome, config.output.pca_episodes), out / "pca.csv")
    r = outcome.report
    print(f"A = {r.accuracy:.4f}  baseline = {r.baseline:.4f}  F = {r.dynamics.F:.4g}  "
          f"C0 = {r.dynamics.C0:.4g}  C1 = {r.dynamics.C1:.4g}  alpha = {r.dynamics.alpha:.4f}")
    if r.uniqueness:
        print("unique states: train-only {train_only}, test-only {test_only}, "
              "shared {shared}".format(**r.uniqueness))


def _cmd_sweep(config, probe=False) -> None:
    reports = dynamics_probe(config) if probe else run_sweep(config)
    export_results(reports, config.output.dir, config.output.formats, config.to_dict(),
                   "dynamics" if probe else "sweep")
    for r in reports:
        if r.error:
            log.warning("value %r repeat %d failed: %s", r.value, r.repeat, r.error)
    print(f"{len(reports)} runs written to {config.output.dir}")


def _cmd_export(args) -> None:
    reports, data = read_bundle(args.bundle)
    formats = args.format or ["csv"]
    paths = export_results(reports, args.out, formats, data.get("config"),
                           data.get("command", "run"))
    for p in paths:
        print(p)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "export":
            _cmd_export(args)
            return EXIT_OK
        config = _load(args)
        if args.command == "run":
            _cmd_run(config)
        elif args.command == "sweep":
            _cmd_sweep(config)
        else:
            _cmd_sweep(config, probe=True)
    except (ConfigError, FileNotFoundError, KeyError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
