"""Command line entry point: ``shockgrid validate|run|sweep --config PATH``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import pipeline
from .errors import IntegrityError, MalformedCode, SchemaError, ShockgridError

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 2, 3

logger = logging.getLogger("shockgrid")


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shockgrid", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("validate", "check inputs and print diagnostics"),
        ("run", "compute shocks and write reports"),
        ("sweep", "run a grid of scenarios / thresholds and write sweep.csv"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, type=Path)
        p.add_argument("--scenario", action="append",
                       help="bundled scenario name or CSV path (repeatable for sweep)")
        p.add_argument("--health-growth", action="store_true", default=None)
        p.add_argument("--consensus-threshold", type=int, action="append")
        p.add_argument("--min-activities", type=int)
        p.add_argument("--output-dir")
        p.add_argument("--impute-missing-wages", action="store_true", default=None)
    return parser


def _config(args) -> pipeline.RunConfig:
    overrides = {
        "health_growth": args.health_growth,
        "min_activities": args.min_activities,
        "output_dir": args.output_dir,
        "impute_missing_wages": args.impute_missing_wages,
    }
    if args.command == "sweep":
        if args.scenario:
            overrides["sweep_scenarios"] = ",".join(
                s if s in pipeline.scenarios.BUNDLED else str(Path(s).resolve()) for s in args.scenario
            )
        if args.consensus_threshold:
            overrides["sweep_thresholds"] = ",".join(str(t) for t in args.consensus_threshold)
    else:
        if args.scenario:
            overrides["scenario"] = args.scenario[-1]
        if args.consensus_threshold:
            overrides["consensus_threshold"] = args.consensus_threshold[-1]
    return pipeline.load_config(args.config, **overrides)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        config = _config(args)
        if args.command != "sweep":
            model = pipeline.prepare(config)
    except (SchemaError, IntegrityError, MalformedCode) as exc:
        print(f"validation failed: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ShockgridError as exc:
        print(f"validation failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID

    try:
        if args.command == "validate":
            print(json.dumps(model.diagnostics.as_dict(), indent=2, sort_keys=True))
        elif args.command == "run":
            results = pipeline.compute(model)
            files = pipeline.render(results)
            pipeline.write_outputs(files, config.output_dir, {"run": pipeline.run_block(config)})
            print(json.dumps(pipeline.report_dict(results.report)["headline"], sort_keys=True))
        else:
            rows = pipeline.sweep(pipeline.expand_sweep(config))
            pipeline.write_outputs({"sweep.csv": pipeline.sweep_csv(rows)}, config.output_dir)
            print(pipeline.sweep_csv(rows), end="")
            if any(row["error"] for row in rows):
                return EXIT_RUNTIME
    except (ShockgridError, OSError) as exc:
        print(f"run failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
