"""``shockgrid-oracle``: reference outputs for a synthetic economy.

Tables follow the ``shockgrid run`` schemas (same columns, rows sorted by
code) so the two output directories can be diffed file by file.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..pipeline import csv_text, fmt, json_text, r6, write_outputs
from .oracle import oracle_shocks
from .synthetic import generate, write_inputs


def _dims(text: str) -> tuple[int, int, int, int]:
    parts = [int(p) for p in text.split(",")]
    if len(parts) != 4 or min(parts) < 1:
        raise argparse.ArgumentTypeError("dims must be four positive integers N,J,I,K")
    return tuple(parts)


def _table(codes, out, names, flags=None):
    header = ["code", *names, *(f"{n}_pct" for n in names)]
    if flags is not None:
        header.append("flags")
    rows = []
    for i in sorted(range(len(codes)), key=lambda i: codes[i].sort_key):
        row = [codes[i].digits, *(fmt(out[n][i]) for n in names), *(fmt(100 * out[n][i]) for n in names)]
        if flags is not None:
            row.append(flags[i])
        rows.append(row)
    return csv_text(header, rows)


def _industry_flags(econ) -> list[str]:
    linked = {n for n, _ in econ.links}
    flags = []
    for n in range(len(econ.industries)):
        f = []
        if not any(econ.counts[n][j] > 0 for j in range(len(econ.occupations))):
            f.append("no_matched_occupations")
        if n not in linked:
            f.append("no_linked_fine_codes")
        flags.append(";".join(f))
    return flags


def _quartile_csv(quartiles) -> str:
    header = [
        "quartile", "occupations", "employment", "employment_share", "employment_shock",
        "employment_shock_pct", "wage_bill_share", "lost_wage_share", "lost_wage_share_pct",
    ]
    rows = [
        [f"q{q['quartile']}", q["occupations"], fmt(q["employment"]), fmt(q["employment_share"]),
         fmt(q["employment_shock"]), fmt(100 * q["employment_shock"]), fmt(q["wage_bill_share"]),
         fmt(q["lost_wage_share"]), fmt(100 * q["lost_wage_share"])]
        for q in quartiles
    ]
    return csv_text(header, rows)


def render(econ, out) -> dict[str, str]:
    """Oracle results as output-file texts."""
    venn = {k: r6(v) for k, v in out["venn"].items()}
    return {
        "industry_shocks.csv": _table(econ.industries, out, ["e", "r", "ISS", "IDS", "ITS", "ITS_h"],
                                      _industry_flags(econ)),
        "occupation_shocks.csv": _table(econ.occupations, out, ["x", "y", "OSS", "ODS", "OTS", "OTS_h"]),
        "quartiles.csv": _quartile_csv(out["quartiles"]),
        "aggregates.json": json_text({
            "cells": {k: {m: r6(v) for m, v in cell.items()} for k, cell in out["cells"].items()},
            "headline": {m: r6(v) for m, v in out["cells"]["total"].items()},
            "health_growth": False,
            "quartiles": [
                {k: (r6(v) if isinstance(v, float) else v) for k, v in q.items() if k != "employment"}
                for q in out["quartiles"]
            ],
            "venn": venn,
            "synthetic": {"seed": econ.seed, "dims": list(econ.dims), "degenerate": econ.degenerate},
        }),
        "venn.json": json_text({"venn": venn}),
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="shockgrid-oracle", description=__doc__)
    parser.add_argument("--seed", type=int, required=True)
    parser.add_argument("--dims", type=_dims, default=(5, 8, 6, 12), help="N,J,I,K")
    parser.add_argument("--degenerate", action="store_true")
    parser.add_argument("--output-dir", type=Path, default=Path("oracle-out"))
    parser.add_argument("--write-inputs", type=Path, metavar="DIR",
                        help="also dump the economy as pipeline input files plus config.txt")
    args = parser.parse_args(argv)

    econ = generate(args.seed, args.dims, args.degenerate)
    write_outputs(render(econ, oracle_shocks(econ)), args.output_dir)
    if args.write_inputs:
        write_inputs(econ, args.write_inputs)
    print(f"wrote oracle outputs for seed {econ.seed} to {args.output_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
