"""Run the production engine on a synthetic economy and diff it against the oracle."""

from __future__ import annotations

import math

import numpy as np

from .. import engine
from ..aggregation import ValueAddedTable, WageTable, build_report
from ..taxonomy import Concordance
from .synthetic import SyntheticEconomy


def engine_objects(econ: SyntheticEconomy) -> dict:
    """The economy as the engine's domain objects."""
    S = Concordance(econ.industries, econ.fine, econ.links)
    M = engine.EmploymentMatrix(econ.industries, econ.occupations, econ.counts)
    T = engine.ActivityMap(econ.occupations, econ.activities, econ.activity_links)
    v = engine.rate_consensus(econ.ratings, 3, econ.activities)
    wages = WageTable(econ.occupations, M.occupation_totals, econ.mean_wage, econ.median_wage, econ.exposure)
    va = ValueAddedTable(econ.industries, econ.value_added, econ.gross_output)
    return {"S": S, "M": M, "T": T, "v": v, "wages": wages, "va": va}


def engine_outputs(econ: SyntheticEconomy) -> dict:
    """Same layout as ``oracle_shocks`` but computed by ``shockgrid.engine``."""
    o = engine_objects(econ)
    S, M, T, v = o["S"], o["M"], o["T"], o["v"]
    e = engine.essential_score_industries(S, econ.u)
    y = engine.rli_occupations(T, v)
    r = engine.rli_industries(M, T, v)
    x = engine.essential_score_occupations(M, e)
    iss = engine.supply_shock_industries(e, r)
    oss = engine.supply_shock_occupations(x, y)
    ids = engine.demand_shock_industries(econ.sector_shocks, econ.industries)
    ods = engine.demand_shock_occupations(M, ids)
    ind = {"supply": iss, "demand": ids, "total": engine.total_shock(iss, ids),
           "total_health": engine.total_shock_health(iss, ids, "industry")}
    occ = {"supply": oss, "demand": ods, "total": engine.total_shock(oss, ods),
           "total_health": engine.total_shock_health(oss, ods, "occupation")}
    report = build_report(occ, ind, o["wages"], o["va"], M, e, y)
    return {
        "e": e.values.tolist(), "r": r.values.tolist(), "x": x.values.tolist(), "y": y.values.tolist(),
        "ISS": iss.values.tolist(), "OSS": oss.values.tolist(), "IDS": ids.values.tolist(),
        "ODS": ods.values.tolist(), "ITS": ind["total"].values.tolist(), "OTS": occ["total"].values.tolist(),
        "ITS_h": ind["total_health"].values.tolist(), "OTS_h": occ["total_health"].values.tolist(),
        "cells": report.cells,
        "quartiles": [
            {"quartile": q.quartile, "occupations": q.occupations, "employment": q.employment,
             "employment_share": q.employment_share, "employment_shock": q.employment_shock,
             "wage_bill_share": q.wage_bill_share, "lost_wage_share": q.lost_wage_share}
            for q in report.quartiles
        ],
        "venn": {
            "non_essential": report.venn.non_essential, "cannot_remote": report.venn.cannot_remote,
            "intersection": report.venn.intersection, "essential_and_remote": report.venn.essential_and_remote,
        },
    }


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}{k}.")
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}{i}.")
    else:
        yield prefix.rstrip("."), obj


def max_abs_diff(a: dict, b: dict) -> tuple[float, str]:
    """Largest absolute difference between two output trees, and where it occurs.

    NaN matches NaN; a key present on one side only counts as infinite.
    """
    fa, fb = dict(_flatten(a)), dict(_flatten(b))
    worst, where = 0.0, ""
    for key in sorted(set(fa) | set(fb)):
        if key not in fa or key not in fb:
            return math.inf, key
        p, q = fa[key], fb[key]
        if isinstance(p, (int, float, np.floating)) and isinstance(q, (int, float, np.floating)):
            if math.isnan(p) and math.isnan(q):
                continue
            d = abs(float(p) - float(q))
            if math.isnan(d):
                return math.inf, key
            if d > worst:
                worst, where = d, key
        elif p != q:
            return math.inf, key
    return worst, where
