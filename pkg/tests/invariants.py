"""Invariant checks shared by the property tests and the acceptance suite."""

import math

import numpy as np

from shockgrid import engine
from shockgrid.aggregation import (
    aggregate_employment,
    aggregate_value_added,
    aggregate_wages,
    quartile_breakdown,
    venn_decomposition,
)
from shockgrid.engine import ShockKind, ShockVector
from shockgrid.taxonomy import column_normalize, row_normalize
from shockgrid.testkit import engine_objects

TOL = 1e-12


def shocks(econ, counts=None):
    o = engine_objects(econ)
    M = o["M"] if counts is None else engine.EmploymentMatrix(econ.industries, econ.occupations, counts)
    e = engine.essential_score_industries(o["S"], econ.u)
    y = engine.rli_occupations(o["T"], o["v"])
    r = engine.rli_industries(M, o["T"], o["v"])
    x = engine.essential_score_occupations(M, e)
    ids = engine.demand_shock_industries(econ.sector_shocks, econ.industries)
    return dict(o, M=M, e=e, y=y, r=r, x=x,
                iss=engine.supply_shock_industries(e, r), oss=engine.supply_shock_occupations(x, y),
                ids=ids, ods=engine.demand_shock_occupations(M, ids))


def check_invariants(econ, scale: float, a: float, b: float) -> None:
    s = shocks(econ)
    e, y, r, x = s["e"].values, s["y"].values, s["r"].values, s["x"].values
    iss, oss, ids, ods = s["iss"], s["oss"], s["ids"], s["ods"]

    # score and supply bounds
    for v in (e, y, r, x):
        assert ((v >= -TOL) & (v <= 1 + TOL)).all()
    for v in (iss.values, oss.values):
        assert ((v >= -1 - TOL) & (v <= TOL)).all()

    # essential immunity
    assert (iss.values[e == 1.0] == 0).all()
    assert (oss.values[x == 1.0] == 0).all()

    # total shocks are dominated by both components; health variant dominates the plain total
    for sup, dem, level in ((iss, ids, "industry"), (oss, ods, "occupation")):
        tot = engine.total_shock(sup, dem).values
        assert (tot <= sup.values + TOL).all() and (tot <= dem.values + TOL).all()
        health = engine.total_shock_health(sup, dem, level).values
        assert (health >= tot - TOL).all()

    # normalization sums
    P, zero_rows = row_normalize(s["S"].matrix())
    sums = P.sum(axis=1)
    assert all(abs(sums[i] - (0.0 if i in zero_rows else 1.0)) <= TOL for i in range(len(sums)))
    Q, zero_cols = column_normalize(s["M"].counts)
    sums = Q.sum(axis=0)
    assert all(abs(sums[j] - (0.0 if j in zero_cols else 1.0)) <= TOL for j in range(len(sums)))

    # the employment-weighted supply shock is minus the Venn intersection
    wages = s["wages"]
    venn = venn_decomposition(s["M"], s["e"], s["y"])
    assert abs(aggregate_employment(oss, wages) + venn.intersection) <= 1e-12
    assert venn.intersection <= min(venn.non_essential, venn.cannot_remote) + TOL

    # scale invariance of employment normalization
    t = shocks(econ, s["M"].counts * scale)
    for key in ("r", "x", "ods"):
        assert np.allclose(t[key].values, s[key].values, rtol=0, atol=1e-12)

    # aggregation linearity and bounds
    tot = engine.total_shock(oss, ods)
    combo = a * oss.values + b * tot.values
    lhs = aggregate_employment(ShockVector(econ.occupations, ShockKind.TOTAL_HEALTH, np.clip(combo, -1, 1)), wages)
    if np.all(np.abs(combo) <= 1):
        rhs = a * aggregate_employment(oss, wages) + b * aggregate_employment(tot, wages)
        assert abs(lhs - rhs) <= 1e-12
    for agg in (aggregate_employment(tot, wages), aggregate_wages(tot, wages)):
        assert tot.values.min() - TOL <= agg <= tot.values.max() + TOL
    its = engine.total_shock(iss, ids)
    assert its.values.min() - TOL <= aggregate_value_added(its, s["va"]) <= its.values.max() + TOL

    # quartile shocks recombine to the aggregate over wage-covered occupations
    qs = quartile_breakdown(tot, wages)
    covered = wages.has_wage
    emp = wages.employment[covered]
    expected = float(emp @ tot.values[covered]) / emp.sum()
    got = sum(q.employment_share * q.employment_shock for q in qs if q.occupations and q.employment > 0)
    assert abs(got - expected) <= 1e-9
    assert abs(sum(q.employment_share for q in qs) - 1.0) <= 1e-12
    lost = [q.lost_wage_share for q in qs if not math.isnan(q.lost_wage_share)]
    if lost:
        assert abs(sum(lost) - 1.0) <= 1e-9
