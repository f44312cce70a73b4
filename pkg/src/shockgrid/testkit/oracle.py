"""Reference shocks by straight-line loops over plain Python floats.

Nothing here touches ``shockgrid.engine`` or ``shockgrid.aggregation``;
the point is to catch bugs the matrix code could share with itself.
"""

from __future__ import annotations

import itertools
import math
import random

from .synthetic import SyntheticEconomy


def _div(a, b):
    return a / b if b != 0 else 0.0


def oracle_shocks(econ: SyntheticEconomy) -> dict:
    """Every shock vector and aggregate of ``econ`` as lists and floats."""
    N, J, I, K = econ.dims
    S = [[0.0] * K for _ in range(N)]
    for n, k in econ.links:
        S[n][k] = 1.0
    M = [[float(econ.counts[n][j]) for j in range(J)] for n in range(N)]
    T = [[float(econ.activity_links[j][i]) for i in range(I)] for j in range(J)]
    u = [float(x) for x in econ.u]
    v = [float(x) for x in econ.remote]

    e = []
    for n in range(N):
        num = den = 0.0
        for k in range(K):
            num += S[n][k] * u[k]
            den += S[n][k]
        e.append(_div(num, den))

    y = []
    for j in range(J):
        num = den = 0.0
        for i in range(I):
            num += T[j][i] * v[i]
            den += T[j][i]
        y.append(_div(num, den))

    row_tot = [sum(M[n][j] for j in range(J)) for n in range(N)]
    col_tot = [sum(M[n][j] for n in range(N)) for j in range(J)]
    grand = sum(row_tot)

    r = []
    for n in range(N):
        acc = 0.0
        for j in range(J):
            acc += _div(M[n][j], row_tot[n]) * y[j]
        r.append(acc)

    x = []
    for j in range(J):
        acc = 0.0
        for n in range(N):
            acc += _div(M[n][j], col_tot[j]) * e[n]
        x.append(acc)

    iss = [-(1.0 - e[n]) * (1.0 - r[n]) for n in range(N)]
    oss = [-(1.0 - x[j]) * (1.0 - y[j]) for j in range(J)]

    ids = []
    for code in econ.industries:
        best, shock = -1, None
        for prefix, value in econ.sector_shocks.items():
            if code.digits[: len(prefix)] == prefix and len(prefix) > best:
                best, shock = len(prefix), value
        if shock is None:
            raise KeyError(code.digits)
        ids.append(shock)

    ods = []
    for j in range(J):
        acc = 0.0
        for n in range(N):
            acc += _div(M[n][j], col_tot[j]) * ids[n]
        ods.append(acc)

    its = [iss[n] if iss[n] < ids[n] else ids[n] for n in range(N)]
    ots = [oss[j] if oss[j] < ods[j] else ods[j] for j in range(J)]
    its_h = [ids[n] if ids[n] > 0 else its[n] for n in range(N)]
    ots_h = [ods[j] + oss[j] if ods[j] > 0 else ots[j] for j in range(J)]

    L = [col_tot[j] / grand for j in range(J)]
    wage_ok = [not math.isnan(float(econ.mean_wage[j])) for j in range(J)]
    bill = [col_tot[j] * float(econ.mean_wage[j]) if wage_ok[j] else 0.0 for j in range(J)]
    bill_tot = sum(bill)
    w = [b / bill_tot for b in bill]
    va_tot = sum(float(a) for a in econ.value_added)
    Y = [float(a) / va_tot for a in econ.value_added]

    def dot(a, b):
        total = 0.0
        for p, q in zip(a, b):
            total += p * q
        return total

    occ = {"supply": oss, "demand": ods, "total": ots, "total_health": ots_h}
    ind = {"supply": iss, "demand": ids, "total": its, "total_health": its_h}
    cells = {
        key: {"employment": dot(occ[key], L), "wages": dot(occ[key], w), "value_added": dot(ind[key], Y)}
        for key in occ
    }

    ne = cr = both = er = 0.0
    for n in range(N):
        for j in range(J):
            p = M[n][j] / grand
            ne += p * (1.0 - e[n])
            cr += p * (1.0 - y[j])
            both += p * (1.0 - e[n]) * (1.0 - y[j])
            er += p * e[n] * y[j]

    return {
        "e": e, "r": r, "x": x, "y": y,
        "ISS": iss, "OSS": oss, "IDS": ids, "ODS": ods,
        "ITS": its, "OTS": ots, "ITS_h": its_h, "OTS_h": ots_h,
        "cells": cells,
        "quartiles": oracle_quartiles(ots, col_tot, [float(m) for m in econ.mean_wage]),
        "venn": {"non_essential": ne, "cannot_remote": cr, "intersection": both, "essential_and_remote": er},
    }


def oracle_quartiles(shock, employment, mean_wage) -> list[dict]:
    """Quartile table by explicit bucketing; occupations with NaN wage are skipped."""
    items = [
        (mean_wage[j], j) for j in range(len(shock)) if not math.isnan(mean_wage[j])
    ]
    items.sort()
    total = sum(employment[j] for _, j in items)
    buckets = {1: [], 2: [], 3: [], 4: []}
    cum = 0.0
    for _, j in items:
        mid = (cum + employment[j] / 2.0) / total
        q = 1
        while q < 4 and mid > q / 4.0:
            q += 1
        buckets[q].append(j)
        cum += employment[j]
    lost_tot = sum(employment[j] * mean_wage[j] * shock[j] for _, j in items)
    bill_tot = sum(employment[j] * mean_wage[j] for _, j in items)
    out = []
    for q in (1, 2, 3, 4):
        js = buckets[q]
        emp = sum(employment[j] for j in js)
        out.append({
            "quartile": q,
            "occupations": len(js),
            "employment": emp,
            "employment_share": emp / total,
            "employment_shock": sum(employment[j] * shock[j] for j in js) / emp if emp > 0 else math.nan,
            "wage_bill_share": sum(employment[j] * mean_wage[j] for j in js) / bill_tot,
            "lost_wage_share": (sum(employment[j] * mean_wage[j] * shock[j] for j in js) / lost_tot
                                if lost_tot != 0 else math.nan),
        })
    return out


def permutation_pvalue(xs, ys, n_perm: int = 20000, seed: int = 0) -> float:
    """Two-sided permutation p-value for the Pearson correlation.

    Enumerates every permutation when ``len(xs) <= 8``; otherwise samples.
    """
    xs = [float(a) for a in xs]
    ys = [float(b) for b in ys]
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n

    def rho(seq):
        sxy = sum((a - mx) * (b - my) for a, b in zip(xs, seq))
        sxx = sum((a - mx) ** 2 for a in xs)
        syy = sum((b - my) ** 2 for b in seq)
        return sxy / math.sqrt(sxx * syy)

    observed = abs(rho(ys))
    if n <= 8:
        perms = list(itertools.permutations(ys))
    else:
        rng = random.Random(seed)
        perms = []
        for _ in range(n_perm):
            p = ys[:]
            rng.shuffle(p)
            perms.append(p)
    hits = sum(1 for p in perms if abs(rho(p)) >= observed - 1e-12)
    return hits / len(perms)
