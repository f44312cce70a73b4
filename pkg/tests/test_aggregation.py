import itertools
import math

import numpy as np
import pytest
from scipy import integrate

from shockgrid import engine
from shockgrid.aggregation import (
    ValueAddedTable,
    WageTable,
    aggregate_employment,
    aggregate_value_added,
    aggregate_wages,
    pearson,
    quartile_breakdown,
    quartile_of,
    venn_decomposition,
)
from shockgrid.engine import ShockKind, ShockVector
from shockgrid.errors import AxisMisalignment, DegenerateInput, MissingWages
from shockgrid.testkit import permutation_pvalue

from conftest import soc

EXACT = dict(rel=0, abs=1e-12)


def occ_shock(toy, values, kind=ShockKind.TOTAL):
    return ShockVector(toy.occupations, kind, np.array(values, dtype=float))


class TestAggregates:
    def test_employment_toy(self, toy):
        np.testing.assert_allclose(toy.wages.employment_shares, [0.125, 0.25, 0.625])
        assert aggregate_employment(occ_shock(toy, [-0.25, 0, -0.3]), toy.wages) == pytest.approx(-0.21875, **EXACT)

    def test_wages_toy(self, toy):
        np.testing.assert_allclose(toy.wages.wage_bill, [400, 1200, 1000])
        # -(0.25*400 + 0.3*1000) / 2600
        assert aggregate_wages(occ_shock(toy, [-0.25, 0, -0.3]), toy.wages) == pytest.approx(-400 / 2600, **EXACT)
        assert aggregate_wages(occ_shock(toy, [-0.25, 0, -0.3]), toy.wages) == pytest.approx(-0.15385, abs=1e-5)

    def test_value_added_toy(self, toy):
        its = ShockVector(toy.industries, ShockKind.TOTAL, np.array([-0.4375, 0.0]))
        assert aggregate_value_added(its, toy.va) == pytest.approx(-0.175, **EXACT)

    def test_zero_shock(self, toy):
        assert aggregate_employment(occ_shock(toy, [0, 0, 0]), toy.wages) == 0.0

    @pytest.mark.parametrize("s", [-1.0, -0.37, 0.0])
    def test_uniform(self, toy, s):
        assert aggregate_wages(occ_shock(toy, [s] * 3), toy.wages) == pytest.approx(s, **EXACT)
        its = ShockVector(toy.industries, ShockKind.TOTAL, np.array([s, s]))
        assert aggregate_value_added(its, toy.va) == pytest.approx(s, **EXACT)

    def test_missing_wage_excluded(self, toy):
        wages = WageTable(toy.occupations, toy.wages.employment, np.array([40.0, np.nan, 20.0]))
        # bill (400, -, 1000): -(100 + 300) / 1400
        assert aggregate_wages(occ_shock(toy, [-0.25, -0.9, -0.3]), wages) == pytest.approx(-400 / 1400, **EXACT)

    def test_misaligned(self, toy):
        shock = ShockVector(tuple(reversed(toy.occupations)), ShockKind.TOTAL, np.zeros(3))
        with pytest.raises(AxisMisalignment):
            aggregate_employment(shock, toy.wages)


class TestQuartiles:
    def test_boundaries(self):
        assert [quartile_of(m) for m in (0.0, 0.1, 0.25, 0.26, 0.5, 0.75, 0.76, 1.0)] == [1, 1, 1, 2, 2, 3, 4, 4]

    def test_two_occupations(self):
        occs = (soc("111011"), soc("111021"))
        wages = WageTable(occs, np.array([50.0, 50.0]), np.array([30.0, 90.0]))
        qs = quartile_breakdown(ShockVector(occs, ShockKind.TOTAL, np.array([-0.4, 0.0])), wages)
        assert qs[0].employment_shock == pytest.approx(-0.4, **EXACT)
        assert qs[0].occupations == 1 and qs[2].occupations == 1
        assert qs[2].employment_shock == 0.0
        assert math.isnan(qs[1].employment_shock) and math.isnan(qs[3].employment_shock)

    def test_uniform(self):
        occs = tuple(soc(f"11{j:04d}") for j in range(8))
        rng = np.random.default_rng(3)
        wages = WageTable(occs, rng.uniform(1, 100, 8), rng.uniform(10, 90, 8))
        qs = quartile_breakdown(ShockVector(occs, ShockKind.TOTAL, np.full(8, -0.3)), wages)
        for q in qs:
            if q.occupations:
                assert q.employment_shock == pytest.approx(-0.3, **EXACT)
            assert q.lost_wage_share == pytest.approx(q.wage_bill_share, **EXACT)

    def test_toy(self, toy):
        # wages 20 (emp 50), 40 (emp 10), 60 (emp 20): midpoints 25/80, 55/80, 70/80
        qs = quartile_breakdown(occ_shock(toy, [-0.25, 0, -0.3]), toy.wages)
        assert [q.occupations for q in qs] == [0, 1, 1, 1]
        assert qs[1].employment_shock == pytest.approx(-0.3, **EXACT)
        assert qs[1].lost_wage_share == pytest.approx(0.75, **EXACT)
        assert qs[2].lost_wage_share == pytest.approx(0.25, **EXACT)

    def test_all_missing(self, toy):
        wages = WageTable(toy.occupations, toy.wages.employment, np.full(3, np.nan))
        with pytest.raises(MissingWages):
            quartile_breakdown(occ_shock(toy, [0, 0, 0]), wages)


class TestVenn:
    def test_toy(self, toy):
        e = ShockVector(toy.industries, ShockKind.ESSENTIAL_SCORE, np.array([0.5, 1.0]))
        y = ShockVector(toy.occupations, ShockKind.RLI, np.array([0.5, 1.0, 0.0]))
        venn = venn_decomposition(toy.M, e, y)
        assert venn.non_essential == pytest.approx(0.25, **EXACT)
        assert venn.cannot_remote == pytest.approx(0.6875, **EXACT)
        assert venn.intersection == pytest.approx(0.21875, **EXACT)
        # (10/80)(0.5)(0.5) + (20/80)(1)(1); see the ledger on the published 0.09375
        assert venn.essential_and_remote == pytest.approx(0.28125, **EXACT)

    def test_parts_sum_to_one(self, toy):
        e = ShockVector(toy.industries, ShockKind.ESSENTIAL_SCORE, np.array([0.5, 1.0]))
        y = ShockVector(toy.occupations, ShockKind.RLI, np.array([0.5, 1.0, 0.0]))
        parts = venn_decomposition(toy.M, e, y).parts
        assert sum(parts.values()) == pytest.approx(1.0, **EXACT)

    def test_all_essential(self, toy):
        e = ShockVector(toy.industries, ShockKind.ESSENTIAL_SCORE, np.ones(2))
        y = ShockVector(toy.occupations, ShockKind.RLI, np.array([0.5, 1.0, 0.0]))
        venn = venn_decomposition(toy.M, e, y)
        assert venn.intersection == 0.0 and venn.non_essential == 0.0


def t_pvalue_by_quadrature(rho, n):
    df = n - 2
    t = abs(rho) * math.sqrt(df / (1 - rho * rho))
    c = math.gamma((df + 1) / 2) / (math.sqrt(df * math.pi) * math.gamma(df / 2))
    density = lambda s: c * (1 + s * s / df) ** (-(df + 1) / 2)
    tail, _ = integrate.quad(density, t, np.inf)
    return 2 * tail


class TestPearson:
    def test_small_example(self):
        rho, p = pearson([1, 2, 3, 4], [2, 1, 4, 3])
        assert rho == pytest.approx(0.6, abs=1e-12)
        assert p == pytest.approx(0.4, abs=1e-9)
        assert p == pytest.approx(t_pvalue_by_quadrature(0.6, 4), abs=1e-9)

    def test_permutation_agrees_roughly(self):
        # exact permutation distribution: 10 of 24 orderings reach |rho| >= 0.6
        assert permutation_pvalue([1, 2, 3, 4], [2, 1, 4, 3]) == pytest.approx(10 / 24)

    def test_identical(self):
        xs = list(range(10))
        rho, p = pearson(xs, xs)
        assert rho == 1.0 and p == 0.0

    @pytest.mark.parametrize("xs,ys", [([1, 1, 1], [1, 2, 3]), ([1, 2], [2, 1]), ([1, 2, 3], [1, 2])])
    def test_degenerate(self, xs, ys):
        with pytest.raises(DegenerateInput):
            pearson(xs, ys)

    @pytest.mark.parametrize("seed", range(5))
    def test_against_quadrature(self, seed):
        rng = np.random.default_rng(seed)
        xs, ys = rng.normal(size=12), rng.normal(size=12)
        rho, p = pearson(xs, ys)
        assert rho == pytest.approx(np.corrcoef(xs, ys)[0, 1], abs=1e-12)
        assert p == pytest.approx(t_pvalue_by_quadrature(rho, 12), abs=1e-8)
