"""Economy-wide aggregates of entity-level shocks.

Occupation shocks are weighted by employment shares (jobs) or wage-bill
shares (wages); industry shocks by value-added shares (GDP).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import stats

from .engine import EmploymentMatrix, ShockVector
from .errors import AxisMisalignment, DegenerateInput, MissingWages
from .taxonomy import ClassCode

MEASURES = ("employment", "wages", "value_added")
SHOCKS = ("supply", "demand", "total", "total_health")


def _vector(values, n: int, name: str, fill=np.nan) -> np.ndarray:
    if values is None:
        return np.full(n, fill)
    arr = np.asarray(values, dtype=float)
    if arr.shape != (n,):
        raise ValueError(f"{name}: expected {n} values, got {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class WageTable:
    """Per-occupation employment and wages; missing wages are NaN."""

    occupations: tuple[ClassCode, ...]
    employment: np.ndarray
    mean_wage: np.ndarray | None = None
    median_wage: np.ndarray | None = None
    exposure: np.ndarray | None = None

    def __post_init__(self):
        n = len(self.occupations)
        employment = _vector(self.employment, n, "employment")
        if (employment < 0).any() or np.isnan(employment).any():
            raise ValueError("employment must be nonnegative")
        object.__setattr__(self, "employment", employment)
        for name in ("mean_wage", "median_wage", "exposure"):
            arr = _vector(getattr(self, name), n, name)
            object.__setattr__(self, name, arr)
        for name in ("mean_wage", "median_wage"):
            arr = getattr(self, name)
            if (arr[~np.isnan(arr)] <= 0).any():
                raise ValueError(f"{name} must be positive where present")

    @property
    def has_wage(self) -> np.ndarray:
        return ~np.isnan(self.mean_wage)

    @property
    def employment_shares(self) -> np.ndarray:
        total = self.employment.sum()
        if total <= 0:
            raise ValueError("total employment must be positive")
        return self.employment / total

    @property
    def wage_bill(self) -> np.ndarray:
        return np.where(self.has_wage, self.employment * np.nan_to_num(self.mean_wage), 0.0)

    @property
    def wage_bill_shares(self) -> np.ndarray:
        bill = self.wage_bill
        if bill.sum() <= 0:
            raise MissingWages("no occupation has both employment and a mean wage")
        return bill / bill.sum()


@dataclass(frozen=True, eq=False)
class ValueAddedTable:
    industries: tuple[ClassCode, ...]
    value_added: np.ndarray
    gross_output: np.ndarray | None = None

    def __post_init__(self):
        n = len(self.industries)
        va = _vector(self.value_added, n, "value_added")
        if np.isnan(va).any() or (va < 0).any():
            raise ValueError("value added must be nonnegative")
        if not va.sum() > 0:
            raise ValueError("GDP (sum of value added) must be positive")
        object.__setattr__(self, "value_added", va)
        object.__setattr__(self, "gross_output", _vector(self.gross_output, n, "gross_output"))

    @property
    def shares(self) -> np.ndarray:
        return self.value_added / self.value_added.sum()


def _aligned(shock: ShockVector, entities: Sequence[ClassCode]):
    if tuple(shock.entities) != tuple(entities):
        raise AxisMisalignment("shock entities do not match the weight table")


def aggregate_employment(shock: ShockVector, wages: WageTable) -> float:
    _aligned(shock, wages.occupations)
    return float(shock.values @ wages.employment_shares)


def aggregate_wages(shock: ShockVector, wages: WageTable) -> float:
    """Wage-bill-weighted shock; occupations without a mean wage carry no weight."""
    _aligned(shock, wages.occupations)
    return float(shock.values @ wages.wage_bill_shares)


def aggregate_value_added(shock: ShockVector, va: ValueAddedTable) -> float:
    _aligned(shock, va.industries)
    return float(shock.values @ va.shares)


@dataclass(frozen=True)
class Quartile:
    quartile: int
    occupations: int
    employment: float
    employment_share: float
    employment_shock: float
    wage_bill_share: float
    lost_wage_share: float


def quartile_of(midpoint: float) -> int:
    """Quartile (1-4) whose cumulative-employment interval (q-1)/4 < m <= q/4 holds ``midpoint``."""
    return min(4, max(1, math.ceil(4 * midpoint)))


def quartile_breakdown(shock: ShockVector, wages: WageTable) -> list[Quartile]:
    """Employment shock and share of lost wages by mean-wage quartile.

    Occupations are ranked by mean wage and assigned whole to the quartile
    holding the midpoint of their cumulative-employment interval.
    Occupations without a mean wage are left out.
    """
    _aligned(shock, wages.occupations)
    covered = np.flatnonzero(wages.has_wage)
    if covered.size == 0:
        raise MissingWages("no occupation has a mean wage")
    emp = wages.employment[covered]
    total = emp.sum()
    if total <= 0:
        raise MissingWages("wage-covered occupations have no employment")
    order = np.argsort(wages.mean_wage[covered], kind="stable")
    cum = 0.0
    assign = np.empty(covered.size, dtype=int)
    for pos in order:
        assign[pos] = quartile_of((cum + emp[pos] / 2.0) / total)
        cum += emp[pos]

    s = shock.values[covered]
    bill = emp * wages.mean_wage[covered]
    lost_total = float(bill @ s)
    out = []
    for q in range(1, 5):
        mask = assign == q
        e_q = float(emp[mask].sum())
        out.append(Quartile(
            quartile=q,
            occupations=int(mask.sum()),
            employment=e_q,
            employment_share=e_q / total,
            employment_shock=float(emp[mask] @ s[mask]) / e_q if e_q > 0 else math.nan,
            wage_bill_share=float(bill[mask].sum() / bill.sum()),
            lost_wage_share=float(bill[mask] @ s[mask]) / lost_total if lost_total != 0 else math.nan,
        ))
    return out


@dataclass(frozen=True)
class Venn:
    non_essential: float
    cannot_remote: float
    intersection: float
    essential_and_remote: float

    @property
    def parts(self) -> dict[str, float]:
        """The four disjoint cells plus whatever is left over."""
        only_ne = self.non_essential - self.intersection
        only_cr = self.cannot_remote - self.intersection
        rest = 1.0 - self.intersection - self.essential_and_remote - only_ne - only_cr
        return {
            "intersection": self.intersection,
            "essential_and_remote": self.essential_and_remote,
            "non_essential_only": only_ne,
            "cannot_remote_only": only_cr,
            "remainder": rest,
        }


def venn_decomposition(M: EmploymentMatrix, e: ShockVector, y: ShockVector) -> Venn:
    """Split employment by (non-)essential industry and (non-)remotable occupation."""
    if tuple(e.entities) != tuple(M.industries) or tuple(y.entities) != tuple(M.occupations):
        raise AxisMisalignment("venn inputs are not aligned with the employment matrix")
    P = M.counts / M.total
    not_e = 1.0 - e.values
    not_y = 1.0 - y.values
    return Venn(
        non_essential=float(not_e @ P.sum(axis=1)),
        cannot_remote=float(P.sum(axis=0) @ not_y),
        intersection=float(not_e @ P @ not_y),
        essential_and_remote=float(e.values @ P @ y.values),
    )


def pearson(xs, ys) -> tuple[float, float]:
    """Pearson correlation and its two-sided Student-t p-value."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DegenerateInput("pearson needs two 1-d vectors of equal length")
    n = x.size
    if n < 3:
        raise DegenerateInput(f"pearson needs at least 3 points, got {n}")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx, syy = dx @ dx, dy @ dy
    if sxx == 0 or syy == 0:
        raise DegenerateInput("pearson is undefined for a constant vector")
    rho = float(np.clip(dx @ dy / math.sqrt(sxx * syy), -1.0, 1.0))
    if abs(rho) == 1.0:
        return rho, 0.0
    t = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
    p = float(2.0 * stats.t.sf(abs(t), n - 2))
    return rho, p


@dataclass
class AggregateReport:
    """Twelve aggregate cells plus distributional breakdowns.

    ``cells[shock][measure]`` holds the aggregate for shock in SHOCKS and
    measure in MEASURES.
    """

    cells: dict[str, dict[str, float]]
    quartiles: list[Quartile]
    venn: Venn
    health_growth: bool = False
    correlations: dict[str, tuple[float, float] | None] = field(default_factory=dict)

    @property
    def headline(self) -> dict[str, float]:
        key = "total_health" if self.health_growth else "total"
        return dict(self.cells[key])

    @property
    def wage_loss(self) -> float:
        return self.headline["wages"]


def build_report(
    occ: dict[str, ShockVector],
    ind: dict[str, ShockVector],
    wages: WageTable,
    va: ValueAddedTable,
    M: EmploymentMatrix,
    e: ShockVector,
    y: ShockVector,
    health_growth: bool = False,
) -> AggregateReport:
    """Aggregate ``occ`` and ``ind`` shocks, each keyed by the names in SHOCKS."""
    cells = {}
    for key in SHOCKS:
        cells[key] = {
            "employment": aggregate_employment(occ[key], wages),
            "wages": aggregate_wages(occ[key], wages),
            "value_added": aggregate_value_added(ind[key], va),
        }
    labor = occ["total_health" if health_growth else "total"]
    return AggregateReport(
        cells=cells,
        quartiles=quartile_breakdown(labor, wages),
        venn=venn_decomposition(M, e, y),
        health_growth=health_growth,
    )
