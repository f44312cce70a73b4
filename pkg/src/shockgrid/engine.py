"""First-order supply, demand and total shocks for industries and occupations.

Four layers of nodes are chained by three bipartite networks::

    fine industries --S--> industries --M--> occupations --T--> activities

Essential flags ``u`` live on fine industries and flow right; home
feasibility ``v`` lives on activities and flows left. All shocks are
fractions: supply shocks in [-1, 0], demand shocks in [-1, 1].
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import AxisMisalignment, BadThreshold, DimensionMismatch, UnmappedIndustry
from .taxonomy import ClassCode, Concordance, EssentialList, column_normalize, row_normalize

_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class EmploymentMatrix:
    """Jobs per (industry, occupation) cell."""

    industries: tuple[ClassCode, ...]
    occupations: tuple[ClassCode, ...]
    counts: np.ndarray

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=float)
        if counts.shape != (len(self.industries), len(self.occupations)):
            raise DimensionMismatch(
                f"counts {counts.shape} vs {len(self.industries)} industries x {len(self.occupations)} occupations"
            )
        if (counts < 0).any():
            raise ValueError("employment counts must be nonnegative")
        if not counts.sum() > 0:
            raise ValueError("total employment must be positive")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> float:
        return float(self.counts.sum())

    @property
    def occupation_totals(self) -> np.ndarray:
        return self.counts.sum(axis=0)

    @property
    def industry_totals(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def zero_occupations(self) -> tuple[ClassCode, ...]:
        return tuple(self.occupations[j] for j in np.flatnonzero(self.occupation_totals == 0))

    @property
    def zero_industries(self) -> tuple[ClassCode, ...]:
        return tuple(self.industries[n] for n in np.flatnonzero(self.industry_totals == 0))

    def row_normalized(self) -> np.ndarray:
        return row_normalize(self.counts)[0]

    def column_normalized(self) -> np.ndarray:
        return column_normalize(self.counts)[0]


@dataclass(frozen=True, eq=False)
class ActivityMap:
    """Binary occupation x activity incidence."""

    occupations: tuple[ClassCode, ...]
    activities: tuple[str, ...]
    links: np.ndarray

    def __post_init__(self):
        links = np.asarray(self.links, dtype=float)
        if links.shape != (len(self.occupations), len(self.activities)):
            raise DimensionMismatch(
                f"links {links.shape} vs {len(self.occupations)} occupations x {len(self.activities)} activities"
            )
        if not np.isin(links, (0.0, 1.0)).all():
            raise ValueError("activity links must be binary")
        links.setflags(write=False)
        object.__setattr__(self, "links", links)

    @property
    def activity_counts(self) -> np.ndarray:
        return self.links.sum(axis=1)


@dataclass(frozen=True, eq=False)
class RemotabilityVector:
    activities: tuple[str, ...]
    remote: np.ndarray

    def __post_init__(self):
        remote = np.asarray(self.remote, dtype=float)
        if remote.shape != (len(self.activities),):
            raise DimensionMismatch(f"{remote.shape} remote flags for {len(self.activities)} activities")
        if not np.isin(remote, (0.0, 1.0)).all():
            raise ValueError("remote flags must be binary")
        remote.setflags(write=False)
        object.__setattr__(self, "remote", remote)


class ShockKind(str, enum.Enum):
    ESSENTIAL_SCORE = "essential_score"
    RLI = "rli"
    SUPPLY = "supply"
    DEMAND = "demand"
    TOTAL = "total"
    TOTAL_HEALTH = "total_health"


_BOUNDS = {
    ShockKind.ESSENTIAL_SCORE: (0.0, 1.0),
    ShockKind.RLI: (0.0, 1.0),
    ShockKind.SUPPLY: (-1.0, 0.0),
    ShockKind.DEMAND: (-1.0, 1.0),
    ShockKind.TOTAL: (-1.0, 0.0),
    ShockKind.TOTAL_HEALTH: (-1.0, 1.0),
}


@dataclass(frozen=True, eq=False)
class ShockVector:
    entities: tuple[ClassCode, ...]
    kind: ShockKind
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (len(self.entities),):
            raise DimensionMismatch(f"{values.shape} values for {len(self.entities)} entities")
        lo, hi = _BOUNDS[self.kind]
        if values.size and (values.min() < lo - _TOL or values.max() > hi + _TOL):
            raise ValueError(f"{self.kind.value} values outside [{lo}, {hi}]")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.entities)

    def as_dict(self) -> dict[str, float]:
        return {c.digits: float(v) for c, v in zip(self.entities, self.values)}


def _same_axis(a: Sequence, b: Sequence, what: str):
    if tuple(a) != tuple(b):
        raise AxisMisalignment(f"{what} axes differ")


def rate_consensus(ratings, threshold: int = 3, activities: Sequence[str] | None = None) -> RemotabilityVector:
    """Mark an activity remote when at least ``threshold`` raters said so."""
    ratings = np.asarray(ratings)
    if ratings.ndim != 2 or ratings.shape[1] < 1:
        raise DimensionMismatch("ratings must be an activities x raters matrix")
    n_raters = ratings.shape[1]
    if isinstance(threshold, bool) or int(threshold) != threshold or not 1 <= threshold <= n_raters:
        raise BadThreshold(f"threshold must be an integer in [1, {n_raters}], got {threshold!r}")
    if not np.isin(ratings, (0, 1)).all():
        raise ValueError("ratings must be binary")
    if activities is None:
        activities = tuple(str(i) for i in range(ratings.shape[0]))
    remote = (ratings.sum(axis=1) >= threshold).astype(float)
    return RemotabilityVector(tuple(activities), remote)


def filter_occupations(amap: ActivityMap, min_activities: int = 5) -> tuple[ActivityMap, tuple[ClassCode, ...]]:
    """Drop occupations linked to fewer than ``min_activities`` activities."""
    if min_activities < 1:
        raise ValueError("min_activities must be at least 1")
    keep = amap.activity_counts >= min_activities
    excluded = tuple(o for o, k in zip(amap.occupations, keep) if not k)
    kept = tuple(o for o, k in zip(amap.occupations, keep) if k)
    return ActivityMap(kept, amap.activities, amap.links[keep]), excluded


def _weighted_mean(A: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Row-wise ``A``-weighted mean of ``values``; zero for all-zero rows.

    Same as the row-normalized product, but numerator and denominator come
    from the same dot product so an all-ones ``values`` gives exactly 1.
    """
    num = A @ values
    den = A @ np.ones(A.shape[1])
    return np.divide(num, den, out=np.zeros_like(num), where=den > 0)


def essential_score_industries(S: Concordance, u) -> ShockVector:
    """Share of each industry's fine codes that are essential (``e``)."""
    if isinstance(u, EssentialList):
        u, _ = u.resolve(S.cols)
    u = np.asarray(u, dtype=float)
    if u.shape != (len(S.cols),):
        raise DimensionMismatch(f"u has {u.shape[0]} entries, concordance has {len(S.cols)} fine codes")
    return ShockVector(S.rows, ShockKind.ESSENTIAL_SCORE, _weighted_mean(S.matrix(), u))


def rli_occupations(T: ActivityMap, v: RemotabilityVector) -> ShockVector:
    """Fraction of each occupation's activities that can be done from home (``y``)."""
    if len(T.activities) != len(v.activities):
        raise DimensionMismatch(f"{len(T.activities)} mapped activities, {len(v.activities)} rated")
    _same_axis(T.activities, v.activities, "activity")
    return ShockVector(T.occupations, ShockKind.RLI, _weighted_mean(T.links, v.remote))


def rli_industries(M: EmploymentMatrix, T: ActivityMap, v: RemotabilityVector) -> ShockVector:
    """Employment-weighted occupation RLI within each industry (``r``)."""
    if len(M.occupations) != len(T.occupations):
        raise DimensionMismatch(f"{len(M.occupations)} employed occupations, {len(T.occupations)} mapped")
    _same_axis(M.occupations, T.occupations, "occupation")
    y = rli_occupations(T, v)
    return ShockVector(M.industries, ShockKind.RLI, _weighted_mean(M.counts, y.values))


def essential_score_occupations(M: EmploymentMatrix, e: ShockVector) -> ShockVector:
    """Employment-share-weighted essential score of each occupation (``x``)."""
    _same_axis(M.industries, e.entities, "industry")
    return ShockVector(M.occupations, ShockKind.ESSENTIAL_SCORE, _weighted_mean(M.counts.T, e.values))


def _supply(essential: ShockVector, remote: ShockVector) -> ShockVector:
    _same_axis(essential.entities, remote.entities, "entity")
    # essential and remote shares treated as independent probabilities
    values = -(1.0 - essential.values) * (1.0 - remote.values)
    return ShockVector(essential.entities, ShockKind.SUPPLY, values)


def supply_shock_industries(e: ShockVector, r: ShockVector) -> ShockVector:
    """ISS_n = -(1 - e_n)(1 - r_n)."""
    return _supply(e, r)


def supply_shock_occupations(x: ShockVector, y: ShockVector) -> ShockVector:
    """OSS_j = -(1 - x_j)(1 - y_j)."""
    return _supply(x, y)


def resolve_sector(code: ClassCode, sector_shocks: Mapping[str, float]) -> str | None:
    """Longest scenario prefix matching ``code``, or None."""
    best = None
    for prefix in sector_shocks:
        if code.digits.startswith(prefix) and (best is None or len(prefix) > len(best)):
            best = prefix
    return best


def demand_shock_industries(
    scenario,
    industries: Sequence[ClassCode],
    default: float | None = None,
) -> ShockVector:
    """Scenario demand shock of each industry's sector (``IDS``).

    ``scenario`` is a mapping from sector-code prefix to a signed fraction,
    or anything with a ``sector_shocks()`` method. Industries matching no
    prefix take ``default``; with no default they raise UnmappedIndustry.
    """
    shocks = scenario.sector_shocks() if hasattr(scenario, "sector_shocks") else dict(scenario)
    values = []
    for code in industries:
        prefix = resolve_sector(code, shocks)
        if prefix is None:
            if default is None:
                raise UnmappedIndustry(f"industry {code.digits} matches no scenario sector")
            values.append(default)
        else:
            values.append(shocks[prefix])
    return ShockVector(tuple(industries), ShockKind.DEMAND, np.array(values, dtype=float))


def demand_shock_occupations(M: EmploymentMatrix, ids: ShockVector) -> ShockVector:
    """ODS = M*^T IDS."""
    _same_axis(M.industries, ids.entities, "industry")
    return ShockVector(M.occupations, ShockKind.DEMAND, _weighted_mean(M.counts.T, ids.values))


def total_shock(supply: ShockVector, demand: ShockVector) -> ShockVector:
    """The binding constraint: pointwise minimum of supply and demand shocks."""
    _same_axis(supply.entities, demand.entities, "entity")
    return ShockVector(supply.entities, ShockKind.TOTAL, np.minimum(supply.values, demand.values))


def total_shock_health(supply: ShockVector, demand: ShockVector, level: str) -> ShockVector:
    """Total shock letting positive demand raise output.

    Industries with positive demand take the demand shock. Occupations with
    positive projected demand take demand plus their supply shock.
    """
    _same_axis(supply.entities, demand.entities, "entity")
    base = np.minimum(supply.values, demand.values)
    grow = demand.values > 0
    if level == "industry":
        values = np.where(grow, demand.values, base)
    elif level == "occupation":
        values = np.where(grow, demand.values + supply.values, base)
    else:
        raise ValueError(f"level must be 'industry' or 'occupation', got {level!r}")
    return ShockVector(supply.entities, ShockKind.TOTAL_HEALTH, values)
