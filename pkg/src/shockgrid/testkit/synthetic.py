"""Seeded random economies covering all four layers of the shock network."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..scenarios import NAICS_SECTORS
from ..taxonomy import ClassCode, Scheme

N_RATERS = 4


@dataclass(frozen=True, eq=False)
class SyntheticEconomy:
    seed: int
    dims: tuple[int, int, int, int]
    degenerate: bool
    industries: tuple[ClassCode, ...]
    fine: tuple[ClassCode, ...]
    occupations: tuple[ClassCode, ...]
    activities: tuple[str, ...]
    links: frozenset[tuple[int, int]]  # (industry, fine) concordance links
    u: np.ndarray
    counts: np.ndarray
    activity_links: np.ndarray
    ratings: np.ndarray
    remote: np.ndarray
    mean_wage: np.ndarray
    median_wage: np.ndarray
    exposure: np.ndarray
    value_added: np.ndarray
    gross_output: np.ndarray
    sector_shocks: dict[str, float]


def generate(seed: int, dims=(5, 8, 6, 12), degenerate: bool = False, density: float = 0.6) -> SyntheticEconomy:
    """Random economy with ``dims = (N industries, J occupations, I activities, K fine codes)``.

    ``density`` is the chance that an (industry, occupation) employment cell
    is nonzero.

    With ``degenerate`` set, the economy gets a zero employment column (and
    a zero row when N > 1), an unlinked industry, an all-essential list, a
    single-activity occupation and one missing wage.
    """
    N, J, I, K = (int(d) for d in dims)
    if min(N, J, I, K) < 1:
        raise ValueError("every dimension must be at least 1")
    if not 0.0 < density <= 1.0:
        raise ValueError("density must lie in (0, 1]")
    if degenerate and J < 3:
        # column 0 loses its employment and the last occupation its wage;
        # a third occupation keeps the wage aggregates defined
        raise ValueError("degenerate mode needs J >= 3")
    rng = np.random.default_rng(seed)

    sectors = rng.choice(len(NAICS_SECTORS), size=N)
    industries = tuple(ClassCode(Scheme.NAICS, f"{NAICS_SECTORS[s]}{n:03d}") for n, s in enumerate(sectors))
    fine_parent = [k % N if k < N else int(rng.integers(N)) for k in range(K)]
    fine = tuple(
        ClassCode(Scheme.NAICS, f"{industries[p].digits[:2]}{k:04d}") for k, p in enumerate(fine_parent)
    )
    links = {(p, k) for k, p in enumerate(fine_parent)}
    for n in range(N):
        if K < N:
            links.add((n, n % K))
        for k in range(K):
            if rng.random() < 0.1:
                links.add((n, k))
    u = (rng.random(K) < 0.5).astype(float)

    counts = np.where(rng.random((N, J)) < density, rng.integers(1, 1000, size=(N, J)), 0).astype(float)
    for j in range(J):
        if counts[:, j].sum() == 0:
            counts[rng.integers(N), j] = float(rng.integers(1, 1000))

    activity_links = (rng.random((J, I)) < 0.4).astype(float)
    for j in range(J):
        if activity_links[j].sum() == 0:
            activity_links[j, rng.integers(I)] = 1.0
    ratings = (rng.random((I, N_RATERS)) < 0.6).astype(int)
    remote = (ratings.sum(axis=1) >= 3).astype(float)

    mean_wage = np.round(rng.lognormal(10.5, 0.5, size=J), 2)
    median_wage = np.round(mean_wage * rng.uniform(0.8, 1.0, size=J), 2)
    exposure = np.round(rng.uniform(0, 100, size=J), 1)
    value_added = np.round(rng.uniform(10, 1000, size=N), 3)
    gross_output = np.round(value_added * rng.uniform(1.2, 2.5, size=N), 3)
    sector_shocks = {s: round(float(rng.uniform(-0.8, 0.2)), 2) for s in NAICS_SECTORS}

    if degenerate:
        counts[:, 0] = 0.0
        if N > 1:
            counts[0, :] = 0.0
            links = {(n, k) for n, k in links if n != 0}
        for j in range(1, J):
            if counts[:, j].sum() == 0:
                counts[N - 1, j] = 1.0
        u = np.ones(K)
        activity_links[J - 1] = 0.0
        activity_links[J - 1, 0] = 1.0
        mean_wage[J - 1] = np.nan
        median_wage[J - 1] = np.nan

    return SyntheticEconomy(
        seed=seed,
        dims=(N, J, I, K),
        degenerate=degenerate,
        industries=industries,
        fine=fine,
        occupations=tuple(ClassCode(Scheme.SOC, f"{11 + j // 9000:02d}{j % 9000 + 1000:04d}") for j in range(J)),
        activities=tuple(f"A{i:04d}" for i in range(I)),
        links=frozenset(links),
        u=u,
        counts=counts,
        activity_links=activity_links,
        ratings=ratings,
        remote=remote,
        mean_wage=mean_wage,
        median_wage=median_wage,
        exposure=exposure,
        value_added=value_added,
        gross_output=gross_output,
        sector_shocks=sector_shocks,
    )


def _write(path: Path, header, rows):
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _num(x) -> str:
    return "NA" if np.isnan(x) else repr(float(x))


def write_inputs(econ: SyntheticEconomy, directory) -> Path:
    """Dump ``econ`` as pipeline input CSVs plus a ``config.txt``; returns the config path."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    _write(d / "crosswalk.csv", ["from_scheme", "from_code", "to_scheme", "to_code"],
           [["NAICS", econ.industries[n].digits, "NAICS", econ.fine[k].digits] for n, k in sorted(econ.links)])
    _write(d / "essential_list.csv", ["scheme", "code", "essential"],
           [["NAICS", f.digits, int(v)] for f, v in zip(econ.fine, econ.u)])
    _write(d / "activity_ratings.csv", ["activity_id", "title", *(f"rater_{r + 1}" for r in range(N_RATERS))],
           [[a, f"activity {a}", *econ.ratings[i].tolist()] for i, a in enumerate(econ.activities)])
    _write(d / "activity_map.csv", ["occupation_code", "activity_id"],
           [[o.digits, econ.activities[i]] for j, o in enumerate(econ.occupations)
            for i in np.flatnonzero(econ.activity_links[j])])
    _write(d / "employment.csv", ["industry_code", "occupation_code", "employment"],
           [[econ.industries[n].digits, econ.occupations[j].digits, repr(float(econ.counts[n, j]))]
            for n in range(len(econ.industries)) for j in range(len(econ.occupations)) if econ.counts[n, j] > 0])
    _write(d / "wages.csv", ["occupation_code", "employment", "mean_wage", "median_wage", "exposure_to_infection"],
           [[o.digits, repr(float(econ.counts[:, j].sum())), _num(econ.mean_wage[j]), _num(econ.median_wage[j]),
             _num(econ.exposure[j])] for j, o in enumerate(econ.occupations)])
    _write(d / "value_added.csv", ["industry_code", "value_added", "gross_output"],
           [[c.digits, repr(float(econ.value_added[n])), repr(float(econ.gross_output[n]))]
            for n, c in enumerate(econ.industries)])
    _write(d / "demand_scenario.csv", ["sector_code", "shock_pct", "postponed", "source"],
           [[s, f"{round(v * 100, 6):g}", "NA", f"synthetic seed {econ.seed}"] for s, v in econ.sector_shocks.items()])
    config = d / "config.txt"
    config.write_text(
        "# synthetic economy, seed {}\n"
        "crosswalk = crosswalk.csv\n"
        "essential_list = essential_list.csv\n"
        "activity_ratings = activity_ratings.csv\n"
        "activity_map = activity_map.csv\n"
        "employment = employment.csv\n"
        "wages = wages.csv\n"
        "value_added = value_added.csv\n"
        "scenario = demand_scenario.csv\n"
        "consensus_threshold = 3\n"
        "min_activities = 1\n"
        "output_dir = out\n".format(econ.seed),
        encoding="utf-8",
    )
    return config
