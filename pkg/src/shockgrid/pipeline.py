"""End-to-end runs: load inputs, check them, compute shocks, write reports."""

from __future__ import annotations

import csv
import hashlib
import io
import itertools
import json
import logging
import math
import shutil
import tempfile
import warnings
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from . import engine, scenarios
from .aggregation import (
    MEASURES,
    SHOCKS,
    AggregateReport,
    ValueAddedTable,
    WageTable,
    build_report,
    pearson,
)
from .errors import DegenerateInput, IntegrityError, SchemaError, ShockgridError
from .io import (
    read_activity_map,
    read_activity_ratings,
    read_crosswalk,
    read_employment,
    read_essential_list,
    read_overrides,
    read_value_added,
    read_wages,
)
from .taxonomy import (
    ClassCode,
    OverrideList,
    PrefixIndex,
    Scheme,
    apply_overrides,
    build_concordance,
    parse_scheme,
    sorted_codes,
)

logger = logging.getLogger(__name__)

INPUT_KEYS = (
    "crosswalk", "essential_list", "overrides", "activity_ratings", "activity_map",
    "employment", "wages", "value_added",
)
OPTIONAL_INPUTS = ("overrides",)
BOOL_KEYS = ("health_growth", "impute_missing_wages")
INT_KEYS = ("consensus_threshold", "min_activities")
SCHEME_KEYS = ("industry_scheme", "occupation_scheme")
SWEEP_KEYS = ("sweep_scenarios", "sweep_health_growth", "sweep_thresholds")
OTHER_KEYS = ("scenario", "scenario_mapping", "output_dir")
KNOWN_KEYS = INPUT_KEYS + BOOL_KEYS + INT_KEYS + SCHEME_KEYS + SWEEP_KEYS + OTHER_KEYS

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


@dataclass(frozen=True)
class RunConfig:
    crosswalk: Path
    essential_list: Path
    activity_ratings: Path
    activity_map: Path
    employment: Path
    wages: Path
    value_added: Path
    scenario: str
    overrides: Path | None = None
    scenario_mapping: Path | None = None
    consensus_threshold: int = 3
    min_activities: int = 5
    health_growth: bool = False
    impute_missing_wages: bool = False
    output_dir: Path = Path("shockgrid-out")
    industry_scheme: Scheme = Scheme.NAICS
    occupation_scheme: Scheme = Scheme.SOC
    sweep_scenarios: tuple[str, ...] = ()
    sweep_health_growth: tuple[bool, ...] = ()
    sweep_thresholds: tuple[int, ...] = ()

    def echo(self) -> dict:
        """Resolved settings as plain JSON values; output_dir is left out so reruns elsewhere match."""
        out = {}
        for key, value in asdict(self).items():
            if key == "output_dir" or key.startswith("sweep_"):
                continue
            if isinstance(value, Path):
                value = str(value)
            elif isinstance(value, Scheme):
                value = value.value
            out[key] = value
        return out

    def input_paths(self) -> dict[str, Path]:
        paths = {k: getattr(self, k) for k in INPUT_KEYS if getattr(self, k) is not None}
        if self.scenario not in scenarios.BUNDLED:
            paths["scenario"] = Path(self.scenario)
        if self.scenario_mapping is not None:
            paths["scenario_mapping"] = self.scenario_mapping
        return paths


def _parse_bool(key, raw) -> bool:
    if isinstance(raw, bool):
        return raw
    text = str(raw).strip().lower()
    if text in _TRUE:
        return True
    if text in _FALSE:
        return False
    raise SchemaError(f"config: {key} must be true/false, got {raw!r}")


def _parse_int(key, raw) -> int:
    try:
        return int(str(raw).strip())
    except ValueError:
        raise SchemaError(f"config: {key} must be an integer, got {raw!r}") from None


def _split(raw) -> list[str]:
    if isinstance(raw, (list, tuple)):
        return [str(x) for x in raw]
    return [part.strip() for part in str(raw).split(",") if part.strip()]


def parse_config_text(text: str) -> dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SchemaError(f"config line {lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise SchemaError(f"config line {lineno}: unknown key {key!r}")
        values[key] = value
    return values


def make_config(values: dict, base_dir: Path | None = None) -> RunConfig:
    """Build a RunConfig from raw key/value pairs; relative paths resolve against ``base_dir``."""
    base_dir = Path(base_dir) if base_dir is not None else Path.cwd()
    values = {k: v for k, v in values.items() if v is not None}

    def path(key):
        p = Path(values[key])
        return p if p.is_absolute() else base_dir / p

    missing = [k for k in INPUT_KEYS + ("scenario",) if k not in values and k not in OPTIONAL_INPUTS]
    if missing:
        raise SchemaError(f"config: missing key(s) {', '.join(missing)}")
    kwargs = {k: path(k) for k in INPUT_KEYS if k in values}
    scenario = str(values["scenario"])
    if scenario not in scenarios.BUNDLED:
        scenario = str(path("scenario"))
    kwargs["scenario"] = scenario
    if "scenario_mapping" in values:
        kwargs["scenario_mapping"] = path("scenario_mapping")
    if "output_dir" in values:
        kwargs["output_dir"] = path("output_dir")
    for key in INT_KEYS:
        if key in values:
            kwargs[key] = _parse_int(key, values[key])
    for key in BOOL_KEYS:
        if key in values:
            kwargs[key] = _parse_bool(key, values[key])
    for key in SCHEME_KEYS:
        if key in values:
            try:
                kwargs[key] = parse_scheme(values[key])
            except ShockgridError as exc:
                raise SchemaError(f"config: {key}: {exc}") from None
    if "sweep_scenarios" in values:
        kwargs["sweep_scenarios"] = tuple(
            s if s in scenarios.BUNDLED else str(path_of(s, base_dir)) for s in _split(values["sweep_scenarios"])
        )
    if "sweep_health_growth" in values:
        kwargs["sweep_health_growth"] = tuple(_parse_bool("sweep_health_growth", v) for v in _split(values["sweep_health_growth"]))
    if "sweep_thresholds" in values:
        kwargs["sweep_thresholds"] = tuple(_parse_int("sweep_thresholds", v) for v in _split(values["sweep_thresholds"]))
    config = RunConfig(**kwargs)
    if config.consensus_threshold < 1:
        raise SchemaError("config: consensus_threshold must be at least 1")
    if config.min_activities < 1:
        raise SchemaError("config: min_activities must be at least 1")
    return config


def path_of(raw: str, base_dir: Path) -> Path:
    p = Path(raw)
    return p if p.is_absolute() else base_dir / p


def load_config(path, **overrides) -> RunConfig:
    """Read a config file; keyword overrides (e.g. from CLI flags) win over file values."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"{path}: cannot read config ({exc.strerror})") from None
    values = parse_config_text(text)
    base = path.parent
    for key, value in overrides.items():
        if value is None:
            continue
        if key in ("scenario", "output_dir") and isinstance(value, str) and value not in scenarios.BUNDLED:
            value = str(Path(value).resolve())
        values[key] = value
    return make_config(values, base)


@dataclass
class Diagnostics:
    dropped_occupations: list[dict] = field(default_factory=list)
    zero_link_industries: list[str] = field(default_factory=list)
    industries_without_occupations: list[str] = field(default_factory=list)
    unmapped_codes: list[dict] = field(default_factory=list)
    unclassified_fine_codes: list[str] = field(default_factory=list)
    occupations_missing_wage: list[str] = field(default_factory=list)
    industries_missing_value_added: list[str] = field(default_factory=list)
    overrides_applied: list[dict] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    coverage: dict[str, float] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(eq=False)
class Model:
    """Validated inputs aligned on common axes, ready for the shock engine."""

    config: RunConfig
    concordance: object
    u: np.ndarray
    overrides: OverrideList
    employment: engine.EmploymentMatrix
    activity_map: engine.ActivityMap
    remote: engine.RemotabilityVector
    wages: WageTable
    value_added: ValueAddedTable
    scenario: scenarios.DemandScenario
    wage_rows: dict
    diagnostics: Diagnostics


def _leaves(codes) -> list[ClassCode]:
    """Codes that are not a strict prefix of another code in the set."""
    ordered = sorted_codes(codes)
    out = []
    for i, code in enumerate(ordered):
        nxt = ordered[i + 1] if i + 1 < len(ordered) else None
        if nxt is None or not (nxt.scheme == code.scheme and nxt.digits.startswith(code.digits)):
            out.append(code)
    return out


def _ratio(num: float, den: float) -> float:
    return float(num / den) if den > 0 else 0.0


def prepare(config: RunConfig) -> Model:
    """Load and cross-check every input; raise only when an axis would be empty."""
    diag = Diagnostics()
    for key, path in config.input_paths().items():
        if not Path(path).is_file():
            raise SchemaError(f"{key}: file not found: {path}")

    crosswalk = read_crosswalk(config.crosswalk)
    essential = read_essential_list(config.essential_list)
    overrides = read_overrides(config.overrides) if config.overrides else OverrideList()
    ratings = read_activity_ratings(config.activity_ratings)
    amap_rows = read_activity_map(config.activity_map, config.occupation_scheme)
    emp_rows = read_employment(config.employment, config.industry_scheme, config.occupation_scheme)
    wage_rows = read_wages(config.wages, config.occupation_scheme)
    va_rows = read_value_added(config.value_added, config.industry_scheme)
    if not emp_rows:
        raise IntegrityError(f"{config.employment}: no employment rows")

    try:
        remote = engine.rate_consensus(ratings.votes, config.consensus_threshold, ratings.activities)
    except ShockgridError as exc:
        raise SchemaError(f"consensus_threshold: {exc}") from None

    # occupation x activity incidence
    act_index = {a: i for i, a in enumerate(ratings.activities)}
    links: dict[ClassCode, set[int]] = {}
    for occ, act in amap_rows:
        if act not in act_index:
            diag.unmapped_codes.append({"file": "activity_map", "code": act, "reason": "unrated activity"})
            continue
        links.setdefault(occ, set()).add(act_index[act])
    mapped_occ = sorted_codes(links)
    T_full = np.zeros((len(mapped_occ), len(ratings.activities)))
    for j, occ in enumerate(mapped_occ):
        T_full[j, sorted(links[occ])] = 1.0
    amap, excluded = engine.filter_occupations(
        engine.ActivityMap(mapped_occ, ratings.activities, T_full), config.min_activities
    )
    for occ in excluded:
        diag.dropped_occupations.append({"code": occ.digits, "reason": f"fewer than {config.min_activities} activities"})
    excluded = set(excluded)

    # employment cells, restricted to occupations with activity data
    cells: dict[tuple[ClassCode, ClassCode], float] = {}
    total_emp = 0.0
    emp_by_occ: dict[ClassCode, float] = {}
    for ind, occ, value in emp_rows:
        total_emp += value
        emp_by_occ[occ] = emp_by_occ.get(occ, 0.0) + value
        cells[(ind, occ)] = cells.get((ind, occ), 0.0) + value
    kept_occ = set(amap.occupations)
    for occ in sorted_codes(emp_by_occ):
        if occ not in kept_occ and occ not in excluded:
            diag.dropped_occupations.append({"code": occ.digits, "reason": "no activity data"})
            diag.unmapped_codes.append({"file": "employment", "code": occ.digits, "reason": "unknown occupation"})
    occ_emp = {o: emp_by_occ.get(o, 0.0) for o in amap.occupations}
    for occ in amap.occupations:
        if occ_emp[occ] <= 0:
            diag.dropped_occupations.append({"code": occ.digits, "reason": "no employment"})
    occupations = tuple(o for o in amap.occupations if occ_emp[o] > 0)
    if not occupations:
        raise IntegrityError("no occupation has both activity data and employment")

    industries = sorted_codes([ind for ind, _, _ in emp_rows] + list(va_rows))
    ind_idx = {c: i for i, c in enumerate(industries)}
    occ_idx = {c: j for j, c in enumerate(occupations)}
    counts = np.zeros((len(industries), len(occupations)))
    for (ind, occ), value in cells.items():
        j = occ_idx.get(occ)
        if j is not None:
            counts[ind_idx[ind], j] += value
    if not counts.sum() > 0:
        raise IntegrityError("matched employment is zero")
    M = engine.EmploymentMatrix(industries, occupations, counts)
    keep_rows = [amap.occupations.index(o) for o in occupations]
    amap = engine.ActivityMap(occupations, amap.activities, amap.links[keep_rows])
    diag.industries_without_occupations = [c.digits for c in M.zero_industries]

    # concordance to fine codes
    row_index = PrefixIndex(industries)
    usable = []
    for src, dst in crosswalk:
        if not row_index.matches(src):
            diag.unmapped_codes.append({"file": "crosswalk", "code": src.digits, "reason": "industry not in analysis"})
            continue
        usable.append((src, dst))
    fine = _leaves([dst for _, dst in crosswalk] + [code for code, _ in essential.entries])
    S = build_concordance(industries, fine, usable)
    u, unclassified = essential.resolve(S.cols)
    diag.unclassified_fine_codes = [c.digits for c in unclassified]
    diag.zero_link_industries = [c.digits for c in S.empty_rows]

    # wages and value added over the analysis axes
    for code in sorted_codes(wage_rows):
        if code not in occ_idx:
            diag.unmapped_codes.append({"file": "wages", "code": code.digits, "reason": "occupation not in analysis"})
    mean = np.array([wage_rows[o].mean_wage if o in wage_rows else math.nan for o in occupations])
    median = np.array([wage_rows[o].median_wage if o in wage_rows else math.nan for o in occupations])
    exposure = np.array([wage_rows[o].exposure if o in wage_rows else math.nan for o in occupations])
    diag.occupations_missing_wage = [o.digits for o, m in zip(occupations, mean) if math.isnan(m)]
    wages = WageTable(occupations, M.occupation_totals, mean, median, exposure)
    if not wages.has_wage.any():
        raise IntegrityError("no analysed occupation has a mean wage")

    va = np.array([va_rows.get(c, (0.0, math.nan))[0] for c in industries])
    go = np.array([va_rows.get(c, (0.0, math.nan))[1] for c in industries])
    diag.industries_missing_value_added = [c.digits for c in industries if c not in va_rows]
    if not va.sum() > 0:
        raise IntegrityError("total value added of analysed industries is zero")
    value_added = ValueAddedTable(industries, va, go)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        scenario = scenarios.load_scenario(config.scenario, config.scenario_mapping)
    diag.warnings.extend(str(w.message) for w in caught)
    shocks = scenario.sector_shocks()
    for code in industries:
        if engine.resolve_sector(code, shocks) is None:
            diag.unmapped_codes.append({"file": "scenario", "code": code.digits, "reason": "no demand sector"})

    matched = float(M.total)
    diag.coverage = {
        "employment": _ratio(matched, total_emp),
        "occupations": _ratio(len(occupations), len(emp_by_occ)),
        "industries_linked": _ratio(len(industries) - len(diag.zero_link_industries), len(industries)),
        "wage_covered_employment": _ratio(float(wages.employment[wages.has_wage].sum()), matched),
        "value_added_industries": _ratio(len(industries) - len(diag.industries_missing_value_added), len(industries)),
    }
    return Model(config, S, u, overrides, M, amap, remote, wages, value_added, scenario, wage_rows, diag)


def validate(config: RunConfig) -> Diagnostics:
    return prepare(config).diagnostics


@dataclass(eq=False)
class Results:
    industry: dict[str, engine.ShockVector]
    occupation: dict[str, engine.ShockVector]
    report: AggregateReport
    model: Model


def compute(model: Model) -> Results:
    """Run the shock engine and the aggregation on a prepared model."""
    cfg = model.config
    S, M = model.concordance, model.employment
    e = engine.essential_score_industries(S, model.u)
    if model.overrides.entries:
        values, audit = apply_overrides(e.values, model.overrides, e.entities)
        e = engine.ShockVector(e.entities, engine.ShockKind.ESSENTIAL_SCORE, values)
        model.diagnostics.overrides_applied = [
            {"code": a.code.digits, "old": a.old, "new": a.new, "note": a.note} for a in audit
        ]
    y = engine.rli_occupations(model.activity_map, model.remote)
    r = engine.rli_industries(M, model.activity_map, model.remote)
    iss = engine.supply_shock_industries(e, r)
    x = engine.essential_score_occupations(M, e)
    oss = engine.supply_shock_occupations(x, y)
    default = 0.0 if model.scenario.approximate else None
    ids = engine.demand_shock_industries(model.scenario, M.industries, default=default)
    ods = engine.demand_shock_occupations(M, ids)
    industry = {
        "e": e, "r": r, "supply": iss, "demand": ids,
        "total": engine.total_shock(iss, ids),
        "total_health": engine.total_shock_health(iss, ids, "industry"),
    }
    occupation = {
        "x": x, "y": y, "supply": oss, "demand": ods,
        "total": engine.total_shock(oss, ods),
        "total_health": engine.total_shock_health(oss, ods, "occupation"),
    }
    report = build_report(occupation, industry, model.wages, model.value_added, M, e, y, cfg.health_growth)
    report.correlations = correlations(industry, occupation, model)
    return Results(industry, occupation, report, model)


def _corr(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ok = ~(np.isnan(a) | np.isnan(b))
    try:
        return pearson(a[ok], b[ok])
    except DegenerateInput:
        return None


def correlations(industry, occupation, model: Model) -> dict:
    employed = model.employment.industry_totals > 0
    wages = model.wages
    return {
        "industry_essential_vs_rli": _corr(industry["e"].values[employed], industry["r"].values[employed]),
        "occupation_essential_vs_rli": _corr(occupation["x"].values, occupation["y"].values),
        "median_wage_vs_rli": _corr(wages.median_wage, occupation["y"].values),
        "median_wage_vs_essential": _corr(wages.median_wage, occupation["x"].values),
        "median_wage_vs_exposure": _corr(wages.median_wage, wages.exposure),
        "median_wage_vs_demand": _corr(wages.median_wage, occupation["demand"].values),
        "median_wage_vs_labor_shock": _corr(wages.median_wage, occupation["total_health"].values),
    }


# ---------------------------------------------------------------------------
# output formatting
# ---------------------------------------------------------------------------

def fmt(value) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "NA"
    text = f"{float(value):.6f}"
    return "0.000000" if text == "-0.000000" else text


def r6(value):
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return None
    return round(float(value), 6) + 0.0


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def sha256_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def run_block(config: RunConfig) -> dict:
    return {
        "config": config.echo(),
        "input_sha256": {k: sha256_file(p) for k, p in sorted(config.input_paths().items())},
    }


def shock_table(entities, columns: dict[str, np.ndarray], flags=None) -> str:
    names = list(columns)
    header = ["code", *names, *(f"{n}_pct" for n in names)]
    if flags is not None:
        header.append("flags")
    rows = []
    for i, code in enumerate(entities):
        vals = [columns[n][i] for n in names]
        row = [code.digits, *(fmt(v) for v in vals), *(fmt(100.0 * v) for v in vals)]
        if flags is not None:
            row.append(flags[i])
        rows.append(row)
    return csv_text(header, rows)


def report_dict(report: AggregateReport) -> dict:
    return {
        "cells": {k: {m: r6(report.cells[k][m]) for m in MEASURES} for k in SHOCKS},
        "headline": {m: r6(v) for m, v in report.headline.items()},
        "health_growth": report.health_growth,
        "quartiles": [
            {
                "quartile": q.quartile,
                "occupations": q.occupations,
                "employment_share": r6(q.employment_share),
                "employment_shock": r6(q.employment_shock),
                "wage_bill_share": r6(q.wage_bill_share),
                "lost_wage_share": r6(q.lost_wage_share),
            }
            for q in report.quartiles
        ],
        "venn": {k: r6(v) for k, v in asdict(report.venn).items()},
        "correlations": {
            k: (None if v is None else {"rho": r6(v[0]), "p_value": float(f"{v[1]:.6g}")})
            for k, v in report.correlations.items()
        },
    }


def quartile_csv(report: AggregateReport) -> str:
    header = [
        "quartile", "occupations", "employment", "employment_share", "employment_shock",
        "employment_shock_pct", "wage_bill_share", "lost_wage_share", "lost_wage_share_pct",
    ]
    rows = [
        [f"q{q.quartile}", q.occupations, fmt(q.employment), fmt(q.employment_share), fmt(q.employment_shock),
         fmt(100 * q.employment_shock), fmt(q.wage_bill_share), fmt(q.lost_wage_share), fmt(100 * q.lost_wage_share)]
        for q in report.quartiles
    ]
    return csv_text(header, rows)


def render(results: Results) -> dict[str, str]:
    """Every output file name mapped to its text."""
    model = results.model
    cfg = model.config
    run = run_block(cfg)
    ind, occ = results.industry, results.occupation
    M = model.employment

    no_occ = set(model.diagnostics.industries_without_occupations)
    no_link = set(model.diagnostics.zero_link_industries)
    flags = []
    for code in M.industries:
        f = []
        if code.digits in no_occ:
            f.append("no_matched_occupations")
        if code.digits in no_link:
            f.append("no_linked_fine_codes")
        flags.append(";".join(f))
    files = {}
    files["industry_shocks.csv"] = shock_table(M.industries, {
        "e": ind["e"].values, "r": ind["r"].values, "ISS": ind["supply"].values,
        "IDS": ind["demand"].values, "ITS": ind["total"].values, "ITS_h": ind["total_health"].values,
    }, flags)
    files["occupation_shocks.csv"] = shock_table(M.occupations, {
        "x": occ["x"].values, "y": occ["y"].values, "OSS": occ["supply"].values,
        "ODS": occ["demand"].values, "OTS": occ["total"].values, "OTS_h": occ["total_health"].values,
    })
    body = report_dict(results.report)
    body["run"] = run
    body["scenario"] = {"name": model.scenario.name, "approximate": model.scenario.approximate}
    files["aggregates.json"] = json_text(body)
    files["quartiles.csv"] = quartile_csv(results.report)
    venn = results.report.venn
    files["venn.json"] = json_text({
        "venn": {k: r6(v) for k, v in asdict(venn).items()},
        "parts": {k: r6(v) for k, v in venn.parts.items()},
        "run": run,
    })
    files["diagnostics.json"] = json_text({**model.diagnostics.as_dict(), "run": run})

    wages = model.wages
    median = wages.median_wage.copy()
    imputed = np.zeros(len(median), dtype=int)
    if cfg.impute_missing_wages and np.isnan(median).any() and (~np.isnan(median)).any():
        fill = float(np.nanmean(median))
        imputed = np.isnan(median).astype(int)
        median = np.where(np.isnan(median), fill, median)
    files["plotdata/industries.csv"] = csv_text(
        ["code", "employment", "value_added", "gross_output", "e", "r", "ISS", "IDS", "ITS", "ITS_h"],
        [
            [c.digits, fmt(M.industry_totals[i]), fmt(model.value_added.value_added[i]),
             fmt(model.value_added.gross_output[i]),
             *(fmt(ind[k].values[i]) for k in ("e", "r", "supply", "demand", "total", "total_health"))]
            for i, c in enumerate(M.industries)
        ],
    )
    files["plotdata/occupations.csv"] = csv_text(
        ["code", "employment", "mean_wage", "median_wage", "median_wage_imputed", "exposure_to_infection",
         "x", "y", "OSS", "ODS", "OTS", "OTS_h"],
        [
            [c.digits, fmt(wages.employment[j]), fmt(wages.mean_wage[j]), fmt(median[j]), imputed[j],
             fmt(wages.exposure[j]),
             *(fmt(occ[k].values[j]) for k in ("x", "y", "supply", "demand", "total", "total_health"))]
            for j, c in enumerate(M.occupations)
        ],
    )
    return files


def write_outputs(files: dict[str, str], output_dir, manifest_extra: dict | None = None) -> list[Path]:
    """Write ``files`` all-or-nothing: staged in a scratch directory, then moved into place."""
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    stage = Path(tempfile.mkdtemp(prefix=".shockgrid-", dir=output_dir))
    written = []
    try:
        for name, text in files.items():
            target = stage / name
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(text, encoding="utf-8", newline="")
        manifest = {"files": {name: sha256_file(stage / name) for name in sorted(files)}}
        if manifest_extra:
            manifest.update(manifest_extra)
        (stage / "manifest.json").write_text(json_text(manifest), encoding="utf-8")
        for name in [*files, "manifest.json"]:
            final = output_dir / name
            final.parent.mkdir(parents=True, exist_ok=True)
            (stage / name).replace(final)
            written.append(final)
    except BaseException:
        for path in written:
            path.unlink(missing_ok=True)
        raise
    finally:
        shutil.rmtree(stage, ignore_errors=True)
    return written


def run(config: RunConfig, write: bool = True) -> AggregateReport:
    """Validate, compute, and (optionally) write every output file for one config."""
    model = prepare(config)
    results = compute(model)
    if write:
        files = render(results)
        write_outputs(files, config.output_dir, {"run": run_block(config)})
        logger.info("wrote %d files to %s", len(files) + 1, config.output_dir)
    return results.report


SWEEP_HEADER = (
    ["scenario", "health_growth", "consensus_threshold"]
    + [f"{k}_{m}" for k in SHOCKS for m in MEASURES]
    + [f"headline_{m}" for m in MEASURES]
    + [f"q{q}_employment_shock" for q in range(1, 5)]
    + ["error"]
)


def expand_sweep(config: RunConfig) -> list[RunConfig]:
    """Cartesian product of the sweep axes; unset axes use the base config's value."""
    scen = config.sweep_scenarios or (config.scenario,)
    health = config.sweep_health_growth or (config.health_growth,)
    thresholds = config.sweep_thresholds or (config.consensus_threshold,)
    return [
        replace(config, scenario=s, health_growth=h, consensus_threshold=t)
        for s, h, t in itertools.product(scen, health, thresholds)
    ]


def _scenario_label(name: str) -> str:
    return name if name in scenarios.BUNDLED else Path(name).stem


def sweep(configs: list[RunConfig]) -> list[dict]:
    """One result row per config; a failing row records its error and the rest carry on."""
    if not configs:
        raise ValueError("sweep needs at least one config")
    rows = []
    for cfg in configs:
        row = {"scenario": _scenario_label(cfg.scenario), "health_growth": cfg.health_growth,
               "consensus_threshold": cfg.consensus_threshold, "error": ""}
        try:
            report = run(cfg, write=False)
        except ShockgridError as exc:
            row["error"] = f"{type(exc).__name__}: {exc}"
        else:
            for k in SHOCKS:
                for m in MEASURES:
                    row[f"{k}_{m}"] = report.cells[k][m]
            for m, v in report.headline.items():
                row[f"headline_{m}"] = v
            for q in report.quartiles:
                row[f"q{q.quartile}_employment_shock"] = q.employment_shock
        rows.append(row)
    return rows


def sweep_csv(rows: list[dict]) -> str:
    out = []
    for row in rows:
        line = []
        for col in SWEEP_HEADER:
            value = row.get(col)
            if col in ("scenario", "error"):
                line.append(value or "")
            elif col == "health_growth":
                line.append("true" if value else "false")
            elif col == "consensus_threshold":
                line.append(value)
            else:
                line.append(fmt(value))
        out.append(line)
    return csv_text(SWEEP_HEADER, out)
