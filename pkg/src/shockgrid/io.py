"""CSV readers for every input file, with schema checks.

All readers raise SchemaError naming the file and line on a missing
column or a value of the wrong type.
"""

from __future__ import annotations

import csv
import functools
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import MalformedCode, SchemaError
from .taxonomy import ClassCode, EssentialList, OverrideList, Scheme, parse_code

MISSING = {"", "na", "nan", "null"}


def _rows(path: Path, required: tuple[str, ...]):
    path = Path(path)
    try:
        handle = path.open(newline="", encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"{path}: cannot open ({exc.strerror})") from None
    with handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None:
            raise SchemaError(f"{path}: missing header row")
        fields = [f.strip() for f in header]
        missing = [c for c in required if c not in fields]
        if missing:
            raise SchemaError(f"{path}: missing column(s) {', '.join(missing)}")
        width = len(fields)
        for lineno, values in enumerate(reader, start=2):
            values = [v.strip() for v in values[:width]]
            if not any(values):
                continue
            if len(values) < width:
                values += [""] * (width - len(values))
            yield lineno, dict(zip(fields, values))


@functools.lru_cache(maxsize=1 << 16)
def _cached_code(scheme, raw) -> ClassCode:
    return parse_code(scheme, raw)


def _code(path, lineno, scheme, raw) -> ClassCode:
    # input files repeat the same few thousand codes many times over
    try:
        return _cached_code(scheme, raw)
    except MalformedCode as exc:
        raise SchemaError(f"{path}:{lineno}: {exc}") from None


def _number(path, lineno, column, raw, optional=False) -> float:
    if raw.lower() in MISSING:
        if optional:
            return math.nan
        raise SchemaError(f"{path}:{lineno}: {column} is required")
    try:
        value = float(raw)
    except ValueError:
        raise SchemaError(f"{path}:{lineno}: {column} {raw!r} is not a number") from None
    if not math.isfinite(value):
        raise SchemaError(f"{path}:{lineno}: {column} must be finite")
    return value


def _flag(path, lineno, column, raw) -> int:
    if raw not in ("0", "1"):
        raise SchemaError(f"{path}:{lineno}: {column} must be 0 or 1, got {raw!r}")
    return int(raw)


def read_crosswalk(path) -> list[tuple[ClassCode, ClassCode]]:
    pairs = []
    for n, row in _rows(path, ("from_scheme", "from_code", "to_scheme", "to_code")):
        src = _code(path, n, row["from_scheme"], row["from_code"])
        dst = _code(path, n, row["to_scheme"], row["to_code"])
        pairs.append((src, dst))
    return pairs


def read_essential_list(path) -> EssentialList:
    entries = {}
    for n, row in _rows(path, ("scheme", "code", "essential")):
        code = _code(path, n, row["scheme"], row["code"])
        if code in entries:
            raise SchemaError(f"{path}:{n}: duplicate code {code.digits}")
        entries[code] = _flag(path, n, "essential", row["essential"])
    return EssentialList(tuple(entries.items()))


def read_overrides(path) -> OverrideList:
    entries = []
    for n, row in _rows(path, ("scheme", "code", "essential_share", "note")):
        code = _code(path, n, row["scheme"], row["code"])
        share = _number(path, n, "essential_share", row["essential_share"])
        if not 0.0 <= share <= 1.0:
            raise SchemaError(f"{path}:{n}: essential_share must lie in [0, 1]")
        entries.append((code, share, row["note"]))
    return OverrideList(tuple(entries))


@dataclass(frozen=True, eq=False)
class Ratings:
    activities: tuple[str, ...]
    titles: tuple[str, ...]
    votes: np.ndarray


def read_activity_ratings(path) -> Ratings:
    ids, titles, votes = [], [], []
    raters = None
    for n, row in _rows(path, ("activity_id", "title")):
        if raters is None:
            raters = sorted((k for k in row if k.startswith("rater_")), key=lambda k: (len(k), k))
            if not raters:
                raise SchemaError(f"{path}: no rater_* columns")
        if not row["activity_id"]:
            raise SchemaError(f"{path}:{n}: empty activity_id")
        if row["activity_id"] in ids:
            raise SchemaError(f"{path}:{n}: duplicate activity_id {row['activity_id']}")
        ids.append(row["activity_id"])
        titles.append(row["title"])
        votes.append([_flag(path, n, r, row[r]) for r in raters])
    if not ids:
        raise SchemaError(f"{path}: no activities")
    return Ratings(tuple(ids), tuple(titles), np.array(votes, dtype=int))


def read_activity_map(path, scheme: Scheme) -> list[tuple[ClassCode, str]]:
    return [
        (_code(path, n, scheme, row["occupation_code"]), row["activity_id"])
        for n, row in _rows(path, ("occupation_code", "activity_id"))
    ]


def read_employment(path, industry_scheme: Scheme, occupation_scheme: Scheme):
    out = []
    for n, row in _rows(path, ("industry_code", "occupation_code", "employment")):
        value = _number(path, n, "employment", row["employment"])
        if value < 0:
            raise SchemaError(f"{path}:{n}: employment must be nonnegative")
        out.append((
            _code(path, n, industry_scheme, row["industry_code"]),
            _code(path, n, occupation_scheme, row["occupation_code"]),
            value,
        ))
    return out


@dataclass(frozen=True)
class WageRow:
    employment: float
    mean_wage: float
    median_wage: float
    exposure: float


def read_wages(path, scheme: Scheme) -> dict[ClassCode, WageRow]:
    out = {}
    for n, row in _rows(path, ("occupation_code", "employment", "mean_wage", "median_wage")):
        code = _code(path, n, scheme, row["occupation_code"])
        if code in out:
            raise SchemaError(f"{path}:{n}: duplicate occupation {code.digits}")
        rec = WageRow(
            _number(path, n, "employment", row["employment"], optional=True),
            _number(path, n, "mean_wage", row["mean_wage"], optional=True),
            _number(path, n, "median_wage", row["median_wage"], optional=True),
            _number(path, n, "exposure_to_infection", row.get("exposure_to_infection", ""), optional=True),
        )
        for col in ("mean_wage", "median_wage"):
            if getattr(rec, col) <= 0:
                raise SchemaError(f"{path}:{n}: {col} must be positive")
        if not (math.isnan(rec.exposure) or 0 <= rec.exposure <= 100):
            raise SchemaError(f"{path}:{n}: exposure_to_infection must lie in [0, 100]")
        out[code] = rec
    return out


def read_value_added(path, scheme: Scheme) -> dict[ClassCode, tuple[float, float]]:
    out = {}
    for n, row in _rows(path, ("industry_code", "value_added", "gross_output")):
        code = _code(path, n, scheme, row["industry_code"])
        if code in out:
            raise SchemaError(f"{path}:{n}: duplicate industry {code.digits}")
        va = _number(path, n, "value_added", row["value_added"])
        go = _number(path, n, "gross_output", row["gross_output"], optional=True)
        if va < 0:
            raise SchemaError(f"{path}:{n}: value_added must be nonnegative")
        out[code] = (va, go)
    return out
