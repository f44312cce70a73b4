"""Bundled and user-supplied sector demand scenarios.

Scenario files are CSV with columns ``sector_code, shock_pct, postponed,
source``. Sector codes are NAICS prefixes for the CBO tables; the other
bundled tables use spending or activity categories, which reach NAICS
through an editable ``category, naics_prefix`` mapping file.
"""

from __future__ import annotations

import csv
import io
import warnings
from collections import defaultdict
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import IncompleteCoverage, IncompleteCoverageWarning, MalformedScenario, UnknownScenario

COLUMNS = ("sector_code", "shock_pct", "postponed", "source")
BUNDLED = ("cbo_severe", "cbo_mild", "keogh_brown", "oecd_isic", "oecd_coicop", "muellbauer")

NAICS_SECTORS = (
    "11", "21", "22", "23", "31", "32", "33", "42", "44", "45", "48", "49",
    "51", "52", "53", "54", "55", "56", "61", "62", "71", "72", "81", "92",
)

_POSTPONED = {"": None, "na": None, "yes": True, "no": False}


@dataclass(frozen=True)
class ScenarioEntry:
    sector: str
    shock: float
    postponed: bool | None = None
    source: str = ""


@dataclass(frozen=True)
class DemandScenario:
    name: str
    entries: tuple[ScenarioEntry, ...]
    mapping: dict[str, tuple[str, ...]] | None = field(default=None, compare=False)

    def __post_init__(self):
        seen = set()
        for entry in self.entries:
            if not -1.0 <= entry.shock <= 1.0:
                raise MalformedScenario(f"{self.name}: shock for {entry.sector!r} outside [-1, 1]")
            if entry.sector in seen:
                raise MalformedScenario(f"{self.name}: duplicate sector {entry.sector!r}")
            seen.add(entry.sector)

    @property
    def approximate(self) -> bool:
        """True when shocks reach NAICS only through a hand-made category mapping."""
        return self.mapping is not None

    def shock(self, sector: str) -> float:
        for entry in self.entries:
            if entry.sector == sector:
                return entry.shock
        raise KeyError(sector)

    def sector_shocks(self) -> dict[str, float]:
        """NAICS prefix -> shock.

        With a category mapping, a prefix fed by several categories takes
        their mean shock.
        """
        if self.mapping is None:
            return {e.sector: e.shock for e in self.entries}
        pooled = defaultdict(list)
        for entry in self.entries:
            for prefix in self.mapping.get(entry.sector, ()):
                pooled[prefix].append(entry.shock)
        return {p: sum(v) / len(v) for p, v in sorted(pooled.items())}

    def uncovered_sectors(self) -> tuple[str, ...]:
        prefixes = self.sector_shocks()
        return tuple(s for s in NAICS_SECTORS if not any(s.startswith(p) for p in prefixes))


def _format_pct(fraction: float) -> str:
    pct = round(fraction * 100.0, 6) + 0.0
    return str(int(pct)) if pct == int(pct) else repr(pct)


def parse_scenario(text: str, name: str) -> DemandScenario:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise MalformedScenario(f"{name}: empty scenario file") from None
    if tuple(h.strip() for h in header) != COLUMNS:
        raise MalformedScenario(f"{name}: header must be {','.join(COLUMNS)}, got {','.join(header)}")
    entries = []
    for lineno, row in enumerate(reader, start=2):
        if not row or not any(cell.strip() for cell in row):
            continue
        if len(row) != len(COLUMNS):
            raise MalformedScenario(f"{name}:{lineno}: expected {len(COLUMNS)} fields, got {len(row)}")
        sector, pct, postponed, source = (cell.strip() for cell in row)
        if not sector:
            raise MalformedScenario(f"{name}:{lineno}: empty sector code")
        try:
            shock = float(pct) / 100.0
        except ValueError:
            raise MalformedScenario(f"{name}:{lineno}: shock_pct {pct!r} is not a number") from None
        if postponed.lower() not in _POSTPONED:
            raise MalformedScenario(f"{name}:{lineno}: postponed must be yes/no/NA, got {postponed!r}")
        entries.append(ScenarioEntry(sector, shock, _POSTPONED[postponed.lower()], source))
    if not entries:
        raise MalformedScenario(f"{name}: no scenario rows")
    return DemandScenario(name, tuple(entries))


def parse_mapping(text: str) -> dict[str, tuple[str, ...]]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or set(reader.fieldnames) != {"category", "naics_prefix"}:
        raise MalformedScenario("mapping file needs columns category,naics_prefix")
    out = defaultdict(list)
    for row in reader:
        prefix = row["naics_prefix"].strip()
        if not prefix.isdigit():
            raise MalformedScenario(f"mapping prefix {prefix!r} is not a NAICS code")
        out[row["category"].strip()].append(prefix)
    return {k: tuple(v) for k, v in out.items()}


def serialize(scenario: DemandScenario) -> str:
    """Canonical CSV text of a scenario (the bundled files are stored in this form)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for e in scenario.entries:
        flag = "NA" if e.postponed is None else ("yes" if e.postponed else "no")
        writer.writerow([e.sector, _format_pct(e.shock), flag, e.source])
    return buf.getvalue()


def _bundled_text(filename: str) -> str:
    return resources.files("shockgrid").joinpath("data", filename).read_text(encoding="utf-8")


def load_scenario(name_or_path: str | Path, mapping: str | Path | None = None) -> DemandScenario:
    """Load a bundled scenario by name, or a scenario CSV from disk.

    Non-numeric sector codes need a category mapping: bundled tables ship
    one, files on disk take ``mapping`` (or a ``<stem>_mapping.csv``
    sitting next to them).
    """
    key = str(name_or_path)
    if key in BUNDLED:
        name = key
        scenario = parse_scenario(_bundled_text(f"{key}.csv"), key)
        map_text = _bundled_text(f"{key}_mapping.csv") if not key.startswith("cbo_") else None
    else:
        path = Path(name_or_path)
        if not path.is_file():
            raise UnknownScenario(f"no bundled scenario or file named {key!r}")
        name = path.stem
        scenario = parse_scenario(path.read_text(encoding="utf-8"), name)
        map_text = None
        sibling = path.with_name(f"{path.stem}_mapping.csv")
        if mapping is None and sibling.is_file():
            mapping = sibling
    if mapping is not None:
        map_text = Path(mapping).read_text(encoding="utf-8")

    if map_text is not None:
        scenario = DemandScenario(name, scenario.entries, parse_mapping(map_text))
    elif not all(e.sector.isdigit() for e in scenario.entries):
        raise MalformedScenario(f"{name}: non-NAICS sector codes need a category mapping file")

    missing = scenario.uncovered_sectors()
    if missing:
        if name.startswith("cbo_"):
            raise IncompleteCoverage(f"{name}: no shock for NAICS sectors {', '.join(missing)}")
        warnings.warn(
            f"{name}: NAICS sectors without a shock: {', '.join(missing)}",
            IncompleteCoverageWarning,
            stacklevel=2,
        )
    return scenario
