"""Classification codes, crosswalks and incidence-matrix normalization.

Codes are hierarchical strings ("325" contains "325130"). A crosswalk links
coarse analysis industries to fine codes; the resulting incidence matrix is
what essential scores are averaged over.
"""

from __future__ import annotations

import bisect
import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import MalformedCode, NegativeEntry, SchemeMismatch, UnknownCode


class Scheme(str, enum.Enum):
    NAICS = "NAICS"
    NACE = "NACE"
    SOC = "SOC"
    ONET_SOC = "ONET_SOC"
    BLS_IO = "BLS_IO"
    CUSTOM = "CUSTOM"


# schemes whose codes may contain letters (NACE sections, BLS custom labels)
_ALPHANUMERIC = {Scheme.NACE, Scheme.BLS_IO, Scheme.CUSTOM}
_SEPARATORS = re.compile(r"[-.]")
_DIGITS = re.compile(r"^[0-9]{2,8}$")
_ALNUM = re.compile(r"^[0-9A-Za-z]{2,8}$")


@dataclass(frozen=True)
class ClassCode:
    scheme: Scheme
    digits: str
    title: str | None = field(default=None, compare=False)

    def contains(self, other: "ClassCode") -> bool:
        return self.scheme == other.scheme and other.digits.startswith(self.digits)

    @property
    def sort_key(self) -> tuple[str, str]:
        return (self.scheme.value, self.digits)

    def __lt__(self, other: "ClassCode") -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        return self.digits


def parse_scheme(raw: str | Scheme) -> Scheme:
    if isinstance(raw, Scheme):
        return raw
    try:
        return Scheme(raw.strip().upper())
    except ValueError:
        raise MalformedCode(f"unknown classification scheme {raw!r}") from None


def parse_code(scheme: Scheme | str, raw: str, title: str | None = None) -> ClassCode:
    """Validate ``raw`` and return it as a code of ``scheme``.

    Hyphens and dots are presentation-only and are stripped, so SOC
    "11-1011" is stored as "111011".
    """
    scheme = parse_scheme(scheme)
    if raw is None:
        raise MalformedCode("empty code")
    text = _SEPARATORS.sub("", str(raw).strip())
    if not text:
        raise MalformedCode("empty code")
    pattern = _ALNUM if scheme in _ALPHANUMERIC else _DIGITS
    if not pattern.match(text):
        raise MalformedCode(f"illegal {scheme.value} code {raw!r}")
    if scheme in _ALPHANUMERIC:
        text = text.upper()
    return ClassCode(scheme, text, title)


def sorted_codes(codes: Iterable[ClassCode]) -> tuple[ClassCode, ...]:
    """Deduplicate and order codes by (scheme, digits)."""
    return tuple(sorted(set(codes), key=lambda c: c.sort_key))


def expand_prefix(coarse: ClassCode, universe: Sequence[ClassCode]) -> list[ClassCode]:
    """Every code in ``universe`` that has ``coarse`` as a prefix."""
    for code in universe:
        if code.scheme != coarse.scheme:
            raise SchemeMismatch(
                f"{code.scheme.value} code {code.digits} in a {coarse.scheme.value} universe"
            )
    return [code for code in universe if code.digits.startswith(coarse.digits)]


class PrefixIndex:
    """Sorted per-scheme digits for fast prefix lookups over a fixed universe."""

    def __init__(self, universe: Iterable[ClassCode]):
        by_scheme: dict[Scheme, list[ClassCode]] = {}
        for code in universe:
            by_scheme.setdefault(code.scheme, []).append(code)
        self._codes = {s: sorted(v, key=lambda c: c.digits) for s, v in by_scheme.items()}
        self._keys = {s: [c.digits for c in v] for s, v in self._codes.items()}

    def matches(self, coarse: ClassCode) -> list[ClassCode]:
        keys = self._keys.get(coarse.scheme, [])
        codes = self._codes.get(coarse.scheme, [])
        out = []
        i = bisect.bisect_left(keys, coarse.digits)
        while i < len(keys) and keys[i].startswith(coarse.digits):
            out.append(codes[i])
            i += 1
        return out


@dataclass(frozen=True)
class Concordance:
    """Incidence between analysis industries (rows) and fine codes (cols)."""

    rows: tuple[ClassCode, ...]
    cols: tuple[ClassCode, ...]
    links: frozenset[tuple[int, int]]

    def __post_init__(self):
        n, k = len(self.rows), len(self.cols)
        for r, c in self.links:
            if not (0 <= r < n and 0 <= c < k):
                raise IndexError(f"link {(r, c)} outside a {n}x{k} concordance")

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.cols))

    @property
    def empty_rows(self) -> tuple[ClassCode, ...]:
        linked = {r for r, _ in self.links}
        return tuple(code for i, code in enumerate(self.rows) if i not in linked)

    def matrix(self) -> np.ndarray:
        out = np.zeros(self.shape)
        for r, c in self.links:
            out[r, c] = 1.0
        return out


def build_concordance(
    rows: Iterable[ClassCode],
    fine: Iterable[ClassCode],
    crosswalk: Iterable[tuple[ClassCode, ClassCode]],
) -> Concordance:
    """Build the incidence matrix linking ``rows`` to ``fine`` codes.

    Either endpoint of a crosswalk pair may be a coarse code; it is expanded
    to every matching code on its side. Rows left without any link are kept
    and surface through ``Concordance.empty_rows``.
    """
    row_codes = sorted_codes(rows)
    col_codes = sorted_codes(fine)
    row_idx = {c: i for i, c in enumerate(row_codes)}
    col_idx = {c: i for i, c in enumerate(col_codes)}

    row_index, col_index = PrefixIndex(row_codes), PrefixIndex(col_codes)
    links = set()
    for src, dst in crosswalk:
        srcs = row_index.matches(src)
        if not srcs:
            raise UnknownCode(f"crosswalk source {src.scheme.value}:{src.digits} matches no industry row")
        dsts = col_index.matches(dst)
        if not dsts:
            raise UnknownCode(f"crosswalk target {dst.scheme.value}:{dst.digits} matches no fine code")
        for s in srcs:
            for d in dsts:
                links.add((row_idx[s], col_idx[d]))
    return Concordance(row_codes, col_codes, frozenset(links))


@dataclass(frozen=True)
class EssentialList:
    """Binary essential flags, possibly given at a coarser level than the fine codes."""

    entries: tuple[tuple[ClassCode, int], ...]

    def __post_init__(self):
        seen = set()
        for code, flag in self.entries:
            if flag not in (0, 1) or isinstance(flag, bool):
                raise ValueError(f"essential flag for {code.digits} must be 0 or 1, got {flag!r}")
            if code in seen:
                raise ValueError(f"duplicate essential-list entry {code.scheme.value}:{code.digits}")
            seen.add(code)

    def resolve(self, fine: Sequence[ClassCode]) -> tuple[np.ndarray, tuple[ClassCode, ...]]:
        """Vector ``u`` over ``fine`` plus the fine codes no entry covered.

        The longest matching entry wins, so a 6-digit entry overrides the
        2-digit section it belongs to. Uncovered codes count as non-essential.
        """
        flags = dict(self.entries)
        u = np.zeros(len(fine))
        missing = []
        for i, f in enumerate(fine):
            for cut in range(len(f.digits), 0, -1):
                hit = flags.get(ClassCode(f.scheme, f.digits[:cut]))
                if hit is not None:
                    u[i] = hit
                    break
            else:
                missing.append(f)
        return u, tuple(missing)


@dataclass(frozen=True)
class OverrideList:
    entries: tuple[tuple[ClassCode, float, str], ...] = ()

    def __post_init__(self):
        for code, share, _ in self.entries:
            if not 0.0 <= share <= 1.0:
                raise ValueError(f"override for {code.digits} must lie in [0, 1], got {share}")


@dataclass(frozen=True)
class OverrideRecord:
    code: ClassCode
    old: float
    new: float
    note: str


def apply_overrides(
    base_shares: np.ndarray,
    overrides: OverrideList,
    industries: Sequence[ClassCode],
) -> tuple[np.ndarray, list[OverrideRecord]]:
    """Replace essential shares by hand-edited values.

    Coarse override codes apply to every matching industry; more specific
    overrides are applied last so they take precedence.
    """
    base = np.asarray(base_shares, dtype=float)
    if base.shape != (len(industries),):
        raise ValueError(f"{base.shape[0]} shares for {len(industries)} industries")
    out = base.copy()
    index = {c: i for i, c in enumerate(industries)}
    lookup = PrefixIndex(industries)
    audit = []
    for code, share, note in sorted(overrides.entries, key=lambda e: len(e[0].digits)):
        targets = lookup.matches(code)
        if not targets:
            raise UnknownCode(f"override {code.scheme.value}:{code.digits} matches no industry")
        for target in targets:
            i = index[target]
            audit.append(OverrideRecord(target, float(base[i]), float(share), note))
            out[i] = share
    return out, audit


def _check_nonnegative(matrix) -> np.ndarray:
    arr = np.asarray(matrix, dtype=float)
    if arr.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    if (arr < 0).any():
        raise NegativeEntry("incidence matrices must be nonnegative")
    return arr


def row_normalize(matrix) -> tuple[np.ndarray, tuple[int, ...]]:
    """Scale each row to sum to one; returns the matrix and the all-zero row indices."""
    arr = _check_nonnegative(matrix)
    sums = arr.sum(axis=1)
    zero = tuple(int(i) for i in np.flatnonzero(sums == 0))
    out = np.divide(arr, sums[:, None], out=np.zeros_like(arr), where=sums[:, None] > 0)
    return out, zero


def column_normalize(matrix) -> tuple[np.ndarray, tuple[int, ...]]:
    """Scale each column to sum to one; returns the matrix and the all-zero column indices."""
    out, zero = row_normalize(_check_nonnegative(matrix).T)
    return out.T, zero
