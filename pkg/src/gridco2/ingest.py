"""Load hourly zonal generation data from normalized CSV files.

The input schema is one row per (timestamp, zone, fuel) with the header
``timestamp,zone,fuel,generation_mwh``.  The fuel column accepts either
normalized category names (``fossil_coal``, ``derived_gas``, ``natural_gas``,
``fossil_oil``, ``non_emitting``) or raw ENTSO-E production-type labels,
which are mapped onto the categories here.  Non-emitting generation is kept:
it contributes nothing to emissions but counts toward the generation totals
that average emission factors divide by.

Timestamps are normalized to UTC and must land on whole hours.  Coverage
checking distinguishes *known* gaps (documented unavailable stretches, by
default the South zone 2016-2018 and Calabria 2016-2020) from unexpected
ones, which a policy can skip, zero-fill, or forbid.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass
from datetime import date, datetime, timedelta, timezone
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ConflictError, CoverageError, ParseError
from .fuels import FuelKind

log = logging.getLogger(__name__)

HOUR = timedelta(hours=1)

#: Canonical names of the seven Italian market zones.  Any other nonempty
#: name is accepted as a custom zone and passed through untouched.
ITALIAN_ZONES = (
    "North",
    "CentreNorth",
    "CentreSouth",
    "South",
    "Calabria",
    "Sicily",
    "Sardinia",
)

# Accepts spelling variants and the Italian market codes.
_ZONE_ALIASES = {
    "north": "North",
    "nord": "North",
    "centrenorth": "CentreNorth",
    "cnor": "CentreNorth",
    "centresouth": "CentreSouth",
    "csud": "CentreSouth",
    "south": "South",
    "sud": "South",
    "calabria": "Calabria",
    "cala": "Calabria",
    "sicily": "Sicily",
    "sici": "Sicily",
    "sardinia": "Sardinia",
    "sard": "Sardinia",
}

# ENTSO-E production types -> fuel category (None = non-emitting).
_PRODUCTION_TYPE_MAP: dict[str, FuelKind | None] = {
    "fossil hard coal": FuelKind.FOSSIL_COAL,
    "fossil brown coal/lignite": FuelKind.FOSSIL_COAL,
    "fossil coal-derived gas": FuelKind.DERIVED_GAS,
    "fossil gas": FuelKind.NATURAL_GAS,
    "fossil oil": FuelKind.FOSSIL_OIL,
    "fossil oil shale": FuelKind.FOSSIL_OIL,
    # Everything below is excluded from emission math but kept in totals.
    "fossil peat": None,
    "biomass": None,
    "geothermal": None,
    "hydro pumped storage": None,
    "hydro run-of-river and poundage": None,
    "hydro water reservoir": None,
    "marine": None,
    "nuclear": None,
    "other": None,
    "other renewable": None,
    "solar": None,
    "waste": None,
    "wind offshore": None,
    "wind onshore": None,
    # Normalized category names are accepted as-is.
    "fossil_coal": FuelKind.FOSSIL_COAL,
    "derived_gas": FuelKind.DERIVED_GAS,
    "natural_gas": FuelKind.NATURAL_GAS,
    "fossil_oil": FuelKind.FOSSIL_OIL,
    "non_emitting": None,
}

EXPECTED_HEADER = ("timestamp", "zone", "fuel", "generation_mwh")


def canonical_zone(name: str) -> str:
    """Normalize a zone name; unknown nonempty names pass through as custom."""
    cleaned = name.strip()
    if not cleaned:
        raise ValueError("zone name must not be empty")
    key = cleaned.lower().replace("-", "").replace("_", "").replace(" ", "")
    return _ZONE_ALIASES.get(key, cleaned)


def map_production_type(label: str, strict: bool = True) -> FuelKind | None:
    """Map a fuel label onto a category; ``None`` means non-emitting.

    Unknown labels raise when ``strict`` and otherwise fall back to
    non-emitting with a logged warning, so totals stay complete.
    """
    key = label.strip().lower()
    if key in _PRODUCTION_TYPE_MAP:
        return _PRODUCTION_TYPE_MAP[key]
    if strict:
        raise ParseError(f"unknown fuel label {label!r}")
    log.warning("unknown fuel label %r treated as non-emitting", label)
    return None


@dataclass(frozen=True)
class GenerationRecord:
    """One hour of one zone's generation in one fuel category.

    ``fuel`` is ``None`` for the non-emitting bucket (renewables, hydro,
    nuclear, and anything else outside the four emitting categories).
    """

    zone: str
    timestamp: datetime
    fuel: FuelKind | None
    generation_mwh: float

    def __post_init__(self):
        if self.generation_mwh < 0:
            raise ValueError(f"generation must be nonnegative, got {self.generation_mwh}")

    @property
    def fuel_name(self) -> str:
        return self.fuel.value if self.fuel is not None else "non_emitting"


def _fuel_sort_key(fuel: FuelKind | None) -> int:
    return list(FuelKind).index(fuel) if fuel is not None else len(FuelKind)


def _record_sort_key(record: GenerationRecord):
    return (record.zone, record.timestamp, _fuel_sort_key(record.fuel))


def parse_timestamp(raw: str, line: int | None = None) -> datetime:
    """Parse an ISO 8601 timestamp, normalize to UTC, require a whole hour.

    Naive timestamps are taken as UTC.
    """
    text = raw.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    try:
        stamp = datetime.fromisoformat(text)
    except ValueError:
        raise ParseError(f"bad timestamp {raw!r}", line) from None
    if stamp.tzinfo is None:
        stamp = stamp.replace(tzinfo=timezone.utc)
    stamp = stamp.astimezone(timezone.utc)
    if stamp.minute or stamp.second or stamp.microsecond:
        raise ParseError(f"timestamp {raw!r} is not aligned to a whole hour", line)
    return stamp


def parse_generation_file(
    path: str | Path, strict_labels: bool = True
) -> list[GenerationRecord]:
    """Parse one CSV file into records sorted by (zone, timestamp, fuel).

    Duplicate rows for the same (timestamp, zone, fuel label) are collapsed
    when their values agree and rejected when they differ.  Rows whose labels
    map to the same category are summed.
    """
    path = Path(path)
    try:
        fh = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path} is empty; expected header "
                             f"{','.join(EXPECTED_HEADER)}", 1) from None
        columns = [h.strip().lower() for h in header]
        missing = [c for c in EXPECTED_HEADER if c not in columns]
        if missing:
            raise ParseError(
                f"{path} is missing required columns: {', '.join(missing)}", 1
            )
        index = {name: columns.index(name) for name in EXPECTED_HEADER}

        seen: dict[tuple[datetime, str, str], float] = {}
        mapped: dict[tuple[datetime, str, FuelKind | None], float] = {}
        for line, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(columns):
                raise ParseError(f"expected {len(columns)} fields, got {len(row)}", line)
            stamp = parse_timestamp(row[index["timestamp"]], line)
            try:
                zone = canonical_zone(row[index["zone"]])
            except ValueError as exc:
                raise ParseError(str(exc), line) from None
            label = row[index["fuel"]].strip()
            raw_value = row[index["generation_mwh"]].strip()
            try:
                value = float(raw_value)
            except ValueError:
                raise ParseError(f"bad generation value {raw_value!r}", line) from None
            if value < 0:
                raise ParseError(f"generation must be nonnegative, got {value}", line)

            raw_key = (stamp, zone, label.lower())
            if raw_key in seen:
                if seen[raw_key] != value:
                    raise ConflictError(
                        f"line {line}: conflicting duplicate for {stamp.isoformat()} "
                        f"{zone} {label!r}: {seen[raw_key]} vs {value}"
                    )
                continue  # equal duplicate, collapse
            seen[raw_key] = value

            try:
                fuel = map_production_type(label, strict=strict_labels)
            except ParseError as exc:
                raise ParseError(str(exc), line) from None
            key = (stamp, zone, fuel)
            mapped[key] = mapped.get(key, 0.0) + value

    records = [
        GenerationRecord(zone=zone, timestamp=stamp, fuel=fuel, generation_mwh=value)
        for (stamp, zone, fuel), value in mapped.items()
    ]
    records.sort(key=_record_sort_key)
    return records


def merge_records(batches: Iterable[Sequence[GenerationRecord]]) -> list[GenerationRecord]:
    """Merge record batches from several files under the same duplicate rules."""
    merged: dict[tuple[str, datetime, FuelKind | None], float] = {}
    for batch in batches:
        for record in batch:
            key = (record.zone, record.timestamp, record.fuel)
            if key in merged and merged[key] != record.generation_mwh:
                raise ConflictError(
                    f"conflicting duplicate across files for {record.timestamp.isoformat()} "
                    f"{record.zone} {record.fuel_name}: "
                    f"{merged[key]} vs {record.generation_mwh}"
                )
            merged[key] = record.generation_mwh
    records = [
        GenerationRecord(zone=zone, timestamp=stamp, fuel=fuel, generation_mwh=value)
        for (zone, stamp, fuel), value in merged.items()
    ]
    records.sort(key=_record_sort_key)
    return records


def write_generation_csv(records: Iterable[GenerationRecord], path: str | Path) -> None:
    """Write records back out in the normalized schema (round-trip safe)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(EXPECTED_HEADER)
        for record in sorted(records, key=_record_sort_key):
            writer.writerow(
                [
                    record.timestamp.strftime("%Y-%m-%dT%H:%M:%SZ"),
                    record.zone,
                    record.fuel_name,
                    repr(record.generation_mwh),
                ]
            )


# ---------------------------------------------------------------------------
# Coverage.


@dataclass(frozen=True)
class KnownGap:
    """A documented unavailable stretch for one zone, inclusive date bounds."""

    zone: str
    start: date
    end: date

    def covers(self, stamp: datetime) -> bool:
        return self.start <= stamp.date() <= self.end


#: Stretches documented as unavailable in the underlying dataset.
DEFAULT_KNOWN_GAPS = (
    KnownGap("South", date(2016, 1, 1), date(2018, 12, 31)),
    KnownGap("Calabria", date(2016, 1, 1), date(2020, 12, 31)),
)


@dataclass(frozen=True)
class CoveragePolicy:
    """What to do about unexpected missing hours.

    ``on_missing_hour`` is one of ``skip`` (leave them absent), ``zero-fill``
    (insert a zero-generation marker record), or ``error``.  Hours inside a
    known gap are never filled and never reported as unexpected.
    """

    on_missing_hour: str = "skip"
    known_gaps: tuple[KnownGap, ...] = DEFAULT_KNOWN_GAPS

    def __post_init__(self):
        if self.on_missing_hour not in ("skip", "zero-fill", "error"):
            raise ValueError(
                f"on_missing_hour must be skip, zero-fill, or error, "
                f"got {self.on_missing_hour!r}"
            )


@dataclass(frozen=True)
class Gap:
    """A contiguous run of unexpected missing hours in one zone."""

    zone: str
    start: datetime
    end: datetime  # inclusive, last missing hour
    hours_missing: int

    def to_json_line(self) -> str:
        return json.dumps(
            {
                "zone": self.zone,
                "start": self.start.strftime("%Y-%m-%dT%H:%M:%SZ"),
                "end": self.end.strftime("%Y-%m-%dT%H:%M:%SZ"),
                "hours_missing": self.hours_missing,
            },
            sort_keys=True,
        )


def find_gaps(
    records: Sequence[GenerationRecord],
    known_gaps: Sequence[KnownGap] = DEFAULT_KNOWN_GAPS,
    span: tuple[datetime, datetime] | None = None,
) -> list[Gap]:
    """Unexpected missing hours per zone, merged into contiguous runs.

    The scan runs from each zone's first to last observed hour unless an
    explicit half-open ``span`` is given.
    """
    by_zone: dict[str, set[datetime]] = {}
    for record in records:
        by_zone.setdefault(record.zone, set()).add(record.timestamp)

    gaps = []
    for zone in sorted(by_zone):
        observed = by_zone[zone]
        if span is not None:
            start, stop = span
        else:
            start, stop = min(observed), max(observed) + HOUR
        known = [g for g in known_gaps if g.zone == zone]
        run_start = None
        run_hours = 0
        stamp = start
        while stamp < stop:
            missing = stamp not in observed and not any(g.covers(stamp) for g in known)
            if missing:
                if run_start is None:
                    run_start = stamp
                run_hours += 1
            elif run_start is not None:
                gaps.append(Gap(zone, run_start, stamp - HOUR, run_hours))
                run_start, run_hours = None, 0
            stamp += HOUR
        if run_start is not None:
            gaps.append(Gap(zone, run_start, stamp - HOUR, run_hours))
    return gaps


def apply_coverage(
    records: Sequence[GenerationRecord],
    policy: CoveragePolicy = CoveragePolicy(),
    span: tuple[datetime, datetime] | None = None,
) -> tuple[list[GenerationRecord], list[Gap]]:
    """Enforce a coverage policy; returns (records, unexpected gaps).

    ``zero-fill`` inserts one non-emitting zero-generation record per
    unexpected missing hour so the hour exists downstream; known gaps are
    left absent, so aggregates over them use observed hours only.
    """
    gaps = find_gaps(records, policy.known_gaps, span)
    if not gaps:
        return list(records), gaps
    if policy.on_missing_hour == "error":
        worst = max(gaps, key=lambda g: g.hours_missing)
        raise CoverageError(
            f"{sum(g.hours_missing for g in gaps)} unexpected missing hours in "
            f"{len(gaps)} gaps; largest: {worst.zone} "
            f"{worst.start.isoformat()}..{worst.end.isoformat()}"
        )
    if policy.on_missing_hour == "skip":
        return list(records), gaps

    filled = list(records)
    for gap in gaps:
        stamp = gap.start
        while stamp <= gap.end:
            filled.append(
                GenerationRecord(zone=gap.zone, timestamp=stamp, fuel=None, generation_mwh=0.0)
            )
            stamp += HOUR
    filled.sort(key=_record_sort_key)
    return filled, gaps


def filter_records(
    records: Iterable[GenerationRecord],
    zones: Sequence[str] | None = None,
    start: datetime | None = None,
    stop: datetime | None = None,
) -> list[GenerationRecord]:
    """Restrict records to zones and a half-open [start, stop) window."""
    wanted = {canonical_zone(z) for z in zones} if zones else None
    out = []
    for record in records:
        if wanted is not None and record.zone not in wanted:
            continue
        if start is not None and record.timestamp < start:
            continue
        if stop is not None and record.timestamp >= stop:
            continue
        out.append(record)
    return out


def zones_in(records: Iterable[GenerationRecord]) -> list[str]:
    """Zone names present in the records: known zones first, customs after."""
    present = {record.zone for record in records}
    ordered = [z for z in ITALIAN_ZONES if z in present]
    ordered += sorted(present - set(ITALIAN_ZONES))
    return ordered
