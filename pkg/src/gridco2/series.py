"""Build and aggregate hourly emission series per zone and method.

An :class:`EmissionSeries` is one zone evaluated under one method: strictly
increasing hourly timestamps with one tCO2 value each.  Aggregations are
calendar-month means (UTC), trailing fixed-window rolling means that emit a
value only once the window is full, and annual totals paired with the
average emission factor (annual emissions over annual generation, where
generation counts every category including non-emitting).

Differences between two methods are taken on monthly means by default,
matching how method disagreement is usually inspected; hourly differencing
is available for finer-grained analysis.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from datetime import datetime
from typing import Iterable, Sequence

from .errors import AlignmentError
from .fuels import FuelRegistry
from .ingest import GenerationRecord
from .methods import MethodConfig, MethodEstimator, MethodId

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class EmissionSeries:
    """Hourly emissions of one zone under one method."""

    zone: str
    method: MethodId
    times: tuple[datetime, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.times) != len(self.values):
            raise ValueError("times and values must have equal length")
        for a, b in zip(self.times, self.times[1:]):
            if a >= b:
                raise ValueError("times must be strictly increasing")

    def __len__(self) -> int:
        return len(self.times)

    def points(self) -> Iterable[tuple[datetime, float]]:
        return zip(self.times, self.values)


@dataclass(frozen=True)
class AnnualSummary:
    """One zone-year: emission total, generation total, and their ratio.

    ``aef`` is ``None`` for a year without generation; a year with
    generation but no emissions has ``aef`` 0.
    """

    zone: str
    method: MethodId
    year: int
    total_emissions: float
    total_generation: float
    aef: float | None


@dataclass(frozen=True)
class DifferenceSeries:
    """Bucketwise differences ``method_i - method_j`` for one zone.

    ``keys`` are (year, month) pairs for monthly buckets or datetimes for
    hourly ones.
    """

    zone: str
    method_i: MethodId
    method_j: MethodId
    keys: tuple
    values: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.keys)


def hourly_series(
    records: Sequence[GenerationRecord],
    config: MethodConfig,
    registry: FuelRegistry,
    zone: str | None = None,
) -> EmissionSeries:
    """Evaluate one method over one zone's records, hour by hour.

    With ``zone`` omitted the records must all belong to a single zone.
    Hours with only non-emitting generation yield 0; hours absent from the
    records stay absent.
    """
    if zone is not None:
        records = [r for r in records if r.zone == zone]
    else:
        zones = {r.zone for r in records}
        if len(zones) > 1:
            raise ValueError(
                f"records span several zones ({', '.join(sorted(zones))}); pass zone="
            )
        zone = zones.pop() if zones else ""

    estimator = MethodEstimator(config, registry)
    times: list[datetime] = []
    values: list[float] = []
    ordered = sorted(records, key=lambda r: r.timestamp)
    for stamp, group_iter in itertools.groupby(ordered, key=lambda r: r.timestamp):
        group = list(group_iter)
        by_fuel = {r.fuel: r.generation_mwh for r in group if r.fuel is not None}
        total = sum(r.generation_mwh for r in group)
        times.append(stamp)
        values.append(estimator.hour(by_fuel, total))
    return EmissionSeries(zone=zone, method=config.id, times=tuple(times), values=tuple(values))


def monthly_mean(series: EmissionSeries) -> list[tuple[tuple[int, int], float]]:
    """Mean hourly emissions per UTC calendar month, in time order.

    Months with no points are omitted, never imputed.
    """
    if not series.times:
        raise ValueError("cannot aggregate an empty series")
    out = []
    for key, group in itertools.groupby(
        series.points(), key=lambda p: (p[0].year, p[0].month)
    ):
        values = [v for _, v in group]
        out.append((key, sum(values) / len(values)))
    return out


def rolling_mean(series: EmissionSeries, window: int = 720) -> EmissionSeries:
    """Trailing moving average over a fixed number of points.

    The first value appears once ``window`` points exist, so the output is
    ``len(series) - window + 1`` long (empty when the series is shorter than
    the window).
    """
    if window < 1:
        raise ValueError(f"window must be at least 1, got {window}")
    n = len(series)
    if n < window:
        return EmissionSeries(series.zone, series.method, (), ())
    means = []
    acc = sum(series.values[:window])
    means.append(acc / window)
    for i in range(window, n):
        acc += series.values[i] - series.values[i - window]
        means.append(acc / window)
    return EmissionSeries(
        zone=series.zone,
        method=series.method,
        times=series.times[window - 1 :],
        values=tuple(means),
    )


def annual_summary(
    series: EmissionSeries, records: Sequence[GenerationRecord]
) -> list[AnnualSummary]:
    """Annual emission and generation totals with the average emission factor.

    Generation sums every record of the series' zone, non-emitting included.
    Years are those present in the series.
    """
    generation_by_year: dict[int, float] = {}
    for record in records:
        if record.zone != series.zone:
            continue
        year = record.timestamp.year
        generation_by_year[year] = generation_by_year.get(year, 0.0) + record.generation_mwh

    emissions_by_year: dict[int, float] = {}
    for stamp, value in series.points():
        emissions_by_year[stamp.year] = emissions_by_year.get(stamp.year, 0.0) + value

    out = []
    for year in sorted(emissions_by_year):
        emissions = emissions_by_year[year]
        generation = generation_by_year.get(year, 0.0)
        out.append(
            AnnualSummary(
                zone=series.zone,
                method=series.method,
                year=year,
                total_emissions=emissions,
                total_generation=generation,
                aef=aef(emissions, generation),
            )
        )
    return out


def aef(total_emissions: float, total_generation: float) -> float | None:
    """Average emission factor tCO2/MWh; ``None`` when there is no generation."""
    if total_generation <= 0:
        return None
    return total_emissions / total_generation


def difference_series(
    series_i: EmissionSeries,
    series_j: EmissionSeries,
    bucket: str = "monthly",
) -> DifferenceSeries:
    """Bucketwise ``series_i - series_j`` over their common time buckets.

    ``bucket`` is ``monthly`` (differences of calendar-month means, the
    default) or ``hourly``.  Buckets present on only one side are dropped
    with a warning; no common buckets is an alignment error.
    """
    if series_i.zone != series_j.zone:
        raise AlignmentError(
            f"cannot difference series of different zones: "
            f"{series_i.zone} vs {series_j.zone}"
        )
    if bucket == "monthly":
        left = dict(monthly_mean(series_i))
        right = dict(monthly_mean(series_j))
    elif bucket == "hourly":
        left = dict(series_i.points())
        right = dict(series_j.points())
    else:
        raise ValueError(f"bucket must be monthly or hourly, got {bucket!r}")

    common = [k for k in left if k in right]
    dropped = (len(left) - len(common)) + (len(right) - len(common))
    if dropped:
        log.warning(
            "%d %s bucket(s) present on only one side were dropped", dropped, bucket
        )
    if not common:
        raise AlignmentError("series share no common time buckets")
    common.sort()
    return DifferenceSeries(
        zone=series_i.zone,
        method_i=series_i.method,
        method_j=series_j.method,
        keys=tuple(common),
        values=tuple(left[k] - right[k] for k in common),
    )
