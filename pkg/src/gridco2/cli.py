"""Command line entry point.

Four verbs share one input pipeline (parse, merge, filter, coverage):

    compute   hourly, monthly, rolling, and annual emission outputs
    compare   pairwise method differences with non-rejection intervals
    report    one summary row per zone, year, and method
    validate  parse inputs and report coverage gaps

Exit codes: 0 success, 2 configuration error, 3 data or validation error,
4 statistical degeneracy.  Outputs are plain CSV/JSON (and optional SVG
charts) written with stable ordering and formatting, so repeated runs over
the same inputs are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from datetime import datetime, timezone
from itertools import combinations
from pathlib import Path

from .errors import ConfigError, DataError, DegenerateVarianceError
from .fuels import FuelKind, FuelRegistry
from .ingest import (
    CoveragePolicy,
    GenerationRecord,
    apply_coverage,
    filter_records,
    find_gaps,
    merge_records,
    parse_generation_file,
    parse_timestamp,
    zones_in,
)
from .methods import MethodConfig, MethodId, PIPELINE_METHODS
from .series import (
    EmissionSeries,
    annual_summary,
    difference_series,
    hourly_series,
    monthly_mean,
    rolling_mean,
)
from .stats import mean_difference_report
from .svgplot import svg_line_chart

DEFAULT_METHODS = "M1,M2,M3,M4,M5"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except DegenerateVarianceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        # Domain violations in estimator parameters are configuration errors
        # by the time they surface here.
        print(f"error: {exc}", file=sys.stderr)
        return 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridco2",
        description="CO2 emissions from zonal electricity generation under "
        "comparable emission-factor methods",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--input", action="append", required=True, metavar="CSV",
        help="normalized generation CSV; repeat for several files",
    )
    common.add_argument("--zones", help="comma-separated zone names (default: all in data)")
    common.add_argument(
        "--from", dest="date_from", metavar="WHEN",
        help="inclusive start, ISO date or hour",
    )
    common.add_argument(
        "--to", dest="date_to", metavar="WHEN",
        help="exclusive end, ISO date or hour",
    )
    common.add_argument("--ef-registry", metavar="FILE", help="JSON/TOML factor overrides")
    common.add_argument(
        "--coverage", choices=("skip", "zero-fill", "error"), default="skip",
        help="policy for unexpected missing hours (default: skip)",
    )
    common.add_argument(
        "--lenient-labels", action="store_true",
        help="treat unknown fuel labels as non-emitting instead of failing",
    )

    method_opts = argparse.ArgumentParser(add_help=False)
    method_opts.add_argument(
        "--methods", default=DEFAULT_METHODS,
        help=f"comma-separated method ids (default: {DEFAULT_METHODS}; "
        "M6 additionally needs --baseline-2019 and --g2019)",
    )
    method_opts.add_argument(
        "--baseline-2019", type=float, metavar="TCO2",
        help="reference emission total of the baseline year (M6)",
    )
    method_opts.add_argument(
        "--g2019", metavar="JSON",
        help="baseline-year generation per fuel, as a JSON file or inline "
        'JSON object, e.g. {"natural_gas": 1e6} (M6)',
    )

    out_opts = argparse.ArgumentParser(add_help=False)
    out_opts.add_argument("--out", required=True, metavar="DIR", help="output directory")
    out_opts.add_argument(
        "--format", default="csv",
        help="comma-separated output formats from csv,json,svg (default: csv)",
    )

    p_compute = sub.add_parser(
        "compute", parents=[common, method_opts, out_opts],
        help="hourly, monthly, rolling, and annual emissions per zone and method",
    )
    p_compute.add_argument(
        "--window", type=int, default=720,
        help="rolling-mean window in hours (default: 720)",
    )
    p_compute.set_defaults(func=cmd_compute)

    p_compare = sub.add_parser(
        "compare", parents=[common, method_opts, out_opts],
        help="pairwise method differences with non-rejection intervals",
    )
    p_compare.add_argument(
        "--pairs", metavar="PAIRS",
        help="pairs like M4:M5,M2:M1 (default: all pairs of --methods)",
    )
    p_compare.add_argument(
        "--lag", type=int, help="autocovariance truncation lag (default: n^(1/3))"
    )
    p_compare.add_argument("--alpha", type=float, default=0.05, help="test level (default: 0.05)")
    p_compare.add_argument(
        "--hourly-diff", action="store_true",
        help="difference hourly values instead of monthly means",
    )
    p_compare.add_argument(
        "--raw-lrv", action="store_true",
        help="use the unweighted truncated autocovariance sum instead of "
        "Bartlett weights",
    )
    p_compare.set_defaults(func=cmd_compare)

    p_report = sub.add_parser(
        "report", parents=[common, method_opts, out_opts],
        help="one row per zone, year, and method: generation, emissions, AEF",
    )
    p_report.set_defaults(func=cmd_report)

    p_validate = sub.add_parser(
        "validate", parents=[common],
        help="parse inputs and report coverage gaps as JSON lines",
    )
    p_validate.add_argument("--out", metavar="DIR", help="write gaps.jsonl here (default: stdout)")
    p_validate.set_defaults(func=cmd_validate)

    return parser


# ---------------------------------------------------------------------------
# Shared pipeline pieces.


def _parse_when(text: str, flag: str) -> datetime:
    cleaned = text.strip()
    try:
        if len(cleaned) == 10:
            return datetime.fromisoformat(cleaned).replace(tzinfo=timezone.utc)
        return parse_timestamp(cleaned)
    except (ValueError, DataError):
        raise ConfigError(f"{flag} expects an ISO date or hour, got {text!r}") from None


def _load_records(args) -> list[GenerationRecord]:
    batches = [
        parse_generation_file(path, strict_labels=not args.lenient_labels)
        for path in args.input
    ]
    records = merge_records(batches)
    start = _parse_when(args.date_from, "--from") if args.date_from else None
    stop = _parse_when(args.date_to, "--to") if args.date_to else None
    if start and stop and start >= stop:
        raise ConfigError("--from must be earlier than --to")
    zones = args.zones.split(",") if args.zones else None
    records = filter_records(records, zones=zones, start=start, stop=stop)
    if not records:
        raise DataError("no records left after zone/period filtering")
    policy = CoveragePolicy(on_missing_hour=args.coverage)
    records, _ = apply_coverage(records, policy)
    return records


def _parse_methods(text: str) -> list[MethodId]:
    methods = []
    for name in text.split(","):
        method = MethodId.from_name(name)
        if method not in PIPELINE_METHODS:
            raise ConfigError(
                f"method {method.value} is a standalone calculator, not a "
                "pipeline method"
            )
        if method not in methods:
            methods.append(method)
    if not methods:
        raise ConfigError("--methods must name at least one method")
    return methods


def _parse_g2019(text: str) -> dict[FuelKind, float]:
    cleaned = text.strip()
    try:
        if cleaned.startswith("{"):
            payload = json.loads(cleaned)
        else:
            with open(cleaned, "r", encoding="utf-8") as fh:
                payload = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read --g2019 file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"cannot parse --g2019 JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ConfigError("--g2019 must be a JSON object mapping fuel to MWh")
    try:
        return {FuelKind.from_name(k): float(v) for k, v in payload.items()}
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"--g2019 values must be numbers: {exc}") from exc


def _method_configs(args, methods: list[MethodId]) -> dict[MethodId, MethodConfig]:
    configs = {}
    for method in methods:
        if method is MethodId.M6:
            if args.baseline_2019 is None or args.g2019 is None:
                raise ConfigError("M6 needs both --baseline-2019 and --g2019")
            config = MethodConfig(
                id=method,
                baseline_emissions=args.baseline_2019,
                baseline_generation_by_fuel=_parse_g2019(args.g2019),
            )
        else:
            config = MethodConfig(id=method)
        config.validate()
        configs[method] = config
    return configs


def _registry(args) -> FuelRegistry:
    if args.ef_registry:
        return FuelRegistry.from_file(args.ef_registry)
    return FuelRegistry.builtin()


def _formats(args) -> set[str]:
    formats = {f.strip().lower() for f in args.format.split(",") if f.strip()}
    unknown = formats - {"csv", "json", "svg"}
    if unknown:
        raise ConfigError(f"unknown output format(s): {', '.join(sorted(unknown))}")
    if not formats:
        raise ConfigError("--format must name at least one of csv,json,svg")
    return formats


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_csv(path: Path, header: list[str], rows: list[list[str]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _stamp(when: datetime) -> str:
    return when.strftime("%Y-%m-%dT%H:%M:%SZ")


def _month(key: tuple[int, int]) -> str:
    return f"{key[0]:04d}-{key[1]:02d}"


def _fmt_int(value: float) -> str:
    return str(round(value))


def _fmt_aef(value: float | None) -> str:
    return "" if value is None else f"{value:.4f}"


# ---------------------------------------------------------------------------
# Verbs.


def cmd_compute(args) -> int:
    formats = _formats(args)
    if args.window < 1:
        raise ConfigError(f"--window must be at least 1, got {args.window}")
    records = _load_records(args)
    registry = _registry(args)
    methods = _parse_methods(args.methods)
    configs = _method_configs(args, methods)
    out = _outdir(args)

    written = 0
    for zone in zones_in(records):
        zone_records = [r for r in records if r.zone == zone]
        annual_rows: list[list[str]] = []
        annual_payload = []
        monthly_by_method: dict[str, list[float]] = {}
        month_keys: list[tuple[int, int]] = []
        for method in methods:
            series = hourly_series(zone_records, configs[method], registry, zone)
            months = monthly_mean(series)
            rolling = rolling_mean(series, args.window)
            if "csv" in formats:
                _write_csv(
                    out / f"hourly_{zone}_{method.value}.csv",
                    ["timestamp", "emissions_tco2"],
                    [[_stamp(t), f"{v:.6f}"] for t, v in series.points()],
                )
                _write_csv(
                    out / f"monthly_{zone}_{method.value}.csv",
                    ["month", "mean_tco2"],
                    [[_month(k), f"{v:.6f}"] for k, v in months],
                )
                _write_csv(
                    out / f"rolling{args.window}_{zone}_{method.value}.csv",
                    ["timestamp", "mean_tco2"],
                    [[_stamp(t), f"{v:.6f}"] for t, v in rolling.points()],
                )
                written += 3
            for summary in annual_summary(series, zone_records):
                annual_rows.append(
                    [
                        zone,
                        method.value,
                        str(summary.year),
                        _fmt_int(summary.total_emissions),
                        _fmt_int(summary.total_generation),
                        _fmt_aef(summary.aef),
                    ]
                )
                annual_payload.append(
                    {
                        "zone": zone,
                        "method": method.value,
                        "year": summary.year,
                        "emissions_tco2": summary.total_emissions,
                        "generation_mwh": summary.total_generation,
                        "aef": summary.aef,
                    }
                )
            if not month_keys:
                month_keys = [k for k, _ in months]
            monthly_by_method[method.value] = [v for _, v in months]
        if "csv" in formats:
            _write_csv(
                out / f"annual_{zone}.csv",
                ["zone", "method", "year", "emissions_tco2", "generation_mwh", "aef"],
                annual_rows,
            )
            written += 1
        if "json" in formats:
            _write_json(out / f"annual_{zone}.json", annual_payload)
            written += 1
        if "svg" in formats and month_keys:
            aligned = {
                name: values
                for name, values in monthly_by_method.items()
                if len(values) == len(month_keys)
            }
            svg_line_chart(
                aligned,
                [_month(k) for k in month_keys],
                out / f"monthly_{zone}.svg",
                title=f"{zone}: monthly mean hourly emissions",
                y_label="tCO2 per hour",
            )
            written += 1
        print(f"{zone}: {len(zone_records)} records, {len(methods)} methods")
    print(f"wrote {written} files to {out}")
    return 0


def _parse_pairs(args, methods: list[MethodId]) -> list[tuple[MethodId, MethodId]]:
    if args.pairs:
        pairs = []
        for chunk in args.pairs.split(","):
            try:
                left, right = chunk.split(":")
            except ValueError:
                raise ConfigError(
                    f"--pairs expects entries like M4:M5, got {chunk!r}"
                ) from None
            pair = (MethodId.from_name(left), MethodId.from_name(right))
            for method in pair:
                if method not in PIPELINE_METHODS:
                    raise ConfigError(
                        f"method {method.value} is a standalone calculator, not a "
                        "pipeline method"
                    )
            pairs.append(pair)
        return pairs
    if len(methods) < 2:
        raise ConfigError("compare needs at least two methods")
    return list(combinations(methods, 2))


def cmd_compare(args) -> int:
    formats = _formats(args)
    records = _load_records(args)
    registry = _registry(args)
    pairs = _parse_pairs(args, _parse_methods(args.methods))
    if any(left is right for left, right in pairs):
        raise DegenerateVarianceError(
            "a method differenced against itself is identically zero"
        )
    # Only the methods that actually appear in a pair need series.
    members = {method for pair in pairs for method in pair}
    methods = [m for m in MethodId if m in members]
    configs = _method_configs(args, methods)
    bucket = "hourly" if args.hourly_diff else "monthly"
    bartlett = not args.raw_lrv
    out = _outdir(args)

    for zone in zones_in(records):
        zone_records = [r for r in records if r.zone == zone]
        series: dict[MethodId, EmissionSeries] = {
            method: hourly_series(zone_records, configs[method], registry, zone)
            for method in methods
        }
        reports = []
        cells: dict[tuple[str, str], tuple[float, float]] = {}
        for left, right in pairs:
            diff = difference_series(series[left], series[right], bucket=bucket)
            report = mean_difference_report(
                left.value,
                right.value,
                diff.values,
                alpha=args.alpha,
                m=args.lag,
                bartlett=bartlett,
            )
            reports.append(report)
            cells[(left.value, right.value)] = report.interval
            if "csv" in formats:
                _write_csv(
                    out / f"diff_{zone}_{left.value}_{right.value}.csv",
                    ["bucket", "difference_tco2"],
                    [
                        [_month(k) if bucket == "monthly" else _stamp(k), f"{v:.6f}"]
                        for k, v in zip(diff.keys, diff.values)
                    ],
                )
            if "svg" in formats:
                labels = [
                    _month(k) if bucket == "monthly" else _stamp(k) for k in diff.keys
                ]
                svg_line_chart(
                    {f"{left.value} - {right.value}": list(diff.values)},
                    labels,
                    out / f"diff_{zone}_{left.value}_{right.value}.svg",
                    title=f"{zone}: {bucket} difference {left.value} - {right.value}",
                    y_label="tCO2",
                )
        ordered = [m for m in MethodId if m in methods]
        if "csv" in formats:
            header = ["method"] + [m.value for m in ordered]
            rows = []
            for row_method in ordered:
                row = [row_method.value]
                for col_method in ordered:
                    if row_method is col_method:
                        row.append("-")
                        continue
                    interval = cells.get((row_method.value, col_method.value))
                    if interval is None:
                        # Lower triangle also shows pairs computed the other
                        # way around, mirrored by antisymmetry.
                        flipped = cells.get((col_method.value, row_method.value))
                        if flipped is not None and _method_index(row_method) > _method_index(col_method):
                            interval = (-flipped[1], -flipped[0])
                    if interval is None or _method_index(row_method) < _method_index(col_method):
                        row.append("")
                    else:
                        row.append(f"[{_fmt_int(interval[0])}, {_fmt_int(interval[1])}]")
                rows.append(row)
            _write_csv(out / f"intervals_{zone}.csv", header, rows)
        if "json" in formats:
            _write_json(
                out / f"intervals_{zone}.json",
                {
                    "zone": zone,
                    "bucket": bucket,
                    "alpha": args.alpha,
                    "bartlett": bartlett,
                    "pairs": [
                        {
                            "method_i": r.method_i,
                            "method_j": r.method_j,
                            "n": r.n,
                            "d_bar": r.d_bar,
                            "lag": r.lag,
                            "long_run_variance": r.long_run_variance,
                            "std_error": r.std_error,
                            "statistic_at_zero": r.statistic_at_zero,
                            "interval": list(r.interval),
                            "interval_rounded": [round(r.interval[0]), round(r.interval[1])],
                            "rejects_zero": r.rejects_zero,
                        }
                        for r in reports
                    ],
                },
            )
        print(f"{zone}: {len(pairs)} pair(s) on {bucket} buckets")
    return 0


def _method_index(method: MethodId) -> int:
    return list(MethodId).index(method)


def cmd_report(args) -> int:
    formats = _formats(args)
    records = _load_records(args)
    registry = _registry(args)
    methods = _parse_methods(args.methods)
    configs = _method_configs(args, methods)
    out = _outdir(args)

    rows = []
    payload = []
    for zone in zones_in(records):
        zone_records = [r for r in records if r.zone == zone]
        for method in methods:
            series = hourly_series(zone_records, configs[method], registry, zone)
            for summary in annual_summary(series, zone_records):
                rows.append(
                    [
                        zone,
                        str(summary.year),
                        method.value,
                        _fmt_int(summary.total_generation),
                        _fmt_int(summary.total_emissions),
                        _fmt_aef(summary.aef),
                    ]
                )
                payload.append(
                    {
                        "zone": zone,
                        "year": summary.year,
                        "method": method.value,
                        "generation_mwh": summary.total_generation,
                        "emissions_tco2": summary.total_emissions,
                        "aef": summary.aef,
                    }
                )
    if "csv" in formats:
        _write_csv(
            out / "zonal_summary.csv",
            ["zone", "year", "method", "generation_mwh", "emissions_tco2", "aef"],
            rows,
        )
    if "json" in formats:
        _write_json(out / "zonal_summary.json", payload)
    print(f"zonal summary: {len(rows)} rows")
    return 0


def cmd_validate(args) -> int:
    batches = []
    for path in args.input:
        batch = parse_generation_file(path, strict_labels=not args.lenient_labels)
        print(f"{path}: {len(batch)} records")
        batches.append(batch)
    records = merge_records(batches)
    if not records:
        raise DataError("inputs contain no records")
    zones = zones_in(records)
    first = min(r.timestamp for r in records)
    last = max(r.timestamp for r in records)
    print(f"zones: {', '.join(zones)}")
    print(f"span: {_stamp(first)} .. {_stamp(last)}")

    gaps = find_gaps(records)
    lines = [gap.to_json_line() for gap in gaps]
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "gaps.jsonl").write_text(
            "".join(line + "\n" for line in lines), encoding="utf-8"
        )
        print(f"{len(gaps)} unexpected gap(s) -> {out / 'gaps.jsonl'}")
    else:
        for line in lines:
            print(line)
        print(f"{len(gaps)} unexpected gap(s)")
    if gaps and args.coverage == "error":
        raise DataError(f"coverage policy forbids the {len(gaps)} gap(s) found")
    return 0


if __name__ == "__main__":
    sys.exit(main())
