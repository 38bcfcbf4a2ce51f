"""CO2 emissions from zonal electricity generation.

Estimates hourly direct emissions under several comparable emission-factor
methods, aggregates them per market zone (monthly means, rolling means,
annual totals, average emission factors), and quantifies how strongly two
methods disagree with a mean-difference test built on a truncated
autocovariance variance estimate.
"""

from .errors import (
    AlignmentError,
    ConfigError,
    ConflictError,
    CoverageError,
    DataError,
    DegenerateVarianceError,
    GridCo2Error,
    ParseError,
)
from .fuels import (
    CO2_PER_CARBON_MASS,
    MWH_PER_TJ,
    EfSource,
    FuelKind,
    FuelParameters,
    FuelRegistry,
    builtin_parameters,
    convert_ef,
)
from .ingest import (
    DEFAULT_KNOWN_GAPS,
    ITALIAN_ZONES,
    CoveragePolicy,
    Gap,
    GenerationRecord,
    KnownGap,
    apply_coverage,
    canonical_zone,
    filter_records,
    find_gaps,
    map_production_type,
    merge_records,
    parse_generation_file,
    write_generation_csv,
    zones_in,
)
from .methods import (
    DEFAULT_EF_SOURCE,
    MethodConfig,
    MethodEstimator,
    MethodId,
    adjusted_ef,
    baseline_adjustment_ratio,
    capacity_scenario,
    energy_share,
    plant_quadratic,
    split_by_penetration,
    stoichiometric,
    tier1_default,
    tier2_country,
    tier3_technology,
    total_emissions,
    with_imports,
    with_ncv,
    with_oxidation,
    with_oxidation_molecular,
)
from .series import (
    AnnualSummary,
    DifferenceSeries,
    EmissionSeries,
    aef,
    annual_summary,
    difference_series,
    hourly_series,
    monthly_mean,
    rolling_mean,
)
from .stats import (
    MeanDifferenceReport,
    autocovariance,
    default_lag,
    dm_statistic,
    long_run_variance,
    mean_difference_report,
    non_rejection_interval,
    non_rejection_interval_grid,
)

__version__ = "0.1.0"
