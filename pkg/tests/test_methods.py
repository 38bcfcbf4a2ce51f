"""Estimator formulas: frozen worked examples and algebraic invariants."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridco2 import (
    CO2_PER_CARBON_MASS,
    ConfigError,
    EfSource,
    FuelKind,
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

positive = st.floats(min_value=1e-6, max_value=1e9, allow_nan=False, allow_infinity=False)
fraction = st.floats(min_value=1e-6, max_value=1.0, allow_nan=False, allow_infinity=False)


# --- the plain product and its corrections -------------------------------


def test_tier1_example():
    assert tier1_default(100.0, 0.20) == 20.0
    assert tier1_default(0.0, 0.34) == 0.0


def test_tier1_rejects_negative():
    with pytest.raises(ValueError):
        tier1_default(-1.0, 0.2)
    with pytest.raises(ValueError):
        tier1_default(1.0, -0.2)


def test_tier2_examples():
    assert tier2_country([]) == 0.0
    assert tier2_country([(100.0, 0.20297)]) == pytest.approx(20.297)
    assert tier2_country([(50.0, 0.34), (50.0, 0.59)]) == pytest.approx(46.5)


def test_oxidation_example():
    assert with_oxidation(1000.0, 0.34, 0.92) == pytest.approx(312.8)


def test_oxidation_bounds():
    with pytest.raises(ValueError):
        with_oxidation(10.0, 0.2, 0.0)
    with pytest.raises(ValueError):
        with_oxidation(10.0, 0.2, 1.01)
    assert with_oxidation(10.0, 0.2, 1.0) == tier1_default(10.0, 0.2)


def test_oxidation_molecular_example():
    # 1000 * 0.34 * 0.92 * 44/12
    assert with_oxidation_molecular(1000.0, 0.34, 0.92) == pytest.approx(
        1146.9333333333334, rel=1e-12
    )


def test_oxidation_molecular_default_ratio_is_exact():
    value = with_oxidation_molecular(1.0, 1.0, 1.0)
    assert value == CO2_PER_CARBON_MASS
    with pytest.raises(ValueError):
        with_oxidation_molecular(1.0, 1.0, 1.0, mass_ratio=0.0)


@given(g=positive, ef=positive, o=fraction)
def test_correction_ratios(g, ef, o):
    base = tier1_default(g, ef)
    assert with_oxidation(g, ef, o) / base == pytest.approx(o, rel=1e-12)
    assert with_oxidation_molecular(g, ef, o) / base == pytest.approx(
        o * CO2_PER_CARBON_MASS, rel=1e-12
    )


@given(g=positive, ef=positive, k=st.floats(min_value=0.0, max_value=1e3, allow_nan=False))
def test_tier1_is_homogeneous(g, ef, k):
    assert tier1_default(k * g, ef) == pytest.approx(k * tier1_default(g, ef), rel=1e-9)


# --- baseline-adjusted factors -------------------------------------------


def test_adjusted_ef_examples():
    assert adjusted_ef(0.2, 90.0, 100.0) == pytest.approx(0.18)
    assert adjusted_ef(0.2, 110.0, 100.0) == pytest.approx(0.22)
    with pytest.raises(ValueError):
        adjusted_ef(0.2, 90.0, 0.0)


def test_baseline_ratio_simple():
    ratio = baseline_adjustment_ratio(
        90.0,
        {FuelKind.NATURAL_GAS: 100.0},
        {FuelKind.NATURAL_GAS: 1.0},
    )
    assert ratio == pytest.approx(0.9)


def test_baseline_ratio_missing_factor():
    with pytest.raises(ConfigError):
        baseline_adjustment_ratio(90.0, {FuelKind.FOSSIL_OIL: 10.0}, {})


@given(scale=positive)
def test_adjusted_ef_scales_linearly(scale):
    base = adjusted_ef(0.3, 50.0, 80.0)
    assert adjusted_ef(0.3, 50.0 * scale, 80.0 * scale) == pytest.approx(base, rel=1e-12)


# --- auxiliary formulas ----------------------------------------------------


def test_ncv_example():
    # 1 * 94.60 * 20.91 * 0.92, coal parameters
    assert with_ncv(1.0, 94.60, 20.91, 0.92) == pytest.approx(1819.83912, rel=1e-12)


def test_ncv_validation():
    with pytest.raises(ValueError):
        with_ncv(1.0, 94.60, 0.0, 0.92)
    with pytest.raises(ValueError):
        with_ncv(1.0, 94.60, 20.91, 0.0)


def test_imports_examples():
    assert with_imports(1000.0, 100.0, 0.5) == pytest.approx(1050.0)
    # exports subtract and are not clamped
    assert with_imports(1000.0, -100.0, 0.5) == pytest.approx(950.0)
    assert with_imports(10.0, -100.0, 0.5) == pytest.approx(-40.0)
    with pytest.raises(ValueError):
        with_imports(-1.0, 0.0, 0.5)
    with pytest.raises(ValueError):
        with_imports(1.0, 0.0, -0.5)


def test_capacity_scenario_example():
    assert capacity_scenario(100.0, 0.5, 8760.0, 0.2) == pytest.approx(87600.0)
    with pytest.raises(ValueError):
        capacity_scenario(100.0, 1.5, 8760.0, 0.2)


def test_energy_share_example():
    assert energy_share(200.0, 0.5, 0.2) == pytest.approx(20.0)
    with pytest.raises(ValueError):
        energy_share(200.0, -0.1, 0.2)
    with pytest.raises(ValueError):
        energy_share(200.0, 1.1, 0.2)


@given(
    total=positive,
    shares=st.lists(fraction, min_size=1, max_size=4).filter(lambda s: sum(s) <= 1.0),
    ef=positive,
)
def test_energy_share_matches_split_generation(total, shares, ef):
    via_share = sum(energy_share(total, s, ef) for s in shares)
    via_split = sum(tier1_default(total * s, ef) for s in shares)
    assert via_share == pytest.approx(via_split, rel=1e-9)


def test_plant_quadratic_examples():
    assert plant_quadratic(10.0, (0.0, 1.0, 0.0), [1.0], 1.0, 0.2) == pytest.approx(2.0)
    # zero generation still burns the constant term
    assert plant_quadratic(0.0, (1.0, 1.0, 5.0), [1.0], 1.0, 1.0) == pytest.approx(5.0)
    assert plant_quadratic(2.0, (1.0, 2.0, 3.0), [0.5], 2.0, 1.0) == pytest.approx(11.0)


def test_plant_quadratic_validation():
    with pytest.raises(ValueError):
        plant_quadratic(1.0, (-1.0, 0.0, 0.0), [1.0], 1.0, 1.0)
    with pytest.raises(ValueError):
        plant_quadratic(1.0, (1.0, 0.0, 0.0), [0.7, 0.7], 1.0, 1.0)
    with pytest.raises(ValueError):
        plant_quadratic(1.0, (1.0, 0.0, 0.0), [-0.1], 1.0, 1.0)


def test_stoichiometric_example():
    assert stoichiometric(100.0, 0.34, 0.4, 25.0) == pytest.approx(3.4)
    with pytest.raises(ValueError):
        stoichiometric(100.0, 0.34, 0.0, 25.0)
    with pytest.raises(ValueError):
        stoichiometric(100.0, 0.34, 0.4, 0.0)


def test_split_by_penetration():
    split = split_by_penetration(100.0, {"A": 0.6, "B": 0.4})
    assert split == {"A": 60.0, "B": 40.0}
    assert split_by_penetration(100.0, {}) == {}
    with pytest.raises(ValueError):
        split_by_penetration(100.0, {"A": 0.6, "B": 0.3})
    with pytest.raises(ValueError):
        split_by_penetration(100.0, {"A": 1.2, "B": -0.2})


@given(total=positive)
def test_split_preserves_total(total):
    split = split_by_penetration(total, {"A": 0.25, "B": 0.25, "C": 0.5})
    assert sum(split.values()) == pytest.approx(total, rel=1e-12)


def test_tier3_example():
    split = split_by_penetration(100.0, {"A": 0.6, "B": 0.4})
    assert tier3_technology(split, {"A": 0.3, "B": 0.5}) == pytest.approx(38.0)
    assert tier3_technology({}, {}) == 0.0
    with pytest.raises(ValueError):
        tier3_technology({"A": 10.0}, {"B": 0.3})


def test_total_emissions():
    assert total_emissions([]) == 0.0
    assert total_emissions([1.0, 2.0, 3.5]) == pytest.approx(6.5)


# --- the composed per-hour estimator --------------------------------------


def test_estimator_m1_single_fuel(registry):
    estimator = MethodEstimator(MethodConfig(MethodId.M1), registry)
    # 100 MWh of gas on the default factors: 100 * 56.10 / 277.7778
    assert estimator.hour({FuelKind.NATURAL_GAS: 100.0}) == pytest.approx(
        20.19599838432013, rel=1e-12
    )


def test_estimator_m4_mixed_hour(registry):
    estimator = MethodEstimator(MethodConfig(MethodId.M4), registry)
    value = estimator.hour({FuelKind.NATURAL_GAS: 100.0, FuelKind.FOSSIL_COAL: 50.0})
    assert value == pytest.approx(130.75258953979284, rel=1e-12)
    assert round(value, 2) == 130.75


def test_estimator_m2_uses_country_factors(registry):
    estimator = MethodEstimator(MethodConfig(MethodId.M2), registry)
    assert estimator.hour({FuelKind.NATURAL_GAS: 100.0}) == pytest.approx(
        100 * 56.38 / 277.7778, rel=1e-12
    )


def test_estimator_m5_is_m2_times_mass_ratio(registry):
    m2 = MethodEstimator(MethodConfig(MethodId.M2), registry)
    m5 = MethodEstimator(MethodConfig(MethodId.M5), registry)
    mix = {FuelKind.NATURAL_GAS: 123.0, FuelKind.FOSSIL_OIL: 45.0}
    assert m5.hour(mix) == pytest.approx(m2.hour(mix) * CO2_PER_CARBON_MASS, rel=1e-12)


def test_estimator_m6_neutral_baseline_reduces_to_m2(registry):
    g2019 = {FuelKind.NATURAL_GAS: 1000.0, FuelKind.FOSSIL_COAL: 200.0}
    inventory = sum(
        amount * registry.get(EfSource.ISPRA, fuel).ef_per_mwh
        for fuel, amount in g2019.items()
    )
    config = MethodConfig(
        MethodId.M6,
        baseline_emissions=inventory,
        baseline_generation_by_fuel=g2019,
    )
    m6 = MethodEstimator(config, registry)
    m2 = MethodEstimator(MethodConfig(MethodId.M2), registry)
    mix = {FuelKind.NATURAL_GAS: 77.0, FuelKind.FOSSIL_COAL: 11.0}
    assert m6.hour(mix) == pytest.approx(m2.hour(mix), rel=1e-12)


def test_estimator_m6_scales_with_baseline(registry):
    g2019 = {FuelKind.NATURAL_GAS: 500.0}
    inventory = 500.0 * registry.get(EfSource.ISPRA, FuelKind.NATURAL_GAS).ef_per_mwh
    config = MethodConfig(
        MethodId.M6,
        baseline_emissions=2.0 * inventory,
        baseline_generation_by_fuel=g2019,
    )
    m6 = MethodEstimator(config, registry)
    m2 = MethodEstimator(MethodConfig(MethodId.M2), registry)
    mix = {FuelKind.NATURAL_GAS: 50.0}
    assert m6.hour(mix) == pytest.approx(2.0 * m2.hour(mix), rel=1e-12)


def test_estimator_m6_requires_baseline(registry):
    with pytest.raises(ConfigError):
        MethodEstimator(MethodConfig(MethodId.M6), registry)
    with pytest.raises(ConfigError):
        MethodConfig(MethodId.M6, baseline_emissions=100.0).validate()


def test_estimator_ncv_needs_calorific_values(registry):
    # the country-specific set publishes no NCV
    with pytest.raises(ConfigError):
        MethodEstimator(MethodConfig(MethodId.NCV, ef_source=EfSource.ISPRA), registry)
    estimator = MethodEstimator(MethodConfig(MethodId.NCV), registry)
    assert estimator.hour({FuelKind.FOSSIL_COAL: 1.0}) == pytest.approx(
        1819.83912, rel=1e-12
    )


def test_estimator_energy_share(registry):
    config = MethodConfig(
        MethodId.ENERGY_SHARE, extras={"alpha": {"natural_gas": 0.5}}
    )
    estimator = MethodEstimator(config, registry)
    ef = registry.get(EfSource.IPCC, FuelKind.NATURAL_GAS).ef_per_mwh
    value = estimator.hour({FuelKind.NATURAL_GAS: 90.0}, total_generation_mwh=200.0)
    assert value == pytest.approx(200.0 * 0.5 * ef, rel=1e-12)
    with pytest.raises(ConfigError):
        estimator.hour({FuelKind.NATURAL_GAS: 90.0})  # no total given


def test_estimator_stoichiometric(registry):
    config = MethodConfig(MethodId.STOICHIOMETRIC, extras={"eta": 0.4})
    estimator = MethodEstimator(config, registry)
    ef = registry.get(EfSource.IPCC, FuelKind.FOSSIL_COAL).ef_per_mwh
    # coal defaults to LHV 25
    assert estimator.hour({FuelKind.FOSSIL_COAL: 100.0}) == pytest.approx(
        100.0 * ef / (0.4 * 25.0), rel=1e-12
    )
    # derived gas has no default LHV
    with pytest.raises(ConfigError):
        estimator.hour({FuelKind.DERIVED_GAS: 100.0})
    with_lhv = MethodEstimator(
        MethodConfig(MethodId.STOICHIOMETRIC, extras={"eta": 0.4, "lhv": {"derived_gas": 10.0}}),
        registry,
    )
    ef_dg = registry.get(EfSource.IPCC, FuelKind.DERIVED_GAS).ef_per_mwh
    assert with_lhv.hour({FuelKind.DERIVED_GAS: 100.0}) == pytest.approx(
        100.0 * ef_dg / (0.4 * 10.0), rel=1e-12
    )


def test_estimator_tier3(registry):
    config = MethodConfig(
        MethodId.TIER3_TECH,
        extras={
            "penetration": {"A": 0.6, "B": 0.4},
            "technology_ef": {"natural_gas": {"A": 0.3, "B": 0.5}},
        },
    )
    estimator = MethodEstimator(config, registry)
    assert estimator.hour({FuelKind.NATURAL_GAS: 100.0}) == pytest.approx(38.0)


def test_estimator_rejects_standalone_calculators(registry):
    for method in (MethodId.IMPORTS, MethodId.CAPACITY_SCENARIO, MethodId.PLANT_QUADRATIC):
        with pytest.raises(ConfigError):
            MethodEstimator(MethodConfig(method), registry)


def test_method_id_parsing():
    assert MethodId.from_name("m4") is MethodId.M4
    assert MethodId.from_name("M1") is MethodId.M1
    with pytest.raises(ConfigError):
        MethodId.from_name("M9")


def test_default_sources():
    assert MethodConfig(MethodId.M1).resolved_source is EfSource.IPCC
    assert MethodConfig(MethodId.M2).resolved_source is EfSource.ISPRA
    assert MethodConfig(MethodId.M3).resolved_source is EfSource.IPCC
    assert MethodConfig(MethodId.M4).resolved_source is EfSource.IPCC
    assert MethodConfig(MethodId.M5).resolved_source is EfSource.ISPRA
    assert MethodConfig(MethodId.M6).resolved_source is EfSource.ISPRA
    assert (
        MethodConfig(MethodId.M1, ef_source=EfSource.ISPRA).resolved_source
        is EfSource.ISPRA
    )
