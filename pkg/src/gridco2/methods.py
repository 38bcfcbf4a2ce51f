"""Emission estimators: six comparable method variants plus auxiliary formulas.

Every estimator is a pure function of generation (MWh) and fuel parameters on
the tCO2/MWh basis, returning tCO2.  The six numbered methods differ only in
which correction terms they apply and which factor source they read:

    M1  g * ef                      default factors (ipcc)
    M2  sum_i g_i * ef_i            country-specific factors (ispra)
    M3  g * ef * o                  oxidation-corrected default factors
    M4  g * ef * o * (44/12)        oxidation + molecular mass, default factors
    M5  g * ef * o * (44/12)        oxidation + molecular mass, country factors
    M6  g * ef_adj                  country factors rescaled so a chosen
                                    baseline year reproduces a reference total

The auxiliary formulas (net-calorific-value weighting, trade adjustment,
capacity scenarios, fixed energy shares, per-plant quadratic consumption,
stoichiometric fuel burn, technology-split factors) are standalone
calculators with the same conventions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

from .errors import ConfigError
from .fuels import CO2_PER_CARBON_MASS, EfSource, FuelKind, FuelParameters, FuelRegistry

#: Default lower heating values for the stoichiometric estimator, MJ/kg.
DEFAULT_LHV = {FuelKind.FOSSIL_COAL: 25.0, FuelKind.NATURAL_GAS: 35.0}

#: Tolerance for "shares sum to one" checks.
SHARE_TOLERANCE = 1e-9


class MethodId(str, Enum):
    """Identifiers for the six comparison methods and the auxiliary formulas."""

    M1 = "M1"
    M2 = "M2"
    M3 = "M3"
    M4 = "M4"
    M5 = "M5"
    M6 = "M6"
    NCV = "ncv"
    IMPORTS = "imports"
    CAPACITY_SCENARIO = "capacity_scenario"
    ENERGY_SHARE = "energy_share"
    PLANT_QUADRATIC = "plant_quadratic"
    STOICHIOMETRIC = "stoichiometric"
    TIER3_TECH = "tier3_tech"

    @classmethod
    def from_name(cls, name: str) -> "MethodId":
        key = name.strip()
        for member in cls:
            if member.value.lower() == key.lower():
                return member
        known = ", ".join(m.value for m in cls)
        raise ConfigError(f"unknown method {name!r}; known methods: {known}")


#: Factor source each method reads when the configuration does not override it.
DEFAULT_EF_SOURCE: dict[MethodId, EfSource] = {
    MethodId.M1: EfSource.IPCC,
    MethodId.M2: EfSource.ISPRA,
    MethodId.M3: EfSource.IPCC,
    MethodId.M4: EfSource.IPCC,
    MethodId.M5: EfSource.ISPRA,
    MethodId.M6: EfSource.ISPRA,
    MethodId.NCV: EfSource.IPCC,
    MethodId.IMPORTS: EfSource.IPCC,
    MethodId.CAPACITY_SCENARIO: EfSource.IPCC,
    MethodId.ENERGY_SHARE: EfSource.IPCC,
    MethodId.PLANT_QUADRATIC: EfSource.IPCC,
    MethodId.STOICHIOMETRIC: EfSource.IPCC,
    MethodId.TIER3_TECH: EfSource.IPCC,
}

#: Methods the hourly pipeline can evaluate per (hour, fuel).  The remaining
#: auxiliary formulas are standalone calculators, not data-driven per hour.
PIPELINE_METHODS = frozenset(
    {
        MethodId.M1,
        MethodId.M2,
        MethodId.M3,
        MethodId.M4,
        MethodId.M5,
        MethodId.M6,
        MethodId.NCV,
        MethodId.ENERGY_SHARE,
        MethodId.STOICHIOMETRIC,
        MethodId.TIER3_TECH,
    }
)


@dataclass(frozen=True)
class MethodConfig:
    """Binds a method to its free parameters.

    ``ef_source`` defaults per method (see :data:`DEFAULT_EF_SOURCE`).  The
    baseline fields are required for M6 and ignored elsewhere.  ``extras``
    carries parameters of the auxiliary formulas, e.g. ``eta`` and ``lhv``
    for the stoichiometric estimator or ``alpha`` for fixed energy shares.
    """

    id: MethodId
    ef_source: EfSource | None = None
    baseline_emissions: float | None = None
    baseline_generation_by_fuel: Mapping[FuelKind, float] | None = None
    extras: Mapping[str, object] = field(default_factory=dict)

    @property
    def resolved_source(self) -> EfSource:
        return self.ef_source if self.ef_source is not None else DEFAULT_EF_SOURCE[self.id]

    def validate(self) -> None:
        if self.id is MethodId.M6:
            if self.baseline_emissions is None or self.baseline_generation_by_fuel is None:
                raise ConfigError(
                    "M6 needs both a baseline emission total and the baseline-year "
                    "generation per fuel"
                )
            if self.baseline_emissions <= 0:
                raise ConfigError("baseline emission total must be positive")


# ---------------------------------------------------------------------------
# The six method formulas as pure functions.


def tier1_default(generation_mwh: float, ef: float) -> float:
    """Uncorrected product of generation and emission factor."""
    _require_nonnegative(generation_mwh=generation_mwh, ef=ef)
    return generation_mwh * ef


def tier2_country(contributions: Iterable[tuple[float, float]]) -> float:
    """Sum of per-context ``generation * factor`` products.

    Each item is one (generation_mwh, ef) pair, e.g. one country or region
    with its specific factor.  An empty iterable yields 0.
    """
    total = 0.0
    for generation_mwh, ef in contributions:
        total += tier1_default(generation_mwh, ef)
    return total


def with_oxidation(generation_mwh: float, ef: float, oxidation_fraction: float) -> float:
    """Generation times factor, scaled by the fraction of carbon oxidised."""
    _require_nonnegative(generation_mwh=generation_mwh, ef=ef)
    if not 0 < oxidation_fraction <= 1:
        raise ValueError(f"oxidation fraction must be in (0, 1], got {oxidation_fraction}")
    return generation_mwh * ef * oxidation_fraction


def with_oxidation_molecular(
    generation_mwh: float,
    ef: float,
    oxidation_fraction: float,
    mass_ratio: float = CO2_PER_CARBON_MASS,
) -> float:
    """Oxidation-corrected product, converted from carbon to CO2 mass."""
    if mass_ratio <= 0:
        raise ValueError(f"mass ratio must be positive, got {mass_ratio}")
    return with_oxidation(generation_mwh, ef, oxidation_fraction) * mass_ratio


def adjusted_ef(
    ef: float,
    baseline_emissions: float,
    baseline_inventory_emissions: float,
) -> float:
    """Rescale a factor so the baseline year reproduces a reference total.

    ``baseline_inventory_emissions`` is the emission total the unadjusted
    factors give for the baseline year (sum over fuels of baseline-year
    generation times factor).
    """
    _require_nonnegative(ef=ef, baseline_emissions=baseline_emissions)
    if baseline_inventory_emissions <= 0:
        raise ValueError(
            "baseline inventory emissions must be positive, got "
            f"{baseline_inventory_emissions}"
        )
    return ef * baseline_emissions / baseline_inventory_emissions


def baseline_adjustment_ratio(
    baseline_emissions: float,
    baseline_generation_by_fuel: Mapping[FuelKind, float],
    ef_by_fuel: Mapping[FuelKind, float],
) -> float:
    """The single scalar every factor is multiplied by under M6."""
    inventory = 0.0
    for fuel, generation_mwh in baseline_generation_by_fuel.items():
        _require_nonnegative(generation_mwh=generation_mwh)
        try:
            inventory += generation_mwh * ef_by_fuel[fuel]
        except KeyError:
            raise ConfigError(f"no factor for baseline fuel {fuel.value}") from None
    return adjusted_ef(1.0, baseline_emissions, inventory)


# ---------------------------------------------------------------------------
# Auxiliary formulas.


def with_ncv(generation: float, ef: float, ncv: float, oxidation_fraction: float) -> float:
    """Fuel-mass based product ``generation * ef * ncv * o``.

    Note the units: with ``ef`` in tCO2/TJ and ``ncv`` in TJ/kt this treats
    ``generation`` as a fuel mass in kilotons, not electricity.  The function
    applies the formula verbatim and leaves the basis to the caller.
    """
    _require_nonnegative(generation=generation, ef=ef)
    if ncv <= 0:
        raise ValueError(f"net calorific value must be positive, got {ncv}")
    if not 0 < oxidation_fraction <= 1:
        raise ValueError(f"oxidation fraction must be in (0, 1], got {oxidation_fraction}")
    return generation * ef * ncv * oxidation_fraction


def with_imports(
    base_emissions: float, traded_mwh: float, trade_intensity: float
) -> float:
    """Add the emissions embodied in traded electricity.

    ``traded_mwh`` is signed: positive for imports, negative for exports.
    The result may be lower than ``base_emissions`` and is not clamped.
    """
    _require_nonnegative(base_emissions=base_emissions)
    if trade_intensity < 0:
        raise ValueError(f"trade intensity must be nonnegative, got {trade_intensity}")
    return base_emissions + traded_mwh * trade_intensity


def capacity_scenario(
    capacity_mw: float, capacity_factor: float, hours: float, ef: float
) -> float:
    """Emissions of a hypothetical plant run at a fixed capacity factor."""
    _require_nonnegative(capacity_mw=capacity_mw, hours=hours, ef=ef)
    if not 0 <= capacity_factor <= 1:
        raise ValueError(f"capacity factor must be in [0, 1], got {capacity_factor}")
    return capacity_mw * capacity_factor * hours * ef


def energy_share(total_generation_mwh: float, share: float, ef: float) -> float:
    """Emissions of one fuel expressed through its share of total generation."""
    _require_nonnegative(total_generation_mwh=total_generation_mwh, ef=ef)
    if not 0 <= share <= 1:
        raise ValueError(f"energy share must be in [0, 1], got {share}")
    return total_generation_mwh * share * ef


def plant_quadratic(
    generation_mwh: float,
    coefficients: tuple[float, float, float],
    shares: Iterable[float],
    scale: float,
    ef: float,
) -> float:
    """Quadratic fuel-consumption model summed over a fuel mix.

    ``coefficients`` is (c2, c1, c0) of the consumption curve; each element
    of ``shares`` is one fuel's fraction of the mix; ``scale`` is a single
    multiplicative consumption-to-emissions constant.
    """
    _require_nonnegative(generation_mwh=generation_mwh, scale=scale, ef=ef)
    c2, c1, c0 = coefficients
    if c2 < 0 or c1 < 0 or c0 < 0:
        raise ValueError("consumption-curve coefficients must be nonnegative")
    shares = list(shares)
    if any(s < 0 for s in shares):
        raise ValueError("mix shares must be nonnegative")
    if sum(shares) > 1 + SHARE_TOLERANCE:
        raise ValueError(f"mix shares must sum to at most 1, got {sum(shares)}")
    consumption = c2 * generation_mwh**2 + c1 * generation_mwh + c0
    return ef * scale * sum(s * consumption for s in shares)


def stoichiometric(generation_mwh: float, ef: float, efficiency: float, lhv: float) -> float:
    """Emissions from the fuel mass burned: ``(g * ef) / (efficiency * lhv)``."""
    _require_nonnegative(generation_mwh=generation_mwh, ef=ef)
    if not 0 < efficiency <= 1:
        raise ValueError(f"efficiency must be in (0, 1], got {efficiency}")
    if lhv <= 0:
        raise ValueError(f"lower heating value must be positive, got {lhv}")
    return generation_mwh * ef / (efficiency * lhv)


def split_by_penetration(
    total_generation_mwh: float, penetration: Mapping[str, float]
) -> dict[str, float]:
    """Split a generation total across technologies by penetration rate.

    Penetration rates must be nonnegative and sum to 1 within a small
    tolerance.
    """
    _require_nonnegative(total_generation_mwh=total_generation_mwh)
    if any(p < 0 for p in penetration.values()):
        raise ValueError("penetration rates must be nonnegative")
    total = sum(penetration.values())
    if penetration and abs(total - 1.0) > SHARE_TOLERANCE:
        raise ValueError(f"penetration rates must sum to 1, got {total}")
    return {tech: total_generation_mwh * p for tech, p in penetration.items()}


def tier3_technology(
    generation_by_tech: Mapping[str, float], ef_by_tech: Mapping[str, float]
) -> float:
    """Sum of per-technology ``generation * factor`` products."""
    total = 0.0
    for tech, generation_mwh in generation_by_tech.items():
        try:
            ef = ef_by_tech[tech]
        except KeyError:
            raise ValueError(f"no emission factor for technology {tech!r}") from None
        total += tier1_default(generation_mwh, ef)
    return total


def total_emissions(values: Iterable[float]) -> float:
    """Plain sum of per-fuel (or per-hour) emission terms."""
    return sum(values)


def _require_nonnegative(**named: float) -> None:
    for name, value in named.items():
        if value < 0:
            raise ValueError(f"{name} must be nonnegative, got {value}")


# ---------------------------------------------------------------------------
# Composition layer used by the series builder.


class MethodEstimator:
    """Binds a method configuration to a registry and evaluates one hour.

    The per-fuel formula of the configured method is applied to each fuel's
    generation and summed.  Instances are immutable once built and safe to
    share across threads.
    """

    def __init__(self, config: MethodConfig, registry: FuelRegistry):
        config.validate()
        if config.id not in PIPELINE_METHODS:
            raise ConfigError(
                f"method {config.id.value} is a standalone calculator and cannot "
                "be evaluated per hour from generation data"
            )
        self.config = config
        self.registry = registry
        self._params = registry.parameters_for(config.resolved_source)
        self._m6_ratio = None
        if config.id is MethodId.M6:
            self._m6_ratio = baseline_adjustment_ratio(
                config.baseline_emissions,
                config.baseline_generation_by_fuel,
                {fuel: p.ef_per_mwh for fuel, p in self._params.items()},
            )
        if config.id is MethodId.NCV:
            missing = [f.value for f, p in self._params.items() if p.ncv is None]
            if missing:
                raise ConfigError(
                    f"source {config.resolved_source.value} has no net calorific "
                    f"value for: {', '.join(missing)}"
                )

    def hour(
        self,
        generation_by_fuel: Mapping[FuelKind, float],
        total_generation_mwh: float | None = None,
    ) -> float:
        """Emissions of one hour, summed over the emitting fuels.

        ``total_generation_mwh`` (all categories, non-emitting included) is
        only needed by the fixed energy-share formula.
        """
        return total_emissions(
            self._fuel_term(fuel, g, total_generation_mwh)
            for fuel, g in generation_by_fuel.items()
        )

    def _fuel_term(
        self, fuel: FuelKind, generation_mwh: float, total_generation_mwh: float | None
    ) -> float:
        method = self.config.id
        try:
            params = self._params[fuel]
        except KeyError:
            raise ConfigError(
                f"no parameters for source={self.config.resolved_source.value} "
                f"fuel={fuel.value}"
            ) from None
        ef = params.ef_per_mwh
        if method is MethodId.M1:
            return tier1_default(generation_mwh, ef)
        if method is MethodId.M2:
            return tier2_country([(generation_mwh, ef)])
        if method is MethodId.M3:
            return with_oxidation(generation_mwh, ef, params.oxidation_fraction)
        if method in (MethodId.M4, MethodId.M5):
            return with_oxidation_molecular(generation_mwh, ef, params.oxidation_fraction)
        if method is MethodId.M6:
            return tier1_default(generation_mwh, ef * self._m6_ratio)
        if method is MethodId.NCV:
            return with_ncv(generation_mwh, params.ef_per_tj, params.ncv, params.oxidation_fraction)
        if method is MethodId.ENERGY_SHARE:
            return self._energy_share_term(fuel, ef, total_generation_mwh)
        if method is MethodId.STOICHIOMETRIC:
            return self._stoichiometric_term(fuel, generation_mwh, ef)
        if method is MethodId.TIER3_TECH:
            return self._tier3_term(fuel, generation_mwh)
        raise ConfigError(f"method {method.value} has no per-fuel formula")

    def _energy_share_term(
        self, fuel: FuelKind, ef: float, total_generation_mwh: float | None
    ) -> float:
        shares = self._extras_map("alpha")
        if total_generation_mwh is None:
            raise ConfigError("energy_share needs the hour's total generation")
        share = shares.get(fuel)
        if share is None:
            return 0.0
        return energy_share(total_generation_mwh, float(share), ef)

    def _stoichiometric_term(self, fuel: FuelKind, generation_mwh: float, ef: float) -> float:
        try:
            eta = float(self.config.extras["eta"])
        except KeyError:
            raise ConfigError("stoichiometric needs extras['eta'] (plant efficiency)") from None
        lhv_map = self._extras_map("lhv", required=False)
        lhv = lhv_map.get(fuel, DEFAULT_LHV.get(fuel))
        if lhv is None:
            raise ConfigError(
                f"stoichiometric has no lower heating value for {fuel.value}; "
                "pass extras['lhv']"
            )
        return stoichiometric(generation_mwh, ef, eta, float(lhv))

    def _tier3_term(self, fuel: FuelKind, generation_mwh: float) -> float:
        penetration = {
            str(tech): float(p)
            for tech, p in _as_mapping(self.config.extras, "penetration").items()
        }
        tech_ef = _as_mapping(self.config.extras, "technology_ef")
        per_fuel = tech_ef.get(fuel.value, tech_ef.get(fuel))
        if per_fuel is None:
            raise ConfigError(
                f"tier3_tech has no technology factors for {fuel.value}; "
                "pass extras['technology_ef']"
            )
        split = split_by_penetration(generation_mwh, penetration)
        return tier3_technology(split, {str(t): float(v) for t, v in per_fuel.items()})

    def _extras_map(self, key: str, required: bool = True) -> dict[FuelKind, float]:
        raw = self.config.extras.get(key)
        if raw is None:
            if required:
                raise ConfigError(f"method {self.config.id.value} needs extras[{key!r}]")
            return {}
        out = {}
        for fuel, value in raw.items():
            kind = fuel if isinstance(fuel, FuelKind) else FuelKind.from_name(str(fuel))
            out[kind] = float(value)
        return out


def _as_mapping(extras: Mapping[str, object], key: str) -> Mapping:
    raw = extras.get(key)
    if not isinstance(raw, Mapping):
        raise ConfigError(f"tier3_tech needs extras[{key!r}] as a mapping")
    return raw
