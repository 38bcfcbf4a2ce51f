"""Fuel taxonomy, emission-factor parameter sets, and unit conversion.

Two parameter sets ship builtin: the international default factors (IPCC)
and the Italian country-specific factors (ISPRA), each covering the four
fossil fuel categories that dominate thermoelectric generation.  Factors are
stored at full precision on the tCO2/TJ basis; the tCO2/MWh basis used by
all estimators is derived, never typed in rounded.

Custom parameter sets can be loaded from a JSON or TOML file and override or
extend the builtin rows.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .errors import ConfigError

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as tomllib

#: Mass ratio of CO2 to elemental carbon (44/12), kept at full float precision.
CO2_PER_CARBON_MASS = 44.0 / 12.0

#: MWh contained in one TJ, as conventionally rounded in emission inventories.
MWH_PER_TJ = 277.7778


class FuelKind(str, Enum):
    """The four emitting fuel categories tracked by the estimators."""

    FOSSIL_COAL = "fossil_coal"
    DERIVED_GAS = "derived_gas"
    NATURAL_GAS = "natural_gas"
    FOSSIL_OIL = "fossil_oil"

    @classmethod
    def from_name(cls, name: str) -> "FuelKind":
        key = name.strip().lower().replace("-", "_").replace(" ", "_")
        for member in cls:
            if member.value == key:
                return member
        known = ", ".join(m.value for m in cls)
        raise ConfigError(f"unknown fuel kind {name!r}; known kinds: {known}")


class EfSource(str, Enum):
    """Provenance of an emission-factor parameter set."""

    IPCC = "ipcc"
    ISPRA = "ispra"

    @classmethod
    def from_name(cls, name: str) -> "EfSource":
        key = name.strip().lower()
        for member in cls:
            if member.value == key:
                return member
        known = ", ".join(m.value for m in cls)
        raise ConfigError(f"unknown factor source {name!r}; known sources: {known}")


def convert_ef(ef_per_tj: float) -> float:
    """Convert an emission factor from tCO2/TJ to tCO2/MWh.

    Uses the conventional 1 TJ = 277.7778 MWh equivalence.  The result is
    not rounded; display rounding is the reporter's job.
    """
    if ef_per_tj < 0:
        raise ValueError(f"emission factor must be nonnegative, got {ef_per_tj}")
    return ef_per_tj / MWH_PER_TJ


@dataclass(frozen=True)
class FuelParameters:
    """One row of an emission-factor parameter set.

    ``ncv`` is the net calorific value in TJ per kiloton of fuel and is only
    published for some sources; it stays ``None`` where the source set has
    no value, and estimators that need it refuse to run without it.
    """

    fuel: FuelKind
    source: EfSource
    ef_per_tj: float
    ef_per_mwh: float
    oxidation_fraction: float
    ncv: float | None = None

    def __post_init__(self):
        if self.ef_per_tj < 0 or self.ef_per_mwh < 0:
            raise ValueError("emission factors must be nonnegative")
        if not 0 < self.oxidation_fraction <= 1:
            raise ValueError(
                f"oxidation fraction must be in (0, 1], got {self.oxidation_fraction}"
            )
        if self.ncv is not None and self.ncv <= 0:
            raise ValueError(f"net calorific value must be positive, got {self.ncv}")


# (source, fuel) -> (ef tCO2/TJ, oxidation fraction, NCV TJ/kt or None)
_BUILTIN: dict[tuple[EfSource, FuelKind], tuple[float, float, float | None]] = {
    (EfSource.IPCC, FuelKind.FOSSIL_COAL): (94.60, 0.92, 20.91),
    (EfSource.IPCC, FuelKind.DERIVED_GAS): (107.07, 0.93, 33.46),
    (EfSource.IPCC, FuelKind.NATURAL_GAS): (56.10, 0.99, 38.93),
    (EfSource.IPCC, FuelKind.FOSSIL_OIL): (77.7, 0.98, 41.82),
    (EfSource.ISPRA, FuelKind.FOSSIL_COAL): (94.13, 1.0, None),
    (EfSource.ISPRA, FuelKind.DERIVED_GAS): (163.36, 1.0, None),
    (EfSource.ISPRA, FuelKind.NATURAL_GAS): (56.38, 1.0, None),
    (EfSource.ISPRA, FuelKind.FOSSIL_OIL): (76.59, 1.0, None),
}


def builtin_parameters(source: EfSource, fuel: FuelKind) -> FuelParameters:
    """Return the builtin parameter row for one (source, fuel) pair."""
    ef_per_tj, oxidation, ncv = _BUILTIN[(source, fuel)]
    return FuelParameters(
        fuel=fuel,
        source=source,
        ef_per_tj=ef_per_tj,
        ef_per_mwh=convert_ef(ef_per_tj),
        oxidation_fraction=oxidation,
        ncv=ncv,
    )


class FuelRegistry:
    """Immutable lookup of :class:`FuelParameters` by (source, fuel).

    ``FuelRegistry.builtin()`` carries the eight builtin rows.  Registries
    built from a config file start from the builtin rows and override or
    extend them, so a file only needs to list the rows that differ.
    """

    def __init__(self, parameters: "tuple[FuelParameters, ...] | list[FuelParameters]" = ()):
        table = {(p.source, p.fuel): p for p in self._builtin_rows()}
        for p in parameters:
            table[(p.source, p.fuel)] = p
        self._table = table

    @staticmethod
    def _builtin_rows() -> list[FuelParameters]:
        return [builtin_parameters(source, fuel) for source, fuel in _BUILTIN]

    @classmethod
    def builtin(cls) -> "FuelRegistry":
        return cls()

    @classmethod
    def from_file(cls, path: str | Path) -> "FuelRegistry":
        """Load overrides from a JSON or TOML file.

        Both formats share one schema: a top-level ``fuels`` array of tables
        with keys ``fuel``, ``source``, ``ef_per_tj``, ``oxidation_fraction``
        and optional ``ncv`` / ``ef_per_mwh`` (the MWh basis is derived when
        omitted).
        """
        path = Path(path)
        try:
            if path.suffix.lower() == ".toml":
                with open(path, "rb") as fh:
                    payload = tomllib.load(fh)
            else:
                with open(path, "r", encoding="utf-8") as fh:
                    payload = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read registry file {path}: {exc}") from exc
        except (json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
            raise ConfigError(f"cannot parse registry file {path}: {exc}") from exc
        rows = payload.get("fuels") if isinstance(payload, dict) else payload
        if not isinstance(rows, list):
            raise ConfigError(
                f"registry file {path} must hold a 'fuels' array of parameter tables"
            )
        parameters = []
        for i, row in enumerate(rows):
            if not isinstance(row, dict):
                raise ConfigError(f"registry entry {i} is not a table")
            try:
                ef_per_tj = float(row["ef_per_tj"])
                parameters.append(
                    FuelParameters(
                        fuel=FuelKind.from_name(str(row["fuel"])),
                        source=EfSource.from_name(str(row["source"])),
                        ef_per_tj=ef_per_tj,
                        ef_per_mwh=float(row.get("ef_per_mwh", convert_ef(ef_per_tj))),
                        oxidation_fraction=float(row.get("oxidation_fraction", 1.0)),
                        ncv=float(row["ncv"]) if row.get("ncv") is not None else None,
                    )
                )
            except KeyError as exc:
                raise ConfigError(f"registry entry {i} is missing key {exc}") from exc
            except ValueError as exc:
                raise ConfigError(f"registry entry {i} is invalid: {exc}") from exc
        return cls(parameters)

    def get(self, source: EfSource, fuel: FuelKind) -> FuelParameters:
        try:
            return self._table[(source, fuel)]
        except KeyError:
            raise ConfigError(
                f"no parameters for source={source.value} fuel={fuel.value}"
            ) from None

    def parameters_for(self, source: EfSource) -> dict[FuelKind, FuelParameters]:
        """All rows of one source, keyed by fuel, in fuel declaration order."""
        return {
            fuel: self._table[(source, fuel)]
            for fuel in FuelKind
            if (source, fuel) in self._table
        }
