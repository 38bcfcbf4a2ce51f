from datetime import datetime, timedelta, timezone

import pytest

from gridco2 import FuelKind, FuelRegistry, GenerationRecord

UTC = timezone.utc
T0 = datetime(2022, 1, 1, tzinfo=UTC)


def hour(i: int, start: datetime = T0) -> datetime:
    return start + timedelta(hours=i)


def record(i: int, zone="North", fuel=FuelKind.NATURAL_GAS, mwh=100.0, start=T0):
    return GenerationRecord(zone=zone, timestamp=hour(i, start), fuel=fuel, generation_mwh=mwh)


@pytest.fixture(scope="session")
def registry() -> FuelRegistry:
    return FuelRegistry.builtin()
