import numpy as np
import pandas as pd
import pytest

from indexpipe import add_pet, init, pet_thornthwaite
from indexpipe.errors import DomainError, InsufficientSampleError
from indexpipe.pet import daylight_hours, mean_daylight_by_month


def year_of_months(tavg_by_month):
    months = np.arange(1, 13)
    return np.asarray(tavg_by_month, dtype=float), months


def test_cold_months_have_zero_pet():
    tavg, months = year_of_months([-5, -2, 0, 4, 10, 16, 20, 19, 13, 7, 1, -3])
    pet = pet_thornthwaite(tavg, months, lat=48.0)
    assert (pet[tavg <= 0] == 0.0).all()
    assert (pet[tavg > 0] > 0.0).all()


def test_equator_daylight_is_twelve_hours():
    assert daylight_hours(0.0, np.arange(1, 366)) == pytest.approx(12.0, abs=1e-9)
    assert mean_daylight_by_month(0.0) == pytest.approx(np.full(12, 12.0), abs=1e-9)


def test_constant_temperature_equator_equal_pet_in_30_day_months():
    tavg, months = year_of_months([20.0] * 12)
    pet = pet_thornthwaite(tavg, months, lat=0.0)
    thirty = pet[np.isin(months, (4, 6, 9, 11))]
    assert np.ptp(thirty) == pytest.approx(0.0, abs=1e-12)
    # 31-day months scale by exactly 31/30 at the equator
    assert pet[0] == pytest.approx(thirty[0] * 31.0 / 30.0, rel=1e-12)


def test_daylight_asymmetry_between_hemispheres():
    # southern-hemisphere January days are long, northern short
    assert daylight_hours(-30.0, 15) > 13.0
    assert daylight_hours(30.0, 15) < 11.0


def test_missing_calendar_month_is_error():
    tavg = np.array([10.0] * 11)
    months = np.arange(1, 12)
    with pytest.raises(InsufficientSampleError, match="12"):
        pet_thornthwaite(tavg, months, lat=10.0)


def test_latitude_domain():
    tavg, months = year_of_months([10.0] * 12)
    with pytest.raises(DomainError):
        pet_thornthwaite(tavg, months, lat=95.0)


def test_leap_year_february_slightly_larger():
    tavg, months = year_of_months([15.0] * 12)
    leap = pet_thornthwaite(tavg, months, lat=0.0, year=np.full(12, 2020))
    normal = pet_thornthwaite(tavg, months, lat=0.0, year=np.full(12, 2021))
    assert leap[1] == pytest.approx(normal[1] * 29.0 / 28.0, rel=1e-12)


def test_add_pet_column(station_ctx):
    out = add_pet(station_ctx)
    assert ".pet" in out.table.columns
    assert (out.table[".pet"] >= 0).all()


def test_add_pet_requires_constant_latitude(station_ctx):
    df = station_ctx.table.copy()
    df.loc[df.index[:3], "lat"] = -10.0
    ctx = init(df, id="id", time="ym", group="month")
    with pytest.raises(DomainError, match="varies"):
        add_pet(ctx)
