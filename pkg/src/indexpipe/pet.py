"""Thornthwaite potential evapotranspiration from temperature and latitude.

Monthly PET in mm:

    PET = 16 * (L/12) * (N/30) * (10*T/I)^a        for T > 0, else 0

where T is the monthly mean temperature (deg C), N the days in the month,
L the month's mean daylight hours from standard solar declination, I the
annual heat index

    I = sum over calendar months of (T_m / 5)^1.514   over months with T_m > 0

computed from the entity's 12 calendar-month climatology means, and

    a = 6.75e-7*I^3 - 7.71e-5*I^2 + 1.792e-2*I + 0.49239
"""
from __future__ import annotations

import calendar
import math

import numpy as np
import pandas as pd

from .errors import DomainError, InsufficientSampleError
from .pipeline import PipelineContext, register_operation
from .table import require_numeric

DAYS_IN_MONTH = (31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31)


def solar_declination(doy) -> np.ndarray:
    return 0.409 * np.sin(2.0 * math.pi * np.asarray(doy, dtype=float) / 365.0 - 1.39)


def daylight_hours(lat_deg: float, doy) -> np.ndarray:
    phi = math.radians(lat_deg)
    delta = solar_declination(doy)
    cos_ws = np.clip(-math.tan(phi) * np.tan(delta), -1.0, 1.0)
    return 24.0 / math.pi * np.arccos(cos_ws)


def mean_daylight_by_month(lat_deg: float) -> np.ndarray:
    """Mean daylight hours for each calendar month (non-leap day numbering)."""
    out = np.empty(12)
    doy = 1
    for m, days in enumerate(DAYS_IN_MONTH):
        out[m] = daylight_hours(lat_deg, np.arange(doy, doy + days)).mean()
        doy += days
    return out


def heat_index(monthly_means) -> float:
    t = np.asarray(monthly_means, dtype=float)
    if t.shape != (12,):
        raise InsufficientSampleError(
            f"heat index needs 12 calendar-month means, got {t.size}", n=int(t.size)
        )
    warm = t > 0
    return float(((t[warm] / 5.0) ** 1.514).sum())


def thornthwaite_exponent(i: float) -> float:
    return 6.75e-7 * i**3 - 7.71e-5 * i**2 + 1.792e-2 * i + 0.49239


def pet_thornthwaite(tavg, month, lat: float, year=None) -> np.ndarray:
    """PET series (mm/month) for one entity.

    ``tavg``/``month`` (1-12) are row-aligned; ``year`` enables leap-aware
    day counts when given. The heat index comes from the series' own
    calendar-month climatology, which must cover all 12 months.
    """
    if not -90.0 <= lat <= 90.0:
        raise DomainError(f"latitude must be in [-90, 90], got {lat!r}")
    t = np.asarray(tavg, dtype=float)
    m = np.asarray(month, dtype=int)
    if np.any((m < 1) | (m > 12)):
        raise DomainError("month values must be in 1..12")

    clim = pd.Series(t).groupby(m).mean()
    if len(clim) < 12:
        missing = sorted(set(range(1, 13)) - set(clim.index))
        raise InsufficientSampleError(
            f"heat index needs all 12 calendar months; missing {missing}", n=len(clim)
        )
    i = heat_index(clim.sort_index().to_numpy())
    a = thornthwaite_exponent(i)
    daylight = mean_daylight_by_month(lat)[m - 1]
    if year is not None:
        y = np.asarray(year, dtype=int)
        days = np.array([calendar.monthrange(yy, mm)[1] for yy, mm in zip(y, m)], dtype=float)
    else:
        days = np.asarray(DAYS_IN_MONTH, dtype=float)[m - 1]

    pet = np.zeros_like(t)
    warm = t > 0
    if i > 0:
        pet[warm] = (
            16.0 * (daylight[warm] / 12.0) * (days[warm] / 30.0) * (10.0 * t[warm] / i) ** a
        )
    return pet


@register_operation("add_pet")
def add_pet(
    ctx: PipelineContext, tavg: str = "tavg", lat: str = "lat", out: str = ".pet"
) -> PipelineContext:
    """Per-entity Thornthwaite PET column from the monthly time axis."""
    require_numeric(ctx.table, tavg)
    require_numeric(ctx.table, lat)
    if ctx.time_role is None:
        raise DomainError("add_pet requires a time role with monthly periods")
    time = ctx.table[ctx.time_role]
    if isinstance(time.dtype, pd.PeriodDtype):
        months, years = time.dt.month.to_numpy(), time.dt.year.to_numpy()
    elif pd.api.types.is_datetime64_any_dtype(time):
        months, years = time.dt.month.to_numpy(), time.dt.year.to_numpy()
    else:
        raise DomainError("add_pet needs a period or datetime time column to read months")

    table = ctx.table.copy()
    pet = np.empty(len(table))
    for _, sub in table.groupby(ctx.id_role, sort=False):
        lats = sub[lat].to_numpy(dtype=float)
        if np.nanmax(lats) - np.nanmin(lats) > 1e-9:
            raise DomainError(f"latitude varies within entity {sub[ctx.id_role].iloc[0]!r}")
        pos = sub.index.to_numpy()
        pet[pos] = pet_thornthwaite(
            sub[tavg].to_numpy(dtype=float), months[pos], float(lats[0]), year=years[pos]
        )
    table[out] = pet
    return ctx.with_table(
        table, module="indexes", operation="add_pet", tavg=tavg, lat=lat, out=out
    )
