"""Comparison statistics: winter windows, summary, reconciliation error,
lagged autocorrelation and weekly seasonality.

Empirical quantiles here use linear-interpolation (type-7) quantiles on the
hourly sample, which is the convention for continuous samples; discrete
outage PMFs in fleet.pmf_stats use the inverse-CDF convention instead.  The
two are deliberately documented side by side.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, datetime, timedelta, timezone
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import InvalidInputError, StatsError
from .ingest.reconcile import HourlyOutageSeries
from .timeseries import HOUR, HourRange, HourlySeries

#: Table-style report lags: one hour, six hours, one day, one week.
REPORT_LAGS_HOURS = (1, 6, 24, 168)

WEEKS_IN_WINDOW = 20
EXCLUDED_WEEKS = 2
RETAINED_HOURS = (WEEKS_IN_WINDOW - EXCLUDED_WEEKS) * 168  # 3024

AnySeries = Union[HourlyOutageSeries, HourlySeries]


@dataclass(frozen=True)
class WinterWindow:
    """The retained hours of one winter season.

    Twenty 7-day blocks from the first Sunday of November, minus the two
    blocks containing Dec 25 and Jan 1 (the low-demand weeks around
    Christmas), leaving exactly 3024 hours.
    """

    label: str
    hours: tuple[datetime, ...]

    @property
    def span(self) -> HourRange:
        """Contiguous range covering the window including the excluded weeks."""
        return HourRange.from_span(self.hours[0], self.hours[-1] + HOUR)

    def indices_in(self, rng: HourRange) -> np.ndarray:
        """Positions of the window's hours inside an hourly range."""
        try:
            first = rng.index_of(self.hours[0])
            last = rng.index_of(self.hours[-1])
        except InvalidInputError as exc:
            raise InvalidInputError(
                f"window {self.label} not covered by series range"
            ) from exc
        base = self.hours[0]
        offsets = np.fromiter(
            (int((h - base) / HOUR) for h in self.hours), dtype=np.int64, count=len(self.hours)
        )
        idx = first + offsets
        assert idx[-1] == last
        return idx


def first_sunday_of_november(year: int) -> date:
    d = date(year, 11, 1)
    return d + timedelta(days=(6 - d.weekday()) % 7)


def winter_window(winter_start_year: int) -> WinterWindow:
    """Winter window for the season starting in ``winter_start_year``."""
    if not 2000 <= winter_start_year <= 2099:
        raise InvalidInputError(f"unsupported winter start year {winter_start_year}")
    start_day = first_sunday_of_november(winter_start_year)
    start = datetime(start_day.year, start_day.month, start_day.day, tzinfo=timezone.utc)

    def block_of(d: date) -> int:
        return (d - start_day).days // 7

    excluded = {
        block_of(date(winter_start_year, 12, 25)),
        block_of(date(winter_start_year + 1, 1, 1)),
    }
    hours: list[datetime] = []
    for week in range(WEEKS_IN_WINDOW):
        if week in excluded:
            continue
        week_start = start + timedelta(days=7 * week)
        hours.extend(week_start + k * HOUR for k in range(168))
    label = f"{winter_start_year % 100:02d}/{(winter_start_year + 1) % 100:02d}"
    return WinterWindow(label=label, hours=tuple(hours))


def season_label_to_year(label: str) -> int:
    """Winter start year for a season label such as '16/17'."""
    try:
        first, second = label.split("/")
        if len(first) != 2 or len(second) != 2:
            raise ValueError
        year = 2000 + int(first)
        if int(second) != (year + 1) % 100:
            raise ValueError
    except ValueError:
        raise InvalidInputError(f"bad season label {label!r}; expected e.g. '16/17'") from None
    return year


def _series_values(series: AnySeries) -> np.ndarray:
    if isinstance(series, HourlyOutageSeries):
        return series.o_mean_mw
    return series.values_mw


def _window_values(series: AnySeries, window: WinterWindow | None) -> np.ndarray:
    values = _series_values(series)
    if window is None:
        return values
    return values[window.indices_in(series.range)]


def sample_stats(values: np.ndarray) -> tuple[float, float]:
    """Mean and type-7 interquartile range of an hourly sample."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise InvalidInputError("empty sample")
    q25, q75 = np.quantile(values, [0.25, 0.75])
    return float(values.mean()), float(q75 - q25)


def summary(series: AnySeries, window: WinterWindow | None = None) -> tuple[float, float]:
    """Mean and IQR (MW) of the hourly outage over a window.

    ``window=None`` evaluates the whole series.
    """
    return sample_stats(_window_values(series, window))


def reconciliation_error(
    series: HourlyOutageSeries, window: WinterWindow | None = None
) -> float:
    """Relative mean absolute reconciliation error over the evaluation period.

    The l1 distance between the reconciled outage and its lower envelope,
    divided by the l1 norm of the reconciled outage; a data-quality measure
    of how much conflicting reports could move the series.  Scale-invariant;
    zero exactly when no hour has conflicting reports.
    """
    if window is None:
        mean_vals = series.o_mean_mw
        min_vals = series.o_min_mw
    else:
        idx = window.indices_in(series.range)
        mean_vals = series.o_mean_mw[idx]
        min_vals = series.o_min_mw[idx]
    denom = float(np.abs(mean_vals).sum())
    if denom == 0.0:
        raise StatsError("reconciliation error undefined: series has zero total outage")
    return float(np.abs(mean_vals - min_vals).sum() / denom)


def acf_values(values: np.ndarray, lags: Sequence[int], *, context: str = "series") -> dict[int, float]:
    """Sample autocorrelation of one window at the given lags.

    Uses the standard biased estimator with the window's own mean removed;
    lag 0 is exactly 1.
    """
    x = np.asarray(values, dtype=np.float64)
    if x.size < 2:
        raise InvalidInputError(f"{context}: need at least 2 values for autocorrelation")
    xc = x - x.mean()
    denom = float(xc @ xc)
    if denom == 0.0:
        raise StatsError(f"{context}: zero variance, autocorrelation undefined")
    out: dict[int, float] = {}
    for lag in lags:
        if lag < 0 or lag >= x.size:
            raise InvalidInputError(f"{context}: lag {lag} outside [0, {x.size - 1}]")
        if lag == 0:
            out[0] = 1.0
        else:
            out[lag] = float(xc[:-lag] @ xc[lag:] / denom)
    return out


def autocorrelation(
    series: AnySeries,
    windows: Iterable[WinterWindow] | None,
    lags: Sequence[int] = REPORT_LAGS_HOURS,
) -> dict[int, float]:
    """Mean sample autocorrelation across windows at the given lags.

    Each window is evaluated on its own (windows are not contiguous in time,
    so values are never correlated across a window seam) and the per-window
    autocorrelations are averaged with equal weight.  ``windows=None``
    treats the whole series as a single window.
    """
    window_list: list[WinterWindow | None] = list(windows) if windows is not None else [None]
    if not window_list:
        raise InvalidInputError("no windows given")
    per_window: list[dict[int, float]] = []
    for w in window_list:
        label = w.label if w is not None else "full series"
        per_window.append(acf_values(_window_values(series, w), lags, context=f"window {label}"))
    return {lag: float(np.mean([acf[lag] for acf in per_window])) for lag in lags}


def weekly_profile(
    series: AnySeries, demand: HourlySeries | None = None
) -> np.ndarray | tuple[np.ndarray, np.ndarray]:
    """Normalized mean weekly level over the year (52 values, mean 1).

    Hours are pooled by ISO week number across all covered years (week 53
    folds into week 52), averaged per week, then divided by the mean of the
    52 weekly values.  The same transform applies to the optional demand
    series, in which case a pair of profiles is returned.
    """
    profile = _weekly_profile_one(series)
    if demand is None:
        return profile
    return profile, _weekly_profile_one(demand)


def _weekly_profile_one(series: AnySeries) -> np.ndarray:
    values = _series_values(series)
    if values.size < 8760:
        raise InvalidInputError(
            f"series spans {values.size} hours; a weekly profile needs at least one full year"
        )
    rng = series.range
    weeks = np.fromiter(
        (min(ts.isocalendar()[1], 52) for ts in rng.hours()),
        dtype=np.int64,
        count=rng.n_hours,
    )
    sums = np.bincount(weeks - 1, weights=values, minlength=52)
    counts = np.bincount(weeks - 1, minlength=52)
    means = sums / counts
    overall = means.mean()
    if overall == 0.0:
        raise StatsError("weekly profile undefined: series is identically zero")
    return means / overall


@dataclass(frozen=True)
class SummaryStats:
    """Bundle of the comparison statistics for one series.

    ``recon_error`` and ``acf`` are None/empty where they do not apply: a
    time-collapsed model PMF has no reconciliation envelope and no time
    axis, and an identically-zero channel has no defined autocorrelation.
    """

    mean_mw: float
    iqr_mw: float
    recon_error: float | None
    acf: dict[int, float]

    def __post_init__(self) -> None:
        if self.iqr_mw < 0.0:
            raise InvalidInputError(f"IQR must be >= 0, got {self.iqr_mw}")
        if self.recon_error is not None and self.recon_error < 0.0:
            raise InvalidInputError(f"reconciliation error must be >= 0, got {self.recon_error}")
