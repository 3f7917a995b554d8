"""Market-model event study: expected returns, abnormal returns, AAR/CAAR.

The chain is: estimate beta by OLS of asset excess returns on market excess
returns, take expected return ``r_f + beta * (r_m - r_f)``, subtract from the
actual return to get the abnormal return, average across securities per
event-window day (AAR) and accumulate over the window (CAAR). A 31-day
window centred on the event can be subsampled onto an 11-point unit grid,
which is the input format for fractal interpolation downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date as Date
from typing import Sequence

import numpy as np

from .errors import ComputationError, InputError
from .market_data import ReturnSeries, align_on_common_dates

DEFAULT_PRE_DAYS = 15
DEFAULT_POST_DAYS = 15
DEFAULT_ESTIMATION_WINDOW_DAYS = 120


@dataclass(frozen=True)
class CapmParams:
    """Fitted market-model parameters: slope (beta), intercept, daily risk-free rate."""

    beta: float
    intercept: float
    risk_free_daily: float

    def __post_init__(self) -> None:
        for name in ("beta", "intercept", "risk_free_daily"):
            if not math.isfinite(getattr(self, name)):
                raise InputError(f"{name} must be finite")


@dataclass(frozen=True)
class EventWindow:
    """Trading dates covering relative days -pre..+post around an event.

    Relative day 0 is the first trading day on or after ``event_date``.
    """

    event_date: Date
    pre_days: int
    post_days: int
    relative_days: tuple[int, ...]
    dates: tuple[Date, ...]

    def __post_init__(self) -> None:
        expected = self.pre_days + self.post_days + 1
        if len(self.relative_days) != expected or len(self.dates) != expected:
            raise InputError(
                f"window must cover {expected} days, got {len(self.dates)} dates"
            )
        for prev, cur in zip(self.dates, self.dates[1:]):
            if cur <= prev:
                raise InputError("window dates must be strictly increasing")
        if self.dates[self.pre_days] < self.event_date:
            raise InputError("relative day 0 must be on or after the event date")

    def __len__(self) -> int:
        return len(self.dates)


@dataclass(frozen=True, eq=False)
class AbnormalReturnPanel:
    """Per-security abnormal returns with cross-sectional AAR and running CAAR.

    ``ar`` is an N x T matrix (N securities, T window days);
    ``aar[t]`` is the mean of column t and ``caar`` its running sum.
    """

    securities: tuple[str, ...]
    ar: np.ndarray
    aar: np.ndarray
    caar: np.ndarray

    def __post_init__(self) -> None:
        if self.ar.ndim != 2:
            raise InputError("ar must be a 2-D matrix")
        n, t = self.ar.shape
        if len(self.securities) != n:
            raise InputError("one security label required per ar row")
        if self.aar.shape != (t,) or self.caar.shape != (t,):
            raise InputError("aar and caar must have one entry per window day")
        if not np.all(np.isfinite(self.ar)):
            raise InputError("abnormal returns must be finite")
        if not np.allclose(self.aar, self.ar.mean(axis=0), rtol=0.0, atol=1e-12):
            raise InputError("aar must be the per-day mean of ar")
        if not np.allclose(self.caar, np.cumsum(self.aar), rtol=0.0, atol=1e-12):
            raise InputError("caar must be the running sum of aar")

    @property
    def n_securities(self) -> int:
        return self.ar.shape[0]

    @property
    def n_days(self) -> int:
        return self.ar.shape[1]


@dataclass(frozen=True, eq=False)
class InterpolationData:
    """Strictly increasing abscissae on [0, 1] with ordinates: fractal-interpolation input.

    Requires x[0] = 0, x[-1] = 1 and at least 3 points. Collinearity is not
    rejected here; the interpolation module checks it where it matters.
    """

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float))
        if self.x.ndim != 1 or self.x.shape != self.y.shape:
            raise InputError("x and y must be 1-D arrays of equal length")
        if len(self.x) < 3:
            raise InputError("interpolation data needs at least 3 points")
        if not (np.all(np.isfinite(self.x)) and np.all(np.isfinite(self.y))):
            raise InputError("interpolation data must be finite")
        if np.any(np.diff(self.x) <= 0.0):
            raise InputError("abscissae must be strictly increasing")
        if abs(self.x[0]) > 1e-12 or abs(self.x[-1] - 1.0) > 1e-12:
            raise InputError("abscissae must be normalized to [0, 1]")

    def __len__(self) -> int:
        return len(self.x)

    @property
    def intervals(self) -> int:
        return len(self.x) - 1


def estimate_capm(
    asset: ReturnSeries, market: ReturnSeries, risk_free_daily: float = 0.0
) -> CapmParams:
    """OLS of asset excess returns on market excess returns.

    Series are aligned on their common dates first; at least 3 paired
    observations are required. The slope is beta, the intercept is alpha.

    Raises
    ------
    ComputationError
        If fewer than 3 paired observations exist or the market excess
        returns have zero variance (degenerate regression).
    """
    if asset.dates != market.dates:
        asset, market = align_on_common_dates(asset, market)
    if len(asset) < 3:
        raise ComputationError(
            f"beta estimation needs >= 3 paired observations, got {len(asset)}"
        )
    y = np.asarray(asset.values, dtype=float) - risk_free_daily
    x = np.asarray(market.values, dtype=float) - risk_free_daily
    if np.ptp(x) == 0.0:
        raise ComputationError("market excess returns are constant: degenerate regression")
    x_mean = x.mean()
    y_mean = y.mean()
    beta = float(np.sum((x - x_mean) * (y - y_mean)) / np.sum((x - x_mean) ** 2))
    intercept = float(y_mean - beta * x_mean)
    return CapmParams(beta=beta, intercept=intercept, risk_free_daily=risk_free_daily)


def expected_return(params: CapmParams, market_return: float) -> float:
    """Market-model expected return: r_f + beta * (r_m - r_f)."""
    return params.risk_free_daily + params.beta * (market_return - params.risk_free_daily)


def abnormal_return(actual: float, expected: float) -> float:
    """Actual minus expected return."""
    return actual - expected


def build_panel(
    ar_matrix: Sequence[Sequence[float]] | np.ndarray,
    securities: Sequence[str] | None = None,
) -> AbnormalReturnPanel:
    """Aggregate an N x T abnormal-return matrix into AAR and CAAR.

    Raises
    ------
    InputError
        If the matrix is ragged, empty or non-finite.
    """
    ar = np.asarray(ar_matrix, dtype=object)
    if ar.ndim != 2:
        raise InputError("abnormal-return matrix must be rectangular (ragged input?)")
    ar = np.asarray(ar_matrix, dtype=float)
    if ar.size == 0:
        raise InputError("abnormal-return matrix must be non-empty")
    if not np.all(np.isfinite(ar)):
        raise InputError("abnormal returns must be finite")
    if securities is None:
        securities = tuple(f"security_{i + 1}" for i in range(ar.shape[0]))
    aar = ar.mean(axis=0)
    caar = np.cumsum(aar)
    return AbnormalReturnPanel(tuple(securities), ar, aar, caar)


def extract_event_window(
    series: ReturnSeries,
    event_date: Date,
    pre_days: int = DEFAULT_PRE_DAYS,
    post_days: int = DEFAULT_POST_DAYS,
) -> EventWindow:
    """Select pre + 1 + post trading dates around ``event_date``.

    Relative day 0 maps to the first trading date >= ``event_date`` (an
    event on a non-trading day rolls forward to the next session).

    Raises
    ------
    ComputationError
        If the series has too few trading days on either side, naming the
        required versus available counts.
    """
    if pre_days < 0 or post_days < 0:
        raise InputError("pre_days and post_days must be non-negative")
    dates = series.dates
    day0 = next((i for i, d in enumerate(dates) if d >= event_date), None)
    if day0 is None:
        raise ComputationError(
            f"no trading day on or after {event_date} in series {series.instrument_id!r}"
        )
    if day0 < pre_days:
        raise ComputationError(
            f"insufficient history before {event_date}: need {pre_days} trading days, "
            f"have {day0}"
        )
    available_post = len(dates) - 1 - day0
    if available_post < post_days:
        raise ComputationError(
            f"insufficient history after {event_date}: need {post_days} trading days, "
            f"have {available_post}"
        )
    window_dates = dates[day0 - pre_days : day0 + post_days + 1]
    relative = tuple(range(-pre_days, post_days + 1))
    return EventWindow(event_date, pre_days, post_days, relative, tuple(window_dates))


def subsample_to_grid(window_values: Sequence[float]) -> InterpolationData:
    """Pick every third relative day of a 31-day window onto x = 0.0 .. 1.0.

    The selected relative days are {-15, -12, ..., +12, +15}; the 11 chosen
    values are mapped to the uniform unit grid.
    """
    values = np.asarray(window_values, dtype=float)
    if values.shape != (31,):
        raise InputError(f"expected exactly 31 window values, got {values.shape}")
    picked = values[::3]
    x = np.arange(11) / 10.0
    return InterpolationData(x, picked)


def estimation_sample(
    aligned_dates: Sequence[Date],
    window_start: Date,
    estimation_window_days: int = DEFAULT_ESTIMATION_WINDOW_DAYS,
) -> list[Date]:
    """Trading dates used for beta estimation: the last ``estimation_window_days``
    dates strictly before the event window opens (fewer if history is short)."""
    before = [d for d in aligned_dates if d < window_start]
    return before[-estimation_window_days:]


def panel_csv(panel: AbnormalReturnPanel, relative_days: Sequence[int]) -> str:
    """Render a panel as ``relative_day,x,aar,caar`` CSV with x on [0, 1]."""
    t = panel.n_days
    if len(relative_days) != t:
        raise InputError("one relative day required per panel column")
    lines = ["relative_day,x,aar,caar"]
    for i, day in enumerate(relative_days):
        x = i / (t - 1) if t > 1 else 0.0
        lines.append(f"{day},{x!r},{float(panel.aar[i])!r},{float(panel.caar[i])!r}")
    return "\n".join(lines) + "\n"
