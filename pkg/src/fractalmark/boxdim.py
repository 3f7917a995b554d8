"""Box-counting dimension of planar point clouds.

Algorithm:
    - rescale each axis independently onto the unit square
    - for each level k, partition the square into 2^k x 2^k half-open cells
      and count the cells holding at least one point
    - regress log2(count) on k; the slope estimates the box dimension

Levels where the sample is too sparse to fill its cells (more occupied
boxes than points / min_points_per_box) are excluded from the regression,
since a finite sample of a curve under-covers at fine scales.

``affine_fif_dimension_oracle`` gives the closed-form dimension of a
uniform-partition affine-base fractal interpolant, used to validate the
counting estimator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ComputationError, InputError
from .fif import ScalingVector

DEFAULT_K_MIN = 2
DEFAULT_K_MAX = 8
DEFAULT_MIN_POINTS_PER_BOX = 25
MAX_LEVEL = 30


@dataclass(frozen=True, eq=False)
class NormalizedCloud:
    """Points rescaled into the unit square, keeping the original bounds.

    ``degenerate_y`` marks a constant-y input, whose points were mapped to
    y = 0.5 by convention.
    """

    x: np.ndarray
    y: np.ndarray
    original_bounds: tuple[float, float, float, float]
    degenerate_y: bool = False

    def __post_init__(self) -> None:
        if self.x.shape != self.y.shape or self.x.ndim != 1:
            raise InputError("cloud must hold matching 1-D x and y arrays")
        if len(self.x) < 2:
            raise InputError("cloud must retain at least 2 points")
        for arr, name in ((self.x, "x"), (self.y, "y")):
            if arr.min() < 0.0 or arr.max() > 1.0:
                raise InputError(f"normalized {name} coordinates must lie in [0, 1]")

    def __len__(self) -> int:
        return len(self.x)


class BoxCountLevel(NamedTuple):
    k: int
    epsilon: float
    count: int


@dataclass(frozen=True)
class BoxCountCurve:
    """Occupied-cell counts per dyadic level, finest last."""

    levels: tuple[BoxCountLevel, ...]

    def __post_init__(self) -> None:
        for prev, cur in zip(self.levels, self.levels[1:]):
            if cur.k != prev.k + 1:
                continue
            if cur.count < prev.count:
                raise InputError("box counts must be non-decreasing as cells shrink")
            if cur.count > 4 * prev.count:
                raise InputError("a cell splits into 4: count(k+1) <= 4 count(k)")


@dataclass(frozen=True, eq=False)
class DimensionEstimate:
    """Regression slope over the usable levels, with fit quality and exclusions.

    Values outside [0, 2] (impossible for planar sets) or outside [1, 2]
    (expected for curve graphs) are flagged in ``warnings``, never clamped.
    """

    dimension: float
    r_squared: float
    levels_used: tuple[int, int]
    curve: BoxCountCurve
    excluded_levels: tuple[int, ...] = ()
    warnings: tuple[str, ...] = ()


def normalize_to_unit_square(x: np.ndarray, y: np.ndarray) -> NormalizedCloud:
    """Affine per-axis rescale onto [0, 1] x [0, 1].

    A constant-y input maps to y = 0.5 everywhere and is flagged; constant
    x (or a single repeated point) cannot be normalized.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or len(x) < 2:
        raise InputError("need two matching 1-D coordinate arrays with >= 2 points")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise InputError("cloud coordinates must be finite")
    x_min, x_max = float(x.min()), float(x.max())
    y_min, y_max = float(y.min()), float(y.max())
    if x_min == x_max and y_min == y_max:
        raise ComputationError("all points are identical: nothing to normalize")
    if x_min == x_max:
        raise ComputationError("degenerate x-range: cloud is a vertical segment")
    xn = np.clip((x - x_min) / (x_max - x_min), 0.0, 1.0)
    if y_min == y_max:
        return NormalizedCloud(
            xn, np.full_like(xn, 0.5), (x_min, x_max, y_min, y_max), degenerate_y=True
        )
    yn = np.clip((y - y_min) / (y_max - y_min), 0.0, 1.0)
    return NormalizedCloud(xn, yn, (x_min, x_max, y_min, y_max))


def _cell_keys(cloud: NormalizedCloud, k: int) -> np.ndarray:
    """Flattened cell index per point at level k (points at 1.0 go to the last cell)."""
    m = 1 << k
    xi = np.minimum((cloud.x * m).astype(np.int64), m - 1)
    yi = np.minimum((cloud.y * m).astype(np.int64), m - 1)
    return xi * m + yi


def count_boxes(cloud: NormalizedCloud, k: int) -> int:
    """Number of occupied cells in the 2^k x 2^k half-open grid."""
    if not 0 <= k <= MAX_LEVEL:
        raise InputError(f"level k must be in [0, {MAX_LEVEL}], got {k}")
    return int(np.unique(_cell_keys(cloud, k)).size)


def _counts_for_levels(cloud: NormalizedCloud, k_min: int, k_max: int) -> dict[int, int]:
    # One quantization at the finest level; coarser cells are bit-shifted
    # parents, which yields exactly the per-level counts of count_boxes.
    m = 1 << k_max
    xi = np.minimum((cloud.x * m).astype(np.int64), m - 1)
    yi = np.minimum((cloud.y * m).astype(np.int64), m - 1)
    finest = np.unique(xi * m + yi)
    fx, fy = finest // m, finest % m
    counts = {k_max: int(finest.size)}
    for k in range(k_max - 1, k_min - 1, -1):
        shift = k_max - k
        keys = ((fx >> shift) << k) + (fy >> shift)
        counts[k] = int(np.unique(keys).size)
    return counts


def estimate_dimension(
    cloud: NormalizedCloud,
    k_min: int = DEFAULT_K_MIN,
    k_max: int = DEFAULT_K_MAX,
    min_points_per_box: int = DEFAULT_MIN_POINTS_PER_BOX,
) -> DimensionEstimate:
    """OLS of log2(occupied cells) against the level k over [k_min, k_max].

    ``k_max`` is lowered automatically (and reported in ``warnings``) when
    the cloud holds fewer than ``min_points_per_box * 4^k_max`` points.
    Sparsity-saturated levels are excluded from the regression but kept in
    the returned curve.

    Raises
    ------
    ComputationError
        If fewer than 3 usable levels remain after exclusions.
    """
    if k_min >= k_max:
        raise InputError(f"k_min must be below k_max, got [{k_min}, {k_max}]")
    if not (0 <= k_min and k_max <= MAX_LEVEL):
        raise InputError(f"levels must lie in [0, {MAX_LEVEL}]")
    if min_points_per_box < 1:
        raise InputError("min_points_per_box must be >= 1")

    warnings: list[str] = []
    n = len(cloud)
    requested_k_max = k_max
    # keep at least 3 candidate levels; the per-level saturation exclusion
    # below handles whatever sparsity remains
    while k_max > k_min + 2 and n < min_points_per_box * 4**k_max:
        k_max -= 1
    if k_max != requested_k_max:
        warnings.append(
            f"k_max lowered from {requested_k_max} to {k_max}: "
            f"{n} points < {min_points_per_box} * 4^{requested_k_max}"
        )

    counts = _counts_for_levels(cloud, k_min, k_max)
    levels = tuple(
        BoxCountLevel(k, 2.0 ** (-k), counts[k]) for k in range(k_min, k_max + 1)
    )
    curve = BoxCountCurve(levels)

    saturation = n / min_points_per_box
    excluded = tuple(lv.k for lv in levels if lv.count > saturation)
    usable = [lv for lv in levels if lv.count <= saturation]
    if excluded:
        warnings.append(
            f"levels {list(excluded)} excluded: more boxes than points/{min_points_per_box}"
        )
    if len(usable) < 3:
        raise ComputationError(
            f"only {len(usable)} usable levels after exclusions; need at least 3"
        )

    ks = np.array([lv.k for lv in usable], dtype=float)
    logs = np.log2([lv.count for lv in usable])
    k_mean = ks.mean()
    slope = float(np.sum((ks - k_mean) * (logs - logs.mean())) / np.sum((ks - k_mean) ** 2))
    intercept = logs.mean() - slope * k_mean
    residuals = logs - (slope * ks + intercept)
    total = np.sum((logs - logs.mean()) ** 2)
    r_squared = float(1.0 - np.sum(residuals**2) / total) if total > 0.0 else 1.0

    if not 0.0 <= slope <= 2.0:
        warnings.append(f"dimension {slope:.4f} outside the planar range [0, 2]")
    if cloud.degenerate_y:
        warnings.append("cloud had a degenerate y-range (flattened to y = 0.5)")

    return DimensionEstimate(
        dimension=slope,
        r_squared=r_squared,
        levels_used=(int(ks[0]), int(ks[-1])),
        curve=curve,
        excluded_levels=excluded,
        warnings=tuple(warnings),
    )


def affine_fif_dimension_oracle(
    alpha: ScalingVector, intervals: int, collinear: bool = False
) -> float:
    """Closed-form box dimension of a uniform-partition affine-base fractal
    interpolant: 1 + log(sum |alpha_p|) / log(P) when the scaling is
    supercritical (sum > 1) and the data are not collinear, else 1."""
    if len(alpha) != intervals:
        raise InputError(f"need {intervals} scaling entries, got {len(alpha)}")
    total = alpha.sum_abs
    if collinear or total <= 1.0:
        return 1.0
    return 1.0 + math.log(total) / math.log(intervals)


def report_dict(estimate: DimensionEstimate, normalized: bool = True) -> dict:
    """JSON-ready report: dimension, fit quality, per-level counts, exclusions."""
    return {
        "dimension": estimate.dimension,
        "r_squared": estimate.r_squared,
        "levels_used": list(estimate.levels_used),
        "levels": [
            {"k": lv.k, "epsilon": lv.epsilon, "count": lv.count}
            for lv in estimate.curve.levels
        ],
        "excluded_levels": list(estimate.excluded_levels),
        "normalized": normalized,
        "warnings": list(estimate.warnings),
    }
