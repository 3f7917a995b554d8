"""Fractal interpolation functions with vertical scaling.

Given data {(x_i, y_i), i = 0..P} on [0, 1], each interval A_p = [x_{p-1}, x_p]
carries an affine contraction l_p(x) = a_p x + b_p mapping [x_0, x_P] onto A_p.
Pairing l_p with the vertical map F_p(x, y) = alpha_p y + q_p(x), where

    q_p(x) = germ(l_p(x)) - alpha_p * base(x),

yields an iterated function system whose unique attractor is the graph of a
continuous function interpolating the data. The germ is a continuous
interpolant of the data (here its piecewise-linear interpolant); the base is
any continuous function agreeing with the data at both endpoints (here
``germ(x^2)``, or the straight chord for the classical affine construction).

Two evaluators are provided. ``generate_attractor_points`` iterates the IFS
maps from the data nodes, producing points that lie exactly on the graph:
this is the canonical sampler for dimension analysis. ``evaluate_fif_fixed_point``
iterates the contraction T(h)(x) = alpha_p h(l_p^{-1}(x)) + q_p(l_p^{-1}(x))
on a grid to the fixed point: this is the cross-check and plotting evaluator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ComputationError, InputError
from .event_study import InterpolationData

ENDPOINT_TOL = 1e-12
NODE_TOL = 1e-10
CONTINUITY_TOL = 1e-10
# Distinct attractor abscissae are never closer than ~min_width^depth; FP
# duplicates at interval seams differ by a few ulps, so this separates them.
DEDUP_TOL = 1e-13

DEFAULT_GRID_SIZE = 6401
DEFAULT_TOL = 1e-9
DEFAULT_ITERATION_CAP = 200
DEFAULT_MAX_POINTS = 30_000_000


@dataclass(frozen=True, eq=False)
class AffineMaps:
    """The P domain contractions l_p(x) = a_p x + b_p with l_p(x_0) = x_{p-1},
    l_p(x_P) = x_p, plus the partition knots for interval lookup."""

    a: np.ndarray
    b: np.ndarray
    knots: np.ndarray

    def __post_init__(self) -> None:
        if len(self.a) != len(self.b) or len(self.knots) != len(self.a) + 1:
            raise InputError("need one (a, b) pair per partition interval")
        if np.any(np.abs(self.a) >= 1.0):
            raise InputError("domain maps must be contractive: |a_p| < 1")
        x0, xP = self.knots[0], self.knots[-1]
        left = self.a * x0 + self.b
        right = self.a * xP + self.b
        if np.max(np.abs(left - self.knots[:-1])) > ENDPOINT_TOL or np.max(
            np.abs(right - self.knots[1:])
        ) > ENDPOINT_TOL:
            raise InputError("endpoint conditions l_p(x_0) = x_{p-1}, l_p(x_P) = x_p violated")

    @property
    def intervals(self) -> int:
        return len(self.a)

    def interval_of(self, x: np.ndarray) -> np.ndarray:
        """Index p (0-based) with x in [knot_p, knot_{p+1}); x = x_P goes to the last."""
        x = np.asarray(x, dtype=float)
        return np.clip(
            np.searchsorted(self.knots, x, side="right") - 1, 0, self.intervals - 1
        )

    def apply(self, p: int, x: np.ndarray) -> np.ndarray:
        return self.a[p] * np.asarray(x, dtype=float) + self.b[p]

    def invert(self, x: np.ndarray, p: np.ndarray) -> np.ndarray:
        """l_p^{-1}(x) for per-point interval indices p."""
        return (np.asarray(x, dtype=float) - self.b[p]) / self.a[p]


@dataclass(frozen=True)
class ScalingVector:
    """Per-interval vertical scaling factors, each strictly inside (-1, 1)."""

    alpha: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.alpha:
            raise InputError("scaling vector must be non-empty")
        for a in self.alpha:
            if not math.isfinite(a) or abs(a) >= 1.0:
                raise InputError(f"vertical scaling factors need |alpha| < 1, got {a!r}")

    @classmethod
    def from_spec(cls, spec: float | str | Sequence[float], intervals: int) -> "ScalingVector":
        """Build from a scalar (broadcast to all intervals), a sequence, or a
        comma-separated string like ``"0.1,0.4,0.5"``."""
        if isinstance(spec, str):
            try:
                values = [float(tok) for tok in spec.split(",") if tok.strip()]
            except ValueError:
                raise InputError(f"unparseable scaling vector {spec!r}") from None
        elif isinstance(spec, (int, float)):
            values = [float(spec)]
        else:
            values = [float(v) for v in spec]
        if len(values) == 1:
            values = values * intervals
        if len(values) != intervals:
            raise InputError(
                f"scaling vector needs 1 or {intervals} entries, got {len(values)}"
            )
        return cls(tuple(values))

    @property
    def max_abs(self) -> float:
        return max(abs(a) for a in self.alpha)

    @property
    def sum_abs(self) -> float:
        return sum(abs(a) for a in self.alpha)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.alpha, dtype=float)

    def __len__(self) -> int:
        return len(self.alpha)


@dataclass(frozen=True, eq=False)
class PiecewiseLinear:
    """Continuous piecewise-linear function y = slope_p * x + intercept_p on
    [breakpoints[p], breakpoints[p+1]], defined on the whole breakpoint span."""

    breakpoints: np.ndarray
    slopes: np.ndarray
    intercepts: np.ndarray

    def __post_init__(self) -> None:
        bx = np.asarray(self.breakpoints, dtype=float)
        if np.any(np.diff(bx) <= 0.0):
            raise InputError("breakpoints must be strictly increasing")
        if len(self.slopes) != len(bx) - 1 or len(self.intercepts) != len(bx) - 1:
            raise InputError("need one (slope, intercept) pair per segment")
        interior = bx[1:-1]
        if interior.size:
            left = self.slopes[:-1] * interior + self.intercepts[:-1]
            right = self.slopes[1:] * interior + self.intercepts[1:]
            if np.max(np.abs(left - right)) > CONTINUITY_TOL:
                raise InputError("segments disagree at an interior breakpoint")

    @classmethod
    def interpolating(cls, x: Sequence[float], y: Sequence[float]) -> "PiecewiseLinear":
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        slopes = np.diff(y) / np.diff(x)
        intercepts = y[:-1] - slopes * x[:-1]
        return cls(x, slopes, intercepts)

    def __call__(self, x: np.ndarray | float) -> np.ndarray | float:
        arr = np.asarray(x, dtype=float)
        i = np.clip(
            np.searchsorted(self.breakpoints, arr, side="right") - 1,
            0,
            len(self.slopes) - 1,
        )
        out = self.slopes[i] * arr + self.intercepts[i]
        return out if arr.ndim else float(out)

    @property
    def segments(self) -> int:
        return len(self.slopes)


@dataclass(frozen=True, eq=False)
class FifModel:
    """Everything needed to evaluate one fractal interpolant: the data, the
    domain maps, the scaling vector, and the germ/base function handles."""

    data: InterpolationData
    maps: AffineMaps
    alpha: ScalingVector
    germ: Callable[[np.ndarray], np.ndarray]
    base: Callable[[np.ndarray], np.ndarray]

    def __post_init__(self) -> None:
        if len(self.alpha) != self.data.intervals:
            raise InputError(
                f"scaling vector has {len(self.alpha)} entries for "
                f"{self.data.intervals} intervals"
            )
        nodal = np.max(np.abs(np.asarray(self.germ(self.data.x)) - self.data.y))
        if nodal > NODE_TOL:
            raise InputError(f"germ must interpolate the data nodes (residual {nodal:.2e})")
        ends = self.base(np.array([self.data.x[0], self.data.x[-1]]))
        if abs(ends[0] - self.data.y[0]) > NODE_TOL or abs(ends[1] - self.data.y[-1]) > NODE_TOL:
            raise InputError("base function must match the data at both endpoints")

    @property
    def collinear(self) -> bool:
        return data_is_collinear(self.data)


@dataclass(frozen=True, eq=False)
class GraphSample:
    """Points on (or converging to) the graph of the fractal interpolant.

    ``generation`` is the IFS refinement depth or the fixed-point iteration
    count, depending on the evaluator. ``max_error_bound`` is a sup-norm
    bound on the distance to the true graph values at the sampled abscissae
    (0 for exact attractor points). ``sup_changes`` records the successive
    sup-norm changes of the fixed-point iteration, when applicable.
    """

    x: np.ndarray
    y: np.ndarray
    generation: int
    max_error_bound: float
    converged: bool = True
    sup_changes: tuple[float, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.x.shape != self.y.shape or self.x.ndim != 1:
            raise InputError("sample must hold matching 1-D x and y arrays")
        if self.x[0] < -1e-9 or self.x[-1] > 1.0 + 1e-9:
            raise InputError("sample abscissae must lie within [0, 1]")

    def __len__(self) -> int:
        return len(self.x)


def build_affine_maps(data: InterpolationData) -> AffineMaps:
    """Domain maps from the partition: a_p = (x_p - x_{p-1}) / (x_P - x_0),
    b_p = (x_P x_{p-1} - x_0 x_p) / (x_P - x_0)."""
    x = data.x
    if data.intervals < 2:
        raise InputError("need at least 2 partition intervals")
    span = x[-1] - x[0]
    a = np.diff(x) / span
    b = (x[-1] * x[:-1] - x[0] * x[1:]) / span
    return AffineMaps(a, b, x.copy())


def germ_piecewise_linear(data: InterpolationData) -> PiecewiseLinear:
    """The piecewise-linear interpolant through the data nodes."""
    return PiecewiseLinear.interpolating(data.x, data.y)


def base_from_germ(germ: Callable[[np.ndarray], np.ndarray]) -> Callable[[np.ndarray], np.ndarray]:
    """Base function x -> germ(x^2); shares the germ's endpoint values on [0, 1]."""

    def base(x: np.ndarray) -> np.ndarray:
        arr = np.asarray(x, dtype=float)
        return germ(arr * arr)

    return base


def endpoint_chord(data: InterpolationData) -> PiecewiseLinear:
    """The straight line through the first and last data node (affine base)."""
    return PiecewiseLinear.interpolating(
        np.array([data.x[0], data.x[-1]]), np.array([data.y[0], data.y[-1]])
    )


def data_is_collinear(data: InterpolationData, rtol: float = 1e-9) -> bool:
    """True if every node lies on the chord through the endpoints."""
    chord = endpoint_chord(data)
    scale = max(np.max(np.abs(data.y)), 1e-300)
    return bool(np.max(np.abs(chord(data.x) - data.y)) <= rtol * scale)


def build_fif_model(
    data: InterpolationData,
    alpha: ScalingVector | float | str | Sequence[float],
    base: str | Callable[[np.ndarray], np.ndarray] = "square",
) -> FifModel:
    """Assemble a model from data and scaling spec.

    ``base`` selects the base function: ``"square"`` for germ(x^2) (the
    default construction here), ``"chord"`` for the straight line through
    the endpoints (classical affine interpolant), or any callable matching
    the data at both endpoints.
    """
    if not isinstance(alpha, ScalingVector):
        alpha = ScalingVector.from_spec(alpha, data.intervals)
    maps = build_affine_maps(data)
    germ = germ_piecewise_linear(data)
    if base == "square":
        base_fn: Callable[[np.ndarray], np.ndarray] = base_from_germ(germ)
    elif base == "chord":
        base_fn = endpoint_chord(data)
    elif callable(base):
        base_fn = base
    else:
        raise InputError(f"unknown base spec {base!r}")
    return FifModel(data=data, maps=maps, alpha=alpha, germ=germ, base=base_fn)


def build_eval_grid(data: InterpolationData, grid_size: int) -> np.ndarray:
    """A grid of about ``grid_size`` points covering [0, 1] that contains every
    partition knot exactly (so nodal values stay pinned during iteration)."""
    if grid_size < 10 * data.intervals:
        raise InputError(
            f"grid_size must be at least 10 * P = {10 * data.intervals}, got {grid_size}"
        )
    spacing = 1.0 / (grid_size - 1)
    parts = []
    for p in range(data.intervals):
        width = data.x[p + 1] - data.x[p]
        m = max(1, round(width / spacing))
        seg = np.linspace(data.x[p], data.x[p + 1], m + 1)
        parts.append(seg if p == 0 else seg[1:])
    return np.concatenate(parts)


def rb_operator_apply(
    grid_x: np.ndarray, h_y: np.ndarray, model: FifModel
) -> np.ndarray:
    """One pass of the contraction T(h)(x) = alpha_p h(l_p^{-1}(x)) + q_p(l_p^{-1}(x)).

    ``h`` is given by its values on ``grid_x``; off-grid evaluations use
    linear interpolation between grid samples. Requires h to match the data
    at both endpoints (the space on which T is a contraction).
    """
    grid_x = np.asarray(grid_x, dtype=float)
    h_y = np.asarray(h_y, dtype=float)
    if grid_x.shape != h_y.shape:
        raise InputError("grid and values must have matching shapes")
    if np.any(np.diff(grid_x) <= 0.0):
        raise InputError("grid abscissae must be strictly increasing")
    data = model.data
    if abs(grid_x[0] - data.x[0]) > 1e-9 or abs(grid_x[-1] - data.x[-1]) > 1e-9:
        raise InputError("grid must cover [x_0, x_P]")
    if abs(h_y[0] - data.y[0]) > 1e-8 or abs(h_y[-1] - data.y[-1]) > 1e-8:
        raise InputError("h must satisfy h(x_0) = y_0 and h(x_P) = y_P")
    # every interval needs a grid point, otherwise some branch is never sampled
    per_interval = np.diff(np.searchsorted(grid_x, model.maps.knots))
    if np.any(per_interval < 1):
        raise InputError("grid too coarse: an interval contains no grid point")

    alpha = model.alpha.as_array()
    p = model.maps.interval_of(grid_x)
    inv = model.maps.invert(grid_x, p)
    h_at_inv = np.interp(inv, grid_x, h_y)
    # q_p(l_p^{-1}(x)) = germ(x) - alpha_p * base(l_p^{-1}(x)), since l_p(l_p^{-1}(x)) = x
    return alpha[p] * h_at_inv + np.asarray(model.germ(grid_x)) - alpha[p] * np.asarray(
        model.base(inv)
    )


def evaluate_fif_fixed_point(
    model: FifModel,
    grid_size: int = DEFAULT_GRID_SIZE,
    tol: float = DEFAULT_TOL,
    iteration_cap: int = DEFAULT_ITERATION_CAP,
) -> GraphSample:
    """Iterate the contraction from the germ until the sup-norm change drops
    below ``tol * (1 - max|alpha|)``, which bounds the remaining distance to
    the fixed point by ``tol`` (a posteriori contraction estimate).

    If the iteration cap is reached first, the sample is returned with
    ``converged = False`` and the achieved bound.
    """
    if tol <= 0.0:
        raise InputError("tol must be positive")
    grid = build_eval_grid(model.data, grid_size)
    h = np.asarray(model.germ(grid), dtype=float)
    s = model.alpha.max_abs
    threshold = tol * (1.0 - s)
    changes: list[float] = []
    converged = False
    for _ in range(iteration_cap):
        nxt = rb_operator_apply(grid, h, model)
        delta = float(np.max(np.abs(nxt - h)))
        changes.append(delta)
        h = nxt
        if delta < threshold:
            converged = True
            break
    bound = changes[-1] / (1.0 - s) if changes else 0.0
    return GraphSample(
        x=grid,
        y=h,
        generation=len(changes),
        max_error_bound=bound,
        converged=converged,
        sup_changes=tuple(changes),
    )


def generate_attractor_points(
    model: FifModel, depth: int, max_points: int = DEFAULT_MAX_POINTS
) -> GraphSample:
    """Apply every IFS branch to the node set for ``depth`` rounds.

    Every produced point lies exactly on the attractor graph (up to
    floating-point arithmetic), because the nodes do and the maps send graph
    points to graph points. Output is sorted by x with coincident interval
    endpoints deduplicated; the P+1 data nodes are included exactly.
    """
    if depth < 0:
        raise InputError("depth must be non-negative")
    data = model.data
    p_count = data.intervals
    expected = (p_count + 1) * p_count**depth
    if expected > max_points:
        raise InputError(
            f"depth {depth} would generate ~{expected} points, over the "
            f"budget of {max_points}"
        )
    alpha = model.alpha.as_array()
    a, b = model.maps.a, model.maps.b
    xs = data.x.copy()
    ys = data.y.copy()
    for _ in range(depth):
        new_x = np.empty(len(xs) * p_count)
        new_y = np.empty_like(new_x)
        base_vals = np.asarray(model.base(xs))
        n = len(xs)
        for p in range(p_count):
            lx = a[p] * xs + b[p]
            new_x[p * n : (p + 1) * n] = lx
            new_y[p * n : (p + 1) * n] = (
                alpha[p] * ys + np.asarray(model.germ(lx)) - alpha[p] * base_vals
            )
        xs, ys = new_x, new_y

    # canonical order plus dedup of seam points reached from both sides;
    # exact nodes go first so dedup keeps them
    xs = np.concatenate([data.x, xs])
    ys = np.concatenate([data.y, ys])
    order = np.argsort(xs, kind="stable")
    xs, ys = xs[order], ys[order]
    keep = np.ones(len(xs), dtype=bool)
    keep[1:] = np.diff(xs) > DEDUP_TOL
    xs, ys = xs[keep], ys[keep]
    # pin the node coordinates exactly (a seam twin may have sorted first)
    idx = np.searchsorted(xs, data.x)
    idx = np.clip(idx, 0, len(xs) - 1)
    left = np.clip(idx - 1, 0, len(xs) - 1)
    nearer_left = np.abs(xs[left] - data.x) < np.abs(xs[idx] - data.x)
    idx = np.where(nearer_left, left, idx)
    xs[idx] = data.x
    ys[idx] = data.y
    return GraphSample(x=xs, y=ys, generation=depth, max_error_bound=0.0)


def verify_interpolation(sample: GraphSample, data: InterpolationData) -> float:
    """Max |sample_y(x_i) - y_i| over the data nodes.

    Raises
    ------
    ComputationError
        If some node abscissa is absent from the sample (beyond 1e-9).
    """
    idx = np.searchsorted(sample.x, data.x)
    idx = np.clip(idx, 0, len(sample.x) - 1)
    left = np.clip(idx - 1, 0, len(sample.x) - 1)
    nearer_left = np.abs(sample.x[left] - data.x) < np.abs(sample.x[idx] - data.x)
    idx = np.where(nearer_left, left, idx)
    gaps = np.abs(sample.x[idx] - data.x)
    if np.max(gaps) > 1e-9:
        worst = int(np.argmax(gaps))
        raise ComputationError(
            f"node x = {data.x[worst]!r} missing from sample (nearest {sample.x[idx][worst]!r})"
        )
    return float(np.max(np.abs(sample.y[idx] - data.y)))
