"""fractalmark: event-study abnormal returns, fractal interpolation, and
box-counting dimension analysis for daily stock-index data."""

__version__ = "0.1.0"

from .errors import ComputationError, FractalmarkError, InputError
from .market_data import (
    PriceBar,
    PriceSeries,
    ReturnSeries,
    align_on_common_dates,
    daily_returns,
    parse_price_csv,
)
from .event_study import (
    AbnormalReturnPanel,
    CapmParams,
    EventWindow,
    InterpolationData,
    abnormal_return,
    build_panel,
    estimate_capm,
    expected_return,
    extract_event_window,
    subsample_to_grid,
)
from .fif import (
    AffineMaps,
    FifModel,
    GraphSample,
    PiecewiseLinear,
    ScalingVector,
    base_from_germ,
    build_affine_maps,
    build_fif_model,
    evaluate_fif_fixed_point,
    generate_attractor_points,
    germ_piecewise_linear,
    rb_operator_apply,
    verify_interpolation,
)
from .boxdim import (
    BoxCountCurve,
    DimensionEstimate,
    NormalizedCloud,
    affine_fif_dimension_oracle,
    count_boxes,
    estimate_dimension,
    normalize_to_unit_square,
)

__all__ = [
    "__version__",
    "FractalmarkError",
    "InputError",
    "ComputationError",
    "PriceBar",
    "PriceSeries",
    "ReturnSeries",
    "parse_price_csv",
    "daily_returns",
    "align_on_common_dates",
    "CapmParams",
    "EventWindow",
    "AbnormalReturnPanel",
    "InterpolationData",
    "estimate_capm",
    "expected_return",
    "abnormal_return",
    "build_panel",
    "extract_event_window",
    "subsample_to_grid",
    "AffineMaps",
    "ScalingVector",
    "PiecewiseLinear",
    "FifModel",
    "GraphSample",
    "build_affine_maps",
    "germ_piecewise_linear",
    "base_from_germ",
    "build_fif_model",
    "rb_operator_apply",
    "evaluate_fif_fixed_point",
    "generate_attractor_points",
    "verify_interpolation",
    "NormalizedCloud",
    "BoxCountCurve",
    "DimensionEstimate",
    "normalize_to_unit_square",
    "count_boxes",
    "estimate_dimension",
    "affine_fif_dimension_oracle",
]
