import datetime as dt

import numpy as np
import pytest

from fractalmark.errors import ComputationError, InputError
from fractalmark.event_study import (
    CapmParams,
    InterpolationData,
    abnormal_return,
    build_panel,
    estimate_capm,
    expected_return,
    extract_event_window,
    panel_csv,
    subsample_to_grid,
)
from fractalmark.fixtures import nifty50_2024_grid, nifty50_2024_panel
from fractalmark.market_data import ReturnSeries


def series_from(values, name="s", start=dt.date(2024, 1, 1)):
    dates = tuple(start + dt.timedelta(days=i) for i in range(len(values)))
    return ReturnSeries(name, dates, tuple(float(v) for v in values))


class TestEstimateCapm:
    def test_asset_equals_market(self):
        market = series_from([0.01, -0.02, 0.005, 0.0, 0.015])
        params = estimate_capm(market, market, risk_free_daily=0.0)
        assert params.beta == pytest.approx(1.0, abs=1e-12)
        assert params.intercept == pytest.approx(0.0, abs=1e-12)

    def test_constant_asset_gives_zero_beta(self):
        market = series_from([0.01, -0.02, 0.005, 0.003])
        asset = series_from([0.0, 0.0, 0.0, 0.0], name="flat")
        params = estimate_capm(asset, market)
        assert params.beta == pytest.approx(0.0, abs=1e-12)

    def test_exact_linear_relation(self):
        # closed-form OLS on exactly linear data recovers slope and intercept
        rng = np.random.default_rng(5)
        m = rng.normal(0.0, 0.01, 50)
        a = 2.0 * m + 0.001
        params = estimate_capm(series_from(a, "a"), series_from(m, "m"))
        assert params.beta == pytest.approx(2.0, abs=1e-12)
        assert params.intercept == pytest.approx(0.001, abs=1e-14)

    def test_zero_variance_market_degenerate(self):
        market = series_from([0.01, 0.01, 0.01, 0.01])
        asset = series_from([0.0, 0.1, 0.2, 0.3], name="a")
        with pytest.raises(ComputationError, match="degenerate"):
            estimate_capm(asset, market)

    def test_too_few_observations(self):
        with pytest.raises(ComputationError, match=">= 3"):
            estimate_capm(series_from([0.1, 0.2]), series_from([0.2, 0.1], "m"))

    def test_affine_equivariance(self):
        rng = np.random.default_rng(17)
        m = rng.normal(0.0, 0.01, 120)
        a = 1.3 * m + rng.normal(0.0, 0.002, 120)
        base = estimate_capm(series_from(a, "a"), series_from(m, "m"))
        for shift in (0.004, -0.02, 1.5):
            shifted = estimate_capm(series_from(a + shift, "a"), series_from(m, "m"))
            assert shifted.beta == pytest.approx(base.beta, abs=1e-12)
            assert shifted.intercept - base.intercept == pytest.approx(shift, abs=1e-12 * max(1, abs(shift)))

    def test_aligns_mismatched_dates(self):
        m = series_from([0.01, 0.02, -0.01, 0.005])
        a = ReturnSeries("a", m.dates[1:], (0.02, -0.01, 0.005))
        params = estimate_capm(a, m)
        assert params.beta == pytest.approx(1.0, abs=1e-12)


class TestExpectedAndAbnormal:
    def test_market_mirroring(self):
        assert expected_return(CapmParams(1.0, 0.0, 0.0), 0.01) == pytest.approx(0.01)

    def test_zero_beta(self):
        params = CapmParams(0.0, 0.0, 0.0002)
        assert expected_return(params, 0.37) == pytest.approx(0.0002)

    def test_hand_arithmetic(self):
        params = CapmParams(1.2, 0.0, 0.0002)
        assert expected_return(params, 0.01) == pytest.approx(0.01196, abs=1e-15)

    @pytest.mark.parametrize(
        "actual,expected,result",
        [(0.01, 0.01, 0.0), (0.02, 0.005, 0.015), (-0.01, 0.004, -0.014)],
    )
    def test_abnormal_return(self, actual, expected, result):
        assert abnormal_return(actual, expected) == pytest.approx(result, abs=1e-15)

    def test_abnormal_return_of_self_is_zero(self):
        rng = np.random.default_rng(23)
        for value in rng.normal(0, 0.05, 25):
            assert abnormal_return(value, value) == 0.0


class TestBuildPanel:
    def test_single_security(self):
        panel = build_panel([[0.1, -0.1]])
        np.testing.assert_allclose(panel.aar, [0.1, -0.1])
        np.testing.assert_allclose(panel.caar, [0.1, 0.0], atol=1e-16)

    def test_reference_panel_consistency(self):
        table = nifty50_2024_panel()
        panel = build_panel(table["aar"].reshape(1, -1), ["NIFTY50"])
        assert np.max(np.abs(panel.caar - table["caar"])) <= 5e-5
        # spot value: day -14 cumulative
        assert panel.caar[1] == pytest.approx(0.00559 + 0.00078, abs=1e-15)

    def test_antisymmetric_rows_cancel(self):
        rng = np.random.default_rng(2)
        row = rng.normal(0, 0.01, 31)
        panel = build_panel(np.vstack([row, -row]))
        np.testing.assert_allclose(panel.aar, 0.0, atol=1e-18)
        np.testing.assert_allclose(panel.caar, 0.0, atol=1e-17)

    def test_ragged_matrix_rejected(self):
        with pytest.raises(InputError, match="ragged|rectangular"):
            build_panel([[0.1, 0.2], [0.3]])

    def test_telescoping_exact(self):
        rng = np.random.default_rng(9)
        panel = build_panel(rng.normal(0, 0.01, (4, 40)))
        total = 0.0
        for v in panel.aar:
            total += v
        assert panel.caar[-1] == total
        np.testing.assert_allclose(np.diff(panel.caar), panel.aar[1:], atol=1e-16)
        assert panel.caar[0] == panel.aar[0]


class TestExtractEventWindow:
    def _trading_series(self, n, start=dt.date(2024, 1, 1)):
        # weekdays only, to exercise the non-trading-day rolls
        dates = []
        d = start
        while len(dates) < n:
            if d.weekday() < 5:
                dates.append(d)
            d += dt.timedelta(days=1)
        return ReturnSeries("idx", tuple(dates), tuple(0.001 * i for i in range(n)))

    def test_full_31_day_series(self):
        series = self._trading_series(31)
        window = extract_event_window(series, series.dates[15], 15, 15)
        assert window.dates == series.dates
        assert window.relative_days == tuple(range(-15, 16))
        assert window.dates[window.pre_days] == series.dates[15]

    def test_event_on_non_trading_day_rolls_forward(self):
        series = self._trading_series(40)
        saturday = next(d for d in (series.dates[20] + dt.timedelta(days=i) for i in range(7)) if d.weekday() == 5)
        window = extract_event_window(series, saturday, 5, 5)
        day0 = window.dates[5]
        assert day0 >= saturday
        assert day0.weekday() == 0  # next session after a Saturday

    def test_insufficient_history(self):
        series = self._trading_series(20)
        with pytest.raises(ComputationError, match="need 15"):
            extract_event_window(series, series.dates[10], 15, 5)
        with pytest.raises(ComputationError, match="after"):
            extract_event_window(series, series.dates[15], 5, 15)


class TestSubsampleToGrid:
    def test_reference_tables_match_exactly(self):
        table = nifty50_2024_panel()
        for name in ("aar", "caar"):
            grid = subsample_to_grid(table[name])
            published = nifty50_2024_grid(name)
            assert np.array_equal(grid.y, published.y)
            assert np.array_equal(grid.x, published.x)

    def test_constant_input(self):
        grid = subsample_to_grid([1.0] * 31)
        assert np.all(grid.y == 1.0)
        assert len(grid) == 11

    def test_wrong_length_rejected(self):
        with pytest.raises(InputError, match="31"):
            subsample_to_grid([0.0] * 30)

    def test_x_grid_exact(self):
        rng = np.random.default_rng(31)
        grid = subsample_to_grid(rng.normal(0, 1, 31))
        assert np.array_equal(grid.x, np.arange(11) / 10.0)
        assert np.all(np.diff(grid.x) > 0)


class TestInterpolationData:
    def test_invariants(self):
        with pytest.raises(InputError, match="3 points"):
            InterpolationData(np.array([0.0, 1.0]), np.array([1.0, 2.0]))
        with pytest.raises(InputError, match="increasing"):
            InterpolationData(np.array([0.0, 0.5, 0.5, 1.0]), np.zeros(4))
        with pytest.raises(InputError, match="normalized"):
            InterpolationData(np.array([0.1, 0.5, 1.0]), np.zeros(3))


class TestPanelCsv:
    def test_schema_and_values(self):
        panel = build_panel([[0.1, -0.1, 0.05]])
        text = panel_csv(panel, (-1, 0, 1))
        lines = text.strip().splitlines()
        assert lines[0] == "relative_day,x,aar,caar"
        day, x, aar, caar = lines[1].split(",")
        assert day == "-1" and float(x) == 0.0
        assert float(aar) == 0.1
        last = lines[3].split(",")
        assert float(last[1]) == 1.0
        assert float(last[3]) == pytest.approx(0.05, abs=1e-16)
