import datetime as dt

import numpy as np
import pytest

from fractalmark.errors import ComputationError, InputError
from fractalmark.market_data import (
    PriceBar,
    PriceSeries,
    ReturnSeries,
    align_on_common_dates,
    daily_returns,
    extra_columns,
    parse_price_csv,
    parse_returns_csv,
    serialize_price_csv,
    serialize_returns_csv,
)


def make_series(*rows):
    bars = tuple(PriceBar(dt.date.fromisoformat(d), o, c) for d, o, c in rows)
    return PriceSeries("test", bars)


class TestParsePriceCsv:
    def test_minimal_valid_file(self):
        series = parse_price_csv("date,open,close\n2024-07-01,100.0,102.0")
        assert len(series.bars) == 1
        bar = series.bars[0]
        assert bar.date == dt.date(2024, 7, 1)
        assert bar.open == 100.0
        assert bar.close == 102.0

    def test_accepts_bytes_and_streams(self, tmp_path):
        text = "date,open,close\n2024-07-01,100.0,102.0\n"
        assert parse_price_csv(text.encode()) == parse_price_csv(text)
        p = tmp_path / "prices.csv"
        p.write_text(text)
        with open(p, "rb") as handle:
            assert parse_price_csv(handle) == parse_price_csv(text)

    def test_duplicate_date_names_row_3(self):
        text = "date,open,close\n2024-07-01,100,101\n2024-07-01,100,101\n"
        with pytest.raises(InputError, match="row 3") as err:
            parse_price_csv(text)
        assert "duplicate date" in str(err.value)

    def test_out_of_order_rows_sorted(self):
        text = (
            "date,open,close\n"
            "2024-07-02,101,103\n"
            "2024-07-01,100,102\n"
            "2024-07-03,99,98\n"
        )
        series = parse_price_csv(text)
        assert [b.date.isoformat() for b in series.bars] == [
            "2024-07-01",
            "2024-07-02",
            "2024-07-03",
        ]
        assert [b.open for b in series.bars] == [100.0, 101.0, 99.0]

    def test_malformed_number_names_row(self):
        text = "date,open,close\n2024-07-01,100,102\n2024-07-02,oops,103\n"
        with pytest.raises(InputError, match="row 3"):
            parse_price_csv(text)

    def test_unparseable_date_names_row(self):
        with pytest.raises(InputError, match="row 2"):
            parse_price_csv("date,open,close\n01/07/2024,100,102\n")

    def test_non_positive_price_names_row(self):
        with pytest.raises(InputError, match="row 2"):
            parse_price_csv("date,open,close\n2024-07-01,-5,102\n")
        with pytest.raises(InputError, match="row 2"):
            parse_price_csv("date,open,close\n2024-07-01,100,0\n")

    def test_missing_column(self):
        with pytest.raises(InputError, match="close"):
            parse_price_csv("date,open\n2024-07-01,100\n")

    def test_extra_columns_ignored(self):
        text = "date,open,close,high,volume\n2024-07-01,100,102,103,5000\n"
        series = parse_price_csv(text)
        assert series.bars[0].close == 102.0
        assert extra_columns(text) == ("high", "volume")

    def test_empty_inputs(self):
        with pytest.raises(InputError):
            parse_price_csv("")
        with pytest.raises(InputError, match="no data rows"):
            parse_price_csv("date,open,close\n")

    def test_roundtrip_identical(self):
        text = (
            "date,open,close\n"
            "2024-07-01,100.25,102.5\n"
            "2024-07-02,102.5,101.75\n"
            "2024-07-03,101.75,104.1\n"
        )
        once = parse_price_csv(text)
        again = parse_price_csv(serialize_price_csv(once))
        assert again == once


class TestTypeInvariants:
    def test_price_bar_rejects_bad_values(self):
        with pytest.raises(InputError):
            PriceBar(dt.date(2024, 1, 1), -1.0, 10.0)
        with pytest.raises(InputError):
            PriceBar(dt.date(2024, 1, 1), 10.0, float("nan"))
        with pytest.raises(InputError):
            PriceBar("2024-01-01", 10.0, 10.0)

    def test_price_series_rejects_disorder_and_empty(self):
        with pytest.raises(InputError):
            PriceSeries("x", ())
        bars = (
            PriceBar(dt.date(2024, 1, 2), 1.0, 1.0),
            PriceBar(dt.date(2024, 1, 1), 1.0, 1.0),
        )
        with pytest.raises(InputError):
            PriceSeries("x", bars)

    def test_return_series_rejects_nonfinite(self):
        with pytest.raises(InputError):
            ReturnSeries("x", (dt.date(2024, 1, 1),), (float("inf"),))


class TestDailyReturns:
    def test_basic_arithmetic(self):
        series = make_series(
            ("2024-07-01", 100.0, 102.0),
            ("2024-07-02", 50.0, 50.0),
            ("2024-07-03", 80.0, 76.0),
        )
        returns = daily_returns(series)
        assert returns.values[0] == pytest.approx(0.02, abs=1e-15)
        assert returns.values[1] == 0.0
        # hand arithmetic: (76 - 80) / 80
        assert returns.values[2] == pytest.approx(-0.05, abs=1e-15)

    def test_length_and_dates_preserved(self):
        series = make_series(
            ("2024-07-01", 100.0, 101.0),
            ("2024-07-02", 101.0, 99.5),
        )
        returns = daily_returns(series)
        assert len(returns) == len(series.bars)
        assert returns.dates == series.dates
        assert returns.instrument_id == series.instrument_id

    def test_scale_invariance(self):
        rng = np.random.default_rng(11)
        opens = rng.uniform(50.0, 50_000.0, 200)
        closes = opens * rng.uniform(0.9, 1.1, 200)
        base_date = dt.date(2020, 1, 1)
        for scale in (2.0**10, 0.001, 3.7, 123.456):
            bars = []
            scaled = []
            for i, (o, c) in enumerate(zip(opens, closes)):
                d = base_date + dt.timedelta(days=i)
                bars.append(PriceBar(d, o, c))
                scaled.append(PriceBar(d, scale * o, scale * c))
            r1 = daily_returns(PriceSeries("raw", tuple(bars)))
            r2 = daily_returns(PriceSeries("scaled", tuple(scaled)))
            np.testing.assert_allclose(r2.values, r1.values, rtol=0, atol=1.5e-15)


class TestAlign:
    def _series(self, name, start_day, values):
        dates = tuple(dt.date(2024, 7, start_day + i) for i in range(len(values)))
        return ReturnSeries(name, dates, tuple(values))

    def test_intersection(self):
        a = self._series("a", 1, [0.01, 0.02, 0.03])
        b = self._series("b", 2, [0.1, 0.2, 0.3])
        out_a, out_b = align_on_common_dates(a, b)
        assert out_a.dates == out_b.dates == a.dates[1:]
        assert out_a.values == (0.02, 0.03)
        assert out_b.values == (0.1, 0.2)

    def test_identical_sets_identity(self):
        a = self._series("a", 1, [0.01, 0.02])
        b = self._series("b", 1, [0.05, 0.06])
        out_a, out_b = align_on_common_dates(a, b)
        assert out_a == a
        assert out_b == b

    def test_disjoint_sets_error(self):
        a = self._series("a", 1, [0.01, 0.02])
        b = self._series("b", 10, [0.05, 0.06])
        with pytest.raises(ComputationError, match="no dates"):
            align_on_common_dates(a, b)


class TestReturnsCsv:
    def test_roundtrip_identical(self):
        series = daily_returns(
            make_series(("2024-07-01", 100.0, 102.0), ("2024-07-02", 99.0, 97.3))
        )
        parsed = parse_returns_csv(serialize_returns_csv(series), instrument_id="test")
        assert parsed == series

    def test_full_precision_survives(self):
        value = 1.0 / 3.0 - 0.21
        series = ReturnSeries("t", (dt.date(2024, 1, 1),), (value,))
        parsed = parse_returns_csv(serialize_returns_csv(series), instrument_id="t")
        assert parsed.values[0] == value
