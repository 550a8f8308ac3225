from __future__ import annotations

import datetime as dt
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crossdisp import (
    COMPLETE_ONLY,
    EmptyCrossSection,
    PerformancePanel,
    PricePanel,
    RefDateAbsent,
    SurvivalCurve,
    TooFewStocks,
    cross_sectional_moments,
    dispersion_series,
    dispersion_values,
    normalize_panel,
    pairwise_dispersion,
    survival_curve,
    survival_value,
)

from conftest import d


# ---------------------------------------------------------------------------
# normalization
# ---------------------------------------------------------------------------


def test_normalize_divides_by_reference_price(tiny_panel):
    perf = normalize_panel(tiny_panel, d("2003-01-02"))
    assert perf.ref_date == d("2003-01-02")
    assert perf.tickers == ("AAA", "BBB")
    np.testing.assert_array_equal(
        perf.values, np.array([[1.0, 1.0], [1.5, 1.0], [1.2, 3.0]])
    )


def test_normalize_single_stock_needs_waiver():
    panel = PricePanel(
        dates=(d("2003-01-02"), d("2003-01-03"), d("2003-01-06")),
        tickers=("AAA",),
        prices=np.array([[10.0], [15.0], [12.0]]),
    )
    with pytest.raises(TooFewStocks):
        normalize_panel(panel, d("2003-01-02"))
    perf = normalize_panel(panel, d("2003-01-02"), min_stocks=1)
    np.testing.assert_array_equal(perf.values[:, 0], [1.0, 1.5, 1.2])


def test_normalize_starts_at_reference_date(tiny_panel):
    perf = normalize_panel(tiny_panel, d("2003-01-03"))
    assert perf.dates == (d("2003-01-03"), d("2003-01-06"))
    assert np.all(perf.values[0] == 1.0)


def test_normalize_absent_ref_date(tiny_panel):
    with pytest.raises(RefDateAbsent, match="2003-02-01"):
        normalize_panel(tiny_panel, d("2003-02-01"))


def test_normalize_drops_stock_missing_at_ref(gappy_panel):
    perf = normalize_panel(gappy_panel, d("2003-01-02"))
    assert perf.tickers == ("AAA", "BBB")


def test_normalize_keeps_later_gaps_per_date(gappy_panel):
    perf = normalize_panel(gappy_panel, d("2003-01-03"))
    assert perf.tickers == ("AAA", "BBB", "CCC")
    assert math.isnan(perf.values[1, 2])
    np.testing.assert_array_equal(perf.cross_section(d("2003-01-06")), [0.8, 3.0])


def test_normalize_complete_only_drops_gappy_stock(gappy_panel):
    perf = normalize_panel(gappy_panel, d("2003-01-03"), policy=COMPLETE_ONLY)
    assert perf.tickers == ("AAA", "BBB")


def test_normalize_rejects_unknown_policy(tiny_panel):
    with pytest.raises(ValueError):
        normalize_panel(tiny_panel, d("2003-01-02"), policy="ffill")


def test_panel_rejects_nonpositive_price():
    with pytest.raises(ValueError):
        PricePanel(
            dates=(d("2003-01-02"),), tickers=("AAA",), prices=np.array([[0.0]])
        )


def test_panel_rejects_unsorted_dates():
    with pytest.raises(ValueError):
        PricePanel(
            dates=(d("2003-01-03"), d("2003-01-02")),
            tickers=("AAA",),
            prices=np.array([[1.0], [2.0]]),
        )


def test_performance_panel_requires_unit_reference_row():
    with pytest.raises(ValueError):
        PerformancePanel(
            ref_date=d("2003-01-02"),
            dates=(d("2003-01-02"),),
            tickers=("AAA", "BBB"),
            values=np.array([[1.0, 1.1]]),
        )


# ---------------------------------------------------------------------------
# survival function
# ---------------------------------------------------------------------------


def test_survival_value_counts_strictly_greater():
    xs = [0.5, 1.5, 2.5]
    assert survival_value(xs, 1.0) == pytest.approx(2.0 / 3.0)
    assert survival_value(xs, 0.0) == 1.0
    assert survival_value(xs, 2.5) == 0.0  # ties do not count
    assert survival_value(xs, 0.5) == pytest.approx(2.0 / 3.0)


def test_survival_value_empty():
    with pytest.raises(EmptyCrossSection):
        survival_value([], 1.0)


def test_survival_curve_matches_pointwise_definition():
    xs = np.array([2.0, 1.0, 3.0, 1.0])
    curve = survival_curve(xs)
    np.testing.assert_array_equal(curve.sorted_values, [1.0, 1.0, 2.0, 3.0])
    grid = [0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 99.0]
    for z in grid:
        assert curve.evaluate(z) == survival_value(xs, z)


def test_survival_curve_step_points():
    curve = survival_curve([0.5, 1.5, 2.5])
    zs, ss = curve.step_points()
    np.testing.assert_array_equal(zs, [0.5, 1.5, 2.5])
    np.testing.assert_array_equal(ss, [2.0 / 3.0, 1.0 / 3.0, 0.0])


def test_survival_curve_rejects_unsorted_values():
    with pytest.raises(ValueError):
        SurvivalCurve(sorted_values=np.array([2.0, 1.0]))


@settings(max_examples=60)
@given(
    st.lists(st.floats(min_value=0.01, max_value=100.0), min_size=1, max_size=40),
    st.floats(min_value=-1.0, max_value=110.0),
    st.floats(min_value=0.0, max_value=10.0),
)
def test_survival_monotone_and_quantized(xs, z, dz):
    curve = survival_curve(xs)
    lo, hi = curve.evaluate(z), curve.evaluate(z + dz)
    assert hi <= lo
    n = len(xs)
    assert round(lo * n) == pytest.approx(lo * n)  # multiples of 1/n
    assert 0.0 <= hi <= lo <= 1.0
    assert curve.evaluate(min(xs) - 1.0) == 1.0
    assert curve.evaluate(max(xs)) == 0.0


# ---------------------------------------------------------------------------
# moments and pairwise identity
# ---------------------------------------------------------------------------


def test_moments_basic():
    m = cross_sectional_moments([1.0, 2.0, 3.0])
    assert m.mean == 2.0
    assert m.variance == pytest.approx(2.0 / 3.0, rel=1e-15)


def test_moments_population_not_sample():
    # population convention: divide by N
    m = cross_sectional_moments([0.0, 2.0])
    assert m.variance == 1.0


def test_moments_needs_two():
    with pytest.raises(TooFewStocks):
        cross_sectional_moments([5.0])


def test_pairwise_matches_brute_force():
    rng = np.random.default_rng(11)
    xs = rng.uniform(0.1, 5.0, size=23)
    brute = sum((a - b) ** 2 for a in xs for b in xs) / (2 * len(xs) ** 2)
    assert pairwise_dispersion(xs) == pytest.approx(brute, rel=1e-12)
    assert pairwise_dispersion(xs) == pytest.approx(
        cross_sectional_moments(xs).variance, rel=1e-12
    )


def test_pairwise_constant_is_zero():
    assert pairwise_dispersion([3.0, 3.0, 3.0]) == 0.0


@settings(max_examples=80)
@given(
    st.lists(
        st.integers(min_value=1, max_value=10**6).map(lambda i: i / 1000.0),
        min_size=2,
        max_size=80,
    )
)
def test_pairwise_identity_property(xs):
    var = cross_sectional_moments(xs).variance
    pair = pairwise_dispersion(xs)
    assert pair == pytest.approx(var, rel=1e-10, abs=1e-18)


@settings(max_examples=40)
@given(
    st.lists(st.floats(min_value=0.1, max_value=50.0), min_size=2, max_size=30),
    st.floats(min_value=-5.0, max_value=5.0),
    st.floats(min_value=0.1, max_value=8.0),
)
def test_variance_translation_and_scaling(xs, shift, scale):
    arr = np.asarray(xs)
    base = cross_sectional_moments(arr).variance
    shifted = cross_sectional_moments(arr + shift).variance
    scaled = cross_sectional_moments(arr * scale).variance
    assert shifted == pytest.approx(base, rel=1e-9, abs=1e-12)
    assert scaled == pytest.approx(base * scale**2, rel=1e-9, abs=1e-12)


def test_dispersion_values_matches_per_row_moments():
    rng = np.random.default_rng(5)
    matrix = rng.uniform(0.5, 2.0, size=(7, 13))
    rows = dispersion_values(matrix)
    for i in range(7):
        assert rows[i] == cross_sectional_moments(matrix[i]).variance


# ---------------------------------------------------------------------------
# dispersion series
# ---------------------------------------------------------------------------


def test_dispersion_series_reference_date_is_exact(tiny_panel):
    perf = normalize_panel(tiny_panel, d("2003-01-02"))
    series = dispersion_series(perf)
    assert series.mean[0] == 1.0
    assert series.variance[0] == 0.0
    assert series.count[0] == 2


def test_dispersion_series_values(tiny_panel):
    perf = normalize_panel(tiny_panel, d("2003-01-02"))
    series = dispersion_series(perf)
    # day 2: X = (1.5, 1.0) -> mean 1.25, var 0.0625
    assert series.mean[1] == pytest.approx(1.25)
    assert series.variance[1] == pytest.approx(0.0625)
    # day 3: X = (1.2, 3.0) -> mean 2.1, var 0.81
    assert series.variance[2] == pytest.approx(0.81)


def test_dispersion_series_identical_paths_stay_zero():
    prices = np.array([[10.0, 10.0], [11.0, 11.0], [9.0, 9.0]])
    panel = PricePanel(
        dates=(d("2003-01-02"), d("2003-01-03"), d("2003-01-06")),
        tickers=("AAA", "BBB"),
        prices=prices,
    )
    series = dispersion_series(normalize_panel(panel, d("2003-01-02")))
    np.testing.assert_array_equal(series.variance, [0.0, 0.0, 0.0])


def test_dispersion_series_undefined_below_two_stocks():
    values = np.array([[1.0, 1.0], [2.0, np.nan], [np.nan, np.nan]])
    perf = PerformancePanel(
        ref_date=d("2003-01-02"),
        dates=(d("2003-01-02"), d("2003-01-03"), d("2003-01-06")),
        tickers=("AAA", "BBB"),
        values=values,
    )
    series = dispersion_series(perf)
    assert series.count.tolist() == [2, 1, 0]
    assert math.isnan(series.variance[1])
    assert series.mean[1] == 2.0
    assert math.isnan(series.mean[2])
