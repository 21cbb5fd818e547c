import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hnilm.analysis import (
    correlation_matrix,
    entropy_by_level,
    entropy_csv,
    hourwise_matrix,
    knn_entropy,
    weekday_weekend_separation,
)
from hnilm.core import Level, MeterHierarchy, MeterNode, PowerSeries
from hnilm.errors import NoOverlap, TooShort, UndefinedCorrelation

MONDAY = 1704067200
GAUSS_BITS = 0.5 * np.log2(2 * np.pi * np.e)


def series(xs, period=30, start=0):
    return PowerSeries(start, period, xs, signed=True)


class TestCorrelation:
    x = np.random.default_rng(0).random(500) * 1000

    def test_affine(self):
        m = correlation_matrix({"a": series(self.x), "b": series(2 * self.x + 5)})
        assert m["a", "b"] == pytest.approx(1.0)

    def test_negation(self):
        m = correlation_matrix({"a": series(self.x), "b": series(self.x, ).with_values(-self.x)})
        assert m["a", "b"] == pytest.approx(-1.0)

    def test_independent(self):
        rng = np.random.default_rng(42)
        m = correlation_matrix({"a": series(rng.random(10000)), "b": series(rng.random(10000))})
        assert abs(m["a", "b"]) < 0.05

    def test_matrix_shape(self):
        rng = np.random.default_rng(1)
        feeds = {k: series(rng.random(50)) for k in "abc"}
        m = correlation_matrix(feeds)
        assert np.allclose(m.values, m.values.T) and np.all(np.diag(m.values) == 1)
        assert np.all(np.abs(m.values) <= 1)
        assert m.to_csv().splitlines()[0] == ",a,b,c"

    def test_errors(self):
        with pytest.raises(UndefinedCorrelation) as ei:
            correlation_matrix({"a": series(self.x), "flat": series(np.ones(500))})
        assert ei.value.name == "flat"
        with pytest.raises(NoOverlap):
            correlation_matrix({"a": series([1.0, 2.0]), "b": series([1.0, np.nan])})

    @settings(deadline=None)
    @given(st.floats(0.01, 100), st.floats(-1000, 1000))
    def test_affine_invariance(self, a, b):
        rng = np.random.default_rng(7)
        x, y = rng.random(200), rng.random(200) + 0.3 * np.arange(200) / 200
        base = correlation_matrix({"x": series(x), "y": series(y)})["x", "y"]
        moved = correlation_matrix({"x": series(a * x + b), "y": series(y)})["x", "y"]
        assert moved == pytest.approx(base, abs=1e-9)


class TestEntropy:
    def test_gaussian(self):
        x = np.random.default_rng(0).normal(0, 1, 10000)
        assert abs(knn_entropy(x) - GAUSS_BITS) <= 0.1

    def test_uniform(self):
        x = np.random.default_rng(0).uniform(0, 8, 10000)
        assert abs(knn_entropy(x) - 3.0) <= 0.1

    @pytest.mark.parametrize("a,b", [(2, 0), (4, 100), (0.5, -3)])
    def test_affine_shift(self, a, b):
        x = np.random.default_rng(5).normal(0, 1, 10000)
        assert abs(knn_entropy(a * x + b) - knn_entropy(x) - np.log2(a)) <= 0.1

    def test_ties_are_finite(self):
        assert np.isfinite(knn_entropy(np.repeat([0.0, 400.0], 500)))

    def test_too_short(self):
        with pytest.raises(TooShort):
            knn_entropy([1.0, 2.0, 3.0], k=3)
        with pytest.raises(TooShort):
            knn_entropy([1.0, np.nan, 2.0, np.nan, 4.0], k=3)

    def test_adding_load_does_not_lower(self):
        rng = np.random.default_rng(9)
        base = rng.normal(3000, 300, 10000)
        extra = 800 * (rng.random(10000) < 0.4)
        assert knn_entropy(base + extra) >= knn_entropy(base) - 0.2

    def _hier(self, with_series):
        nodes = {"b": MeterNode("b", Level.BUILDING, with_series.get("b"), ("f",)),
                 "f": MeterNode("f", Level.FLOOR, with_series.get("f"))}
        return MeterHierarchy(nodes, "b")

    def test_by_level(self):
        rng = np.random.default_rng(2)
        n = 10000
        ahu = np.clip(4000 + np.cumsum(rng.normal(0, 50, n)), 1000, 8000)
        others = sum(rng.uniform(200, 3000) * (rng.random(n) < rng.uniform(0.2, 0.8)) for _ in range(10))
        out = entropy_by_level(self._hier({"b": series(ahu + others), "f": series(ahu)}))
        assert out["f"] < out["b"]

    def test_single_and_skip(self):
        out = entropy_by_level(self._hier({"f": series(np.arange(20.0))}))
        assert list(out) == ["f"]
        assert entropy_csv(out).startswith("node_id,entropy_bits\nf,")

    def test_failing_node_warns(self):
        h = self._hier({"b": series(np.arange(20.0)), "f": series([1.0, 2.0])})
        with pytest.warns(UserWarning):
            out = entropy_by_level(h)
        assert list(out) == ["b"]
        with pytest.raises(TooShort):
            entropy_by_level(h, raise_errors=True)


class TestHourwise:
    def week_series(self, values_per_hour, weeks=1):
        return PowerSeries(MONDAY, 3600, np.tile(values_per_hour, weeks))

    def test_constant(self):
        m = hourwise_matrix(self.week_series(np.full(168, 500.0)))
        assert np.all(m.values == 1.0)

    def test_delta(self):
        v = np.zeros(168)
        v[9] = 2000.0  # Monday 09:00
        m = hourwise_matrix(self.week_series(v, 2))
        assert m.values[0, 9] == 1.0 and m.values.sum() == 1.0

    def test_all_zero(self):
        m = hourwise_matrix(self.week_series(np.zeros(168)))
        assert np.all(m.values == 0)

    def test_local_offset(self):
        v = np.zeros(168)
        v[9] = 1.0  # 09:00 UTC Monday = 14:30 local IST, inside 14:00 hour on 30-min grid
        s = PowerSeries(MONDAY, 1800, np.repeat(v, 2))
        m = hourwise_matrix(s, 19800)
        assert m.values[0, 14] > 0 and m.values[0, 15] > 0 and m.values[0, 9] == 0

    def test_unobserved_cells(self):
        m = hourwise_matrix(PowerSeries(MONDAY, 3600, np.ones(24)))
        assert np.all(m.values[0] == 1) and np.isnan(m.values[1:]).all()
        assert m.counts[0].tolist() == [1] * 24

    @settings(deadline=None, max_examples=30)
    @given(st.lists(st.floats(0, 1e4), min_size=168, max_size=168), st.floats(0.1, 100))
    def test_bounds_and_scale(self, xs, c):
        s = self.week_series(np.array(xs))
        m = hourwise_matrix(s)
        assert np.all((m.values >= 0) & (m.values <= 1))
        if max(xs) > 0:
            assert np.max(m.values) == 1.0
        m2 = hourwise_matrix(s.with_values(c * s.values))
        np.testing.assert_allclose(m2.values, m.values, rtol=1e-12, atol=1e-15)

    def test_separation(self):
        v = np.ones(168)
        v[120:] = 0.5
        m = hourwise_matrix(self.week_series(v))
        assert weekday_weekend_separation(m) == pytest.approx(0.5)
        assert m.to_csv().splitlines()[1].startswith("Mon,1,")
