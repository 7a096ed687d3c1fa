import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tscodec.core import (
    TimeSeries,
    aad,
    cardinality,
    entropy_and_limit,
    entropy_bits,
    size_metrics,
)

series_values = st.lists(st.integers(min_value=-32768, max_value=32767), min_size=1, max_size=200)


class TestTimeSeries:
    def test_length_and_equality(self):
        a = TimeSeries(samples=np.array([1, 2, 3]))
        b = TimeSeries(samples=[1, 2, 3])
        assert len(a) == 3
        assert a == b

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            TimeSeries(samples=[1 << 31])

    def test_rejects_negative_channel(self):
        with pytest.raises(ValueError):
            TimeSeries(samples=[1], channel_id=-1)

    def test_samples_are_immutable(self):
        ts = TimeSeries(samples=[1, 2])
        with pytest.raises(ValueError):
            ts.samples[0] = 9


class TestCardinality:
    def test_basic(self):
        assert cardinality([1, 1, 2, 3]) == 3

    def test_constant(self):
        assert cardinality([7] * 123) == 1

    def test_empty(self):
        assert cardinality([]) == 0


class TestAad:
    def test_mixed_signs(self):
        assert aad([1, -2, 3]) == 2.0

    def test_all_zero(self):
        assert aad([0] * 10) == 0.0

    def test_alternating(self):
        assert aad([-5, 5, -5, 5]) == 5.0

    def test_empty_errors(self):
        with pytest.raises(ValueError, match="empty"):
            aad([])


class TestSizeMetrics:
    @pytest.mark.parametrize(
        "orig,comp,cr,cs",
        [(1000, 500, 2.0, 0.5), (1000, 1000, 1.0, 0.0), (1000, 80, 12.5, 0.92)],
    )
    def test_examples(self, orig, comp, cr, cs):
        r = size_metrics(orig, comp)
        assert r.cr == pytest.approx(cr)
        assert r.cs == pytest.approx(cs)

    def test_expansion_gives_negative_cs(self):
        assert size_metrics(100, 200).cs == pytest.approx(-1.0)

    def test_zero_size_errors(self):
        with pytest.raises(ValueError):
            size_metrics(0, 10)
        with pytest.raises(ValueError):
            size_metrics(10, 0)

    @given(st.integers(1, 10**9), st.integers(1, 10**9))
    def test_cs_cr_identity(self, orig, comp):
        r = size_metrics(orig, comp)
        assert r.cs == pytest.approx(1.0 - 1.0 / r.cr, abs=1e-12)


class TestEntropy:
    def test_constant_series(self):
        s = entropy_and_limit([42] * 100)
        assert s.entropy_bits == 0.0
        assert s.shannon_cs == 1.0
        assert s.cardinality == 1

    def test_uniform_full_16bit_alphabet(self):
        s = entropy_and_limit(np.arange(-32768, 32768))
        assert s.entropy_bits == pytest.approx(16.0)
        assert s.shannon_cs == pytest.approx(0.0, abs=1e-12)

    def test_two_equiprobable_values(self):
        s = entropy_and_limit([3, 9] * 500)
        assert s.entropy_bits == pytest.approx(1.0)
        assert s.shannon_cs == pytest.approx(0.9375)

    def test_empty_errors(self):
        with pytest.raises(ValueError):
            entropy_and_limit([])

    def test_configurable_reference_width(self):
        s = entropy_and_limit([3, 9] * 500, sample_bits=8)
        assert s.shannon_cs == pytest.approx(1 - 1 / 8)

    @given(series_values)
    def test_entropy_bounded_by_log_cardinality(self, values):
        h = entropy_bits(values)
        assert -1e-9 <= h <= math.log2(max(cardinality(values), 1)) + 1e-9

    def test_equality_on_uniform(self):
        values = np.repeat(np.arange(32), 7)
        assert entropy_bits(values) == pytest.approx(5.0)

    @given(series_values)
    def test_self_concatenation_invariance(self, values):
        twice = values + values
        assert cardinality(twice) == cardinality(values)
        assert aad(twice) == pytest.approx(aad(values))
        assert entropy_bits(twice) == pytest.approx(entropy_bits(values))
