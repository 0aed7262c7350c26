import logging
import math
from fractions import Fraction

import numpy as np
import pytest

from laurentcf import config
from laurentcf.algebra import FieldSpec, LaurentSeries, Poly, expand_truncated
from laurentcf.metric import GrowthFunction, tail_measure
from laurentcf.stochastic import (
    SamplerConfig,
    certified_degrees,
    default_precision,
    degree_distribution,
    degree_law,
    independence_check,
    independence_from_pairs,
    measure_dichotomy_series,
    sample_coefficients,
    sample_degrees,
    sample_uniform,
    tail_event_frequency,
)
from laurentcf.stochastic import _auto_cutoff, _degrees_generic
from laurentcf.testing import rng


@pytest.fixture(autouse=True)
def clear_config():
    config.clear()
    yield
    config.clear()


class TestSamplerConfig:
    @pytest.mark.parametrize(
        "kwargs", [{"q": 4, "n_samples": 10}, {"q": 2, "n_samples": 0}, {"q": 2, "n_samples": 5, "precision": 0}]
    )
    def test_validation(self, kwargs):
        with pytest.raises(ValueError):
            SamplerConfig(**kwargs)

    def test_precision(self):
        assert SamplerConfig(2, 10).resolved_precision(1) == default_precision(2, 1) == 32
        assert SamplerConfig(2, 10, precision=12).resolved_precision(50) == 12
        assert default_precision(2, 14) == 128

    def test_min_precision_from_config(self):
        config.set("laurentcf.mc.min_precision", 64)
        assert default_precision(2, 1) == 64

    def test_chunk_size_from_config(self):
        config.set("laurentcf.mc.chunk_size", 7)
        assert SamplerConfig(2, 10).resolved_chunk_size() == 7
        assert SamplerConfig(2, 10, chunk_size=3).resolved_chunk_size() == 3


class TestSampling:
    def test_chunks(self):
        chunks = list(sample_coefficients(SamplerConfig(3, 10, chunk_size=3), 8))
        assert [c.shape for c in chunks] == [(3, 8), (3, 8), (3, 8), (1, 8)]
        assert all(c.min() >= 0 and c.max() < 3 for c in chunks)

    def test_deterministic(self):
        cfg = SamplerConfig(2, 500, seed=11, chunk_size=64)
        first = np.vstack(list(sample_coefficients(cfg, 16)))
        second = np.vstack(list(sample_coefficients(cfg, 16)))
        assert np.array_equal(first, second)
        other = np.vstack(list(sample_coefficients(SamplerConfig(2, 500, seed=12, chunk_size=64), 16)))
        assert not np.array_equal(first, other)

    def test_coefficient_frequencies(self):
        chunk = np.vstack(list(sample_coefficients(SamplerConfig(3, 4000, seed=1), 10)))
        freq = np.bincount(chunk.ravel(), minlength=3) / chunk.size
        assert np.allclose(freq, 1 / 3, atol=0.01)

    def test_sample_uniform(self):
        xs = list(sample_uniform(SamplerConfig(5, 20, seed=3), precision=9))
        assert len(xs) == 20
        assert all(isinstance(x, LaurentSeries) and x.precision == 9 for x in xs)
        assert all(x.in_unit_ideal() for x in xs)


class TestCertifiedDegrees:
    def test_example(self):
        assert certified_degrees(2, [1, 0, 1, 0, 1, 0, 1, 0]) == [1, 1]
        assert certified_degrees(3, [0, 0, 0]) == []
        assert certified_degrees(2, [1, 0, 1, 0, 1, 0, 1, 0], limit=1) == [1]

    def test_bitmask_path_matches_polynomial_path(self):
        gen = rng(4)
        field = FieldSpec(2)
        for _ in range(200):
            coeffs = gen.integers(0, 2, size=int(gen.integers(1, 40))).tolist()
            n = len(coeffs)
            assert certified_degrees(2, coeffs) == _degrees_generic(field, coeffs, n, n)

    @pytest.mark.parametrize("q", [2, 3, 5])
    def test_matches_series_expansion(self, q):
        gen = rng(q)
        field = FieldSpec(q)
        for _ in range(50):
            coeffs = gen.integers(0, q, size=24).tolist()
            cf = expand_truncated(LaurentSeries(field, Poly.zero(field), tuple(coeffs)))
            assert certified_degrees(q, coeffs) == list(cf.degrees[: cf.certified])

    def test_chunk_path_matches_rows(self):
        cfg = SamplerConfig(2, 50, seed=5, precision=21)
        rows = np.vstack(list(sample_coefficients(cfg, 21)))
        assert list(sample_degrees(cfg, 4)) == [certified_degrees(2, r.tolist(), 4) for r in rows]


def test_degree_law():
    assert degree_law(2, 1) == Fraction(1, 2)
    assert degree_law(3, 2) == Fraction(2, 9)
    assert sum(degree_law(5, j) for j in range(1, 60)) + Fraction(1, 5**59) == 1


class TestDegreeDistribution:
    @pytest.mark.parametrize("q,position", [(2, 1), (2, 3), (3, 2)])
    def test_matches_law(self, q, position):
        report = degree_distribution(SamplerConfig(q, 20000, seed=position), position, max_degree=5)
        assert [r.degree for r in report.rows] == [1, 2, 3, 4, 5]
        assert report.max_abs_z < 5
        assert report.used + report.discarded == report.total == 20000
        assert report.rows[0].exact == degree_law(q, 1)

    @pytest.mark.slow
    @pytest.mark.parametrize("q", [2, 3])
    def test_law_at_scale(self, q):
        report = degree_distribution(SamplerConfig(q, 100_000, seed=2024), 1, max_degree=6)
        assert report.max_abs_z < 4.5
        for row in report.rows:
            assert abs(row.empirical - float(row.exact)) < 4.5 * row.sigma / report.used + 1e-12

    def test_discards_are_counted(self):
        report = degree_distribution(SamplerConfig(2, 2000, seed=9, precision=6), 3)
        assert report.discarded > 0
        assert report.used + report.discarded == 2000
        assert report.precision == 6

    def test_frame(self):
        df = degree_distribution(SamplerConfig(2, 200), 1, max_degree=3).frame()
        assert list(df.columns) == ["degree", "count", "empirical", "exact", "sigma", "z"]

    def test_position(self):
        with pytest.raises(ValueError):
            degree_distribution(SamplerConfig(2, 10), 0)


class TestIndependence:
    def test_not_rejected(self):
        report = independence_check(SamplerConfig(2, 20000, seed=17))
        assert report.cutoff == _auto_cutoff(2, 20000) == 6
        assert report.dof == 35
        assert len(report.rows) == 36
        assert not report.rejected()
        assert min(r.expected for r in report.rows) >= 5
        assert report.total == 20000

    def test_q3(self):
        report = independence_check(SamplerConfig(3, 20000, seed=5), positions=(1, 3))
        assert not report.rejected()
        assert report.positions == (1, 3)

    def test_negative_control(self):
        """Pairing each degree with itself is as dependent as it gets."""
        degrees = [d[0] for d in sample_degrees(SamplerConfig(2, 5000, seed=3), 1) if d]
        report = independence_from_pairs([(d, d) for d in degrees], 2)
        assert report.rejected()
        assert report.p_value < 1e-12

    def test_cutoff_bins(self):
        report = independence_from_pairs([(1, 1), (4, 7), (2, 3)], 2, cutoff=3)
        observed = {(r.first, r.second): r.observed for r in report.rows}
        assert observed[("1", "1")] == 1
        assert observed[(">=3", ">=3")] == 1
        assert observed[("2", ">=3")] == 1
        assert sum(observed.values()) == 3

    def test_errors(self):
        with pytest.raises(ValueError):
            independence_from_pairs([], 2)
        with pytest.raises(ValueError):
            independence_from_pairs([(1, 1)], 2, cutoff=1)
        with pytest.raises(ValueError):
            independence_check(SamplerConfig(2, 10), positions=(2, 1))


class TestTailEvents:
    def test_rows(self):
        cfg = SamplerConfig(2, 2000, seed=1)
        report = tail_event_frequency(cfg, 2, GrowthFunction.parse("linear:1"), (1, 6))
        assert [r.n for r in report.rows] == list(range(1, 7))
        assert report.truncated_at is None
        for row in report.rows:
            assert row.used + row.discarded == 2000
            assert row.exact == tail_measure(2, row.M, 2)
        assert report.rows[0].exact == 1 and report.rows[0].z == 0.0
        assert [t.n_upper for t in report.trend] == list(range(1, 7))
        assert len(report.frame()) == 6

    @pytest.mark.slow
    def test_within_four_sigma(self):
        cfg = SamplerConfig(2, 20000, seed=77)
        report = tail_event_frequency(cfg, 2, GrowthFunction.parse("linear:1"), (1, 12))
        assert len(report.rows) == 12
        assert all(abs(r.z) < 4 for r in report.rows)

    def test_truncates_with_warning(self, caplog):
        cfg = SamplerConfig(2, 500, seed=2, precision=10)
        with caplog.at_level(logging.WARNING, logger="laurentcf.stochastic"):
            report = tail_event_frequency(cfg, 2, GrowthFunction.parse("linear:1"), (1, 12))
        assert report.truncated_at is not None and report.truncated_at <= 4
        assert len(report.rows) == report.truncated_at - 1
        assert "truncated" in caplog.text

    def test_unbounded_phi(self):
        cfg = SamplerConfig(2, 200, seed=2)
        report = tail_event_frequency(cfg, 1, GrowthFunction.parse("superexp:2:3"), (10, 12))
        assert all(r.hits == 0 and r.exact == 0 for r in report.rows)

    def test_bad_range(self):
        with pytest.raises(ValueError):
            tail_event_frequency(SamplerConfig(2, 10), 1, GrowthFunction.parse("linear:1"), (5, 2))


class TestDichotomy:
    def test_convergent(self):
        rows = measure_dichotomy_series(2, 1, GrowthFunction.parse("linear:1"), 40)
        assert rows[-1].partial_sum == pytest.approx(1.0, abs=1e-9)
        assert rows[-1].exact_partial_sum == pytest.approx(2.0, abs=1e-9)

    def test_divergent(self):
        rows = measure_dichotomy_series(2, 1, GrowthFunction.parse("log:2"), 1000)
        assert rows[-1].partial_sum > 5
        assert rows[-1].partial_sum == pytest.approx(sum(1 / (n + 2) for n in range(1, 1001)))

    def test_fast_growth_stays_finite(self):
        rows = measure_dichotomy_series(2, 3, GrowthFunction.parse("exp:2"), 1500)
        assert math.isfinite(rows[-1].partial_sum)
        assert math.isfinite(rows[-1].exact_partial_sum)
        assert rows[-1].term == 0.0
