import math
from fractions import Fraction

import pandas as pd
import pytest

from laurentcf import config
from laurentcf.errors import BudgetExceededError, CaseError, HolderViolation
from laurentcf.metric import (
    CantorParams,
    IndexSequence,
    basic_set_count,
    check_holder,
    check_index_conditions,
    check_mass_conservation,
    check_membership,
    diameter,
    enumerate_basic_sets,
    f_k,
    iter_degree_classes,
    local_dimension_profile,
    mass,
    solve_s_kM,
)


@pytest.fixture
def relaxed():
    """q=2, k=2, B=1, M=2 with a single window starting after position 3."""
    return CantorParams.build(2, 2, 1.0, 2, 0.05, relaxed=[3])


@pytest.fixture
def strict():
    return CantorParams.build(2, 1, 1.0, 8, 0.2)


class TestBuild:
    def test_root_and_rates(self, relaxed):
        assert relaxed.s == solve_s_kM(2, 2, 1.0, 2)
        assert 0.5 < relaxed.s < 1
        assert sum(relaxed.alphas) == pytest.approx(1.0, abs=1e-12)
        assert not relaxed.strict

    def test_free_factor(self, relaxed):
        assert relaxed.free_factor == pytest.approx(f_k(relaxed.s, 2))

    def test_layout(self, relaxed):
        layout = relaxed.layout(6)
        forced = [math.floor(3 * a) + 1 for a in relaxed.alphas]
        assert layout == [None, None, None] + forced + [None]
        assert relaxed.next_forced(3) == forced[0]

    def test_rejects_large_eps(self):
        with pytest.raises(ValueError):
            CantorParams.build(2, 2, 1.0, 2, 0.4)

    def test_rejects_growth_rate_beyond_truncation(self):
        with pytest.raises(CaseError, match="increase M"):
            CantorParams.build(2, 1, 50.0, 2, 0.05)

    def test_rejects_composite_q(self):
        with pytest.raises(ValueError):
            CantorParams.build(4, 1, 1.0, 4, 0.05)

    @pytest.mark.parametrize("terms", [[5, 3], [3, 4]])
    def test_rejects_bad_relaxed_sequence(self, terms):
        with pytest.raises(ValueError):
            CantorParams.build(2, 2, 1.0, 2, 0.05, relaxed=terms)


class TestIndexSequence:
    def test_strict_conditions(self, strict):
        rows = check_index_conditions(strict, 4)
        assert len(rows) == 4
        assert all(r.window_ok and r.gap_ok for r in rows)
        assert [r.n_j for r in rows] == strict.n_seq.head(4)

    def test_strict_first_term(self, strict):
        s, eps = strict.s, strict.eps
        n_1 = strict.n_seq.term(1)
        assert n_1 >= 2 * (s - eps) / (eps * min(strict.alphas))
        assert strict.n_seq.term(2) >= s * (n_1 + 1) / eps

    def test_relaxed_ends(self, relaxed):
        assert relaxed.n_seq.term(2) is None
        assert relaxed.n_seq.up_to(10) == [3]
        assert relaxed.n_seq.up_to(3) == []
        rows = check_index_conditions(relaxed, 5)
        assert len(rows) == 1
        assert rows[0].gap_ratio is None

    def test_spacing(self):
        with pytest.raises(ValueError):
            IndexSequence(False, 2, 0.7, 0.05, (0.5, 0.5), [1, 2])

    def test_membership(self, strict):
        rows = check_membership(strict, 3)
        assert all(r.ok for r in rows)
        assert all(r.window_degree_sum >= r.required for r in rows)


class TestMass:
    def test_conservation(self, relaxed):
        assert check_mass_conservation(relaxed, 6) <= 1e-10

    def test_conservation_budget(self, relaxed):
        with pytest.raises(BudgetExceededError):
            check_mass_conservation(relaxed, 6, budget=4)

    def test_class_totals(self, relaxed):
        for order in range(1, 7):
            total = sum(c.count * math.exp(c.log_mass) for c in iter_degree_classes(relaxed, order))
            assert total == pytest.approx(1.0, abs=1e-10)

    def test_inadmissible_pattern(self, relaxed):
        with pytest.raises(ValueError):
            mass(relaxed, (3,))
        with pytest.raises(ValueError):
            mass(relaxed, (1, 1, 1, 1))

    def test_diameter(self, relaxed):
        forced = relaxed.layout(4)[3]
        assert diameter(relaxed, (1, 2, 1)) == Fraction(1, 2 ** (2 * 4 + forced))
        assert diameter(relaxed, (1,)) == Fraction(1, 8)


class TestEnumeration:
    def test_pattern_count(self, relaxed):
        sets = list(enumerate_basic_sets(relaxed, 5))
        assert len(sets) == basic_set_count(relaxed, 5, explicit=False) == 8
        total = sum(b.multiplicity for b in sets)
        assert total == basic_set_count(relaxed, 5)

    def test_explicit(self, relaxed):
        sets = list(enumerate_basic_sets(relaxed, 2, explicit=True))
        assert len(sets) == basic_set_count(relaxed, 2) == (2 + 4) ** 2
        assert len({b.quotients for b in sets}) == len(sets)

    def test_budget(self, relaxed):
        with pytest.raises(BudgetExceededError) as info:
            list(enumerate_basic_sets(relaxed, 5, explicit=True, budget=10))
        assert info.value.budget == 10

    def test_budget_from_config(self, relaxed):
        config.set("laurentcf.budget", 3)
        try:
            with pytest.raises(BudgetExceededError):
                list(enumerate_basic_sets(relaxed, 5))
        finally:
            config.remove("laurentcf.budget")


class TestHolder:
    def test_strict_holds(self, strict):
        report = check_holder(strict, 12)
        assert report.ok
        assert report.strict
        assert report.worst_ratio >= strict.bound
        assert report.rows[0].order == strict.n_seq.term(1)

    def test_classes_match_enumeration(self, relaxed):
        by_class = check_holder(relaxed, 6, start=1)
        by_pattern = check_holder(relaxed, 6, start=1, method="enumerate")
        for a, b in zip(by_class.rows, by_pattern.rows):
            assert a.worst_ratio == pytest.approx(b.worst_ratio, rel=1e-12)

    def test_relaxed_records_violations(self):
        params = CantorParams.build(2, 1, 1.0, 8, 0.01, relaxed=[1, 2])
        report = check_holder(params, 3, start=1)
        assert not report.ok
        assert report.violations[0][0] == 1

    def test_strict_raises(self):
        params = CantorParams.build(2, 1, 1.0, 8, 0.01, relaxed=[1, 2])
        params.n_seq = IndexSequence(True, 1, params.s, params.eps, params.alphas, [1, 2])
        with pytest.raises(HolderViolation) as info:
            check_holder(params, 3)
        assert info.value.order == 1

    def test_strict_depth_below_first_window(self, strict):
        with pytest.raises(ValueError):
            check_holder(strict, 1)

    def test_unknown_method(self, relaxed):
        with pytest.raises(ValueError):
            check_holder(relaxed, 3, start=1, method="sample")


def test_local_dimension_profile(relaxed):
    df = local_dimension_profile(relaxed, 6)
    assert isinstance(df, pd.DataFrame)
    assert list(df["order"]) == list(range(1, 7))
    assert (df["min_ratio"] <= df["mean_ratio"] + 1e-12).all()
    assert (df["mean_ratio"] <= df["max_ratio"] + 1e-12).all()
