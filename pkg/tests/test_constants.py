import numpy as np
import pytest

from greedybases.constants import (
    conservative_constant,
    democratic_constant,
    fundamental_function,
    greedy_type_constant,
    indicator_extremes,
    is_left_spread_monotone,
    is_right_spread_monotone,
    is_symmetric,
    quasi_greedy_constant,
    reverse_conservative_constant,
)
from greedybases.corpus import make_corpus
from greedybases.exceptions import CapExceededError, EmptyCorpusError, InvalidParameterError
from greedybases.greedy import tga
from greedybases.settings import configure_settings
from greedybases.space import dual_space, example_space, lp_space, norm, summing_space, weighted_space

INCREASING = weighted_space([1, 2, 3, 4])
DECREASING = weighted_space([4, 3, 2, 1])


class TestExampleSpaceConstants:
    def test_democratic(self):
        est = democratic_constant(example_space(3))
        assert est.value == pytest.approx(3.0)
        assert est.is_exact
        assert est.witness["B"] == [1, 2, 3, 4, 5, 6]
        assert est.witness["norm_A"] == 6.0
        assert est.witness["norm_B"] == 2.0

    def test_conservative_is_one(self):
        est = conservative_constant(example_space(3))
        assert est.value == 1.0
        assert est.is_exact

    def test_conservative_is_forced_at_small_size_cap(self):
        est = conservative_constant(example_space(3), size_cap=6)
        assert est.value == 1.0
        assert est.exactness == "exact"
        assert est.budget["forced"] is True

    def test_fundamental_function(self):
        assert fundamental_function(example_space(3), 6) == 6.0
        assert fundamental_function(example_space(3), 0) == 0.0

    @pytest.mark.slow
    def test_dual_space(self):
        dual = dual_space(example_space(3))
        assert reverse_conservative_constant(dual, size_cap=6).value == pytest.approx(1.0, abs=1e-7)
        assert democratic_constant(dual, size_cap=6).value >= 3.0


class TestIndicatorConstants:
    def test_symmetric_space_is_exactly_democratic(self):
        est = democratic_constant(lp_space(4, 2), size_cap=2)
        assert est.value == pytest.approx(1.0)
        assert est.is_exact

    def test_increasing_weights(self):
        assert conservative_constant(INCREASING).value < 1.0
        est = reverse_conservative_constant(INCREASING)
        assert est.value == pytest.approx(4.0)
        assert est.witness["A"] == [4]
        assert est.witness["B"] == [1]

    def test_indicator_extremes(self):
        extremes = indicator_extremes(lp_space(3, 1))
        assert [(e.size, e.max_value, e.min_value) for e in extremes] == [(1, 1.0, 1.0), (2, 2.0, 2.0), (3, 3.0, 3.0)]

    def test_size_cap_above_subset_cap(self):
        configure_settings(cap_subset=2)
        with pytest.raises(CapExceededError):
            democratic_constant(lp_space(4, 1), size_cap=3)

    def test_size_cap_range(self):
        with pytest.raises(InvalidParameterError):
            democratic_constant(lp_space(4, 1), size_cap=0)

    def test_lower_bound_below_full_enumeration(self):
        est = democratic_constant(INCREASING, size_cap=2)
        assert est.exactness == "lower_bound"


class TestForcedValues:
    def test_symmetry(self):
        assert is_symmetric(lp_space(5, 3))
        assert is_symmetric(weighted_space([2, 2, 2]))
        assert not is_symmetric(INCREASING)

    def test_spread_monotone(self):
        assert is_right_spread_monotone(example_space(3))
        assert is_right_spread_monotone(INCREASING)
        assert not is_right_spread_monotone(DECREASING)
        assert is_left_spread_monotone(DECREASING)
        assert not is_right_spread_monotone(summing_space(3))


class TestGreedyTypeConstants:
    def test_quasi_greedy_absolute(self):
        space = example_space(2)
        est = quasi_greedy_constant(space, None)
        assert est.value == 1.0
        assert est.is_exact
        x, m = np.array(est.witness["x"]), est.witness["m"]
        assert norm(space, tga(x, m)) / norm(space, x) == est.value

    def test_quasi_greedy_summing_basis(self):
        space = summing_space(4)
        est = quasi_greedy_constant(space, make_corpus(4, 50, seed=2))
        assert est.exactness == "lower_bound"
        assert est.value >= 1.0

    @pytest.mark.parametrize("kind", ["ag", "greedy"])
    def test_lp_bases_are_greedy(self, kind):
        est = greedy_type_constant(lp_space(4, 1), kind, make_corpus(4, 30, seed=0), seed=0)
        assert est.value == pytest.approx(1.0)
        assert est.budget["evaluated"] > 0

    def test_one_pg_bounded_by_one_on_l1(self):
        est = greedy_type_constant(lp_space(4, 1), "one_pg", make_corpus(4, 30, seed=0))
        assert est.value <= 1.0 + 1e-9
        assert est.budget["m_values"] == [1]

    def test_infeasible_denominators_are_counted(self):
        corpus = np.array([[3.0, 1.0, 2.0, 0.5]])
        est = greedy_type_constant(lp_space(4, 1), "property_star", corpus, m_values=[1])
        assert est.budget["skipped_infeasible"] == 1
        assert est.budget["evaluated"] == 0

    def test_empty_corpus(self):
        with pytest.raises(EmptyCorpusError):
            greedy_type_constant(lp_space(4, 1), "qc", np.empty((0, 4)))

    def test_unknown_kind(self):
        with pytest.raises(InvalidParameterError):
            greedy_type_constant(lp_space(4, 1), "super_greedy", make_corpus(4, 5))
