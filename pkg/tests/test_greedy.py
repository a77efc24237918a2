import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.extra.numpy import arrays
from hypothesis.strategies import floats, integers

from greedybases.exceptions import InvalidParameterError, SelectorAxiomError, ZeroVectorError
from greedybases.greedy import (
    BranchSelector,
    bga,
    bga_run,
    check_selector_axioms,
    greedy_ordering,
    greedy_set,
    tga,
    valid_greedy_sets,
    weak_set,
    wtga,
)

vectors = arrays(np.float64, 6, elements=floats(min_value=-5, max_value=5, allow_nan=False))


class TestTGA:
    def test_single_term(self):
        assert greedy_set([3.0, 1.0, 2.0], 1) == (0,)
        assert tga([3.0, 1.0, 2.0], 1).tolist() == [3.0, 0.0, 0.0]

    def test_ties_go_to_smallest_index(self):
        assert greedy_set([1.0, -1.0, 1.0], 2) == (0, 1)

    def test_alpha_beta(self):
        selection = greedy_ordering([1.0, 3.0, 2.0, 0.0], 2)
        assert selection.indices == (1, 2)
        assert (selection.alpha_m, selection.beta_m) == (1, 2)

    def test_m_zero(self):
        selection = greedy_ordering([1.0, 2.0], 0)
        assert selection.indices == ()
        assert selection.alpha_m is None
        assert tga([1.0, 2.0], 0).tolist() == [0.0, 0.0]

    def test_m_out_of_range(self):
        with pytest.raises(InvalidParameterError):
            greedy_set([1.0, 2.0], 3)

    def test_valid_greedy_sets_enumerates_ties(self):
        sets = valid_greedy_sets([1.0, 1.0, 1.0], 2)
        assert sets[0] == (0, 1)
        assert sorted(sets) == [(0, 1), (0, 2), (1, 2)]

    def test_valid_greedy_sets_without_ties(self):
        assert valid_greedy_sets([1.0, 3.0, 2.0], 2) == [(1, 2)]

    def test_valid_greedy_sets_limit(self):
        assert valid_greedy_sets(np.ones(6), 3, limit=5) == [(0, 1, 2)]


class TestWTGA:
    def test_weak_set(self):
        assert weak_set([4.0, 2.0, 1.0], 0.5) == (0, 1)

    def test_weak_set_zero_vector(self):
        with pytest.raises(ZeroVectorError):
            weak_set([0.0, 0.0], 0.5)

    def test_lazy_policy(self):
        selection, approx = wtga([4.0, 3.0, 1.0], 1, 0.5, "lazy")
        assert selection.indices == (1,)
        assert selection.thresholds == (2.0,)
        assert approx.tolist() == [0.0, 3.0, 0.0]

    def test_greedy_policy(self):
        selection, _ = wtga([4.0, 3.0, 1.0], 1, 0.5, "greedy")
        assert selection.indices == (0,)

    def test_custom_policy_must_be_admissible(self):
        with pytest.raises(InvalidParameterError):
            wtga([4.0, 3.0, 1.0], 1, 0.5, lambda mags, admissible: 2)

    @pytest.mark.parametrize("tau", [0.0, 1.0, -0.3])
    def test_tau_range(self, tau):
        with pytest.raises(InvalidParameterError):
            wtga([1.0, 2.0], 1, tau)

    def test_unknown_policy(self):
        with pytest.raises(InvalidParameterError):
            wtga([1.0, 2.0], 1, 0.5, "eager")


class TestBGA:
    def test_smallest_index_rule(self):
        run = bga_run([1.0, 4.0, 3.0], 2, BranchSelector(0.5))
        assert run.indices == (1, 2)
        assert run.admissible_sets == ((1, 2), (2,))
        assert run.approximant.tolist() == [0.0, 4.0, 3.0]

    def test_largest_index_rule(self):
        assert bga([1.0, 4.0, 3.0], 1, BranchSelector(0.5, "largest-index")).tolist() == [0.0, 0.0, 3.0]

    def test_m_beyond_support(self):
        with pytest.raises(InvalidParameterError):
            bga_run([1.0, 0.0, 0.0], 2, BranchSelector(0.5))

    def test_unknown_rule(self):
        with pytest.raises(InvalidParameterError):
            BranchSelector(0.5, "random")

    @pytest.mark.parametrize("rule", ["smallest-index", "largest-coefficient", "largest-index"])
    def test_builtin_rules_satisfy_axioms(self, rule):
        check_selector_axioms(BranchSelector(0.5, rule))

    def test_selector_outside_admissible_set(self):
        selector = BranchSelector(0.5, custom=lambda x, admissible: 0)
        with pytest.raises(SelectorAxiomError):
            check_selector_axioms(selector, probes=[np.array([0.1, 5.0, 4.0])])
        with pytest.raises(SelectorAxiomError):
            bga_run([0.1, 5.0, 4.0], 1, selector)


@settings(max_examples=100, deadline=None)
@given(vectors, integers(min_value=0, max_value=6))
def test_greedy_policy_reproduces_tga(x, m):
    _, approx = wtga(x, m, 0.5, "greedy")
    assert np.array_equal(approx, tga(x, m))


@settings(max_examples=100, deadline=None)
@given(vectors, integers(min_value=1, max_value=6), floats(min_value=0.05, max_value=0.95))
def test_weak_selection_threshold(x, m, tau):
    selection, _ = wtga(x, m, tau, "lazy")
    mags = np.abs(x)
    rest = np.delete(mags, list(selection.indices))
    if rest.size:
        assert mags[list(selection.indices)].min() >= tau * rest.max()


@settings(max_examples=100, deadline=None)
@given(vectors, integers(min_value=0, max_value=6))
def test_largest_coefficient_bga_reproduces_tga(x, m):
    m = min(m, int(np.count_nonzero(x)))
    assert np.array_equal(bga(x, m, BranchSelector(0.5, "largest-coefficient")), tga(x, m))
