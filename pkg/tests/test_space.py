import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.extra.numpy import arrays
from hypothesis.strategies import data, floats, integers, lists

from greedybases.exceptions import (
    CapExceededError,
    DimensionMismatchError,
    InvalidParameterError,
    UnsupportedNormError,
)
from greedybases.space import (
    Lp,
    SpaceSpec,
    WeightedL1,
    basis_constant,
    batch_norm,
    dual_norm,
    dual_norm_witness,
    dual_space,
    example_space,
    indicator,
    is_absolute,
    linear_space,
    lp_space,
    norm,
    polyhedral_space,
    project,
    spread,
    summing_space,
    support,
    weighted_space,
)

coefficients = floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)


class TestExampleSpace:
    def test_dimension(self):
        assert example_space(3).dim == 12
        assert example_space(2).dim == 4

    def test_indicator_norms(self):
        space = example_space(3)
        assert norm(space, indicator(12, range(6))) == 2.0
        assert norm(space, indicator(12, range(6, 12))) == 6.0

    def test_dual_norms(self):
        space = example_space(3)
        assert dual_norm(space, indicator(12, range(6, 12))) == pytest.approx(1.0, abs=1e-9)
        low = dual_norm(space, indicator(12, range(6)))
        assert low >= 3.0
        assert low == pytest.approx(3.5, abs=1e-9)

    def test_dual_space_norm_matches_dual_norm(self):
        space = example_space(3)
        f = indicator(12, range(6, 12))
        assert norm(dual_space(space), f) == pytest.approx(dual_norm(space, f), abs=1e-12)

    def test_above_cap(self):
        with pytest.raises(CapExceededError):
            example_space(4)

    def test_rejects_small_n(self):
        with pytest.raises(InvalidParameterError):
            example_space(1)


class TestNorms:
    def test_lp_values(self):
        x = np.array([3.0, 4.0, 0.0])
        assert norm(lp_space(3, 2), x) == pytest.approx(5.0)
        assert norm(lp_space(3, 1), x) == 7.0
        assert norm(lp_space(3, math.inf), x) == 4.0

    def test_weighted(self):
        assert norm(weighted_space([1, 2, 3]), [1.0, -1.0, 1.0]) == 6.0

    def test_polyhedral_adds_singletons(self):
        space = polyhedral_space(3, [[0, 1]])
        assert norm(space, [0.0, 0.0, 5.0]) == 5.0
        assert norm(space, [1.0, -2.0, 0.0]) == 3.0

    def test_summing_basis(self):
        space = summing_space(3)
        assert norm(space, [1.0, 0.0, 0.0]) == 1.0
        assert norm(space, [1.0, -1.0, 0.0]) == 1.0
        assert norm(space, [1.0, 1.0, 1.0]) == 3.0
        assert not is_absolute(space)

    def test_batch_matches_single(self):
        space = example_space(2)
        X = np.array([[1.0, 2.0, -3.0, 0.5], [0.0, 1.0, 1.0, 0.0]])
        assert batch_norm(space, X).tolist() == [norm(space, X[0]), norm(space, X[1])]

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            norm(lp_space(3, 2), [1.0, 2.0])

    def test_is_absolute(self):
        assert is_absolute(lp_space(4, 3))
        assert is_absolute(example_space(2))
        assert is_absolute(dual_space(weighted_space([1, 2])))
        assert is_absolute(linear_space([[2.0, 0.0], [0.0, 1.0]]))
        assert not is_absolute(dual_space(summing_space(3)))


class TestValidation:
    def test_lp_exponent(self):
        with pytest.raises(InvalidParameterError):
            Lp(0.5)

    def test_weights_positive(self):
        with pytest.raises(InvalidParameterError):
            weighted_space([1.0, 0.0])

    def test_weights_length(self):
        with pytest.raises(DimensionMismatchError):
            SpaceSpec(3, WeightedL1((1.0, 2.0)))

    def test_linear_rows_must_span(self):
        with pytest.raises(InvalidParameterError):
            linear_space([[1.0, 1.0], [2.0, 2.0]])

    def test_family_row_out_of_range(self):
        with pytest.raises(InvalidParameterError):
            polyhedral_space(3, [[0, 3]])

    def test_bidual_unsupported(self):
        with pytest.raises(UnsupportedNormError):
            dual_space(dual_space(lp_space(3, 1)))


class TestDualNorms:
    @pytest.mark.parametrize("p, q", [(1.0, math.inf), (math.inf, 1.0), (2.0, 2.0), (3.0, 1.5)])
    def test_lp_duality(self, p, q):
        f = np.array([1.0, -2.0, 0.5])
        assert dual_norm(lp_space(3, p), f) == pytest.approx(norm(lp_space(3, q), f))

    def test_weighted(self):
        assert dual_norm(weighted_space([1, 2, 4]), [1.0, 1.0, 8.0]) == pytest.approx(2.0)

    @pytest.mark.parametrize("space", [example_space(3), summing_space(4), weighted_space([1, 3, 2, 5])], ids=lambda s: s.label)
    def test_witness_attains_value(self, space):
        rng = np.random.default_rng(0)
        f = rng.standard_normal(space.dim)
        value, x = dual_norm_witness(space, f)
        assert norm(space, x) <= 1.0 + 1e-9
        assert float(f @ x) == pytest.approx(value, abs=1e-9)

    def test_zero_functional(self):
        assert dual_norm(lp_space(3, 2), np.zeros(3)) == 0.0


class TestHelpers:
    def test_project_and_support(self):
        x = np.array([1.0, 0.0, -2.0, 3.0])
        assert project(x, [0, 2]).tolist() == [1.0, 0.0, -2.0, 0.0]
        assert support(x) == (0, 2, 3)

    def test_spread(self):
        assert spread(np.array([1.0, 0.0, 2.0]), [1, 2]).tolist() == [0.0, 1.0, 2.0]

    def test_spread_needs_increasing_positions(self):
        with pytest.raises(InvalidParameterError):
            spread(np.array([1.0, 2.0, 0.0]), [2, 1])


class TestBasisConstant:
    def test_absolute_is_exact_one(self):
        est = basis_constant(example_space(2))
        assert est.value == 1.0
        assert est.is_exact

    def test_summing_basis_lower_bound(self):
        est = basis_constant(summing_space(4), budget=200, seed=1)
        assert est.exactness == "lower_bound"
        assert est.value >= 1.0


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, 4, elements=coefficients), arrays(np.float64, 4, elements=coefficients))
def test_triangle_inequality(x, y):
    for space in (example_space(2), lp_space(4, 3), summing_space(4)):
        assert norm(space, x + y) <= norm(space, x) + norm(space, y) + 1e-9


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, 4, elements=coefficients), floats(min_value=-5, max_value=5))
def test_homogeneity(x, c):
    space = example_space(2)
    assert norm(space, c * x) == pytest.approx(abs(c) * norm(space, x), rel=1e-12, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, 4, elements=coefficients), arrays(np.float64, 4, elements=coefficients))
def test_duality_inequality(f, x):
    for space in (example_space(2), summing_space(4), lp_space(4, 3), weighted_space([1, 2, 3, 4])):
        bound = dual_norm(space, f) * norm(space, x)
        assert float(f @ x) <= bound + 1e-7 * (1.0 + bound)


nonzero = floats(min_value=0.1, max_value=10) | floats(min_value=-10, max_value=-0.1)


@settings(max_examples=100, deadline=None)
@given(data())
def test_right_spreading_never_decreases_the_example_norm(draw):
    space = example_space(3)
    k = draw.draw(integers(min_value=1, max_value=6))
    positions = lists(integers(min_value=0, max_value=space.dim - 1), min_size=k, max_size=k, unique=True)
    a = sorted(draw.draw(positions))
    b = sorted(draw.draw(positions))
    # elementwise min/max of two increasing sequences stay increasing
    source = [min(i, j) for i, j in zip(a, b)]
    target = [max(i, j) for i, j in zip(a, b)]
    x = np.zeros(space.dim)
    x[source] = draw.draw(lists(nonzero, min_size=k, max_size=k))
    assert norm(space, x) <= norm(space, spread(x, target)) + 1e-12


@settings(max_examples=100, deadline=None)
@given(
    arrays(np.float64, 4, elements=coefficients),
    arrays(np.bool_, 4),
    arrays(np.bool_, 4),
)
def test_one_unconditional_norms(x, flips, kept):
    signs = np.where(flips, -1.0, 1.0)
    for space in (example_space(2), lp_space(4, 3), weighted_space([1, 2, 3, 4]), polyhedral_space(4, [[0, 1], [1, 2, 3]])):
        value = norm(space, x)
        assert norm(space, signs * x) == pytest.approx(value, rel=1e-12, abs=1e-12)
        assert norm(space, project(x, np.flatnonzero(kept))) <= value + 1e-12
