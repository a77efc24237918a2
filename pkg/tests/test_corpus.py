import numpy as np
import pytest

from greedybases.corpus import EPSILONS, FAMILIES, make_corpus, proof_witnesses
from greedybases.exceptions import InvalidParameterError
from greedybases.greedy import greedy_set
from greedybases.settings import configure_settings


def test_same_seed_same_corpus():
    assert np.array_equal(make_corpus(5, 40, seed=1), make_corpus(5, 40, seed=1))


def test_different_seed_different_corpus():
    assert not np.array_equal(make_corpus(5, 40, seed=1), make_corpus(5, 40, seed=2))


def test_rows_are_nonzero():
    X = make_corpus(3, 200, seed=0)
    assert X.shape == (200, 3)
    assert np.all(np.any(X != 0.0, axis=1))


def test_every_family_appears():
    X = make_corpus(6, len(FAMILIES), seed=0)
    # the "ties" family draws integers in [-2, 2]
    ties = X[FAMILIES.index("ties")]
    assert np.all(ties == np.round(ties))


def test_defaults_come_from_settings():
    configure_settings(corpus_size=7, seed=3)
    assert make_corpus(4).shape == (7, 4)
    assert np.array_equal(make_corpus(4), make_corpus(4, 7, seed=3))


@pytest.mark.parametrize("dim, size", [(0, 5), (3, 0)])
def test_invalid_arguments(dim, size):
    with pytest.raises(InvalidParameterError):
        make_corpus(dim, size)


class TestProofWitnesses:
    def test_heavy_right(self):
        rows = proof_witnesses(6, [0, 1], [3, 4, 5])
        assert rows.shape == (len(EPSILONS), 6)
        for eps, x in zip(EPSILONS, rows):
            assert x.tolist() == [1.0, 1.0, 0.0, 1.0 + eps, 1.0 + eps, 1.0 + eps]
            assert greedy_set(x, 3) == (3, 4, 5)

    def test_heavy_left(self):
        x = proof_witnesses(4, [0, 1], [2, 3], epsilons=(0.5,), heavy_right=False)[0]
        assert x.tolist() == [1.5, 1.5, 1.0, 1.0]
