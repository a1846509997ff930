import numpy as np
import pytest

from utils.errors import OplatError
from utils.pmap_filters import reference_signature
from utils.pmap_obstructions import (
    force_minimal_projection,
    gamma_counterexample,
    schmidt_coefficients,
    toeplitz_index,
    winding_obstruction,
)

SIG = reference_signature([1, 0], [0, 1])


@pytest.mark.parametrize(
    "symbol, expected",
    [({1: 1}, 1), ({2: 1, 0: 0.5}, 2), ({0: 1}, 0), ({-1: 1}, -1), ({0: 2, 1: 1}, 0)],
)
def test_winding_numbers(symbol, expected):
    assert winding_obstruction(symbol) == expected


def test_toeplitz_index_is_minus_the_winding():
    assert toeplitz_index({1: 1}) == -1


def test_symbol_must_not_vanish():
    with pytest.raises(OplatError):
        winding_obstruction({0: -1, 1: 1})
    with pytest.raises(OplatError):
        winding_obstruction({})


def test_product_vectors_are_not_forced():
    xi = np.kron([1.0, 0.0], [0.0, 1.0])
    assert np.allclose(schmidt_coefficients(xi, 2), [1.0, 0.0])
    report = force_minimal_projection(xi, 2, SIG, np.random.default_rng(0))
    assert not report.forced
    assert report.attempts == 0
    assert np.allclose(report.value, np.diag([0.0, 1.0]))


def test_entangled_vectors_are_forced_to_zero():
    xi = np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2)
    report = force_minimal_projection(xi, 2, SIG, np.random.default_rng(1))
    assert report.forced
    first, second = report.chain.values
    assert np.max(np.abs(first - second)) > 1e-6


def test_gamma_witness():
    witness = gamma_counterexample(2, SIG)
    assert witness.verified
    assert len(witness.projections) == 4
    assert witness.sum_error <= 1e-10


def test_gamma_arguments():
    with pytest.raises(OplatError):
        gamma_counterexample(5, SIG)
    with pytest.raises(OplatError):
        gamma_counterexample(2, reference_signature([1, 0, 0], [0, 1, 0]))
