import numpy as np
import pytest

from coevo import BilinearParams, BitVector
from coevo.harness import paired_from_counts, population_from_counts


@pytest.fixture
def fig_params():
    """The n=10 parameterisation used throughout the small exact checks."""
    return BilinearParams(n=10, alpha=0.4, beta=0.6, epsilon=0.1)


def count_vector(c, n):
    """Canonical genome with c ones (first c positions set)."""
    bits = np.zeros(n, dtype=np.uint8)
    bits[:c] = 1
    return BitVector.from_bits(bits)


__all__ = ["count_vector", "paired_from_counts", "population_from_counts"]
