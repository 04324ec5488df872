import numpy as np
import pytest

from cp2tori.family import AlphaTriple, Branch, ModuliPoint, derive_constants

# triples used throughout the sweeps (all normalized, coprime differences)
CANONICAL_TRIPLES = [(2, 1, -1), (3, 1, -1), (3, 2, -1), (1, 0, -1), (2, 0, -1)]


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240801)


@pytest.fixture(scope="session")
def sample_derived():
    """A feasible minus-branch point used by many tests."""
    return derive_constants(AlphaTriple(2, 1, -1), ModuliPoint(1.8, 1.2, Branch.MINUS))


@pytest.fixture(scope="session")
def sample_derived_plus():
    return derive_constants(AlphaTriple(2, 1, -1), ModuliPoint(1.8, 1.2, Branch.PLUS))


@pytest.fixture(scope="session")
def degenerate_derived():
    """A feasible point of the alpha2 = 0 family (minus branch)."""
    return derive_constants(AlphaTriple(1, 0, -1), ModuliPoint(0.9, 0.4, Branch.MINUS))
