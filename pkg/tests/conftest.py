import numpy as np
import pytest
from hypothesis import settings, strategies as st

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
complex_numbers = st.builds(complex, finite, finite)
seeds = st.integers(0, 2**32 - 1)


def complex_matrices(n: int):
    return st.lists(complex_numbers, min_size=n * n, max_size=n * n).map(
        lambda xs: np.array(xs, dtype=complex).reshape(n, n)
    )


pauli_vectors = st.lists(complex_numbers, min_size=4, max_size=4).map(lambda xs: np.array(xs, dtype=complex))


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)
