import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qcorr import linalg, states
from qcorr.errors import DimensionError, ValidityError
from qcorr.linalg import SX

from conftest import seeds

dims_2_3 = st.sampled_from([(2, 2), (2, 3), (3, 2), (3, 3)])


def test_validate_state_examples():
    states.validate_state(np.eye(4) / 4, 2, 2)
    states.validate_state(states.phi_plus().rho, 2, 2)
    with pytest.raises(ValidityError, match="trace"):
        states.validate_state(np.kron(SX, SX), 2, 2)


def test_validate_state_distinct_errors():
    with pytest.raises(ValidityError, match="Hermitian"):
        states.validate_state(np.array([[0.5, 0.1], [0.0, 0.5]]), 1, 2)
    with pytest.raises(ValidityError, match="negative eigenvalue"):
        states.validate_state(np.diag([1.5, -0.5]), 1, 2)
    with pytest.raises(DimensionError):
        states.validate_state(np.eye(4) / 4, 2, 3)


def test_bell_diagonal_examples():
    np.testing.assert_allclose(states.bell_diagonal_state(states.BellDiagonalCoeffs(0, 0, 0)).rho, np.eye(4) / 4)
    # Oracle: explicit Pauli sum against the Bell projector.
    P = linalg.PAULIS
    direct = (np.kron(P[0], P[0]) + np.kron(P[1], P[1]) - np.kron(P[2], P[2]) + np.kron(P[3], P[3])) / 4
    phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    np.testing.assert_allclose(direct, np.outer(phi, phi), atol=1e-15)
    rho = states.bell_diagonal_state(states.BellDiagonalCoeffs(1, -1, 1)).rho
    np.testing.assert_allclose(rho, np.outer(phi, phi), atol=1e-15)
    with pytest.raises(ValidityError, match="-0.5"):
        states.bell_diagonal_state(states.BellDiagonalCoeffs(1, 1, 1))


@given(seeds)
def test_bell_diagonal_marginals_maximally_mixed(seed):
    s = states.bell_diagonal_state(states.random_bell_diagonal(seed))
    np.testing.assert_allclose(s.reduced("A"), np.eye(2) / 2, atol=1e-12)
    np.testing.assert_allclose(s.reduced("B"), np.eye(2) / 2, atol=1e-12)


def test_bell_acceptance_rate_is_tetrahedron_fraction():
    # Oracle: plain Monte-Carlo over the cube, independent of the sampler loop.
    rng = np.random.default_rng(1)
    c = rng.uniform(-1, 1, (100_000, 3))
    ev = np.stack([1 - c.sum(1), 1 - c[:, 0] + c[:, 1] + c[:, 2],
                   1 + c[:, 0] - c[:, 1] + c[:, 2], 1 + c[:, 0] + c[:, 1] - c[:, 2]])
    frac = np.mean(np.all(ev >= 0, axis=0))
    assert frac == pytest.approx(1 / 3, abs=0.01)
    rng = np.random.default_rng(2)
    attempts = sum(states._bell_rejection(rng)[1] for _ in range(20_000))
    assert 20_000 / attempts == pytest.approx(1 / 3, abs=0.01)


def test_classical_quantum_examples():
    s = states.classical_quantum_state([1.0], [[1, 0]], [np.eye(2) / 2])
    np.testing.assert_allclose(s.rho, np.kron(np.diag([1, 0]), np.eye(2) / 2))
    plus = np.full((2, 2), 0.5)
    s = states.classical_quantum_state([0.5, 0.5], np.eye(2), [np.diag([1, 0]), plus])
    assert s.dims == (2, 2)
    with pytest.raises(ValidityError, match="sum to 1"):
        states.classical_quantum_state([0.5, 0.4], np.eye(2), [plus, plus])
    with pytest.raises(ValidityError, match="orthonormal"):
        states.classical_quantum_state([0.5, 0.5], [[1, 0], [1, 1]], [plus, plus])


@given(seeds, dims_2_3)
def test_cq_blocks_diagonal_in_classical_basis(seed, dims):
    from qcorr.measures import block_decompose

    rng = np.random.default_rng(seed)
    U = states.random_unitary(dims[0], rng)
    p = rng.dirichlet(np.ones(dims[0]))
    rhoBs = [states.random_density_matrix(dims[1], seed=rng) for _ in range(dims[0])]
    s = states.classical_quantum_state(p, U.T, rhoBs)
    basisB = states.random_unitary(dims[1], rng)
    for block in block_decompose(s, basisB).blocks.reshape(-1, dims[0], dims[0]):
        inner = U.conj().T @ block @ U
        np.testing.assert_allclose(inner - np.diag(np.diag(inner)), 0, atol=1e-10)


@given(seeds, dims_2_3)
def test_random_constructors_are_valid(seed, dims):
    for s in (states.random_pure_state(*dims, seed=seed),
              states.random_mixed_state(*dims, seed=seed),
              states.random_classical_quantum_state(*dims, seed=seed)):
        states.validate_state(s.rho, *dims)
    U = states.random_unitary(dims[0], seed)
    assert np.max(np.abs(U.conj().T @ U - np.eye(dims[0]))) <= 1e-12


def test_random_mixed_state_properties():
    s = states.random_mixed_state(2, 2, 4, seed=3)
    assert np.trace(s.rho).real == pytest.approx(1, abs=1e-12)
    assert linalg.eig_hermitian(s.rho)[0] >= -1e-12
    low = states.random_mixed_state(3, 2, rank=2, seed=3)
    assert np.sum(linalg.eig_hermitian(low.rho) > 1e-12) == 2
    with pytest.raises(DimensionError):
        states.random_mixed_state(2, 2, rank=5)
    with pytest.raises(DimensionError):
        states.random_pure_state(1, 2)


def test_seed_determinism():
    a = states.random_mixed_state(2, 3, seed=42).rho
    b = states.random_mixed_state(2, 3, seed=42).rho
    assert a.tobytes() == b.tobytes()
    assert states.random_bell_diagonal(42) == states.random_bell_diagonal(42)
    s1, s2 = states.substream(5, 11), states.substream(5, 11)
    assert s1.random() == s2.random()
    assert states.substream(5, 11).random() != states.substream(5, 12).random()


def test_random_unitary_is_haar_on_average():
    # E|U_00|^2 = 1/d for Haar-distributed U.
    rng = np.random.default_rng(0)
    vals = [abs(states.random_unitary(3, rng)[0, 0]) ** 2 for _ in range(4000)]
    assert np.mean(vals) == pytest.approx(1 / 3, abs=0.02)


@given(seeds, dims_2_3)
def test_state_json_roundtrip_bit_exact(seed, dims):
    s = states.random_mixed_state(*dims, seed=seed)
    text = json.dumps(states.state_to_dict(s))
    back = states.state_from_dict(json.loads(text))
    assert back.dims == s.dims
    assert back.rho.tobytes() == s.rho.tobytes()


def test_state_from_dict_errors():
    with pytest.raises(ValidityError):
        states.state_from_dict({"dA": 2})
    with pytest.raises(DimensionError):
        states.state_from_dict({"dA": 2, "dB": 2, "matrix": [[0.25, 0]] * 3})
