import numpy as np
import pytest
from hypothesis import given, strategies as st

from qcorr import linalg
from qcorr.errors import DimensionError, ValidityError
from qcorr.linalg import I2, SX, SY, SZ
from qcorr.states import random_density_matrix, random_unitary

from conftest import complex_matrices, pauli_vectors, seeds


@pytest.mark.parametrize("M, expected", [
    (I2, np.sqrt(2)),
    (SX, np.sqrt(2)),
    (np.zeros((3, 3)), 0.0),
])
def test_hs_norm_examples(M, expected):
    assert linalg.hs_norm(M) == pytest.approx(expected, abs=1e-15)


def test_hs_norm_rejects_non_square():
    with pytest.raises(DimensionError):
        linalg.hs_norm(np.ones((2, 3)))


def test_commutator_examples():
    np.testing.assert_allclose(linalg.commutator(SX, SY), 2j * SZ, atol=1e-15)
    A = np.arange(9).reshape(3, 3) + 1j
    np.testing.assert_array_equal(linalg.commutator(A, A), np.zeros((3, 3)))
    np.testing.assert_array_equal(linalg.commutator(np.eye(3), A), np.zeros((3, 3)))
    with pytest.raises(DimensionError):
        linalg.commutator(I2, np.eye(3))


def test_kron_dagger_transpose():
    np.testing.assert_array_equal(linalg.kron(I2, I2), np.eye(4))
    np.testing.assert_array_equal(linalg.dagger(SY), SY)
    np.testing.assert_array_equal(linalg.transpose(SY), -SY)


def test_pauli_decompose_examples():
    np.testing.assert_allclose(linalg.pauli_decompose(I2), [1, 0, 0, 0])
    np.testing.assert_allclose(linalg.pauli_decompose(SZ), [0, 0, 0, 1])
    ket01 = np.array([[0, 1], [0, 0]])
    # Tr(sigma_k |0><1|)/2 = <1|sigma_k|0>/2: X -> 1/2, Y -> i/2, Z -> 0.
    oracle = [np.trace(P @ ket01) / 2 for P in linalg.PAULIS]
    np.testing.assert_allclose(oracle, [0, 0.5, 0.5j, 0])
    np.testing.assert_allclose(linalg.pauli_decompose(ket01), oracle, atol=1e-16)
    with pytest.raises(DimensionError):
        linalg.pauli_decompose(np.eye(3))


@given(complex_matrices(2))
def test_pauli_roundtrip(M):
    np.testing.assert_allclose(linalg.pauli_reconstruct(linalg.pauli_decompose(M)), M, atol=1e-14 * (1 + np.abs(M).max()))


@given(pauli_vectors)
def test_decompose_reconstruct_identity_on_coefficients(d):
    np.testing.assert_allclose(linalg.pauli_decompose(linalg.pauli_reconstruct(d)), d, atol=1e-14 * (1 + np.abs(d).max()))


def test_commutator_norm_pauli_examples():
    d = np.array([0.3, 1 - 2j, 0.5j, 2])
    assert linalg.commutator_norm_pauli(d, d) == 0.0
    assert linalg.commutator_norm_pauli([0, 1, 0, 0], [0, 0, 1, 0]) == pytest.approx(2 * np.sqrt(2), abs=1e-15)


def test_commutator_norm_pauli_matches_direct_on_many_pairs():
    rng = np.random.default_rng(7)
    d = rng.normal(size=(10_000, 4)) + 1j * rng.normal(size=(10_000, 4))
    e = rng.normal(size=(10_000, 4)) + 1j * rng.normal(size=(10_000, 4))
    fast = linalg.commutator_norm_pauli(d, e)
    direct = np.array([
        linalg.hs_norm(linalg.commutator(linalg.pauli_reconstruct(x), linalg.pauli_reconstruct(y)))
        for x, y in zip(d, e)
    ])
    assert np.max(np.abs(fast - direct)) <= 1e-12


@given(complex_matrices(3))
def test_hs_norm_nonnegative_zero_iff_zero(M):
    n = linalg.hs_norm(M)
    assert n >= 0
    assert (n == 0) == (not np.any(M))


@given(complex_matrices(3))
def test_hs_norm_transpose_invariant(M):
    assert linalg.hs_norm(linalg.transpose(M)) == linalg.hs_norm(M)


@given(complex_matrices(3), seeds)
def test_hs_norm_unitary_invariant(M, seed):
    U = random_unitary(3, seed)
    assert linalg.hs_norm(U @ M @ U.conj().T) == pytest.approx(linalg.hs_norm(M), abs=1e-12 * (1 + linalg.hs_norm(M)))


@pytest.mark.parametrize("M, expected", [
    (SZ, [-1, 1]),
    (np.eye(3), [1, 1, 1]),
    (np.diag([0.1, 0.9]), [0.1, 0.9]),
])
def test_eig_hermitian_examples(M, expected):
    np.testing.assert_allclose(linalg.eig_hermitian(M), expected, atol=1e-14)


def test_eig_hermitian_rejects_non_hermitian():
    with pytest.raises(ValidityError, match="not Hermitian"):
        linalg.eig_hermitian(np.array([[0, 1], [0, 0]]))


@given(seeds)
def test_eig_hermitian_sum_is_trace(seed):
    H = random_density_matrix(5, seed=seed) * 3 - np.eye(5)
    assert np.sum(linalg.eig_hermitian(H)) == pytest.approx(np.trace(H).real, abs=1e-10)


def test_partial_trace_examples():
    rhoA = np.array([[0.7, 0.1j], [-0.1j, 0.3]])
    rhoB = np.diag([0.25, 0.75])
    np.testing.assert_allclose(linalg.partial_trace(np.kron(rhoA, rhoB), (2, 2), "A"), rhoA, atol=1e-15)
    np.testing.assert_allclose(linalg.partial_trace(np.kron(rhoA, rhoB), (2, 2), "B"), rhoB, atol=1e-15)
    phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    np.testing.assert_allclose(linalg.partial_trace(np.outer(phi, phi), (2, 2), "A"), I2 / 2, atol=1e-15)
    with pytest.raises(DimensionError):
        linalg.partial_trace(np.eye(6), (2, 2))


@given(seeds, st.sampled_from([(2, 2), (2, 3), (3, 2)]))
def test_partial_trace_matches_index_sum(seed, dims):
    dA, dB = dims
    rho = random_density_matrix(dA * dB, seed=seed)
    oracle = np.zeros((dA, dA), dtype=complex)
    for i in range(dA):
        for j in range(dA):
            for b in range(dB):
                oracle[i, j] += rho[i * dB + b, j * dB + b]
    red = linalg.partial_trace(rho, dims, "A")
    np.testing.assert_allclose(red, oracle, atol=1e-15)
    assert np.trace(red) == pytest.approx(1.0, abs=1e-12)
    assert linalg.eig_hermitian(red)[0] >= -1e-12
