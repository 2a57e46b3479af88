"""Dense complex matrix primitives.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; a Pauli vector is a
length-4 complex array holding the coefficients of ``(I, X, Y, Z)``.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DimensionError, ValidityError

HERMITIAN_TOL = 1e-10

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = np.stack([I2, SX, SY, SZ])


def as_matrix(M) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.size == 0:
        raise DimensionError(f"expected a non-empty 2-d matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValidityError("matrix has non-finite entries")
    return M


def _square(M, name: str = "matrix") -> np.ndarray:
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {M.shape}")
    return M


def hs_norm(M) -> float:
    """Hilbert-Schmidt norm ``sqrt(Tr(M^dag M))``."""
    M = _square(M)
    mags = np.abs(M).ravel()
    scale = float(mags.max())
    if scale == 0.0:
        return 0.0
    # fsum is correctly rounded, so the result does not depend on entry order
    # (exact transpose invariance); scaling keeps tiny entries from underflowing.
    return scale * math.sqrt(math.fsum((mags / scale) ** 2))


def commutator(A, B) -> np.ndarray:
    A, B = _square(A, "A"), _square(B, "B")
    if A.shape != B.shape:
        raise DimensionError(f"commutator of mismatched shapes {A.shape} and {B.shape}")
    return A @ B - B @ A


def kron(A, B) -> np.ndarray:
    return np.kron(as_matrix(A), as_matrix(B))


def dagger(M) -> np.ndarray:
    return as_matrix(M).conj().T


def transpose(M) -> np.ndarray:
    return as_matrix(M).T.copy()


def pauli_decompose(M) -> np.ndarray:
    """Coefficients ``d`` with ``M = d0 I + d1 X + d2 Y + d3 Z``."""
    M = as_matrix(M)
    if M.shape != (2, 2):
        raise DimensionError(f"pauli_decompose needs a 2x2 matrix, got {M.shape}")
    # Tr(P M) / 2 for each Pauli P, written out.
    a, b, c, d = M[0, 0], M[0, 1], M[1, 0], M[1, 1]
    return np.array([(a + d) / 2, (b + c) / 2, 1j * (b - c) / 2, (a - d) / 2])


def pauli_reconstruct(d) -> np.ndarray:
    d = np.asarray(d, dtype=complex)
    if d.shape != (4,):
        raise DimensionError(f"Pauli vector must have 4 entries, got {d.shape}")
    return np.tensordot(d, PAULIS, axes=1)


def pauli_betas(d, e) -> np.ndarray:
    """``beta^(mn) = 2i (d_m e_n - d_n e_m)`` for (mn) = (12), (31), (23).

    Works on stacked vectors: the last axis holds the 4 coefficients.
    """
    d = np.asarray(d, dtype=complex)
    e = np.asarray(e, dtype=complex)
    b12 = d[..., 1] * e[..., 2] - d[..., 2] * e[..., 1]
    b31 = d[..., 3] * e[..., 1] - d[..., 1] * e[..., 3]
    b23 = d[..., 2] * e[..., 3] - d[..., 3] * e[..., 2]
    return 2j * np.stack([b12, b31, b23], axis=-1)


def commutator_norm_pauli(d, e):
    """HS norm of ``[d.(I, sigma), e.(I, sigma)]`` from the Pauli coefficients alone.

    Accepts single vectors or broadcastable stacks; returns a float or array.
    """
    beta = pauli_betas(d, e)
    out = np.sqrt(2.0 * np.sum(beta.real**2 + beta.imag**2, axis=-1))
    return float(out) if out.ndim == 0 else out


def is_hermitian(M, tol: float = HERMITIAN_TOL) -> bool:
    M = _square(M)
    return bool(np.max(np.abs(M - M.conj().T)) <= tol)


def eig_hermitian(M, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix.

    The input is symmetrized as (M + M^dag)/2 before diagonalization.
    """
    M = _square(M)
    gap = float(np.max(np.abs(M - M.conj().T)))
    if gap > tol:
        raise ValidityError(f"matrix is not Hermitian (max |M - M^dag| = {gap:.3e})")
    return np.linalg.eigvalsh((M + M.conj().T) / 2)


def is_unitary(U, tol: float = 1e-10) -> bool:
    U = as_matrix(U)
    if U.shape[0] != U.shape[1]:
        return False
    return bool(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))) <= tol)


def partial_trace(M, dims: tuple[int, int], keep: str = "A") -> np.ndarray:
    """Reduce a bipartite operator on A (x) B to the kept subsystem."""
    M = _square(M)
    dA, dB = dims
    if dA < 1 or dB < 1 or M.shape[0] != dA * dB:
        raise DimensionError(f"matrix of size {M.shape[0]} does not factor as {dA}x{dB}")
    R = M.reshape(dA, dB, dA, dB)
    if keep == "A":
        return np.einsum("ibjb->ij", R)
    if keep == "B":
        return np.einsum("aiaj->ij", R)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")
