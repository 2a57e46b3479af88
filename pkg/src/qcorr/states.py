"""Bipartite density matrices: validation, special families and random ensembles."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import linalg
from .errors import DimensionError, ValidityError

TRACE_TOL = 1e-10
PSD_TOL = 1e-10
BELL_PSD_TOL = 1e-12

SeedLike = Union[int, np.random.Generator, None]


def make_rng(seed: SeedLike) -> np.random.Generator:
    """PCG64 generator; an existing Generator is passed through untouched."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def substream(seed: int, index: int) -> np.random.Generator:
    """Independent stream for trial ``index`` of a campaign seeded with ``seed``.

    SeedSequence hashes the (seed, index) pair, so streams do not overlap and
    do not depend on the order trials are executed in.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, index])))


@dataclass(frozen=True, eq=False)
class BipartiteState:
    rho: np.ndarray
    dA: int
    dB: int

    @property
    def dims(self) -> tuple[int, int]:
        return self.dA, self.dB

    def reduced(self, keep: str) -> np.ndarray:
        return linalg.partial_trace(self.rho, self.dims, keep)


@dataclass(frozen=True)
class BellDiagonalCoeffs:
    c1: float
    c2: float
    c3: float

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3], dtype=float)

    def eigenvalues(self) -> np.ndarray:
        c1, c2, c3 = self.c1, self.c2, self.c3
        return np.array([
            1 - c1 - c2 - c3,
            1 - c1 + c2 + c3,
            1 + c1 - c2 + c3,
            1 + c1 + c2 - c3,
        ]) / 4

    def is_valid(self, tol: float = BELL_PSD_TOL) -> bool:
        return bool(np.min(self.eigenvalues()) >= -tol)


def validate_state(rho, dA: int, dB: int) -> BipartiteState:
    rho = linalg.as_matrix(rho)
    if dA < 1 or dB < 1 or rho.shape != (dA * dB, dA * dB):
        raise DimensionError(f"state of shape {rho.shape} does not match dims ({dA}, {dB})")
    gap = float(np.max(np.abs(rho - rho.conj().T)))
    if gap > linalg.HERMITIAN_TOL:
        raise ValidityError(f"state is not Hermitian (max |rho - rho^dag| = {gap:.3e})")
    tr = np.trace(rho)
    if abs(tr - 1) > TRACE_TOL:
        raise ValidityError(f"state trace is {tr.real:.12g}{tr.imag:+.3g}j, expected 1")
    lo = float(linalg.eig_hermitian(rho)[0])
    if lo < -PSD_TOL:
        raise ValidityError(f"state has negative eigenvalue {lo:.3e}")
    rho = rho.copy()
    rho.setflags(write=False)
    return BipartiteState(rho, int(dA), int(dB))


def product_state(rhoA, rhoB) -> BipartiteState:
    rhoA, rhoB = linalg.as_matrix(rhoA), linalg.as_matrix(rhoB)
    return validate_state(np.kron(rhoA, rhoB), rhoA.shape[0], rhoB.shape[0])


def pure_state(psi, dA: int, dB: int) -> BipartiteState:
    psi = np.asarray(psi, dtype=complex).ravel()
    psi = psi / np.linalg.norm(psi)
    return validate_state(np.outer(psi, psi.conj()), dA, dB)


def phi_plus() -> BipartiteState:
    return pure_state([1, 0, 0, 1], 2, 2)


def bell_diagonal_state(c: BellDiagonalCoeffs) -> BipartiteState:
    lo = float(np.min(c.eigenvalues()))
    if lo < -BELL_PSD_TOL:
        raise ValidityError(f"Bell-diagonal coefficients {c} give negative eigenvalue {lo:.6g}")
    rho = np.eye(4, dtype=complex)
    for ck, s in zip(c.as_array(), linalg.PAULIS[1:]):
        rho = rho + ck * np.kron(s, s)
    return validate_state(rho / 4, 2, 2)


def classical_quantum_state(p: Sequence[float], basisA: Sequence, rhoBs: Sequence) -> BipartiteState:
    """``sum_i p_i |i_A><i_A| (x) rhoB_i`` for an orthonormal set ``{|i_A>}``."""
    p = np.asarray(p, dtype=float)
    vecs = np.array([np.asarray(v, dtype=complex).ravel() for v in basisA])
    if len(p) != len(vecs) or len(p) != len(rhoBs) or len(p) == 0:
        raise DimensionError("p, basisA and rhoBs must have the same non-zero length")
    if np.any(p < 0) or abs(p.sum() - 1) > 1e-12:
        raise ValidityError(f"probabilities must be non-negative and sum to 1 (sum = {p.sum():.15g})")
    gram = vecs.conj() @ vecs.T
    err = float(np.max(np.abs(gram - np.eye(len(vecs)))))
    if err > 1e-10:
        raise ValidityError(f"basisA is not orthonormal (max Gram deviation {err:.3e})")
    dA = vecs.shape[1]
    dB = linalg.as_matrix(rhoBs[0]).shape[0]
    rho = np.zeros((dA * dB, dA * dB), dtype=complex)
    for pi, v, rb in zip(p, vecs, rhoBs):
        rb = validate_state(rb, 1, dB).rho
        rho += pi * np.kron(np.outer(v, v.conj()), rb)
    return validate_state(rho, dA, dB)


def random_unitary(d: int, seed: SeedLike = None) -> np.ndarray:
    """Haar unitary via QR of a Ginibre matrix with the R-diagonal phases removed."""
    if d < 1:
        raise DimensionError(f"unitary dimension must be positive, got {d}")
    rng = make_rng(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def random_density_matrix(d: int, rank: int | None = None, seed: SeedLike = None) -> np.ndarray:
    rng = make_rng(seed)
    rank = d if rank is None else rank
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def _check_dims(dA: int, dB: int) -> None:
    if dA < 2 or dB < 2:
        raise DimensionError(f"subsystem dimensions must be >= 2, got ({dA}, {dB})")


def random_pure_state(dA: int, dB: int, seed: SeedLike = None) -> BipartiteState:
    _check_dims(dA, dB)
    rng = make_rng(seed)
    psi = rng.standard_normal(dA * dB) + 1j * rng.standard_normal(dA * dB)
    return pure_state(psi, dA, dB)


def random_mixed_state(dA: int, dB: int, rank: int | None = None, seed: SeedLike = None) -> BipartiteState:
    """Ginibre-induced state ``G G^dag / Tr``; full rank unless ``rank`` is given."""
    _check_dims(dA, dB)
    n = dA * dB
    rank = n if rank is None else rank
    if not 1 <= rank <= n:
        raise DimensionError(f"rank must lie in [1, {n}], got {rank}")
    return validate_state(random_density_matrix(n, rank, seed), dA, dB)


def random_classical_quantum_state(dA: int, dB: int, seed: SeedLike = None) -> BipartiteState:
    """Random member of C_A: Haar basis on A, Dirichlet weights, random states on B."""
    rng = make_rng(seed)
    U = random_unitary(dA, rng)
    p = rng.dirichlet(np.ones(dA))
    rhoBs = [random_density_matrix(dB, seed=rng) for _ in range(dA)]
    return classical_quantum_state(p, U.T, rhoBs)


def _bell_rejection(rng: np.random.Generator, max_tries: int = 10_000) -> tuple[BellDiagonalCoeffs, int]:
    for attempt in range(1, max_tries + 1):
        c = BellDiagonalCoeffs(*rng.uniform(-1.0, 1.0, 3))
        if c.is_valid():
            return c, attempt
    raise RuntimeError("Bell-diagonal rejection sampler exhausted")  # pragma: no cover


def random_bell_diagonal(seed: SeedLike = None) -> BellDiagonalCoeffs:
    """Uniform sample from the tetrahedron of valid coefficients, by rejection from the cube."""
    return _bell_rejection(make_rng(seed))[0]


# -- file format ------------------------------------------------------------

def matrix_to_json(M) -> list[list[float]]:
    M = np.asarray(M, dtype=complex).ravel()
    return [[float(z.real), float(z.imag)] for z in M]


def matrix_from_json(entries, shape: tuple[int, int]) -> np.ndarray:
    arr = np.asarray(entries, dtype=float)
    if arr.shape != (shape[0] * shape[1], 2):
        raise DimensionError(f"expected {shape[0] * shape[1]} [re, im] pairs, got array of shape {arr.shape}")
    return (arr[:, 0] + 1j * arr[:, 1]).reshape(shape)


def state_to_dict(state: BipartiteState) -> dict:
    return {"dA": state.dA, "dB": state.dB, "matrix": matrix_to_json(state.rho)}


def state_from_dict(data: dict) -> BipartiteState:
    try:
        dA, dB = int(data["dA"]), int(data["dB"])
        entries = data["matrix"]
    except (KeyError, TypeError) as exc:
        raise ValidityError(f"malformed state payload: {exc!r}") from exc
    n = dA * dB
    return validate_state(matrix_from_json(entries, (n, n)), dA, dB)
