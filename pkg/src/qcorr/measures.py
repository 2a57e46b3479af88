"""Non-commutativity measures of one-sided (A) quantum correlations.

``guo_D`` sums the Hilbert-Schmidt norms of commutators between all pairs of
blocks ``A_ij = <i_B| rho |j_B>``; ``minimize_d`` minimizes it over the choice
of orthonormal basis on B.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy.linalg import expm
from scipy.optimize import minimize

from . import linalg
from .errors import DimensionError, ValidityError
from .states import BellDiagonalCoeffs, BipartiteState, make_rng, random_unitary


@dataclass(frozen=True, eq=False)
class BlockDecomposition:
    blocks: np.ndarray  # shape (dB, dB, dA, dA); blocks[i, j] = A_ij
    basisU: np.ndarray

    def reconstruct(self) -> np.ndarray:
        dB, _, dA, _ = self.blocks.shape
        rho = np.zeros((dA * dB, dA * dB), dtype=complex)
        for i in range(dB):
            for j in range(dB):
                ket_i, ket_j = self.basisU[:, i], self.basisU[:, j]
                rho += np.kron(self.blocks[i, j], np.outer(ket_i, ket_j.conj()))
        return rho


@dataclass(frozen=True, eq=False)
class MeasureResult:
    value: float
    basisU: np.ndarray
    pair_count: int


@dataclass
class MinimizerConfig:
    grid: int = 24
    fatol: float = 1e-8
    max_evals: int = 500
    starts: int = 8
    restarts_per_start: int = 8
    restarts: int = 32
    step0: float = 0.5
    step_min: float = 1e-6
    patience: int = 12
    max_iters: int = 2000
    zero_tol: float = 1e-14
    seed: int = 0


@dataclass
class MinimizationReport:
    d_value: float
    optimal_basisU: np.ndarray
    evaluations: int
    converged: bool
    history: list = field(default_factory=list)


def pair_count(dB: int) -> int:
    n = dB * dB
    return n * (n - 1) // 2


def _pairs(n: int) -> tuple[np.ndarray, np.ndarray]:
    first, second = zip(*combinations(range(n), 2))
    return np.array(first), np.array(second)


def _check_basis(basisU, dB: int) -> np.ndarray:
    if basisU is None:
        return np.eye(dB, dtype=complex)
    U = linalg.as_matrix(basisU)
    if U.shape != (dB, dB):
        raise DimensionError(f"basis unitary must be {dB}x{dB}, got {U.shape}")
    if not linalg.is_unitary(U):
        raise ValidityError("basis matrix is not unitary")
    return U


def _state_tensor(state: BipartiteState) -> np.ndarray:
    dA, dB = state.dims
    return np.asarray(state.rho).reshape(dA, dB, dA, dB)


def blocks_for_bases(R: np.ndarray, Us: np.ndarray) -> np.ndarray:
    """Blocks for a stack of B-bases.

    ``R`` is rho reshaped to (dA, dB, dA, dB); ``Us`` has shape (N, dB, dB).
    Returns shape (N, dB*dB, dA, dA), flattened over (i, j) in row-major order.
    """
    dA, dB = R.shape[0], R.shape[1]
    # Treat rho as a dB x dB matrix of dA x dA entries and conjugate by each U.
    Rk = R.transpose(0, 2, 1, 3).reshape(dA * dA, dB, dB)
    out = Us.conj().swapaxes(-1, -2)[:, None] @ Rk[None] @ Us[:, None]  # (N, dA*dA, dB, dB)
    N = out.shape[0]
    return out.reshape(N, dA, dA, dB * dB).transpose(0, 3, 1, 2)


def D_from_blocks(blocks: np.ndarray, fast: bool = True) -> np.ndarray:
    """Sum of pairwise commutator HS norms over the block axis (second to last three).

    ``blocks`` has shape (..., n, dA, dA). The Pauli-coefficient route is used
    when ``fast`` and dA == 2.
    """
    n, dA = blocks.shape[-3], blocks.shape[-1]
    if n < 2:
        return np.zeros(blocks.shape[:-3])
    first, second = _pairs(n)
    if fast and dA == 2:
        a, b = blocks[..., 0, 0], blocks[..., 0, 1]
        c, d = blocks[..., 1, 0], blocks[..., 1, 1]
        coeffs = np.stack([(a + d) / 2, (b + c) / 2, 1j * (b - c) / 2, (a - d) / 2], axis=-1)
        norms = linalg.commutator_norm_pauli(coeffs[..., first, :], coeffs[..., second, :])
        return np.sum(norms, axis=-1)
    X, Y = blocks[..., first, :, :], blocks[..., second, :, :]
    comm = X @ Y - Y @ X
    norms = np.sqrt(np.sum(comm.real**2 + comm.imag**2, axis=(-2, -1)))
    return np.sum(norms, axis=-1)


def block_decompose(state: BipartiteState, basisU=None) -> BlockDecomposition:
    dA, dB = state.dims
    U = _check_basis(basisU, dB)
    blocks = blocks_for_bases(_state_tensor(state), U[None])[0].reshape(dB, dB, dA, dA)
    return BlockDecomposition(blocks, U)


def guo_D(state: BipartiteState, basisU=None, fast: bool = True) -> MeasureResult:
    dA, dB = state.dims
    U = _check_basis(basisU, dB)
    blocks = blocks_for_bases(_state_tensor(state), U[None])
    return MeasureResult(float(D_from_blocks(blocks, fast)[0]), U, pair_count(dB))


def D_value(state: BipartiteState, basisU=None, fast: bool = True) -> float:
    return guo_D(state, basisU, fast).value


# Pauli matrix elements <i|sigma_k|j> in the computational basis, flattened over (i, j).
_SIG_ELEMS = linalg.PAULIS[1:].reshape(3, 4)


def _bell_alphas() -> np.ndarray:
    first, second = _pairs(4)
    s = _SIG_ELEMS
    out = []
    for m, n in ((0, 1), (2, 0), (1, 2)):
        out.append(s[m, first] * s[n, second] - s[n, first] * s[m, second])
    return np.abs(np.array(out)) ** 2  # shape (3, 6): |alpha^(12)|^2, |alpha^(31)|^2, |alpha^(23)|^2


_BELL_ALPHA2 = _bell_alphas()


def bell_diagonal_D(c: BellDiagonalCoeffs) -> float:
    """Closed-form D_A of a Bell-diagonal state in the computational B-basis."""
    if not c.is_valid():
        raise ValidityError(f"Bell-diagonal coefficients {c} give negative eigenvalue {c.eigenvalues().min():.6g}")
    c1, c2, c3 = c.as_array()
    weights = np.array([(c1 * c2) ** 2, (c1 * c3) ** 2, (c2 * c3) ** 2])
    return float(np.sum(np.sqrt(weights @ _BELL_ALPHA2 / 2**5)))


# -- basis parametrization and minimization -----------------------------------

def su2_from_angles(theta, phi, psi) -> np.ndarray:
    """``[[cos t e^{i phi}, sin t e^{i psi}], [-sin t e^{-i psi}, cos t e^{-i phi}]]``, broadcast over inputs."""
    theta, phi, psi = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (theta, phi, psi)))
    ct, st = np.cos(theta), np.sin(theta)
    U = np.empty(theta.shape + (2, 2), dtype=complex)
    U[..., 0, 0] = ct * np.exp(1j * phi)
    U[..., 0, 1] = st * np.exp(1j * psi)
    U[..., 1, 0] = -st * np.exp(-1j * psi)
    U[..., 1, 1] = ct * np.exp(-1j * phi)
    return U


def fix_phase(U) -> np.ndarray:
    """Rephase each column so its first non-negligible entry is real and non-negative."""
    U = np.array(U, dtype=complex)
    for k in range(U.shape[1]):
        col = U[:, k]
        idx = int(np.argmax(np.abs(col) > 1e-12))
        z = col[idx]
        if abs(z) > 0:
            U[:, k] = col * (abs(z) / z)
    return U


def angle_grid(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Flattened (theta, phi, psi) grid over [0, pi/2] x [0, 2pi)^2 with n points per axis."""
    thetas = np.linspace(0.0, np.pi / 2, n)
    phis = np.arange(n) * (2 * np.pi / n)
    T, P, S = np.meshgrid(thetas, phis, phis, indexing="ij")
    return T.ravel(), P.ravel(), S.ravel()


def D_on_angles(state: BipartiteState, theta, phi, psi, fast: bool = True, chunk: int = 32768) -> np.ndarray:
    """D_A for every (theta, phi, psi) triple (d_B = 2 only)."""
    if state.dB != 2:
        raise DimensionError("angle parametrization needs d_B = 2")
    R = _state_tensor(state)
    theta, phi, psi = (np.atleast_1d(np.asarray(x, dtype=float)) for x in (theta, phi, psi))
    out = np.empty(theta.shape[0])
    for start in range(0, theta.shape[0], chunk):
        sl = slice(start, start + chunk)
        Us = su2_from_angles(theta[sl], phi[sl], psi[sl])
        out[sl] = D_from_blocks(blocks_for_bases(R, Us), fast)
    return out


def minimize_d(state: BipartiteState, config: MinimizerConfig | None = None) -> MinimizationReport:
    config = config or MinimizerConfig()
    if state.dB == 2:
        return _minimize_qubit_b(state, config)
    return _minimize_stochastic(state, config)


def grid_local_minima(values: np.ndarray, n: int) -> np.ndarray:
    """Linear indices (into the n^3 grid) of distinct local minima, best first.

    Grid points sharing theta and phi + psi describe the same basis up to
    per-vector phases, so minima are searched on the psi = 0 slice, where phi
    plays the role of phi + psi and wraps around.
    """
    V = values.reshape(n, n, n)[:, :, 0]
    mask = np.ones(V.shape, dtype=bool)
    for axis in range(2):
        for shift in (1, -1):
            nb = np.roll(V, shift, axis=axis)
            if axis == 0:
                nb[0 if shift == 1 else -1] = np.inf
            mask &= V <= nb
    ti, pi = np.nonzero(mask)
    order = np.argsort(V[ti, pi], kind="stable")
    return (ti[order] * n + pi[order]) * n


def _minimize_qubit_b(state: BipartiteState, config: MinimizerConfig) -> MinimizationReport:
    f0 = float(D_on_angles(state, 0.0, 0.0, 0.0)[0])
    if f0 <= config.zero_tol:
        # The computational basis already makes every block commute.
        return MinimizationReport(f0, np.eye(2, dtype=complex), 1, True, [((0.0, 0.0, 0.0), f0)])
    n = config.grid
    T, P, S = angle_grid(n)
    values = D_on_angles(state, T, P, S)
    best = int(np.argmin(values))  # first occurrence: lowest linear index wins ties
    x_best = np.array([T[best], P[best] + S[best]])
    f_best = float(values[best])
    history = [((float(T[best]), float(P[best]), float(S[best])), f_best)]
    evaluations = len(values)
    if f_best <= config.zero_tol:
        return MinimizationReport(f_best, fix_phase(su2_from_angles(T[best], P[best], S[best])), evaluations, True, history)

    # D depends on the basis only through theta and phi + psi (the other
    # combination is a per-vector phase), so refinement runs in those two.
    def objective(x):
        v = float(D_on_angles(state, x[0], x[1], 0.0)[0])
        history.append(((float(x[0]), float(x[1]), 0.0), v))
        return v

    step0 = np.array([np.pi / 2, 2 * np.pi]) / n
    converged = True
    for idx in grid_local_minima(values, n)[: config.starts]:
        x = np.array([T[idx], P[idx] + S[idx]])
        fx = float(values[idx])
        scale = 1.0
        for _ in range(config.restarts_per_start):
            simplex = np.vstack([x, x + np.diag(step0 * scale)])
            res = minimize(
                objective,
                x,
                method="Nelder-Mead",
                options={"initial_simplex": simplex, "fatol": config.fatol, "xatol": np.inf, "maxfev": config.max_evals},
            )
            evaluations += int(res.nfev)
            converged &= bool(res.success)
            if res.fun < fx - config.fatol:
                x, fx = res.x, float(res.fun)
                scale *= 0.5
            else:
                if res.fun < fx:
                    x, fx = res.x, float(res.fun)
                break
        if fx < f_best:
            x_best, f_best = x, fx
    U = fix_phase(su2_from_angles(x_best[0], x_best[1], 0.0))
    return MinimizationReport(f_best, U, evaluations, converged, history)


def _random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    H = (G + G.conj().T) / 2
    return H / np.linalg.norm(H)


def _minimize_stochastic(state: BipartiteState, config: MinimizerConfig) -> MinimizationReport:
    """Multi-start descent over unitaries ``U expm(i eps H)`` with shrinking ``eps``."""
    dB = state.dB
    R = _state_tensor(state)
    rng = make_rng(config.seed)

    def value(U):
        return float(D_from_blocks(blocks_for_bases(R, U[None]))[0])

    best_U = np.eye(dB, dtype=complex)
    best_f = value(best_U)
    history = [("start 0", best_f)]
    evaluations = 1
    converged = True
    if best_f <= config.zero_tol:
        return MinimizationReport(best_f, best_U, evaluations, True, history)

    for start in range(config.restarts):
        U = best_U.copy() if start == 0 else random_unitary(dB, rng)
        f = value(U)
        evaluations += 1
        eps, fails = config.step0, 0
        for _ in range(config.max_iters):
            if eps < config.step_min:
                break
            cand = U @ expm(1j * eps * _random_hermitian(dB, rng))
            fc = value(cand)
            evaluations += 1
            if fc < f:
                U, f, fails = cand, fc, 0
            else:
                fails += 1
                if fails >= config.patience:
                    eps, fails = eps / 2, 0
        else:
            converged = False
        history.append((f"start {start}", f))
        if f < best_f:
            best_U, best_f = U, f
    return MinimizationReport(best_f, fix_phase(best_U), evaluations, converged, history)
