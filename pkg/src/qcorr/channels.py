"""Local quantum channels: affine qubit maps, isotropic maps, complete decoherence and Kraus lists.

Every channel class exposes ``apply(M)`` for a single operator and ``to_kraus()``;
``apply_local`` acts with a Kraus channel on one side of a bipartite state.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import linalg
from .errors import ConstraintError, DimensionError, NotCompletelyPositiveError, SamplerError, ValidityError
from .states import BipartiteState, SeedLike, make_rng, matrix_from_json, matrix_to_json, random_unitary, validate_state

CP_TOL = 1e-10
MAX_REJECTIONS = 10_000


_AFFINE_CHOI_TERMS = np.array(
    [np.kron(linalg.I2, s) for s in linalg.PAULIS] + [np.kron(s.T, s) for s in linalg.PAULIS[1:]]
)


def _frozen(a) -> np.ndarray:
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class AffineQubitChannel:
    """Qubit map acting on Pauli coefficients as ``m -> [[1, 0], [t, diag(lam)]] m``."""

    t: np.ndarray
    lam: np.ndarray

    @property
    def unital(self) -> bool:
        return bool(np.all(np.abs(self.t) <= 1e-14))

    @property
    def dim(self) -> int:
        return 2

    def transfer_matrix(self) -> np.ndarray:
        T = np.zeros((4, 4))
        T[0, 0] = 1.0
        T[1:, 0] = self.t
        T[1:, 1:] = np.diag(self.lam)
        return T

    def apply(self, M) -> np.ndarray:
        return apply_affine(self, M)

    def to_kraus(self) -> "KrausChannel":
        return channel_to_kraus(self)

    def choi(self) -> np.ndarray:
        """Closed form ``(I (x) (I + t.sigma) + sum_k lam_k sigma_k^T (x) sigma_k) / 2``."""
        coeffs = np.concatenate(([1.0], self.t, self.lam))
        return np.tensordot(coeffs, _AFFINE_CHOI_TERMS, axes=1) / 2

    def compose(self, other: "AffineQubitChannel") -> "AffineQubitChannel":
        """``self`` after ``other``."""
        T = self.transfer_matrix() @ other.transfer_matrix()
        return AffineQubitChannel(_frozen(T[1:, 0]), _frozen(np.diag(T[1:, 1:])))


@dataclass(frozen=True, eq=False)
class IsotropicChannel:
    """``p Gamma[M] + (1 - p) Tr(M) I/d`` with ``Gamma`` unitary or antiunitary."""

    p: float
    kind: str
    U: np.ndarray

    @property
    def dim(self) -> int:
        return self.U.shape[0]

    def apply(self, M) -> np.ndarray:
        return apply_isotropic(self, M)

    def to_kraus(self) -> "KrausChannel":
        return channel_to_kraus(self)


@dataclass(frozen=True, eq=False)
class DecoheringChannel:
    """Dephasing in a fixed orthonormal basis; ``basis`` rows are the basis vectors."""

    basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def apply(self, M) -> np.ndarray:
        return apply_decohering(self, M)

    def to_kraus(self) -> "KrausChannel":
        return channel_to_kraus(self)


@dataclass(frozen=True, eq=False)
class KrausChannel:
    ops: tuple = field()

    @property
    def dim(self) -> int:
        return self.ops[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.ops[0].shape[0]

    def apply(self, M) -> np.ndarray:
        M = linalg.as_matrix(M)
        return sum(K @ M @ K.conj().T for K in self.ops)

    def to_kraus(self) -> "KrausChannel":
        return self

    def choi(self) -> np.ndarray:
        return choi_matrix(self)


Channel = Union[AffineQubitChannel, IsotropicChannel, DecoheringChannel, KrausChannel]


# -- construction ------------------------------------------------------------

def validate_affine(t, lam) -> AffineQubitChannel:
    """Accept iff ``|lam_k| <= 1 - |t_k|`` for every k (qubit positivity condition)."""
    t = np.asarray(t, dtype=float).ravel()
    lam = np.asarray(lam, dtype=float).ravel()
    if t.shape != (3,) or lam.shape != (3,):
        raise DimensionError("affine channel needs 3-vectors t and lambda")
    for k in range(3):
        if abs(lam[k]) > 1 - abs(t[k]) + 1e-14:
            raise ConstraintError(
                f"component {k + 1}: |lambda| = {abs(lam[k]):.6g} exceeds 1 - |t| = {1 - abs(t[k]):.6g}"
            )
    return AffineQubitChannel(_frozen(t), _frozen(lam))


def isotropic_p_range(d: int, kind: str) -> tuple[float, float]:
    if kind == "unitary":
        return -1.0 / (d * d - 1), 1.0
    if kind == "antiunitary":
        return -1.0 / (d - 1), 1.0 / (d + 1)
    raise ValueError(f"kind must be 'unitary' or 'antiunitary', got {kind!r}")


def make_isotropic(p: float, kind: str, U) -> IsotropicChannel:
    U = linalg.as_matrix(U)
    if not linalg.is_unitary(U):
        raise ValidityError("isotropic channel needs a unitary U")
    lo, hi = isotropic_p_range(U.shape[0], kind)
    if not lo - 1e-14 <= p <= hi + 1e-14:
        raise ConstraintError(f"p = {p:.6g} outside the admissible range [{lo:.6g}, {hi:.6g}] for {kind} kind")
    return IsotropicChannel(float(p), kind, _frozen(U))


def make_decohering(basis) -> DecoheringChannel:
    basis = np.array([np.asarray(v, dtype=complex).ravel() for v in basis])
    if basis.ndim != 2 or basis.shape[0] != basis.shape[1]:
        raise DimensionError(f"decohering basis must hold d vectors of dimension d, got {basis.shape}")
    err = float(np.max(np.abs(basis.conj() @ basis.T - np.eye(len(basis)))))
    if err > 1e-10:
        raise ValidityError(f"decohering basis is not orthonormal (max Gram deviation {err:.3e})")
    return DecoheringChannel(_frozen(basis))


def make_kraus(ops, tol: float = CP_TOL) -> KrausChannel:
    ops = tuple(_frozen(linalg.as_matrix(K)) for K in ops)
    if not ops:
        raise DimensionError("Kraus list is empty")
    if any(K.shape != ops[0].shape for K in ops):
        raise DimensionError("Kraus operators have inconsistent shapes")
    s = sum(K.conj().T @ K for K in ops)
    err = float(np.max(np.abs(s - np.eye(s.shape[0]))))
    if err > tol:
        raise ValidityError(f"Kraus operators are not trace preserving (max |sum K^dag K - I| = {err:.3e})")
    return KrausChannel(ops)


# -- application -------------------------------------------------------------

def apply_affine(ch: AffineQubitChannel, M) -> np.ndarray:
    m = linalg.pauli_decompose(M)
    return linalg.pauli_reconstruct(ch.transfer_matrix() @ m)


def apply_isotropic(ch: IsotropicChannel, M) -> np.ndarray:
    M = linalg.as_matrix(M)
    d = ch.dim
    if M.shape != (d, d):
        raise DimensionError(f"isotropic channel of dimension {d} applied to shape {M.shape}")
    inner = M.T if ch.kind == "antiunitary" else M
    return ch.p * (ch.U @ inner @ ch.U.conj().T) + (1 - ch.p) * np.trace(M) * np.eye(d) / d


def apply_decohering(ch: DecoheringChannel, M) -> np.ndarray:
    M = linalg.as_matrix(M)
    if M.shape != (ch.dim, ch.dim):
        raise DimensionError(f"decohering channel of dimension {ch.dim} applied to shape {M.shape}")
    V = ch.basis.T  # columns are basis vectors
    diag = np.einsum("ai,ab,bi->i", V.conj(), M, V)
    return (V * diag) @ V.conj().T


def choi_matrix(ch: Channel) -> np.ndarray:
    """``sum_ij |i><j| (x) ch(|i><j|)``, input factor first."""
    d = ch.dim
    blocks = []
    for i in range(d):
        row = []
        for j in range(d):
            E = np.zeros((d, d), dtype=complex)
            E[i, j] = 1.0
            row.append(ch.apply(E))
        blocks.append(row)
    return np.block(blocks)


def _choi(ch: Channel) -> np.ndarray:
    return ch.choi() if isinstance(ch, AffineQubitChannel) else choi_matrix(ch)


def channel_to_kraus(ch: Channel, tol: float = CP_TOL) -> KrausChannel:
    if isinstance(ch, KrausChannel):
        return ch
    d = ch.dim
    J = _choi(ch)
    J = (J + J.conj().T) / 2
    w, v = np.linalg.eigh(J)
    if w[0] < -tol:
        raise NotCompletelyPositiveError(
            f"channel is positive but not completely positive: Choi eigenvalue {w[0]:.3e}"
        )
    ops = []
    for wk, vk in zip(w, v.T):
        if wk > tol:
            # Choi index is (in, out); Kraus is out x in.
            ops.append(np.sqrt(wk) * vk.reshape(d, -1).T)
    return make_kraus(ops, tol=1e-9)


def is_completely_positive(ch: Channel, tol: float = CP_TOL) -> bool:
    J = _choi(ch)
    return bool(np.linalg.eigvalsh((J + J.conj().T) / 2)[0] >= -tol)


def apply_local(ch: Channel, state: BipartiteState, side: str) -> BipartiteState:
    """``(K (x) I) rho (K (x) I)^dag`` summed over Kraus ops (or ``I (x) K`` on side B)."""
    kraus = channel_to_kraus(ch)
    dA, dB = state.dims
    if side == "A":
        if kraus.dim != dA:
            raise DimensionError(f"channel dimension {kraus.dim} does not match d_A = {dA}")
        lifted = [np.kron(K, np.eye(dB)) for K in kraus.ops]
        new_dims = (kraus.dim_out, dB)
    elif side == "B":
        if kraus.dim != dB:
            raise DimensionError(f"channel dimension {kraus.dim} does not match d_B = {dB}")
        lifted = [np.kron(np.eye(dA), K) for K in kraus.ops]
        new_dims = (dA, kraus.dim_out)
    else:
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    rho = sum(L @ state.rho @ L.conj().T for L in lifted)
    return validate_state(rho, *new_dims)


# -- random channels ---------------------------------------------------------

def random_unital_qubit_channel(seed: SeedLike = None) -> AffineQubitChannel:
    rng = make_rng(seed)
    for _ in range(MAX_REJECTIONS):
        ch = validate_affine(np.zeros(3), rng.uniform(-1.0, 1.0, 3))
        if is_completely_positive(ch):
            return ch
    raise SamplerError("no completely positive unital channel after 10^4 draws")


def random_affine_qubit_channel(seed: SeedLike = None) -> AffineQubitChannel:
    rng = make_rng(seed)
    for _ in range(MAX_REJECTIONS):
        t = rng.uniform(-1.0, 1.0, 3)
        r = 1 - np.abs(t)
        ch = validate_affine(t, rng.uniform(-r, r))
        if is_completely_positive(ch):
            return ch
    raise SamplerError("no completely positive affine channel after 10^4 draws")


def random_isotropic(d: int, kind: str, seed: SeedLike = None) -> IsotropicChannel:
    rng = make_rng(seed)
    lo, hi = isotropic_p_range(d, kind)
    return make_isotropic(rng.uniform(lo, hi), kind, random_unitary(d, rng))


def random_decohering(d: int, seed: SeedLike = None) -> DecoheringChannel:
    return make_decohering(random_unitary(d, seed).T)


def random_kraus_channel(d: int, n_ops: int = 2, seed: SeedLike = None) -> KrausChannel:
    """Random CPTP map from a Haar isometry C^d -> C^d (x) C^n_ops."""
    V = random_unitary(d * n_ops, seed)[:, :d]
    return make_kraus([V[k * d:(k + 1) * d, :] for k in range(n_ops)])


def unitary_channel(U) -> KrausChannel:
    return make_kraus([U])


# -- file format -------------------------------------------------------------

def channel_to_dict(ch: Channel) -> dict:
    if isinstance(ch, AffineQubitChannel):
        return {"type": "affine", "t": [float(x) for x in ch.t], "lambda": [float(x) for x in ch.lam]}
    if isinstance(ch, IsotropicChannel):
        return {"type": "isotropic", "p": ch.p, "gamma": ch.kind, "U": matrix_to_json(ch.U), "d": ch.dim}
    if isinstance(ch, DecoheringChannel):
        return {"type": "decohering", "basis": [matrix_to_json(v) for v in ch.basis]}
    if isinstance(ch, KrausChannel):
        return {
            "type": "kraus",
            "shape": list(ch.ops[0].shape),
            "ops": [matrix_to_json(K) for K in ch.ops],
        }
    raise TypeError(f"not a channel: {type(ch).__name__}")


def channel_from_dict(data: dict) -> Channel:
    kind = data.get("type")
    if kind == "affine":
        return validate_affine(data["t"], data["lambda"])
    if kind == "isotropic":
        d = int(data["d"])
        return make_isotropic(float(data["p"]), data["gamma"], matrix_from_json(data["U"], (d, d)))
    if kind == "decohering":
        basis = [matrix_from_json(v, (1, len(v)))[0] for v in data["basis"]]
        return make_decohering(basis)
    if kind == "kraus":
        ops = data["ops"]
        if "shape" in data:
            shape = tuple(data["shape"])
        else:
            d = int(round(np.sqrt(len(ops[0]))))
            shape = (d, d)
        return make_kraus([matrix_from_json(K, shape) for K in ops])
    raise ValidityError(f"unknown channel type {kind!r}")
