"""Monte-Carlo campaigns checking that D_A does not increase under local channels.

Each trial draws a state and a channel from its own substream ``(seed, trial)``,
applies the channel on one side and compares the measure before and after.
Violation records carry the full state and channel payloads so a finding can
be replayed without the random generator.
"""
from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numpy as np

from . import channels as ch
from . import measures, states
from .errors import ConfigError

STATE_FAMILIES = ("random_mixed", "random_pure", "bell_diagonal", "classical_quantum")
CHANNEL_FAMILIES = (
    "unital_affine",
    "affine",
    "isotropic_unitary",
    "isotropic_antiunitary",
    "decohering",
    "kraus_random",
    "unitary",
)
LCPO_FAMILIES = ("unital_affine", "isotropic_unitary", "isotropic_antiunitary", "decohering")
D_MIN_TOL = 1e-4


@dataclass
class CampaignConfig:
    trials: int = 1000
    seed: int = 0
    state_family: str = "random_mixed"
    channel_family: str = "unital_affine"
    side: str = "A"
    dims: tuple[int, int] = (2, 2)
    tolerance: float = 1e-9
    use_d_min: bool = False
    rank: int | None = None
    kraus_ops: int = 2
    workers: int | None = None

    def __post_init__(self):
        self.dims = tuple(int(d) for d in self.dims)
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if not self.tolerance > 0:
            raise ConfigError(f"tolerance must be positive, got {self.tolerance}")
        if self.state_family not in STATE_FAMILIES:
            raise ConfigError(f"unknown state_family {self.state_family!r}")
        if self.channel_family not in CHANNEL_FAMILIES:
            raise ConfigError(f"unknown channel_family {self.channel_family!r}")
        if self.side not in ("A", "B"):
            raise ConfigError(f"side must be 'A' or 'B', got {self.side!r}")
        if len(self.dims) != 2 or min(self.dims) < 2:
            raise ConfigError(f"dims must be two integers >= 2, got {self.dims}")
        d = self.dims[0] if self.side == "A" else self.dims[1]
        if self.channel_family in ("unital_affine", "affine") and d != 2:
            raise ConfigError(f"{self.channel_family} channels need a qubit on side {self.side}, got dimension {d}")
        if self.state_family == "bell_diagonal" and self.dims != (2, 2):
            raise ConfigError("bell_diagonal states need dims (2, 2)")

    @property
    def effective_tolerance(self) -> float:
        return max(self.tolerance, D_MIN_TOL) if self.use_d_min else self.tolerance

    def to_dict(self) -> dict:
        out = asdict(self)
        out["dims"] = list(self.dims)
        out.pop("workers")
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "CampaignConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known - {"mode"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            return cls(**{k: v for k, v in data.items() if k in known})
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from exc


@dataclass
class ViolationRecord:
    trial_index: int
    substream: list
    D_before: float
    D_after: float
    state: dict
    channel: dict

    @property
    def excess(self) -> float:
        return self.D_after - self.D_before


@dataclass
class CampaignReport:
    trials_run: int
    violations: list
    max_excess: float
    runtime_ms: float
    config: dict
    rows: list = field(default_factory=list)

    def to_dict(self, include_rows: bool = False) -> dict:
        out = {
            "trials_run": self.trials_run,
            "violation_count": len(self.violations),
            "max_excess": self.max_excess,
            "runtime_ms": self.runtime_ms,
            "config": self.config,
            "violations": [asdict(v) for v in self.violations],
        }
        if include_rows:
            out["rows"] = [list(r) for r in self.rows]
        return out


class TrialOutcome(NamedTuple):
    index: int
    D_before: float
    D_after: float
    state: states.BipartiteState
    channel: object


class ProbeStats(NamedTuple):
    min: float
    max: float
    mean: float
    std: float


def resolve_workers(requested: int | None = None) -> int:
    hw = os.cpu_count() or 1
    env = os.environ.get("QCORR_THREADS")
    cap = int(env) if env else hw
    n = cap if requested is None else min(requested, cap)
    return max(1, n)


def sample_state(config: CampaignConfig, rng: np.random.Generator) -> states.BipartiteState:
    dA, dB = config.dims
    fam = config.state_family
    if fam == "random_mixed":
        return states.random_mixed_state(dA, dB, config.rank, rng)
    if fam == "random_pure":
        return states.random_pure_state(dA, dB, rng)
    if fam == "bell_diagonal":
        return states.bell_diagonal_state(states.random_bell_diagonal(rng))
    return states.random_classical_quantum_state(dA, dB, rng)


def sample_channel(config: CampaignConfig, rng: np.random.Generator):
    d = config.dims[0] if config.side == "A" else config.dims[1]
    fam = config.channel_family
    if fam == "unital_affine":
        return ch.random_unital_qubit_channel(rng)
    if fam == "affine":
        return ch.random_affine_qubit_channel(rng)
    if fam == "isotropic_unitary":
        return ch.random_isotropic(d, "unitary", rng)
    if fam == "isotropic_antiunitary":
        return ch.random_isotropic(d, "antiunitary", rng)
    if fam == "decohering":
        return ch.random_decohering(d, rng)
    if fam == "kraus_random":
        return ch.random_kraus_channel(d, config.kraus_ops, rng)
    return ch.unitary_channel(states.random_unitary(d, rng))


def measure(state: states.BipartiteState, use_d_min: bool) -> float:
    if use_d_min:
        return measures.minimize_d(state).d_value
    return measures.D_value(state)


def run_trial(config: CampaignConfig, index: int) -> TrialOutcome:
    rng = states.substream(config.seed, index)
    state = sample_state(config, rng)
    channel = sample_channel(config, rng)
    after = ch.apply_local(channel, state, config.side)
    return TrialOutcome(index, measure(state, config.use_d_min), measure(after, config.use_d_min), state, channel)


def _run_chunk(config: CampaignConfig, indices: range) -> list[tuple]:
    out = []
    for i in indices:
        t = run_trial(config, i)
        # Payloads are only kept for violations; everything else travels as plain floats.
        over = t.D_after - t.D_before > config.effective_tolerance
        payload = (states.state_to_dict(t.state), ch.channel_to_dict(t.channel)) if over else None
        out.append((t.index, t.D_before, t.D_after, payload))
    return out


def run_campaign(config: CampaignConfig) -> CampaignReport:
    """Generic trial loop shared by every campaign flavour."""
    start = time.perf_counter()
    workers = resolve_workers(config.workers)
    n = config.trials
    if workers == 1 or n < 64:
        results = _run_chunk(config, range(n))
    else:
        size = -(-n // workers)
        chunks = [range(i, min(i + size, n)) for i in range(0, n, size)]
        with ProcessPoolExecutor(workers) as pool:
            parts = pool.map(_run_chunk, [config] * len(chunks), chunks)
            results = [r for part in parts for r in part]
    results.sort(key=lambda r: r[0])

    violations, rows = [], []
    for index, before, after, payload in results:
        rows.append((index, before, after, after - before))
        if payload is not None:
            violations.append(ViolationRecord(index, [config.seed, index], before, after, *payload))
    max_excess = max(r[3] for r in rows)
    runtime = (time.perf_counter() - start) * 1e3
    return CampaignReport(n, violations, float(max_excess), runtime, config.to_dict(), rows)


def run_lcpo_campaign(config: CampaignConfig) -> CampaignReport:
    if config.side != "A":
        raise ConfigError("LCPO campaigns act on side A")
    if config.channel_family not in LCPO_FAMILIES:
        raise ConfigError(f"{config.channel_family!r} is not an LCPO family; use one of {LCPO_FAMILIES}")
    return run_campaign(config)


def run_bside_bell_campaign(config: CampaignConfig) -> CampaignReport:
    if config.side != "B":
        raise ConfigError("Bell-diagonal campaigns act on side B")
    if config.state_family != "bell_diagonal":
        raise ConfigError("Bell-diagonal campaigns need state_family 'bell_diagonal'")
    return run_campaign(config)


def explore_bside_general(config: CampaignConfig) -> CampaignReport:
    """Scan arbitrary states for B-side increases of the measure.

    Nothing is proved for general states, so the report lists findings and is
    never treated as pass/fail.
    """
    if config.side != "B":
        raise ConfigError("the B-side scanner acts on side B")
    return run_campaign(config)


def replay_violation(record: ViolationRecord | dict, side: str = "B", use_d_min: bool = False) -> tuple[float, float]:
    """Recompute (D_before, D_after) from a record's payloads alone."""
    if isinstance(record, ViolationRecord):
        record = asdict(record)
    state = states.state_from_dict(record["state"])
    channel = ch.channel_from_dict(record["channel"])
    after = ch.apply_local(channel, state, side)
    return measure(state, use_d_min), measure(after, use_d_min)


def isotropic_scaling_check(state: states.BipartiteState, p: float, U, kind: str) -> tuple[float, float, float]:
    """Compare D_A after an isotropic map on A with p^2 times D_A of the (transposed) blocks.

    The left side goes through the full channel pipeline; the right side is
    built from the untouched blocks, transposed for the antiunitary kind.
    """
    channel = ch.make_isotropic(p, kind, U)
    lhs = measures.D_value(ch.apply_local(channel, state, "A"), fast=False)
    blocks = measures.block_decompose(state).blocks
    dB, _, dA, _ = blocks.shape
    blocks = blocks.reshape(dB * dB, dA, dA)
    if kind == "antiunitary":
        blocks = np.swapaxes(blocks, -1, -2)
    rhs = p * p * float(measures.D_from_blocks(blocks, fast=False))
    return lhs, rhs, abs(lhs - rhs)


def basis_dependence_probe(state: states.BipartiteState, samples: int, seed: int = 0) -> ProbeStats:
    """Spread of D_A over Haar-random orthonormal bases on B."""
    rng = states.make_rng(seed)
    Us = np.stack([states.random_unitary(state.dB, rng) for _ in range(samples)])
    R = np.asarray(state.rho).reshape(state.dA, state.dB, state.dA, state.dB)
    vals = measures.D_from_blocks(measures.blocks_for_bases(R, Us))
    return ProbeStats(float(vals.min()), float(vals.max()), float(vals.mean()), float(vals.std()))
