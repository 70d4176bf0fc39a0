"""Non-unitary primitives: destructive measurement, trash, random bits, reset.

Measurement is destructive: the measured qubit is deleted from the register,
so an n-qubit state becomes an (n-1)-qubit state plus one classical bit.
The comparison direction follows the Born rule: outcome 0 occurs with
probability p0 = sum of |amplitude|^2 over labels whose measured bit is 0.

Trash discards a qubit with no classical record (a partial trace); it differs
from measure-and-forget only in that no bit exists, not in the surviving
state: the probability-weighted average of the two measurement branches
equals the partial trace exactly.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .statevec import (
    CapacityError,
    DensityOperator,
    PureState,
    REGISTER_CAP,
    partial_trace,
    to_density,
)

_PROB_ATOL = 1e-9  # degenerate-probability guard for corrupted states


class RngStream:
    """Counter-based deterministic PRNG (Philox) with derivable substreams.

    A stream is single-owner mutable; independent per-shot substreams come
    from substream(index), which keys a fresh Philox generator on
    (seed, index) so parallel shot execution is order-independent.
    """

    algorithm = "philox"

    def __init__(self, seed: int, _spawn_key: tuple[int, ...] = ()):
        self.seed = int(seed)
        self._spawn_key = _spawn_key
        ss = np.random.SeedSequence(self.seed, spawn_key=_spawn_key)
        self._gen = np.random.Generator(np.random.Philox(ss))
        self.draws = 0

    def uniform(self) -> float:
        """One draw, uniform on [0, 1)."""
        self.draws += 1
        return float(self._gen.random())

    def uniform_block(self, shape: tuple[int, ...]) -> np.ndarray:
        """Bulk uniforms on [0, 1); row i is the draw block of shot index i."""
        block = self._gen.random(shape)
        self.draws += block.size
        return block

    def substream(self, index: int) -> "RngStream":
        return RngStream(self.seed, self._spawn_key + (int(index),))

    def __repr__(self):
        return f"RngStream(algorithm={self.algorithm!r}, seed={self.seed}, draws={self.draws})"


@dataclass(frozen=True)
class MeasurementOutcome:
    """One outcome of a destructive single-qubit measurement.

    post_state is renormalized, with the measured qubit removed; it is None
    for zero-probability branches (the undefined-state flag).
    """

    bit: int
    probability: float
    post_state: PureState | None


def _project(state: PureState, qubit: int) -> tuple[np.ndarray, np.ndarray]:
    n = state.num_qubits
    if not 0 <= qubit < n:
        raise ValueError(f"qubit {qubit} out of range for {n} qubits")
    psi = state.amplitudes.reshape([2] * n)
    sub0 = np.take(psi, 0, axis=qubit).reshape(-1)
    sub1 = np.take(psi, 1, axis=qubit).reshape(-1)
    return sub0, sub1


def measure_branches(state: PureState, qubit: int) -> list[MeasurementOutcome]:
    """Exact enumeration of both outcomes; probabilities sum to 1."""
    state.require_normalized()
    sub0, sub1 = _project(state, qubit)
    n = state.num_qubits
    out = []
    for bit, sub in ((0, sub0), (1, sub1)):
        p = float(np.vdot(sub, sub).real)
        post = PureState(n - 1, sub / np.sqrt(p)) if p > 0.0 else None
        out.append(MeasurementOutcome(bit, p, post))
    total = out[0].probability + out[1].probability
    if abs(total - 1.0) > _PROB_ATOL:
        raise ValueError(f"branch probabilities sum to {total}, state corrupted")
    return out


def measure_sample(state: PureState, qubit: int, rng: RngStream) -> MeasurementOutcome:
    """Sample one outcome with Born-rule probabilities; consumes one draw."""
    branches = measure_branches(state, qubit)
    p0 = branches[0].probability
    return branches[0] if rng.uniform() < p0 else branches[1]


def random_bit(rng: RngStream) -> int:
    """Fair classical bit, independent of every quantum register."""
    return 0 if rng.uniform() >= 0.5 else 1


def trash(state: PureState | DensityOperator, qubit: int) -> DensityOperator:
    """Discard a qubit with no record; mathematically a partial trace."""
    rho = to_density(state) if isinstance(state, PureState) else state
    return partial_trace(rho, {qubit})


def regenerate_zero(state: DensityOperator, at: int) -> DensityOperator:
    """Tensor-insert a fresh |0><0| qubit at register position `at`."""
    n = state.num_qubits
    if not 0 <= at <= n:
        raise ValueError(f"insert position {at} out of range for {n} qubits")
    if n + 1 > REGISTER_CAP:
        raise CapacityError(f"{n + 1} qubits exceeds register cap {REGISTER_CAP}")
    t = state.matrix.reshape([2] * (2 * n))
    out = np.zeros([2] * (2 * (n + 1)), dtype=complex)
    idx = [slice(None)] * (2 * (n + 1))
    idx[at] = 0
    idx[n + 1 + at] = 0
    # remaining axes keep their relative order on both row and column sides
    out[tuple(idx)] = t
    return DensityOperator(n + 1, out.reshape(2 ** (n + 1), 2 ** (n + 1)))
