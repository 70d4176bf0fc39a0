"""Agent-level semantics for the five teleportation protocols.

Register layout for a run at share size m (m + 2 qubits total, index 0 is the
most significant label bit):

    0 .. m-2   ancillas prepared by the certifier C and kept by C
    m-1        the share C hands to the sender A
    m          A's half of the entangled pair supplied by D
    m+1        B's half of the entangled pair

Every protocol starts the same way: C rotates |0>^m into the target state on
qubits 0..m-1 and D turns qubits (m, m+1) into the entangled pair. The five
protocols then differ in what A and B do:

    P0   A applies the Bell rotation to (m-1, m), measures both (bits a, b);
         B applies Z^a X^b to his qubit.  Honest teleportation.
    PA1  A measures qubit m-1 directly (bit a), trashes qubit m and fakes b
         with a random bit; B is honest.
    PA2  A trashes both her qubits and fakes both bits; B is honest.
    PB   A is honest as in P0; B trashes his qubit, regenerates |0>, and
         applies X^a, ignoring b.
    PAB  A applies the Bell rotation, measures qubit m-1 (the single
         announced bit a) and trashes qubit m; B trashes his qubit,
         regenerates |0>, and applies X^a.

Measurements are destructive (the register shrinks), so each branch output is
a density operator over exactly m qubits: C's ancillas followed by the qubit
B delivers, in target-register order. Branch outputs are normalized; the
sub-normalized operator is probability * output. B's trash-and-regenerate
commutes with A's operations (disjoint registers), so executing it after A's
steps, as done here, is equivalent to any interleaving; the test suite checks
this against an independent simulation that orders B first.

run_exact is pure; run_sampled mutates only its RngStream.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import gates
from .channels import (
    MeasurementOutcome,
    RngStream,
    measure_branches,
    measure_sample,
    random_bit,
    regenerate_zero,
    trash,
)
from .statevec import (
    CapacityError,
    DensityOperator,
    PureState,
    REGISTER_CAP,
    apply_unitary,
    basis_state,
    partial_trace,
    tensor,
    to_density,
)


class ProtocolId(Enum):
    P0 = "p0"
    PA1 = "pa1"
    PA2 = "pa2"
    PB = "pb"
    PAB = "pab"

    @classmethod
    def parse(cls, s: str) -> "ProtocolId":
        try:
            return cls(s.strip().lower())
        except ValueError:
            raise ValueError(f"unknown protocol {s!r}; expected one of "
                             f"{[p.value for p in cls]}") from None


class InputFamily(Enum):
    TRIVIAL = "trivial"
    GHZ = "ghz"
    BLOCH = "bloch"

    @classmethod
    def parse(cls, s: str) -> "InputFamily":
        try:
            return cls(s.strip().lower())
        except ValueError:
            raise ValueError(f"unknown family {s!r}; expected one of "
                             f"{[f.value for f in cls]}") from None


@dataclass(frozen=True)
class ProtocolParams:
    m: int = 1
    family: InputFamily = InputFamily.BLOCH
    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.m + 2 > REGISTER_CAP:
            raise CapacityError(f"m + 2 = {self.m + 2} exceeds register cap {REGISTER_CAP}")
        if self.family is InputFamily.BLOCH and self.m != 1:
            raise ValueError("bloch family requires m = 1")


@dataclass(frozen=True)
class Announcement:
    """Classical bits sent from A to B; b is absent for PAB."""

    a: int
    b: int | None = None

    def key(self) -> tuple[int, int]:
        return (self.a, -1 if self.b is None else self.b)


@dataclass(frozen=True)
class Branch:
    """One announcement outcome of an exact run.

    output is normalized (unit trace); None flags a zero-probability branch.
    The sub-normalized operator of the announcement equals probability * output.
    """

    announcement: Announcement
    probability: float
    output: DensityOperator | None

    def sub_normalized(self) -> DensityOperator:
        if self.output is None:
            raise ValueError("zero-probability branch has no output state")
        return DensityOperator(self.output.num_qubits, self.probability * self.output.matrix)


@dataclass(frozen=True)
class TargetState:
    psi: PureState


def build_target(params: ProtocolParams) -> TargetState:
    """The m-qubit state C prepares and later compares against."""
    m, th, ph = params.m, params.theta, params.phi
    if params.family is InputFamily.TRIVIAL:
        return TargetState(basis_state(m))
    if params.family is InputFamily.GHZ:
        psi = apply_unitary(basis_state(m), gates.ghz_rotation(m, th), list(range(m)))
        return TargetState(psi)
    psi = apply_unitary(basis_state(1), gates.bloch_rotation(th, ph), [0])
    return TargetState(psi)


def _ebit() -> PureState:
    return apply_unitary(basis_state(2), gates.entanglement_gadget(), [0, 1])


def _prefix_state(params: ProtocolParams) -> PureState:
    """State after C's rotation and D's entangling gadget."""
    return tensor(build_target(params).psi, _ebit())


def _apply_u_rho(rho: DensityOperator, u, targets: list[int]) -> DensityOperator:
    mat = getattr(u, "entries", u)
    n = rho.num_qubits
    k = len(targets)
    t = rho.matrix.reshape([2] * (2 * n))
    ut = mat.reshape([2] * (2 * k))
    t = np.tensordot(ut, t, axes=(list(range(k, 2 * k)), targets))
    t = np.moveaxis(t, list(range(k)), targets)
    cols = [n + q for q in targets]
    t = np.tensordot(ut.conj(), t, axes=(list(range(k, 2 * k)), cols))
    t = np.moveaxis(t, list(range(k)), cols)
    return DensityOperator(n, t.reshape(2**n, 2**n))


def _pauli_power(z_pow: int, x_pow: int) -> np.ndarray:
    """Z^z X^x as a single 2x2 matrix (X applied first)."""
    mat = np.eye(2, dtype=complex)
    if x_pow:
        mat = gates.pauli_x().entries @ mat
    if z_pow:
        mat = gates.pauli_z().entries @ mat
    return mat


def _correct_last_pure(psi: PureState, z_pow: int, x_pow: int) -> PureState:
    return apply_unitary(psi, _pauli_power(z_pow, x_pow), [psi.num_qubits - 1])


def _correct_last_rho(rho: DensityOperator, z_pow: int, x_pow: int) -> DensityOperator:
    return _apply_u_rho(rho, _pauli_power(z_pow, x_pow), [rho.num_qubits - 1])


def _b_fakes_qubit(rho: DensityOperator, x_pow: int) -> DensityOperator:
    """B's cheating tail: trash his share (last qubit), reset to |0>, apply X^a."""
    k = rho.num_qubits
    rho = trash(rho, k - 1)
    rho = regenerate_zero(rho, k - 1)
    return _correct_last_rho(rho, z_pow=0, x_pow=x_pow)


def _bell_rotated(params: ProtocolParams) -> PureState:
    m = params.m
    return apply_unitary(_prefix_state(params), gates.entanglement_gadget_inverse(), [m - 1, m])


def run_exact(protocol: ProtocolId, params: ProtocolParams) -> list[Branch]:
    """Enumerate every announcement branch with its exact probability.

    Random-bit announcements contribute branch coordinates with probability
    1/2 each, so P0, PA1, PA2 and PB have four branches and PAB has two.
    Branches are sorted by announcement bits; probabilities sum to one.
    """
    m = params.m
    out: list[Branch] = []

    if protocol is ProtocolId.P0:
        state = _bell_rotated(params)
        for oa in measure_branches(state, m - 1):
            for ob in _measure_or_dead(oa.post_state, m - 1):
                if ob.post_state is None:
                    out.append(Branch(Announcement(oa.bit, ob.bit), 0.0, None))
                    continue
                corrected = _correct_last_pure(ob.post_state, z_pow=oa.bit, x_pow=ob.bit)
                out.append(Branch(Announcement(oa.bit, ob.bit),
                                  oa.probability * ob.probability, to_density(corrected)))

    elif protocol is ProtocolId.PA1:
        state = _prefix_state(params)
        for oa in measure_branches(state, m - 1):
            if oa.post_state is None:
                out.extend(Branch(Announcement(oa.bit, b), 0.0, None) for b in (0, 1))
                continue
            rho = trash(oa.post_state, m - 1)
            for b in (0, 1):
                out.append(Branch(Announcement(oa.bit, b), oa.probability * 0.5,
                                  _correct_last_rho(rho, z_pow=oa.bit, x_pow=b)))

    elif protocol is ProtocolId.PA2:
        rho = partial_trace(to_density(_prefix_state(params)), {m - 1, m})
        for a in (0, 1):
            for b in (0, 1):
                out.append(Branch(Announcement(a, b), 0.25,
                                  _correct_last_rho(rho, z_pow=a, x_pow=b)))

    elif protocol is ProtocolId.PB:
        state = _bell_rotated(params)
        for oa in measure_branches(state, m - 1):
            for ob in _measure_or_dead(oa.post_state, m - 1):
                if ob.post_state is None:
                    out.append(Branch(Announcement(oa.bit, ob.bit), 0.0, None))
                    continue
                rho = _b_fakes_qubit(to_density(ob.post_state), x_pow=oa.bit)
                out.append(Branch(Announcement(oa.bit, ob.bit),
                                  oa.probability * ob.probability, rho))

    elif protocol is ProtocolId.PAB:
        state = _bell_rotated(params)
        for oa in measure_branches(state, m - 1):
            if oa.post_state is None:
                out.append(Branch(Announcement(oa.bit, None), 0.0, None))
                continue
            rho = trash(oa.post_state, m - 1)
            rho = _b_fakes_qubit(rho, x_pow=oa.bit)
            out.append(Branch(Announcement(oa.bit, None), oa.probability, rho))

    else:
        raise ValueError(f"unknown protocol {protocol}")

    return sorted(out, key=lambda br: br.announcement.key())


def _measure_or_dead(post_state: PureState | None, qubit: int):
    """Measurement branches, or two dead branches below a dead branch."""
    if post_state is None:
        return [MeasurementOutcome(0, 0.0, None), MeasurementOutcome(1, 0.0, None)]
    return measure_branches(post_state, qubit)


def run_sampled(protocol: ProtocolId, params: ProtocolParams,
                rng: RngStream) -> tuple[Announcement, DensityOperator]:
    """One protocol trajectory; announcement bits are drawn in (a, b) order."""
    m = params.m

    if protocol is ProtocolId.P0:
        state = _bell_rotated(params)
        oa = measure_sample(state, m - 1, rng)
        ob = measure_sample(oa.post_state, m - 1, rng)
        corrected = _correct_last_pure(ob.post_state, z_pow=oa.bit, x_pow=ob.bit)
        return Announcement(oa.bit, ob.bit), to_density(corrected)

    if protocol is ProtocolId.PA1:
        oa = measure_sample(_prefix_state(params), m - 1, rng)
        rho = trash(oa.post_state, m - 1)
        b = random_bit(rng)
        return Announcement(oa.bit, b), _correct_last_rho(rho, z_pow=oa.bit, x_pow=b)

    if protocol is ProtocolId.PA2:
        a, b = random_bit(rng), random_bit(rng)
        rho = partial_trace(to_density(_prefix_state(params)), {m - 1, m})
        return Announcement(a, b), _correct_last_rho(rho, z_pow=a, x_pow=b)

    if protocol is ProtocolId.PB:
        state = _bell_rotated(params)
        oa = measure_sample(state, m - 1, rng)
        ob = measure_sample(oa.post_state, m - 1, rng)
        return Announcement(oa.bit, ob.bit), _b_fakes_qubit(to_density(ob.post_state), x_pow=oa.bit)

    if protocol is ProtocolId.PAB:
        state = _bell_rotated(params)
        oa = measure_sample(state, m - 1, rng)
        rho = trash(oa.post_state, m - 1)
        return Announcement(oa.bit, None), _b_fakes_qubit(rho, x_pow=oa.bit)

    raise ValueError(f"unknown protocol {protocol}")
