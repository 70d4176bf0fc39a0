"""Exact simulator and certification toolkit for adversarial quantum teleportation."""

__version__ = "0.1.0"

from .certify import (
    Adversary,
    AdversaryModel,
    CertificateDecision,
    Criterion,
    ThresholdSource,
    decide,
    threshold_table,
)
from .channels import MeasurementOutcome, RngStream, measure_branches, measure_sample, random_bit, regenerate_zero, trash
from .fidelity import (
    BlochAverageReport,
    BranchFidelity,
    FidelityReport,
    bloch_average,
    exact_report,
    exact_threshold,
    monte_carlo_threshold,
    theta_average,
    theta_sweep,
    threshold_fidelity,
)
from .gates import (
    UnitaryMatrix,
    bloch_rotation,
    cnot,
    entanglement_gadget,
    entanglement_gadget_inverse,
    ghz_rotation,
    hadamard,
    pauli_x,
    pauli_y,
    pauli_z,
)
from .protocols import (
    Announcement,
    Branch,
    InputFamily,
    ProtocolId,
    ProtocolParams,
    TargetState,
    build_target,
    run_exact,
    run_sampled,
)
from .statevec import (
    CapacityError,
    DensityOperator,
    PureState,
    apply_unitary,
    basis_state,
    expectation,
    partial_trace,
    tensor,
    to_density,
)

__all__ = [name for name in dir() if not name.startswith("_")]
