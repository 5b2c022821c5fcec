"""Secret broadcasting of three-qubit entanglement: local cloning of a
shared two-qubit state, machine-outcome selection, separability analysis of
the six-qubit output, entanglement swapping to a third party, and a secret
classical channel for the outcome announcements.
"""
from .cloner import BranchOutcome, bh_isometry, buzek_baseline, clone_subsystem, machine_branches
from .entanglement import (
    MeasureReport,
    PPTVerdict,
    ThresholdInterval,
    broadcast_verdict,
    classify_triple,
    concurrence,
    eof,
    measure_report,
    ppt_verdict,
    scan_predicate,
    scan_threshold,
)
from .errors import ContractError
from .gvchannel import ANALYTIC_DETECTION_RATE, GvConfig, GvResult, secure_send, transmit_bits
from .protocol import (
    BranchReport,
    ProtocolRun,
    branch_probabilities,
    branch_report,
    build_initial,
    extract_marginals,
    machine_traced_six,
    run_first_stage,
    run_protocol,
    run_second_stage,
    six_qubit_branch,
)
from .qstate import (
    DensityOp,
    PureState,
    Register,
    apply_isometry,
    partial_trace,
    partial_transpose,
    permute_subsystems,
    projective_measure,
    tensor,
    to_density,
)
from .swap import (
    BellOutcome,
    CorrectionPlan,
    bsm,
    derive_corrections,
    published_corrections,
    recovery_target,
    swap_extend,
    verify_recovery,
)

__version__ = "0.1.0"

__all__ = [
    "ANALYTIC_DETECTION_RATE",
    "BellOutcome",
    "BranchOutcome",
    "BranchReport",
    "ContractError",
    "CorrectionPlan",
    "DensityOp",
    "GvConfig",
    "GvResult",
    "MeasureReport",
    "PPTVerdict",
    "ProtocolRun",
    "PureState",
    "Register",
    "ThresholdInterval",
    "apply_isometry",
    "bh_isometry",
    "branch_probabilities",
    "branch_report",
    "broadcast_verdict",
    "bsm",
    "build_initial",
    "buzek_baseline",
    "classify_triple",
    "clone_subsystem",
    "concurrence",
    "derive_corrections",
    "eof",
    "extract_marginals",
    "machine_branches",
    "machine_traced_six",
    "measure_report",
    "partial_trace",
    "partial_transpose",
    "permute_subsystems",
    "ppt_verdict",
    "projective_measure",
    "published_corrections",
    "recovery_target",
    "run_first_stage",
    "run_protocol",
    "run_second_stage",
    "scan_predicate",
    "scan_threshold",
    "secure_send",
    "six_qubit_branch",
    "swap_extend",
    "tensor",
    "to_density",
    "transmit_bits",
    "verify_recovery",
]
