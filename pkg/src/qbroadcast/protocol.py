"""End-to-end pipeline: initial two-qubit state, two rounds of local
cloning with machine-outcome selection in between, six-qubit state assembly,
marginal extraction, and per-branch broadcastability reports.

Labels: Alice holds qubits 1, 2, 5 (1 is her original, 2 and 5 its clones);
Bob holds 3, 4, 6. Machine registers A1/B1 belong to the first cloning round
and are measured; A2/B2 belong to the second round and are traced out.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cloner import OUTCOME_ORDER, BranchOutcome, clone_subsystem, machine_branches
from .constants import SCAN_GRID, SCAN_TOL
from .entanglement import (
    ThresholdInterval,
    broadcast_verdict,
    classify_triple,
    scan_predicate,
)
from .errors import ContractError
from .gvchannel import DeliveryRecord, GvConfig, secure_send
from .qstate import DensityOp, PureState, Register, partial_trace, to_density

__all__ = [
    "ProtocolRun",
    "BranchReport",
    "PAIR_KEYS",
    "TRIPLE_KEYS",
    "build_initial",
    "run_first_stage",
    "run_second_stage",
    "machine_traced_six",
    "six_qubit_branch",
    "extract_marginals",
    "branch_report",
    "run_protocol",
]

# Marginals the sweep and report tooling works with, in report order.
PAIR_KEYS = ("12", "15", "34", "36", "25", "46", "23", "35", "14", "16")
TRIPLE_KEYS = ("146", "325")

SIX_LABELS = ("1", "2", "5", "3", "4", "6")


@dataclass(frozen=True)
class ProtocolRun:
    """One full protocol execution for a fixed machine branch."""

    alpha2: float
    beta_phase: float
    branch: tuple[str, str]
    six_qubit_state: DensityOp
    message_log: tuple[tuple[str, str, DeliveryRecord], ...]
    compromised: bool


@dataclass(frozen=True)
class BranchReport:
    """Broadcastability ranges for one machine branch.

    probability is evaluated at reference_alpha2 (the outcome distribution
    depends on the input weight).
    """

    branch: tuple[str, str]
    probability: float
    reference_alpha2: float
    broadcast_intervals: tuple[ThresholdInterval, ...]
    rho146_closed_intervals: tuple[ThresholdInterval, ...]


def build_initial(alpha: float, beta_phase: float = 0.0) -> PureState:
    """The shared two-qubit state alpha|00> + beta|11> on labels (1, 3)."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"build_initial: alpha must be in (0, 1), got {alpha}")
    beta = np.sqrt(1.0 - alpha * alpha) * np.exp(1j * beta_phase)
    amps = np.zeros(4, dtype=complex)
    amps[0b00] = alpha
    amps[0b11] = beta
    return PureState(Register.qubits("1", "3"), amps)


def run_first_stage(psi13: PureState) -> tuple[PureState, list[BranchOutcome]]:
    """Clone qubit 1 -> (1,2) and qubit 3 -> (3,4), then measure machines.

    Returns the four-qubit-plus-machines state on (1,2,A1,3,4,B1) and the
    four machine branches.
    """
    if psi13.register.labels != ("1", "3"):
        raise ContractError(
            f"run_first_stage: expected labels (1, 3), got {psi13.register.labels}"
        )
    chi = clone_subsystem(psi13, "1", ("1", "2"), "A1")
    chi = clone_subsystem(chi, "3", ("3", "4"), "B1")
    return chi, machine_branches(chi, ["A1", "B1"])


def run_second_stage(zeta: PureState) -> DensityOp:
    """Clone qubit 2 -> (2,5) and qubit 4 -> (4,6), trace out both machines.

    Input is a branch state on qubits (1,2,3,4); output is the six-qubit
    operator on labels (1,2,5,3,4,6).
    """
    if set(zeta.register.labels) != {"1", "2", "3", "4"}:
        raise ContractError(
            f"run_second_stage: expected qubits 1-4, got {zeta.register.labels}"
        )
    phi = clone_subsystem(zeta, "2", ("2", "5"), "A2")
    phi = clone_subsystem(phi, "4", ("4", "6"), "B2")
    return partial_trace(to_density(phi), list(SIX_LABELS))


def machine_traced_six(psi13: PureState) -> DensityOp:
    """Six-qubit state when the first-round machines are traced out instead
    of measured (no branch selection). Used by the total-probability check:
    the branch mixture weighted by outcome probabilities must equal this.
    """
    chi, _ = run_first_stage(psi13)
    rho4 = partial_trace(to_density(chi), ["1", "2", "3", "4"])
    rho = clone_subsystem(rho4, "2", ("2", "5"), "A2")
    rho = clone_subsystem(rho, "4", ("4", "6"), "B2")
    return partial_trace(rho, list(SIX_LABELS))


def _as_branch(branch) -> tuple[str, str]:
    pair = tuple(str(x) for x in branch)
    if pair not in OUTCOME_ORDER:
        raise ValueError(f"unknown machine branch {branch!r}")
    return pair


@lru_cache(maxsize=2048)
def _six_qubit_branch(alpha2: float, branch: tuple[str, str], beta_phase: float) -> DensityOp:
    psi = build_initial(float(np.sqrt(alpha2)), beta_phase)
    _, branches = run_first_stage(psi)
    sel = next(b for b in branches if b.machine_labels == branch)
    if sel.state is None:
        raise ContractError(f"branch {branch} has vanishing probability at alpha2={alpha2}")
    return run_second_stage(sel.state)


def six_qubit_branch(
    alpha2: float, branch=("Q0", "Q0"), beta_phase: float = 0.0
) -> DensityOp:
    """Six-qubit state of one machine branch (cached: scans revisit points)."""
    return _six_qubit_branch(float(alpha2), _as_branch(branch), float(beta_phase))


def branch_probabilities(alpha2: float, beta_phase: float = 0.0) -> dict[tuple[str, str], float]:
    """Machine outcome distribution at the given input weight."""
    psi = build_initial(float(np.sqrt(alpha2)), beta_phase)
    _, branches = run_first_stage(psi)
    return {b.machine_labels: b.probability for b in branches}


def extract_marginals(six: DensityOp) -> dict[str, DensityOp]:
    """All report marginals of the six-qubit state, keyed by label string."""
    out: dict[str, DensityOp] = {}
    for key in PAIR_KEYS + TRIPLE_KEYS:
        out[key] = partial_trace(six, list(key))
    return out


def branch_report(
    branch,
    reference_alpha2: float = 0.5,
    beta_phase: float = 0.0,
    grid: int = SCAN_GRID,
    tol: float = SCAN_TOL,
) -> BranchReport:
    """Scan broadcastability and closed-triple ranges for one branch."""
    pair = _as_branch(branch)

    def broadcast_at(x: float) -> bool:
        ok, _ = broadcast_verdict(six_qubit_branch(x, pair, beta_phase))
        return ok

    def closed_at(x: float) -> bool:
        rho146 = partial_trace(six_qubit_branch(x, pair, beta_phase), ["1", "4", "6"])
        kind, _ = classify_triple(rho146)
        return kind == "closed"

    prob = branch_probabilities(reference_alpha2, beta_phase)[pair]
    return BranchReport(
        branch=pair,
        probability=prob,
        reference_alpha2=reference_alpha2,
        broadcast_intervals=tuple(scan_predicate(broadcast_at, grid, tol, "broadcast")),
        rho146_closed_intervals=tuple(scan_predicate(closed_at, grid, tol, "closed-146")),
    )


def _message_seeds(seed: int | None) -> tuple[int, int]:
    base = 0 if seed is None else int(seed)
    return (base * 1000003 + 1) % 2**63, (base * 1000003 + 2) % 2**63


def run_protocol(
    alpha2: float,
    beta_phase: float = 0.0,
    branch_policy: str = "fixed",
    branch=("Q0", "Q0"),
    seed: int | None = None,
    eve_strategy: str = "none",
) -> ProtocolRun:
    """Execute the full protocol once.

    branch_policy "fixed" keeps the requested branch; "sampled" draws one
    from the machine-outcome distribution (seed required). The two outcome
    announcements travel through the secret channel and are logged.
    """
    if not 0.0 < alpha2 < 1.0:
        raise ValueError(f"run_protocol: alpha2 must be in (0, 1), got {alpha2}")
    if branch_policy not in ("fixed", "sampled"):
        raise ValueError(f"run_protocol: unknown branch policy {branch_policy!r}")

    if branch_policy == "sampled":
        if seed is None:
            raise ValueError("run_protocol: sampled branch policy requires a seed")
        probs = branch_probabilities(alpha2, beta_phase)
        order = list(probs)
        weights = np.array([probs[b] for b in order])
        rng = np.random.default_rng(seed)
        pair = order[int(rng.choice(len(order), p=weights / weights.sum()))]
    else:
        pair = _as_branch(branch)

    six = six_qubit_branch(alpha2, pair, beta_phase)
    alice_seed, bob_seed = _message_seeds(seed)
    alice_msg = secure_send(pair[0], eve_strategy, GvConfig(seed=alice_seed))
    bob_msg = secure_send(pair[1], eve_strategy, GvConfig(seed=bob_seed))
    log = (("Alice", "Bob", alice_msg), ("Bob", "Alice", bob_msg))
    return ProtocolRun(
        alpha2=float(alpha2),
        beta_phase=float(beta_phase),
        branch=pair,
        six_qubit_state=six,
        message_log=log,
        compromised=alice_msg.compromised or bob_msg.compromised,
    )
