"""Bidirectional teleportation of unknown qubit states over a four-qubit
cluster channel, with exact statevector simulation, full branch
enumeration, cooperation modeling, and entanglement diagnostics."""

from .bell import BELL_ORDER, BellOutcome, bell_project, bsm_enumerate, bsm_sample
from .engine import (
    BranchRecord,
    ChannelState,
    ChannelVerdict,
    CorrectionOp,
    DegradedChannelWarning,
    InformationState,
    PartyRole,
    branch_index,
    build_cluster_channel,
    build_intra_party_bell_channel,
    collapsed_state_reference,
    compose_joint,
    correction_lookup,
    enumerate_branches,
    enumerate_branches_multiqubit,
    ghz_amplitudes,
    ghz_compress,
    ghz_reincarnate,
    regenerated_table_matches,
    run_bqt,
    run_bqt_branch,
    run_bqt_multiqubit,
    run_multiqubit_branch,
    search_corrections,
)
from .errors import (
    BadSubset,
    BqtError,
    DuplicateLabel,
    ImpossibleOutcome,
    LabelMismatch,
    NotGHZForm,
    NotNormalized,
    SameQubit,
    UnknownLabel,
)
from .harness import (
    HONEST,
    POLICY_PRESETS,
    ClassicalMessage,
    CooperationPolicy,
    FidelityStats,
    Transcript,
    average_fidelity,
    enumerate_protocol,
    random_coefficients,
    replay,
    run_protocol,
)
from .statevector import (
    Gate1Q,
    StateVector,
    apply_1q,
    apply_cnot,
    apply_cz,
    dump_statevector,
    entanglement_entropy,
    fidelity,
    parse_statevector,
    reduced_density,
    schmidt_rank,
    subset_fidelity,
    tensor,
    try_factor,
)

__version__ = "0.1.0"
