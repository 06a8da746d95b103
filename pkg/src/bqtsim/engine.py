"""Bidirectional teleportation over a four-qubit cluster channel.

Protocol summary.  Alice holds an unknown qubit ``a`` and Bob an unknown
qubit ``b``.  They share the cluster resource

    |Q> = (|0000> + |0011> + |1100> - |1111>) / 2       on (A1, B1, A2, B2)

where A1, A2 belong to Alice and B1, B2 to Bob.  Each party Bell-measures
its input against its first channel qubit: Alice the pair (a, A1), Bob the
pair (b, B2).  That leaves one of sixteen two-qubit states on (B1, A2),
known in closed form (see ``collapsed_state_reference``).  The parties then
cooperate on one nonlocal controlled-phase between A2 (control) and B1
(target), after which the register factorizes and each side finishes with a
single local Pauli correction selected by the counterpart's measurement
result (``correction_lookup``).  Bob's qubit B1 ends up carrying Alice's
coefficients and Alice's A2 carries Bob's: a simultaneous two-way transfer
costing four classical bits total.

The same machinery extends to states of the form a0|0...0> + a1|1...1>:
a local CNOT fan-in (``ghz_compress``) reduces an m-qubit carrier to one
qubit, the single-qubit exchange runs unchanged, and a CNOT fan-out from
the received qubit (``ghz_reincarnate``) rebuilds the state on the other
side, padding with fresh |0> qubits when the target is wider than the
local leftovers.  On each side the fan-out control is the qubit that
arrived through the exchange: B1 for Bob, A2 for Alice.

The controlled-phase step is genuinely load-bearing: without it every
branch stays entangled across (B1, A2) and neither party can recover the
counterpart's state, which is why the exchange only works when both
participants cooperate.  Equally, a channel that is not entangled across
the Alice|Bob cut cannot teleport at all; ``ChannelState.verdict`` measures
that cut (Schmidt rank 4 is required) and degraded channels trigger a
``DegradedChannelWarning``.
"""

from __future__ import annotations

import enum
import functools
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import statevector as qs
from .bell import BELL_ORDER, BellOutcome, bell_project
from .errors import ImpossibleOutcome, LabelMismatch, NotGHZForm
from .statevector import (
    QubitLabel,
    StateVector,
    apply_cnot,
    apply_cz,
    entanglement_entropy,
    fidelity,
    schmidt_rank,
    subset_fidelity,
    tensor,
    try_factor,
)

CHANNEL_LABELS = ("A1", "B1", "A2", "B2")
ALICE_CHANNEL_QUBITS = ("A1", "A2")
BOB_CHANNEL_QUBITS = ("B1", "B2")
REQUIRED_SCHMIDT_RANK = 4
GHZ_TOL = 1e-10

CoeffPair = tuple[complex, complex]


class DegradedChannelWarning(UserWarning):
    """The supplied channel cannot support the exchange at fidelity 1."""


class PartyRole(enum.Enum):
    ALICE = "alice"
    BOB = "bob"


@dataclass(frozen=True)
class InformationState:
    """An unknown input state a0|0...0> + a1|1...1> on one or more qubits."""

    a0: complex
    a1: complex
    labels: tuple[QubitLabel, ...]

    def __post_init__(self):
        object.__setattr__(self, "a0", complex(self.a0))
        object.__setattr__(self, "a1", complex(self.a1))
        object.__setattr__(self, "labels", tuple(self.labels))
        if not self.labels:
            raise ValueError("an information state needs at least one qubit")
        norm_sq = abs(self.a0) ** 2 + abs(self.a1) ** 2
        if abs(norm_sq - 1.0) > qs.NORM_TOL:
            raise qs.NotNormalized(f"|a0|^2 + |a1|^2 = {norm_sq!r} is not 1")

    @property
    def qubit_count(self) -> int:
        return len(self.labels)

    @classmethod
    def single(cls, coeffs: CoeffPair, label: QubitLabel) -> "InformationState":
        return cls(coeffs[0], coeffs[1], (label,))

    def to_statevector(self) -> StateVector:
        return StateVector(self.labels, ghz_amplitudes(self.a0, self.a1, self.qubit_count))


def ghz_amplitudes(c0: complex, c1: complex, k: int) -> np.ndarray:
    """Amplitude vector of c0|0...0> + c1|1...1> on k qubits."""
    amps = np.zeros(2**k, dtype=np.complex128)
    amps[0] = c0
    amps[-1] = c1
    return amps


@dataclass(frozen=True)
class ChannelVerdict:
    entropy_bits: float
    schmidt_rank: int
    ok: bool


@dataclass(frozen=True)
class ChannelState:
    """Four-qubit resource state on (A1, B1, A2, B2) with party ownership."""

    state: StateVector
    party_map: dict[QubitLabel, PartyRole] = field(
        default_factory=lambda: dict(_DEFAULT_PARTY_MAP)
    )

    def __post_init__(self):
        if self.state.labels != CHANNEL_LABELS:
            raise LabelMismatch(
                f"channel must be on {CHANNEL_LABELS}, got {self.state.labels}"
            )

    def verdict(self) -> ChannelVerdict:
        """Entanglement diagnostics across the Alice|Bob cut (cached)."""
        cached = self.__dict__.get("_verdict")
        if cached is None:
            rank = schmidt_rank(self.state, ALICE_CHANNEL_QUBITS)
            entropy = entanglement_entropy(self.state, ALICE_CHANNEL_QUBITS)
            cached = ChannelVerdict(entropy, rank, rank == REQUIRED_SCHMIDT_RANK)
            object.__setattr__(self, "_verdict", cached)
        return cached

    @classmethod
    def from_statevector(cls, sv: StateVector) -> "ChannelState":
        """Adopt a user-supplied channel; labels may arrive in any order."""
        if set(sv.labels) != set(CHANNEL_LABELS):
            raise LabelMismatch(f"channel labels must be {CHANNEL_LABELS}, got {sv.labels}")
        return cls(sv.permuted(CHANNEL_LABELS))


_DEFAULT_PARTY_MAP = {
    "A1": PartyRole.ALICE,
    "A2": PartyRole.ALICE,
    "B1": PartyRole.BOB,
    "B2": PartyRole.BOB,
}


@functools.lru_cache(maxsize=1)
def build_cluster_channel() -> ChannelState:
    """The canonical cluster resource (|0000> + |0011> + |1100> - |1111>)/2."""
    amps = np.zeros(16, dtype=np.complex128)
    amps[0b0000] = 0.5
    amps[0b0011] = 0.5
    amps[0b1100] = 0.5
    amps[0b1111] = -0.5
    return ChannelState(StateVector(CHANNEL_LABELS, amps))


def build_intra_party_bell_channel() -> ChannelState:
    """Bell pair on (A1, A2) times Bell pair on (B1, B2).

    Maximally entangled within each party but a product across the
    Alice|Bob cut, so it cannot carry any state between the parties; used
    as the reference failing channel in diagnostics.
    """
    pair = np.array([1, 0, 0, 1], dtype=np.complex128) / np.sqrt(2)
    alice = StateVector(("A1", "A2"), pair)
    bob = StateVector(("B1", "B2"), pair)
    return ChannelState.from_statevector(tensor(alice, bob))


class CorrectionOp(enum.Enum):
    """Receiver-side recovery unitary; ZX applies sigma_x first, then sigma_z."""

    I = "I"
    X = "X"
    Z = "Z"
    ZX = "ZX"

    @property
    def gate_sequence(self) -> tuple[qs.Gate1Q, ...]:
        return _GATE_SEQS[self]

    @property
    def matrix(self) -> np.ndarray:
        out = np.eye(2, dtype=np.complex128)
        for g in self.gate_sequence:
            out = g.matrix @ out
        return out

    @property
    def gate_count(self) -> int:
        return len(self.gate_sequence)

    def apply(self, sv: StateVector, q: QubitLabel) -> StateVector:
        for g in self.gate_sequence:
            sv = qs.apply_1q(sv, q, g)
        return sv


_GATE_SEQS = {
    CorrectionOp.I: (),
    CorrectionOp.X: (qs.X,),
    CorrectionOp.Z: (qs.Z,),
    CorrectionOp.ZX: (qs.X, qs.Z),
}

# The correction each receiver applies is fixed by the *sender's* Bell
# result alone: psi+ needs nothing, psi- a phase flip, phi+ a bit flip,
# phi- both.  Alice corrects A2 using Bob's result; Bob corrects B1 using
# Alice's.  ``search_corrections`` re-derives this map by exhaustive
# simulation, which pins down the operator order behind "ZX".
_CORRECTION_FOR_SENDER = {
    BellOutcome.PSI_PLUS: CorrectionOp.I,
    BellOutcome.PSI_MINUS: CorrectionOp.Z,
    BellOutcome.PHI_PLUS: CorrectionOp.X,
    BellOutcome.PHI_MINUS: CorrectionOp.ZX,
}


def correction_lookup(ao: BellOutcome, bo: BellOutcome) -> tuple[CorrectionOp, CorrectionOp]:
    """(Alice's op on A2, Bob's op on B1) for measurement results (ao, bo)."""
    return _CORRECTION_FOR_SENDER[bo], _CORRECTION_FOR_SENDER[ao]


def branch_index(ao: BellOutcome, bo: BellOutcome) -> int:
    """Branch number 1..16.

    Ordering groups the four Bell-family combinations (psi*psi, psi*phi,
    phi*psi, phi*phi) and runs the +/- signs Alice-major inside each group.
    """
    return 1 + 8 * ao.is_phi + 4 * bo.is_phi + 2 * ao.is_minus + bo.is_minus


BRANCH_PAIRS: tuple[tuple[BellOutcome, BellOutcome], ...] = tuple(
    sorted(
        ((ao, bo) for ao in BELL_ORDER for bo in BELL_ORDER),
        key=lambda pair: branch_index(*pair),
    )
)

# Analytic form of the sixteen post-measurement states on (B1, A2): entry
# (sign, i, j) at ket position |00>,|01>,|10>,|11> means the amplitude is
# sign * a_i * b_j.  Branch k of BRANCH_PAIRS uses row k.  This table is
# the independent reference the simulated collapse is checked against.
_COLLAPSE_TERMS = (
    ((+1, 0, 0), (+1, 0, 1), (+1, 1, 0), (-1, 1, 1)),
    ((+1, 0, 0), (-1, 0, 1), (+1, 1, 0), (+1, 1, 1)),
    ((+1, 0, 0), (+1, 0, 1), (-1, 1, 0), (+1, 1, 1)),
    ((+1, 0, 0), (-1, 0, 1), (-1, 1, 0), (-1, 1, 1)),
    ((+1, 0, 1), (+1, 0, 0), (+1, 1, 1), (-1, 1, 0)),
    ((-1, 0, 1), (+1, 0, 0), (-1, 1, 1), (-1, 1, 0)),
    ((+1, 0, 1), (+1, 0, 0), (-1, 1, 1), (+1, 1, 0)),
    ((-1, 0, 1), (+1, 0, 0), (+1, 1, 1), (+1, 1, 0)),
    ((+1, 1, 0), (+1, 1, 1), (+1, 0, 0), (-1, 0, 1)),
    ((+1, 1, 0), (-1, 1, 1), (+1, 0, 0), (+1, 0, 1)),
    ((-1, 1, 0), (-1, 1, 1), (+1, 0, 0), (-1, 0, 1)),
    ((-1, 1, 0), (+1, 1, 1), (+1, 0, 0), (+1, 0, 1)),
    ((+1, 1, 1), (+1, 1, 0), (+1, 0, 1), (-1, 0, 0)),
    ((-1, 1, 1), (+1, 1, 0), (-1, 0, 1), (-1, 0, 0)),
    ((-1, 1, 1), (-1, 1, 0), (+1, 0, 1), (-1, 0, 0)),
    ((+1, 1, 1), (-1, 1, 0), (-1, 0, 1), (-1, 0, 0)),
)


def collapsed_state_reference(
    ao: BellOutcome, bo: BellOutcome, a: CoeffPair, b: CoeffPair
) -> StateVector:
    """Closed-form post-measurement state on (B1, A2) for branch (ao, bo)."""
    terms = _COLLAPSE_TERMS[branch_index(ao, bo) - 1]
    amps = np.array(
        [sign * a[i] * b[j] for sign, i, j in terms], dtype=np.complex128
    )
    return StateVector(("B1", "A2"), amps)


def compose_joint(
    psi: InformationState, phi: InformationState, ch: ChannelState
) -> StateVector:
    """Inputs joined with the channel, label order (a, b, A1, B1, A2, B2)."""
    if psi.qubit_count != 1 or phi.qubit_count != 1:
        raise ValueError("compose_joint expects single-qubit inputs")
    return tensor(tensor(psi.to_statevector(), phi.to_statevector()), ch.state)


@dataclass(frozen=True)
class BranchRecord:
    """Everything known about one of the sixteen measurement branches.

    ``alice_final``/``bob_final`` hold the extracted output states when the
    corrected register factorizes (always, on the canonical channel); they
    are None when a degraded channel leaves the cut entangled, in which
    case the fidelities are mixed-state fidelities of the reduced output.
    """

    branch_index: int
    alice_outcome: BellOutcome
    bob_outcome: BellOutcome
    prob: float
    collapsed: StateVector | None
    alice_corr: CorrectionOp
    bob_corr: CorrectionOp
    alice_final: StateVector | None
    bob_final: StateVector | None
    fid_alice: float | None
    fid_bob: float | None

    def to_json_dict(self) -> dict:
        return {
            "branch_index": self.branch_index,
            "alice_outcome": self.alice_outcome.value,
            "bob_outcome": self.bob_outcome.value,
            "prob": self.prob,
            "alice_corr": self.alice_corr.value,
            "bob_corr": self.bob_corr.value,
            "fid_alice": self.fid_alice,
            "fid_bob": self.fid_bob,
        }


def _corrected_branch_state(
    a: CoeffPair,
    b: CoeffPair,
    ao: BellOutcome,
    bo: BellOutcome,
    channel: ChannelState | None,
    a_label: QubitLabel,
    b_label: QubitLabel,
):
    """Shared branch pipeline: compose, project both pairs, CZ, correct.

    Returns (prob, collapsed on (B1, A2), corrected state, alice_op, bob_op).
    """
    ch = channel if channel is not None else build_cluster_channel()
    joint = compose_joint(
        InformationState.single(a, a_label), InformationState.single(b, b_label), ch
    )
    p_alice, after_alice = bell_project(joint, a_label, "A1", ao)
    p_bob, collapsed = bell_project(after_alice, b_label, "B2", bo)
    state = apply_cz(collapsed, "A2", "B1")
    alice_op, bob_op = correction_lookup(ao, bo)
    state = alice_op.apply(state, "A2")
    state = bob_op.apply(state, "B1")
    return p_alice * p_bob, collapsed, state, alice_op, bob_op


def run_bqt_branch(
    a: CoeffPair,
    b: CoeffPair,
    ao: BellOutcome,
    bo: BellOutcome,
    channel: ChannelState | None = None,
    a_label: QubitLabel = "a",
    b_label: QubitLabel = "b",
) -> BranchRecord:
    """Execute one measurement branch end to end (honest parties).

    After the controlled-phase and the looked-up corrections, Alice's A2
    must carry Bob's coefficients and Bob's B1 Alice's.
    """
    prob, collapsed, state, alice_op, bob_op = _corrected_branch_state(
        a, b, ao, bo, channel, a_label, b_label
    )
    fid_alice = subset_fidelity(state, ["A2"], np.array(b))
    fid_bob = subset_fidelity(state, ["B1"], np.array(a))
    split = try_factor(state, "B1")
    bob_final, alice_final = split if split is not None else (None, None)
    return BranchRecord(
        branch_index=branch_index(ao, bo),
        alice_outcome=ao,
        bob_outcome=bo,
        prob=prob,
        collapsed=collapsed,
        alice_corr=alice_op,
        bob_corr=bob_op,
        alice_final=alice_final,
        bob_final=bob_final,
        fid_alice=fid_alice,
        fid_bob=fid_bob,
    )


def _warn_if_degraded(channel: ChannelState | None) -> None:
    if channel is None:
        return
    verdict = channel.verdict()
    if not verdict.ok:
        warnings.warn(
            f"channel has Schmidt rank {verdict.schmidt_rank} across the party cut "
            f"(need {REQUIRED_SCHMIDT_RANK}); the exchange cannot reach fidelity 1",
            DegradedChannelWarning,
            stacklevel=3,
        )


def enumerate_branches(
    a: CoeffPair, b: CoeffPair, channel: ChannelState | None = None
) -> list[BranchRecord]:
    """All sixteen branches in index order; probabilities sum to 1.

    Branches of (numerically) zero probability are recorded with prob 0 and
    no states or fidelities.
    """
    _warn_if_degraded(channel)
    records = []
    for ao, bo in BRANCH_PAIRS:
        try:
            records.append(run_bqt_branch(a, b, ao, bo, channel))
        except ImpossibleOutcome:
            records.append(
                BranchRecord(
                    branch_index=branch_index(ao, bo),
                    alice_outcome=ao,
                    bob_outcome=bo,
                    prob=0.0,
                    collapsed=None,
                    alice_corr=correction_lookup(ao, bo)[0],
                    bob_corr=correction_lookup(ao, bo)[1],
                    alice_final=None,
                    bob_final=None,
                    fid_alice=None,
                    fid_bob=None,
                )
            )
    return records


def search_corrections(
    a: CoeffPair, b: CoeffPair, tol: float = 1e-10, channel: ChannelState | None = None
) -> dict[tuple[BellOutcome, BellOutcome], list[tuple[CorrectionOp, CorrectionOp]]]:
    """Exhaustively find, per branch, every correction pair that restores
    both sides to fidelity 1, cheapest (fewest Pauli factors) first.

    Independent of ``correction_lookup``: candidates are judged purely by
    simulating the corrected outputs, so this regenerates the correction
    map from scratch and disambiguates the operator order inside ZX.
    """
    ch = channel if channel is not None else build_cluster_channel()
    found: dict[tuple[BellOutcome, BellOutcome], list[tuple[CorrectionOp, CorrectionOp]]] = {}
    for ao, bo in BRANCH_PAIRS:
        joint = compose_joint(
            InformationState.single(a, "a"), InformationState.single(b, "b"), ch
        )
        _, after_alice = bell_project(joint, "a", "A1", ao)
        _, collapsed = bell_project(after_alice, "b", "B2", bo)
        base = apply_cz(collapsed, "A2", "B1")
        passing = []
        for alice_op in CorrectionOp:
            for bob_op in CorrectionOp:
                state = bob_op.apply(alice_op.apply(base, "A2"), "B1")
                fid_a = subset_fidelity(state, ["A2"], np.array(b))
                fid_b = subset_fidelity(state, ["B1"], np.array(a))
                if fid_a >= 1 - tol and fid_b >= 1 - tol:
                    passing.append((alice_op, bob_op))
        passing.sort(key=lambda pair: (pair[0].gate_count + pair[1].gate_count,
                                       pair[0].value, pair[1].value))
        found[(ao, bo)] = passing
    return found


def regenerated_table_matches(
    a: CoeffPair, b: CoeffPair, tol: float = 1e-10
) -> bool:
    """True iff the exhaustive search yields exactly the built-in correction
    map, uniquely, on every branch."""
    found = search_corrections(a, b, tol)
    for pair, candidates in found.items():
        if len(candidates) != 1 or candidates[0] != correction_lookup(*pair):
            return False
    return True


def ghz_compress(s: "InformationState | StateVector") -> tuple[InformationState, StateVector]:
    """Fold an a0|0...0> + a1|1...1> register onto its first qubit.

    Applies a CNOT from the first qubit to each of the others.  Returns the
    single-qubit carrier and the leftover |0...0> register.  Raises
    NotGHZForm if the input is not of that form within tolerance.
    """
    sv = s.to_statevector() if isinstance(s, InformationState) else s
    if sv.n_qubits < 2:
        raise ValueError("compression needs at least two qubits")
    control = sv.labels[0]
    for target in sv.labels[1:]:
        sv = apply_cnot(sv, control, target)
    amps = sv.amplitudes
    top = amps.shape[0] >> 1
    leak = np.abs(amps).copy()
    leak[0] = leak[top] = 0.0
    if leak.max() > GHZ_TOL:
        raise NotGHZForm(
            f"residual weight {leak.max():.3e} outside the |0...0>/|1...1> pair"
        )
    single = InformationState(amps[0], amps[top], (control,))
    return single, StateVector.zeros(sv.labels[1:])


def ghz_reincarnate(
    single: StateVector,
    held: tuple[QubitLabel, ...] | list[QubitLabel],
    target_count: int,
    aux_prefix: str = "X",
) -> StateVector:
    """Fan a received qubit out to target_count qubits of GHZ form.

    ``held`` are local leftover qubits, assumed reset to |0> (compression
    guarantees this); only the first target_count - 1 are used, and
    max(0, target_count - 1 - len(held)) fresh |0> qubits named
    ``aux_prefix``1, 2, ... are introduced for the remainder.
    """
    if single.n_qubits != 1:
        raise ValueError("the received carrier must be a single qubit")
    if target_count < 1:
        raise ValueError("target_count must be >= 1")
    used = list(held)[: target_count - 1]
    fresh = [f"{aux_prefix}{i}" for i in range(1, target_count - len(used))]
    targets = used + fresh
    if not targets:
        return single
    state = tensor(single, StateVector.zeros(targets))
    for target in targets:
        state = apply_cnot(state, single.labels[0], target)
    return state


def _compressed_input(
    coeffs: CoeffPair, count: int, prefix: str
) -> tuple[CoeffPair, tuple[QubitLabel, ...], QubitLabel]:
    """Materialize an input of ``count`` qubits and fold it to one carrier."""
    labels = tuple(f"{prefix}{i}" for i in range(1, count + 1))
    if count == 1:
        return coeffs, (), labels[0]
    single, residual = ghz_compress(InformationState(coeffs[0], coeffs[1], labels))
    return (single.a0, single.a1), residual.labels, labels[0]


def run_multiqubit_branch(
    m: int,
    n: int,
    a: CoeffPair,
    b: CoeffPair,
    ao: BellOutcome,
    bo: BellOutcome,
    channel: ChannelState | None = None,
) -> BranchRecord:
    """One branch of the m-to-n exchange: compress, swap, rebuild.

    Alice sends an m-qubit carrier of ``a`` and rebuilds an n-qubit state
    from A2; Bob sends an n-qubit carrier of ``b`` and rebuilds an m-qubit
    state from B1.  Fresh qubits are labeled X* on Bob's side and Y* on
    Alice's.
    """
    a_eff, resid_a, a_label = _compressed_input(a, m, "alpha")
    b_eff, resid_b, b_label = _compressed_input(b, n, "beta")
    prob, collapsed, state, alice_op, bob_op = _corrected_branch_state(
        a_eff, b_eff, ao, bo, channel, a_label, b_label
    )

    bob_targets = list(resid_b)[: m - 1]
    bob_targets += [f"X{i}" for i in range(1, m - len(bob_targets))]
    alice_targets = list(resid_a)[: n - 1]
    alice_targets += [f"Y{i}" for i in range(1, n - len(alice_targets))]
    new = bob_targets + alice_targets
    if new:
        state = tensor(state, StateVector.zeros(new))
    for target in bob_targets:
        state = apply_cnot(state, "B1", target)
    for target in alice_targets:
        state = apply_cnot(state, "A2", target)

    bob_register = ["B1"] + bob_targets
    alice_register = ["A2"] + alice_targets
    fid_bob = subset_fidelity(state, bob_register, ghz_amplitudes(a[0], a[1], m))
    fid_alice = subset_fidelity(state, alice_register, ghz_amplitudes(b[0], b[1], n))
    split = try_factor(state, bob_register)
    bob_final, alice_final = split if split is not None else (None, None)
    if alice_final is not None and tuple(alice_final.labels) != tuple(alice_register):
        alice_final = alice_final.permuted(alice_register)
    return BranchRecord(
        branch_index=branch_index(ao, bo),
        alice_outcome=ao,
        bob_outcome=bo,
        prob=prob,
        collapsed=collapsed,
        alice_corr=alice_op,
        bob_corr=bob_op,
        alice_final=alice_final,
        bob_final=bob_final,
        fid_alice=fid_alice,
        fid_bob=fid_bob,
    )


def enumerate_branches_multiqubit(
    m: int, n: int, a: CoeffPair, b: CoeffPair, channel: ChannelState | None = None
) -> list[BranchRecord]:
    """All sixteen branches of the m-to-n exchange, in index order."""
    _warn_if_degraded(channel)
    records = []
    for ao, bo in BRANCH_PAIRS:
        records.append(run_multiqubit_branch(m, n, a, b, ao, bo, channel))
    return records


def run_bqt(
    a: CoeffPair,
    b: CoeffPair,
    mode: str = "enumerate",
    seed: int = 0,
    channel: ChannelState | None = None,
):
    """Full single-qubit exchange.

    ``mode="enumerate"`` evaluates all sixteen branches; ``mode="sample"``
    draws one branch with the seeded generator.  Returns (transcript,
    records): a replayable session log plus the branch records.
    """
    return run_bqt_multiqubit(1, 1, a, b, mode=mode, seed=seed, channel=channel)


def run_bqt_multiqubit(
    m: int,
    n: int,
    a: CoeffPair,
    b: CoeffPair,
    mode: str = "enumerate",
    seed: int = 0,
    channel: ChannelState | None = None,
):
    """m-to-n exchange in enumerate or sample mode; see ``run_bqt``."""
    from . import harness  # imported here: the harness layers on this module

    if mode == "enumerate":
        transcript = harness.enumerate_protocol(a, b, m=m, n=n, channel=channel)
        if m == 1 and n == 1:
            records = enumerate_branches(a, b, channel)
        else:
            records = enumerate_branches_multiqubit(m, n, a, b, channel)
        return transcript, records
    if mode == "sample":
        transcript = harness.run_protocol(
            a, b, seed=seed, m=m, n=n, channel=channel
        )
        ao, bo = transcript.realized_outcomes()
        if m == 1 and n == 1:
            record = run_bqt_branch(a, b, ao, bo, channel)
        else:
            record = run_multiqubit_branch(m, n, a, b, ao, bo, channel)
        return transcript, [record]
    raise ValueError(f"mode must be 'enumerate' or 'sample', got {mode!r}")
