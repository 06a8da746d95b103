"""Two-party orchestration: agents, classical messages, policies, transcripts.

A session drives the exchange as Alice and Bob would run it: both measure,
each decides whether to announce its result over the classical channel,
the nonlocal controlled-phase happens only if both consent, and each party
applies a correction only if it got the counterpart's message and is
willing.  A party left without the counterpart's message applies the
identity (it does not guess).  Dishonesty is modeled behavior, never an
error.

Every session produces a Transcript: an ordered, replayable event log
serialized as JSON lines under the schema "bqt-transcript/1".  Identical
inputs, policies and seed give byte-identical transcripts; sampling uses
NumPy's PCG64 generator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .bell import BELL_ORDER, BellOutcome, bsm_enumerate
from .engine import (
    BRANCH_PAIRS,
    ChannelState,
    CoeffPair,
    CorrectionOp,
    InformationState,
    PartyRole,
    _compressed_input,
    _warn_if_degraded,
    branch_index,
    build_cluster_channel,
    compose_joint,
    correction_lookup,
    ghz_amplitudes,
)
from .errors import ImpossibleOutcome
from .statevector import (
    StateVector,
    apply_cnot,
    apply_cz,
    dump_statevector,
    parse_statevector,
    subset_fidelity,
    tensor,
)

TRANSCRIPT_SCHEMA = "bqt-transcript/1"


@dataclass(frozen=True)
class CooperationPolicy:
    """What a party is willing to do; honest means all three."""

    participate_cz: bool = True
    send_message: bool = True
    apply_correction: bool = True

    @property
    def is_honest(self) -> bool:
        return self.participate_cz and self.send_message and self.apply_correction

    def to_json_dict(self) -> dict:
        return {
            "participate_cz": self.participate_cz,
            "send_message": self.send_message,
            "apply_correction": self.apply_correction,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "CooperationPolicy":
        return cls(d["participate_cz"], d["send_message"], d["apply_correction"])


HONEST = CooperationPolicy()

POLICY_PRESETS = {
    "honest": HONEST,
    "no-cz": CooperationPolicy(participate_cz=False),
    "no-msg": CooperationPolicy(send_message=False),
    "no-corr": CooperationPolicy(apply_correction=False),
}


@dataclass(frozen=True)
class ClassicalMessage:
    """One announcement of a Bell result: two classical bits."""

    sender: PartyRole
    seq: int
    code: str


@dataclass(frozen=True)
class TranscriptEvent:
    seq: int
    kind: str
    payload: dict


@dataclass
class Transcript:
    """Replayable log of one protocol run (or one enumerate sweep)."""

    seed: int | None
    mode: str
    m: int
    n: int
    inputs: dict
    policy_alice: CooperationPolicy
    policy_bob: CooperationPolicy
    channel_dump: str | None
    events: list[TranscriptEvent] = field(default_factory=list)

    def header(self) -> dict:
        return {
            "schema": TRANSCRIPT_SCHEMA,
            "seed": self.seed,
            "mode": self.mode,
            "m": self.m,
            "n": self.n,
            "inputs": self.inputs,
            "policy_alice": self.policy_alice.to_json_dict(),
            "policy_bob": self.policy_bob.to_json_dict(),
            "channel": "canonical" if self.channel_dump is None else {"dump": self.channel_dump},
        }

    def to_jsonl(self) -> str:
        lines = [_json_line(self.header())]
        for ev in self.events:
            lines.append(_json_line({"seq": ev.seq, "event": ev.kind, "payload": ev.payload}))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> "Transcript":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        head = json.loads(lines[0])
        if head.get("schema") != TRANSCRIPT_SCHEMA:
            raise ValueError(f"unsupported transcript schema: {head.get('schema')!r}")
        channel = head["channel"]
        t = cls(
            seed=head["seed"],
            mode=head["mode"],
            m=head["m"],
            n=head["n"],
            inputs=head["inputs"],
            policy_alice=CooperationPolicy.from_json_dict(head["policy_alice"]),
            policy_bob=CooperationPolicy.from_json_dict(head["policy_bob"]),
            channel_dump=None if channel == "canonical" else channel["dump"],
        )
        for ln in lines[1:]:
            d = json.loads(ln)
            t.events.append(TranscriptEvent(d["seq"], d["event"], d["payload"]))
        return t

    def events_of(self, kind: str) -> list[TranscriptEvent]:
        return [ev for ev in self.events if ev.kind == kind]

    def realized_outcomes(self) -> tuple[BellOutcome, BellOutcome]:
        """(Alice's, Bob's) measured outcome of a sampled session."""
        bsm = self.events_of("BSMPerformed")
        by_party = {ev.payload["party"]: ev.payload["outcome"] for ev in bsm}
        return BellOutcome.parse(by_party["alice"]), BellOutcome.parse(by_party["bob"])

    def final_fidelities(self) -> tuple[float, float]:
        fin = self.events_of("Finalized")[-1]
        return fin.payload["fid_alice"], fin.payload["fid_bob"]

    def input_coeffs(self) -> tuple[CoeffPair, CoeffPair]:
        c = self.inputs
        return (
            (complex(*c["a0"]), complex(*c["a1"])),
            (complex(*c["b0"]), complex(*c["b1"])),
        )


def _json_line(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


class _EventLog:
    def __init__(self):
        self.events: list[TranscriptEvent] = []
        self._seq = 0

    def add(self, kind: str, extra: dict | None = None, **payload) -> int:
        self._seq += 1
        if extra:
            payload = {**extra, **payload}
        self.events.append(TranscriptEvent(self._seq, kind, payload))
        return self._seq


def _coeff_digest(a: CoeffPair, b: CoeffPair) -> dict:
    return {
        "a0": [a[0].real, a[0].imag],
        "a1": [a[1].real, a[1].imag],
        "b0": [b[0].real, b[0].imag],
        "b1": [b[1].real, b[1].imag],
    }


def _pick_outcome(branches, forced: BellOutcome | None, rng: np.random.Generator | None):
    """Choose a measurement outcome: forced (enumerate) or Born-sampled."""
    if forced is not None:
        for outcome, prob, collapsed in branches:
            if outcome is forced:
                if collapsed is None:
                    raise ImpossibleOutcome(f"branch {forced.value} has zero probability")
                return outcome, prob, collapsed
        raise AssertionError("unreachable: forced outcome not enumerated")
    assert rng is not None
    probs = np.array([p if c is not None else 0.0 for _, p, c in branches])
    pick = int(rng.choice(len(branches), p=probs / probs.sum()))
    outcome, prob, collapsed = branches[pick]
    return outcome, prob, collapsed


def _session(
    a: CoeffPair,
    b: CoeffPair,
    m: int,
    n: int,
    policy_a: CooperationPolicy,
    policy_b: CooperationPolicy,
    channel: ChannelState | None,
    log: _EventLog,
    rng: np.random.Generator | None = None,
    force: tuple[BellOutcome, BellOutcome] | None = None,
    extra: dict | None = None,
) -> tuple[BellOutcome, BellOutcome, float, float, float]:
    """One exchange. Returns (alice outcome, bob outcome, joint prob, fidelities)."""
    ch = channel if channel is not None else build_cluster_channel()
    verdict = ch.verdict()
    _warn_if_degraded(channel)
    log.add(
        "ChannelPrepared",
        extra,
        labels=list(ch.state.labels),
        schmidt_rank=verdict.schmidt_rank,
        entropy_bits=verdict.entropy_bits,
        verdict="ok" if verdict.ok else "degraded",
    )

    # local compression happens before anything crosses the channel
    a_eff, resid_a, a_label = _compressed_input(a, m, "alpha")
    b_eff, resid_b, b_label = _compressed_input(b, n, "beta")
    state = compose_joint(
        InformationState.single(a_eff, a_label),
        InformationState.single(b_eff, b_label),
        ch,
    )

    ao, p_alice, state = _pick_outcome(
        bsm_enumerate(state, a_label, "A1"), force[0] if force else None, rng
    )
    log.add("BSMPerformed", extra, party="alice", outcome=ao.value, prob=p_alice)
    bo, p_bob, state = _pick_outcome(
        bsm_enumerate(state, b_label, "B2"), force[1] if force else None, rng
    )
    log.add("BSMPerformed", extra, party="bob", outcome=bo.value, prob=p_bob)

    alice_knows = policy_b.send_message
    bob_knows = policy_a.send_message
    if policy_a.send_message:
        seq = log.add("MessageSent", extra, sender="alice", code=ao.code)
        msg = ClassicalMessage(PartyRole.ALICE, seq, ao.code)
        log.add("MessageReceived", extra, receiver="bob", sender="alice", code=msg.code)
    if policy_b.send_message:
        seq = log.add("MessageSent", extra, sender="bob", code=bo.code)
        msg = ClassicalMessage(PartyRole.BOB, seq, bo.code)
        log.add("MessageReceived", extra, receiver="alice", sender="bob", code=msg.code)

    if policy_a.participate_cz and policy_b.participate_cz:
        state = apply_cz(state, "A2", "B1")
        log.add("CZApplied", extra, control="A2", target="B1")
    else:
        declined = [
            name
            for name, pol in (("alice", policy_a), ("bob", policy_b))
            if not pol.participate_cz
        ]
        log.add("CZSkipped", extra, declined=declined)

    alice_op, bob_op = correction_lookup(ao, bo)
    if not (policy_a.apply_correction and alice_knows):
        alice_op = CorrectionOp.I
    if not (policy_b.apply_correction and bob_knows):
        bob_op = CorrectionOp.I
    state = alice_op.apply(state, "A2")
    log.add("CorrectionApplied", extra, party="alice", qubit="A2", op=alice_op.value)
    state = bob_op.apply(state, "B1")
    log.add("CorrectionApplied", extra, party="bob", qubit="B1", op=bob_op.value)

    # each side fans its received qubit out to the requested width
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

    fid_bob = subset_fidelity(state, ["B1"] + bob_targets, ghz_amplitudes(a[0], a[1], m))
    fid_alice = subset_fidelity(
        state, ["A2"] + alice_targets, ghz_amplitudes(b[0], b[1], n)
    )
    log.add("Finalized", extra, fid_alice=fid_alice, fid_bob=fid_bob)
    return ao, bo, p_alice * p_bob, fid_alice, fid_bob


def run_protocol(
    a: CoeffPair,
    b: CoeffPair,
    policy_a: CooperationPolicy = HONEST,
    policy_b: CooperationPolicy = HONEST,
    seed: int = 0,
    m: int = 1,
    n: int = 1,
    channel: ChannelState | None = None,
) -> Transcript:
    """Run one sampled session and return its transcript."""
    rng = np.random.default_rng(seed)
    log = _EventLog()
    _session(a, b, m, n, policy_a, policy_b, channel, log, rng=rng)
    return Transcript(
        seed=seed,
        mode="sample",
        m=m,
        n=n,
        inputs=_coeff_digest(a, b),
        policy_alice=policy_a,
        policy_bob=policy_b,
        channel_dump=None if channel is None else dump_statevector(channel.state),
        events=log.events,
    )


def enumerate_protocol(
    a: CoeffPair,
    b: CoeffPair,
    m: int = 1,
    n: int = 1,
    channel: ChannelState | None = None,
    policy_a: CooperationPolicy = HONEST,
    policy_b: CooperationPolicy = HONEST,
) -> Transcript:
    """Deterministic sweep over all sixteen branches in one transcript.

    Each event carries the branch number it belongs to.  Branches of zero
    probability (possible only on degraded channels) are left out.
    """
    log = _EventLog()
    for ao, bo in BRANCH_PAIRS:
        try:
            _session(
                a, b, m, n, policy_a, policy_b, channel, log,
                force=(ao, bo), extra={"branch": branch_index(ao, bo)},
            )
        except ImpossibleOutcome:
            continue
    return Transcript(
        seed=None,
        mode="enumerate",
        m=m,
        n=n,
        inputs=_coeff_digest(a, b),
        policy_alice=policy_a,
        policy_bob=policy_b,
        channel_dump=None if channel is None else dump_statevector(channel.state),
        events=log.events,
    )


def replay(t: Transcript) -> Transcript:
    """Re-run a transcript from its header; the result must reproduce it."""
    channel = (
        None
        if t.channel_dump is None
        else ChannelState.from_statevector(parse_statevector(t.channel_dump))
    )
    a, b = t.input_coeffs()
    if t.mode == "sample":
        return run_protocol(
            a, b, t.policy_alice, t.policy_bob, seed=t.seed, m=t.m, n=t.n, channel=channel
        )
    return enumerate_protocol(
        a, b, m=t.m, n=t.n, channel=channel, policy_a=t.policy_alice, policy_b=t.policy_bob
    )


def random_coefficients(
    rng: np.random.Generator, basis_margin: float = 1e-6
) -> CoeffPair:
    """A normalized random coefficient pair, away from the basis states.

    Real and imaginary parts are standard normal, which makes the
    normalized pair uniform on the state space; draws within
    ``basis_margin`` of |0> or |1> are rejected so that "generic input"
    claims are actually exercised.
    """
    while True:
        raw = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        raw /= np.linalg.norm(raw)
        if min(abs(raw[0]), abs(raw[1])) >= basis_margin:
            return complex(raw[0]), complex(raw[1])


@dataclass(frozen=True)
class FidelityStats:
    mean_alice: float
    mean_bob: float
    std_alice: float
    std_bob: float
    trials: int


def average_fidelity(
    policy_a: CooperationPolicy,
    policy_b: CooperationPolicy,
    trials: int,
    seed: int = 0,
    m: int = 1,
    n: int = 1,
    channel: ChannelState | None = None,
) -> FidelityStats:
    """Monte Carlo mean final fidelities over random inputs and branches.

    Deterministic for a given seed; one PCG64 stream drives both the input
    draws and the measurement sampling.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    fa = np.empty(trials)
    fb = np.empty(trials)
    for i in range(trials):
        a = random_coefficients(rng)
        b = random_coefficients(rng)
        log = _EventLog()
        _, _, _, fid_alice, fid_bob = _session(
            a, b, m, n, policy_a, policy_b, channel, log, rng=rng
        )
        fa[i] = fid_alice
        fb[i] = fid_bob
    return FidelityStats(
        mean_alice=float(fa.mean()),
        mean_bob=float(fb.mean()),
        std_alice=float(fa.std()),
        std_bob=float(fb.std()),
        trials=trials,
    )
