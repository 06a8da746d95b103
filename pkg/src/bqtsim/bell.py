"""Bell basis, projective Bell-state measurement, and seeded sampling.

Naming convention used throughout this package (note: many texts swap the
psi/phi names relative to this):

    psi+ = (|00> + |11>)/sqrt(2)      phi+ = (|01> + |10>)/sqrt(2)
    psi- = (|00> - |11>)/sqrt(2)      phi- = (|01> - |10>)/sqrt(2)

An outcome encodes to two classical bits: 00, 01, 10, 11 for psi+, psi-,
phi+, phi-.  The first qubit argument of a projection is the first ket slot
of the Bell state; the phi states are antisymmetric under slot swap, so
pair order matters for signs.

Sampling uses NumPy's PCG64 generator (``numpy.random.default_rng``), which
is platform-independent: the same seed reproduces the same outcomes
everywhere.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .errors import ImpossibleOutcome, SameQubit
from .statevector import QubitLabel, StateVector, _split_front

IMPOSSIBLE_TOL = 1e-14
_INV_SQRT2 = 1.0 / math.sqrt(2)


class BellOutcome(enum.Enum):
    PSI_PLUS = "psi+"
    PSI_MINUS = "psi-"
    PHI_PLUS = "phi+"
    PHI_MINUS = "phi-"

    @property
    def code(self) -> str:
        """Two-bit wire encoding."""
        return _CODES[self]

    @property
    def is_phi(self) -> bool:
        return self in (BellOutcome.PHI_PLUS, BellOutcome.PHI_MINUS)

    @property
    def is_minus(self) -> bool:
        return self in (BellOutcome.PSI_MINUS, BellOutcome.PHI_MINUS)

    @property
    def vector(self) -> np.ndarray:
        """Amplitudes over the (first, second) qubit pair, basis 00,01,10,11."""
        sign = -1.0 if self.is_minus else 1.0
        if self.is_phi:
            return np.array([0, 1, sign, 0], dtype=np.complex128) * _INV_SQRT2
        return np.array([1, 0, 0, sign], dtype=np.complex128) * _INV_SQRT2

    @classmethod
    def parse(cls, text: str) -> "BellOutcome":
        """Accepts either the name ("psi+") or the 2-bit code ("00")."""
        for outcome in cls:
            if text in (outcome.value, outcome.code):
                return outcome
        raise ValueError(f"not a Bell outcome: {text!r}")


BELL_ORDER = (
    BellOutcome.PSI_PLUS,
    BellOutcome.PSI_MINUS,
    BellOutcome.PHI_PLUS,
    BellOutcome.PHI_MINUS,
)
_CODES = {o: format(k, "02b") for k, o in enumerate(BELL_ORDER)}


def _project(sv: StateVector, qa: QubitLabel, qb: QubitLabel, o: BellOutcome):
    """Unnormalized remainder after projecting (qa, qb) onto ``o``."""
    if qa == qb:
        raise SameQubit(f"Bell projection on {qa!r} twice")
    mat = _split_front(sv, [qa, qb])
    rest = o.vector.conj() @ mat
    prob = float(np.real(np.vdot(rest, rest)))
    return prob, rest


def bell_project(
    sv: StateVector, qa: QubitLabel, qb: QubitLabel, o: BellOutcome
) -> tuple[float, StateVector]:
    """Probability of outcome ``o`` on pair (qa, qb) and the collapsed state.

    The measured qubits are removed from the register.  Raises
    ImpossibleOutcome if the probability is below ``IMPOSSIBLE_TOL``.
    """
    prob, rest = _project(sv, qa, qb, o)
    if prob < IMPOSSIBLE_TOL:
        raise ImpossibleOutcome(
            f"outcome {o.value} on ({qa}, {qb}) has probability {prob:.3e}"
        )
    remaining = tuple(l for l in sv.labels if l not in (qa, qb))
    return prob, StateVector(remaining, rest / math.sqrt(prob))


def bsm_enumerate(
    sv: StateVector, qa: QubitLabel, qb: QubitLabel
) -> list[tuple[BellOutcome, float, StateVector | None]]:
    """All four Bell outcomes on (qa, qb) with probabilities and collapses.

    Probabilities sum to 1; outcomes below ``IMPOSSIBLE_TOL`` carry no
    collapsed state.
    """
    remaining = tuple(l for l in sv.labels if l not in (qa, qb))
    results: list[tuple[BellOutcome, float, StateVector | None]] = []
    for o in BELL_ORDER:
        prob, rest = _project(sv, qa, qb, o)
        if prob < IMPOSSIBLE_TOL:
            results.append((o, prob, None))
        else:
            results.append((o, prob, StateVector(remaining, rest / math.sqrt(prob))))
    return results


def bsm_sample(
    sv: StateVector,
    qa: QubitLabel,
    qb: QubitLabel,
    rng_seed: int | np.random.Generator,
) -> tuple[BellOutcome, StateVector]:
    """Draw one Bell outcome from the Born distribution on (qa, qb).

    ``rng_seed`` may be an integer seed or an existing Generator whose
    stream should be consumed.  Identical seeds give identical outcomes.
    """
    rng = np.random.default_rng(rng_seed)
    branches = bsm_enumerate(sv, qa, qb)
    probs = np.array([p if c is not None else 0.0 for _, p, c in branches])
    probs = probs / probs.sum()
    pick = int(rng.choice(len(branches), p=probs))
    outcome, _, collapsed = branches[pick]
    assert collapsed is not None
    return outcome, collapsed
