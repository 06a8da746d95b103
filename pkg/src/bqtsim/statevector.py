"""Dense statevector simulation over named qubits.

Bit convention: the first entry of ``StateVector.labels`` is the MOST
significant bit of the amplitude index, so a basis bitstring reads left to
right in label order.  Amplitude dumps can therefore be checked against
ket strings directly.

States are values: every operation returns a new ``StateVector`` and the
amplitude buffer is frozen after construction, so instances are safe to
share across threads.  Global phase is preserved by all operations; only
``fidelity``, ``entanglement_entropy`` and ``schmidt_rank`` are phase-blind.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BadSubset,
    DuplicateLabel,
    LabelMismatch,
    NotNormalized,
    SameQubit,
    UnknownLabel,
)

QubitLabel = str
DensityMatrix = np.ndarray

NORM_TOL = 1e-10
ENTROPY_EIGVAL_FLOOR = 1e-12
SCHMIDT_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class StateVector:
    """Pure state of ``len(labels)`` qubits as 2**n complex amplitudes."""

    labels: tuple[QubitLabel, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        labels = tuple(self.labels)
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if len(set(labels)) != len(labels):
            raise DuplicateLabel(f"repeated qubit label in {labels}")
        if amps.shape != (2 ** len(labels),):
            raise ValueError(
                f"expected {2 ** len(labels)} amplitudes for {len(labels)} "
                f"qubits, got {amps.shape[0]}"
            )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOL:
            raise NotNormalized(f"state norm {norm!r} is not 1 within {NORM_TOL}")
        amps.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_qubits(self) -> int:
        return len(self.labels)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def axis(self, label: QubitLabel) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownLabel(f"qubit {label!r} not in register {self.labels}") from None

    def amplitude(self, bits: str) -> complex:
        """Amplitude of the basis ket written in label order, e.g. "0011"."""
        if len(bits) != self.n_qubits or set(bits) - {"0", "1"}:
            raise ValueError(f"bad bitstring {bits!r} for {self.n_qubits} qubits")
        return complex(self.amplitudes[int(bits, 2)]) if bits else complex(self.amplitudes[0])

    def permuted(self, new_order: Sequence[QubitLabel]) -> "StateVector":
        """Same state with qubit labels reordered to ``new_order``."""
        if set(new_order) != set(self.labels) or len(new_order) != self.n_qubits:
            raise LabelMismatch(f"{tuple(new_order)} is not a permutation of {self.labels}")
        if tuple(new_order) == self.labels:
            return self
        perm = [self.axis(q) for q in new_order]
        tensor_form = self.amplitudes.reshape([2] * self.n_qubits)
        return StateVector(tuple(new_order), tensor_form.transpose(perm).reshape(-1))

    @classmethod
    def basis(cls, labels: Sequence[QubitLabel], bits: str) -> "StateVector":
        amps = np.zeros(2 ** len(labels), dtype=np.complex128)
        amps[int(bits, 2) if bits else 0] = 1.0
        return cls(tuple(labels), amps)

    @classmethod
    def single(cls, label: QubitLabel, c0: complex, c1: complex) -> "StateVector":
        return cls((label,), np.array([c0, c1], dtype=np.complex128))

    @classmethod
    def zeros(cls, labels: Sequence[QubitLabel]) -> "StateVector":
        return cls.basis(labels, "0" * len(labels))


@dataclass(frozen=True)
class Gate1Q:
    """Single-qubit gate; ``name`` is I, X, Z, H or "custom"."""

    name: str
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128).reshape(2, 2)
        if np.max(np.abs(m.conj().T @ m - np.eye(2))) > NORM_TOL:
            raise ValueError(f"gate {self.name!r} is not unitary")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


I = Gate1Q("I", np.eye(2))
X = Gate1Q("X", np.array([[0, 1], [1, 0]]))
Z = Gate1Q("Z", np.array([[1, 0], [0, -1]]))
H = Gate1Q("H", np.array([[1, 1], [1, -1]]) / math.sqrt(2))


def tensor(left: StateVector, right: StateVector) -> StateVector:
    """Kronecker product; left labels become the high-order bits."""
    overlap = set(left.labels) & set(right.labels)
    if overlap:
        raise DuplicateLabel(f"labels {sorted(overlap)} present on both sides")
    return StateVector(left.labels + right.labels, np.kron(left.amplitudes, right.amplitudes))


def apply_1q(sv: StateVector, q: QubitLabel, g: Gate1Q) -> StateVector:
    k = sv.axis(q)
    tensor_form = sv.amplitudes.reshape([2] * sv.n_qubits)
    out = np.tensordot(g.matrix, tensor_form, axes=([1], [k]))
    out = np.moveaxis(out, 0, k)
    return StateVector(sv.labels, out.reshape(-1))


def _bit_positions(sv: StateVector, q1: QubitLabel, q2: QubitLabel) -> tuple[int, int]:
    if q1 == q2:
        raise SameQubit(f"two-qubit operation on {q1!r} twice")
    n = sv.n_qubits
    return n - 1 - sv.axis(q1), n - 1 - sv.axis(q2)


def apply_cnot(sv: StateVector, control: QubitLabel, target: QubitLabel) -> StateVector:
    c, t = _bit_positions(sv, control, target)
    idx = np.arange(sv.dim)
    src = np.where((idx >> c) & 1 == 1, idx ^ (1 << t), idx)
    return StateVector(sv.labels, sv.amplitudes[src])


def apply_cz(sv: StateVector, q1: QubitLabel, q2: QubitLabel) -> StateVector:
    """Controlled phase: |11> -> -|11>, symmetric in its two qubits."""
    p1, p2 = _bit_positions(sv, q1, q2)
    idx = np.arange(sv.dim)
    both = ((idx >> p1) & 1) & ((idx >> p2) & 1)
    amps = sv.amplitudes.copy()
    amps[both == 1] *= -1
    return StateVector(sv.labels, amps)


def fidelity(x: StateVector, y: StateVector) -> float:
    """|<x|y>|^2 after aligning label order; invariant under global phase."""
    if set(x.labels) != set(y.labels):
        raise LabelMismatch(f"label sets differ: {x.labels} vs {y.labels}")
    y_aligned = y.permuted(x.labels)
    return float(abs(np.vdot(x.amplitudes, y_aligned.amplitudes)) ** 2)


def _split_front(sv: StateVector, front: Sequence[QubitLabel]) -> np.ndarray:
    """Amplitudes reshaped to (2**len(front), rest) with ``front`` axes leading."""
    axes = [sv.axis(q) for q in front]
    rest = [i for i in range(sv.n_qubits) if i not in axes]
    tensor_form = sv.amplitudes.reshape([2] * sv.n_qubits)
    return tensor_form.transpose(axes + rest).reshape(2 ** len(front), -1)


def _check_cut(sv: StateVector, keep: Iterable[QubitLabel]) -> list[QubitLabel]:
    keep = set(keep)
    if not keep or not keep <= set(sv.labels) or keep == set(sv.labels):
        raise BadSubset(f"{sorted(keep)} is not a proper nonempty subset of {sv.labels}")
    return [q for q in sv.labels if q in keep]


def reduced_density(sv: StateVector, keep: Iterable[QubitLabel]) -> DensityMatrix:
    """Partial trace onto ``keep``; basis ordered as the labels appear in sv."""
    kept = _check_cut(sv, keep)
    mat = _split_front(sv, kept)
    return mat @ mat.conj().T


def entanglement_entropy(sv: StateVector, cut: Iterable[QubitLabel]) -> float:
    """Von Neumann entropy in bits across ``cut`` | complement."""
    eigvals = np.linalg.eigvalsh(reduced_density(sv, cut))
    eigvals = eigvals[eigvals > ENTROPY_EIGVAL_FLOOR]
    return float(-np.sum(eigvals * np.log2(eigvals)))


def schmidt_rank(sv: StateVector, cut: Iterable[QubitLabel], tol: float = SCHMIDT_TOL) -> int:
    eigvals = np.linalg.eigvalsh(reduced_density(sv, cut))
    return int(np.sum(eigvals > tol))


def subset_fidelity(sv: StateVector, subset: Sequence[QubitLabel], ref: np.ndarray) -> float:
    """<ref| rho_subset |ref> with ``subset`` giving the basis order of ref.

    Equals ``fidelity`` against the extracted factor when the subset is in a
    pure product with the rest; still meaningful (a mixed-state fidelity)
    when it is entangled with the rest.
    """
    ref = np.asarray(ref, dtype=np.complex128).reshape(-1)
    if ref.shape[0] != 2 ** len(subset):
        raise ValueError("reference dimension does not match subset size")
    if set(subset) == set(sv.labels):
        return fidelity(sv, StateVector(tuple(subset), ref))
    mat = _split_front(sv, list(subset))
    overlap = ref.conj() @ mat
    return float(np.real(np.vdot(overlap, overlap)))


def try_factor(
    sv: StateVector, part: QubitLabel | Sequence[QubitLabel], tol: float = SCHMIDT_TOL
) -> tuple[StateVector, StateVector] | None:
    """Split ``sv`` into (part, rest) if that bipartition is a product.

    Returns ``(part_state, rest_state)`` or None if the cut is entangled
    beyond ``tol``.  Each factor is unit norm; the phase split between the
    two factors is arbitrary.  Uses a pivoted rank-1 check, so the result
    is plain deterministic arithmetic (no SVD).
    """
    part_labels = [part] if isinstance(part, str) else list(part)
    rest_labels = tuple(l for l in sv.labels if l not in part_labels)
    if not part_labels or not rest_labels or len(set(part_labels)) != len(part_labels):
        raise BadSubset(f"{part_labels} is not a proper nonempty subset of {sv.labels}")
    mat = _split_front(sv, part_labels)
    pivot_flat = int(np.argmax(np.abs(mat)))
    i, j = divmod(pivot_flat, mat.shape[1])
    col = mat[:, j]
    row = mat[i, :]
    recon = np.outer(col, row) / mat[i, j]
    if np.max(np.abs(mat - recon)) > tol:
        return None
    part_state = StateVector(tuple(part_labels), col / np.linalg.norm(col))
    rest = StateVector(rest_labels, row / np.linalg.norm(row))
    return part_state, rest


def dump_statevector(sv: StateVector) -> str:
    """Text dump: header with labels, one "BITSTRING RE IM" line per nonzero
    amplitude, 17 significant digits."""
    lines = ["# labels: " + " ".join(sv.labels)]
    for idx, amp in enumerate(sv.amplitudes):
        if amp == 0:
            continue
        bits = format(idx, f"0{sv.n_qubits}b") if sv.n_qubits else ""
        lines.append(f"{bits} {amp.real:.17g} {amp.imag:.17g}")
    return "\n".join(lines) + "\n"


def parse_statevector(text: str) -> StateVector:
    """Inverse of :func:`dump_statevector`; validates normalization."""
    labels: tuple[str, ...] | None = None
    entries: list[tuple[int, complex]] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if body.startswith("labels:"):
                labels = tuple(body[len("labels:"):].split())
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"bad amplitude line: {raw!r}")
        bits, re_s, im_s = parts
        entries.append((int(bits, 2), complex(float(re_s), float(im_s))))
    if labels is None:
        raise ValueError("missing '# labels:' header")
    amps = np.zeros(2 ** len(labels), dtype=np.complex128)
    for idx, value in entries:
        if idx >= amps.shape[0]:
            raise ValueError(f"bitstring index {idx} out of range for {len(labels)} qubits")
        amps[idx] = value
    return StateVector(labels, amps)
