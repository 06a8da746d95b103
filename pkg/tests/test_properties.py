"""Invariant checks over random states via hypothesis."""

import math

import numpy as np
from hypothesis import assume, given, settings, strategies as st

import bqtsim.statevector as qs
from bqtsim.bell import bsm_enumerate
from bqtsim.statevector import (
    StateVector,
    apply_1q,
    apply_cnot,
    apply_cz,
    entanglement_entropy,
    fidelity,
    reduced_density,
)

finite = st.floats(-1, 1, allow_nan=False, allow_infinity=False)


@st.composite
def states(draw, min_qubits=1, max_qubits=4):
    n = draw(st.integers(min_qubits, max_qubits))
    dim = 2**n
    re = draw(st.lists(finite, min_size=dim, max_size=dim))
    im = draw(st.lists(finite, min_size=dim, max_size=dim))
    amps = np.array(re) + 1j * np.array(im)
    norm = np.linalg.norm(amps)
    assume(norm > 1e-2)
    return StateVector(tuple(f"q{i}" for i in range(n)), amps / norm)


@st.composite
def unitary_gates(draw):
    which = draw(st.integers(0, 4))
    if which < 4:
        return (qs.I, qs.X, qs.Z, qs.H)[which]
    theta = draw(st.floats(0, 2 * math.pi, allow_nan=False))
    phi = draw(st.floats(0, 2 * math.pi, allow_nan=False))
    matrix = np.array(
        [
            [math.cos(theta), -math.sin(theta) * np.exp(-1j * phi)],
            [math.sin(theta) * np.exp(1j * phi), math.cos(theta)],
        ]
    )
    return qs.Gate1Q("custom", matrix)


@given(states(), unitary_gates(), st.integers(0, 3))
@settings(deadline=None)
def test_gates_preserve_norm(sv, gate, pick):
    q = sv.labels[pick % sv.n_qubits]
    out = apply_1q(sv, q, gate)
    assert abs(np.linalg.norm(out.amplitudes) - 1) < 1e-10


@given(states(min_qubits=2), st.integers(0, 5))
@settings(deadline=None)
def test_cz_symmetric_exactly(sv, pick):
    q1 = sv.labels[pick % sv.n_qubits]
    q2 = sv.labels[(pick + 1) % sv.n_qubits]
    np.testing.assert_array_equal(
        apply_cz(sv, q1, q2).amplitudes, apply_cz(sv, q2, q1).amplitudes
    )


@given(states(min_qubits=2), st.integers(0, 5))
@settings(deadline=None)
def test_involutions(sv, pick):
    q1 = sv.labels[pick % sv.n_qubits]
    q2 = sv.labels[(pick + 1) % sv.n_qubits]
    twice_cnot = apply_cnot(apply_cnot(sv, q1, q2), q1, q2)
    np.testing.assert_allclose(twice_cnot.amplitudes, sv.amplitudes, atol=1e-12)
    for gate in (qs.X, qs.Z):
        twice = apply_1q(apply_1q(sv, q1, gate), q1, gate)
        np.testing.assert_allclose(twice.amplitudes, sv.amplitudes, atol=1e-12)


@given(states(min_qubits=2), st.integers(1, 3))
@settings(deadline=None)
def test_entropy_symmetric_across_complementary_cuts(sv, k):
    cut = set(sv.labels[: k % sv.n_qubits or 1])
    complement = set(sv.labels) - cut
    assume(complement)
    s1 = entanglement_entropy(sv, cut)
    s2 = entanglement_entropy(sv, complement)
    assert abs(s1 - s2) < 1e-9


@given(states(), st.floats(0, 2 * math.pi, allow_nan=False))
@settings(deadline=None)
def test_fidelity_global_phase_blind(sv, theta):
    rotated = StateVector(sv.labels, sv.amplitudes * np.exp(1j * theta))
    assert abs(fidelity(sv, rotated) - 1) < 1e-12


@given(states(min_qubits=2), st.integers(1, 3))
@settings(deadline=None)
def test_reduced_density_eigenvalues(sv, k):
    keep = set(sv.labels[: k % sv.n_qubits or 1])
    assume(keep != set(sv.labels))
    eigvals = np.linalg.eigvalsh(reduced_density(sv, keep))
    assert np.all(eigvals > -1e-10)
    assert np.all(eigvals < 1 + 1e-10)
    assert abs(eigvals.sum() - 1) < 1e-10


@given(states(min_qubits=2))
@settings(deadline=None)
def test_bsm_probabilities_complete(sv):
    qa, qb = sv.labels[0], sv.labels[-1]
    total = sum(p for _, p, _ in bsm_enumerate(sv, qa, qb))
    assert abs(total - 1) < 1e-10


@given(states(min_qubits=2))
@settings(deadline=None)
def test_bsm_collapsed_unit_norm(sv):
    qa, qb = sv.labels[0], sv.labels[1]
    for _, _, collapsed in bsm_enumerate(sv, qa, qb):
        if collapsed is not None:
            assert abs(np.linalg.norm(collapsed.amplitudes) - 1) < 1e-10


@given(states(min_qubits=3, max_qubits=4))
@settings(deadline=None)
def test_bsm_mixture_reconstructs_marginal(sv):
    qa, qb = sv.labels[0], sv.labels[1]
    rest = set(sv.labels[2:])
    dim = 2 ** len(rest)
    mix = np.zeros((dim, dim), dtype=complex)
    for _, p, collapsed in bsm_enumerate(sv, qa, qb):
        if collapsed is not None:
            mix += p * np.outer(collapsed.amplitudes, collapsed.amplitudes.conj())
    np.testing.assert_allclose(mix, reduced_density(sv, rest), atol=1e-9)
