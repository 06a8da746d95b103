"""Shared fixtures and independent oracle helpers.

The oracles here deliberately use plain index loops instead of the
library's reshaping tricks, so they can disagree with the implementation.
"""

import numpy as np
import pytest

from bqtsim.statevector import StateVector


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def haar_state(rng, labels) -> StateVector:
    """Uniformly random pure state over the given labels."""
    dim = 2 ** len(labels)
    amps = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return StateVector(tuple(labels), amps / np.linalg.norm(amps))


def random_pair(rng):
    """Random normalized coefficient pair, kept away from basis states."""
    while True:
        raw = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        raw /= np.linalg.norm(raw)
        if min(abs(raw[0]), abs(raw[1])) > 1e-3:
            return complex(raw[0]), complex(raw[1])


def partial_trace_oracle(sv: StateVector, keep) -> np.ndarray:
    """Reduced density matrix by explicit summation over basis indices."""
    n = sv.n_qubits
    keep_pos = [i for i, l in enumerate(sv.labels) if l in set(keep)]
    env_pos = [i for i in range(n) if i not in keep_pos]
    k = len(keep_pos)
    rho = np.zeros((2**k, 2**k), dtype=complex)

    def assemble(keep_bits, env_bits):
        idx = 0
        for pos in range(n):
            idx <<= 1
            if pos in keep_pos:
                idx |= (keep_bits >> (k - 1 - keep_pos.index(pos))) & 1
            else:
                idx |= (env_bits >> (len(env_pos) - 1 - env_pos.index(pos))) & 1
        return idx

    for i in range(2**k):
        for j in range(2**k):
            for e in range(2 ** len(env_pos)):
                rho[i, j] += sv.amplitudes[assemble(i, e)] * np.conj(
                    sv.amplitudes[assemble(j, e)]
                )
    return rho


# Bell vectors written out independently of bqtsim.bell, in this package's
# naming: psi+- on 00/11, phi+- on 01/10.
BELL_VECTORS = {
    "psi+": np.array([1, 0, 0, 1]) / np.sqrt(2),
    "psi-": np.array([1, 0, 0, -1]) / np.sqrt(2),
    "phi+": np.array([0, 1, 1, 0]) / np.sqrt(2),
    "phi-": np.array([0, 1, -1, 0]) / np.sqrt(2),
}


def bell_probability_oracle(sv: StateVector, qa, qb, name) -> float:
    """Projection probability by explicit summation over basis indices."""
    n = sv.n_qubits
    pa, pb = sv.labels.index(qa), sv.labels.index(qb)
    rest_pos = [i for i in range(n) if i not in (pa, pb)]
    bell = BELL_VECTORS[name]
    total = 0.0
    for rest_bits in range(2 ** len(rest_pos)):
        amp = 0j
        for i in range(2):
            for j in range(2):
                idx = 0
                for pos in range(n):
                    idx <<= 1
                    if pos == pa:
                        idx |= i
                    elif pos == pb:
                        idx |= j
                    else:
                        idx |= (rest_bits >> (len(rest_pos) - 1 - rest_pos.index(pos))) & 1
                amp += np.conj(bell[2 * i + j]) * sv.amplitudes[idx]
        total += abs(amp) ** 2
    return total
