"""Core statevector operations against hand-computed and oracle values."""

import numpy as np
import pytest

import bqtsim.statevector as qs
from bqtsim.errors import (
    BadSubset,
    DuplicateLabel,
    LabelMismatch,
    NotNormalized,
    SameQubit,
    UnknownLabel,
)
from bqtsim.statevector import (
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
from conftest import haar_state, partial_trace_oracle, random_pair

INV_SQRT2 = 1 / np.sqrt(2)


def bell_pair(l1="p", l2="q"):
    return StateVector((l1, l2), np.array([1, 0, 0, 1]) * INV_SQRT2)


def cluster():
    amps = np.zeros(16, dtype=complex)
    amps[0b0000] = amps[0b0011] = amps[0b1100] = 0.5
    amps[0b1111] = -0.5
    return StateVector(("A1", "B1", "A2", "B2"), amps)


class TestConstruction:
    def test_rejects_non_normalized(self):
        with pytest.raises(NotNormalized):
            StateVector(("q",), np.array([1.0, 1.0]))

    def test_rejects_duplicate_labels(self):
        with pytest.raises(DuplicateLabel):
            StateVector(("q", "q"), np.array([1, 0, 0, 0]))

    def test_amplitudes_frozen(self):
        sv = StateVector.single("q", 1, 0)
        with pytest.raises(ValueError):
            sv.amplitudes[0] = 0

    def test_empty_register_scalar(self):
        sv = StateVector((), np.array([1.0]))
        assert sv.n_qubits == 0 and sv.dim == 1


class TestTensor:
    def test_basis_kets(self):
        out = tensor(StateVector.single("a", 1, 0), StateVector.single("b", 0, 1))
        np.testing.assert_array_equal(out.amplitudes, [0, 1, 0, 0])
        assert out.labels == ("a", "b")

    def test_associativity_exact_on_dyadic_amplitudes(self):
        x = StateVector.single("x", 0.5, complex(0, -np.sqrt(0.75)))
        y = StateVector.single("y", 0.75, 0.25 * np.sqrt(7))
        z = StateVector.single("z", 0, 1)
        left = tensor(tensor(x, y), z)
        right = tensor(x, tensor(y, z))
        np.testing.assert_array_equal(left.amplitudes, right.amplitudes)

    def test_associativity_random(self, rng):
        x, y, z = (haar_state(rng, [l]) for l in "xyz")
        left = tensor(tensor(x, y), z)
        right = tensor(x, tensor(y, z))
        np.testing.assert_allclose(left.amplitudes, right.amplitudes, atol=1e-16)

    def test_duplicate_label_rejected(self):
        with pytest.raises(DuplicateLabel):
            tensor(StateVector.single("a", 1, 0), StateVector.single("a", 1, 0))


class TestApply1Q:
    def test_x_flips(self):
        out = apply_1q(StateVector.single("q", 1, 0), "q", qs.X)
        np.testing.assert_array_equal(out.amplitudes, [0, 1])

    def test_z_fixes_sign(self, rng):
        b0, b1 = random_pair(rng)
        out = apply_1q(StateVector.single("q", b0, -b1), "q", qs.Z)
        np.testing.assert_allclose(out.amplitudes, [b0, b1], atol=1e-15)

    def test_x_then_z_recovers(self, rng):
        # the two-factor recovery: sigma_x first, then sigma_z
        b0, b1 = random_pair(rng)
        sv = StateVector.single("q", -b1, b0)  # b0|1> - b1|0>
        out = apply_1q(apply_1q(sv, "q", qs.X), "q", qs.Z)
        np.testing.assert_allclose(out.amplitudes, [b0, b1], atol=1e-15)

    def test_unknown_label(self):
        with pytest.raises(UnknownLabel):
            apply_1q(StateVector.single("q", 1, 0), "nope", qs.X)

    def test_gate_unitarity_enforced(self):
        with pytest.raises(ValueError):
            qs.Gate1Q("custom", np.array([[1, 1], [0, 1]]))


class TestCnot:
    def test_basis(self):
        out = apply_cnot(StateVector.basis(("c", "t"), "10"), "c", "t")
        np.testing.assert_array_equal(out.amplitudes, [0, 0, 0, 1])

    def test_disentangles_ghz(self, rng):
        a0, a1 = random_pair(rng)
        amps = np.zeros(8, dtype=complex)
        amps[0], amps[7] = a0, a1
        sv = StateVector(("q1", "q2", "q3"), amps)
        sv = apply_cnot(apply_cnot(sv, "q1", "q2"), "q1", "q3")
        expected = np.zeros(8, dtype=complex)
        expected[0b000], expected[0b100] = a0, a1
        np.testing.assert_array_equal(sv.amplitudes, expected)

    def test_involution_exact(self, rng):
        sv = haar_state(rng, ["a", "b", "c"])
        back = apply_cnot(apply_cnot(sv, "a", "c"), "a", "c")
        np.testing.assert_array_equal(back.amplitudes, sv.amplitudes)

    def test_same_qubit_rejected(self):
        with pytest.raises(SameQubit):
            apply_cnot(bell_pair(), "p", "p")


class TestCz:
    def test_minus_on_11(self):
        out = apply_cz(StateVector.basis(("p", "q"), "11"), "p", "q")
        np.testing.assert_array_equal(out.amplitudes, [0, 0, 0, -1])

    def test_symmetric_exact(self, rng):
        sv = haar_state(rng, ["a", "b", "c"])
        one = apply_cz(sv, "a", "b")
        two = apply_cz(sv, "b", "a")
        np.testing.assert_array_equal(one.amplitudes, two.amplitudes)

    def test_disentangles_branch_two_state(self, rng):
        # a0b0|00> - a0b1|01> + a1b0|10> + a1b1|11> on (B1, A2) must factor
        # into (a0|0>+a1|1>) x (b0|0>-b1|1>); oracle is the direct
        # four-amplitude product.
        (a0, a1), (b0, b1) = random_pair(rng), random_pair(rng)
        sv = StateVector(("B1", "A2"), np.array([a0 * b0, -a0 * b1, a1 * b0, a1 * b1]))
        out = apply_cz(sv, "B1", "A2")
        expected = np.kron([a0, a1], [b0, -b1])
        np.testing.assert_allclose(out.amplitudes, expected, atol=1e-15)


class TestFidelity:
    def test_self_is_one(self, rng):
        sv = haar_state(rng, ["a", "b"])
        assert fidelity(sv, sv) == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal_is_zero(self):
        assert fidelity(StateVector.single("q", 1, 0), StateVector.single("q", 0, 1)) == 0

    def test_half_overlap(self):
        plus = StateVector.single("q", INV_SQRT2, INV_SQRT2)
        assert fidelity(StateVector.single("q", 1, 0), plus) == pytest.approx(0.5, abs=1e-12)

    def test_label_order_aligned(self, rng):
        sv = haar_state(rng, ["a", "b", "c"])
        assert fidelity(sv, sv.permuted(("c", "a", "b"))) == pytest.approx(1.0, abs=1e-12)

    def test_mismatched_labels(self):
        with pytest.raises(LabelMismatch):
            fidelity(StateVector.single("q", 1, 0), StateVector.single("r", 1, 0))


class TestReducedDensity:
    def test_bell_is_maximally_mixed(self):
        rho = reduced_density(bell_pair(), {"p"})
        np.testing.assert_allclose(rho, np.eye(2) / 2, atol=1e-12)

    def test_product_state_pure(self):
        sv = tensor(StateVector.single("a", 1, 0), StateVector.single("b", INV_SQRT2, INV_SQRT2))
        rho = reduced_density(sv, {"a"})
        np.testing.assert_allclose(rho, [[1, 0], [0, 0]], atol=1e-12)

    def test_cluster_party_cut_vs_oracle(self):
        sv = cluster()
        rho = reduced_density(sv, {"A1", "A2"})
        np.testing.assert_allclose(rho, np.diag([0.25] * 4), atol=1e-12)
        np.testing.assert_allclose(rho, partial_trace_oracle(sv, {"A1", "A2"}), atol=1e-12)

    def test_random_state_matches_oracle(self, rng):
        sv = haar_state(rng, ["a", "b", "c", "d"])
        for keep in ({"a"}, {"b", "d"}, {"a", "b", "c"}):
            np.testing.assert_allclose(
                reduced_density(sv, keep), partial_trace_oracle(sv, keep), atol=1e-12
            )

    def test_bad_subsets(self):
        sv = bell_pair()
        for keep in (set(), {"p", "q"}, {"z"}):
            with pytest.raises(BadSubset):
                reduced_density(sv, keep)


class TestEntropyAndSchmidt:
    def test_product_state(self):
        sv = tensor(StateVector.single("a", 1, 0), StateVector.single("b", INV_SQRT2, INV_SQRT2))
        assert entanglement_entropy(sv, {"a"}) == pytest.approx(0.0, abs=1e-12)
        assert schmidt_rank(sv, {"a"}) == 1

    def test_bell_pair(self):
        assert entanglement_entropy(bell_pair(), {"p"}) == pytest.approx(1.0, abs=1e-12)

    def test_cluster_party_cut(self):
        sv = cluster()
        assert entanglement_entropy(sv, {"A1", "A2"}) == pytest.approx(2.0, abs=1e-12)
        assert schmidt_rank(sv, {"A1", "A2"}) == 4

    def test_two_intra_party_bell_pairs(self):
        sv = tensor(bell_pair("A1", "A2"), bell_pair("B1", "B2"))
        assert schmidt_rank(sv, {"A1", "A2"}) == 1
        assert entanglement_entropy(sv, {"A1", "A2"}) == pytest.approx(0.0, abs=1e-9)


class TestFactorAndSubsetFidelity:
    def test_factor_product(self, rng):
        qubit = haar_state(rng, ["m"])
        rest = haar_state(rng, ["x", "y"])
        got = try_factor(tensor(qubit, rest), "m")
        assert got is not None
        part, remainder = got
        assert fidelity(part, qubit) == pytest.approx(1.0, abs=1e-12)
        assert fidelity(remainder, rest) == pytest.approx(1.0, abs=1e-12)

    def test_factor_entangled_is_none(self):
        assert try_factor(bell_pair(), "p") is None

    def test_subset_fidelity_matches_pure_case(self, rng):
        qubit = haar_state(rng, ["m"])
        rest = haar_state(rng, ["x"])
        sv = tensor(qubit, rest)
        f = subset_fidelity(sv, ["m"], qubit.amplitudes)
        assert f == pytest.approx(1.0, abs=1e-12)

    def test_subset_fidelity_mixed(self):
        # either Bell-pair half against |0>: <0|rho|0> = 1/2
        f = subset_fidelity(bell_pair(), ["p"], np.array([1, 0]))
        assert f == pytest.approx(0.5, abs=1e-12)


class TestDumpFormat:
    def test_round_trip(self, rng):
        sv = haar_state(rng, ["a", "B2", "q3"])
        back = parse_statevector(dump_statevector(sv))
        assert back.labels == sv.labels
        np.testing.assert_allclose(back.amplitudes, sv.amplitudes, atol=1e-15)

    def test_skips_zero_amplitudes(self):
        text = dump_statevector(cluster())
        assert len(text.strip().splitlines()) == 1 + 4
        assert text.splitlines()[0] == "# labels: A1 B1 A2 B2"

    def test_rejects_non_normalized(self):
        with pytest.raises(NotNormalized):
            parse_statevector("# labels: a\n0 0.5 0\n1 0.5 0\n")
