"""Dense-matrix oracle: unitarity, phase-invariant equivalence, negative controls."""

import random

import numpy as np
import pytest

from pauliflow.canonical import CanonicalForm, canonicalize
from pauliflow.circuits import Gate, GateCircuit, PauliRotation
from pauliflow.oracle import (
    equivalent_up_to_phase,
    pauli_matrix,
    unitary_of_gates,
    unitary_of_rotations,
    verify_canonical_form,
)
from pauliflow.pauli import PauliString

from test_canonical import random_circuit


def assert_unitary(u):
    d = u.shape[0]
    assert np.abs(u.conj().T @ u - np.eye(d)).max() <= 1e-10


class TestUnitaryOfGates:
    def test_empty_circuit(self):
        u = unitary_of_gates(GateCircuit(2, ()))
        np.testing.assert_array_equal(u, np.eye(4))

    def test_single_x(self):
        u = unitary_of_gates(GateCircuit(1, (Gate("x", (0,)),)))
        np.testing.assert_allclose(u, np.array([[0, 1], [1, 0]]), atol=1e-14)

    def test_double_h_is_identity(self):
        u = unitary_of_gates(GateCircuit(1, (Gate("h", (0,)), Gate("h", (0,)))))
        np.testing.assert_allclose(u, np.eye(2), atol=1e-12)

    def test_size_guard(self):
        with pytest.raises(ValueError, match="n <= 10"):
            unitary_of_gates(GateCircuit(11, ()))

    @pytest.mark.parametrize("seed", range(10))
    def test_random_circuits_are_unitary(self, seed):
        rng = random.Random(seed)
        gc = random_circuit(rng.randint(1, 4), rng.randint(1, 20), rng)
        assert_unitary(unitary_of_gates(gc))


class TestUnitaryOfRotations:
    def test_pi8_z_is_t_up_to_phase(self):
        rot = PauliRotation(PauliString.from_label("Z"), 1, 8)
        u = unitary_of_rotations([rot], 1)
        t = np.diag([1, np.exp(1j * np.pi / 4)])
        assert equivalent_up_to_phase(u, t, 1e-12)

    def test_rotations_are_unitary(self):
        rng = random.Random(11)
        gc = random_circuit(3, 20, rng)
        from pauliflow.canonical import to_rotation_circuit

        u = unitary_of_rotations(to_rotation_circuit(gc).rotations, 3)
        assert_unitary(u)


class TestEquivalence:
    def test_reflexive(self):
        u = unitary_of_gates(GateCircuit(1, (Gate("h", (0,)),)))
        assert equivalent_up_to_phase(u, u, 1e-12)

    def test_phase_invariant(self):
        u = unitary_of_gates(GateCircuit(2, (Gate("cnot", (0, 1)),)))
        assert equivalent_up_to_phase(u, np.exp(1j * 0.7) * u, 1e-12)

    def test_symmetric(self):
        u = unitary_of_gates(GateCircuit(1, (Gate("h", (0,)),)))
        v = unitary_of_gates(GateCircuit(1, (Gate("s", (0,)),)))
        assert equivalent_up_to_phase(u, v, 1e-9) == equivalent_up_to_phase(
            v, u, 1e-9
        )

    def test_identity_vs_x_fails(self):
        eye = np.eye(2, dtype=complex)
        x = pauli_matrix(PauliString.from_label("X"))
        assert not equivalent_up_to_phase(eye, x, 0.5)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            equivalent_up_to_phase(np.eye(2), np.eye(4))


class TestVerifyCanonicalForm:
    def test_single_t(self):
        gc = GateCircuit(1, (Gate("t", (0,)),))
        assert verify_canonical_form(gc, canonicalize(gc))

    def test_hth(self):
        gc = GateCircuit(1, (Gate("h", (0,)), Gate("t", (0,)), Gate("h", (0,))))
        cf = canonicalize(gc)
        assert str(cf.pi8[0].axis) == "+X"
        assert verify_canonical_form(gc, cf)

    def test_corrupted_sign_detected(self):
        rng = random.Random(5)
        for _ in range(10):
            gc = random_circuit(rng.randint(1, 3), rng.randint(2, 15), rng)
            if gc.t_gate_count() == 0:
                continue
            cf = canonicalize(gc)
            idx = rng.randrange(len(cf.pi8))
            bad = list(cf.pi8)
            bad[idx] = PauliRotation(bad[idx].axis, -bad[idx].num, bad[idx].den)
            corrupted = CanonicalForm(
                cf.n, tuple(bad), cf.clifford_trace, cf.tableau,
                cf.measurement_bases,
            )
            assert not verify_canonical_form(gc, corrupted, tol=1e-9)
