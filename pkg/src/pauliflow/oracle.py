"""Dense-matrix ground truth for small circuits.

Builds explicit 2^n x 2^n unitaries from gate circuits, rotation lists,
and canonical forms, and checks equivalence up to global phase via the
normalized trace overlap |tr(U^dag V)| / 2^n.  Hard guard at n <= 10;
anything larger must be validated structurally instead.
"""

from __future__ import annotations

import math

import numpy as np

from .canonical import CanonicalForm, tableau_conjugate
from .circuits import Gate, GateCircuit, PauliRotation
from .pauli import PauliString

MAX_ORACLE_QUBITS = 10

_I2 = np.eye(2, dtype=complex)
_SINGLE = {
    "I": _I2,
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_GATE_1Q = {
    "h": np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2),
    "s": np.diag([1, 1j]).astype(complex),
    "sdg": np.diag([1, -1j]).astype(complex),
    "t": np.diag([1, np.exp(1j * math.pi / 4)]),
    "tdg": np.diag([1, np.exp(-1j * math.pi / 4)]),
    "x": _SINGLE["X"],
    "y": _SINGLE["Y"],
    "z": _SINGLE["Z"],
}


def _check_size(n: int):
    if n > MAX_ORACLE_QUBITS:
        raise ValueError(f"dense oracle limited to n <= {MAX_ORACLE_QUBITS}, got {n}")


def pauli_matrix(p: PauliString) -> np.ndarray:
    """Dense matrix of a signed Pauli string (qubit 0 is the leftmost factor)."""
    _check_size(p.n)
    m = np.array([[1]], dtype=complex)
    for q in range(p.n):
        m = np.kron(m, _SINGLE[p.letter_at(q)])
    return (1j ** p.phase) * m


def _embed_single(u: np.ndarray, qubit: int, n: int) -> np.ndarray:
    left = np.eye(2 ** qubit, dtype=complex)
    right = np.eye(2 ** (n - qubit - 1), dtype=complex)
    return np.kron(np.kron(left, u), right)


def gate_unitary(gate: Gate, n: int) -> np.ndarray:
    if gate.kind in _GATE_1Q:
        return _embed_single(_GATE_1Q[gate.kind], gate.qubits[0], n)
    p0 = np.array([[1, 0], [0, 0]], dtype=complex)
    p1 = np.array([[0, 0], [0, 1]], dtype=complex)
    if gate.kind == "cnot":
        c, t = gate.qubits
        return _embed_single(p0, c, n) + _embed_single(p1, c, n) @ _embed_single(
            _SINGLE["X"], t, n
        )
    if gate.kind == "cz":
        a, b = gate.qubits
        return _embed_single(p0, a, n) + _embed_single(p1, a, n) @ _embed_single(
            _SINGLE["Z"], b, n
        )
    raise ValueError(f"unknown gate kind {gate.kind!r}")


def unitary_of_gates(gc: GateCircuit) -> np.ndarray:
    """Product of gate matrices in time order (later gates on the left)."""
    _check_size(gc.n)
    u = np.eye(2 ** gc.n, dtype=complex)
    for g in gc.gates:
        u = gate_unitary(g, gc.n) @ u
    return u


def rotation_matrix(rot: PauliRotation) -> np.ndarray:
    """exp(-i*phi*P) = cos(phi)*I - i*sin(phi)*P for involutory Hermitian P."""
    phi = rot.num * math.pi / rot.den
    p = pauli_matrix(rot.axis)
    dim = p.shape[0]
    return math.cos(phi) * np.eye(dim, dtype=complex) - 1j * math.sin(phi) * p


def unitary_of_rotations(rotations, n: int) -> np.ndarray:
    """Ordered product of rotation matrices (time order, later on the left)."""
    _check_size(n)
    u = np.eye(2 ** n, dtype=complex)
    for rot in rotations:
        if rot.axis.n != n:
            raise ValueError("rotation axis length does not match n")
        u = rotation_matrix(rot) @ u
    return u


def equivalent_up_to_phase(u: np.ndarray, v: np.ndarray, tol: float = 1e-9) -> bool:
    """True iff |tr(U^dag V)| / dim >= 1 - tol."""
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    overlap = abs(np.trace(u.conj().T @ v)) / u.shape[0]
    return overlap >= 1 - tol


def trace_overlap(u: np.ndarray, v: np.ndarray) -> float:
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    return float(abs(np.trace(u.conj().T @ v)) / u.shape[0])


def verify_canonical_form(gc: GateCircuit, cf: CanonicalForm, tol: float = 1e-9) -> bool:
    """Check a canonical form against the original circuit.

    Verifies (1) the pi/8 prefix followed by the Clifford trace matches
    the original unitary up to global phase, and (2) each tableau entry
    equals the matrix conjugation V^dag g V of its generator by the
    trace unitary V, including sign.
    """
    if gc.n != cf.n:
        raise ValueError("qubit count mismatch between circuit and canonical form")
    _check_size(gc.n)
    original = unitary_of_gates(gc)
    rebuilt = unitary_of_rotations(list(cf.pi8) + list(cf.clifford_trace), cf.n)
    if not equivalent_up_to_phase(original, rebuilt, tol):
        return False
    v = unitary_of_rotations(cf.clifford_trace, cf.n)
    atol = max(100 * tol, 1e-10)
    for q in range(cf.n):
        for letter in ("X", "Z"):
            gen = PauliString.single(cf.n, q, letter)
            expected = v.conj().T @ pauli_matrix(gen) @ v
            got = pauli_matrix(tableau_conjugate(cf.tableau, gen))
            if not np.allclose(expected, got, atol=atol):
                return False
    return True
