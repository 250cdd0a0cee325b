"""Shared oracle helpers: dense matrices built independently of the package."""

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("ci", max_examples=60, deadline=None)
settings.load_profile("ci")

SINGLE_QUBIT = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def kron_letters(letters: str) -> np.ndarray:
    """Tensor product of single-qubit Paulis, qubit 0 leftmost."""
    m = np.array([[1]], dtype=complex)
    for ch in letters:
        m = np.kron(m, SINGLE_QUBIT[ch])
    return m


def dense_pauli(p) -> np.ndarray:
    """Matrix of a PauliString, built from its letters and phase only."""
    return (1j ** p.phase) * kron_letters(
        "".join(p.letter_at(q) for q in range(p.n))
    )


@pytest.fixture
def rep3():
    from pauliflow.codes import repetition_code

    return repetition_code(3)
