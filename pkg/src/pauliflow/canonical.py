"""Canonical form: ordered pi/8 rotations followed by a final Clifford.

Every Clifford rotation (pi/4 or pi/2) is commuted later in time past
each subsequent pi/8 rotation.  Crossing a Clifford with axis P and
angle theta rewrites a later rotation axis P' to

    P'                      if P and P' commute,
    exp(2i*theta*P) * P'    if they anticommute,

which for theta = +/-pi/4 is (+/-i)P*P' and for pi/2 is -P'.  The sign
convention (the earlier operation conjugates the later axis) is pinned
by the dense-oracle equivalence test, not by prose.

Moved Cliffords accumulate in time order into a trace; the equivalent
tableau maps each generator g in {X_i, Z_i} to V^dag g V where V is the
trace unitary, so measuring Z_q after the full circuit is the same as
measuring its tableau image after just the pi/8 prefix.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .circuits import (
    SCHEMA_VERSION,
    GateCircuit,
    PauliRotation,
    RotationCircuit,
    gate_to_rotations,
    rotation_from_json,
    rotation_to_json,
)
from .pauli import PauliString, merged_rotation_axis


@dataclass(frozen=True)
class CliffordTableau:
    """Conjugation images of the X_i / Z_i generators under a Clifford."""

    n: int
    x_images: tuple[PauliString, ...]
    z_images: tuple[PauliString, ...]

    def __post_init__(self):
        if len(self.x_images) != self.n or len(self.z_images) != self.n:
            raise ValueError("tableau needs one image per generator")
        for img in self.x_images + self.z_images:
            if img.n != self.n or not img.is_hermitian():
                raise ValueError("tableau images must be Hermitian length-n Paulis")

    @classmethod
    def identity(cls, n: int) -> "CliffordTableau":
        xs = tuple(PauliString.single(n, q, "X") for q in range(n))
        zs = tuple(PauliString.single(n, q, "Z") for q in range(n))
        return cls(n, xs, zs)

    def validate(self):
        """Check that the images preserve the generator commutation structure."""
        images = list(self.x_images) + list(self.z_images)
        for a in range(2 * self.n):
            for b in range(a + 1, 2 * self.n):
                # X_i and Z_i anticommute; every other generator pair commutes
                should_anticommute = b == a + self.n
                if images[a].anticommutes(images[b]) != should_anticommute:
                    raise ValueError(
                        f"tableau images {a} and {b} break the commutation "
                        "structure"
                    )


@dataclass(frozen=True)
class CanonicalForm:
    n: int
    pi8: tuple[PauliRotation, ...]
    clifford_trace: tuple[PauliRotation, ...]
    tableau: CliffordTableau
    measurement_bases: tuple[PauliString, ...]

    def __post_init__(self):
        if any(not r.is_pi8 for r in self.pi8):
            raise ValueError("pi8 section may only contain pi/8 rotations")
        if any(not r.is_clifford for r in self.clifford_trace):
            raise ValueError("trace may only contain Clifford rotations")


def to_rotation_circuit(gc: GateCircuit) -> RotationCircuit:
    """Concatenate the dictionary expansion of every gate, in time order."""
    rotations: list[PauliRotation] = []
    for gate in gc.gates:
        rotations.extend(gate_to_rotations(gate, gc.n))
    return RotationCircuit(gc.n, tuple(rotations))


def conjugate_axis(mover: PauliRotation, axis: PauliString) -> PauliString:
    """Image of `axis` when the Clifford rotation `mover` crosses it.

    Implements exp(2i*theta*P)*P' for anticommuting axes; a commuting
    axis is untouched.
    """
    if not mover.is_clifford:
        raise ValueError("only Clifford rotations may be moved across")
    if mover.axis.commutes(axis):
        return axis
    if mover.den == 2:
        return axis.negated()
    merged = merged_rotation_axis(mover.axis, axis)
    # i*P*P' for num = 1 mod 4, -i*P*P' for num = 3 mod 4
    return merged if mover.num % 4 == 1 else merged.negated()


def _conjugate_through_trace(
    trace: list[PauliRotation], p: PauliString
) -> PauliString:
    # Crossing earlier in time means conjugating by the latest mover first.
    for mover in reversed(trace):
        p = conjugate_axis(mover, p)
    return p


def tableau_conjugate(t: CliffordTableau, p: PauliString) -> PauliString:
    """Image of an arbitrary Hermitian Pauli under the tableau.

    Decomposes p per qubit as i^{x*z} X^x Z^z, substitutes the generator
    images, and multiplies with exact phase bookkeeping.
    """
    if p.n != t.n:
        raise ValueError(f"qubit count mismatch: {p.n} vs {t.n}")
    if not p.is_hermitian():
        raise ValueError("tableau conjugation expects a Hermitian operator")
    acc = PauliString.identity(t.n)
    for q in range(t.n):
        if p.x >> q & 1:
            acc = acc * t.x_images[q]
        if p.z >> q & 1:
            acc = acc * t.z_images[q]
    extra = (p.phase + (p.x & p.z).bit_count()) % 4
    result = PauliString(acc.n, acc.x, acc.z, (acc.phase + extra) % 4)
    assert result.is_hermitian(), "Clifford image of a Hermitian Pauli must be Hermitian"
    return result


def push_cliffords(rc: RotationCircuit) -> CanonicalForm:
    """Sweep all Clifford rotations to the end of the circuit.

    Walks the rotations in time order.  Cliffords join the trace; each
    arriving pi/8 rotation is conjugated through the Cliffords already
    behind it.  The pi/8 count is preserved exactly.
    """
    pi8: list[PauliRotation] = []
    trace: list[PauliRotation] = []
    for rot in rc.rotations:
        if rot.is_pi8:
            axis = _conjugate_through_trace(trace, rot.axis)
            pi8.append(PauliRotation(axis, rot.num, 8))
        else:
            trace.append(rot)
    tableau = tableau_from_trace(rc.n, trace)
    bases = tuple(tableau.z_images)
    return CanonicalForm(rc.n, tuple(pi8), tuple(trace), tableau, bases)


def tableau_from_trace(n: int, trace: list[PauliRotation]) -> CliffordTableau:
    xs = tuple(
        _conjugate_through_trace(trace, PauliString.single(n, q, "X"))
        for q in range(n)
    )
    zs = tuple(
        _conjugate_through_trace(trace, PauliString.single(n, q, "Z"))
        for q in range(n)
    )
    return CliffordTableau(n, xs, zs)


def canonicalize(gc: GateCircuit) -> CanonicalForm:
    return push_cliffords(to_rotation_circuit(gc))


def measurement_bases(cf: CanonicalForm) -> list[PauliString]:
    """Per-qubit operator equivalent to a final Z_q measurement."""
    return list(cf.measurement_bases)


# -- JSON ----------------------------------------------------------------


def canonical_to_json(cf: CanonicalForm) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "n": cf.n,
        "pi8": [rotation_to_json(r) for r in cf.pi8],
        "clifford_trace": [rotation_to_json(r) for r in cf.clifford_trace],
        "measurement_bases": [str(b) for b in cf.measurement_bases],
    }


def canonical_from_json(obj: dict) -> CanonicalForm:
    n = obj["n"]
    pi8 = tuple(rotation_from_json(r) for r in obj["pi8"])
    trace = list(rotation_from_json(r) for r in obj["clifford_trace"])
    tableau = tableau_from_trace(n, trace)
    bases = tuple(PauliString.from_label(b) for b in obj["measurement_bases"])
    if bases != tuple(tableau.z_images):
        raise ValueError("measurement bases inconsistent with Clifford trace")
    return CanonicalForm(n, pi8, tuple(trace), tableau, bases)


def dump_canonical(cf: CanonicalForm) -> str:
    return json.dumps(canonical_to_json(cf), indent=2)
