"""Gate-level circuit IR, the gate-to-rotation dictionary, and a text parser.

Circuits are Clifford+T only: H, S, Sdg, T, Tdg, X, Y, Z, CNOT, CZ.
Gate lists are in time order, earliest gate first; composing operators
right-to-left is confined to the dense oracle.

Every gate expands into Pauli product rotations exp(-i*phi*P) with a
dyadic angle phi = num*pi/den.  Angles are kept as reduced fractions,
never floats, so pi/8 (non-Clifford) vs pi/4 and pi/2 (Clifford) is an
exact classification.  Pauli gates are encoded as pi/2 rotations rather
than special-cased.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .pauli import PauliString

_GATE_ARITY = {
    "h": 1, "s": 1, "sdg": 1, "t": 1, "tdg": 1,
    "x": 1, "y": 1, "z": 1, "cnot": 2, "cz": 2,
}

VALID_DENOMINATORS = (2, 4, 8)


class CircuitParseError(ValueError):
    """Parse failure carrying the 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in _GATE_ARITY:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if len(self.qubits) != _GATE_ARITY[self.kind]:
            raise ValueError(
                f"{self.kind} takes {_GATE_ARITY[self.kind]} qubit(s), "
                f"got {len(self.qubits)}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"duplicate qubit indices in {self.kind} gate")
        if any(q < 0 for q in self.qubits):
            raise ValueError("negative qubit index")


@dataclass(frozen=True)
class GateCircuit:
    n: int
    gates: tuple[Gate, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("circuit needs at least one qubit")
        for g in self.gates:
            if any(q >= self.n for q in g.qubits):
                raise ValueError(
                    f"gate {g.kind} on {g.qubits} out of range for n={self.n}"
                )

    def t_gate_count(self) -> int:
        return sum(1 for g in self.gates if g.kind in ("t", "tdg"))


@dataclass(frozen=True)
class PauliRotation:
    """Rotation exp(-i * (num*pi/den) * axis) with a dyadic angle.

    Construction normalizes: a negative axis sign is folded into the
    numerator, the fraction is reduced until the numerator is odd, and
    the numerator is brought into (-den, den].  den == 8 marks the
    non-Clifford pi/8 family; 4 and 2 are Clifford.
    """

    axis: PauliString
    num: int
    den: int

    def __post_init__(self):
        axis, num, den = self.axis, self.num, self.den
        if axis.is_identity():
            raise ValueError("rotation axis must be non-identity")
        if not axis.is_hermitian():
            raise ValueError("rotation axis must be Hermitian")
        if axis.phase == 2:
            axis = axis.unsigned()
            num = -num
        if den not in VALID_DENOMINATORS:
            raise ValueError(f"denominator must be one of {VALID_DENOMINATORS}")
        if num == 0:
            raise ValueError("zero angle is not a rotation")
        while num % 2 == 0:
            if den == 2:
                raise ValueError("angle reduces to a multiple of pi")
            num //= 2
            den //= 2
        num %= 2 * den
        if num > den:
            num -= 2 * den
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @property
    def is_pi8(self) -> bool:
        return self.den == 8

    @property
    def is_clifford(self) -> bool:
        return self.den in (2, 4)

    def __str__(self) -> str:
        return f"{self.axis}_({self.num}pi/{self.den})"


@dataclass(frozen=True)
class RotationCircuit:
    n: int
    rotations: tuple[PauliRotation, ...]

    def __post_init__(self):
        for r in self.rotations:
            if r.axis.n != self.n:
                raise ValueError("rotation axis length does not match circuit")


def _zaxis(n: int, q: int) -> PauliString:
    return PauliString.single(n, q, "Z")


def _xaxis(n: int, q: int) -> PauliString:
    return PauliString.single(n, q, "X")


def gate_to_rotations(gate: Gate, n: int) -> list[PauliRotation]:
    """Expand one gate into its Pauli-rotation dictionary entry.

    T  -> Z_{pi/8}           S  -> Z_{pi/4}        (daggers negate)
    H  -> Z_{pi/4} X_{pi/4} Z_{pi/4}
    X/Y/Z -> pi/2 rotation about the same axis
    CNOT(c,t) -> (Z_c X_t)_{pi/4} (X_t)_{-pi/4} (Z_c)_{-pi/4}
    CZ(a,b)   -> (Z_a Z_b)_{pi/4} (Z_b)_{-pi/4} (Z_a)_{-pi/4}
    """
    kind = gate.kind
    if kind == "t":
        return [PauliRotation(_zaxis(n, gate.qubits[0]), 1, 8)]
    if kind == "tdg":
        return [PauliRotation(_zaxis(n, gate.qubits[0]), -1, 8)]
    if kind == "s":
        return [PauliRotation(_zaxis(n, gate.qubits[0]), 1, 4)]
    if kind == "sdg":
        return [PauliRotation(_zaxis(n, gate.qubits[0]), -1, 4)]
    if kind == "h":
        q = gate.qubits[0]
        return [
            PauliRotation(_zaxis(n, q), 1, 4),
            PauliRotation(_xaxis(n, q), 1, 4),
            PauliRotation(_zaxis(n, q), 1, 4),
        ]
    if kind in ("x", "y", "z"):
        return [PauliRotation(PauliString.single(n, gate.qubits[0], kind), 1, 2)]
    if kind == "cnot":
        c, t = gate.qubits
        zc_xt = PauliString(n, 1 << t, 1 << c)
        return [
            PauliRotation(zc_xt, 1, 4),
            PauliRotation(_xaxis(n, t), -1, 4),
            PauliRotation(_zaxis(n, c), -1, 4),
        ]
    if kind == "cz":
        a, b = gate.qubits
        za_zb = PauliString(n, 0, (1 << a) | (1 << b))
        return [
            PauliRotation(za_zb, 1, 4),
            PauliRotation(_zaxis(n, b), -1, 4),
            PauliRotation(_zaxis(n, a), -1, 4),
        ]
    raise ValueError(f"unknown gate kind {kind!r}")


# -- text format ---------------------------------------------------------


def parse_circuit(text: str) -> GateCircuit:
    """Parse the line format: header "qubits N", then one gate per line.

    Gate lines are a lowercase mnemonic followed by space-separated
    zero-based qubit indices, e.g. "h 0" or "cnot 0 1".  "#" starts a
    comment; blank lines are ignored.
    """
    n = None
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if n is None:
            if tokens[0] != "qubits":
                raise CircuitParseError(
                    'expected header "qubits N" before any gate', lineno
                )
            if len(tokens) != 2 or not tokens[1].isdigit() or int(tokens[1]) < 1:
                raise CircuitParseError("malformed qubit count", lineno)
            n = int(tokens[1])
            continue
        mnemonic = tokens[0]
        if mnemonic == "qubits":
            raise CircuitParseError("duplicate qubits header", lineno)
        if mnemonic not in _GATE_ARITY:
            raise CircuitParseError(f"unknown gate mnemonic {mnemonic!r}", lineno)
        arity = _GATE_ARITY[mnemonic]
        args = tokens[1:]
        if len(args) != arity:
            raise CircuitParseError(
                f"{mnemonic} expects {arity} index(es), got {len(args)}", lineno
            )
        try:
            qubits = tuple(int(a) for a in args)
        except ValueError:
            raise CircuitParseError(f"non-integer qubit index in {line!r}", lineno)
        if len(set(qubits)) != len(qubits):
            raise CircuitParseError(f"duplicate indices in {mnemonic} gate", lineno)
        if any(q < 0 or q >= n for q in qubits):
            raise CircuitParseError(
                f"qubit index out of range 0..{n - 1} in {line!r}", lineno
            )
        gates.append(Gate(mnemonic, qubits))
    if n is None:
        raise CircuitParseError('missing "qubits N" header', 1)
    return GateCircuit(n, tuple(gates))


def render_circuit(circuit: GateCircuit) -> str:
    lines = [f"qubits {circuit.n}"]
    for g in circuit.gates:
        lines.append(" ".join([g.kind] + [str(q) for q in g.qubits]))
    return "\n".join(lines) + "\n"


# -- metrics -------------------------------------------------------------


def circuit_metrics(rc: RotationCircuit) -> dict:
    """T-count plus the greedy-layering upper bound on T-depth."""
    from .layers import build_layers

    pi8 = [r for r in rc.rotations if r.is_pi8]
    t_depth = len(build_layers(pi8).layers) if pi8 else 0
    return {"t_count": len(pi8), "naive_t_depth": t_depth}


# -- JSON ----------------------------------------------------------------

SCHEMA_VERSION = 1


def rotation_to_json(rot: PauliRotation) -> dict:
    return {"axis": str(rot.axis), "num": rot.num, "den": rot.den}


def rotation_from_json(obj: dict) -> PauliRotation:
    return PauliRotation(PauliString.from_label(obj["axis"]), obj["num"], obj["den"])


def rotation_circuit_to_json(rc: RotationCircuit) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "n": rc.n,
        "rotations": [rotation_to_json(r) for r in rc.rotations],
    }


def rotation_circuit_from_json(obj: dict) -> RotationCircuit:
    return RotationCircuit(
        obj["n"], tuple(rotation_from_json(r) for r in obj["rotations"])
    )


def dump_rotation_circuit(rc: RotationCircuit) -> str:
    return json.dumps(rotation_circuit_to_json(rc), indent=2)
