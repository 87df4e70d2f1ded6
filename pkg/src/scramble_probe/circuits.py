"""Gate and circuit containers shared by the state simulator.

A circuit is an ordered gate list over `width` qubits indexed 0..width-1;
gates earlier in the list are applied to the state first.  Qubit 0 is the
most significant bit of the computational basis index, so chain site n
(1-based) lives on qubit n-1 and an ancilla appended after the chain is
the least significant bit.
"""

from __future__ import annotations

from dataclasses import dataclass

ROT_X = "rot_x"
ROT_Y = "rot_y"
ROT_Z = "rot_z"
ROT_ZZ = "rot_zz"
PAULI_X = "pauli_x"
PAULI_Y = "pauli_y"
PAULI_Z = "pauli_z"
HADAMARD = "hadamard"
CZ = "cz"
CNOT = "cnot"

ONE_QUBIT_KINDS = frozenset({ROT_X, ROT_Y, ROT_Z, PAULI_X, PAULI_Y, PAULI_Z, HADAMARD})
TWO_QUBIT_KINDS = frozenset({ROT_ZZ, CZ, CNOT})
ROTATION_KINDS = frozenset({ROT_X, ROT_Y, ROT_Z, ROT_ZZ})
GATE_KINDS = ONE_QUBIT_KINDS | TWO_QUBIT_KINDS


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        arity = 1 if self.kind in ONE_QUBIT_KINDS else 2
        if len(self.qubits) != arity:
            raise ValueError(f"{self.kind} acts on {arity} qubit(s), got {self.qubits}")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"repeated qubit in {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise ValueError(f"negative qubit index in {self.qubits}")
        if self.kind in ROTATION_KINDS:
            if self.angle is None:
                raise ValueError(f"{self.kind} requires an angle")
        elif self.angle is not None:
            raise ValueError(f"{self.kind} takes no angle")

    def inverse(self) -> "Gate":
        if self.kind in ROTATION_KINDS:
            return Gate(self.kind, self.qubits, -self.angle)
        # the remaining kinds are involutions
        return self

    def remapped(self, mapping: dict[int, int]) -> "Gate":
        return Gate(self.kind, tuple(mapping[q] for q in self.qubits), self.angle)


@dataclass(frozen=True)
class Circuit:
    width: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self) -> None:
        if self.width < 1:
            raise ValueError("circuit width must be >= 1")
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if max(g.qubits) >= self.width:
                raise ValueError(f"gate {g} exceeds width {self.width}")

    @property
    def n_gates(self) -> int:
        return len(self.gates)

    def inverse(self) -> "Circuit":
        """The exact circuit inverse: gate order reversed, angles negated."""
        return Circuit(self.width, tuple(g.inverse() for g in reversed(self.gates)))

    def remapped(self, mapping: dict[int, int], width: int) -> "Circuit":
        return Circuit(width, tuple(g.remapped(mapping) for g in self.gates))

    def widened(self, width: int) -> "Circuit":
        if width < self.width:
            raise ValueError("widened cannot shrink a circuit")
        return Circuit(width, self.gates)

    def concat(self, other: "Circuit") -> "Circuit":
        if other.width != self.width:
            raise ValueError("width mismatch in concat")
        return Circuit(self.width, self.gates + other.gates)

    def to_json_dict(self) -> dict:
        return {
            "width": self.width,
            "gates": [
                {"kind": g.kind, "qubits": list(g.qubits), "angle": g.angle}
                for g in self.gates
            ],
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "Circuit":
        gates = tuple(
            Gate(g["kind"], tuple(g["qubits"]), g.get("angle")) for g in doc["gates"]
        )
        return cls(int(doc["width"]), gates)
