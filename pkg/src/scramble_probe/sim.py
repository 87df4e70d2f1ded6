"""State simulation: pure statevectors and density matrices under circuits.

Pure states are complex amplitude vectors over 2^width basis states (qubit
0 = most significant bit); mixed states are 2^width x 2^width Hermitian
matrices.  Gates are applied through the kernel backend selected in
`backends`.  On the mixed path an optional depolarizing channel acts after
every gate on that gate's support:

    rho -> (1 - lam) rho + lam (I / 2^k) (x) tr_gate(rho),

with lam = min(scale * rate, 1) and k the gate arity.  Noise on a pure
state is an error; promote to a density matrix first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import backends
from .circuits import (
    CNOT,
    CZ,
    HADAMARD,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    ROT_X,
    ROT_Y,
    ROT_Z,
    ROT_ZZ,
    Circuit,
    Gate,
)

_SQRT_HALF = math.sqrt(0.5)


@dataclass(frozen=True)
class NoiseModel:
    """Per-gate depolarizing noise with base rate and a scale multiplier."""

    rate: float
    scale: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.rate <= 1.0:
            raise ValueError(f"base rate must lie in [0, 1], got {self.rate}")
        if self.scale < 0.0:
            raise ValueError(f"scale must be >= 0, got {self.scale}")

    @property
    def effective_rate(self) -> float:
        return min(self.scale * self.rate, 1.0)

    def scaled(self, scale: float) -> "NoiseModel":
        return replace(self, scale=scale)


@dataclass
class QuantumState:
    """Pure (1-D amplitudes) or mixed (2-D matrix) state on `width` qubits."""

    width: int
    data: np.ndarray

    def __post_init__(self) -> None:
        d = 2**self.width
        self.data = np.ascontiguousarray(self.data, dtype=np.complex128)
        if self.data.shape not in ((d,), (d, d)):
            raise ValueError(
                f"state on {self.width} qubits needs shape {(d,)} or {(d, d)}, "
                f"got {self.data.shape}"
            )

    @property
    def is_mixed(self) -> bool:
        return self.data.ndim == 2

    @classmethod
    def zero(cls, width: int) -> "QuantumState":
        amps = np.zeros(2**width, dtype=np.complex128)
        amps[0] = 1.0
        return cls(width, amps)

    @classmethod
    def maximally_mixed(cls, width: int) -> "QuantumState":
        d = 2**width
        return cls(width, np.eye(d, dtype=np.complex128) / d)

    def to_density(self) -> "QuantumState":
        if self.is_mixed:
            return self.copy()
        return QuantumState(self.width, np.outer(self.data, self.data.conj()))

    def copy(self) -> "QuantumState":
        return QuantumState(self.width, self.data.copy())

    def probabilities(self) -> np.ndarray:
        """Computational-basis probabilities (diagonal for mixed states)."""
        if self.is_mixed:
            return np.diagonal(self.data).real.copy()
        return (self.data.real**2 + self.data.imag**2).copy()


def _one_qubit_entries(kind: str, angle: float | None):
    if kind == ROT_X:
        c, s = math.cos(angle / 2), math.sin(angle / 2)
        return (c + 0j, -1j * s, -1j * s, c + 0j)
    if kind == ROT_Y:
        c, s = math.cos(angle / 2), math.sin(angle / 2)
        return (c + 0j, -s + 0j, s + 0j, c + 0j)
    if kind == ROT_Z:
        p = np.exp(-0.5j * angle)
        return (p, 0j, 0j, p.conjugate())
    if kind == PAULI_X:
        return (0j, 1 + 0j, 1 + 0j, 0j)
    if kind == PAULI_Y:
        return (0j, -1j, 1j, 0j)
    if kind == PAULI_Z:
        return (1 + 0j, 0j, 0j, -1 + 0j)
    if kind == HADAMARD:
        h = _SQRT_HALF + 0j
        return (h, h, h, -h)
    raise ValueError(f"not a one-qubit kind: {kind}")


def _diag2_entries(kind: str, angle: float | None):
    if kind == ROT_ZZ:
        p = np.exp(-0.5j * angle)
        q = p.conjugate()
        return (p, q, q, p)
    if kind == CZ:
        return (1 + 0j, 1 + 0j, 1 + 0j, -1 + 0j)
    raise ValueError(f"not a diagonal two-qubit kind: {kind}")


def apply_gate_inplace(
    a: np.ndarray, gate: Gate, width: int, *, cols: bool = False, conj: bool = False
) -> None:
    """Apply one gate to a (rows, cols) array in place.

    `cols=False` acts on a bit of the row index, `cols=True` on the column
    index (the bra side of a density matrix).  `conj=True` conjugates the
    gate entries, which together with cols=True implements rho -> rho U^dag.
    """
    K = backends.kernels()
    bit = lambda q: width - 1 - q  # noqa: E731 - row/col bit position of qubit q
    if gate.kind == CNOT:
        f = K.apply_cnot_cols if cols else K.apply_cnot_rows
        f(a, bit(gate.qubits[0]), bit(gate.qubits[1]))
        return
    if gate.kind in (ROT_ZZ, CZ):
        d = _diag2_entries(gate.kind, gate.angle)
        if conj:
            d = tuple(x.conjugate() for x in d)
        f = K.apply_diag2_cols if cols else K.apply_diag2_rows
        f(a, d[0], d[1], d[2], d[3], bit(gate.qubits[0]), bit(gate.qubits[1]))
        return
    u = _one_qubit_entries(gate.kind, gate.angle)
    if conj:
        u = tuple(x.conjugate() for x in u)
    f = K.apply_1q_cols if cols else K.apply_1q_rows
    f(a, u[0], u[1], u[2], u[3], bit(gate.qubits[0]))


def depolarize_inplace(rho: np.ndarray, qubits: tuple[int, ...], lam: float, width: int) -> None:
    """Depolarize the given qubits of a density matrix in place."""
    if lam == 0.0:
        return
    k = len(qubits)
    t = rho.reshape((2,) * (2 * width))
    row_sub = list(range(width))
    col_sub = [q if q in qubits else width + q for q in range(width)]
    keep_rows = [q for q in range(width) if q not in qubits]
    out_sub = keep_rows + [width + q for q in keep_rows]
    reduced = np.einsum(t, row_sub + col_sub, out_sub)
    filled = np.zeros_like(t)
    idx = [slice(None)] * (2 * width)
    for pattern in range(2**k):
        for i, q in enumerate(qubits):
            b = (pattern >> i) & 1
            idx[q] = b
            idx[width + q] = b
        filled[tuple(idx)] = reduced / (2**k)
    rho *= 1.0 - lam
    rho += lam * filled.reshape(rho.shape)


def apply_circuit(
    state: QuantumState, circuit: Circuit, noise: NoiseModel | None = None
) -> QuantumState:
    """Run a circuit on a copy of the state and return the result."""
    if circuit.width != state.width:
        raise ValueError(f"circuit width {circuit.width} != state width {state.width}")
    if noise is not None and not state.is_mixed:
        raise ValueError("noisy evolution requires a density-matrix state")
    out = state.copy()
    if out.is_mixed:
        lam = noise.effective_rate if noise is not None else 0.0
        for gate in circuit.gates:
            apply_gate_inplace(out.data, gate, state.width)
            apply_gate_inplace(out.data, gate, state.width, cols=True, conj=True)
            if lam != 0.0:
                depolarize_inplace(out.data, gate.qubits, lam, state.width)
    else:
        view = out.data.reshape(-1, 1)
        for gate in circuit.gates:
            apply_gate_inplace(view, gate, state.width)
    return out


@dataclass(frozen=True)
class RegisterLayout:
    """Qubit register for the measurement protocol: a chain plus one ancilla.

    Chain site s (1-based) sits on qubit s-1; the single ancilla, paired
    with the probed site, is the last qubit.
    """

    n_sites: int
    probe_site: int

    def __post_init__(self) -> None:
        if self.n_sites < 2:
            raise ValueError("need at least two chain sites")
        if not 1 <= self.probe_site <= self.n_sites:
            raise ValueError(f"probe site {self.probe_site} out of range 1..{self.n_sites}")

    @property
    def width(self) -> int:
        return self.n_sites + 1

    @property
    def ancilla(self) -> int:
        return self.n_sites

    def qubit_of_site(self, site: int) -> int:
        if not 1 <= site <= self.n_sites:
            raise ValueError(f"site {site} out of range 1..{self.n_sites}")
        return site - 1

    def rest_qubits(self) -> list[int]:
        """System qubits other than the probed one, in site order."""
        return [s - 1 for s in range(1, self.n_sites + 1) if s != self.probe_site]


def random_state_circuit(width: int, blocks: int, rng) -> Circuit:
    """Random-state preparation circuit: `blocks` repetitions of one layer of
    single-qubit rotations (axis uniform over X/Y/Z, angle uniform over
    [0, 2pi)) followed by a CZ brickwork layer with alternating offset.

    `rng` is a numpy Generator or a seed; the draw order is fixed (per qubit:
    axis then angle), so a given seed always yields the same circuit.
    """
    if width < 1:
        raise ValueError("width must be >= 1")
    if blocks < 0:
        raise ValueError("blocks must be >= 0")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    axis_kinds = (ROT_X, ROT_Y, ROT_Z)
    gates: list[Gate] = []
    for block in range(blocks):
        for q in range(width):
            kind = axis_kinds[int(rng.integers(0, 3))]
            gates.append(Gate(kind, (q,), float(rng.uniform(0.0, 2.0 * math.pi))))
        start = block % 2
        for q in range(start, width - 1, 2):
            gates.append(Gate(CZ, (q, q + 1)))
    return Circuit(width, tuple(gates))


def preparation_circuit(layout: RegisterLayout, psi: Circuit) -> Circuit:
    """Bell pair on (probe, ancilla) and `psi` on the remaining chain qubits."""
    if psi.width != layout.n_sites - 1:
        raise ValueError(
            f"psi must act on the {layout.n_sites - 1} unprobed sites, "
            f"got width {psi.width}"
        )
    probe_q = layout.qubit_of_site(layout.probe_site)
    gates = [Gate(HADAMARD, (probe_q,)), Gate(CNOT, (probe_q, layout.ancilla))]
    mapping = {i: q for i, q in enumerate(layout.rest_qubits())}
    gates.extend(g.remapped(mapping) for g in psi.gates)
    return Circuit(layout.width, tuple(gates))


def prepare_initial(layout: RegisterLayout, psi: Circuit) -> QuantumState:
    """|B0> on the (probe, ancilla) pair tensored with psi|0...0> on the rest."""
    return apply_circuit(QuantumState.zero(layout.width), preparation_circuit(layout, psi))


def exact_initial_density(layout: RegisterLayout) -> QuantumState:
    """The ensemble-free initial state: |B0><B0| on the pair, I/2^(N-1) elsewhere."""
    bell = np.zeros(4, dtype=np.complex128)
    bell[0] = bell[3] = _SQRT_HALF
    pair = np.outer(bell, bell.conj())
    rest = 2 ** (layout.n_sites - 1)
    rho = np.kron(pair, np.eye(rest, dtype=np.complex128) / rest)
    # kron order above: [probe qubit, ancilla, remaining chain qubits]
    current = [layout.qubit_of_site(layout.probe_site), layout.ancilla] + layout.rest_qubits()
    w = layout.width
    t = rho.reshape((2,) * (2 * w))
    axes = [current.index(r) for r in range(w)]
    t = t.transpose(axes + [a + w for a in axes])
    return QuantumState(w, np.ascontiguousarray(t.reshape(2**w, 2**w)))


# Bell-measurement outcome order: the basis change cnot(q0->q1), hadamard(q0)
# maps Bell state i to the bit pairs 00, 01, 11, 10 respectively.
_BELL_OUTCOME_ORDER = (0, 1, 3, 2)


def _bell_marginal(probs: np.ndarray, width: int, q0: int, q1: int) -> np.ndarray:
    t = probs.reshape((2,) * width + (-1,))
    rest = [q for q in range(width) if q not in (q0, q1)]
    m = t.transpose([q0, q1] + rest + [width]).reshape(4, -1, t.shape[-1]).sum(axis=1)
    return m[_BELL_OUTCOME_ORDER, :]


def bell_probs(state: QuantumState, q0: int, q1: int) -> np.ndarray:
    """Bell-basis outcome probabilities for the qubit pair (q0, q1).

    Ordering matches the Bell states generated from |B0> by I, X, Y, Z on
    the first member of the pair.
    """
    if q0 == q1 or not (0 <= q0 < state.width and 0 <= q1 < state.width):
        raise ValueError(f"invalid qubit pair ({q0}, {q1})")
    basis_change = Circuit(state.width, (Gate(CNOT, (q0, q1)), Gate(HADAMARD, (q0,))))
    rotated = apply_circuit(state, basis_change)
    p = _bell_marginal(rotated.probabilities().reshape(-1, 1), state.width, q0, q1)[:, 0]
    total = float(p.sum())
    if abs(total - 1.0) > 1e-6:
        raise ValueError(f"measurement probabilities sum to {total!r}")
    return p / total


def sample_shots(probs: np.ndarray, shots: int, rng) -> np.ndarray:
    """Empirical outcome frequencies from `shots` draws; shots=0 means exact."""
    probs = np.asarray(probs, dtype=np.float64)
    if shots < 0:
        raise ValueError("shots must be >= 0")
    if shots == 0:
        return probs.copy()
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    counts = rng.multinomial(shots, probs / probs.sum())
    return counts / float(shots)
