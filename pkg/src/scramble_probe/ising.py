"""Mixed-field Ising chain: Hamiltonian assembly, exact and Trotter evolution.

The chain Hamiltonian with open boundaries is

    H = J sum_n Z_n Z_{n+1} + h_x sum_n X_n + h_z sum_n Z_n .

`exact_propagator` diagonalises the dense H once per spec (cached) and
exponentiates the spectrum.  `trotter_circuit` builds the first-order
splitting of exp(-i * sign * H * t) with a fixed per-step layer order
(ZZ bonds left to right, then X rotations, then Z rotations); the
sign=-1 circuit is the exact gate-by-gate inverse of the sign=+1 one, so
a forward/backward pair composes to the identity up to rounding.
Rotation gates use the half-angle convention exp(-i * angle * P / 2), so a
term coefficient g contributes the angle 2 * g * dt per step.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .circuits import ROT_X, ROT_Z, ROT_ZZ, Circuit, Gate
from .pauli import OperatorExpansion, PauliString, expand_operator


@dataclass(frozen=True)
class HamiltonianSpec:
    n_sites: int
    coupling_j: float
    field_hx: float
    field_hz: float
    terms: tuple[tuple[PauliString, float], ...]


def build_hamiltonian(
    n_sites: int,
    coupling_j: float = 1.0,
    field_hx: float = 1.0,
    field_hz: float = 0.0,
) -> HamiltonianSpec:
    """Assemble the term list: N-1 ZZ bonds, N X fields, and N Z fields
    (Z terms are omitted entirely when field_hz == 0)."""
    if n_sites < 2:
        raise ValueError("the chain needs at least two sites")
    terms: list[tuple[PauliString, float]] = []
    for n in range(1, n_sites):
        letters = [0] * n_sites
        letters[n - 1] = letters[n] = 3
        terms.append((PauliString(tuple(letters)), coupling_j))
    for n in range(1, n_sites + 1):
        terms.append((PauliString.single_site("X", n, n_sites), field_hx))
    if field_hz != 0.0:
        for n in range(1, n_sites + 1):
            terms.append((PauliString.single_site("Z", n, n_sites), field_hz))
    return HamiltonianSpec(n_sites, coupling_j, field_hx, field_hz, tuple(terms))


def dense_hamiltonian(spec: HamiltonianSpec) -> np.ndarray:
    d = 2**spec.n_sites
    h = np.zeros((d, d), dtype=np.complex128)
    for word, coeff in spec.terms:
        h += coeff * word.dense()
    return h


@lru_cache(maxsize=64)
def _eigh(spec: HamiltonianSpec) -> tuple[np.ndarray, np.ndarray]:
    # read-mostly memo: recomputing on a cache miss is harmless, callers
    # only ever read the returned arrays
    vals, vecs = np.linalg.eigh(dense_hamiltonian(spec))
    vals.setflags(write=False)
    vecs.setflags(write=False)
    return vals, vecs


def exact_propagator(spec: HamiltonianSpec, t: float) -> np.ndarray:
    """U(t) = exp(-i H t) via the cached eigendecomposition."""
    vals, vecs = _eigh(spec)
    phases = np.exp(-1j * vals * t)
    return (vecs * phases) @ vecs.conj().T


def heisenberg_evolve(
    op: np.ndarray | PauliString, spec: HamiltonianSpec, t: float
) -> OperatorExpansion:
    """Pauli expansion of O(t) = exp(iHt) O exp(-iHt)."""
    dense = op.dense() if isinstance(op, PauliString) else np.asarray(op)
    u = exact_propagator(spec, t)
    evolved = u.conj().T @ dense @ u
    return expand_operator(evolved, spec.n_sites)


@dataclass(frozen=True)
class TrotterPlan:
    """Step layout for first-order Trotter evolution: steps * dt = t."""

    dt: float
    t: float
    steps: int

    # per-step layer order, identical for every step
    ordering = ("zz", "x", "z")

    def __post_init__(self) -> None:
        if self.dt <= 0.0:
            raise ValueError("dt must be positive")
        if self.steps < 0:
            raise ValueError("steps must be >= 0")
        if abs(self.steps * self.dt - self.t) > 1e-12:
            raise ValueError(
                f"steps * dt = {self.steps * self.dt!r} does not reproduce t = {self.t!r}"
            )

    @classmethod
    def for_time(cls, t: float, dt: float) -> "TrotterPlan":
        if dt <= 0.0:
            raise ValueError("dt must be positive")
        if t < 0.0:
            raise ValueError("t must be >= 0; direction is carried by the circuit sign")
        return cls(dt=dt, t=t, steps=int(round(t / dt)))


def trotter_circuit(spec: HamiltonianSpec, plan: TrotterPlan, sign: int = 1) -> Circuit:
    """First-order splitting circuit for exp(-i * sign * H * plan.t).

    sign=+1 lays out plan.steps repetitions of (ZZ layer, X layer, Z layer);
    sign=-1 returns the exact inverse circuit (reversed order, negated
    angles), so the two directions cancel gate by gate.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    n = spec.n_sites
    zz_angle = 2.0 * spec.coupling_j * plan.dt
    x_angle = 2.0 * spec.field_hx * plan.dt
    z_angle = 2.0 * spec.field_hz * plan.dt
    step: list[Gate] = []
    for q in range(n - 1):
        step.append(Gate(ROT_ZZ, (q, q + 1), zz_angle))
    for q in range(n):
        step.append(Gate(ROT_X, (q,), x_angle))
    if spec.field_hz != 0.0:
        for q in range(n):
            step.append(Gate(ROT_Z, (q,), z_angle))
    forward = Circuit(n, tuple(step) * plan.steps)
    return forward if sign == 1 else forward.inverse()


def trotter_propagator(spec: HamiltonianSpec, plan: TrotterPlan, sign: int = 1) -> np.ndarray:
    """Dense matrix of the Trotter circuit (small systems; used for checks)."""
    from .sim import apply_gate_inplace  # local import to avoid a cycle

    u = np.eye(2**spec.n_sites, dtype=np.complex128)
    for gate in trotter_circuit(spec, plan, sign).gates:
        apply_gate_inplace(u, gate, spec.n_sites)
    return u
