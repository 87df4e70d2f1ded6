"""The sampled measurement protocol for operator scrambling.

For a probed site n the register holds the N chain qubits plus one ancilla.
The initial state is a Bell pair across (n, ancilla) tensored with the
maximally mixed state on the remaining sites; the mixed state is either
represented exactly (density backend) or approximated by an ensemble of M
random circuit states (statevector backend, one RNG stream per member).
The Heisenberg operator is realised as a circuit: forward Trotter
evolution, the operator's Pauli gate at its site, backward Trotter
evolution (the exact inverse circuit).  A Bell measurement on the pair
yields a 4-outcome distribution per operator; the Holevo quantity of the
two distributions is the scrambling measure.

All scenario entry points funnel through `grid_probs`, which marches the
state forward one Trotter step at a time and snapshots at every requested
time, so a cell evaluated alone and the same cell inside a larger grid see
exactly the same arithmetic.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .circuits import CNOT, HADAMARD, PAULI_X, PAULI_Y, PAULI_Z, Circuit, Gate
from .holevo import HolevoRecord, holevo_from_probs
from .ising import HamiltonianSpec, TrotterPlan, exact_propagator, trotter_circuit
from .pauli import PAULI_LABELS, PauliString
from .sim import (
    NoiseModel,
    RegisterLayout,
    _bell_marginal,
    apply_gate_inplace,
    depolarize_inplace,
    exact_initial_density,
    random_state_circuit,
)

_PAULI_GATE_KIND = {"X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}

THREADS_ENV = "SCRAMBLE_PROBE_THREADS"


def _thread_count() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1

ENSEMBLE = "ensemble"
EXACT = "exact"
TROTTER = "trotter"


@dataclass(frozen=True)
class ProtocolConfig:
    hamiltonian: HamiltonianSpec
    op_site: int
    op_pair: tuple[str, str] = ("I", "X")
    dt: float = 0.1
    ensemble_size: int = 500
    depth: int = 8
    shots: int = 0
    noise: NoiseModel | None = None
    seed: int = 0
    initialization: str = ENSEMBLE
    evolution: str = TROTTER
    probe_site: int | None = None

    def __post_init__(self) -> None:
        n = self.hamiltonian.n_sites
        if not 1 <= self.op_site <= n:
            raise ValueError(f"operator site {self.op_site} out of range 1..{n}")
        for label in self.op_pair:
            if label not in PAULI_LABELS:
                raise ValueError(f"operator labels must be single letters IXYZ, got {label!r}")
        if len(self.op_pair) != 2:
            raise ValueError("op_pair must hold exactly two labels")
        if self.ensemble_size < 1:
            raise ValueError("ensemble size must be >= 1")
        if self.depth < 0 or self.shots < 0:
            raise ValueError("depth and shots must be >= 0")
        if self.initialization not in (ENSEMBLE, EXACT):
            raise ValueError(f"initialization must be {ENSEMBLE!r} or {EXACT!r}")
        if self.evolution not in (TROTTER, EXACT):
            raise ValueError(f"evolution must be {TROTTER!r} or {EXACT!r}")
        if self.probe_site is not None and not 1 <= self.probe_site <= n:
            raise ValueError(f"probe site {self.probe_site} out of range 1..{n}")
        if self.evolution == EXACT and self.noise is not None:
            raise ValueError("noise requires gate-level (trotter) evolution")


def member_rng(master_seed: int, member: int) -> np.random.Generator:
    """Independent, schedule-free RNG stream for one ensemble member."""
    return np.random.default_rng(np.random.SeedSequence(entropy=master_seed, spawn_key=(member,)))


def _shot_rng(cfg: ProtocolConfig, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=cfg.seed, spawn_key=(7,) + key))


def evolve_operator_circuit(
    spec: HamiltonianSpec, label: str, site: int, plan: TrotterPlan
) -> Circuit:
    """Forward Trotter circuit, the operator's Pauli gate, backward circuit.

    Applied to a state this realises the Heisenberg-evolved operator at
    plan.t; for the identity label the middle gate is omitted and the two
    halves cancel gate by gate.
    """
    if label not in PAULI_LABELS:
        raise ValueError(f"operator label must be one of IXYZ, got {label!r}")
    if not 1 <= site <= spec.n_sites:
        raise ValueError(f"site {site} out of range 1..{spec.n_sites}")
    forward = trotter_circuit(spec, plan, 1)
    middle: tuple[Gate, ...] = ()
    if label != "I":
        middle = (Gate(_PAULI_GATE_KIND[label], (site - 1,)),)
    backward = trotter_circuit(spec, plan, -1)
    return Circuit(spec.n_sites, forward.gates + middle + backward.gates)


def _psi_columns(cfg: ProtocolConfig) -> np.ndarray:
    """Statevectors of the M random ensemble circuits on the N-1 rest qubits."""
    n_rest = cfg.hamiltonian.n_sites - 1
    d = 2**n_rest
    cols = np.zeros((d, cfg.ensemble_size), dtype=np.complex128)
    for m in range(cfg.ensemble_size):
        psi = random_state_circuit(n_rest, cfg.depth, member_rng(cfg.seed, m))
        vec = np.zeros(d, dtype=np.complex128)
        vec[0] = 1.0
        view = vec.reshape(-1, 1)
        for g in psi.gates:
            apply_gate_inplace(view, g, n_rest)
        cols[:, m] = vec
    return cols


def _assemble_pair_batch(psi_cols: np.ndarray, layout: RegisterLayout) -> np.ndarray:
    """Tensor the Bell pair onto every member column and order the register."""
    w = layout.width
    bell = np.zeros((2, 2), dtype=np.complex128)
    bell[0, 0] = bell[1, 1] = np.sqrt(0.5)
    rest_shape = (2,) * (layout.n_sites - 1) + (psi_cols.shape[1],)
    t = np.multiply.outer(bell, psi_cols.reshape(rest_shape))
    current = [layout.qubit_of_site(layout.probe_site), layout.ancilla] + layout.rest_qubits()
    axes = [current.index(r) for r in range(w)] + [w]
    return np.ascontiguousarray(t.transpose(axes).reshape(2**w, -1))


def _bell_measure_pure(
    cfg: ProtocolConfig, snap: np.ndarray, layout: RegisterLayout, steps: int, label: str
) -> np.ndarray:
    """Bell-basis distribution averaged over the member columns of `snap`."""
    w = layout.width
    q0 = layout.qubit_of_site(layout.probe_site)
    apply_gate_inplace(snap, Gate(CNOT, (q0, layout.ancilla)), w)
    apply_gate_inplace(snap, Gate(HADAMARD, (q0,)), w)
    if cfg.shots == 0:
        from . import backends

        p_rows = backends.kernels().probabilities_rows(snap)
        probs = _bell_marginal(p_rows.reshape(-1, 1), w, q0, layout.ancilla)[:, 0]
    else:
        per_member = _bell_marginal(
            snap.real**2 + snap.imag**2, w, q0, layout.ancilla
        )
        acc = np.zeros(4)
        for m in range(per_member.shape[1]):
            rng = _shot_rng(cfg, m, layout.probe_site, steps, PAULI_LABELS.index(label))
            p = per_member[:, m]
            acc += rng.multinomial(cfg.shots, p / p.sum())
        probs = acc / cfg.shots
    return probs / probs.sum()


def _bell_measure_density(
    cfg: ProtocolConfig, rho: np.ndarray, layout: RegisterLayout, steps: int, label: str
) -> np.ndarray:
    w = layout.width
    q0 = layout.qubit_of_site(layout.probe_site)
    apply_gate_inplace(rho, Gate(CNOT, (q0, layout.ancilla)), w)
    apply_gate_inplace(rho, Gate(CNOT, (q0, layout.ancilla)), w, cols=True, conj=True)
    apply_gate_inplace(rho, Gate(HADAMARD, (q0,)), w)
    apply_gate_inplace(rho, Gate(HADAMARD, (q0,)), w, cols=True, conj=True)
    diag = np.ascontiguousarray(np.diagonal(rho).real)
    probs = _bell_marginal(diag.reshape(-1, 1), w, q0, layout.ancilla)[:, 0]
    if cfg.shots > 0:
        rng = _shot_rng(cfg, layout.probe_site, steps, PAULI_LABELS.index(label))
        probs = rng.multinomial(cfg.shots, probs / probs.sum()) / cfg.shots
    return probs / probs.sum()


def _apply_gate_mixed(rho: np.ndarray, gate: Gate, width: int, lam: float) -> None:
    apply_gate_inplace(rho, gate, width)
    apply_gate_inplace(rho, gate, width, cols=True, conj=True)
    if lam != 0.0:
        depolarize_inplace(rho, gate.qubits, lam, width)


def _march_pure_site(
    cfg: ProtocolConfig,
    layout: RegisterLayout,
    batch: np.ndarray,
    labels: list[str],
    steps_list: list[int],
    step_gates: tuple[Gate, ...],
    inv_step_gates: tuple[Gate, ...],
) -> np.ndarray:
    w = layout.width
    out = np.zeros((len(labels), len(steps_list), 4))
    s_cur = 0
    for ti, s in enumerate(steps_list):
        while s_cur < s:
            for g in step_gates:
                apply_gate_inplace(batch, g, w)
            s_cur += 1
        for li, label in enumerate(labels):
            snap = batch.copy()
            if label != "I":
                gate = Gate(_PAULI_GATE_KIND[label], (layout.qubit_of_site(cfg.op_site),))
                apply_gate_inplace(snap, gate, w)
            for _ in range(s_cur):
                for g in inv_step_gates:
                    apply_gate_inplace(snap, g, w)
            out[li, ti] = _bell_measure_pure(cfg, snap, layout, s_cur, label)
    return out


def _march_density(
    cfg: ProtocolConfig,
    layout: RegisterLayout,
    rho0: np.ndarray,
    labels: list[str],
    steps_list: list[int],
    step_gates: tuple[Gate, ...],
    inv_step_gates: tuple[Gate, ...],
    sample: bool,
) -> np.ndarray:
    """March one density matrix; `sample` marks the final aggregate for shots."""
    w = layout.width
    lam = cfg.noise.effective_rate if cfg.noise is not None else 0.0
    out = np.zeros((len(labels), len(steps_list), 4))
    rho = rho0.copy()
    s_cur = 0
    for ti, s in enumerate(steps_list):
        while s_cur < s:
            for g in step_gates:
                _apply_gate_mixed(rho, g, w, lam)
            s_cur += 1
        for li, label in enumerate(labels):
            snap = rho.copy()
            if label != "I":
                gate = Gate(_PAULI_GATE_KIND[label], (layout.qubit_of_site(cfg.op_site),))
                _apply_gate_mixed(snap, gate, w, lam)
            for _ in range(s_cur):
                for g in inv_step_gates:
                    _apply_gate_mixed(snap, g, w, lam)
            if sample:
                out[li, ti] = _bell_measure_density(cfg, snap, layout, s_cur, label)
            else:
                out[li, ti] = _exact_density_probs(snap, layout)
    return out


def _exact_density_probs(rho: np.ndarray, layout: RegisterLayout) -> np.ndarray:
    w = layout.width
    q0 = layout.qubit_of_site(layout.probe_site)
    apply_gate_inplace(rho, Gate(CNOT, (q0, layout.ancilla)), w)
    apply_gate_inplace(rho, Gate(CNOT, (q0, layout.ancilla)), w, cols=True, conj=True)
    apply_gate_inplace(rho, Gate(HADAMARD, (q0,)), w)
    apply_gate_inplace(rho, Gate(HADAMARD, (q0,)), w, cols=True, conj=True)
    diag = np.ascontiguousarray(np.diagonal(rho).real)
    return _bell_marginal(diag.reshape(-1, 1), w, q0, layout.ancilla)[:, 0]


def _exact_evolution_grid(
    cfg: ProtocolConfig, labels: list[str], sites: list[int], times: list[float]
) -> np.ndarray:
    spec = cfg.hamiltonian
    n = spec.n_sites
    out = np.zeros((len(labels), len(sites), len(times), 4))
    psi_cols = _psi_columns(cfg) if cfg.initialization == ENSEMBLE else None
    for si, site in enumerate(sites):
        layout = RegisterLayout(n, site)
        if cfg.initialization == ENSEMBLE:
            batch0 = _assemble_pair_batch(psi_cols, layout)
        else:
            rho_init = exact_initial_density(layout).data
        for ti, t in enumerate(times):
            u = exact_propagator(spec, t)
            for li, label in enumerate(labels):
                if label == "I":
                    op_emb = None
                else:
                    op = PauliString.single_site(label, cfg.op_site, n).dense()
                    op_t = u.conj().T @ op @ u
                    op_emb = np.kron(op_t, np.eye(2, dtype=np.complex128))
                steps = TrotterPlan.for_time(t, cfg.dt).steps
                if cfg.initialization == ENSEMBLE:
                    snap = batch0.copy() if op_emb is None else op_emb @ batch0
                    out[li, si, ti] = _bell_measure_pure(cfg, snap, layout, steps, label)
                else:
                    snap = rho_init.copy() if op_emb is None else op_emb @ rho_init @ op_emb.conj().T
                    snap = np.ascontiguousarray(snap)
                    out[li, si, ti] = _bell_measure_density(cfg, snap, layout, steps, label)
    return out


def grid_probs(
    cfg: ProtocolConfig, labels: list[str], sites: list[int], times: list[float]
) -> np.ndarray:
    """Measured Bell distributions, shape (labels, sites, times, 4).

    This is the single evaluation path behind measure_probs, heatmap and
    the mitigation runners; identical config and seed give bit-identical
    output no matter how cells are grouped into calls.
    """
    spec = cfg.hamiltonian
    for label in labels:
        if label not in PAULI_LABELS:
            raise ValueError(f"operator labels must be single letters IXYZ, got {label!r}")
    for site in sites:
        if not 1 <= site <= spec.n_sites:
            raise ValueError(f"site {site} out of range 1..{spec.n_sites}")
    order = sorted(range(len(times)), key=lambda i: times[i])
    uniq_times: list[float] = []
    slot: list[int] = []
    for i in order:
        if not uniq_times or times[i] != uniq_times[-1]:
            uniq_times.append(times[i])
        slot.append(len(uniq_times) - 1)
    plans = [TrotterPlan.for_time(t, cfg.dt) for t in uniq_times]
    steps_list = [p.steps for p in plans]

    if cfg.evolution == EXACT:
        res = _exact_evolution_grid(cfg, labels, sites, uniq_times)
    else:
        one_step = trotter_circuit(spec, TrotterPlan(dt=cfg.dt, t=cfg.dt, steps=1), 1)
        step_gates = one_step.gates
        inv_step_gates = one_step.inverse().gates
        res = np.zeros((len(labels), len(sites), len(uniq_times), 4))
        psi_cols = None
        if cfg.initialization == ENSEMBLE:
            psi_cols = _psi_columns(cfg)

        def _run_site(si: int, site: int) -> None:
            # writes only res[:, si]; safe to run sites on a thread pool
            layout = RegisterLayout(spec.n_sites, site)
            if cfg.initialization == EXACT:
                rho0 = exact_initial_density(layout).data
                res[:, si] = _march_density(
                    cfg, layout, rho0, labels, steps_list, step_gates, inv_step_gates, True
                )
            elif cfg.noise is None:
                batch = _assemble_pair_batch(psi_cols, layout)
                res[:, si] = _march_pure_site(
                    cfg, layout, batch, labels, steps_list, step_gates, inv_step_gates
                )
            else:
                # noisy ensemble: one density evolution per member (slow path)
                batch = _assemble_pair_batch(psi_cols, layout)
                acc = np.zeros((len(labels), len(uniq_times), 4))
                for m in range(cfg.ensemble_size):
                    col = batch[:, m]
                    rho0 = np.outer(col, col.conj())
                    member = _march_density(
                        cfg, layout, rho0, labels, steps_list, step_gates, inv_step_gates, False
                    )
                    if cfg.shots > 0:
                        for li, label in enumerate(labels):
                            for ti in range(len(uniq_times)):
                                rng = _shot_rng(
                                    cfg,
                                    m,
                                    site,
                                    steps_list[ti],
                                    PAULI_LABELS.index(label),
                                )
                                p = member[li, ti]
                                member[li, ti] = (
                                    rng.multinomial(cfg.shots, p / p.sum()) / cfg.shots
                                )
                    acc += member
                acc /= cfg.ensemble_size
                res[:, si] = acc / acc.sum(axis=-1, keepdims=True)

        workers = min(_thread_count(), len(sites))
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                list(pool.map(lambda p: _run_site(*p), enumerate(sites)))
        else:
            for si, site in enumerate(sites):
                _run_site(si, site)

    out = np.zeros((len(labels), len(sites), len(times), 4))
    for rank, i in enumerate(order):
        out[:, :, i] = res[:, :, slot[rank]]
    return out


def measure_probs(cfg: ProtocolConfig, label: str, t: float, site: int) -> np.ndarray:
    """Bell distribution for one operator label at one (time, probe site)."""
    return grid_probs(cfg, [label], [site], [t])[0, 0, 0]


def holevo_estimate(cfg: ProtocolConfig, t: float, site: int) -> HolevoRecord:
    """Protocol chi at one cell from the two measured distributions."""
    g = grid_probs(cfg, list(cfg.op_pair), [site], [t])
    p1, p2 = g[0, 0, 0], g[1, 0, 0]
    return HolevoRecord(
        site=site,
        time=t,
        probs_1=p1,
        probs_2=p2,
        chi=holevo_from_probs(p1, p2),
        variant="protocol-sampled",
    )


@dataclass
class HeatmapGrid:
    """chi and measured distributions over (site, time) cells."""

    sites: tuple[int, ...]
    times: tuple[float, ...]
    chi: np.ndarray
    probs_1: np.ndarray
    probs_2: np.ndarray
    variant: str

    def record(self, si: int, ti: int) -> HolevoRecord:
        return HolevoRecord(
            site=self.sites[si],
            time=self.times[ti],
            probs_1=self.probs_1[si, ti],
            probs_2=self.probs_2[si, ti],
            chi=float(self.chi[si, ti]),
            variant=self.variant,
        )


def heatmap(
    cfg: ProtocolConfig, times: list[float], sites: list[int] | None = None
) -> HeatmapGrid:
    """Protocol chi over all requested sites and times."""
    if sites is None:
        sites = list(range(1, cfg.hamiltonian.n_sites + 1))
    g = grid_probs(cfg, list(cfg.op_pair), sites, times)
    chi = np.zeros((len(sites), len(times)))
    for si in range(len(sites)):
        for ti in range(len(times)):
            chi[si, ti] = holevo_from_probs(g[0, si, ti], g[1, si, ti])
    return HeatmapGrid(
        sites=tuple(sites),
        times=tuple(times),
        chi=chi,
        probs_1=g[0],
        probs_2=g[1],
        variant="protocol-sampled",
    )


def protocol_operator_size(cfg: ProtocolConfig, t: float, which: int = 1) -> float:
    """Size estimate sum_n (1 - P0 at n) for one member of the operator pair
    (`which` indexes op_pair; default: the second, probed operator)."""
    label = cfg.op_pair[which]
    sites = list(range(1, cfg.hamiltonian.n_sites + 1))
    g = grid_probs(cfg, [label], sites, [t])
    return float(np.sum(1.0 - g[0, :, 0, 0]))
