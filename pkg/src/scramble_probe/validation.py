"""Fast self-checks covering every module's invariants at small width.

Each check raises AssertionError on violation; `run_checks` turns the
batch into a (name, passed, detail) report.  Everything here runs at
n_sites <= 4 in a few seconds, so the suite doubles as a smoke test for
fresh installs and as a mutation canary: flipping a sign in the entropy
chain or breaking a kernel makes at least one check fail.
"""

from __future__ import annotations

import numpy as np

from . import backends
from .circuits import CNOT, HADAMARD, ROT_X, ROT_Y, ROT_Z, Circuit, Gate
from .holevo import (
    BELL_BASIS,
    chi_of_density,
    holevo_from_probs,
    reduced_site_matrix,
    shannon_entropy,
    von_neumann_entropy,
)
from .ising import (
    TrotterPlan,
    build_hamiltonian,
    exact_propagator,
    trotter_circuit,
    trotter_propagator,
)
from .mitigation import mitigate, richardson_scheme
from .pauli import (
    PAULI_MATRICES,
    OperatorExpansion,
    PauliString,
    expand_operator,
    operator_size,
    reconstruct_dense,
    site_density,
)
from .protocol import ProtocolConfig, grid_probs
from .sim import (
    NoiseModel,
    QuantumState,
    apply_circuit,
    bell_probs,
    random_state_circuit,
)

# chi of any operator pair (I, O) once O's non-identity density reaches 3/4;
# equals H((5,1,1,1)/8) - 1, the long-time plateau of fully spread operators
CHI_AT_DENSITY_3_4 = 0.5487949406953987
ENTROPY_5111_OVER_8 = 1.5487949406953987


def _random_expansion(n: int, rng) -> OperatorExpansion:
    c = rng.standard_normal(4**n)
    c /= np.linalg.norm(c)
    return OperatorExpansion(n, c)


def check_pauli_orthonormality() -> None:
    n = 2
    for a in range(4**n):
        pa = PauliString.from_index(a, n).dense()
        for b in range(4**n):
            pb = PauliString.from_index(b, n).dense()
            got = np.trace(pa @ pb).real / 2**n
            want = 1.0 if a == b else 0.0
            assert abs(got - want) < 1e-12, f"tr(P{a} P{b})/2^n = {got}"


def check_expansion_roundtrip() -> None:
    rng = np.random.default_rng(11)
    e = _random_expansion(3, rng)
    dense = reconstruct_dense(e)
    back = expand_operator(dense, 3)
    assert np.max(np.abs(back.coeffs - e.coeffs)) < 1e-10
    assert abs(e.norm_sq() - 1.0) < 1e-12


def check_site_marginals() -> None:
    rng = np.random.default_rng(12)
    e = _random_expansion(4, rng)
    total = 0.0
    for site in range(1, 5):
        dist, density = site_density(e, site)
        p = np.asarray(dist.probs)
        assert np.all(p > -1e-12) and abs(p.sum() - 1.0) < 1e-10
        assert abs(density - (1.0 - p[0])) < 1e-12
        diag = reduced_site_matrix(e, site).bell_diagonal()
        assert np.max(np.abs(diag - p)) < 1e-10, "reduced-matrix diagonal mismatch"
        total += density
    assert abs(operator_size(e) - total) < 1e-10


def check_closed_form_chain() -> None:
    rng = np.random.default_rng(13)
    for _ in range(50):
        e = _random_expansion(3, rng)
        for site in (1, 2, 3):
            dist, density = site_density(e, site)
            chi = holevo_from_probs(np.array([1.0, 0.0, 0.0, 0.0]), np.asarray(dist.probs))
            assert abs(chi - chi_of_density(density)) < 1e-10


def check_entropy_anchors() -> None:
    v = np.zeros(4)
    v[2] = 1.0
    assert abs(von_neumann_entropy(np.outer(v, v))) < 1e-12
    assert abs(von_neumann_entropy(np.eye(4) / 4) - 2.0) < 1e-12
    p = np.array([5.0, 1.0, 1.0, 1.0]) / 8.0
    assert abs(shannon_entropy(p) - ENTROPY_5111_OVER_8) < 1e-12
    assert abs(chi_of_density(0.75) - CHI_AT_DENSITY_3_4) < 1e-12
    assert abs(round(chi_of_density(0.75), 2) - 0.55) < 1e-12


def check_bell_basis() -> None:
    assert np.max(np.abs(BELL_BASIS.conj().T @ BELL_BASIS - np.eye(4))) < 1e-12
    b0 = BELL_BASIS[:, 0]
    for i in range(4):
        gen = np.kron(PAULI_MATRICES[i], np.eye(2)) @ b0
        assert np.max(np.abs(gen - BELL_BASIS[:, i])) < 1e-12, f"B^{i} generation"


def check_propagator_group() -> None:
    spec = build_hamiltonian(3, 1.0, 1.0, 0.3)
    eye = np.eye(8)
    assert np.max(np.abs(exact_propagator(spec, 0.0) - eye)) < 1e-12
    u1 = exact_propagator(spec, 0.7)
    u2 = exact_propagator(spec, 0.4)
    u12 = exact_propagator(spec, 1.1)
    assert np.max(np.abs(u1 @ u2 - u12)) < 1e-10
    assert np.max(np.abs(u1 @ u1.conj().T - eye)) < 1e-10


def check_trotter_inverse() -> None:
    spec = build_hamiltonian(3, 1.0, 1.0, 0.3)
    plan = TrotterPlan.for_time(0.5, 0.1)
    circ = Circuit(3, trotter_circuit(spec, plan, 1).gates + trotter_circuit(spec, plan, -1).gates)
    rng = np.random.default_rng(14)
    vec = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    vec /= np.linalg.norm(vec)
    state = QuantumState(3, vec.copy())
    out = apply_circuit(state, circ)
    assert np.max(np.abs(out.data - vec)) < 1e-12, "backward does not undo forward"


def check_trotter_first_order() -> None:
    spec = build_hamiltonian(3, 1.0, 1.0, 0.3)
    exact = exact_propagator(spec, 0.8)

    def err(dt: float) -> float:
        approx = trotter_propagator(spec, TrotterPlan.for_time(0.8, dt), 1)
        return float(np.max(np.abs(approx - exact)))

    ratio = err(0.1) / err(0.05)
    assert 1.5 < ratio < 2.6, f"dt-halving error ratio {ratio}"


def check_richardson_exact() -> None:
    for order in (1, 2, 3, 4):
        scheme = richardson_scheme(order)
        assert sum(scheme.gamma) == 1
        for k in range(1, order + 1):
            assert sum(g * c**k for g, c in zip(scheme.gamma, scheme.c)) == 0
    scheme = richardson_scheme(3)
    poly = lambda lam: 0.3 - 0.7 * lam + 0.2 * lam**2 - 0.05 * lam**3  # noqa: E731
    got = mitigate([poly(c * 0.01) for c in scheme.c], scheme)
    assert abs(got - poly(0.0)) < 1e-12


def check_protocol_matches_reduction() -> None:
    for hz in (0.0, 0.3):
        spec = build_hamiltonian(3, 1.0, 1.0, hz)
        cfg = ProtocolConfig(
            hamiltonian=spec,
            op_site=2,
            op_pair=("I", "X"),
            initialization="exact",
            evolution="exact",
        )
        sites = [1, 2, 3]
        g = grid_probs(cfg, ["I", "X"], sites, [0.0, 0.5])
        from .ising import heisenberg_evolve

        for ti, t in enumerate((0.0, 0.5)):
            e = heisenberg_evolve(PauliString.single_site("X", 2, 3), spec, t)
            for si, site in enumerate(sites):
                diag = reduced_site_matrix(e, site).bell_diagonal()
                assert np.max(np.abs(g[1, si, ti] - diag)) < 1e-10


def check_kernel_paths_agree() -> None:
    try:
        backends._load_numba()
    except Exception:
        return  # numba unavailable; the numpy path is the only one to test
    rng = np.random.default_rng(15)
    gates = [
        Gate(ROT_X, (0,), 0.3),
        Gate(ROT_Y, (2,), -1.1),
        Gate(CNOT, (0, 2)),
        Gate(ROT_Z, (1,), 2.2),
        Gate(HADAMARD, (1,)),
    ]
    circ = Circuit(3, tuple(gates))
    vec = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    vec /= np.linalg.norm(vec)
    outs = []
    for name in ("numpy", "numba"):
        with backends.using(name):
            outs.append(apply_circuit(QuantumState(3, vec.copy()), circ).data)
    assert np.max(np.abs(outs[0] - outs[1])) < 1e-12


def check_noise_fixed_point() -> None:
    rho = QuantumState.maximally_mixed(2)
    circ = Circuit(2, (Gate(ROT_X, (0,), 0.4), Gate(CNOT, (0, 1)), Gate(HADAMARD, (1,))))
    out = apply_circuit(rho, circ, noise=NoiseModel(0.05))
    assert np.max(np.abs(out.data - np.eye(4) / 4)) < 1e-12


def check_measurement_probabilities() -> None:
    rng = np.random.default_rng(16)
    circ = random_state_circuit(3, 4, rng)
    state = apply_circuit(QuantumState.zero(3), circ)
    p = bell_probs(state, 0, 2)
    assert np.all(p >= 0) and abs(p.sum() - 1.0) < 1e-8


CHECKS = [
    ("pauli_orthonormality", check_pauli_orthonormality),
    ("expansion_roundtrip", check_expansion_roundtrip),
    ("site_marginals", check_site_marginals),
    ("closed_form_chain", check_closed_form_chain),
    ("entropy_anchors", check_entropy_anchors),
    ("bell_basis", check_bell_basis),
    ("propagator_group", check_propagator_group),
    ("trotter_inverse", check_trotter_inverse),
    ("trotter_first_order", check_trotter_first_order),
    ("richardson_exact", check_richardson_exact),
    ("protocol_matches_reduction", check_protocol_matches_reduction),
    ("kernel_paths_agree", check_kernel_paths_agree),
    ("noise_fixed_point", check_noise_fixed_point),
    ("measurement_probabilities", check_measurement_probabilities),
]


def run_checks() -> list[tuple[str, bool, str]]:
    results = []
    for name, fn in CHECKS:
        try:
            fn()
        except Exception as exc:  # report, never throw
            results.append((name, False, f"{type(exc).__name__}: {exc}"))
        else:
            results.append((name, True, ""))
    return results
