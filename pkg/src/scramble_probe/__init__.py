"""Operator scrambling measured through the Holevo information of operators.

A Heisenberg-evolved local operator O(t) is expanded in Pauli strings; the
Bell-diagonal statistics of its dual state at each site give a 4-outcome
distribution whose Holevo quantity against a reference operator tracks how
operator support spreads through a mixed-field Ising chain.  The package
provides the dense reference calculation, a sampled (N+1)-qubit
measurement protocol with random-circuit initialisation, depolarizing
noise, Richardson zero-noise extrapolation, and CSV/JSON experiment
runners behind the `scramble-probe` command.
"""

from .config import ConfigError, ExperimentConfig, resolve_config
from .holevo import (
    HolevoRecord,
    chi_of_density,
    dual_state,
    holevo_exact,
    holevo_from_probs,
    reduced_site_matrix,
    shannon_entropy,
    von_neumann_entropy,
)
from .ising import (
    HamiltonianSpec,
    TrotterPlan,
    build_hamiltonian,
    exact_propagator,
    heisenberg_evolve,
    trotter_circuit,
    trotter_propagator,
)
from .mitigation import RichardsonScheme, mitigate, mitigated_holevo, richardson_scheme
from .pauli import (
    OperatorExpansion,
    PauliString,
    expand_operator,
    operator_size,
    reconstruct_dense,
    site_density,
)
from .protocol import (
    ProtocolConfig,
    grid_probs,
    heatmap,
    holevo_estimate,
    measure_probs,
    protocol_operator_size,
)
from .sim import (
    NoiseModel,
    QuantumState,
    RegisterLayout,
    apply_circuit,
    bell_probs,
    random_state_circuit,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "HamiltonianSpec",
    "HolevoRecord",
    "NoiseModel",
    "OperatorExpansion",
    "PauliString",
    "ProtocolConfig",
    "QuantumState",
    "RegisterLayout",
    "RichardsonScheme",
    "TrotterPlan",
    "apply_circuit",
    "bell_probs",
    "build_hamiltonian",
    "chi_of_density",
    "dual_state",
    "exact_propagator",
    "expand_operator",
    "grid_probs",
    "heatmap",
    "heisenberg_evolve",
    "holevo_estimate",
    "holevo_exact",
    "holevo_from_probs",
    "measure_probs",
    "mitigate",
    "mitigated_holevo",
    "operator_size",
    "protocol_operator_size",
    "random_state_circuit",
    "reconstruct_dense",
    "reduced_site_matrix",
    "resolve_config",
    "richardson_scheme",
    "shannon_entropy",
    "site_density",
    "trotter_circuit",
    "trotter_propagator",
    "von_neumann_entropy",
]
