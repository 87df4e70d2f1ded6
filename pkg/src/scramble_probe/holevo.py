"""Bell-basis duality and Holevo information of operator expansions.

Each site of an expansion maps to one Bell-pair factor of a dual state on
2N qubits: letter i at site n contributes the Bell vector B_i obtained by
acting with Pauli i on the first member of the maximally entangled pair.
Tracing the dual state down to one pair gives a 4x4 reduced matrix in the
Bell basis whose diagonal is the site's letter distribution.

The two-state Holevo quantity used throughout is

    chi(r1, r2) = S((r1 + r2) / 2) - (S(r1) + S(r2)) / 2

with S the von Neumann entropy in bits, so chi lies in [0, 1].  For states
that are diagonal in the Bell basis this reduces to the same expression on
classical outcome distributions (`holevo_from_probs`), and for the pair
(identity, O) it collapses to a closed form in the site density alone
(`chi_of_density`).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import OperatorExpansion

# Columns are the Bell vectors B_0..B_3 over the pair basis |00>,|01>,|10>,|11>
# (first member of the pair = more significant bit).
BELL_BASIS = np.array(
    [
        [1, 0, 0, 1],
        [0, 1, -1j, 0],
        [0, 1, 1j, 0],
        [1, 0, 0, -1],
    ],
    dtype=np.complex128,
) / np.sqrt(2.0)

# Eigenvalue clamp window for reduced matrices: eigenvalues in [-1e-10, 0)
# are treated as exact zeros, anything lower is an error.
EIGENVALUE_TOL = 1e-10

PROB_TOL = 1e-8


def bell_state(i: int) -> np.ndarray:
    if not 0 <= i <= 3:
        raise ValueError("Bell index must be 0..3")
    return BELL_BASIS[:, i].copy()


def dual_state(e: OperatorExpansion) -> np.ndarray:
    """Amplitudes of the dual state on 2N qubits, ordered pairwise:
    (site 1, its partner, site 2, its partner, ...)."""
    if not e.is_dense:
        raise ValueError("dual_state requires dense coefficients")
    if 2 * e.n_sites > 16:
        raise ValueError("dual state limited to 2N <= 16 qubits")
    t = e.as_tensor().astype(np.complex128)
    for _ in range(e.n_sites):
        # consume the leading letter axis, append the pair-amplitude axis
        t = np.tensordot(t, BELL_BASIS, axes=([0], [1]))
    return t.reshape(-1)


@dataclass
class SiteReducedMatrix:
    """Reduced matrix of the dual state on one Bell pair, in the Bell basis."""

    site: int
    rho: np.ndarray

    def __post_init__(self) -> None:
        self.rho = np.asarray(self.rho, dtype=np.complex128)
        if self.rho.shape != (4, 4):
            raise ValueError("reduced matrix must be 4x4")

    def bell_diagonal(self) -> np.ndarray:
        return np.diagonal(self.rho).real.copy()


def reduced_site_matrix(e: OperatorExpansion, site: int) -> SiteReducedMatrix:
    """Trace the dual state down to the pair of `site` (1-based).

    Works directly on the coefficient tensor: rho_ab = sum_rest C(a,rest)
    C(b,rest), cost O(4^N) per site.  The diagonal equals the letter
    distribution at the site.
    """
    if not e.is_dense:
        raise ValueError("reduced_site_matrix requires dense coefficients")
    if not 1 <= site <= e.n_sites:
        raise ValueError(f"site {site} out of range 1..{e.n_sites}")
    a = np.moveaxis(e.as_tensor(), site - 1, 0).reshape(4, -1)
    return SiteReducedMatrix(site=site, rho=(a @ a.T).astype(np.complex128))


def _xlogy2(p: np.ndarray) -> np.ndarray:
    """p * log2(p) with the 0 log 0 = 0 convention."""
    p = np.asarray(p, dtype=np.float64)
    out = np.zeros_like(p)
    mask = p > 0.0
    out[mask] = p[mask] * np.log2(p[mask])
    return out


def von_neumann_entropy(rho: np.ndarray) -> float:
    """Entropy in bits of a Hermitian, trace-one, PSD matrix.

    Eigenvalues in [-EIGENVALUE_TOL, 0) are clamped to zero; trace or
    positivity violations beyond tolerance raise.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("entropy needs a square matrix")
    if np.max(np.abs(rho - rho.conj().T)) > PROB_TOL:
        raise ValueError("matrix is not Hermitian within tolerance")
    trace = float(np.trace(rho).real)
    if abs(trace - 1.0) > PROB_TOL:
        raise ValueError(f"trace is {trace!r}, expected 1")
    vals = np.linalg.eigvalsh(rho)
    if float(vals.min()) < -EIGENVALUE_TOL:
        raise ValueError(f"matrix has negative eigenvalue {vals.min()!r}")
    vals = np.clip(vals, 0.0, None)
    return float(-_xlogy2(vals).sum())


def holevo_ensemble(rhos: list[np.ndarray], weights: list[float]) -> float:
    """General Holevo quantity S(sum_i w_i r_i) - sum_i w_i S(r_i)."""
    if len(rhos) != len(weights) or not rhos:
        raise ValueError("need matching, non-empty states and weights")
    if abs(sum(weights) - 1.0) > PROB_TOL or min(weights) < 0:
        raise ValueError("weights must be a probability vector")
    average = sum(w * r for w, r in zip(weights, rhos))
    chi = von_neumann_entropy(average) - sum(
        w * von_neumann_entropy(r) for w, r in zip(weights, rhos)
    )
    assert chi > -PROB_TOL, f"Holevo quantity {chi} below zero beyond tolerance"
    return max(chi, 0.0)


@dataclass
class HolevoRecord:
    """One evaluated chi value with the probability vectors behind it."""

    site: int
    time: float | None
    probs_1: np.ndarray
    probs_2: np.ndarray
    chi: float
    variant: str
    chi_raw: float | None = None

    VARIANTS = ("exact", "bell-diagonal", "protocol-sampled", "mitigated")

    def __post_init__(self) -> None:
        if self.variant not in self.VARIANTS:
            raise ValueError(f"variant must be one of {self.VARIANTS}")
        self.probs_1 = np.asarray(self.probs_1, dtype=np.float64)
        self.probs_2 = np.asarray(self.probs_2, dtype=np.float64)


def holevo_exact(
    e1: OperatorExpansion, e2: OperatorExpansion, site: int, time: float | None = None
) -> HolevoRecord:
    """chi from the full reduced matrices of two expansions at one site."""
    r1 = reduced_site_matrix(e1, site)
    r2 = reduced_site_matrix(e2, site)
    chi = holevo_ensemble([r1.rho, r2.rho], [0.5, 0.5])
    return HolevoRecord(
        site=site,
        time=time,
        probs_1=r1.bell_diagonal(),
        probs_2=r2.bell_diagonal(),
        chi=min(chi, 1.0),
        variant="exact",
    )


def _checked_probs(p: np.ndarray, name: str) -> np.ndarray:
    p = np.asarray(p, dtype=np.float64).copy()
    if p.ndim != 1:
        raise ValueError(f"{name} must be a vector")
    if float(p.min()) < -PROB_TOL:
        raise ValueError(f"{name} has negative entry {p.min()!r}")
    total = float(p.sum())
    if abs(total - 1.0) > PROB_TOL:
        raise ValueError(f"{name} sums to {total!r}, expected 1")
    np.clip(p, 0.0, None, out=p)
    return p / p.sum()


def shannon_entropy(p: np.ndarray) -> float:
    return float(-_xlogy2(np.asarray(p, dtype=np.float64)).sum())


def holevo_from_probs(probs_1: np.ndarray, probs_2: np.ndarray) -> float:
    """chi of two classical outcome distributions (diagonal reduced states)."""
    p1 = _checked_probs(probs_1, "probs_1")
    p2 = _checked_probs(probs_2, "probs_2")
    chi = shannon_entropy(0.5 * (p1 + p2)) - 0.5 * (shannon_entropy(p1) + shannon_entropy(p2))
    assert -PROB_TOL < chi < 1.0 + PROB_TOL
    return float(np.clip(chi, 0.0, 1.0))


def chi_of_density(density):
    """Closed form of chi(identity, O) as a function of the site density L:

        chi = 0.5 * (2 + (1-L) log2(1-L) - (2-L) log2(2-L)),

    increasing from 0 at L=0 to 1 at L=1."""
    arr = np.asarray(density, dtype=np.float64)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("site density must lie in [0, 1]")
    chi = 0.5 * (2.0 + _xlogy2(1.0 - arr) - _xlogy2(2.0 - arr))
    if np.ndim(density) == 0:
        return float(chi)
    return chi
