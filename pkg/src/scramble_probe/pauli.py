"""Pauli-string expansions of Hermitian operators on a chain of qubits.

Conventions
-----------
Sites are numbered 1..N.  A Pauli string is a word over {I, X, Y, Z}, one
letter per site, encoded as a base-4 integer whose most significant digit
is site 1 (letter codes I=0, X=1, Y=2, Z=3).  A Hermitian operator O with
2^-N tr(O^2) = 1 expands as

    O = sum_k C_k P_k,    C_k = 2^-N tr(O P_k),

with real C_k and sum_k C_k^2 = 1, so the squared coefficients form a
probability distribution over strings.  Marginalising all sites but n gives
the per-site letter distribution; 1 - Prob(letter I at n) is the operator
density at site n, and the expected number of non-identity letters is the
operator size.

Coefficients are stored densely (a flat float64 array of length 4^N) for
N <= 8 and as a sparse {index: coefficient} map above that.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

PAULI_LABELS = "IXYZ"

PAULI_MATRICES = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=np.complex128,
)

DENSE_SITE_LIMIT = 8

# Tolerance for the Hermiticity / normalisation preconditions of
# expand_operator.  Imaginary residue above this is treated as an error,
# not noise.
HERMITICITY_TOL = 1e-8


@dataclass(frozen=True)
class PauliString:
    """An N-site Pauli word, one letter code (0..3) per site."""

    letters: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.letters) == 0:
            raise ValueError("PauliString needs at least one site")
        if any(l not in (0, 1, 2, 3) for l in self.letters):
            raise ValueError(f"letter codes must be in 0..3, got {self.letters}")

    @property
    def n_sites(self) -> int:
        return len(self.letters)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        try:
            return cls(tuple(PAULI_LABELS.index(ch) for ch in label.upper()))
        except ValueError:
            raise ValueError(f"labels must use characters IXYZ, got {label!r}") from None

    @classmethod
    def from_index(cls, index: int, n_sites: int) -> "PauliString":
        if not 0 <= index < 4**n_sites:
            raise ValueError(f"index {index} out of range for {n_sites} sites")
        letters = []
        for _ in range(n_sites):
            letters.append(index % 4)
            index //= 4
        return cls(tuple(reversed(letters)))

    @classmethod
    def single_site(cls, label: str, site: int, n_sites: int) -> "PauliString":
        """The word with `label` at 1-based `site` and I elsewhere."""
        if not 1 <= site <= n_sites:
            raise ValueError(f"site {site} out of range 1..{n_sites}")
        letters = [0] * n_sites
        letters[site - 1] = PAULI_LABELS.index(label.upper())
        return cls(tuple(letters))

    @property
    def index(self) -> int:
        k = 0
        for l in self.letters:
            k = 4 * k + l
        return k

    def label(self) -> str:
        return "".join(PAULI_LABELS[l] for l in self.letters)

    def dense(self) -> np.ndarray:
        """The 2^N x 2^N matrix of the word (site 1 = most significant factor)."""
        out = PAULI_MATRICES[self.letters[0]]
        for l in self.letters[1:]:
            out = np.kron(out, PAULI_MATRICES[l])
        return out


def weight(p: PauliString) -> int:
    """Number of non-identity letters in the word."""
    return sum(1 for l in p.letters if l != 0)


@lru_cache(maxsize=16)
def _weight_vector(n_sites: int) -> np.ndarray:
    """weight(k) for every flat base-4 index k, as float64."""
    k = np.arange(4**n_sites)
    w = np.zeros(4**n_sites)
    for _ in range(n_sites):
        w += (k % 4) != 0
        k //= 4
    return w


@dataclass
class OperatorExpansion:
    """Real Pauli coefficients of a Hermitian operator.

    `coeffs` is a flat float64 array of length 4^n_sites when
    n_sites <= DENSE_SITE_LIMIT, otherwise a sparse {index: value} dict.
    """

    n_sites: int
    coeffs: np.ndarray | dict[int, float]

    def __post_init__(self) -> None:
        if self.n_sites < 1:
            raise ValueError("n_sites must be >= 1")
        if isinstance(self.coeffs, np.ndarray):
            if self.n_sites > DENSE_SITE_LIMIT:
                raise ValueError(
                    f"dense storage only supported up to {DENSE_SITE_LIMIT} sites"
                )
            if self.coeffs.shape != (4**self.n_sites,):
                raise ValueError(
                    f"expected flat coefficient array of length {4 ** self.n_sites}, "
                    f"got shape {self.coeffs.shape}"
                )
            self.coeffs = np.ascontiguousarray(self.coeffs, dtype=np.float64)

    @property
    def is_dense(self) -> bool:
        return isinstance(self.coeffs, np.ndarray)

    def coefficient(self, k: int | PauliString) -> float:
        if isinstance(k, PauliString):
            k = k.index
        if self.is_dense:
            return float(self.coeffs[k])
        return float(self.coeffs.get(k, 0.0))

    def norm_sq(self) -> float:
        """sum_k C_k^2; equals 1 for a correctly normalised operator."""
        if self.is_dense:
            return float(np.dot(self.coeffs, self.coeffs))
        return float(sum(c * c for c in self.coeffs.values()))

    def as_tensor(self) -> np.ndarray:
        """Coefficients reshaped to one length-4 axis per site (site 1 first)."""
        if not self.is_dense:
            raise ValueError("as_tensor requires dense storage")
        return self.coeffs.reshape((4,) * self.n_sites)

    def to_json(self) -> str:
        if self.is_dense:
            items = [[int(k), float(c)] for k, c in enumerate(self.coeffs) if c != 0.0]
        else:
            items = [[int(k), float(c)] for k, c in sorted(self.coeffs.items())]
        return json.dumps({"n_sites": self.n_sites, "coeffs": items})

    @classmethod
    def from_json(cls, text: str) -> "OperatorExpansion":
        doc = json.loads(text)
        n = int(doc["n_sites"])
        if n <= DENSE_SITE_LIMIT:
            flat = np.zeros(4**n)
            for k, c in doc["coeffs"]:
                flat[int(k)] = float(c)
            return cls(n, flat)
        return cls(n, {int(k): float(c) for k, c in doc["coeffs"]})


def _split_pair_axes(matrix: np.ndarray, n_sites: int) -> np.ndarray:
    """Reshape a 2^N x 2^N matrix to one length-4 axis per site.

    Axis n holds the vectorised (row bit, column bit) pair of site n+1,
    with value 2*row_bit + col_bit.
    """
    t = matrix.reshape((2,) * (2 * n_sites))
    order = []
    for n in range(n_sites):
        order.extend((n, n + n_sites))
    return t.transpose(order).reshape((4,) * n_sites)


def _merge_pair_axes(tensor: np.ndarray, n_sites: int) -> np.ndarray:
    t = tensor.reshape((2,) * (2 * n_sites))
    rows = list(range(0, 2 * n_sites, 2))
    cols = list(range(1, 2 * n_sites, 2))
    d = 2**n_sites
    return t.transpose(rows + cols).reshape(d, d)


# Per-site trace map: E[k, 2a+b] = sigma_k[b, a], so contracting every pair
# axis of an operator with E yields tr(O P_k) without ever forming P_k.
_TRACE_MAP = PAULI_MATRICES.transpose(0, 2, 1).reshape(4, 4).copy()
# Per-site synthesis map: G[2a+b, k] = sigma_k[a, b], the inverse direction.
_SYNTH_MAP = PAULI_MATRICES.reshape(4, 4).T.copy()


def expand_operator(matrix: np.ndarray, n_sites: int) -> OperatorExpansion:
    """Expand a Hermitian, normalised operator over Pauli strings.

    Parameters
    ----------
    matrix : (2^n_sites, 2^n_sites) array
        Hermitian with 2^-N tr(O^2) = 1 within HERMITICITY_TOL.
    n_sites : int
        Number of chain sites.

    The traces are evaluated by per-site tensor contraction (cost
    O(N 4^N)), never by materialising the 2^N x 2^N string matrices.
    """
    d = 2**n_sites
    matrix = np.asarray(matrix)
    if matrix.shape != (d, d):
        raise ValueError(f"expected shape {(d, d)} for {n_sites} sites, got {matrix.shape}")
    norm = float(np.vdot(matrix, matrix).real) / d
    if abs(norm - 1.0) > HERMITICITY_TOL:
        raise ValueError(
            f"operator is not normalised: 2^-N tr(O^dag O) = {norm!r}, expected 1"
        )
    t = _split_pair_axes(matrix.astype(np.complex128), n_sites)
    for _ in range(n_sites):
        # consume the leading pair axis, append the string-letter axis
        t = np.tensordot(t, _TRACE_MAP, axes=([0], [1]))
    coeffs = t / d
    residue = float(np.max(np.abs(coeffs.imag)))
    if residue > HERMITICITY_TOL:
        raise ValueError(
            f"operator is not Hermitian: imaginary coefficient residue {residue:.3e}"
        )
    return OperatorExpansion(n_sites, coeffs.real.reshape(-1).copy())


def reconstruct_dense(e: OperatorExpansion) -> np.ndarray:
    """Rebuild the dense operator sum_k C_k P_k from its coefficients."""
    if not e.is_dense:
        raise ValueError("reconstruction requires dense storage")
    t = e.as_tensor().astype(np.complex128)
    for _ in range(e.n_sites):
        t = np.tensordot(t, _SYNTH_MAP, axes=([0], [1]))
    return _merge_pair_axes(t, e.n_sites)


@dataclass
class SiteDistribution:
    """Letter probabilities (P_I, P_X, P_Y, P_Z) at one site."""

    site: int
    probs: np.ndarray

    def __post_init__(self) -> None:
        self.probs = np.asarray(self.probs, dtype=np.float64)
        if self.probs.shape != (4,):
            raise ValueError("site distribution needs exactly 4 probabilities")
        if np.min(self.probs) < -1e-10:
            raise ValueError(f"negative probability in {self.probs}")
        if abs(float(self.probs.sum()) - 1.0) > 1e-10:
            raise ValueError(f"probabilities sum to {self.probs.sum()!r}, expected 1")


def operator_size(e: OperatorExpansion) -> float:
    """Expected number of non-identity letters, sum_k C_k^2 weight(k)."""
    if e.is_dense:
        sq = e.coeffs * e.coeffs
        return float(np.dot(sq, _weight_vector(e.n_sites)))
    return sum(c * c * weight(PauliString.from_index(k, e.n_sites)) for k, c in e.coeffs.items())


def site_density(e: OperatorExpansion, site: int) -> tuple[SiteDistribution, float]:
    """Marginal letter distribution at `site` (1-based) and 1 - P_I there."""
    if not 1 <= site <= e.n_sites:
        raise ValueError(f"site {site} out of range 1..{e.n_sites}")
    if e.is_dense:
        sq = (e.coeffs * e.coeffs).reshape((4,) * e.n_sites)
        probs = np.moveaxis(sq, site - 1, 0).reshape(4, -1).sum(axis=1)
    else:
        probs = np.zeros(4)
        shift = 4 ** (e.n_sites - site)
        for k, c in e.coeffs.items():
            probs[(k // shift) % 4] += c * c
    dist = SiteDistribution(site=site, probs=probs)
    return dist, float(1.0 - probs[0])
