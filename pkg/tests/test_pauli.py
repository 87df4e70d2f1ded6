"""Pauli-string indexing and operator expansions checked against explicit
Kronecker-product constructions."""

import numpy as np
import pytest

from scramble_probe.pauli import (
    OperatorExpansion,
    PauliString,
    expand_operator,
    operator_size,
    reconstruct_dense,
    site_density,
    weight,
)

SIGMA = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "Y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}


def kron_label(label):
    m = np.array([[1.0 + 0.0j]])
    for ch in label:
        m = np.kron(m, SIGMA[ch])
    return m


def random_hermitian(n_sites, rng):
    d = 2**n_sites
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    h = a + a.conj().T
    # normalise so that 2^-n tr(h^2) = 1
    return h * (np.sqrt(d) / np.linalg.norm(h))


def test_label_index_roundtrip():
    for k in range(64):
        p = PauliString.from_index(k, 3)
        assert p.index == k
        assert PauliString.from_label(p.label()) == p


def test_index_is_base4_with_site1_most_significant():
    assert PauliString.from_label("XII").index == 16
    assert PauliString.from_label("IIX").index == 1
    assert PauliString.from_label("IZY").index == 3 * 4 + 2
    assert PauliString.from_index(0, 4).label() == "IIII"


def test_single_site_placement():
    p = PauliString.single_site("Y", 2, 4)
    assert p.label() == "IYII"
    assert weight(p) == 1


@pytest.mark.parametrize("label", ["I", "X", "Y", "Z", "XIZ", "YYX", "IZII", "ZXYZ"])
def test_dense_matches_kron(label):
    np.testing.assert_allclose(PauliString.from_label(label).dense(), kron_label(label))


def test_weight_counts_non_identity_letters():
    assert weight(PauliString.from_label("IXYI")) == 2
    assert weight(PauliString.from_label("IIII")) == 0
    assert weight(PauliString.from_label("ZZZZ")) == 4


def test_orthonormality_exhaustive_two_sites():
    # 2^-n tr(P_j P_k) = delta_jk over the full n=2 basis
    mats = [PauliString.from_index(k, 2).dense() for k in range(16)]
    gram = np.array([[np.trace(a @ b).real / 4.0 for b in mats] for a in mats])
    np.testing.assert_allclose(gram, np.eye(16), atol=1e-14)


def test_expand_reconstruct_roundtrip():
    rng = np.random.default_rng(11)
    h = random_hermitian(3, rng)
    e = expand_operator(h, 3)
    assert e.is_dense
    assert np.isrealobj(e.coeffs)
    np.testing.assert_allclose(reconstruct_dense(e), h, atol=1e-12)


def test_expand_single_pauli_is_one_hot():
    e = expand_operator(kron_label("XZ"), 2)
    hot = PauliString.from_label("XZ").index
    expect = np.zeros(16)
    expect[hot] = 1.0
    np.testing.assert_allclose(e.coeffs, expect, atol=1e-14)


def test_expand_known_combination():
    op = (kron_label("XI") + kron_label("IZ")) / np.sqrt(2.0)
    e = expand_operator(op, 2)
    assert e.coefficient(PauliString.from_label("XI")) == pytest.approx(1 / np.sqrt(2))
    assert e.coefficient(PauliString.from_label("IZ")) == pytest.approx(1 / np.sqrt(2))
    assert e.norm_sq() == pytest.approx(1.0)


def test_norm_preserved_under_unitary_conjugation():
    # unitary U from the eigenbasis of a random Hermitian matrix
    rng = np.random.default_rng(5)
    _, u = np.linalg.eigh(random_hermitian(3, rng))
    evolved = u.conj().T @ kron_label("IXI") @ u
    e = expand_operator(evolved, 3)
    assert e.norm_sq() == pytest.approx(1.0, abs=1e-12)


def test_operator_size_hand_values():
    assert operator_size(expand_operator(kron_label("IXI"), 3)) == pytest.approx(1.0)
    assert operator_size(expand_operator(kron_label("XYI"), 3)) == pytest.approx(2.0)
    combo = (kron_label("XII") + kron_label("XXI")) / np.sqrt(2.0)
    assert operator_size(expand_operator(combo, 3)) == pytest.approx(1.5)


def test_site_density_hand_values():
    combo = (kron_label("XI") + kron_label("XX")) / np.sqrt(2.0)
    e = expand_operator(combo, 2)
    dist, dens = site_density(e, 2)
    np.testing.assert_allclose(dist.probs, [0.5, 0.5, 0.0, 0.0], atol=1e-14)
    assert dens == pytest.approx(0.5)
    dist, dens = site_density(e, 1)
    np.testing.assert_allclose(dist.probs, [0.0, 1.0, 0.0, 0.0], atol=1e-14)
    assert dens == pytest.approx(1.0)


def test_site_density_is_a_distribution():
    rng = np.random.default_rng(23)
    e = expand_operator(random_hermitian(3, rng), 3)
    for site in (1, 2, 3):
        dist, dens = site_density(e, site)
        assert dist.probs.min() >= 0.0
        assert dist.probs.sum() == pytest.approx(1.0, abs=1e-12)
        assert dens == pytest.approx(1.0 - dist.probs[0])


def test_size_is_sum_of_site_densities():
    rng = np.random.default_rng(31)
    e = expand_operator(random_hermitian(4, rng), 4)
    total = sum(site_density(e, s)[1] for s in (1, 2, 3, 4))
    assert operator_size(e) == pytest.approx(total, abs=1e-12)


def test_sparse_and_dense_expansions_agree():
    flat = np.zeros(64)
    flat[PauliString.from_label("XII").index] = np.sqrt(0.5)
    flat[PauliString.from_label("XXI").index] = np.sqrt(0.5)
    dense = OperatorExpansion(3, flat)
    sparse = OperatorExpansion(
        3,
        {
            PauliString.from_label("XII").index: np.sqrt(0.5),
            PauliString.from_label("XXI").index: np.sqrt(0.5),
        },
    )
    assert operator_size(sparse) == pytest.approx(operator_size(dense))
    for site in (1, 2, 3):
        np.testing.assert_allclose(
            site_density(sparse, site)[0].probs, site_density(dense, site)[0].probs
        )


def test_expansion_json_roundtrip():
    rng = np.random.default_rng(7)
    e = expand_operator(random_hermitian(2, rng), 2)
    back = OperatorExpansion.from_json(e.to_json())
    assert back.n_sites == 2
    np.testing.assert_allclose(back.coeffs, e.coeffs)
