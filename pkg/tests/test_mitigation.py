"""Richardson zero-noise extrapolation: exact weight identities, polynomial
recovery, and the full pipeline on a small noisy chain."""

from fractions import Fraction

import numpy as np
import pytest

from scramble_probe.ising import build_hamiltonian
from scramble_probe.mitigation import (
    RichardsonScheme,
    _extrapolate_probs,
    mitigate,
    mitigated_holevo,
    richardson_scheme,
)
from scramble_probe.protocol import ProtocolConfig, holevo_estimate
from scramble_probe.sim import NoiseModel


@pytest.mark.parametrize("order", [1, 2, 3, 4, 5])
def test_weight_identities_hold_exactly(order):
    s = richardson_scheme(order)
    assert s.c == tuple(range(1, order + 2))
    assert sum(s.gamma) == Fraction(1)
    for k in range(1, order + 1):
        assert sum(g * Fraction(c) ** k for g, c in zip(s.gamma, s.c)) == Fraction(0)


def test_low_order_weights_are_the_classic_tables():
    assert richardson_scheme(1).gamma == (Fraction(2), Fraction(-1))
    assert richardson_scheme(2).gamma == (Fraction(3), Fraction(-3), Fraction(1))
    assert richardson_scheme(3).gamma == (
        Fraction(4),
        Fraction(-6),
        Fraction(4),
        Fraction(-1),
    )


@pytest.mark.parametrize("order", [1, 2, 3])
def test_tabulated_weights_match_lagrange_solution(order):
    s = richardson_scheme(order)
    for j, cj in enumerate(s.c):
        g = Fraction(1)
        for m, cm in enumerate(s.c):
            if m != j:
                g *= Fraction(cm, cm - cj)
        assert s.gamma[j] == g


def test_scheme_validation():
    with pytest.raises(ValueError):
        richardson_scheme(0)
    with pytest.raises(ValueError):
        RichardsonScheme(2, (1, 2), (Fraction(2), Fraction(-1)))


def test_polynomial_recovery():
    s3 = richardson_scheme(3)
    poly = lambda c: 0.42 - 0.3 * c + 0.07 * c**2 - 0.011 * c**3  # noqa: E731
    got = mitigate([poly(c) for c in s3.c], s3)
    assert got == pytest.approx(0.42, abs=1e-12)
    # an order-2 scheme cannot cancel the cubic term
    s2 = richardson_scheme(2)
    biased = mitigate([poly(c) for c in s2.c], s2)
    assert abs(biased - 0.42) > 1e-6


def test_mitigate_validates_length():
    with pytest.raises(ValueError):
        mitigate([1.0, 2.0], richardson_scheme(2))


def test_probability_extrapolation_clips_and_renormalises():
    s1 = richardson_scheme(1)
    v1 = np.array([0.1, 0.9, 0.0, 0.0])
    v2 = np.array([0.3, 0.7, 0.0, 0.0])
    out = _extrapolate_probs([v1, v2], s1)  # raw = 2 v1 - v2 = (-0.1, 1.1, 0, 0)
    np.testing.assert_allclose(out, [0.0, 1.0, 0.0, 0.0], atol=1e-14)
    # linear data is recovered exactly when no clipping is needed
    p0 = np.array([0.4, 0.3, 0.2, 0.1])
    slope = np.array([0.02, -0.01, 0.005, -0.015])
    out = _extrapolate_probs([p0 + 1 * slope, p0 + 2 * slope], s1)
    np.testing.assert_allclose(out, p0, atol=1e-14)


# ------------------------------------------------------ end-to-end


def noisy_cfg(p=5e-3):
    return ProtocolConfig(
        hamiltonian=build_hamiltonian(3, 1.0, 1.0, 0.3),
        op_site=2,
        op_pair=("X", "Y"),
        initialization="exact",
        noise=NoiseModel(p),
    )


def test_mitigation_moves_chi_toward_noiseless():
    t, site = 1.5, 2
    cfg = noisy_cfg()
    clean = holevo_estimate(
        ProtocolConfig(
            hamiltonian=cfg.hamiltonian,
            op_site=2,
            op_pair=("X", "Y"),
            initialization="exact",
        ),
        t,
        site,
    ).chi
    noisy = holevo_estimate(cfg, t, site).chi
    rec = mitigated_holevo(cfg, t, site, richardson_scheme(2))
    assert rec.variant == "mitigated"
    assert 0.0 <= rec.chi <= 1.0
    assert abs(rec.chi - clean) < abs(noisy - clean)


def test_probs_target_recomputes_chi_from_vectors():
    from scramble_probe.holevo import holevo_from_probs

    rec = mitigated_holevo(noisy_cfg(), 1.0, 2, richardson_scheme(1), target="probs")
    assert rec.probs_1.sum() == pytest.approx(1.0, abs=1e-12)
    assert rec.probs_2.sum() == pytest.approx(1.0, abs=1e-12)
    assert rec.chi == pytest.approx(holevo_from_probs(rec.probs_1, rec.probs_2))
    assert rec.chi_raw == rec.chi


def test_chi_target_keeps_raw_extrapolant():
    rec = mitigated_holevo(noisy_cfg(), 1.0, 2, richardson_scheme(3))
    assert rec.chi_raw is not None
    assert rec.chi == min(max(rec.chi_raw, 0.0), 1.0)


def test_mitigated_holevo_input_validation():
    cfg = noisy_cfg()
    with pytest.raises(ValueError):
        mitigated_holevo(cfg, 1.0, 2, richardson_scheme(1), target="mean")
    no_noise = ProtocolConfig(
        hamiltonian=cfg.hamiltonian, op_site=2, op_pair=("X", "Y")
    )
    with pytest.raises(ValueError):
        mitigated_holevo(no_noise, 1.0, 2, richardson_scheme(1))
    with pytest.raises(ValueError):
        mitigated_holevo(noisy_cfg(p=0.3), 1.0, 2, richardson_scheme(3))
