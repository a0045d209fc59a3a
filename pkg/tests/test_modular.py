import math

import numpy as np
import pytest

from brpic.cyclo import GaloisMap, embed_complex, root_of_unity
from brpic.fusion import AFactor, catalog, ring_automorphisms
from brpic.modular import (
    NoCalibrationMatch, braided_automorphisms, calibrate, calibrated_factors,
    expected_twists, galois_conjugate_data, group_fingerprint, is_cross_factor,
    is_modular, modular_data, name_group, root_from_fraction, s_numeric, twist_vector,
)
from brpic.tl import twist_closed_form


def verlinde(S):
    S = s_numeric(S)
    S = S / np.sqrt((np.abs(S[0]) ** 2).sum())
    return np.einsum("ia,ja,ka,a->ijk", S, S, S.conj(), 1 / S[0])


@pytest.mark.parametrize("name", ["A:5", "adA:6", "Z(adE6)", "Z(adA:7)"])
def test_verlinde_formula_recovers_fusion(name):
    md = modular_data(name, calibrated_factors(name), with_s=True)
    N = verlinde(md.S)
    assert np.allclose(N.imag, 0, atol=1e-8)
    assert np.array_equal(np.rint(N.real).astype(int), md.ring.N)
    assert is_modular(md.S)


def test_adjoint_of_odd_level_is_not_modular():
    assert not is_modular(modular_data("adA:7", with_s=True).S)


def test_twists_are_closed_form_products():
    e = catalog("Z(E6)")
    fac = calibrated_factors("Z(E6)")
    t = twist_vector(e, fac)
    for lift, x in zip(e.lifts, t):
        expect = twist_closed_form(lift[0], fac[0].kind, fac[0].qh) * twist_closed_form(lift[1], fac[1].kind, fac[1].qh)
        assert x == expect


def test_root_from_fraction():
    assert root_from_fraction("15/24") == root_of_unity(48, 15)
    assert root_from_fraction("0") == root_of_unity(1, 0)


def test_calibration_is_consistent_with_anchored_labels(fixtures):
    expected = expected_twists(fixtures, "table3")
    choice = calibrate("Z(E6)", expected)
    assert all(choice)
    e = catalog("Z(E6)")
    t = twist_vector(e, tuple(c[0] for c in choice))
    for lab, x in zip(e.ring.labels, t):
        if lab.endswith("⊠f0") or lab.startswith("f0⊠"):
            assert x == expected[lab]


def test_calibration_reports_impossible_twists():
    bogus = {"f1⊠f0": root_of_unity(7, 1)}
    with pytest.raises(NoCalibrationMatch):
        calibrate("Z(E6)", bogus)


def test_braided_automorphisms_preserve_twists_and_fusion():
    md = modular_data("Z(adD:10)")
    r = md.ring
    for p in braided_automorphisms(md):
        assert all(md.t[p[i]] == md.t[i] for i in range(r.rank))
        p = np.array(p)
        assert np.array_equal(r.N[np.ix_(p, p, p)], r.N)
    assert len(braided_automorphisms(md)) <= len(ring_automorphisms(r))


def test_group_names():
    md = modular_data("Z(adA:7)")
    autos = braided_automorphisms(md)
    fp = group_fingerprint(autos)
    assert fp["closed"] and name_group(fp) == "D8"


def test_swapping_deligne_factors_is_cross_factor():
    e = catalog("Z(adA:6)")
    labels = e.ring.labels
    swap = tuple(labels.index("⊠".join(reversed(lab.split("⊠")))) for lab in labels)
    assert swap in ring_automorphisms(e.ring)
    assert is_cross_factor(e, swap)
    assert not is_cross_factor(e, tuple(range(e.rank)))


@pytest.mark.parametrize("name,k", [("Z(E6)", 5), ("Z(A:7)", 3), ("Z(adD:10)", 7)])
def test_galois_conjugation(name, k):
    md = modular_data(name, calibrated_factors(name))
    m = 1
    for x in md.t:
        m = math.lcm(m, x.m)
    for f in md.factors:
        m = math.lcm(m, (f.qh * root_of_unity(4, 1)).m)
    conj = galois_conjugate_data(md, GaloisMap(m, k))
    assert conj.t != md.t
    assert twist_vector(md.entry, conj.factors) == conj.t
    assert len(braided_automorphisms(conj)) == len(braided_automorphisms(md))


def test_split_halves_are_dual_to_each_other():
    md = modular_data("Z(adE6)", calibrated_factors("Z(adE6)"), with_s=True)
    S = s_numeric(md.S)
    S = S / np.sqrt((np.abs(S[0]) ** 2).sum())
    labels = md.ring.labels
    p, q = labels.index("P"), labels.index("Q")
    assert md.ring.dual[p] == q
    assert np.allclose(S @ S, np.eye(len(labels))[list(md.ring.dual)])
    dims = (S[0] / S[0, 0]).real
    assert math.isclose(dims[p], 1 + math.sqrt(3)) and math.isclose(dims[q], 1 + math.sqrt(3))


def test_bop_factor_inverts_twists():
    f = AFactor(5, root_of_unity(24, 1), "standard")
    g = AFactor(5, root_of_unity(24, 1), "bop")
    for n in range(5):
        a = twist_closed_form(n, f.kind, f.qh)
        b = twist_closed_form(n, g.kind, g.qh)
        assert a * b == root_of_unity(1, 0)
        assert abs(abs(embed_complex(a)) - 1) < 1e-12
