import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from brpic.cyclo import embed_complex
from brpic.fusion import (
    FusionRing, UnknownName, adjoint_subring, catalog, catalog_names, de_equivariantize,
    deligne_product, fp_dims, fp_dims_numeric, ring_automorphisms, verlinde_ring,
)


def su2_rule(N, i, j, k):
    """Truncated Clebsch-Gordan rule for A_N, written out independently."""
    return int(abs(i - j) <= k <= min(i + j, 2 * (N - 1) - i - j) and (i + j + k) % 2 == 0)


@pytest.mark.parametrize("N", [2, 3, 5, 8, 11])
def test_verlinde_ring_structure_constants(N):
    r = verlinde_ring(N)
    for i in range(N):
        for j in range(N):
            for k in range(N):
                assert r.N[i, j, k] == su2_rule(N, i, j, k)


@pytest.mark.parametrize("N", [3, 4, 7, 12])
def test_fp_dims_are_sine_ratios(N):
    r = verlinde_ring(N)
    got = np.array([embed_complex(x).real for x in fp_dims(r)])
    expect = [math.sin((n + 1) * math.pi / (N + 1)) / math.sin(math.pi / (N + 1)) for n in range(N)]
    assert np.allclose(got, expect)
    assert np.allclose(fp_dims_numeric(r), expect)


@given(st.sampled_from([n for n in catalog_names() if not n.startswith("Z(A:1") and not n.startswith("Z(adA:1")]))
def test_catalog_rings_satisfy_axioms(name):
    assert catalog(name).ring.check_axioms() == []


def test_deligne_product_dimensions():
    a, b = verlinde_ring(3), verlinde_ring(4)
    p = deligne_product(a, b)
    assert p.rank == 12 and p.check_axioms() == []
    d = fp_dims_numeric(p)
    assert np.allclose(sorted(d), sorted(np.outer(fp_dims_numeric(a), fp_dims_numeric(b)).ravel()))


def test_adjoint_subring_keeps_even_labels():
    assert adjoint_subring(verlinde_ring(7)).labels == ("f0", "f2", "f4", "f6")


def test_de_equivariantization_gives_d_series():
    r = de_equivariantize(verlinde_ring(17), 16)
    assert r.rank == 10 and r.check_axioms() == []
    d = dict(zip(r.labels, fp_dims_numeric(r)))
    assert math.isclose(d["P"], d["Q"])
    assert math.isclose(2 * d["P"], fp_dims_numeric(verlinde_ring(17))[8])


def test_catalog_matches_d10():
    assert catalog("D:10").ring.labels[-2:] == ("P", "Q")
    assert catalog("ad(D10)").name == "adD:10"


@pytest.mark.parametrize("name,count", [("adA:4", 1), ("adA:7", 2), ("adD:10", 6), ("Z(adE6)", 2)])
def test_ring_automorphism_counts(name, count):
    autos = ring_automorphisms(catalog(name).ring)
    assert len(autos) == count
    r = catalog(name).ring
    for p in autos:
        p = np.array(p)
        assert np.array_equal(r.N[np.ix_(p, p, p)], r.N)


def test_json_roundtrip():
    r = catalog("adD:10").ring
    back = FusionRing.from_json(r.to_json())
    assert back.labels == r.labels
    assert np.array_equal(back.N, r.N)


def test_vectors():
    r = catalog("adD:10").ring
    v = r.vector({"f0": 1, "f6": 1})
    assert math.isclose(v.dim(), 1 + math.cos(math.pi / 9) / math.sin(math.pi / 18), rel_tol=1e-9)
    assert v.dual().as_dict() == v.as_dict()


def test_unknown_names():
    with pytest.raises(UnknownName):
        catalog("Q:3")
    with pytest.raises(UnknownName):
        catalog("A:5,q=mod")


def test_axiom_checker_catches_bad_rings():
    r = verlinde_ring(3)
    N = r.N.copy()
    N[1, 1, 2] = 0
    assert FusionRing(r.labels, N, r.dual).check_axioms() != []
