"""Acceptance criteria 1-10, each at its stated tolerance.

Every check records its outcome through the ``criterion`` fixture before
asserting, so the terminal summary carries one PASS/FAIL line per criterion
even when a check is an expected failure.
"""

import math
import random
import time

import numpy as np
import pytest

from brpic.centre_pa import (
    confluence_check, gauge_classes, generator_arities, natural_iso_check,
    pa_automorphism_solve, presentation, random_diagram, verify_relation,
)
from brpic.cyclo import GaloisMap, embed_complex, quantum_integer, root_of_unity, sqrt_int
from brpic.fusion import catalog, catalog_names, fp_dims
from brpic.modular import (
    braided_automorphisms, calibrated_factors, galois_conjugate_data, group_fingerprint,
    modular_data, name_group, root_from_fraction, twist_vector,
)
from brpic.morita import (
    bp_table, candidates_by_rank, parse_auto, product_grid, restriction_matrix,
)
from brpic.tl import curl_value, jones_wenzl, markov_trace

pytestmark = pytest.mark.acceptance


def as_dict(v):
    return {k: int(n) for k, n in v.as_dict().items() if n}


def exact_twists(name):
    e = catalog(name)
    return dict(zip(e.ring.labels, twist_vector(e, calibrated_factors(name))))


# ------------------------------------------------------------- 1. Z(E6) dimensions

def test_criterion_1_fp_dimensions_of_z_e6(fixtures, criterion):
    start = time.perf_counter()
    ring = catalog("Z(E6)").ring
    dims = dict(zip(ring.labels, fp_dims(ring)))
    printed = fixtures["table2"]["fpdims"]
    off = {lab: abs(embed_complex(dims[lab]).real - v) for lab, v in printed.items()}
    worst = max(off.values())
    elapsed = time.perf_counter() - start
    ok = len(printed) == 33 == ring.rank and worst < 1e-3 and elapsed < 5
    criterion(1, ok, f"33 dims, max deviation {worst:.1e}, {elapsed:.2f}s")
    assert ok


# ------------------------------------------------------------- 2. Z(E6) twists

@pytest.mark.xfail(strict=True, reason="two printed twists contradict multiplicativity")
def test_criterion_2_twists_of_z_e6(fixtures, criterion):
    start = time.perf_counter()
    got = exact_twists("Z(E6)")
    printed = {lab: root_from_fraction(v) for lab, v in fixtures["table3"]["twists"].items()}
    wrong = sorted(lab for lab in printed if got[lab] != printed[lab])
    elapsed = time.perf_counter() - start
    ok = len(printed) == 33 and not wrong and elapsed < 5
    criterion(2, ok, f"{33 - len(wrong)}/33 exact, mismatched {wrong}, {elapsed:.2f}s")
    assert ok


# ------------------------------------------------------------- 3. Z(adE6) data

def test_criterion_3_z_ad_e6(fixtures, criterion):
    start = time.perf_counter()
    tab = fixtures["table1"]
    ring = catalog("Z(adE6)").ring
    dims = dict(zip(ring.labels, fp_dims(ring)))
    r3 = sqrt_int(3)
    dims_ok = all(dims[lab] == a + r3 * b for lab, (a, b) in tab["fpdims"].items())
    pattern = {tuple(v) for v in tab["fpdims"].values()} == {(1, 0), (1, 1), (2, 1), (3, 1)}
    got = exact_twists("Z(adE6)")
    twists_ok = all(got[lab] == root_from_fraction(v) for lab, v in tab["twists"].items())
    elapsed = time.perf_counter() - start
    ok = dims_ok and pattern and twists_ok and len(tab["twists"]) == 10 and elapsed < 5
    criterion(3, ok, f"dims {dims_ok}, twists {twists_ok}, {elapsed:.2f}s")
    assert ok


# ------------------------------------------------- 4. algebra candidates

def test_criterion_4_candidates_of_ad_d10(fixtures, criterion):
    start = time.perf_counter()
    ring = catalog("adD:10").ring
    found = candidates_by_rank(ring, (3, 4, 6))
    results = []
    for k in (3, 4, 6):
        expect = {tuple(sorted(d.items())) for d in fixtures["algebras_adD10"][str(k)]}
        got = [tuple(sorted(as_dict(c.multiplicities).items())) for c in found[k]]
        results.append(len(got) == len(set(got)) and set(got) == expect)
    counts = [len(found[k]) for k in (3, 4, 6)]
    elapsed = time.perf_counter() - start
    ok = all(results) and counts == [3, 10, 6]
    criterion(4, ok, f"counts {counts}, {elapsed:.1f}s")
    assert ok


# ------------------------------------------------------ 5. ad(D_10) table

@pytest.fixture(scope="module")
def table_d10(fixtures):
    return bp_table("adD:10", ranks=(3, 4, 6), fixtures=fixtures)


def _multiset(decomp):
    return sorted(tuple(sorted(as_dict(v).items())) for v in decomp)


def _fixture_multiset(decomp):
    return sorted(tuple(sorted(d.items())) for d in decomp)


def test_criterion_5_bimodule_table_of_ad_d10(fixtures, table_d10, criterion):
    fx = fixtures["bp_adD10"]
    ring = catalog("adD:10").ring
    autos = [parse_auto(ring, a) for a in fx["autos"]]
    _, grid = product_grid(table_d10, factor_autos=autos)
    vectors = {name: tuple(sorted(v.items())) for name, v in fx["vectors"].items()}
    cells = all(tuple(sorted(as_dict(grid[i][j].vector).items())) == vectors[fx["table"][i][j]]
                for i in range(6) for j in range(6))

    by_name = {}
    for i in range(6):
        for j in range(6):
            by_name.setdefault(fx["table"][i][j], grid[i][j])
    unique = all(len(by_name[n].decompositions) == 1
                 and _multiset(by_name[n].decompositions[0]) == _fixture_multiset(fx["decompositions"][n][0])
                 for n in ("I", "Bf2", "BP", "BQ"))
    a = by_name["A"]
    both = sorted(_multiset(d) for d in a.decompositions) == sorted(_fixture_multiset(d) for d in fx["decompositions"]["A"])
    rejected = [_multiset(d) for d in a.decompositions if d not in a.accepted]
    filt = (len(a.accepted) == 1 and len(rejected) == 1
            and rejected[0] == _fixture_multiset(fx["rejected"]["A"][0])
            and len(set(rejected[0])) == 1 and len(rejected[0]) == 3)
    counts = {k.replace(" ", ""): v for k, v in table_d10.structures.items()}
    structures = all(counts.get(k.replace(" ", "")) == v for k, v in fx["structures"].items())
    ok = cells and unique and both and filt and structures and table_d10.out_order == 6
    criterion(5, ok, f"cells {cells}, unique I/B {unique}, A {both}, 3x rejected {filt}, "
                     f"structures {table_d10.structures}")
    assert ok


# ------------------------------------------------------- 6. ad(A_7) table

def test_criterion_6_ad_a7(fixtures, criterion):
    fx = fixtures["bp_adA7"]
    centre = catalog("Z(adA:7)").ring
    base = catalog("adA:7").ring
    R = np.array(restriction_matrix("adA:7"))
    cols = [centre.index(c) for c in fx["columns"]]
    rows = [base.index(r) for r in fx["rows"]]
    induction = R[np.ix_(cols, rows)].T
    matrix_ok = induction.tolist() == fx["induction_matrix"]

    table = bp_table("adA:7", fixtures=fixtures)
    r = parse_auto(centre, fx["generators"]["r"])
    s = parse_auto(centre, fx["generators"]["s"])

    def comp(p, q):  # p after q
        return tuple(p[q[i]] for i in range(len(q)))

    e = tuple(range(centre.rank))
    r2 = comp(r, r)
    r3 = comp(r, r2)
    words = {"e": e, "r": r, "r2": r2, "r3": r3, "s": s,
             "rs": comp(r, s), "r2s": comp(r2, s), "r3s": comp(r3, s)}
    cells = {}
    for key, perm in words.items():
        cell = table.cell(perm)
        cells[key] = as_dict(cell.underlying) if cell.underlying is not None else None
    table_ok = all(cells[k] == v for k, v in fx["table"].items())
    ok = matrix_ok and table_ok and table.group == "D8"
    criterion(6, ok, f"induction matrix {matrix_ok}, 8 cells {table_ok}")
    assert ok


# ---------------------------------------------- 7. Brauer-Picard groups

def test_criterion_7_brauer_picard_orders(fixtures, criterion):
    start = time.perf_counter()
    wrong = []
    for name, group in fixtures["brpic_orders"].items():
        md = modular_data(name, calibrated_factors(name, fixtures))
        fp = group_fingerprint(braided_automorphisms(md))
        if name_group(fp) != group or not fp["closed"]:
            wrong.append((name, name_group(fp), group))
    elapsed = time.perf_counter() - start
    total = len(fixtures["brpic_orders"])
    ok = not wrong and elapsed < 600
    criterion(7, ok, f"{total - len(wrong)}/{total} groups, {elapsed:.1f}s")
    assert ok, wrong


# -------------------------------------------------- 8. scalar anchors

def test_criterion_8_scalar_anchors(criterion):
    ring = catalog("adD:10").ring
    d = fp_dims(ring)
    dim = embed_complex(d[ring.index("f0")] + d[ring.index("f6")]).real
    target = 1 + math.cos(math.pi / 9) / math.sin(math.pi / 18)
    dim_ok = abs(dim - target) < 1e-6

    curl_ok = curl_value(1, "standard", root_of_unity(48, 1)) == root_from_fraction("15/24")

    # f^(12) needs [12]_q != 0, which fails at q = e^{iπ/12}; n = 12 uses q = e^{iπ/14}
    traces_ok = True
    for n in range(13):
        q = root_of_unity(24 if n < 12 else 28, 1)
        traces_ok &= markov_trace(jones_wenzl(n, q)) == quantum_integer(n + 1, q)
    ok = dim_ok and curl_ok and traces_ok
    criterion(8, ok, f"dim 1+f6 {dim:.9f}, curl {curl_ok}, traces n<=12 {traces_ok}")
    assert ok


# --------------------------------------------- 9. property acceptance

PRESENTATIONS = [("ZadA", 1), ("ZadA", 2), ("ZadA", 3), ("ZadE6", None)]


@pytest.mark.xfail(strict=True, reason="the braiding relation as printed does not hold")
@pytest.mark.parametrize("N", [1, 2, 3])
def test_criterion_9_relations_as_printed(N, criterion):
    pres = presentation("ZadA", N)
    failing = [k for k in range(1, 14) if not verify_relation(pres, k).holds]
    ok = not failing
    criterion(9, ok, f"N={N}: relations failing as printed {failing}")
    assert ok


@pytest.mark.parametrize("family,N", PRESENTATIONS)
def test_criterion_9_relations_with_derived_braiding(family, N, criterion):
    pres = presentation(family, N)
    failing = [k for k in range(1, 14) if not verify_relation(pres, k, printed=False).holds]
    ok = not failing
    criterion(9, ok, f"{pres.name}: 13 relations with derived braiding coefficients "
                     f"{'hold' if ok else failing}")
    assert ok


@pytest.mark.parametrize("N", [1, 2, 3])
def test_criterion_9_confluence(N, criterion):
    pres = presentation("ZadA", N)
    rng = random.Random(2024)
    bad = []
    for i in range(100):
        d = random_diagram(pres, rng, max_width=4, steps=8, s_pairs=rng.randint(0, 1))
        if not confluence_check(d)[0]:
            bad.append(d.to_text())
    ok = not bad
    criterion(9, ok, f"{pres.name}: {100 - len(bad)}/100 confluent")
    assert ok, bad[:3]


def test_criterion_9_fusion_ring_axioms(criterion):
    bad = [n for n in catalog_names() if catalog(n).ring.check_axioms()]
    ok = not bad
    criterion(9, ok, f"{len(catalog_names()) - len(bad)}/{len(catalog_names())} rings pass axioms")
    assert ok, bad


def test_criterion_9_galois_invariance(criterion):
    pairs = [("Z(E6)", 5), ("Z(A:7)", 3), ("Z(adD:10)", 7)]
    results = []
    for name, k in pairs:
        md = modular_data(name, calibrated_factors(name))
        m = 1
        for x in md.t:
            m = math.lcm(m, x.m)
        for f in md.factors:
            m = math.lcm(m, (f.qh * root_of_unity(4, 1)).m)
        conj = galois_conjugate_data(md, GaloisMap(m, k))
        results.append(conj.t != md.t
                       and len(braided_automorphisms(conj)) == len(braided_automorphisms(md)))
    ok = all(results)
    criterion(9, ok, f"Galois pairs {results}")
    assert ok


# ------------------------------------------------ 10. PA automorphisms

def test_criterion_10_pa_automorphisms(criterion):
    expected = {"A": 1, "adA": 2, "adD": 4, "ZadA": 2, "ZadE6": 2}
    cases = ([("A", N) for N in (3, 4, 5, 6)] + [("adA", N) for N in (4, 5, 6, 7)]
             + [("adD", N) for N in (3, 4, 5)] + [("ZadA", N) for N in (1, 2, 3)] + [("ZadE6", None)])
    counts = {}
    for family, N in cases:
        counts.setdefault(family, set()).add(len(pa_automorphism_solve(family, N)))
    counts_ok = all(counts[f] == {n} for f, n in expected.items())

    sols = pa_automorphism_solve("adA", 4)
    ar = generator_arities("adA", 4)
    ident = next(s for s in sols if s.is_identity())
    other = next(s for s in sols if not s.is_identity())
    collapse = natural_iso_check(other, ident, -1, ar) and len(gauge_classes("adA", 4)) == 1

    sols = pa_automorphism_solve("adD", 5)
    ar = generator_arities("adD", 5)
    ident = next(s for s in sols if s.is_identity())
    flips = [s for s in sols if s.scalar("S") == -ident.scalar("S")]
    no_collapse = bool(flips) and not any(natural_iso_check(s, ident, eta, ar)
                                          for s in flips for eta in (1, -1)) \
        and len(gauge_classes("adD", 5)) == 2

    ok = counts_ok and collapse and no_collapse
    shown = {f: sorted(v) for f, v in counts.items()}
    criterion(10, ok, f"counts {shown}, ad(A) parity collapse {collapse}, ad(D) non-collapse {no_collapse}")
    assert ok
