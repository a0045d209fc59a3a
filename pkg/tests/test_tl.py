from math import comb

import pytest
from hypothesis import given, strategies as st

from brpic.cyclo import quantum_integer, root_of_unity
from brpic.tl import (
    ArityMismatch, QuantumIntegerZero, braid_element, cable_braid, cap_at, compose,
    curl_value, e_gen, hat, hopf_closed_form, hopf_value, identity, is_planar,
    jones_wenzl, jones_wenzl_two_sided, markov_trace, matchings, partial_trace, rho,
    tau, tensor, twist_closed_form,
)

QH = root_of_unity(48, 1)  # q = e^{i pi / 12}
Q = QH * QH


def catalan(n):
    return comb(2 * n, n) // (n + 1)


@pytest.mark.parametrize("n", range(7))
def test_matchings_are_planar_and_counted(n):
    ms = matchings(n, n)
    assert len(ms) == catalan(n)
    assert all(is_planar(p, n) for p in ms)


@st.composite
def words(draw, n=4):
    idx = draw(st.lists(st.integers(1, n - 1), max_size=5))
    x = identity(n, Q)
    for i in idx:
        x = compose(e_gen(n, i, Q), x)
    return x


@given(words(), words(), words())
def test_composition_is_associative(a, b, c):
    assert compose(compose(a, b), c) == compose(a, compose(b, c))


def test_tl_relations():
    d = quantum_integer(2, Q)
    e1, e2 = e_gen(3, 1, Q), e_gen(3, 2, Q)
    assert compose(e1, e1) == e1.scale(d)
    assert compose(compose(e1, e2), e1) == e1


@pytest.mark.parametrize("n", range(1, 7))
def test_jones_wenzl_is_uncappable_idempotent(n):
    f = jones_wenzl(n, Q)
    assert compose(f, f) == f
    for i in range(n - 1):
        assert cap_at(f, i).is_zero()
    assert markov_trace(f) == quantum_integer(n + 1, Q)


@pytest.mark.parametrize("n", range(1, 6))
def test_two_sided_recursion_agrees(n):
    assert jones_wenzl_two_sided(n, Q) == jones_wenzl(n, Q)


def test_jones_wenzl_undefined_past_level():
    with pytest.raises(QuantumIntegerZero):
        jones_wenzl(12, Q)


def test_partial_trace_of_jones_wenzl():
    f = jones_wenzl(3, Q)
    ratio = quantum_integer(4, Q) * quantum_integer(3, Q).inverse()
    assert partial_trace(f, 1) == jones_wenzl(2, Q).scale(ratio)


@pytest.mark.parametrize("kind", ["standard", "bop"])
def test_reidemeister_moves(kind):
    x, xi = braid_element(kind, QH), braid_element(kind, QH, inverse=True)
    assert compose(x, xi) == identity(2, Q)
    s1 = tensor(x, identity(1, Q))
    s2 = tensor(identity(1, Q), x)
    assert compose(compose(s1, s2), s1) == compose(compose(s2, s1), s2)


def test_cable_braid_naturality():
    f = jones_wenzl(2, Q)
    c = cable_braid(2, 1, "standard", QH)
    left = compose(c, tensor(f, identity(1, Q)))
    right = compose(tensor(identity(1, Q), f), c)
    assert left == right


@pytest.mark.parametrize("kind", ["standard", "bop"])
@pytest.mark.parametrize("n", range(0, 5))
def test_curl_matches_closed_form(kind, n):
    assert curl_value(n, kind, QH, brute_limit=4) == twist_closed_form(n, kind, QH)


def test_curl_of_first_label_anchor():
    assert curl_value(1, "standard", QH) == root_of_unity(48, 15)


@pytest.mark.parametrize("m,n", [(1, 1), (1, 2), (2, 2), (1, 3)])
def test_hopf_link(m, n):
    assert hopf_value(m, n, "standard", QH) == hopf_closed_form(m, n, Q)


@given(words())
def test_rotation_has_full_period(x):
    k = x.n + x.m
    assert rho(x, k) == x
    assert rho(rho(x), k - 1) == x


@given(words())
def test_trace_is_cyclic(x):
    y = e_gen(4, 2, Q)
    assert markov_trace(compose(x, y)) == markov_trace(compose(y, x))


def test_closures_of_jones_wenzl():
    f = jones_wenzl(3, Q)
    assert hat(f).terms[()] == quantum_integer(4, Q)
    assert tau(f).is_zero()


def test_arity_checks():
    with pytest.raises(ArityMismatch):
        identity(2, Q) + identity(3, Q)
