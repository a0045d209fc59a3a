import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from brpic.cyclo import (
    CycScalar, DivisionByZero, GaloisMap, embed_complex, galois_apply,
    parse_cyc, quantum_integer, real_sign, root_of_unity, sqrt_int, to_text,
)

CONDUCTORS = [1, 3, 4, 5, 8, 12, 15, 24, 48]


@st.composite
def scalars(draw, m=None):
    m = draw(st.sampled_from(CONDUCTORS)) if m is None else m
    coeffs = draw(st.dictionaries(st.integers(0, m - 1), st.builds(Fraction, st.integers(-20, 20), st.integers(1, 7)), max_size=4))
    return CycScalar.from_coeffs(m, coeffs)


@given(scalars(), scalars(), scalars())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == CycScalar.from_int(0)


@given(scalars(), scalars())
def test_embedding_is_a_homomorphism(a, b):
    assert abs(embed_complex(a * b) - embed_complex(a) * embed_complex(b)) < 1e-6 * (1 + abs(embed_complex(a * b)))
    assert abs(embed_complex(a + b) - embed_complex(a) - embed_complex(b)) < 1e-9


@given(scalars())
def test_inverse(a):
    if a.is_zero():
        with pytest.raises(DivisionByZero):
            a.inverse()
    else:
        assert a * a.inverse() == CycScalar.from_int(1)


@given(scalars())
def test_canonical_key_is_field_independent(a):
    assert a.embed(a.m * 2) == a
    assert a.embed(a.m * 3).key() == a.key()


@given(scalars(), st.sampled_from([1, 5, 7, 11, 13]))
def test_galois_is_multiplicative(a, k):
    sigma = GaloisMap(24, k)
    b = a * a + CycScalar.from_int(3)
    assert galois_apply(sigma, a * b) == galois_apply(sigma, a) * galois_apply(sigma, b)


def test_galois_moves_roots():
    z = root_of_unity(24, 1)
    assert galois_apply(GaloisMap(24, 5), z) == root_of_unity(24, 5)
    with pytest.raises(ValueError):
        GaloisMap(24, 4)


@given(scalars())
def test_text_roundtrip(a):
    assert parse_cyc(to_text(a)) == a


@pytest.mark.parametrize("n", range(-3, 12))
@pytest.mark.parametrize("m", [5, 7, 12, 24])
def test_quantum_integer_matches_sine_ratio(n, m):
    q = root_of_unity(2 * m, 1)  # q = e^{i pi / m}
    expect = math.sin(n * math.pi / m) / math.sin(math.pi / m)
    assert abs(embed_complex(quantum_integer(n, q)) - expect) < 1e-12


def test_quantum_integer_at_one_is_undefined():
    with pytest.raises(DivisionByZero):
        quantum_integer(2, CycScalar.from_int(1))


def test_square_roots():
    assert sqrt_int(2) * sqrt_int(2) == CycScalar.from_int(2)
    assert sqrt_int(3) * sqrt_int(3) == CycScalar.from_int(3)
    assert real_sign(sqrt_int(3) - CycScalar.from_int(2)) == -1
    assert real_sign(sqrt_int(3) - CycScalar.from_fraction("17/10")) == 1


def test_real_sign_rejects_complex():
    with pytest.raises(ValueError):
        real_sign(root_of_unity(8, 1))


def test_high_precision_embedding():
    z = root_of_unity(7, 2)
    assert abs(embed_complex(z, digits=30) - cmath.exp(4j * math.pi / 7)) < 1e-14
