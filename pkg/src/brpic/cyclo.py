"""Exact arithmetic in cyclotomic fields Q(zeta_m).

A value is stored as an integer numerator vector in the power basis
1, z, ..., z^(phi(m)-1) of Q(zeta_m) together with one positive integer
denominator.  Vectors are always reduced modulo the cyclotomic polynomial,
so the representation inside a fixed field is unique.  Values living in
different fields are compared after embedding into the compositum; the
hash uses the (lazily computed) minimal field of definition.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

__all__ = [
    "CycScalar",
    "GaloisMap",
    "DivisionByZero",
    "root_of_unity",
    "quantum_integer",
    "embed_complex",
    "galois_apply",
    "real_sign",
    "parse_cyc",
    "sqrt_int",
]


class DivisionByZero(ZeroDivisionError):
    pass


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


@lru_cache(maxsize=None)
def _totient(m: int) -> int:
    result, n, p = m, m, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


@lru_cache(maxsize=None)
def _cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Coefficients (low degree first) of Phi_m, by exact polynomial division."""
    # x^m - 1 = prod_{d | m} Phi_d
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num = _poly_exact_div(num, list(_cyclotomic_poly(d)))
    return tuple(num)


def _poly_exact_div(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1] // lead
        out[i] = c
        if c:
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
    return out


class _Field:
    """Reduction tables for Q(zeta_m)."""

    __slots__ = ("m", "phi", "pow", "units")

    def __init__(self, m: int):
        self.m = m
        phi = _totient(m)
        self.phi = phi
        poly = _cyclotomic_poly(m)
        top = max(m, 2 * phi - 1)
        # pow[k] = sparse reduction of x^k mod Phi_m as ((index, coeff), ...)
        rows = []
        cur = [0] * phi
        for k in range(top):
            if k < phi:
                cur = [0] * phi
                cur[k] = 1
            else:
                carry = cur[-1]
                cur = [0] + cur[:-1]
                if carry:
                    for i in range(phi):
                        cur[i] -= carry * poly[i]
            rows.append(tuple((i, c) for i, c in enumerate(cur) if c))
        self.pow = rows
        self.units = tuple(k for k in range(1, m + 1) if gcd(k, m) == 1)

    def reduce_exp(self, e: int) -> tuple:
        return self.pow[e % self.m]


@lru_cache(maxsize=None)
def _field(m: int) -> _Field:
    return _Field(m)


def _mul_vec(F: _Field, a: tuple, b: tuple) -> list[int]:
    phi = F.phi
    conv = [0] * (2 * phi - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    conv[i + j] += ai * bj
    out = conv[:phi]
    pw = F.pow
    for k in range(phi, 2 * phi - 1):
        c = conv[k]
        if c:
            for i, r in pw[k]:
                out[i] += c * r
    return out


def _normalize(num: list[int], den: int) -> tuple[tuple, int]:
    if den < 0:
        num = [-c for c in num]
        den = -den
    g = den
    for c in num:
        if c:
            g = gcd(g, c)
            if g == 1:
                break
    if g != 1:
        num = [c // g for c in num]
        den //= g
    return tuple(num), den


def _embed_vec(num: tuple, m: int, L: int) -> list[int]:
    if m == L:
        return list(num)
    FL = _field(L)
    step = L // m
    out = [0] * FL.phi
    for e, c in enumerate(num):
        if c:
            for i, r in FL.pow[(e * step) % L]:
                out[i] += c * r
    return out


@lru_cache(maxsize=None)
def _descend_data(m: int, d: int):
    """Pivot rows and inverse matrix that recover Q(zeta_d) coordinates."""
    Fm, Fd = _field(m), _field(d)
    step = m // d
    cols = []
    for j in range(Fd.phi):
        v = [0] * Fm.phi
        for i, r in Fm.pow[(j * step) % m]:
            v[i] += r
        cols.append(v)
    # rows of B: B[i][j] = cols[j][i]; pick phi(d) independent rows
    B = [[Fraction(cols[j][i]) for j in range(Fd.phi)] for i in range(Fm.phi)]
    n = Fd.phi
    chosen, basis = [], []
    for i, row in enumerate(B):
        r = list(row)
        for piv, brow in basis:
            if r[piv]:
                f = r[piv]
                r = [x - f * y for x, y in zip(r, brow)]
        piv = next((k for k, x in enumerate(r) if x), None)
        if piv is not None:
            f = r[piv]
            r = [x / f for x in r]
            basis = [(p, [x - b[piv] * y for x, y in zip(b, r)]) for p, b in basis]
            basis.append((piv, r))
            chosen.append(i)
            if len(chosen) == n:
                break
    sub = [B[i] for i in chosen]
    inv = _mat_inverse(sub)
    return tuple(chosen), inv


def _mat_inverse(A: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(A)
    M = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        p = next(r for r in range(c, n) if M[r][c])
        M[c], M[p] = M[p], M[c]
        f = M[c][c]
        M[c] = [x / f for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                g = M[r][c]
                M[r] = [x - g * y for x, y in zip(M[r], M[c])]
    return [row[n:] for row in M]


def _divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


class CycScalar:
    """An element of Q(zeta_m), immutable."""

    __slots__ = ("m", "num", "den", "_key")

    def __init__(self, m: int, num, den: int = 1, *, _raw: bool = False):
        if _raw:
            self.m, self.num, self.den = m, num, den
        else:
            F = _field(m)
            if len(num) != F.phi:
                raise ValueError("numerator length must be phi(m)")
            self.m = m
            self.num, self.den = _normalize(list(num), den)
        self._key = None

    # constructors
    @classmethod
    def from_int(cls, n: int, m: int = 1) -> CycScalar:
        F = _field(m)
        return cls(m, (n,) + (0,) * (F.phi - 1), 1, _raw=True)

    @classmethod
    def from_fraction(cls, x, m: int = 1) -> CycScalar:
        x = Fraction(x)
        F = _field(m)
        return cls(m, (x.numerator,) + (0,) * (F.phi - 1), x.denominator, _raw=True)

    @classmethod
    def from_coeffs(cls, m: int, coeffs: dict) -> CycScalar:
        """Build sum c_e zeta_m^e from an arbitrary exponent -> rational map."""
        F = _field(m)
        fr = {e: Fraction(c) for e, c in coeffs.items() if c}
        den = 1
        for c in fr.values():
            den = _lcm(den, c.denominator)
        out = [0] * F.phi
        for e, c in fr.items():
            k = c.numerator * (den // c.denominator)
            for i, r in F.reduce_exp(e):
                out[i] += k * r
        return cls(m, out, den)

    # basic queries
    @property
    def coeffs(self) -> dict[int, Fraction]:
        return {e: Fraction(c, self.den) for e, c in enumerate(self.num) if c}

    def is_zero(self) -> bool:
        return not any(self.num)

    def __bool__(self) -> bool:
        return any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        k = self.key()
        if k[0] != 1:
            raise ValueError("not rational")
        return Fraction(k[1][0], k[2])

    # field changes
    def embed(self, L: int) -> CycScalar:
        if L == self.m:
            return self
        if L % self.m:
            raise ValueError(f"conductor {self.m} does not divide {L}")
        return CycScalar(L, tuple(_embed_vec(self.num, self.m, L)), self.den, _raw=True)

    def minimal(self) -> CycScalar:
        d, num, den = self.key()
        return CycScalar(d, num, den, _raw=True)

    def key(self) -> tuple:
        """Canonical (minimal conductor, numerator, denominator) triple."""
        if self._key is not None:
            return self._key
        m = self.m
        key = None
        if not any(self.num[1:]):
            key = (1, (self.num[0],), self.den)
        else:
            for d in _divisors(m):
                if d == m:
                    break
                if d % 4 == 2:
                    continue
                if all(self._fixed_by(k) for k in _field(m).units if (k - 1) % d == 0 and k != 1):
                    rows, inv = _descend_data(m, d)
                    xs = [self.num[i] for i in rows]
                    coords = [sum(a * x for a, x in zip(row, xs)) for row in inv]
                    den = 1
                    for c in coords:
                        den = _lcm(den, c.denominator)
                    num, den2 = _normalize([int(c * den) for c in coords], den * self.den)
                    key = (d, num, den2)
                    break
            if key is None:
                key = (m, self.num, self.den)
        self._key = key
        return key

    def _fixed_by(self, k: int) -> bool:
        return _galois_vec(self.num, self.m, k) == list(self.num)

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, CycScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return CycScalar.from_fraction(other, self.m)
        return NotImplemented

    @staticmethod
    def _align(a: CycScalar, b: CycScalar):
        if a.m == b.m:
            return a.m, a.num, b.num
        L = _lcm(a.m, b.m)
        return L, _embed_vec(a.num, a.m, L), _embed_vec(b.num, b.m, L)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        m, a, b = self._align(self, other)
        da, db = self.den, other.den
        if da == db:
            return CycScalar(m, [x + y for x, y in zip(a, b)], da)
        return CycScalar(m, [x * db + y * da for x, y in zip(a, b)], da * db)

    __radd__ = __add__

    def __neg__(self):
        return CycScalar(self.m, tuple(-c for c in self.num), self.den, _raw=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return CycScalar.from_int(0, self.m)
            return CycScalar(self.m, [c * other for c in self.num], self.den)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        m, a, b = self._align(self, other)
        return CycScalar(m, _mul_vec(_field(m), a, b), self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> CycScalar:
        if self.is_zero():
            raise DivisionByZero("division by zero in cyclotomic field")
        return _inverse(self.m, self.num, self.den)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = CycScalar.from_int(1, self.m)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> CycScalar:
        return galois_apply(GaloisMap(self.m, -1), self)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.num[0], self.den) == other
        if not isinstance(other, CycScalar):
            return NotImplemented
        if self.m == other.m:
            return self.den == other.den and self.num == other.num
        m, a, b = self._align(self, other)
        return self.den == other.den and a == b

    def __hash__(self):
        return hash(self.key())

    def __complex__(self):
        return embed_complex(self)

    def __repr__(self):
        return to_text(self)

    __str__ = __repr__


@lru_cache(maxsize=4096)
def _inverse(m: int, num: tuple, den: int) -> CycScalar:
    x = CycScalar(m, num, den, _raw=True)
    F = _field(m)
    y = CycScalar.from_int(1, m)
    for k in F.units:
        if k != 1:
            y = y * CycScalar(m, tuple(_galois_vec(num, m, k)), den, _raw=True)
    norm = (x * y).num[0], (x * y).den
    return y * Fraction(norm[1], norm[0])


def _galois_vec(num, m: int, k: int) -> list[int]:
    F = _field(m)
    out = [0] * F.phi
    for e, c in enumerate(num):
        if c:
            for i, r in F.pow[(e * k) % m]:
                out[i] += c * r
    return out


@dataclass(frozen=True)
class GaloisMap:
    """zeta_m -> zeta_m^k."""

    m: int
    k: int

    def __post_init__(self):
        k = self.k % self.m if self.m > 1 else 0
        if self.m > 1 and gcd(k, self.m) != 1:
            raise ValueError(f"{self.k} is not invertible mod {self.m}")
        object.__setattr__(self, "k", k)

    def compose(self, other: GaloisMap) -> GaloisMap:
        L = _lcm(self.m, other.m)
        k1 = _lift_unit(self.k, self.m, L)
        k2 = _lift_unit(other.k, other.m, L)
        return GaloisMap(L, k1 * k2)

    def __call__(self, x: CycScalar) -> CycScalar:
        return galois_apply(self, x)


def _lift_unit(k: int, m: int, L: int) -> int:
    """A unit mod L congruent to k mod m."""
    for j in range(L // m if m else 1):
        c = k + j * m
        if gcd(c, L) == 1:
            return c % L
    raise ValueError("no unit lift")


def root_of_unity(m: int, e: int = 1) -> CycScalar:
    """zeta_m^e."""
    if m < 1:
        raise ValueError("m must be positive")
    F = _field(m)
    out = [0] * F.phi
    for i, r in F.reduce_exp(e):
        out[i] += r
    return CycScalar(m, tuple(out), 1, _raw=True)


def quantum_integer(n: int, q: CycScalar) -> CycScalar:
    """[n]_q = (q^n - q^-n) / (q - q^-1)."""
    return _qint(n, q.m, q.num, q.den)


@lru_cache(maxsize=8192)
def _qint(n: int, m: int, num: tuple, den: int) -> CycScalar:
    q = CycScalar(m, num, den, _raw=True)
    d = q - q.inverse()
    if d.is_zero():
        raise DivisionByZero("quantum integer undefined at q = +-1")
    if n == 0:
        return CycScalar.from_int(0, m)
    if n < 0:
        return -_qint(-n, m, num, den)
    # q^(n-1) + q^(n-3) + ... + q^(1-n) avoids the division
    qi = q.inverse()
    acc = CycScalar.from_int(0, m)
    term = q ** (n - 1)
    q2i = qi * qi
    for _ in range(n):
        acc = acc + term
        term = term * q2i
    return acc


def galois_apply(sigma: GaloisMap, x: CycScalar) -> CycScalar:
    M = sigma.m
    if M % x.m:
        L = _lcm(M, x.m)
        sigma = GaloisMap(L, _lift_unit(sigma.k, M, L))
        M = L
    y = x.embed(M)
    return CycScalar(M, _galois_vec(y.num, M, sigma.k), y.den)


def embed_complex(x: CycScalar, digits: int = 15) -> complex:
    """Numeric value under zeta_m -> exp(2 pi i / m)."""
    if digits <= 15:
        m = x.m
        s = 0j
        for e, c in enumerate(x.num):
            if c:
                s += c * cmath.exp(2j * math.pi * e / m)
        return s / x.den
    import mpmath

    with mpmath.workdps(digits + 10):
        s = mpmath.mpc(0)
        for e, c in enumerate(x.num):
            if c:
                s += c * mpmath.expjpi(mpmath.mpf(2 * e) / x.m)
        s /= x.den
        return complex(s)


def real_sign(x: CycScalar) -> int:
    """Exact sign of a real cyclotomic number."""
    if x.is_zero():
        return 0
    if x.conj() != x:
        raise ValueError("value is not real")
    import mpmath

    dps = 30
    while True:
        with mpmath.workdps(dps):
            s = mpmath.mpf(0)
            for e, c in enumerate(x.num):
                if c:
                    s += c * mpmath.cospi(mpmath.mpf(2 * e) / x.m)
            bound = mpmath.mpf(10) ** (-(dps - 10)) * (1 + sum(abs(c) for c in x.num))
            if abs(s) > bound:
                return 1 if s > 0 else -1
        dps *= 2
        if dps > 4000:
            raise ArithmeticError("sign not resolved")


def sqrt_int(n: int) -> CycScalar:
    """sqrt(n) for n in {2, 3} as cyclotomic numbers (Gauss sums in general)."""
    if n == 1:
        return CycScalar.from_int(1)
    if n == 2:
        return root_of_unity(8, 1) + root_of_unity(8, -1)
    if n == 3:
        return root_of_unity(12, 1) + root_of_unity(12, -1)
    raise ValueError("only sqrt(2) and sqrt(3) are provided")


def to_text(x: CycScalar) -> str:
    parts = []
    for e, c in enumerate(x.num):
        if c:
            f = Fraction(c, x.den)
            parts.append(f"{e}:{f.numerator}" if f.denominator == 1 else f"{e}:{f.numerator}/{f.denominator}")
    return f"cyc({x.m}; {', '.join(parts)})"


_TEXT = re.compile(r"^\s*cyc\(\s*(\d+)\s*;(.*)\)\s*$")


def parse_cyc(text: str) -> CycScalar:
    """Inverse of str(); accepts any exponents (they are reduced)."""
    mt = _TEXT.match(text)
    if not mt:
        raise ValueError(f"not a cyclotomic literal: {text!r}")
    m = int(mt.group(1))
    coeffs: dict[int, Fraction] = {}
    body = mt.group(2).strip()
    if body:
        for item in body.split(","):
            e, c = item.split(":")
            coeffs[int(e)] = coeffs.get(int(e), Fraction(0)) + Fraction(c.strip())
    return CycScalar.from_coeffs(m, coeffs)
