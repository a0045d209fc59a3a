"""Twists, S-matrices, calibration and braided automorphisms of catalog entries."""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from math import gcd

import numpy as np

from .cyclo import CycScalar, GaloisMap, embed_complex, galois_apply, quantum_integer, root_of_unity
from .fusion import AFactor, CatalogEntry, catalog, ring_automorphisms
from .tl import curl_value, hopf_closed_form

__all__ = [
    "ModularData",
    "CalibrationMissing",
    "NoCalibrationMatch",
    "load_fixtures",
    "twist_vector",
    "s_matrix",
    "modular_data",
    "calibrate",
    "calibrated_factors",
    "expected_twists",
    "root_from_fraction",
    "factor_twist",
    "name_group",
    "s_numeric",
    "braided_automorphisms",
    "group_fingerprint",
    "is_cross_factor",
    "galois_conjugate_data",
    "is_modular",
]


class CalibrationMissing(LookupError):
    pass


class NoCalibrationMatch(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class ModularData:
    entry: CatalogEntry
    factors: tuple
    t: tuple
    S: tuple | None = None

    @property
    def ring(self):
        return self.entry.ring


# ---------------------------------------------------------------- fixtures

def load_fixtures(path=None) -> dict:
    if path is None:
        text = resources.files("brpic").joinpath("data/fixtures.json").read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return json.loads(text)


def root_from_fraction(frac: str) -> CycScalar:
    """'a/b' (a multiple of pi i) -> e^{a pi i / b} as an exact root of unity."""
    f = Fraction(frac)
    return root_of_unity(2 * f.denominator, f.numerator)


# ---------------------------------------------------------------- twists

@lru_cache(maxsize=None)
def _factor_twist(N: int, qh_key: tuple, kind: str, n: int) -> CycScalar:
    qh = CycScalar(qh_key[0], qh_key[1], qh_key[2], _raw=True)
    return curl_value(n, kind, qh)


def factor_twist(f: AFactor, n: int) -> CycScalar:
    if f.kind is None:
        raise CalibrationMissing(f"A_{f.N} factor carries no braiding")
    return _factor_twist(f.N, f.qh.key(), f.kind, n)


def twist_vector(entry: CatalogEntry | str, factors=None) -> tuple:
    """Product over factors of the curl scalar of each lifted label."""
    if isinstance(entry, str):
        entry = catalog(entry)
    factors = entry.factors if factors is None else factors
    out = []
    for lift in entry.lifts:
        t = CycScalar.from_int(1)
        for f, n in zip(factors, lift):
            t = t * factor_twist(f, n)
        out.append(t)
    return tuple(out)


# ---------------------------------------------------------------- S-matrix

def _cat_dim(factors, lift, split) -> CycScalar:
    d = CycScalar.from_int(1)
    for f, n in zip(factors, lift):
        d = d * quantum_integer(n + 1, f.q)
    return d * Fraction(1, 2) if split else d


def _balancing_s(ring, t, dims) -> list:
    r = ring.rank
    tinv = [x.inverse() for x in t]
    td = [t[c] * dims[c] for c in range(r)]
    S = [[None] * r for _ in range(r)]
    for a in range(r):
        da = ring.dual[a]
        for b in range(a, r):
            acc = CycScalar.from_int(0)
            for c in np.nonzero(ring.N[da, b])[0]:
                acc = acc + td[c] * int(ring.N[da, b, c])
            S[a][b] = S[b][a] = acc * tinv[a] * tinv[b]
    return S


def s_matrix(entry: CatalogEntry | str, factors=None) -> tuple:
    """Unnormalized S: Hopf-link values for pure A-factor labels, balancing for splits."""
    if isinstance(entry, str):
        entry = catalog(entry)
    factors = entry.factors if factors is None else factors
    parts = entry.parts or (entry,)
    if len(parts) > 1:
        mats = []
        off = 0
        for p in parts:
            k = len(p.factors)
            mats.append(s_matrix(p, factors[off:off + k]))
            off += k
        out = mats[0]
        for m in mats[1:]:
            out = _kron(out, m)
        return tuple(tuple(row) for row in out)
    if any(entry.split):
        t = twist_vector(entry, factors)
        dims = [_cat_dim(factors, lf, sp) for lf, sp in zip(entry.lifts, entry.split)]
        return tuple(tuple(row) for row in _balancing_s(entry.ring, t, dims))
    r = entry.rank
    S = [[None] * r for _ in range(r)]
    for a in range(r):
        for b in range(a, r):
            v = CycScalar.from_int(1)
            for f, m, n in zip(factors, entry.lifts[a], entry.lifts[b]):
                v = v * hopf_closed_form(m, n, f.q)
            S[a][b] = S[b][a] = v
    return tuple(tuple(row) for row in S)


def _kron(A, B):
    return [[x * y for x in ra for y in rb] for ra in A for rb in B]


def s_numeric(S) -> np.ndarray:
    return np.array([[complex(embed_complex(x)) for x in row] for row in S])


def is_modular(S) -> bool:
    M = s_numeric(S)
    return abs(np.linalg.det(M / np.abs(M).max())) > 1e-9


def modular_data(entry: CatalogEntry | str, factors=None, with_s: bool = False) -> ModularData:
    if isinstance(entry, str):
        entry = catalog(entry)
    factors = entry.factors if factors is None else factors
    t = twist_vector(entry, factors)
    S = s_matrix(entry, factors) if with_s else None
    return ModularData(entry, tuple(factors), t, S)


# ------------------------------------------------------------- calibration

def _candidate_factors(f: AFactor, kinds):
    """Every q^{1/2} (conductor 4(N+1)) whose square has [N+1]_q = 0 and [k]_q != 0 below."""
    M = 4 * (f.N + 1)
    for j in range(1, M):
        qh = root_of_unity(M, j)
        # q^2 must be a primitive (N+1)-th root of unity
        if not _primitive(4 * j % M, M, f.N + 1):
            continue
        for kind in kinds:
            yield AFactor(f.N, qh, kind)


def _primitive(exp: int, M: int, order: int) -> bool:
    """Is zeta_M^exp a primitive root of unity of the given order?"""
    return exp % M != 0 and M // gcd(exp, M) == order


def _sub_labels(entry: CatalogEntry, i: int) -> list:
    out = []
    for idx, (lf, sp) in enumerate(zip(entry.lifts, entry.split)):
        if sp:
            continue
        if all(n == 0 for k, n in enumerate(lf) if k != i):
            out.append(idx)
    return out


def calibrate(entry: CatalogEntry | str, expected: dict) -> list:
    """Per-factor (q^{1/2}, kind) choices reproducing the expected twists.

    ``expected`` maps labels to CycScalar twists.  Each factor is fitted on
    the labels living purely in that factor; the result is one list of
    matching AFactor per factor, ordered with the declared kind first.
    """
    if isinstance(entry, str):
        entry = catalog(entry)
    out = []
    for i, f in enumerate(entry.factors):
        labs = [j for j in _sub_labels(entry, i) if entry.ring.labels[j] in expected]
        kinds = [f.kind] + [k for k in ("standard", "bop") if k != f.kind]
        matches = []
        for cand in _candidate_factors(f, kinds):
            ok = True
            for j in labs:
                n = entry.lifts[j][i]
                if factor_twist(cand, n) != expected[entry.ring.labels[j]]:
                    ok = False
                    break
            if ok:
                matches.append(cand)
        if not matches:
            raise NoCalibrationMatch(f"{entry.name}: factor {i} (A_{f.N})")
        # declared kind first, then smallest exponent of q^{1/2}
        matches.sort(key=lambda c: (c.kind != f.kind, _exponent(c.qh)))
        out.append(matches)
    return out


def _exponent(x: CycScalar) -> int:
    m, num, den = x.key()
    for e in range(m):
        if root_of_unity(m, e) == x:
            return e
    return m


def calibrated_factors(name: str, fixtures: dict | None = None) -> tuple:
    """Factors of a catalog entry calibrated from shipped twist fixtures, if any."""
    entry = catalog(name)
    fixtures = load_fixtures() if fixtures is None else fixtures
    cal = fixtures.get("calibration", {}).get(entry.name)
    if cal is None:
        return entry.factors
    source = catalog(cal["entry"])
    expected = expected_twists(fixtures, cal["table"])
    choice = calibrate(source, expected)
    return tuple(m[0] for m in choice)


def expected_twists(fixtures: dict, table: str) -> dict:
    tab = fixtures[table]
    return {lab: root_from_fraction(v) for lab, v in tab["twists"].items()}


# ------------------------------------------------------- automorphisms

def braided_automorphisms(md: ModularData) -> list:
    """Fusion automorphisms preserving every twist."""
    ring = md.ring
    keys = [x.key() for x in md.t]
    autos = ring_automorphisms(ring, invariants=keys)
    return [p for p in autos if all(md.t[p[i]] == md.t[i] for i in range(ring.rank))]


def _compose(p, q):
    return tuple(p[q[i]] for i in range(len(q)))


def _order(p) -> int:
    ident = tuple(range(len(p)))
    k, cur = 1, tuple(p)
    while cur != ident:
        cur = _compose(p, cur)
        k += 1
    return k


def group_fingerprint(perms) -> dict:
    perms = [tuple(p) for p in perms]
    orders = sorted(_order(p) for p in perms)
    abelian = all(_compose(a, b) == _compose(b, a) for a in perms for b in perms)
    closed = set(perms)
    is_group = all(_compose(a, b) in closed for a in perms for b in perms)
    return {"order": len(perms), "element_orders": orders, "abelian": abelian, "closed": is_group}


NAMED_GROUPS = {
    "{e}": {"order": 1, "element_orders": [1], "abelian": True},
    "Z/2": {"order": 2, "element_orders": [1, 2], "abelian": True},
    "(Z/2)^2": {"order": 4, "element_orders": [1, 2, 2, 2], "abelian": True},
    "S3": {"order": 6, "element_orders": [1, 2, 2, 2, 3, 3], "abelian": False},
    "S3xS3": {"order": 36, "element_orders": sorted([1] + [2] * 15 + [3] * 8 + [6] * 12), "abelian": False},
    "D8": {"order": 8, "element_orders": [1, 2, 2, 2, 2, 2, 4, 4], "abelian": False},
}


def name_group(fp: dict) -> str | None:
    for name, ref in NAMED_GROUPS.items():
        if all(fp[k] == v for k, v in ref.items()):
            return name
    return None


def is_cross_factor(entry: CatalogEntry, perm) -> bool:
    """True when perm moves some pure-factor label into a different factor."""
    parts = entry.parts
    if len(parts) < 2:
        return False
    off = 0
    for p in parts:
        k = len(p.factors)
        pure = [i for i, lf in enumerate(entry.lifts)
                if all(n == 0 for j, n in enumerate(lf) if not off <= j < off + k)
                and not entry.split[i]]
        for i in pure:
            lf = entry.lifts[perm[i]]
            if any(n != 0 for j, n in enumerate(lf) if not off <= j < off + k):
                return True
        off += k
    return False


# ------------------------------------------------------------ Galois

def galois_conjugate_data(md: ModularData, sigma: GaloisMap) -> ModularData:
    """Apply a field automorphism entrywise to t and S, and to the Kauffman variable of each factor."""
    t = tuple(galois_apply(sigma, x) for x in md.t)
    S = None
    if md.S is not None:
        S = tuple(tuple(galois_apply(sigma, x) for x in row) for row in md.S)
    # the Kauffman variable A = i q^{1/2} is what the diagrams see, so conjugate A
    i = root_of_unity(4, 1)
    factors = tuple(replace(f, qh=galois_apply(sigma, i * f.qh) * i.inverse()) for f in md.factors)
    return ModularData(md.entry, factors, t, S)
