"""Fusion rings: Verlinde rings, subrings, Deligne products, Z/2 de-equivariantization.

Structure constants live in a dense integer tensor ``N[i, j, k] = N_ij^k``.
Exact Frobenius-Perron dimensions are carried along as ``CycScalar`` values
whenever a ring is built from the constructors here.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .cyclo import CycScalar, embed_complex, quantum_integer, real_sign, root_of_unity

__all__ = [
    "FusionRing",
    "ObjectVector",
    "AFactor",
    "CatalogEntry",
    "NotGraded",
    "NotInvolution",
    "SplitSolverAmbiguous",
    "UnknownName",
    "verlinde_ring",
    "adjoint_subring",
    "subring",
    "deligne_product",
    "de_equivariantize",
    "fp_dims",
    "fp_dims_numeric",
    "ring_automorphisms",
    "catalog",
    "catalog_names",
]


class NotGraded(ValueError):
    pass


class NotInvolution(ValueError):
    pass


class SplitSolverAmbiguous(RuntimeError):
    pass


class UnknownName(KeyError):
    pass


# ----------------------------------------------------------------- rings

@dataclass(eq=False)
class FusionRing:
    labels: tuple
    N: np.ndarray
    dual: tuple
    unit: int = 0
    grading: tuple | None = None
    dims: tuple | None = None
    name: str = ""
    parts: tuple = ()

    def __post_init__(self):
        self.labels = tuple(self.labels)
        self.dual = tuple(int(d) for d in self.dual)
        self._index = {lab: i for i, lab in enumerate(self.labels)}

    @property
    def rank(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        if isinstance(label, (int, np.integer)):
            return int(label)
        try:
            return self._index[label]
        except KeyError:
            raise UnknownName(label) from None

    def product(self, i, j) -> dict:
        i, j = self.index(i), self.index(j)
        row = self.N[i, j]
        return {int(k): int(row[k]) for k in np.nonzero(row)[0]}

    def fusion_matrix(self, i) -> np.ndarray:
        """Matrix of left multiplication by label i: entry [k, j] = N_ij^k."""
        return self.N[self.index(i)].T.copy()

    def vector(self, mult=None, **named) -> ObjectVector:
        v = np.zeros(self.rank, dtype=np.int64)
        for lab, c in (mult or {}).items():
            v[self.index(lab)] += c
        for lab, c in named.items():
            v[self.index(lab)] += c
        return ObjectVector(self, v)

    def basis(self, label) -> ObjectVector:
        v = np.zeros(self.rank, dtype=np.int64)
        v[self.index(label)] = 1
        return ObjectVector(self, v)

    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.N, self.N.transpose(1, 0, 2)))

    def check_axioms(self, exhaustive_limit: int = 110) -> list:
        """Return a list of violated axioms (empty when the ring is valid)."""
        if self.parts and self.rank > exhaustive_limit:
            bad = []
            for p in self.parts:
                bad += [f"{p.name}: {b}" for b in p.check_axioms(exhaustive_limit)]
            return bad
        N = self.N
        r = self.rank
        bad = []
        u = self.unit
        if not np.array_equal(N[u], np.eye(r, dtype=N.dtype)):
            bad.append("unit")
        if (N < 0).any():
            bad.append("nonnegativity")
        d = np.array(self.dual)
        if not np.array_equal(d[d], np.arange(r)):
            bad.append("dual involution")
        if not np.array_equal(N[:, :, u], (np.arange(r)[None, :] == d[:, None]).astype(N.dtype)):
            bad.append("duality")
        if not np.array_equal(N, N[d].transpose(0, 2, 1)):
            bad.append("frobenius reciprocity")
        if not self.is_commutative():
            bad.append("commutativity")
        if not _associative(N):
            bad.append("associativity")
        return bad

    def to_json(self) -> str:
        nz = np.argwhere(self.N)
        triples = [[int(i), int(j), int(k), int(self.N[i, j, k])] for i, j, k in nz]
        return json.dumps({
            "name": self.name,
            "labels": list(self.labels),
            "unit": self.unit,
            "dual": list(self.dual),
            "N": triples,
        }, ensure_ascii=False)

    @classmethod
    def from_json(cls, text: str) -> FusionRing:
        data = json.loads(text)
        r = len(data["labels"])
        N = np.zeros((r, r, r), dtype=np.int16)
        for i, j, k, c in data["N"]:
            N[i, j, k] = c
        return cls(tuple(data["labels"]), N, tuple(data["dual"]), data["unit"], name=data.get("name", ""))


def _associative(N: np.ndarray) -> bool:
    r = N.shape[0]
    A = N.astype(np.float64)
    flat = A.reshape(r, r * r)
    for i in range(r):
        # (i j) k versus i (j k), both as (j, k, l) arrays
        left = (A[i] @ flat).reshape(r, r, r)
        right = A.reshape(r * r, r) @ A[i]
        if not np.array_equal(left, right.reshape(r, r, r)):
            return False
    return True


@dataclass(frozen=True, eq=False)
class ObjectVector:
    ring: FusionRing
    mult: np.ndarray

    def __add__(self, other):
        return ObjectVector(self.ring, self.mult + other.mult)

    def __sub__(self, other):
        return ObjectVector(self.ring, self.mult - other.mult)

    def __rmul__(self, k: int):
        return ObjectVector(self.ring, k * self.mult)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return ObjectVector(self.ring, int(other) * self.mult)
        out = np.einsum("i,j,ijk->k", self.mult, other.mult, self.ring.N.astype(np.int64))
        return ObjectVector(self.ring, out)

    def __eq__(self, other):
        return isinstance(other, ObjectVector) and np.array_equal(self.mult, other.mult)

    def __hash__(self):
        return hash(tuple(int(x) for x in self.mult))

    def dual(self) -> ObjectVector:
        out = np.zeros_like(self.mult)
        out[list(self.ring.dual)] = self.mult
        return ObjectVector(self.ring, out)

    def dim(self) -> float:
        d = fp_dims_float(self.ring)
        return float(np.dot(self.mult, d))

    def as_dict(self) -> dict:
        return {self.ring.labels[i]: int(c) for i, c in enumerate(self.mult) if c}

    def to_text(self) -> str:
        parts = []
        for i, c in enumerate(self.mult):
            if c:
                lab = self.ring.labels[i]
                parts.append(lab if c == 1 else f"{c}{lab}")
        return " + ".join(parts) if parts else "0"

    __str__ = to_text


# ----------------------------------------------------------- constructors

def _flabel(n: int) -> str:
    return f"f{n}"


def verlinde_ring(N: int) -> FusionRing:
    """A_N: labels f0..f(N-1) with truncated Clebsch-Gordan rules."""
    if N < 2:
        raise ValueError("A_N needs N >= 2")
    top = N - 1
    T = np.zeros((N, N, N), dtype=np.int16)
    for a in range(N):
        for b in range(N):
            for c in range(abs(a - b), min(a + b, 2 * top - a - b) + 1, 2):
                T[a, b, c] = 1
    q0 = root_of_unity(2 * (N + 1), 1)
    dims = tuple(quantum_integer(n + 1, q0) for n in range(N))
    return FusionRing(tuple(_flabel(n) for n in range(N)), T, tuple(range(N)), 0,
                      tuple(n % 2 for n in range(N)), dims, name=f"A{N}")


def subring(r: FusionRing, keep, name: str = "") -> FusionRing:
    keep = [r.index(k) for k in keep]
    ks = set(keep)
    for i in keep:
        for j in keep:
            if set(np.nonzero(r.N[i, j])[0]) - ks:
                raise ValueError("labels are not closed under fusion")
        if r.dual[i] not in ks:
            raise ValueError("labels are not closed under duality")
    pos = {old: new for new, old in enumerate(keep)}
    N = r.N[np.ix_(keep, keep, keep)].copy()
    return FusionRing(
        tuple(r.labels[i] for i in keep), N, tuple(pos[r.dual[i]] for i in keep),
        pos[r.unit],
        tuple(r.grading[i] for i in keep) if r.grading else None,
        tuple(r.dims[i] for i in keep) if r.dims else None,
        name=name or f"sub({r.name})",
    )


def adjoint_subring(r: FusionRing) -> FusionRing:
    if r.grading is None:
        raise NotGraded(r.name)
    keep = [i for i in range(r.rank) if r.grading[i] == 0]
    return subring(r, keep, name=f"ad({r.name})")


def deligne_product(r1: FusionRing, r2: FusionRing, name: str = "") -> FusionRing:
    a, b = r1.rank, r2.rank
    N = np.einsum("ijk,lmn->iljmkn", r1.N, r2.N).reshape(a * b, a * b, a * b).astype(np.int16)
    labels = tuple(f"{x}⊠{y}" for x in r1.labels for y in r2.labels)
    dual = tuple(r1.dual[i] * b + r2.dual[j] for i in range(a) for j in range(b))
    dims = None
    if r1.dims and r2.dims:
        dims = tuple(x * y for x in r1.dims for y in r2.dims)
    grading = None
    if r1.grading and r2.grading:
        grading = tuple((x + y) % 2 for x in r1.grading for y in r2.grading)
    parts = (r1.parts or (r1,)) + (r2.parts or (r2,))
    return FusionRing(labels, N, dual, r1.unit * b + r2.unit, grading, dims,
                      name=name or f"{r1.name}⊠{r2.name}", parts=parts)


# ------------------------------------------------- de-equivariantization

def de_equivariantize(r: FusionRing, g, twists=None, rep_key=None,
                      split_names=("P", "Q"), name: str = "") -> FusionRing:
    """Quotient by an order-two invertible label ``g``, splitting its fixed point.

    Free orbits {x, gx} become one label (named after the representative
    minimizing ``rep_key``); the unique fixed point splits into two labels.
    Unknown structure constants touching the split pair are found by an
    exhaustive bounded search constrained by the sum rule, associativity,
    duality and dimensions.  If several solution classes survive and
    ``twists`` is given, classes whose balancing S-matrix fails Verlinde's
    formula are discarded.
    """
    gi = r.index(g)
    N = r.N.astype(np.int64)
    if N[gi, gi].sum() != 1 or N[gi, gi, r.unit] != 1 or gi == r.unit:
        raise NotInvolution(r.labels[gi])
    act = [int(np.nonzero(N[gi, y])[0][0]) for y in range(r.rank)]
    fixed = [y for y in range(r.rank) if act[y] == y]
    if len(fixed) != 1:
        raise NotImplementedError(f"expected one fixed point, found {len(fixed)}")
    x = fixed[0]
    key = rep_key or (lambda y: y)
    reps = []
    seen = set()
    for y in range(r.rank):
        if y == x or y in seen:
            continue
        pair = (y, act[y])
        seen.update(pair)
        reps.append(min(pair, key=key))
    reps.sort(key=lambda y: (y != r.unit, key(y)))
    F = len(reps)
    orb = {}
    for i, y in enumerate(reps):
        orb[y] = orb[act[y]] = i
    P, Q = F, F + 1
    R = F + 2

    def image(vec):
        out = np.zeros(R, dtype=np.int64)
        for y in np.nonzero(vec)[0]:
            if y == x:
                out[P] += vec[y]
                out[Q] += vec[y]
            else:
                out[orb[y]] += vec[y]
        return out

    # free x free block is fixed by the lift
    T = np.zeros((R, R, R), dtype=np.int64)
    for i, a in enumerate(reps):
        for j, b in enumerate(reps):
            T[i, j] = image(N[a, b])
    m = np.array([N[a, x, x] for a in reps])
    fp = np.zeros((F, R), dtype=np.int64)
    for i, a in enumerate(reps):
        for c in np.nonzero(N[a, x])[0]:
            if c != x:
                fp[i, orb[c]] = N[a, x, c]
    mxx = int(N[x, x, x])
    dual_free = [orb[r.dual[a]] for a in reps]
    # P-coefficient of [h][c] is N_{h c}^x, in the free-free block
    Pcoef = T[:F, :F, P]

    # pairs (h, a) with their free support, for incremental checks
    support = {}
    for h in range(F):
        for a in range(h, F):
            sup = set(np.nonzero(T[h, a, :F])[0].tolist()) | {h, a}
            support[(h, a)] = sup

    order = sorted(range(F), key=lambda i: (i != 0, _fdim(r, reps[i])))
    pos = {lab: p for p, lab in enumerate(order)}
    pairs_at = {p: [] for p in range(F)}
    for pr, sup in support.items():
        pairs_at[max(pos[s] for s in sup)].append(pr)

    solutions = []
    for dual_swap in (False, True):
        for cube in _split_cubes(mxx, dual_swap):
            # cube[(i, j, k)] = N_{ij}^k for i, j, k in {0: P, 1: Q}
            alpha = [None] * F

            def ok_pair(h, a):
                mult = T[h, a]
                lhs_p = sum(int(mult[c]) * alpha[c] for c in np.nonzero(mult[:F])[0])
                lhs_q = sum(int(mult[c]) * (m[c] - alpha[c]) for c in np.nonzero(mult[:F])[0])
                mx = int(mult[P])
                lhs_p += mx * (cube[(0, 0, 0)] + cube[(1, 0, 0)])
                lhs_q += mx * (cube[(0, 0, 1)] + cube[(1, 0, 1)])
                base = int(np.dot(fp[a, :F], Pcoef[h]))
                ah, aa = alpha[h], alpha[a]
                rhs_p = base + aa * ah + (m[a] - aa) * (m[h] - ah)
                rhs_q = base + aa * (m[h] - ah) + (m[a] - aa) * ah
                return lhs_p == rhs_p and lhs_q == rhs_q

            def rec(p):
                if p == F:
                    solutions.append(_assemble(T, fp, m, list(alpha), cube, dual_swap, dual_free, F))
                    return
                lab = order[p]
                d = dual_free[lab]
                if alpha[lab] is not None:
                    choices = [alpha[lab]]
                elif lab == 0:
                    choices = [1]
                else:
                    choices = range(int(m[lab]) + 1)
                for v in choices:
                    prev_l, prev_d = alpha[lab], alpha[d]
                    if prev_d is not None and prev_d != v:
                        continue
                    alpha[lab] = v
                    alpha[d] = v
                    if all(ok_pair(h, a) for h, a in pairs_at[p]):
                        rec(p + 1)
                    alpha[lab], alpha[d] = prev_l, prev_d

            rec(0)

    labels = [r.labels[a] for a in reps] + list(split_names)
    dims = None
    if r.dims:
        half = Fraction(1, 2)
        dims = tuple(r.dims[a] for a in reps) + (r.dims[x] * half, r.dims[x] * half)
    valid = []
    for T2 in solutions:
        ring = FusionRing(labels, T2.astype(np.int16), _dual_of(T2), 0, None, dims, name=name)
        if ring.check_axioms():
            continue
        if dims and not _dims_homomorphism(ring, rows=(P, Q)):
            continue
        valid.append(ring)
    classes = _split_classes(valid, P, Q)
    if len(classes) > 1 and twists is not None:
        tw = [twists[a] for a in reps] + [twists[x], twists[x]]
        classes = [c for c in classes if _verlinde_consistent(c[0], tw)]
    if not classes:
        raise SplitSolverAmbiguous("no consistent splitting found")
    if len(classes) > 1:
        raise SplitSolverAmbiguous(f"{len(classes)} inequivalent splittings")
    ring = _orient(classes[0], P, Q)
    if r.grading:
        ring.grading = tuple(r.grading[a] for a in reps) + (r.grading[x], r.grading[x])
    ring.lift = tuple(reps) + (x, x)
    return ring


def _fdim(r: FusionRing, i: int) -> float:
    return float(fp_dims_float(r)[i])


def _split_cubes(mxx: int, dual_swap: bool):
    """Symmetric split-block tensors N_{ij}^k, i, j, k in {P, Q}."""
    dual = (1, 0) if dual_swap else (0, 1)
    for vals in itertools.product(range(mxx + 1), repeat=4):
        # totally symmetric cubic form c(i,j,k) = N_{ij}^{k*}
        c = {}
        for i, j, k in itertools.product((0, 1), repeat=3):
            c[(i, j, k)] = vals[i + j + k]
        cube = {(i, j, k): c[(i, j, dual[k])] for i, j, k in itertools.product((0, 1), repeat=3)}
        if sum(cube[(i, j, 0)] for i in (0, 1) for j in (0, 1)) != mxx:
            continue
        if sum(cube[(i, j, 1)] for i in (0, 1) for j in (0, 1)) != mxx:
            continue
        yield cube


def _assemble(T, fp, m, alpha, cube, dual_swap, dual_free, F):
    P, Q = F, F + 1
    T = T.copy()
    for a in range(F):
        T[a, P, :F] = fp[a, :F]
        T[a, Q, :F] = fp[a, :F]
        T[a, P, P], T[a, P, Q] = alpha[a], m[a] - alpha[a]
        T[a, Q, P], T[a, Q, Q] = m[a] - alpha[a], alpha[a]
        T[P, a], T[Q, a] = T[a, P], T[a, Q]
    sd = {P: Q, Q: P} if dual_swap else {P: P, Q: Q}
    for i in (P, Q):
        for j in (P, Q):
            for c in range(F):
                # N_{ij}^c = N_{i* c}^j
                T[i, j, c] = T[c, sd[i], j]
            for k in (P, Q):
                T[i, j, k] = cube[(i - F, j - F, k - F)]
    return T


def _dual_of(T) -> tuple:
    return tuple(int(np.nonzero(T[i, :, 0])[0][0]) if T[i, :, 0].any() else i for i in range(T.shape[0]))


def _dims_homomorphism(ring: FusionRing, rows=None) -> bool:
    d = ring.dims
    rows = range(ring.rank) if rows is None else rows
    for i in rows:
        for j in range(ring.rank):
            rhs = None
            for k in np.nonzero(ring.N[i, j])[0]:
                term = d[k] * int(ring.N[i, j, k])
                rhs = term if rhs is None else rhs + term
            if rhs is None or d[i] * d[j] != rhs:
                return False
    return True


def _swap_perm(r: int, P: int, Q: int):
    p = list(range(r))
    p[P], p[Q] = Q, P
    return p


def _permute(ring: FusionRing, perm) -> np.ndarray:
    p = np.array(perm)
    out = np.empty_like(ring.N)
    out[np.ix_(p, p, p)] = ring.N
    return out


def _split_classes(rings, P, Q):
    classes = {}
    for ring in rings:
        a = ring.N.tobytes()
        b = _permute(ring, _swap_perm(ring.rank, P, Q)).tobytes()
        classes.setdefault(min(a, b), []).append(ring)
    return list(classes.values())


def _orient(rings, P, Q) -> FusionRing:
    """Pick P as the label with the larger N_PP^P; else the smaller tensor."""
    def score(ring):
        return (-int(ring.N[P, P, P]), ring.N.tobytes())
    return min(rings, key=score)


def _verlinde_consistent(ring: FusionRing, twists) -> bool:
    S = balancing_s_matrix(ring, twists)
    if S is None:
        return False
    r = ring.rank
    S0 = S[0]
    if np.any(np.abs(S0) < 1e-9):
        return False
    for i in range(r):
        for j in range(r):
            v = (S[i] * S[j] * np.conj(S) / S0).sum(axis=1)
            if not np.allclose(v, ring.N[i, j], atol=1e-6):
                return False
    return True


def balancing_s_matrix(ring: FusionRing, twists, dims=None):
    """Normalized S from twists by the balancing formula (floating point)."""
    t = np.array([complex(embed_complex(x)) if isinstance(x, CycScalar) else complex(x) for x in twists])
    d = fp_dims_float(ring) if dims is None else np.asarray(dims, dtype=float)
    r = ring.rank
    D = np.sqrt((d ** 2).sum())
    S = np.zeros((r, r), dtype=complex)
    dual = np.array(ring.dual)
    for a in range(r):
        for b in range(r):
            S[a, b] = (ring.N[dual[a], b] * t * d).sum() / (t[a] * t[b])
    S /= D
    if not np.allclose(S @ S.conj().T, np.eye(r), atol=1e-8):
        return None
    return S


# ---------------------------------------------------------- FP dimensions

def fp_dims(r: FusionRing) -> tuple:
    """Exact Frobenius-Perron dimensions as CycScalar values."""
    if r.dims is None:
        raise ValueError("ring carries no exact dimensions; use fp_dims_numeric")
    if not getattr(r, "_dims_checked", False):
        parts = r.parts or (r,)
        for p in parts:
            if p.rank <= 40 and not _dims_homomorphism(p):
                raise ValueError(f"dimension data of {p.name} is not a ring homomorphism")
            if any(real_sign(x) <= 0 for x in p.dims):
                raise ValueError("dimensions must be positive")
        r._dims_checked = True
    return r.dims


def fp_dims_numeric(r: FusionRing) -> np.ndarray:
    """Perron eigenvector of the sum of all fusion matrices, unit entry 1."""
    M = r.N.sum(axis=0).T.astype(float)
    w, v = np.linalg.eig(M)
    k = int(np.argmax(w.real))
    vec = np.abs(v[:, k].real)
    return vec / vec[r.unit]


def fp_dims_float(r: FusionRing) -> np.ndarray:
    cached = getattr(r, "_fdims", None)
    if cached is None:
        if r.dims is not None:
            cached = np.array([embed_complex(x).real for x in r.dims])
        else:
            cached = fp_dims_numeric(r)
        r._fdims = cached
    return cached


# -------------------------------------------------------- automorphisms

def ring_automorphisms(r: FusionRing, invariants=None) -> list:
    """All unit- and duality-preserving label permutations preserving N.

    ``invariants`` optionally attaches an extra hashable key per label
    (e.g. twists); labels are only mapped to labels with the same key.
    """
    n = r.rank
    N = r.N
    d = fp_dims_float(r)
    dual = r.dual
    keys = []
    for i in range(n):
        k = (round(float(d[i]), 6), dual[i] == i, int(N[i, i, i]), int(N[i, i].sum()),
             int(N[i, dual[i]].sum()))
        if invariants is not None:
            k = k + (invariants[i],)
        keys.append(k)
    cands = {}
    for i in range(n):
        cands[i] = [j for j in range(n) if keys[j] == keys[i]]
    # fusion-graph BFS order from the smallest non-unit labels
    order = _bfs_order(r, d)
    perm = [-1] * n
    used = [False] * n
    results = []
    assigned = []

    def consistent(i, c):
        if not assigned:
            return True
        a = np.array(assigned)
        pa = np.array([perm[x] for x in assigned])
        if not np.array_equal(N[i][np.ix_(a, a)], N[c][np.ix_(pa, pa)]):
            return False
        if not np.array_equal(N[i, i, a], N[c, c, pa]):
            return False
        if not np.array_equal(N[:, :, i][np.ix_(a, a)], N[:, :, c][np.ix_(pa, pa)]):
            return False
        return True

    def rec(p):
        if p == len(order):
            results.append(tuple(perm))
            return
        i = order[p]
        if perm[i] >= 0:
            rec(p + 1)
            return
        di = dual[i]
        for c in cands[i]:
            if used[c]:
                continue
            dc = dual[c]
            if di != i and (used[dc] or dc == c):
                continue
            if di == i and dc != c:
                continue
            perm[i] = c
            used[c] = True
            if di != i:
                perm[di] = dc
                used[dc] = True
            assigned.append(i)
            if di != i:
                assigned.append(di)
            if consistent(i, c) and (di == i or consistent(di, dc)):
                rec(p + 1)
            assigned.pop()
            if di != i:
                assigned.pop()
            perm[i] = -1
            used[c] = False
            if di != i:
                perm[di] = -1
                used[dc] = False

    perm[r.unit] = r.unit
    used[r.unit] = True
    assigned.append(r.unit)
    rec(0)
    return sorted(results)


def _bfs_order(r: FusionRing, d) -> list:
    n = r.rank
    start = sorted((i for i in range(n) if i != r.unit), key=lambda i: (d[i] < 1.0 + 1e-9, d[i]))
    order = []
    seen = {r.unit}
    queue = []
    for s in start:
        if s in seen:
            continue
        queue.append(s)
        seen.add(s)
        while queue:
            i = queue.pop(0)
            order.append(i)
            nbrs = sorted(set(np.nonzero(r.N[i, start[0]])[0].tolist()) - seen, key=lambda k: d[k])
            for k in nbrs:
                seen.add(k)
                queue.append(k)
    return order


# ---------------------------------------------------------------- catalog

@dataclass(frozen=True)
class AFactor:
    """One Verlinde factor A_N with its root of unity and braiding kind."""

    N: int
    qh: CycScalar
    kind: str | None

    @property
    def q(self) -> CycScalar:
        return self.qh * self.qh


@dataclass(eq=False)
class CatalogEntry:
    name: str
    ring: FusionRing
    factors: tuple
    lifts: tuple          # per label: tuple of A-labels, one per factor
    split: tuple          # per label: True for halves of a fixed point
    braided: bool = True
    parts: tuple = ()     # sub-entries for Deligne products
    meta: dict = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return self.ring.rank


def default_qh(N: int, variant: str | None = None) -> CycScalar:
    """q^(1/2) with the smallest positive argument for q = e^{iπ/(N+1)} (or e^{2iπ/(N+1)})."""
    if variant == "mod":
        return root_of_unity(2 * (N + 1), 1)
    return root_of_unity(4 * (N + 1), 1)


def _entry_A(N: int, variant=None, kind="standard") -> CatalogEntry:
    if variant and N % 2:
        raise UnknownName(f"A:{N},q={variant}: only even N has deg/mod variants")
    ring = verlinde_ring(N)
    fac = AFactor(N, default_qh(N, variant), kind)
    tag = f",q={variant}" if variant else ""
    ring.name = f"A:{N}{tag}"
    return CatalogEntry(ring.name, ring, (fac,), tuple((n,) for n in range(N)),
                        (False,) * N, meta={"family": "A", "N": N, "variant": variant or ""})


def _entry_adA(N: int, variant=None, kind="standard") -> CatalogEntry:
    full = _entry_A(N, variant, kind)
    keep = [n for n in range(N) if n % 2 == 0]
    ring = subring(full.ring, keep, name=f"adA:{N}")
    ring.grading = None
    return CatalogEntry(ring.name, ring, full.factors, tuple((n,) for n in keep),
                        (False,) * len(keep), meta={"family": "adA", "N": N})


def _d_ring(twoN: int) -> tuple:
    N = twoN // 2
    M = 4 * N - 3
    base = verlinde_ring(M)
    top = M - 1

    def key(y):
        return y
    ring = de_equivariantize(base, top, rep_key=key, name=f"D:{twoN}")
    return ring, M


def _entry_D(twoN: int) -> CatalogEntry:
    if twoN % 2 or twoN < 4:
        raise UnknownName(f"D:{twoN}")
    ring, M = _d_ring(twoN)
    fac = AFactor(M, default_qh(M), None)
    lifts = tuple((int(y),) for y in ring.lift)
    split = tuple([False] * (ring.rank - 2) + [True, True])
    return CatalogEntry(ring.name, ring, (fac,), lifts, split, braided=False,
                        meta={"family": "D", "N": twoN})


def _entry_adD(twoN: int, kind="standard") -> CatalogEntry:
    full = _entry_D(twoN)
    keep = [i for i in range(full.rank) if full.ring.grading[i] == 0]
    ring = subring(full.ring, keep, name=f"adD:{twoN}")
    ring.grading = None
    fac = AFactor(full.factors[0].N, full.factors[0].qh, kind)
    return CatalogEntry(ring.name, ring, (fac,), tuple(full.lifts[i] for i in keep),
                        tuple(full.split[i] for i in keep), meta={"family": "adD", "N": twoN})


def _product_entry(entries, name) -> CatalogEntry:
    ring = entries[0].ring
    factors = entries[0].factors
    lifts = entries[0].lifts
    split = entries[0].split
    for e in entries[1:]:
        ring = deligne_product(ring, e.ring)
        factors = factors + e.factors
        lifts = tuple(a + b for a in lifts for b in e.lifts)
        split = tuple(x or y for x in split for y in e.split)
    ring.name = name
    parts = []
    for e in entries:
        parts.extend(e.parts or (e,))
    return CatalogEntry(name, ring, factors, lifts, split,
                        braided=all(e.braided for e in entries), parts=tuple(parts),
                        meta={"family": "product"})


def _bop(entry: CatalogEntry) -> CatalogEntry:
    facs = tuple(AFactor(f.N, f.qh, {"standard": "bop", "bop": "standard"}.get(f.kind, f.kind))
                 for f in entry.factors)
    ring = entry.ring
    return CatalogEntry(entry.name + "^bop", ring, facs, entry.lifts, entry.split,
                        entry.braided, meta=dict(entry.meta, bop=True))


def _twist_of(factors, lift) -> CycScalar:
    t = CycScalar.from_int(1)
    for f, n in zip(factors, lift):
        t = t * _factor_twist(f.N, f.qh.key(), f.kind, n)
    return t


@lru_cache(maxsize=None)
def _factor_twist(N, qh_key, kind, n):
    from .tl import curl_value
    qh = CycScalar(qh_key[0], qh_key[1], qh_key[2], _raw=True)
    return curl_value(n, kind, qh)


def _centre_deeq(name: str, left: CatalogEntry, right: CatalogEntry, g: tuple, rep_key) -> CatalogEntry:
    """Centralizer of g in left⊠right^bop, de-equivariantized by g."""
    prod = _product_entry([left, _bop(right)], name)
    twists = [_twist_of(prod.factors, lf) for lf in prod.lifts]
    # centralizer of g: labels with trivial monodromy, i.e. even total degree
    keep = [i for i, lf in enumerate(prod.lifts) if sum(lf) % 2 == 0]
    cen = subring(prod.ring, keep, name=f"cen({name})")
    cen.parts = ()
    ctw = [twists[i] for i in keep]
    clifts = [prod.lifts[i] for i in keep]
    gi = clifts.index(g)
    ring = de_equivariantize(cen, gi, twists=ctw, rep_key=lambda y: rep_key(clifts[y]), name=name)
    lifts = tuple(clifts[y] for y in ring.lift)
    split = tuple([False] * (ring.rank - 2) + [True, True])
    return CatalogEntry(name, ring, prod.factors, lifts, split, meta={"family": "deeq"})


def _entry_Z_adA_odd(M: int) -> CatalogEntry:
    N = (M - 1) // 2
    a = _entry_A(M)
    return _centre_deeq(f"Z(adA:{M})", a, a, (2 * N, 2 * N),
                        lambda lf: (sum(lf), 0 if lf[1] < N else 1, lf[1]))


def _entry_Z_adE6() -> CatalogEntry:
    # The splitting of f5⊠f1 depends on the braiding.  With q^(1/2) = zeta_16^7
    # on A_3 the twists are those of the E6 centre and force P* = Q; the
    # default root would give a self-dual splitting belonging to other twists.
    a3 = _entry_A(3)
    a3 = CatalogEntry(a3.name, a3.ring, (AFactor(3, root_of_unity(16, 7), "standard"),),
                      a3.lifts, a3.split, meta=dict(a3.meta))
    return _centre_deeq("Z(adE6)", _entry_A(11), a3, (10, 2),
                        lambda lf: (lf[1], lf[0]))


_ATOM = re.compile(r"^(A|adA|D|adD):(\d+)(?:,q=(deg|mod))?(\^bop)?$")


def _normalize_name(name: str) -> str:
    s = name.replace(" ", "")
    s = re.sub(r"ad\((\w+?)\)", r"ad\1", s)
    s = re.sub(r"\b(ad)?([AD])(\d+)", lambda m: f"{m.group(1) or ''}{m.group(2)}:{m.group(3)}", s)
    s = s.replace("x", "⊠") if "⊠" not in s and re.search(r"\)x|\dx", s) else s
    return s


_CENTRES = {
    "Z(E6)": "A:11⊠A:3^bop",
    "Z(E8)": "A:29⊠adA:4^bop",
    "Z(adE8)": "adD:16⊠adA:4^bop",
}


def catalog_names() -> list:
    names = []
    for N in range(3, 18):
        if N % 2:
            names += [f"A:{N}", f"adA:{N}", f"Z(A:{N})", f"Z(adA:{N})"]
        else:
            names += [f"A:{N},q=deg", f"A:{N},q=mod", f"adA:{N}",
                      f"Z(A:{N},q=deg)", f"Z(A:{N},q=mod)", f"Z(adA:{N})"]
    for n in range(2, 9):
        names += [f"D:{2 * n}", f"adD:{2 * n}", f"Z(D:{2 * n})", f"Z(adD:{2 * n})"]
    names += ["Z(E6)", "Z(adE6)", "Z(E8)", "Z(adE8)"]
    return names


_CACHE: dict = {}


def catalog(name: str) -> CatalogEntry:
    """Build a named ring together with its per-factor braiding parameters."""
    key = _normalize_name(name)
    if key not in _CACHE:
        _CACHE[key] = _build(key)
        _CACHE[key].name = key
    return _CACHE[key]


def _build(name: str) -> CatalogEntry:
    if "⊠" in name and not name.startswith("Z("):
        return _product_entry([catalog(p) for p in name.split("⊠")], name)
    if name in _CENTRES:
        return _rename(catalog(_CENTRES[name]), name)
    if name == "Z(adE6)":
        return _entry_Z_adE6()
    m = re.match(r"^Z\((.*)\)$", name)
    if m:
        return _build_centre(m.group(1), name)
    m = _ATOM.match(name)
    if not m:
        raise UnknownName(name)
    fam, n, variant, bop = m.group(1), int(m.group(2)), m.group(3), m.group(4)
    if bop:
        return _bop(catalog(name[: -len("^bop")]))
    if fam == "A":
        return _entry_A(n, variant)
    if fam == "adA":
        if variant:
            raise UnknownName(name)
        return _entry_adA(n, "deg" if n % 2 == 0 else None)
    if fam == "D":
        return _entry_D(n)
    return _entry_adD(n)


def _build_centre(inner: str, name: str) -> CatalogEntry:
    m = _ATOM.match(inner)
    if not m or m.group(4):
        raise UnknownName(name)
    fam, n, variant = m.group(1), int(m.group(2)), m.group(3)
    if fam == "A":
        if n % 2 and variant:
            raise UnknownName(name)
        if n % 2 or variant == "mod":
            base = f"A:{n}" + (",q=mod" if variant else "")
            return _rename(catalog(f"{base}⊠{base}^bop"), name)
        return _rename(catalog(f"adA:{n}⊠adA:{n}^bop⊠Z(adA:3)"), name)
    if fam == "adA":
        if n % 2:
            return _entry_Z_adA_odd(n)
        return _rename(catalog(f"adA:{n}⊠adA:{n}^bop"), name)
    if fam == "D":
        return _rename(catalog(f"A:{2 * n - 3}⊠adD:{n}^bop"), name)
    return _rename(catalog(f"adD:{n}⊠adD:{n}^bop"), name)


def _rename(e: CatalogEntry, name: str) -> CatalogEntry:
    import copy
    ring = copy.copy(e.ring)
    ring.name = name
    return CatalogEntry(name, ring, e.factors, e.lifts, e.split, e.braided, e.parts, dict(e.meta))
