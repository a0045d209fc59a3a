"""NIM-reps, algebra candidates, induction/restriction through the centre and
Brauer-Picard tables."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product

import numpy as np

from .fusion import FusionRing, ObjectVector, catalog, fp_dims_float, ring_automorphisms, verlinde_ring
from .modular import braided_automorphisms, calibrated_factors, group_fingerprint, modular_data, name_group

__all__ = [
    "NimRep",
    "AlgebraCandidate",
    "BPCell",
    "BPTable",
    "NotSinglyGenerated",
    "NotModularEntry",
    "DecompositionAmbiguous",
    "nimrep_search",
    "algebra_candidates",
    "candidates_by_rank",
    "induce_unit",
    "restrict",
    "restriction_matrix",
    "apply_auto",
    "decompose",
    "bp_table",
    "parse_auto",
    "sum_x_xdual",
    "auto_name",
    "product_grid",
    "module_classes",
    "require_unique",
]


class NotSinglyGenerated(ValueError):
    pass


class NotModularEntry(ValueError):
    pass


class DecompositionAmbiguous(RuntimeError):
    pass


# ---------------------------------------------------------------- NIM-reps

@dataclass(frozen=True, eq=False)
class NimRep:
    ring: FusionRing
    rank: int
    matrices: tuple  # one r×r integer array per label, in ring order

    def M(self, label) -> np.ndarray:
        return self.matrices[self.ring.index(label)]

    def key(self) -> tuple:
        return tuple(tuple(int(x) for x in m.flat) for m in self.matrices)

    def dims(self, generator=None) -> np.ndarray:
        g = self.ring.index(generator) if generator is not None else _default_generator(self.ring)
        w, v = np.linalg.eigh(self.matrices[g].astype(float))
        x = np.abs(v[:, np.argmax(w)])
        return x / x.min()


def _default_generator(ring: FusionRing) -> int:
    """The self-dual non-unit label of smallest dimension generating the most labels."""
    dims = fp_dims_float(ring)
    best = None
    for i in range(1, ring.rank):
        if ring.dual[i] != i:
            continue
        span = _poly_span(ring, i)
        key = (-len(span), dims[i], i)
        if best is None or key < best[0]:
            best = (key, i)
    if best is None:
        raise NotSinglyGenerated(f"{ring.name}: no self-dual generator")
    return best[1]


def _vec(ring: FusionRing, mult) -> ObjectVector:
    return ObjectVector(ring, np.array(mult, dtype=np.int64))


def _frac_solve(A: list, B: list, general: bool = False):
    """Solve A X = B over Q.

    Returns (X, nullity), X being the solution with free variables at zero,
    or (None, nullity) if inconsistent.  With ``general`` the nullspace basis
    (free column, vector) pairs are returned as a third item.
    """
    rows, cols = len(A), len(A[0])
    nb = len(B[0]) if B else 0
    M = [[Fraction(x) for x in A[i]] + [Fraction(x) for x in B[i]] for i in range(rows)]
    piv_cols = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        piv_cols.append(c)
        r += 1
        if r == rows:
            break
    nullity = cols - r
    if any(M[i][cols + k] != 0 for i in range(r, rows) for k in range(nb)):
        return (None, nullity, []) if general else (None, nullity)
    X = [[Fraction(0)] * nb for _ in range(cols)]
    for i, c in enumerate(piv_cols):
        X[c] = M[i][cols:]
    if not general:
        return X, nullity
    free = [c for c in range(cols) if c not in piv_cols]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for i, c in enumerate(piv_cols):
            v[c] = -M[i][fc]
        basis.append((fc, v))
    return X, nullity, basis


@lru_cache(maxsize=None)
def _poly_data(ring: FusionRing, g: int):
    """Labels expressible as polynomials in g, with their coefficients."""
    r = ring.rank
    Ng = ring.N[g].T.astype(object)  # action of g on the regular representation
    powers = [np.identity(r, dtype=object)]
    for _ in range(r - 1):
        powers.append(Ng.dot(powers[-1]))
    A = [[int(powers[t][i, 0]) for t in range(r)] for i in range(r)]
    out = {}
    for k in range(r):
        target = [[1 if i == k else 0] for i in range(r)]
        X, _ = _frac_solve(A, target)
        if X is None:
            continue
        coeffs = [x[0] for x in X]
        # the polynomial must reproduce the whole fusion matrix, not just one column
        acc = sum((c * powers[t] for t, c in enumerate(coeffs) if c), np.zeros((r, r), dtype=object))
        if all(acc[i, j] == ring.N[k].T[i, j] for i in range(r) for j in range(r)):
            out[k] = tuple(coeffs)
    return out


def _poly_span(ring, g):
    return _poly_data(ring, g)


def nimrep_search(ring: FusionRing, rank: int, generator=None) -> list:
    """All NIM-reps of the given rank up to relabeling of module indices."""
    if not ring.is_commutative():
        raise NotSinglyGenerated(f"{ring.name} is not commutative")
    g = _default_generator(ring) if generator is None else ring.index(generator)
    if ring.dual[g] != g:
        raise NotSinglyGenerated("generator must be self-dual")
    d = float(fp_dims_float(ring)[g])
    found = {}
    for Mg in _generator_matrices(rank, d):
        for nr in _complete(ring, g, Mg):
            canon = _canonical(nr)
            found.setdefault(canon.key(), canon)
    return sorted(found.values(), key=lambda n: [m.tolist() for m in n.matrices])


def _generator_matrices(r: int, d: float):
    """Connected symmetric nonnegative integer matrices with Perron value d.

    Rows are filled in an order where every module index after the first is
    adjacent to an earlier one with non-decreasing first neighbour, which
    keeps at least one labelling of each graph.
    """
    eps = 1e-9
    bound = int(np.floor(d + eps))
    d2 = d * d + eps
    M = np.zeros((r, r), dtype=np.int64)
    norms = [0] * r

    def lam(k):
        if k == 0:
            return 0.0
        return float(np.linalg.eigvalsh(M[:k, :k].astype(float))[-1])

    def fill(i, j, parent_floor):
        if j > i:
            if i > 0:
                par = next((c for c in range(i) if M[i, c]), None)
                if par is None or par < parent_floor:
                    return
            else:
                par = 0
            if lam(i + 1) > d + eps:
                return
            if i + 1 == r:
                if abs(lam(r) - d) < 1e-7:
                    yield M.copy()
                return
            yield from fill(i + 1, 0, par if i > 0 else 0)
            return
        for v in range(bound + 1):
            sq = v * v
            if i == j:
                if norms[i] + sq > d2:
                    break
            elif norms[i] + sq > d2 or norms[j] + sq > d2:
                break
            M[i, j] = M[j, i] = v
            norms[i] += sq
            if i != j:
                norms[j] += sq
            yield from fill(i, j + 1, parent_floor)
            norms[i] -= sq
            if i != j:
                norms[j] -= sq
        M[i, j] = M[j, i] = 0

    yield from fill(0, 0, 0)


def _complete(ring: FusionRing, g: int, Mg: np.ndarray) -> list:
    """Every NIM-rep with generator matrix M_g (usually zero or one)."""
    r = Mg.shape[0]
    polys = _poly_data(ring, g)
    powers = [np.identity(r, dtype=object)]
    G = Mg.astype(object)
    for _ in range(ring.rank - 1):
        powers.append(G.dot(powers[-1]))
    mats: dict = {}
    for k, coeffs in polys.items():
        acc = sum((c * powers[t] for t, c in enumerate(coeffs) if c), np.zeros((r, r), dtype=object))
        if any(x.denominator != 1 if isinstance(x, Fraction) else False for x in acc.flat):
            return []
        acc = np.array([[int(x) for x in row] for row in acc], dtype=np.int64)
        if (acc < 0).any():
            return []
        mats[k] = acc
    unknown = [k for k in range(ring.rank) if k not in mats]
    completions = _solve_unknown(ring, mats, unknown, r) if unknown else [{}]
    out = []
    for extra in completions:
        full = tuple({**mats, **extra}[k] for k in range(ring.rank))
        if _valid(ring, full):
            out.append(NimRep(ring, r, full))
    return out


def _solve_unknown(ring, mats, unknown, r):
    """Matrices of labels outside the span of g, from M_k M_u = Σ N_{ku}^w M_w.

    The system is the same for every module column; when it leaves freedom,
    free entries run over 0..floor(FPdim) (an entry never exceeds the norm).
    Yields every nonnegative integer completion.
    """
    U = len(unknown)
    pos = {u: i for i, u in enumerate(unknown)}
    A, B = [], []
    for k, Mk in mats.items():
        for u in unknown:
            prod = ring.product(k, u)
            for row in range(r):
                coef = [0] * (U * r)
                for s in range(r):
                    if Mk[row, s]:
                        coef[pos[u] * r + s] += int(Mk[row, s])
                rhs_known = np.zeros(r, dtype=np.int64)
                for w, n in prod.items():
                    if w in pos:
                        coef[pos[w] * r + row] -= n
                    else:
                        rhs_known = rhs_known + n * mats[w][row, :]
                A.append(coef)
                B.append([int(x) for x in rhs_known])
    X, nullity, basis = _frac_solve(A, B, general=True)
    if X is None:
        return
    if nullity > 8:
        raise NotSinglyGenerated(f"{ring.name}: labels {unknown} not determined by the generator")
    dims = fp_dims_float(ring)
    ranges = [range(int(np.floor(dims[unknown[fc // r]] + 1e-9)) + 1) for fc, _ in basis]
    columns = []
    for c in range(r):
        opts = []
        for free in product(*ranges):
            x = [X[i][c] + sum((t * v[i] for t, (_, v) in zip(free, basis)), Fraction(0))
                 for i in range(U * r)]
            if all(y.denominator == 1 and y >= 0 for y in x):
                opts.append([int(y) for y in x])
        if not opts:
            return
        columns.append(opts)
    for pick in product(*columns):
        out = {}
        for u in unknown:
            blk = np.zeros((r, r), dtype=np.int64)
            for c, col in enumerate(pick):
                blk[:, c] = col[pos[u] * r:(pos[u] + 1) * r]
            out[u] = blk
        yield out


def _valid(ring: FusionRing, mats: tuple) -> bool:
    r = mats[0].shape[0]
    if not (mats[0] == np.identity(r, dtype=np.int64)).all():
        return False
    for i in range(ring.rank):
        if not (mats[ring.dual[i]] == mats[i].T).all():
            return False
    for i in range(ring.rank):
        for j in range(i, ring.rank):
            lhs = mats[i] @ mats[j]
            rhs = sum((n * mats[k] for k, n in ring.product(i, j).items()), np.zeros((r, r), dtype=np.int64))
            if not (lhs == rhs).all():
                return False
    return True


def _canonical(nr: NimRep) -> NimRep:
    """Relabel module indices: sort by dimension, then minimize the matrix tuple."""
    r = nr.rank
    dims = np.round(nr.dims(), 9)
    order = sorted(range(r), key=lambda i: dims[i])
    blocks = []
    for i in order:
        if blocks and abs(dims[blocks[-1][0]] - dims[i]) < 1e-7:
            blocks[-1].append(i)
        else:
            blocks.append([i])
    best = None
    for choice in product(*(permutations(b) for b in blocks)):
        perm = [i for blk in choice for i in blk]
        mats = tuple(m[np.ix_(perm, perm)] for m in nr.matrices)
        key = tuple(tuple(m.flatten()) for m in mats)
        if best is None or key < best[0]:
            best = (key, mats)
    return NimRep(nr.ring, r, best[1])


# ------------------------------------------------------------- candidates

@dataclass(frozen=True)
class AlgebraCandidate:
    multiplicities: ObjectVector
    rank: int
    base_index: int
    nimrep: NimRep | None = field(default=None, compare=False, hash=False)

    def label(self) -> str:
        return self.multiplicities.to_text()


def algebra_candidates(nr: NimRep) -> list:
    out = {}
    ring = nr.ring
    for j in range(nr.rank):
        mult = tuple(int(m[j, j]) for m in nr.matrices)
        if mult[0] != 1:
            continue
        if any(mult[i] != mult[ring.dual[i]] for i in range(ring.rank)):
            continue
        out.setdefault(mult, AlgebraCandidate(_vec(ring, mult), nr.rank, j, nr))
    return list(out.values())


def candidates_by_rank(ring: FusionRing, ranks) -> dict:
    """rank -> deduplicated candidates, plus the NIM-reps they came from."""
    out = {}
    for k in ranks:
        seen = {}
        for nr in nimrep_search(ring, k):
            for c in algebra_candidates(nr):
                seen.setdefault(c.multiplicities, c)
        out[k] = list(seen.values())
    return out


def module_classes(ring: FusionRing, ranks) -> list:
    """Each NIM-rep as (rank, multiset of diagonal algebras)."""
    out = []
    for k in ranks:
        for nr in nimrep_search(ring, k):
            diag = Counter(tuple(int(m[j, j]) for m in nr.matrices) for j in range(nr.rank))
            out.append((k, diag))
    return out


# --------------------------------------------------- induction/restriction

def sum_x_xdual(ring: FusionRing) -> ObjectVector:
    """Σ_X X ⊗ X*, computed inside the ring."""
    tot = np.zeros(ring.rank, dtype=np.int64)
    for x in range(ring.rank):
        for k, n in ring.product(x, ring.dual[x]).items():
            tot[k] += n
    return _vec(ring, tuple(int(v) for v in tot))


def _split_label(label: str):
    if "⊠" in label:
        a, b = label.split("⊠")
        return a, b
    return None


@lru_cache(maxsize=None)
def restriction_matrix(base_name: str) -> tuple:
    """R[Y] for every simple Y of the centre, as tuples over the base labels.

    Product labels X⊠Y restrict to X ⊗ Y*; labels of an A factor not in the
    base ring are multiplied in the full A_N ring.  Split pairs are resolved
    by requiring restriction to be a ring homomorphism; the half containing
    the unit is P.
    """
    base = catalog(base_name)
    ring = base.ring
    centre = catalog(f"Z({base.name})")
    zr = centre.ring
    full = verlinde_ring(base.factors[0].N) if base.factors else None
    rows: list = [None] * zr.rank
    pending = []
    for y, lab in enumerate(zr.labels):
        parts = _split_label(lab)
        if parts is None:
            pending.append(y)
            continue
        rows[y] = _restrict_pair(ring, full, *parts)
    if pending:
        rows = _resolve_splits(ring, centre, full, rows, pending)
    return tuple(tuple(int(v) for v in r) for r in rows)


def _restrict_pair(ring, full, a, b):
    vec = np.zeros(ring.rank, dtype=np.int64)
    if a in ring.labels and b in ring.labels:
        ia, ib = ring.index(a), ring.index(b)
        for k, n in ring.product(ia, ring.dual[ib]).items():
            vec[k] += n
        return vec
    ia, ib = full.index(a), full.index(b)
    for k, n in full.product(ia, full.dual[ib]).items():
        lab = full.labels[k]
        if lab not in ring.labels:
            raise NotModularEntry(f"restriction leaves the base ring: {a}⊠{b}")
        vec[ring.index(lab)] += n
    return vec


def _resolve_splits(ring, centre, full, rows, pending):
    """Split both halves of X⊠X consistently with the fusion rules of the centre."""
    zr = centre.ring
    groups: dict = {}
    for y in pending:
        groups.setdefault(centre.lifts[y], []).append(y)
    options = []
    for lift, ys in groups.items():
        if len(ys) != 2:
            raise NotModularEntry("unexpected split pattern")
        a, b = (f"f{n}" for n in lift)
        total = _restrict_pair(ring, full, a, b)
        opts = []
        for half in product(*(range(int(t) + 1) for t in total)):
            h = np.array(half, dtype=np.int64)
            opts.append((ys[0], h, ys[1], total - h))
        options.append(opts)
    dims = fp_dims_float(ring)
    zd = fp_dims_float(zr)
    good = []
    for combo in product(*options):
        trial = list(rows)
        for y0, h0, y1, h1 in combo:
            trial[y0], trial[y1] = h0, h1
        if any(abs(float(np.dot(trial[y], dims)) - zd[y]) > 1e-6 for y in pending):
            continue
        if _is_hom(ring, zr, trial):
            good.append(trial)
    if not good:
        raise NotModularEntry("no consistent restriction of split labels")
    # swapping the halves of each pair gives the same result up to relabelling;
    # the label P is the half whose restriction contains the unit
    sols = []
    for trial in good:
        ok = True
        for lift, ys in groups.items():
            p_idx = [y for y in ys if zr.labels[y] == "P"]
            if p_idx and trial[p_idx[0]][0] == 0:
                ok = False
        if ok:
            sols.append(trial)
    if len({tuple(tuple(map(int, r)) for r in s) for s in sols}) != 1:
        raise NotModularEntry("restriction of split labels is ambiguous")
    return sols[0]


def _is_hom(ring, zr, rows) -> bool:
    R = np.array(rows, dtype=np.int64)
    for x in range(zr.rank):
        for y in range(x, zr.rank):
            lhs = _mult(ring, R[x], R[y])
            rhs = np.zeros(ring.rank, dtype=np.int64)
            for k, n in zr.product(x, y).items():
                rhs += n * R[k]
            if not (lhs == rhs).all():
                return False
    return True


def _mult(ring, a, b):
    out = np.zeros(ring.rank, dtype=np.int64)
    for i in np.nonzero(a)[0]:
        for j in np.nonzero(b)[0]:
            for k, n in ring.product(int(i), int(j)).items():
                out[k] += a[i] * b[j] * n
    return out


def induce_unit(base_name: str) -> ObjectVector:
    """I(1) in the centre: Σ_Y dim Hom(1, R(Y)) · Y."""
    base = catalog(base_name)
    centre = catalog(f"Z({base.name})")
    R = restriction_matrix(base.name)
    return _vec(centre.ring, tuple(row[0] for row in R))


def restrict(base_name: str, v: ObjectVector) -> ObjectVector:
    base = catalog(base_name)
    R = np.array(restriction_matrix(base.name), dtype=np.int64)
    mult = np.array([v.mult[i] for i in range(R.shape[0])], dtype=np.int64)
    return _vec(base.ring, tuple(int(x) for x in mult @ R))


def apply_auto(perm, v: ObjectVector) -> ObjectVector:
    """Push v forward along the permutation i -> perm[i]."""
    out = [0] * len(perm)
    for i, n in enumerate(v.mult):
        out[perm[i]] += n
    return _vec(v.ring, tuple(out))


def _inverse(perm):
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return tuple(inv)


# ------------------------------------------------------------- decompose

def decompose(target: ObjectVector, candidates) -> list:
    """Every multiset of same-rank candidates summing to target."""
    t = np.array(target.mult, dtype=np.int64)
    if not t.any():
        return [()]
    ring = target.ring
    by_rank: dict = {}
    for c in candidates:
        by_rank.setdefault(c.rank, set()).add(tuple(int(x) for x in c.multiplicities.mult))
    out = set()
    for vecs in by_rank.values():
        vecs = sorted(vecs)
        arr = [np.array(v, dtype=np.int64) for v in vecs]
        for combo in _lattice(t, arr, 0):
            out.add(tuple(sorted(vecs[i] for i, n in combo.items() for _ in range(n))))
    return [tuple(_vec(ring, v) for v in ms) for ms in sorted(out)]


def _lattice(rem, arr, i, acc=None):
    acc = {} if acc is None else acc
    if not rem.any():
        yield dict(acc)
        return
    if i == len(arr) or (rem < 0).any():
        return
    v = arr[i]
    k = 0
    while True:
        left = rem - k * v
        if (left < 0).any():
            break
        if k:
            acc[i] = k
        yield from _lattice(left, arr, i + 1, acc)
        acc.pop(i, None)
        k += 1
        if not v.any():
            break


# ------------------------------------------------------------- BP tables

@dataclass
class BPCell:
    auto: tuple
    vector: ObjectVector
    decompositions: list
    accepted: list
    underlying: ObjectVector | None
    name: str = ""


@dataclass
class BPTable:
    base: str
    out_order: int
    cells: list
    fingerprint: dict
    group: str | None
    rejected: dict
    structures: dict
    layout: dict = field(default_factory=dict)

    def cell(self, auto) -> BPCell:
        for c in self.cells:
            if c.auto == tuple(auto):
                return c
        raise KeyError(auto)


def parse_auto(ring: FusionRing, text: str) -> tuple:
    """'id', 'a<->b', 'a->b->c' or ';'-separated cycles, as a permutation."""
    perm = list(range(ring.rank))
    text = text.strip()
    if text in ("id", "e", ""):
        return tuple(perm)
    for cyc in text.split(";"):
        cyc = cyc.strip()
        if "<->" in cyc:
            a, b = (ring.index(s.strip()) for s in cyc.split("<->"))
            perm[a], perm[b] = b, a
            continue
        names = [s.strip() for s in cyc.split("->")]
        if names[0] == names[-1]:
            names = names[:-1]
        idx = [ring.index(s) for s in names]
        for x, y in zip(idx, idx[1:] + idx[:1]):
            perm[x] = y
    return tuple(perm)


def _compose(p, q):
    """p after q."""
    return tuple(p[q[i]] for i in range(len(q)))


def _unique_structure(ring: FusionRing, vec) -> bool:
    """1 ⊕ X with Hom(X⊗X, X) one-dimensional carries a single algebra structure."""
    nz = [i for i, n in enumerate(vec) if n]
    if nz == [0]:
        return True
    if len(nz) != 2 or vec[0] != 1 or vec[nz[1]] != 1:
        return False
    x = nz[1]
    return ring.product(x, x).get(x, 0) == 1


def _class_algebras(classes, ring, cand):
    """Minimal-dimension algebra of every module class containing cand."""
    dims = fp_dims_float(ring)
    out = set()
    for _, diag in classes:
        if cand in diag:
            out.add(min(diag, key=lambda v: (float(np.dot(v, dims)), v)))
    return out


def _filter(ring, classes, groups, out_order):
    """Counting filter over choices of decomposition for each distinct cell vector.

    groups: list of (cell count, list of decompositions).  Returns the set of
    surviving choice tuples.
    """
    survivors = []
    for choice in product(*(range(len(opts)) for _, opts in groups)):
        demands = []
        for (count, opts), ch in zip(groups, choice):
            dec = opts[ch]
            poss = None
            for c in set(dec):
                s = _class_algebras(classes, ring, c)
                poss = s if poss is None else poss & s
            if not poss:
                break
            demands.append((count, sorted(poss)))
        else:
            if _feasible(ring, demands, out_order):
                survivors.append(choice)
    return survivors


def _feasible(ring, demands, out_order) -> bool:
    def rec(i, tally):
        if i == len(demands):
            for alg, n in tally.items():
                if n % out_order:
                    return False
                if _unique_structure(ring, alg) and n != out_order:
                    return False
            return True
        count, poss = demands[i]
        for split in _compositions(count, len(poss)):
            t = Counter(tally)
            for a, k in zip(poss, split):
                if k:
                    t[a] += k
            if rec(i + 1, t):
                return True
        return False

    return rec(0, Counter())


def _compositions(n, k):
    if k == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _compositions(n - first, k - 1):
            yield (first,) + rest


def bp_table(base_name: str, ranks=None, fixtures=None) -> BPTable:
    """Restrict F^{-1}(I(1)) for every braided autoequivalence F of the centre."""
    base = catalog(base_name)
    ring = base.ring
    centre = catalog(f"Z({base.name})")
    factors = calibrated_factors(centre.name, fixtures)
    autos = braided_automorphisms(modular_data(centre, factors))
    unit = induce_unit(base.name)
    ranks = tuple(range(1, ring.rank + 1)) if ranks is None else tuple(ranks)
    cands = [c for cs in candidates_by_rank(ring, ranks).values() for c in cs]
    classes = module_classes(ring, ranks)
    out_order = len(ring_automorphisms(ring))
    raw = []
    for p in autos:
        v = restrict(base.name, apply_auto(_inverse(p), unit))
        raw.append((tuple(p), v))
    distinct = {}
    for _, v in raw:
        key = tuple(int(x) for x in v.mult)
        distinct.setdefault(key, [0, None, v])
        distinct[key][0] += 1
    keys = sorted(distinct)
    for k in keys:
        distinct[k][1] = [tuple(tuple(int(y) for y in x.mult) for x in d)
                          for d in decompose(distinct[k][2], cands)]
    groups = [(distinct[k][0], distinct[k][1]) for k in keys]
    survivors = _filter(ring, classes, groups, out_order)
    accepted = {k: sorted({s[i] for s in survivors}) for i, k in enumerate(keys)}
    rejected = {}
    for k in keys:
        rej = [d for i, d in enumerate(distinct[k][1]) if i not in accepted[k]]
        if rej:
            rejected[k] = rej
    cells = []
    dims = fp_dims_float(ring)
    tally = Counter()
    for p, v in raw:
        key = tuple(int(x) for x in v.mult)
        opts = distinct[key][1]
        acc = [opts[i] for i in accepted[key]]
        under = None
        if len(acc) == 1:
            under = min(acc[0], key=lambda x: (float(np.dot(x, dims)), x))
            tally[under] += 1
        cells.append(BPCell(p, v, [tuple(_vec(ring, x) for x in d) for d in opts],
                            [tuple(_vec(ring, x) for x in d) for d in acc],
                            _vec(ring, under) if under else None))
    structures = {_vec(ring, a).to_text(): n // out_order for a, n in tally.items()}
    fp = group_fingerprint([c.auto for c in cells])
    return BPTable(base.name, out_order, cells, fp, name_group(fp),
                   {_vec(ring, k).to_text(): [tuple(_vec(ring, x) for x in d) for d in r]
                    for k, r in rejected.items()},
                   structures)


def require_unique(table: BPTable) -> None:
    for c in table.cells:
        if len(c.accepted) != 1:
            raise DecompositionAmbiguous(f"{c.vector.to_text()}: {len(c.accepted)} decompositions survive")


def auto_name(ring: FusionRing, perm) -> str:
    """Cycle notation with labels: 'id', 'P<->Q', 'f2->P->Q'."""
    seen = set()
    parts = []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = perm[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = perm[j]
        labs = [ring.labels[k] for k in cyc]
        parts.append(f"{labs[0]}<->{labs[1]}" if len(cyc) == 2 else "->".join(labs))
    return "; ".join(parts) if parts else "id"


def product_grid(table: BPTable, factor_autos=None):
    """For Z(C) = C ⊠ C^bop: rows indexed by autos of the bop factor, columns
    by autos of the left factor.  Returns (autos, grid of BPCell)."""
    base = catalog(table.base)
    ring = base.ring
    centre = catalog(f"Z({base.name})")
    zr = centre.ring
    if any(_split_label(lab) is None for lab in zr.labels) or len(centre.parts) != 2:
        raise NotModularEntry(f"Z({base.name}) is not a product of factors")
    autos = ring_automorphisms(ring) if factor_autos is None else factor_autos
    autos = sorted((tuple(a) for a in autos), key=lambda p: (auto_name(ring, p) != "id",))

    def lift(left, right):
        perm = []
        for lab in zr.labels:
            a, b = _split_label(lab)
            perm.append(zr.index(f"{ring.labels[left[ring.index(a)]]}⊠{ring.labels[right[ring.index(b)]]}"))
        return tuple(perm)

    grid = [[table.cell(lift(col, row)) for col in autos] for row in autos]
    return autos, grid
