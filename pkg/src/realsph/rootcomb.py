"""Root systems and Weyl group combinatorics.

Vectors are written in simple-root coordinates and the Euclidean
structure is carried by the Gram matrix of the simple roots.  The same
space serves for a and its dual, so alpha(X) is the pairing (alpha, X).
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import factorial
from typing import Iterable, Sequence

from . import linalg as la
from . import polyhedra
from .errors import InconsistencyError, SpecError

ZERO = Fraction(0)
MAX_RANK = 6


def _ip(B, u, v) -> Fraction:
    return sum((u[i] * B[i][j] * v[j] for i in range(len(u)) for j in range(len(v)) if u[i] and v[j]), ZERO)


@dataclass(frozen=True)
class WeylElement:
    matrix: tuple   # columns are images of the simple roots
    word: tuple     # shortlex-minimal reduced word (1-based simple indices)

    def apply(self, v) -> tuple:
        n = len(v)
        return tuple(sum((self.matrix[i][j] * v[j] for j in range(n) if v[j]), ZERO) for i in range(n))

    @property
    def length(self) -> int:
        return len(self.word)

    def name(self) -> str:
        return "1" if not self.word else "s" + ".s".join(str(i) for i in self.word)


def _compose(A, B):
    n = len(A)
    return tuple(tuple(sum((A[i][k] * B[k][j] for k in range(n)), ZERO) for j in range(n)) for i in range(n))


def _identity(n):
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


class RootSystem:
    """A finite (possibly non-reduced) root system."""

    def __init__(self, gram, name: str = "", extra_multiples: bool = False):
        self.gram = tuple(tuple(Fraction(x) for x in r) for r in gram)
        self.rank = len(self.gram)
        self.name = name
        if la.rank([list(r) for r in self.gram]) != self.rank:
            raise SpecError("simple roots are not linearly independent")
        self.simple = [tuple(Fraction(int(i == j)) for j in range(self.rank)) for i in range(self.rank)]
        roots = set(self.simple)
        frontier = list(self.simple)
        while frontier:
            new = []
            for r in frontier:
                for i in range(self.rank):
                    s = self.reflect(i, r)
                    if s not in roots:
                        roots.add(s)
                        new.append(s)
            frontier = new
        if extra_multiples:
            # BC_n: add 2*alpha for short roots alpha
            short = min(_ip(self.gram, r, r) for r in roots)
            roots |= {tuple(2 * x for x in r) for r in list(roots) if _ip(self.gram, r, r) == short}
        self.roots = sorted(roots)
        self.positive = sorted(r for r in roots if all(x >= 0 for x in r))
        if len(self.positive) * 2 != len(self.roots):
            raise InconsistencyError("roots do not split into positive and negative")

    def reflect(self, i: int, v) -> tuple:
        a = self.simple[i]
        c = 2 * _ip(self.gram, v, a) / _ip(self.gram, a, a)
        return tuple(x - c * y for x, y in zip(v, a))

    def ip(self, u, v) -> Fraction:
        return _ip(self.gram, u, v)

    def is_positive(self, v) -> bool:
        return tuple(v) in set(self.positive)

    @cached_property
    def _generators(self):
        gens = []
        for i in range(self.rank):
            cols = [self.reflect(i, e) for e in self.simple]
            gens.append(tuple(tuple(cols[j][k] for j in range(self.rank)) for k in range(self.rank)))
        return gens

    def generated(self, gens: Sequence[int]) -> list:
        """Subgroup generated by the simple reflections with the given 0-based indices."""
        start = WeylElement(_identity(self.rank), ())
        seen = {start.matrix: start}
        queue = deque([start])
        while queue:
            w = queue.popleft()
            for i in sorted(gens):
                m = _compose(w.matrix, self._generators[i])
                if m not in seen:
                    seen[m] = WeylElement(m, w.word + (i + 1,))
                    queue.append(seen[m])
        return sorted(seen.values(), key=lambda w: (w.length, w.word))

    def __repr__(self):
        return "RootSystem(%s, rank=%d)" % (self.name, self.rank)


# ----------------------------------------------------------- constructors

def _gram_from_vectors(vecs):
    return [[sum((a * b for a, b in zip(u, v)), ZERO) for v in vecs] for u in vecs]


def _e(n, i):
    return [Fraction(int(k == i)) for k in range(n)]


def named(kind: str, n: int) -> RootSystem:
    kind = kind.upper()
    if n < 1:
        raise SpecError("rank must be positive")
    if kind == "A":
        vecs = [[a - b for a, b in zip(_e(n + 1, i), _e(n + 1, i + 1))] for i in range(n)]
        return RootSystem(_gram_from_vectors(vecs), "A%d" % n)
    if kind in ("B", "C", "BC", "D"):
        vecs = [[a - b for a, b in zip(_e(n, i), _e(n, i + 1))] for i in range(n - 1)]
        if kind in ("B", "BC"):
            vecs.append(_e(n, n - 1))
        elif kind == "C":
            vecs.append([2 * x for x in _e(n, n - 1)])
        else:
            if n < 2:
                raise SpecError("D_n needs n >= 2")
            vecs.append([a + b for a, b in zip(_e(n, n - 2), _e(n, n - 1))])
        return RootSystem(_gram_from_vectors(vecs), "%s%d" % (kind, n), extra_multiples=(kind == "BC"))
    raise SpecError("unknown root system type %r" % kind)


def from_cartan(C) -> RootSystem:
    """Root system from a Cartan matrix with a_ij = 2(a_i,a_j)/(a_i,a_i)."""
    n = len(C)
    d = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(2)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if C[i][j] and d[j] is None:
                    # d_i a_ij = d_j a_ji
                    d[j] = d[i] * Fraction(C[i][j]) / Fraction(C[j][i])
                    stack.append(j)
    gram = [[d[i] * Fraction(C[i][j]) / 2 for j in range(n)] for i in range(n)]
    if any(gram[i][j] != gram[j][i] for i in range(n) for j in range(n)):
        raise SpecError("Cartan matrix is not symmetrizable")
    return RootSystem(gram, "cartan")


# ----------------------------------------------------------- operations

def weyl_order(rs: RootSystem) -> int | None:
    """Classical order formula for named irreducible types."""
    kind = rs.name.rstrip("0123456789")
    n = rs.rank
    return {"A": factorial(n + 1), "B": 2 ** n * factorial(n), "C": 2 ** n * factorial(n),
            "BC": 2 ** n * factorial(n), "D": 2 ** (n - 1) * factorial(n)}.get(kind)


def enumerate_weyl(rs: RootSystem, max_rank: int = MAX_RANK) -> list:
    if rs.rank > max_rank:
        raise SpecError("rank %d exceeds the configured bound %d" % (rs.rank, max_rank))
    return rs.generated(range(rs.rank))


def _check_subset(rs, I):
    I = frozenset(I)
    if not I <= frozenset(range(rs.rank)):
        raise SpecError("I is not a subset of the simple roots")
    return I


def parabolic_subgroup(rs: RootSystem, I) -> list:
    return rs.generated(sorted(_check_subset(rs, I)))


def distinguished_reps(rs: RootSystem, I, W=None) -> list:
    I = _check_subset(rs, I)
    W = W if W is not None else enumerate_weyl(rs)
    pos = set(rs.positive)
    return [w for w in W if all(w.apply(rs.simple[i]) in pos for i in I)]


def cross_set(rs: RootSystem, I, J, W=None) -> list:
    """W(I, J) = {w : w(J) = I}."""
    I, J = _check_subset(rs, I), _check_subset(rs, J)
    W = W if W is not None else enumerate_weyl(rs)
    target = {rs.simple[i] for i in I}
    return [w for w in W if {w.apply(rs.simple[j]) for j in J} == target]


def fixed_space(rs: RootSystem, I) -> list:
    """Basis of a_I = {X : (alpha, X) = 0 for alpha in I}."""
    I = sorted(_check_subset(rs, I))
    if not I:
        return [tuple(r) for r in rs.simple]
    rows = [[sum((rs.simple[i][k] * rs.gram[k][j] for k in range(rs.rank)), ZERO) for j in range(rs.rank)] for i in I]
    return la.nullspace(rows, rs.rank)


def _coords_in(basis, v):
    M = [[b[i] for b in basis] for i in range(len(v))]
    c = la.solve(M, v)
    if c is None:
        raise InconsistencyError("vector not in the expected subspace")
    return c


@dataclass
class Subquotient:
    I: frozenset
    basis: list                 # basis of a_I
    elements: dict              # restriction matrix -> WeylElement of W(I,I)
    injective: bool
    reflection_generated: bool

    @property
    def order(self) -> int:
        return len(self.elements)


def subquotient_WI(rs: RootSystem, I, W=None) -> Subquotient:
    I = _check_subset(rs, I)
    W = W if W is not None else enumerate_weyl(rs)
    basis = fixed_space(rs, I)
    WII = cross_set(rs, I, I, W)
    images = {}
    for w in WII:
        cols = [_coords_in(basis, w.apply(b)) for b in basis]
        m = tuple(tuple(cols[j][i] for j in range(len(basis))) for i in range(len(basis)))
        images.setdefault(m, w)
    injective = len(images) == len(WII)
    return Subquotient(I, basis, images, injective, _reflection_generated(list(images), len(basis)))


def _reflection_generated(mats, n) -> bool:
    if n == 0:
        return True
    ident = _identity(n)
    refl = []
    for m in mats:
        if m == ident:
            continue
        if _compose(m, m) == ident and la.rank([[m[i][j] - ident[i][j] for j in range(n)] for i in range(n)]) == 1:
            refl.append(m)
    group = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for g in frontier:
            for r in refl:
                x = _compose(g, r)
                if x not in group:
                    group.add(x)
                    new.append(x)
        frontier = new
    return len(group) == len(mats)


def association_classes(rs: RootSystem, W=None) -> list:
    W = W if W is not None else enumerate_weyl(rs)
    subsets = [frozenset(c) for k in range(rs.rank + 1) for c in itertools.combinations(range(rs.rank), k)]
    simple_idx = {s: i for i, s in enumerate(rs.simple)}
    parent = {s: s for s in subsets}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x
    for w in W:
        for J in subsets:
            img = [w.apply(rs.simple[j]) for j in J]
            if all(v in simple_idx for v in img):
                I = frozenset(simple_idx[v] for v in img)
                a, b = find(I), find(J)
                if a != b:
                    parent[a] = b
    classes = {}
    for s in subsets:
        classes.setdefault(find(s), []).append(s)
    out = [sorted(c, key=lambda s: (len(s), sorted(s))) for c in classes.values()]
    return sorted(out, key=lambda c: (len(c[0]), sorted(c[0])))


def class_of(rs, I, classes=None) -> list:
    I = frozenset(I)
    for c in classes or association_classes(rs):
        if I in c:
            return c
    raise InconsistencyError("subset without class")


@dataclass
class Tile:
    J: frozenset
    w: WeylElement
    normals: list        # inequality normals in a_I coordinates: n.x <= 0


def _cone_normals(rs, I_basis, J, w) -> list:
    """w(a_J^-) inside a_I as {Y : (w alpha, Y) <= 0, alpha not in J}."""
    out = []
    for i in range(rs.rank):
        if i in J:
            continue
        wa = w.apply(rs.simple[i])
        out.append(tuple(rs.ip(wa, b) for b in I_basis))
    return out


def tiling(rs: RootSystem, I, W=None) -> list:
    I = _check_subset(rs, I)
    W = W if W is not None else enumerate_weyl(rs)
    basis = fixed_space(rs, I)
    tiles = []
    for J in class_of(rs, I, association_classes(rs, W)):
        for w in cross_set(rs, I, J, W):
            tiles.append(Tile(J, w, _cone_normals(rs, basis, J, w)))
    return tiles


@dataclass
class TilingCertificate:
    disjoint: bool
    covered: bool
    witnesses: list


def verify_tiling(rs, I, tiles, box: int = 4) -> TilingCertificate:
    """Pairwise disjoint interiors (exact Fourier-Motzkin) and coverage of all
    lattice points of a_I in a box."""
    basis = fixed_space(rs, I)
    dim = len(basis)
    witnesses = []
    disjoint = True
    for a, b in itertools.combinations(range(len(tiles)), 2):
        res = polyhedra.interiors_disjoint(tiles[a].normals, tiles[b].normals, dim)
        if res.feasible:
            disjoint = False
            witnesses.append((a, b, res.witness))
    covered = True
    for pt in itertools.product(range(-box, box + 1), repeat=dim):
        if not any(all(sum((Fraction(p) * x for p, x in zip(pt, n)), ZERO) <= 0 for n in t.normals) for t in tiles):
            covered = False
            witnesses.append(("uncovered", pt))
            break
    return TilingCertificate(disjoint, covered, witnesses)


def fundamental_domain(rs: RootSystem, I, W=None) -> list:
    """One tile per W_I-orbit on each W(I,J): the minimal (length, word) member."""
    I = _check_subset(rs, I)
    W = W if W is not None else enumerate_weyl(rs)
    WII = cross_set(rs, I, I, W)
    tiles = tiling(rs, I, W)
    by_matrix = {t.w.matrix: t for t in tiles}
    chosen, seen = [], set()
    for t in sorted(tiles, key=lambda t: (t.w.length, t.w.word)):
        if t.w.matrix in seen:
            continue
        orbit = {_compose(u.matrix, t.w.matrix) for u in WII}
        if not orbit <= set(by_matrix):
            raise InconsistencyError("W_I does not act on the cross sets")
        seen |= orbit
        chosen.append(t)
    return chosen


def parseval_coefficients(rs: RootSystem, W=None) -> dict:
    W = W if W is not None else enumerate_weyl(rs)
    classes = association_classes(rs, W)
    table = {}
    for c in classes:
        for I in c:
            q = subquotient_WI(rs, I, W).order
            table[I] = (len(c), q, Fraction(1, len(c) * q))
    return table


def chevalley_consistent(rs: RootSystem, I, W=None) -> bool:
    """Every w fixing a_I pointwise lies in W(I)."""
    W = W if W is not None else enumerate_weyl(rs)
    basis = fixed_space(rs, I)
    WI = {w.matrix for w in parabolic_subgroup(rs, I)}
    return all(w.matrix in WI for w in W if all(w.apply(b) == tuple(b) for b in basis))


def subset_label(I) -> str:
    return "{" + ",".join("a%d" % (i + 1) for i in sorted(I)) + "}"
