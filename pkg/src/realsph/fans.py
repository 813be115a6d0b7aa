"""Rational polyhedral cones in a lattice Z^r, smooth fans and the
face data F_I with its adapted lattice bases."""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from . import linalg as la
from . import polyhedra
from .errors import InconsistencyError, SpecError

ZERO = Fraction(0)


def primitive(v) -> tuple:
    den = reduce(math.lcm, (Fraction(x).denominator for x in v), 1)
    ints = [int(Fraction(x) * den) for x in v]
    g = reduce(math.gcd, (abs(x) for x in ints), 0)
    if g == 0:
        raise SpecError("zero vector has no primitive generator")
    return tuple(x // g for x in ints)


@dataclass(frozen=True)
class LatticeCone:
    """Cone spanned by primitive integer generators in Z^dim."""

    generators: tuple
    dim: int

    def __post_init__(self):
        gens = tuple(sorted(set(primitive(g) for g in self.generators)))
        object.__setattr__(self, "generators", gens)

    @property
    def span_dim(self) -> int:
        return _rank_of(self.generators)

    @property
    def simplicial(self) -> bool:
        return self.span_dim == len(self.generators)

    def has_lineality(self) -> bool:
        if not self.generators:
            return False
        for g in self.generators:
            if polyhedra.in_cone(tuple(-Fraction(x) for x in g), [tuple(map(Fraction, h)) for h in self.generators])[0]:
                return True
        return False

    def contains(self, x) -> bool:
        if not any(x):
            return True
        if not self.generators:
            return False
        Vinv = _inverse_of(self.generators) if len(self.generators) == self.dim else None
        if Vinv is not None:
            # coefficients in the generator basis, exactly
            return all(sum(r[j] * x[j] for j in range(self.dim)) >= 0 for r in Vinv)
        return polyhedra.in_cone(tuple(map(Fraction, x)), [tuple(map(Fraction, g)) for g in self.generators])[0]

    def to_json(self):
        return [list(g) for g in self.generators]


@functools.lru_cache(maxsize=4096)
def _rank_of(generators) -> int:
    return la.rank([list(map(Fraction, g)) for g in generators]) if generators else 0


@functools.lru_cache(maxsize=4096)
def _inverse_of(generators) -> tuple | None:
    """Dual basis rows, scaled to integers by a positive factor; None if singular."""
    n = len(generators)
    if la.det([[Fraction(x) for x in g] for g in generators]) == 0:
        return None
    inv = la.inverse([[Fraction(generators[j][i]) for j in range(n)] for i in range(n)])
    m = reduce(math.lcm, (x.denominator for r in inv for x in r), 1)
    return tuple(tuple(int(x * m) for x in r) for r in inv)


def _separated(a: "LatticeCone", b: "LatticeCone", common) -> bool:
    """Cheap exact separator: sum of dual rows of a over generators outside the common face."""
    for c, d, sign in ((a, b, 1), (b, a, -1)):
        D = _inverse_of(c.generators) if len(c.generators) == c.dim else None
        if D is None:
            continue
        rows = [D[i] for i, g in enumerate(c.generators) if g not in common]
        l = [sum(r[k] for r in rows) for k in range(c.dim)]
        if all(sum(x * y for x, y in zip(l, g)) < 0 for g in d.generators if g not in common):
            return True
    return _lp_separator(a, b, common)


def _lp_separator(a, b, common) -> bool:
    """Float LP proposes l; accepted only after an exact check."""
    ra = [g for g in a.generators if g not in common]
    rb = [g for g in b.generators if g not in common]
    A_ub = [[-x for x in g] for g in ra] + [list(g) for g in rb]
    res = linprog(np.zeros(a.dim), A_ub=A_ub or None, b_ub=[-1.0] * len(A_ub) or None,
                  A_eq=[list(g) for g in common] or None, b_eq=[0.0] * len(common) or None,
                  bounds=[(None, None)] * a.dim, method="highs")
    if res.status != 0:
        return False
    l = [Fraction(x).limit_denominator(10 ** 6) for x in res.x]
    dot = lambda g: sum((x * y for x, y in zip(l, g)), ZERO)
    return all(dot(g) == 0 for g in common) and all(dot(g) > 0 for g in ra) and all(dot(g) < 0 for g in rb)


def _face_functional(c: LatticeCone, subset) -> bool:
    """Is cone(subset) a face: some l vanishes on subset and is > 0 on the rest."""
    rest = [g for g in c.generators if g not in subset]
    eq = [tuple(map(Fraction, g)) for g in subset]
    nonstrict = eq + [tuple(-x for x in e) for e in eq]
    strict = [tuple(map(Fraction, g)) for g in rest]
    if not strict:
        return True
    return polyhedra.solve_homogeneous(nonstrict, strict, c.dim).feasible


def faces(c: LatticeCone) -> list:
    if c.has_lineality():
        raise SpecError("cone with lineality space; quotient by the edge first")
    out = []
    gens = c.generators
    for k in range(len(gens) + 1):
        for sub in itertools.combinations(gens, k):
            if c.simplicial or _face_functional(c, sub):
                f = LatticeCone(sub, c.dim)
                # reject subsets whose cone swallows other generators
                if c.simplicial or all(g in sub or not f.contains(g) for g in gens):
                    out.append(f)
    return out


def _minors_gcd(vectors, k) -> int:
    n = len(vectors[0])
    g = 0
    for rows in itertools.combinations(range(n), k):
        m = [[Fraction(v[r]) for r in rows] for v in vectors]
        g = math.gcd(g, abs(int(la.det(m))))
    return g


def is_smooth(c: LatticeCone) -> bool:
    """Generators extend to a Z-basis iff the gcd of maximal minors is 1."""
    if not c.generators:
        return True
    if not c.simplicial:
        return False
    return _minors_gcd(c.generators, len(c.generators)) == 1


def multiplicity(c: LatticeCone) -> int:
    return _minors_gcd(c.generators, len(c.generators)) if c.generators else 1


def parallelepiped_points(c: LatticeCone) -> list:
    """Nonzero lattice points sum lambda_i v_i with 0 <= lambda_i < 1 (full-dimensional simplicial c)."""
    V = [[Fraction(g[i]) for g in c.generators] for i in range(c.dim)]
    Vinv = la.inverse(V)
    frac1 = lambda x: x - math.floor(x)
    gens = []
    for j in range(c.dim):
        lam = tuple(frac1(Vinv[i][j]) for i in range(c.dim))
        if any(lam):
            gens.append(lam)
    seen = {tuple(ZERO for _ in range(c.dim))}
    frontier = list(seen)
    while frontier:
        new = []
        for p in frontier:
            for q in gens:
                s = tuple(frac1(a + b) for a, b in zip(p, q))
                if s not in seen:
                    seen.add(s)
                    new.append(s)
        frontier = new
    pts = []
    for lam in seen:
        if not any(lam):
            continue
        x = tuple(int(sum((lam[j] * Fraction(c.generators[j][i]) for j in range(c.dim)), ZERO)) for i in range(c.dim))
        pts.append((x, lam))
    return pts


@dataclass
class Fan:
    maximal: list          # LatticeCone, construction order
    dim: int
    support: LatticeCone

    def all_cones(self) -> list:
        seen, out = set(), []
        for c in self.maximal:
            for f in faces(c):
                if f.generators not in seen:
                    seen.add(f.generators)
                    out.append(f)
        return out

    def to_json(self):
        return {"dim": self.dim, "maximal": [c.to_json() for c in self.maximal]}


def smooth_subdivide(support: LatticeCone, max_steps: int = 10000) -> Fan:
    """Iterated stellar subdivision at the shortest parallelepiped point."""
    if support.has_lineality():
        raise SpecError("support has a lineality space; quotient by the edge first")
    if support.span_dim != support.dim:
        raise SpecError("support must be full-dimensional")
    if not support.simplicial:
        raise SpecError("only simplicial supports are handled")
    cones = [support]
    for _ in range(max_steps):
        bad = [c for c in cones if not is_smooth(c)]
        if not bad:
            return Fan(cones, support.dim, support)
        c = bad[0]
        pts = parallelepiped_points(c)
        x, lam = min(pts, key=lambda p: (sum(t * t for t in p[0]), p[0]))
        tau = {g for g, l in zip(c.generators, lam) if l}
        new = []
        for s in cones:
            if tau <= set(s.generators):
                for v in tau:
                    new.append(LatticeCone(tuple(g for g in s.generators if g != v) + (x,), s.dim))
            else:
                new.append(s)
        cones = new
    raise InconsistencyError("subdivision did not terminate")


@dataclass
class FanCertificate:
    face_closed: bool
    face_to_face: bool
    smooth: bool
    covers: bool
    failures: list

    @property
    def ok(self) -> bool:
        return self.face_closed and self.face_to_face and self.smooth and self.covers


def verify_fan(fan: Fan, radius: int = 3) -> FanCertificate:
    failures = []
    cones = fan.maximal
    smooth = all(is_smooth(c) for c in cones)
    if not smooth:
        failures.append("non-smooth maximal cone")
    f2f = True
    for a, b in itertools.combinations(cones, 2):
        common = set(a.generators) & set(b.generators)
        if _separated(a, b, common):
            continue
        ra = [g for g in a.generators if g not in common]
        rb = [g for g in b.generators if g not in common]
        eq = [tuple(map(Fraction, g)) for g in common]
        res = polyhedra.solve_homogeneous(eq + [tuple(-x for x in e) for e in eq],
                                          [tuple(map(Fraction, g)) for g in ra] + [tuple(-Fraction(x) for x in g) for g in rb],
                                          fan.dim)
        if not res.feasible:
            f2f = False
            failures.append(("not face-to-face", a.generators, b.generators))
    all_c = fan.all_cones()
    keys = {c.generators for c in all_c}
    closed = all(f.generators in keys for c in all_c for f in faces(c))
    # interior facets shared by exactly two cones, boundary facets lie on the support boundary
    covers = True
    sup_normals = _facet_normals(fan.support)
    for c in cones:
        for v in c.generators:
            facet = tuple(g for g in c.generators if g != v)
            on_boundary = any(all(sum(Fraction(n[i]) * g[i] for i in range(fan.dim)) == 0 for g in facet) for n in sup_normals)
            sharing = sum(1 for d in cones if set(facet) <= set(d.generators))
            if not on_boundary and sharing != 2:
                covers = False
                failures.append(("facet not shared", facet))
    for x in itertools.product(range(-radius, radius + 1), repeat=fan.dim):
        ins = fan.support.contains(x)
        hits = sum(1 for c in cones if c.contains(x))
        if ins != (hits > 0):
            covers = False
            failures.append(("coverage", x))
            break
    return FanCertificate(closed, f2f, smooth, covers, failures)


def _facet_normals(c: LatticeCone) -> list:
    """Inner normals of the facets of a full-dimensional simplicial cone."""
    out = []
    for v in c.generators:
        rest = [list(map(Fraction, g)) for g in c.generators if g != v]
        n = la.nullspace(rest, c.dim)[0] if rest else tuple(Fraction(1) for _ in range(c.dim))
        if sum(n[i] * v[i] for i in range(c.dim)) < 0:
            n = tuple(-x for x in n)
        out.append(n)
    return out


# ------------------------------------------------- spherical root interface

def compression_cone(S_lattice: Sequence[Sequence[int]], r: int) -> LatticeCone:
    """{x in Z^r : sigma(x) <= 0} for sigma given in lattice coordinates."""
    if len(S_lattice) != r:
        raise SpecError("compression cone has a lineality space (edge); quotient first")
    M = [[Fraction(x) for x in s] for s in S_lattice]
    Minv = la.inverse(M)
    gens = [primitive([-Minv[i][j] for i in range(r)]) for j in range(r)]
    return LatticeCone(tuple(gens), r)


def standard_fan(S_lattice, r) -> Fan:
    c = compression_cone(S_lattice, r)
    return Fan([c], r, c)


def face_span_kernel(S_lattice, I, r) -> list:
    rows = [[Fraction(x) for x in S_lattice[i]] for i in sorted(I)]
    return la.nullspace(rows, r) if rows else [tuple(Fraction(int(i == j)) for j in range(r)) for i in range(r)]


def vanishing_roots(S_lattice, cone: LatticeCone) -> frozenset:
    return frozenset(i for i, s in enumerate(S_lattice) if all(sum(a * b for a, b in zip(s, g)) == 0 for g in cone.generators))


def cones_with_span(fan: Fan, I, S_lattice) -> list:
    """F_I = cones whose linear span is a_I, each with I(C)."""
    target = la.span_basis(face_span_kernel(S_lattice, I, fan.dim), fan.dim)
    out = []
    for c in fan.all_cones():
        span = la.span_basis([tuple(map(Fraction, g)) for g in c.generators], fan.dim)
        if span == target:
            out.append((c, vanishing_roots(S_lattice, c)))
    return out


@dataclass
class DualBasisData:
    j_I: int
    psi: list        # integer functionals
    e: list          # dual basis vectors
    e_I: tuple
    k: int


def dual_basis_data(fan: Fan, I, chosen: LatticeCone, S_lattice) -> DualBasisData:
    r = fan.dim
    js = [j for j, c in enumerate(fan.maximal) if set(chosen.generators) <= set(c.generators)]
    if not js:
        raise SpecError("chosen cone lies in no maximal cone")
    j = js[0]
    C = fan.maximal[j]
    if not is_smooth(C) or len(C.generators) != r:
        raise InconsistencyError("maximal cone is not smooth and full-dimensional")
    gens = list(C.generators)
    inner = [g for g in gens if g in chosen.generators]
    outer = [g for g in gens if g not in chosen.generators]
    order = inner + outer
    V = [[Fraction(g[i]) for g in order] for i in range(r)]
    Vinv = la.inverse(V)
    # psi_i(v_j) = -delta_ij so that C = {psi <= 0}; e_j = -v_j
    psi = [tuple(-Vinv[i][t] for t in range(r)) for i in range(r)]
    e = [tuple(-Fraction(x) for x in g) for g in order]
    k = len(inner)
    vanish = la.span_basis(psi[k:], r)
    qI = la.span_basis([tuple(map(Fraction, S_lattice[i])) for i in sorted(I)], r)
    if vanish != qI:
        raise InconsistencyError("span condition Q[I] = Q[psi_{k+1..r}] fails")
    for i in range(r):
        for t in range(r):
            if sum(psi[i][s] * e[t][s] for s in range(r)) != int(i == t):
                raise InconsistencyError("psi and e are not dual")
    eI = tuple(sum((e[t][s] for t in range(k)), ZERO) for s in range(r))
    return DualBasisData(j, [tuple(int(x) for x in p) for p in psi], [tuple(int(x) for x in v) for v in e], tuple(int(x) for x in eI), k)


@dataclass
class EdgeQuotient:
    basis: list      # Z-basis of the saturated lattice spanned by S (rows, lattice coordinates)
    S_coords: list   # S in that basis
    edge: list       # integer basis of the common kernel of S (cocharacter coordinates)


def edge_quotient(S_lattice) -> EdgeQuotient:
    """Pass to the lattice of characters vanishing on the edge."""
    import sympy
    from sympy.matrices.normalforms import smith_normal_decomp

    M = sympy.Matrix([list(s) for s in S_lattice])
    s, r = M.shape
    D, U, V = smith_normal_decomp(M, domain=sympy.ZZ)
    Vinv = V.inv()
    B = Vinv[:s, :]
    C = U.inv() * D[:, :s]
    if C * B != M:
        raise InconsistencyError("Smith decomposition check failed")
    ker = [primitive(v) for v in la.nullspace([[Fraction(x) for x in row] for row in S_lattice], r)]
    return EdgeQuotient([tuple(int(x) for x in B.row(i)) for i in range(s)],
                        [tuple(int(x) for x in C.row(i)) for i in range(s)], ker)


def fan_for_roots(S_lattice, r: int) -> tuple:
    """Smooth fan supported on the compression cone, after quotienting by the edge."""
    if not S_lattice:
        raise SpecError("no spherical roots: the compression cone is its own edge")
    q = edge_quotient(S_lattice) if len(S_lattice) < r else None
    coords = q.S_coords if q else [tuple(s) for s in S_lattice]
    s = len(coords)
    support = compression_cone(coords, s)
    fan = Fan([support], s, support) if is_smooth(support) else smooth_subdivide(support)
    return fan, coords, q
