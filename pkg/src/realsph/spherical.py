"""Local structure data of a real spherical pair and everything derived
from it: the graph map T, the semigroup M, spherical roots, compression
cone, edge and the boundary degenerations h_I.

Functionals on a are stored as tuples of their values on the canonical
basis of the split Cartan subspace.  Functionals on a_Z are the ones that
vanish on a_H, so no quotient bookkeeping is needed.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from typing import Sequence

import mpmath

from . import linalg as la
from . import polyhedra
from .errors import InconsistencyError, SpecError
from .liealg import (MatrixLieAlgebra, RootSpaceDecomposition, Subspace, centralizer,
                     orthogonal_complement, root_space_decomposition)

ZERO = Fraction(0)


def _dot(u, v) -> Fraction:
    return sum((a * b for a, b in zip(u, v) if a and b), ZERO)


def _lincomb(coeffs, vecs, n) -> tuple:
    out = [ZERO] * n
    for c, v in zip(coeffs, vecs):
        if c:
            for i, x in enumerate(v):
                if x:
                    out[i] += c * x
    return tuple(out)


# ------------------------------------------------------------ parabolic

@dataclass
class Parabolic:
    """Minimal parabolic p = m + a + n for a chosen positive system."""

    g: MatrixLieAlgebra
    a: Subspace
    rsd: RootSpaceDecomposition
    positive: list
    simple: list

    @property
    def n(self) -> Subspace:
        return Subspace(self.g, [v for r in self.positive for v in self.rsd.root_spaces[r].basis])

    @property
    def p(self) -> Subspace:
        return self.rsd.zero_space + self.n

    @property
    def m(self) -> Subspace:
        return self.rsd.zero_space & orthogonal_complement(self.g, self.a)

    def a_coords(self, x) -> tuple:
        """Coordinates of x in the canonical basis of a."""
        c = la.solve([[b[i] for b in self.a.basis] for i in range(self.g.dim)], x)
        if c is None:
            raise SpecError("element not in a")
        return c

    def evaluate(self, functional, x) -> Fraction:
        return _dot(functional, self.a_coords(x))

    def simple_coords(self, functional) -> tuple | None:
        """Express a functional in the simple roots (None if not in their span)."""
        M = [[s[i] for s in self.simple] for i in range(len(functional))]
        return la.solve(M, functional)

    def label(self, functional) -> str:
        c = self.simple_coords(functional)
        if c is None:
            return "(" + ",".join(la.fmt(x) for x in functional) + ")"
        parts = []
        for i, x in enumerate(c):
            if not x:
                continue
            coef = "" if x == 1 else ("-" if x == -1 else la.fmt(x))
            parts.append("%sa%d" % (coef, i + 1))
        return "+".join(parts).replace("+-", "-") or "0"


def make_parabolic(g: MatrixLieAlgebra, a: Subspace, positive_element) -> Parabolic:
    """Positive roots are those positive on ``positive_element`` (coords)."""
    rsd = root_space_decomposition(g, a)
    probe = la.solve([[b[i] for b in a.basis] for i in range(g.dim)], positive_element)
    if probe is None:
        raise SpecError("positive_element is not in a")
    pos = [r for r in rsd.roots if _dot(r, probe) > 0]
    if any(_dot(r, probe) == 0 for r in rsd.roots):
        raise SpecError("positive_element is singular")
    posset = set(pos)
    simple = [r for r in pos if not any(tuple(x - y for x, y in zip(r, s)) in posset for s in pos)]
    return Parabolic(g, a, rsd, sorted(pos), sorted(simple, key=lambda s: tuple(-x for x in s)))


def check_real_spherical(g: MatrixLieAlgebra, h: Subspace, p: Subspace) -> tuple[bool, dict]:
    s = p + h
    return s.dim == g.dim, {"dim_p": p.dim, "dim_h": h.dim, "dim_p_plus_h": s.dim, "dim_g": g.dim}


# ------------------------------------------------------------ Levi

@dataclass
class Levi:
    X0: tuple
    l: Subspace
    u: Subspace
    ubar: Subspace
    sigma_u: list  # roots alpha with g^alpha in u


def _levi_from(par: Parabolic, X0) -> Levi:
    g, rsd = par.g, par.rsd
    vals = {r: par.evaluate(r, X0) for r in rsd.roots}
    su = [r for r in par.positive if vals[r] < 0]
    l = rsd.zero_space + Subspace(g, [v for r in rsd.roots if vals[r] == 0 for v in rsd.root_spaces[r].basis])
    u = Subspace(g, [v for r in su for v in rsd.root_spaces[r].basis])
    ubar = Subspace(g, [v for r in su for v in rsd.root_spaces[tuple(-x for x in r)].basis])
    return Levi(tuple(X0), l, u, ubar, su)


def adapted_levi_candidates(g: MatrixLieAlgebra, h: Subspace, par: Parabolic, aZ: Subspace, bound: int = 2):
    """Anti-dominant X0 in a_Z cap h^perp, ordered by centralizer size,
    then by size of coefficients, then lexicographically."""
    hp = orthogonal_complement(g, h)
    W = aZ & hp
    if W.dim == 0:
        return []
    cands = []
    for c in itertools.product(range(-bound, bound + 1), repeat=W.dim):
        if not any(c):
            continue
        x = _lincomb([Fraction(t) for t in c], W.basis, g.dim)
        vals = [par.evaluate(r, x) for r in par.positive]
        if any(v > 0 for v in vals):
            continue
        nonzero = sum(1 for v in vals if v)
        cands.append((-nonzero, max(abs(t) for t in c), c, x))
    cands.sort(key=lambda t: (t[0], t[1], t[2]))
    return [t[3] for t in cands]


def adapted_levi(g: MatrixLieAlgebra, h: Subspace, par: Parabolic, aZ: Subspace, bound: int = 2) -> Levi:
    for x in adapted_levi_candidates(g, h, par, aZ, bound):
        lv = _levi_from(par, x)
        if _graph_decomposition_ok(g, h, lv):
            return lv
    raise SpecError("no adapted X0 in a_Z cap h^perp on the search lattice (bound %d)" % bound)


def _complement_in_l(g: MatrixLieAlgebra, l: Subspace, lh: Subspace) -> Subspace:
    if lh.dim == 0:
        return l
    rows = [[_dot([sum((v[i] * g.form[i][j] for i in range(g.dim) if v[i]), ZERO) for j in range(g.dim)], w)
             for w in l.basis] for v in lh.basis]
    ker = la.nullspace(rows, l.dim)
    return Subspace(g, [_lincomb(k, l.basis, g.dim) for k in ker])


def _graph_decomposition_ok(g, h, lv: Levi) -> bool:
    lh = lv.l & h
    C = _complement_in_l(g, lv.l, lh)
    return lv.u.dim + C.dim + h.dim == g.dim and (lv.u + C + h).dim == g.dim


# ------------------------------------------------------------ datum

@dataclass
class GraphEntry:
    alpha: tuple          # root with g^{-alpha} in ubar
    x_minus: tuple        # basis vector of g^{-alpha}
    components: dict      # beta (root of u, or zero functional for the l part) -> coords

    def image(self, n) -> tuple:
        return reduce(lambda s, v: tuple(a + b for a, b in zip(s, v)), self.components.values(), tuple(ZERO for _ in range(n)))


@dataclass
class SphericalDatum:
    g: MatrixLieAlgebra
    h: Subspace
    par: Parabolic
    levi: Levi
    lattice: list                     # Xi_Z as functionals on a
    name: str = "Z"
    T: list = field(default_factory=list)

    @cached_property
    def aH(self) -> Subspace:
        return self.par.a & self.h

    @cached_property
    def aZ(self) -> Subspace:
        """kappa-orthocomplement of a_H inside a."""
        a, g = self.par.a, self.g
        if self.aH.dim == 0:
            return a
        rows = [[_dot([sum((v[i] * g.form[i][j] for i in range(g.dim) if v[i]), ZERO) for j in range(g.dim)], w)
                 for w in a.basis] for v in self.aH.basis]
        ker = la.nullspace(rows, a.dim)
        return Subspace(g, [_lincomb(k, a.basis, g.dim) for k in ker])

    @cached_property
    def l_cap_h(self) -> Subspace:
        return self.levi.l & self.h

    @cached_property
    def complement(self) -> Subspace:
        return _complement_in_l(self.g, self.levi.l, self.l_cap_h)

    @property
    def zero_functional(self) -> tuple:
        return tuple(ZERO for _ in self.par.a.basis)

    def rho(self) -> tuple:
        """Half sum of the roots of u, with multiplicity (as a functional on a)."""
        rsd = self.par.rsd
        s = [ZERO] * self.par.a.dim
        for r in self.levi.sigma_u:
            for i, x in enumerate(r):
                s[i] += x * rsd.root_spaces[r].dim
        return tuple(x / 2 for x in s)


def build_datum(g, h, par, lattice, name="Z", X0=None, bound=2) -> SphericalDatum:
    ok, dims = check_real_spherical(g, h, par.p)
    if not ok:
        raise SpecError("p + h != g: %s" % dims)
    d = SphericalDatum(g, h, par, None, list(lattice), name)
    if X0 is None:
        d.levi = adapted_levi(g, h, par, d.aZ, bound)
    else:
        d.levi = _levi_from(par, X0)
        if not _graph_decomposition_ok(g, h, d.levi):
            raise SpecError("supplied X0 does not give g = u + (l cap h)^perp_l + h")
    d.T = derive_graph_map(d)
    for f in d.lattice:
        if any(_dot(f, par.a_coords(v)) for v in d.aH.basis):
            raise SpecError("lattice functional %s does not vanish on a_H" % (f,))
    return d


def derive_graph_map(d: SphericalDatum) -> list:
    """Solve X_{-alpha} + T(X_{-alpha}) in h for every basis vector of ubar."""
    g, lv, rsd = d.g, d.levi, d.par.rsd
    U, C, H = lv.u.basis, d.complement.basis, d.h.basis
    if len(U) + len(C) + len(H) != g.dim or (lv.u + d.complement + d.h).dim != g.dim:
        raise InconsistencyError("g = u + (l cap h)^perp_l + h is not direct")
    cols = list(U) + list(C) + [tuple(-x for x in v) for v in H]
    M = [[c[i] for c in cols] for i in range(g.dim)]
    entries = []
    zero = d.zero_functional
    for alpha in lv.sigma_u:
        neg = tuple(-x for x in alpha)
        for xm in rsd.root_spaces[neg].basis:
            sol = la.solve(M, [-x for x in xm])
            if sol is None:
                raise InconsistencyError("no graph element over %s" % (xm,))
            tu = _lincomb(sol[: len(U)], U, g.dim)
            tc = _lincomb(sol[len(U): len(U) + len(C)], C, g.dim)
            comps = {}
            for beta in lv.sigma_u:
                c = rsd.component(tu, beta)
                if any(c):
                    comps[beta] = c
            if any(tc):
                comps[zero] = tc
            entries.append(GraphEntry(alpha, xm, comps))
    # sanity: graph elements lie in h
    for e in entries:
        v = tuple(a + b for a, b in zip(e.x_minus, e.image(g.dim)))
        if not d.h.contains_coords(v):
            raise InconsistencyError("graph element not in h")
    return entries


# ------------------------------------------------------------ roots

@dataclass
class SphericalRoots:
    M_generators: list        # distinct alpha+beta functionals
    S: list                   # normalized spherical roots
    S_lattice: list           # integer coordinates of S in Xi_Z
    labels: list
    edge: Subspace            # a_{Z,E}
    aZ: Subspace

    @property
    def rank(self) -> int:
        return self.aZ.dim

    def index(self, name: str) -> int:
        name = name.strip()
        if name in self.labels:
            return self.labels.index(name)
        if name.startswith("s") and name[1:].isdigit() and 1 <= int(name[1:]) <= len(self.S):
            return int(name[1:]) - 1
        raise SpecError("unknown spherical root %r (known: %s)" % (name, ", ".join(self.labels)))

    def coords(self, functional) -> tuple | None:
        """Coefficients of a functional in the basis S (None if outside the span)."""
        if not self.S:
            return () if not any(functional) else None
        M = [[s[i] for s in self.S] for i in range(len(functional))]
        return la.solve(M, functional)


def _primitive(v) -> tuple:
    den = reduce(math.lcm, (Fraction(x).denominator for x in v), 1)
    ints = [int(Fraction(x) * den) for x in v]
    g = reduce(math.gcd, (abs(x) for x in ints), 0)
    return tuple(Fraction(x // g) for x in ints) if g else tuple(Fraction(0) for _ in v)


def spherical_roots(d: SphericalDatum) -> SphericalRoots:
    par = d.par
    Mgens = []
    labels_src = {}
    for e in d.T:
        for beta in e.components:
            s = tuple(x + y for x, y in zip(e.alpha, beta))
            for v in d.aH.basis:
                if par.evaluate(s, v) != 0:
                    raise InconsistencyError("element %s of M does not vanish on a_H" % par.label(s))
            if not any(s):
                raise InconsistencyError("zero exponent in M")
            if s not in Mgens:
                Mgens.append(s)
    Mgens.sort()
    # work in a_Z coordinates
    aZb = d.aZ.basis
    restrict = lambda f: tuple(par.evaluate(f, v) for v in aZb)
    dirs = {}
    for m in Mgens:
        key = _primitive(restrict(m))
        dirs.setdefault(key, m)
    keys = sorted(dirs)
    rays = []
    for k in keys:
        others = [o for o in keys if o != k]
        inside, _ = polyhedra.in_cone(k, others) if others else (False, None)
        if not inside:
            rays.append(k)
    if la.rank([list(r) for r in rays]) != len(rays) if rays else False:
        raise InconsistencyError("cone of M is not simplicial")
    for m in keys:
        if not polyhedra.in_cone(m, rays)[0]:
            raise InconsistencyError("ray computation failed")
    # normalise against the lattice
    lat = [restrict(f) for f in d.lattice]
    if rays and la.rank([list(x) for x in lat]) != len(lat):
        raise SpecError("lattice generators are dependent on a_Z")
    S, S_lat, labels = [], [], []
    for r in rays:
        M = [[f[i] for f in lat] for i in range(len(r))]
        c = la.solve(M, r)
        if c is None:
            raise SpecError("ray %s is not rational on the lattice" % (r,))
        c = _primitive(c)
        S_lat.append(tuple(int(x) for x in c))
        sigma_aZ = _lincomb(c, lat, len(r))
        # lift to a functional on a vanishing on a_H
        sigma = _lift(d, sigma_aZ)
        S.append(sigma)
        labels.append(par.label(sigma))
    order = sorted(range(len(S)), key=lambda i: labels[i])
    S = [S[i] for i in order]
    S_lat = [S_lat[i] for i in order]
    labels = [labels[i] for i in order]
    if len(set(labels)) != len(labels):
        labels = ["s%d" % (i + 1) for i in range(len(S))]
    # edge: common kernel of S inside a_Z
    if S:
        rows = [[par.evaluate(s, v) for v in aZb] for s in S]
        ker = la.nullspace(rows, len(aZb))
        edge = Subspace(d.g, [_lincomb(k, aZb, d.g.dim) for k in ker])
    else:
        edge = d.aZ
    if len(S) != d.aZ.dim - edge.dim:
        raise InconsistencyError("#S != dim a_Z - dim edge")
    return SphericalRoots(Mgens, S, S_lat, labels, edge, d.aZ)


def _lift(d: SphericalDatum, vals_on_aZ) -> tuple:
    """Functional on a with given values on a_Z and zero on a_H."""
    par = d.par
    rows = [par.a_coords(v) for v in d.aZ.basis] + [par.a_coords(v) for v in d.aH.basis]
    rhs = list(vals_on_aZ) + [ZERO] * d.aH.dim
    f = la.solve([list(r) for r in rows], rhs)
    return tuple(f)


def compression_cone_contains(d: SphericalDatum, roots: SphericalRoots, x) -> bool:
    return all(d.par.evaluate(s, x) <= 0 for s in roots.S)


# ------------------------------------------------------------ degenerations

@dataclass
class Degeneration:
    I: frozenset
    hI: Subspace
    aI: Subspace
    kept: list        # (entry index, beta) pairs retained by T_I
    checks: dict

    @property
    def hat(self) -> Subspace:
        return self.hI + self.aI


def face_space(d: SphericalDatum, roots: SphericalRoots, I) -> Subspace:
    """a_I = common kernel of the roots in I inside a_Z."""
    aZb = d.aZ.basis
    if not I:
        return d.aZ
    rows = [[d.par.evaluate(roots.S[i], v) for v in aZb] for i in sorted(I)]
    ker = la.nullspace(rows, len(aZb))
    return Subspace(d.g, [_lincomb(k, aZb, d.g.dim) for k in ker])


def exponent_support(d: SphericalDatum, roots: SphericalRoots, alpha, beta) -> frozenset:
    s = tuple(x + y for x, y in zip(alpha, beta))
    c = roots.coords(s)
    if c is None:
        raise InconsistencyError("exponent %s outside the span of S" % d.par.label(s))
    if any(x < 0 for x in c):
        raise InconsistencyError("exponent %s outside the cone of S" % d.par.label(s))
    return frozenset(i for i, x in enumerate(c) if x)


def kept_components(d, roots, I) -> list:
    I = frozenset(I)
    out = []
    for k, e in enumerate(d.T):
        for beta in e.components:
            if exponent_support(d, roots, e.alpha, beta) <= I:
                out.append((k, beta))
    return out


def degeneration(d: SphericalDatum, roots: SphericalRoots, I) -> Degeneration:
    I = frozenset(I)
    if not I <= frozenset(range(len(roots.S))):
        raise SpecError("I is not a subset of S")
    g = d.g
    keep = set(kept_components(d, roots, I))
    vecs = list(d.l_cap_h.basis)
    for k, e in enumerate(d.T):
        v = list(e.x_minus)
        for beta, c in e.components.items():
            if (k, beta) in keep:
                v = [a + b for a, b in zip(v, c)]
        vecs.append(tuple(v))
    hI = Subspace(g, vecs)
    aI = face_space(d, roots, I)
    checks = {
        "subalgebra": hI.is_subalgebra(),
        "dim_equal": hI.dim == d.h.dim,
        "l_cap_h_equal": (d.levi.l & hI) == d.l_cap_h,
        "a_cap_h_equal": (d.par.a & hI) == d.aH,
        "aI_normalizes": all(hI.contains_coords(g.bracket_coords(x, y)) for x in aI.basis for y in hI.basis),
    }
    if not all(checks.values()):
        raise InconsistencyError("degeneration %s fails: %s" % (sorted(I), checks))
    return Degeneration(I, hI, aI, sorted(keep, key=lambda t: (t[0], t[1])), checks)


def degeneration_transitivity(d, roots, I, J) -> bool:
    """(h_I)_J = h_J for J inside I, as component selections and as spaces."""
    I, J = frozenset(I), frozenset(J)
    if not J <= I:
        raise SpecError("J must be a subset of I")
    kI = set(kept_components(d, roots, I))
    kJ = set(kept_components(d, roots, J))
    # degenerating T_I by J keeps the components of T_I with support in J
    kIJ = {(k, b) for (k, b) in kI if exponent_support(d, roots, d.T[k].alpha, b) <= J}
    return kIJ == kJ and kJ <= kI and degeneration(d, roots, J).hI == _hI_from(d, kIJ)


def _hI_from(d, keep) -> Subspace:
    vecs = list(d.l_cap_h.basis)
    for k, e in enumerate(d.T):
        v = list(e.x_minus)
        for beta, c in e.components.items():
            if (k, beta) in keep:
                v = [a + b for a, b in zip(v, c)]
        vecs.append(tuple(v))
    return Subspace(d.g, vecs)


# ------------------------------------------------------------ contraction

@dataclass
class ContractionReport:
    I: frozenset
    X: tuple
    epsilon: Fraction | None
    grid: list
    distances: list
    fitted_rate: float | None
    monotone: bool
    ok: bool
    detail: str = ""

    def distance_at(self, t) -> float:
        return self.distances[self.grid.index(t)]


def interior_direction(d: SphericalDatum, roots: SphericalRoots, I, scale=2) -> tuple:
    """X in a_Z with sigma(X) = 0 on I and sigma(X) = -scale off I (no edge part)."""
    aZb = d.aZ.basis
    rows = [[d.par.evaluate(s, v) for v in aZb] for s in roots.S]
    rhs = [ZERO if i in I else Fraction(-scale) for i in range(len(roots.S))]
    edge_rows = []
    for v in roots.edge.basis:
        # kappa-orthogonal to the edge, so the choice is canonical
        edge_rows.append([sum((v[i] * d.g.form[i][j] * w[j] for i in range(d.g.dim) for j in range(d.g.dim) if v[i] and w[j]), ZERO) for w in aZb])
    c = la.solve(rows + edge_rows, rhs + [ZERO] * len(edge_rows)) if rows else tuple(ZERO for _ in aZb)
    return _lincomb(c, aZb, d.g.dim)


def _mp_orth(vectors):
    """Orthonormal basis (columns) of the span of the given mp vectors."""
    A = mpmath.matrix(vectors).T if vectors else None
    Q, R = mpmath.qr(A)
    k = len(vectors)
    return Q[:, :k]


def _gap(V, W) -> mpmath.mpf:
    """Spectral norm of P_V - P_W for orthonormal V, W of equal dimension.

    For equal dimensions this equals the norm of (I - W W^T) V, which is
    much cheaper than an SVD of the full projector difference.
    """
    R = V - W * (W.T * V)
    s = mpmath.svd_r(R, compute_uv=False)
    return max(abs(x) for x in s)


def contraction_limit_check(d: SphericalDatum, roots: SphericalRoots, I, X=None,
                            t_grid=None, dps: int = 60, tol: float = 1e-9,
                            rate_tol: float = 0.1) -> ContractionReport:
    """Compare e^{t ad X} h with h_I along a grid of t (high precision)."""
    I = frozenset(I)
    par, g = d.par, d.g
    if X is None:
        X = interior_direction(d, roots, I)
    if not d.aZ.contains_coords(X):
        raise SpecError("X is not in a_Z")
    for i, s in enumerate(roots.S):
        v = par.evaluate(s, X)
        if (i in I and v != 0) or (i not in I and v >= 0):
            raise SpecError("X is not in the interior of the face a_I^-")
    t_grid = list(t_grid) if t_grid is not None else list(range(1, 26))
    hI = degeneration(d, roots, I).hI
    # exponents of dropped components
    kept = set(kept_components(d, roots, I))
    dropped = []
    for k, e in enumerate(d.T):
        for beta in e.components:
            if (k, beta) not in kept:
                dropped.append(-par.evaluate(tuple(a + b for a, b in zip(e.alpha, beta)), X))
    eps = min(dropped) if dropped else None
    # flatten to matrix entries so the metric is the Frobenius one
    flat = lambda v: [mpmath.mpf(x.numerator) / x.denominator for x in g.element(v).flat()]
    rsd = par.rsd
    weights = [(tuple(ZERO for _ in par.a.basis), rsd.zero_space)] + list(rsd.root_spaces.items())
    with mpmath.workdps(dps):
        Wmat = _mp_orth([flat(v) for v in hI.basis])
        fixed = [flat(v) for v in d.l_cap_h.basis]
        # weight decomposition of each graph vector, independent of t
        terms = []
        for e in d.T:
            aX = par.evaluate(e.alpha, X)
            parts = [(tuple(-x for x in e.alpha), e.x_minus)] + list(e.components.items())
            pieces = {}
            for beta, c in parts:
                # the l part may mix weights, so split every part
                for w, V in weights:
                    comp = rsd.component(c, w)
                    if any(comp):
                        expo = par.evaluate(w, X) + aX
                        prev = pieces.get(expo)
                        fc = flat(comp)
                        pieces[expo] = fc if prev is None else [a + b for a, b in zip(prev, fc)]
            terms.append([(mpmath.mpf(x.numerator) / x.denominator, v) for x, v in sorted(pieces.items())])
        dists = []
        for t in t_grid:
            vecs = list(fixed)
            for pieces in terms:
                acc = [mpmath.mpf(0)] * (g.n * g.n)
                for expo, fc in pieces:
                    f = mpmath.exp(expo * t)
                    acc = [a + f * b for a, b in zip(acc, fc)]
                vecs.append(acc)
            Vmat = _mp_orth(vecs)
            dists.append(float(_gap(Vmat, Wmat)))
    fitted = None
    monotone = all(b <= a * (1 + 1e-12) + 1e-300 for a, b in zip(dists, dists[1:]))
    ok = monotone
    detail = ""
    if eps is None:
        ok = ok and max(dists) < 1e-40
        detail = "I = S: distance identically zero"
    else:
        pts = [(t, math.log(dd)) for t, dd in zip(t_grid, dists) if 5 <= t <= 25 and dd > 0]
        if len(pts) >= 2:
            n = len(pts)
            mt = sum(p[0] for p in pts) / n
            ml = sum(p[1] for p in pts) / n
            fitted = -sum((p[0] - mt) * (p[1] - ml) for p in pts) / sum((p[0] - mt) ** 2 for p in pts)
            ok = ok and abs(fitted - float(eps)) <= rate_tol * float(eps)
        if 20 in t_grid:
            ok = ok and dists[t_grid.index(20)] < tol
        detail = "predicted rate %s" % la.fmt(eps)
    return ContractionReport(I, tuple(X), eps, t_grid, dists, fitted, monotone, ok, detail)


# ------------------------------------------------------------ invariants

def inertia(G) -> tuple:
    """(n_plus, n_minus, n_zero) of a symmetric rational matrix.

    The characteristic polynomial is real rooted, so Descartes' rule of
    signs counts the positive roots exactly.
    """
    n = len(G)
    if n == 0:
        return (0, 0, 0)
    c = la.charpoly([list(r) for r in G])          # leading first
    zero = 0
    while c and c[-1] == 0:
        c = c[:-1]
        zero += 1

    def changes(seq):
        s = [x for x in seq if x != 0]
        return sum(1 for a, b in zip(s, s[1:]) if (a > 0) != (b > 0))
    pos = changes(c)
    neg = changes([x * (-1) ** (len(c) - 1 - i) for i, x in enumerate(c)])
    if pos + neg + zero != n:
        raise InconsistencyError("inertia count does not add up")
    return (pos, neg, zero)


def levi_signature(d: SphericalDatum, roots: SphericalRoots, I) -> tuple:
    """Inertia of the invariant form on h_I cap l_I, l_I = z_g(a_I)."""
    D = degeneration(d, roots, I)
    lI = centralizer(d.g, D.aI)
    V = D.hI & lI
    G = [[d.g.kappa_coords(u, v) for v in V.basis] for u in V.basis]
    return inertia(G)
