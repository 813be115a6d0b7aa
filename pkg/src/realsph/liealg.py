"""Exact rational matrix Lie algebras.

Elements are ``RationalMatrix`` instances; subspaces are stored in
coordinates relative to the algebra basis and canonicalised by RREF, so
two ``Subspace`` objects are equal iff they span the same space.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np
from sympy import QQ, Symbol

from . import linalg as la
from .errors import InconsistencyError, SpecError
from .linalg import RationalMatrix, frac

ZERO = Fraction(0)


def bracket(X: RationalMatrix, Y: RationalMatrix) -> RationalMatrix:
    if (X.rows, X.cols) != (Y.rows, Y.cols) or X.rows != X.cols:
        raise ValueError("dimension mismatch in bracket")
    return X @ Y - Y @ X


class MatrixLieAlgebra:
    """A Lie algebra of n x n rational matrices with an invariant form.

    ``form`` is the Gram matrix of kappa in the given basis; by default the
    trace form tr(XY) of the defining representation.
    """

    def __init__(self, basis: Sequence[RationalMatrix], form=None, name: str = "g"):
        if not basis:
            raise SpecError("empty basis")
        self.n = basis[0].rows
        self.basis = tuple(basis)
        self.name = name
        flat = [b.flat() for b in self.basis]
        R, piv = la.rref(flat)
        if len(piv) != len(flat):
            raise SpecError("basis of %s is linearly dependent" % name)
        self._piv = piv
        # coordinates are read off the pivot entries
        sub = [[f[p] for p in piv] for f in flat]
        self._coord_inv = la.inverse([list(r) for r in zip(*sub)])
        if form is None:
            form = [[(a @ b).trace() for b in self.basis] for a in self.basis]
            self.form_kind = "trace"
        else:
            self.form_kind = "supplied"
        self.form = tuple(tuple(frac(x) for x in r) for r in form)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords(self, X: RationalMatrix) -> tuple:
        f = X.flat()
        rhs = [f[p] for p in self._piv]
        c = tuple(sum((self._coord_inv[i][j] * rhs[j] for j in range(len(rhs))), ZERO) for i in range(self.dim))
        if self.element(c).flat() != f:
            raise SpecError("element not in the span of the basis of %s" % self.name)
        return c

    def contains(self, X: RationalMatrix) -> bool:
        try:
            self.coords(X)
            return True
        except SpecError:
            return False

    def element(self, c: Sequence) -> RationalMatrix:
        n = self.n
        out = [[ZERO] * n for _ in range(n)]
        for ci, b in zip(c, self.basis):
            ci = frac(ci)
            if ci:
                for i in range(n):
                    for j in range(n):
                        if b.entries[i][j]:
                            out[i][j] += ci * b.entries[i][j]
        return RationalMatrix.of(out)

    @cached_property
    def structure_constants(self):
        """c[i][j] = coordinates of [b_i, b_j]."""
        d = self.dim
        c = [[None] * d for _ in range(d)]
        for i in range(d):
            for j in range(d):
                if j < i:
                    c[i][j] = tuple(-x for x in c[j][i])
                else:
                    c[i][j] = self.coords(bracket(self.basis[i], self.basis[j]))
        return c

    def bracket_coords(self, x: Sequence, y: Sequence) -> tuple:
        sc = self.structure_constants
        d = self.dim
        out = [ZERO] * d
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                s = xi * yj
                for k, v in enumerate(sc[i][j]):
                    if v:
                        out[k] += s * v
        return tuple(out)

    def ad_coords(self, x: Sequence) -> list:
        """Matrix of ad(x) in the basis (columns are images of basis vectors)."""
        d = self.dim
        cols = [self.bracket_coords(x, tuple(Fraction(int(i == j)) for i in range(d))) for j in range(d)]
        return [[cols[j][i] for j in range(d)] for i in range(d)]

    def ad(self, X: RationalMatrix) -> list:
        return self.ad_coords(self.coords(X))

    def kappa_coords(self, x, y) -> Fraction:
        return sum((x[i] * self.form[i][j] * y[j] for i in range(self.dim) for j in range(self.dim) if x[i] and y[j]), ZERO)

    def kappa(self, X: RationalMatrix, Y: RationalMatrix) -> Fraction:
        return self.kappa_coords(self.coords(X), self.coords(Y))

    def validate(self) -> None:
        """Check closure, Jacobi, symmetry, nondegeneracy and invariance."""
        sc = self.structure_constants  # raises on non-closure
        d = self.dim
        F = self.form
        if any(F[i][j] != F[j][i] for i in range(d) for j in range(d)):
            raise InconsistencyError("form is not symmetric")
        if la.rank([list(r) for r in F]) != d:
            raise InconsistencyError("form is degenerate")
        for i, j, k in itertools.product(range(d), repeat=3):
            # kappa([b_i, b_j], b_k) + kappa(b_j, [b_i, b_k]) = 0
            e = lambda m: tuple(Fraction(int(t == m)) for t in range(d))
            if self.kappa_coords(sc[i][j], e(k)) + self.kappa_coords(e(j), sc[i][k]) != 0:
                raise InconsistencyError("form is not ad-invariant")
        for i, j, k in itertools.combinations(range(d), 3):
            e = lambda m: tuple(Fraction(int(t == m)) for t in range(d))
            s = [a + b + c for a, b, c in zip(self.bracket_coords(e(i), sc[j][k]),
                                              self.bracket_coords(e(j), sc[k][i]),
                                              self.bracket_coords(e(k), sc[i][j]))]
            if any(s):
                raise InconsistencyError("Jacobi identity fails")

    def subspace(self, mats: Sequence[RationalMatrix]) -> "Subspace":
        return Subspace(self, [self.coords(m) for m in mats])

    def whole(self) -> "Subspace":
        return Subspace(self, [tuple(Fraction(int(i == j)) for j in range(self.dim)) for i in range(self.dim)])

    def zero(self) -> "Subspace":
        return Subspace(self, [])

    def __repr__(self):
        return "MatrixLieAlgebra(%s, dim=%d, n=%d)" % (self.name, self.dim, self.n)


class Subspace:
    """Subspace of a ``MatrixLieAlgebra`` given by coordinate vectors."""

    def __init__(self, ambient: MatrixLieAlgebra, vectors):
        self.ambient = ambient
        self.basis = la.span_basis(vectors, ambient.dim)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __eq__(self, other):
        return isinstance(other, Subspace) and other.ambient is self.ambient and other.basis == self.basis

    def __hash__(self):
        return hash(self.basis)

    def matrices(self) -> list:
        return [self.ambient.element(v) for v in self.basis]

    def contains_coords(self, v) -> bool:
        return la.in_span(self.basis, v)

    def contains(self, X: RationalMatrix) -> bool:
        return self.contains_coords(self.ambient.coords(X))

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.ambient, list(self.basis) + list(other.basis))

    def __and__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.ambient, la.intersect(self.basis, other.basis, self.ambient.dim))

    def le(self, other: "Subspace") -> bool:
        return all(other.contains_coords(v) for v in self.basis)

    def is_subalgebra(self) -> bool:
        g = self.ambient
        return all(self.contains_coords(g.bracket_coords(x, y))
                   for x, y in itertools.combinations(self.basis, 2))

    def to_json(self):
        return [[la.fmt(x) for x in v] for v in self.basis]

    def __repr__(self):
        return "Subspace(dim=%d of %s)" % (self.dim, self.ambient.name)


def orthogonal_complement(g: MatrixLieAlgebra, V: Subspace) -> Subspace:
    rows = [[sum((v[i] * g.form[i][j] for i in range(g.dim) if v[i]), ZERO) for j in range(g.dim)] for v in V.basis]
    W = Subspace(g, la.nullspace(rows, g.dim))
    assert W.dim + V.dim == g.dim
    return W


def invariant_form(g: MatrixLieAlgebra, X: RationalMatrix, Y: RationalMatrix) -> Fraction:
    return g.kappa(X, Y)


def centralizer(g: MatrixLieAlgebra, V: Subspace, within: Subspace | None = None) -> Subspace:
    """{Y in within : [Y, v] = 0 for v in V}."""
    W = within if within is not None else g.whole()
    if not W.dim:
        return W
    rows = []
    for v in V.basis:
        imgs = [g.bracket_coords(v, w) for w in W.basis]
        rows.extend([[imgs[j][i] for j in range(W.dim)] for i in range(g.dim)])
    ker = la.nullspace(rows, W.dim) if rows else la.nullspace([], W.dim)
    vecs = [tuple(sum((k[j] * W.basis[j][i] for j in range(W.dim)), ZERO) for i in range(g.dim)) for k in ker]
    return Subspace(g, vecs)


def bracket_space(g: MatrixLieAlgebra, V: Subspace, W: Subspace) -> Subspace:
    return Subspace(g, [g.bracket_coords(v, w) for v in V.basis for w in W.basis])


# ---------------------------------------------------------------- roots

@dataclass(frozen=True)
class RootSpaceDecomposition:
    """Simultaneous eigenspaces of ad(a).

    Roots are tuples of their values on ``a_basis`` (coordinate vectors).
    """

    cartan_split: Subspace
    zero_space: Subspace
    root_spaces: Mapping[tuple, Subspace]
    a_basis: tuple

    @property
    def roots(self) -> list:
        return sorted(self.root_spaces)

    def root_of(self, x) -> tuple | None:
        """Root (or the zero functional) whose space contains x, else None."""
        for r, V in self.root_spaces.items():
            if V.contains_coords(x):
                return r
        if self.zero_space.contains_coords(x):
            return tuple(ZERO for _ in self.a_basis)
        return None

    def component(self, x, root) -> tuple:
        """Projection of x onto the given root space along the others."""
        return self._projections[root](x)

    @cached_property
    def _projections(self):
        g = self.zero_space.ambient
        pieces = [(tuple(ZERO for _ in self.a_basis), self.zero_space)] + list(self.root_spaces.items())
        cols = []
        owner = []
        for r, V in pieces:
            for v in V.basis:
                cols.append(v)
                owner.append(r)
        M = [[cols[j][i] for j in range(len(cols))] for i in range(g.dim)]
        Minv = la.inverse(M)

        def make(root):
            idx = [j for j, o in enumerate(owner) if o == root]

            def proj(x):
                c = [sum((Minv[j][i] * x[i] for i in range(g.dim) if x[i]), ZERO) for j in idx]
                return tuple(sum((c[t] * cols[idx[t]][i] for t in range(len(idx))), ZERO) for i in range(g.dim))
            return proj
        return {r: make(r) for r, _ in pieces}


def _rational_eigenvalues(M) -> list:
    p = la.to_poly(la.charpoly(M))
    vals = []
    for fac, mult in p.factor_list()[1]:
        if fac.degree() == 1:
            a, b = fac.all_coeffs()
            vals.append(-la.frac(b) / la.frac(a))
    return vals


def root_space_decomposition(g: MatrixLieAlgebra, a: Subspace) -> RootSpaceDecomposition:
    """Simultaneous eigenspace decomposition of ad(a) over QQ."""
    if not a.is_subalgebra() or any(any(g.bracket_coords(x, y)) for x, y in itertools.combinations(a.basis, 2)):
        raise SpecError("a is not abelian")
    pieces = {(): g.whole()}
    for x in a.basis:
        A = g.ad_coords(x)
        new = {}
        eig = _rational_eigenvalues(A)
        total = 0
        for lam in eig:
            B = [[A[i][j] - (lam if i == j else ZERO) for j in range(g.dim)] for i in range(g.dim)]
            E = Subspace(g, la.nullspace(B, g.dim))
            total += E.dim
            for key, V in pieces.items():
                W = V & E
                if W.dim:
                    new[key + (lam,)] = W
        if total != g.dim:
            raise SpecError("ad(%s) is not diagonalizable over QQ" % g.element(x))
        pieces = new
    zero = tuple(ZERO for _ in a.basis)
    zero_space = pieces.pop(zero, g.zero())
    if sum(V.dim for V in pieces.values()) + zero_space.dim != g.dim:
        raise InconsistencyError("root spaces do not sum to g")
    for r in pieces:
        if tuple(-x for x in r) not in pieces:
            raise InconsistencyError("root %s without its negative" % (r,))
    return RootSpaceDecomposition(a, zero_space, pieces, a.basis)


# ------------------------------------------------------- spectral tests

def _ad_charpoly(g: MatrixLieAlgebra, X: RationalMatrix):
    return la.to_poly(la.charpoly(g.ad(X)))


def is_semisimple_element(g: MatrixLieAlgebra, X: RationalMatrix) -> bool:
    """True iff the minimal polynomial of ad X is squarefree."""
    A = g.ad(X)
    q = _ad_charpoly(g, X).sqf_part()
    # evaluate q(A) by Horner
    d = g.dim
    R = [[ZERO] * d for _ in range(d)]
    for c in q.all_coeffs():
        R = la.matmul(R, A)
        c = la.frac(c)
        for i in range(d):
            R[i][i] += c
    return all(x == 0 for r in R for x in r)


class SpectrumKind(enum.Enum):
    REAL = "REAL"
    IMAGINARY = "IMAGINARY"
    MIXED = "MIXED"


@dataclass(frozen=True)
class SpectrumCertificate:
    kind: SpectrumKind
    certified: bool
    path: str  # "exact" or "numeric"
    charpoly: tuple = ()
    detail: str = ""

    def to_json(self):
        return {"kind": self.kind.value, "certified": self.certified, "path": self.path,
                "charpoly": [la.fmt(c) for c in self.charpoly], "detail": self.detail}


def _exact_spectrum(coeffs) -> tuple[SpectrumKind, str]:
    t = Symbol("t")
    p = la.to_poly(coeffs)
    k = 0
    while p.degree() > 0 and p.eval(0) == 0:
        p = p.quo(la.to_poly([Fraction(1), Fraction(0)]))
        k += 1
    if p.degree() == 0:
        return SpectrumKind.IMAGINARY, "ad X nilpotent"
    cs = p.all_coeffs()  # leading first
    deg = p.degree()
    even = all(c == 0 for i, c in enumerate(cs) if (deg - i) % 2 == 1)
    if even:
        # p(t) = r(t^2); imaginary nonzero roots <=> r has only negative real roots
        r = la.to_poly([la.frac(c) for i, c in enumerate(cs) if (deg - i) % 2 == 0], "u")
        s = r.sqf_part()
        neg = s.count_roots(None, 0) - (1 if s.eval(0) == 0 else 0)
        if neg == s.degree():
            return SpectrumKind.IMAGINARY, "p = t^%d r(t^2), r has %d distinct negative roots" % (k, s.degree())
    s = la.to_poly([la.frac(c) for c in coeffs]).sqf_part()
    if s.count_roots() == s.degree():
        return SpectrumKind.REAL, "all %d distinct roots real (Sturm)" % s.degree()
    return SpectrumKind.MIXED, "non-real roots off the imaginary axis"


def spectrum_type(g: MatrixLieAlgebra, X: RationalMatrix, tol: float = 1e-9, exact: bool = True) -> SpectrumCertificate:
    """Classify the spectrum of ad X as real, imaginary or mixed."""
    A = g.ad(X)
    coeffs = tuple(la.charpoly(A))
    if exact:
        try:
            kind, detail = _exact_spectrum(coeffs)
            return SpectrumCertificate(kind, True, "exact", coeffs, detail)
        except Exception as exc:  # pragma: no cover - defensive
            detail = "exact path failed: %s" % exc
    else:
        detail = "numeric path requested"
    ev = np.linalg.eigvals(np.array([[float(x) for x in r] for r in A]))
    if np.all(np.abs(ev.real) < tol):
        kind = SpectrumKind.IMAGINARY
    elif np.all(np.abs(ev.imag) < tol):
        kind = SpectrumKind.REAL
    else:
        kind = SpectrumKind.MIXED
    return SpectrumCertificate(kind, False, "numeric", coeffs, detail)


# ------------------------------------------------------- constructors

def _mat(n, entries: Mapping) -> RationalMatrix:
    rows = [[ZERO] * n for _ in range(n)]
    for (i, j), v in entries.items():
        rows[i][j] = frac(v)
    return RationalMatrix.of(rows)


def sl(n: int) -> MatrixLieAlgebra:
    basis = [RationalMatrix.unit(n, i, i) - RationalMatrix.unit(n, i + 1, i + 1) for i in range(n - 1)]
    basis += [RationalMatrix.unit(n, i, j) for i in range(n) for j in range(n) if i != j]
    return MatrixLieAlgebra(basis, name="sl(%d)" % n)


def gl(n: int) -> MatrixLieAlgebra:
    return MatrixLieAlgebra([RationalMatrix.unit(n, i, j) for i in range(n) for j in range(n)], name="gl(%d)" % n)


def preserving(J: RationalMatrix, within: MatrixLieAlgebra | None = None, name: str = "so(J)") -> MatrixLieAlgebra:
    """{X : X J + J X^T = 0} (inside ``within`` if given, else gl(n))."""
    n = J.rows
    amb = within if within is not None else gl(n)
    rows = []
    imgs = [(b @ J + J @ b.T()).flat() for b in amb.basis]
    rows = [[imgs[k][e] for k in range(amb.dim)] for e in range(n * n)]
    ker = la.nullspace(rows, amb.dim)
    return MatrixLieAlgebra([amb.element(v) for v in ker], name=name)


def so(p: int, q: int) -> MatrixLieAlgebra:
    n = p + q
    J = _mat(n, {(i, i): (1 if i < p else -1) for i in range(n)})
    return preserving(J, name="so(%d,%d)" % (p, q))


def standard_symplectic(n: int) -> RationalMatrix:
    """[[0, -I], [I, 0]] of size 2n."""
    e = {}
    for i in range(n):
        e[(i, n + i)] = -1
        e[(n + i, i)] = 1
    return _mat(2 * n, e)


def sp(n2: int, ambient: int | None = None) -> MatrixLieAlgebra:
    """sp(2n) preserving [[0,-I],[I,0]], placed in the upper left corner
    of ambient x ambient matrices when ``ambient`` is given."""
    n = n2 // 2
    J = standard_symplectic(n)
    base = preserving(J, name="sp(%d)" % n2)
    if ambient is None or ambient == n2:
        return base
    pad = []
    for b in base.basis:
        rows = [[ZERO] * ambient for _ in range(ambient)]
        for i in range(n2):
            for j in range(n2):
                rows[i][j] = b.entries[i][j]
        pad.append(RationalMatrix.of(rows))
    return MatrixLieAlgebra(pad, name="sp(%d) in gl(%d)" % (n2, ambient))


def direct_sum(g1: MatrixLieAlgebra, g2: MatrixLieAlgebra) -> MatrixLieAlgebra:
    """Block-diagonal direct sum; the form is the sum of the two forms."""
    n1, n2 = g1.n, g2.n
    basis = [la.block([[b, RationalMatrix.zeros(n1, n2)], [RationalMatrix.zeros(n2, n1), RationalMatrix.zeros(n2)]]) for b in g1.basis]
    basis += [la.block([[RationalMatrix.zeros(n1), RationalMatrix.zeros(n1, n2)], [RationalMatrix.zeros(n2, n1), b]]) for b in g2.basis]
    return MatrixLieAlgebra(basis, name="%s+%s" % (g1.name, g2.name))


def sl2_triple():
    e = _mat(2, {(0, 1): 1})
    f = _mat(2, {(1, 0): 1})
    h = _mat(2, {(0, 0): 1, (1, 1): -1})
    return e, f, h
