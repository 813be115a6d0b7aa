"""Exact rational linear algebra.

Thin layer over sympy's ``DomainMatrix`` over QQ.  Everything that leaves
this module is a ``Fraction`` so callers never see gmpy2 or sympy types.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from sympy import QQ, Poly, Symbol
from sympy.polys.matrices import DomainMatrix

Vector = tuple  # tuple[Fraction, ...]


def frac(x) -> Fraction:
    """Coerce ints, strings like ``"3/4"``, floats given as exact strings,
    sympy/gmpy rationals and Fractions to ``Fraction``."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not accepted in exact arithmetic: %r" % x)
    num = getattr(x, "numerator", None)
    den = getattr(x, "denominator", None)
    if num is not None and den is not None:
        n = num() if callable(num) else num
        d = den() if callable(den) else den
        return Fraction(int(n), int(d))
    if hasattr(x, "p") and hasattr(x, "q"):
        return Fraction(int(x.p), int(x.q))
    raise TypeError("cannot convert %r to Fraction" % (x,))


def fmt(q: Fraction) -> str:
    q = frac(q)
    return str(q.numerator) if q.denominator == 1 else "%d/%d" % (q.numerator, q.denominator)


def _to_dm(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> DomainMatrix:
    rows = [list(r) for r in rows]
    m = len(rows)
    n = len(rows[0]) if rows else (ncols or 0)
    data = [[QQ(int(frac(x).numerator), int(frac(x).denominator)) for x in r] for r in rows]
    return DomainMatrix(data, (m, n), QQ)


def _from_dm(M: DomainMatrix) -> list[list[Fraction]]:
    return [[frac(x) for x in row] for row in M.to_list()]


def rref(rows: Sequence[Sequence[Fraction]], ncols: int | None = None):
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    if not rows:
        return [], ()
    R, piv = _to_dm(rows, ncols).rref()
    out = _from_dm(R)[: len(piv)]
    return [tuple(r) for r in out], tuple(piv)


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    if not rows or not rows[0]:
        return 0
    return _to_dm(rows).rank()


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[Vector]:
    """Basis (in RREF) of {x : A x = 0} for A given by ``rows``."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    N = _to_dm(rows, ncols).nullspace()
    vecs = _from_dm(N) if N.shape[0] else []
    if not vecs:
        return []
    basis, _ = rref(vecs)
    return basis


def solve(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]):
    """One solution of A x = b, or None when inconsistent."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    aug = [list(rows[i]) + [frac(rhs[i])] for i in range(m)]
    R, piv = rref(aug)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for r, p in zip(R, piv):
        x[p] = r[n]
    return tuple(x)


def matmul(A, B):
    return [[sum((A[i][k] * B[k][j] for k in range(len(B))), Fraction(0))
             for j in range(len(B[0]))] for i in range(len(A))]


def charpoly(rows: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    """Coefficients of det(tI - A), leading coefficient first."""
    return [frac(c) for c in _to_dm(rows).charpoly()]


def to_poly(coeffs: Sequence[Fraction], var: str = "t") -> Poly:
    return Poly([QQ(c.numerator, c.denominator) for c in coeffs], Symbol(var), domain=QQ)


def inverse(rows):
    return _from_dm(_to_dm(rows).inv())


def det(rows) -> Fraction:
    return frac(_to_dm(rows).det())


def span_basis(vectors: Iterable[Sequence[Fraction]], ncols: int) -> tuple:
    """Canonical basis (RREF rows) of the span of ``vectors``."""
    vecs = [tuple(frac(x) for x in v) for v in vectors]
    vecs = [v for v in vecs if any(v)]
    if not vecs:
        return ()
    basis, _ = rref(vecs, ncols)
    return tuple(basis)


def in_span(basis: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> bool:
    if not any(v):
        return True
    if not basis:
        return False
    return rank(list(basis) + [list(v)]) == len(basis)


def intersect(A: Sequence[Vector], B: Sequence[Vector], ncols: int) -> tuple:
    """Intersection of two spans, as a canonical basis."""
    if not A or not B:
        return ()
    # solve sum a_i A_i = sum b_j B_j
    cols = list(A) + [tuple(-x for x in b) for b in B]
    M = [[cols[j][i] for j in range(len(cols))] for i in range(ncols)]
    ker = nullspace(M, len(cols))
    vecs = []
    for k in ker:
        vecs.append(tuple(sum((k[j] * A[j][i] for j in range(len(A))), Fraction(0)) for i in range(ncols)))
    return span_basis(vecs, ncols)


@dataclass(frozen=True)
class RationalMatrix:
    """Dense matrix with ``Fraction`` entries; immutable."""

    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(frac(x) for x in r) for r in self.entries)
        if not rows or any(len(r) != len(rows[0]) for r in rows) or not rows[0]:
            raise ValueError("ragged or empty matrix")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def of(cls, rows) -> "RationalMatrix":
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def zeros(cls, n: int, m: int | None = None) -> "RationalMatrix":
        return cls(tuple(tuple(Fraction(0) for _ in range(m or n)) for _ in range(n)))

    @classmethod
    def unit(cls, n: int, i: int, j: int) -> "RationalMatrix":
        return cls(tuple(tuple(Fraction(int(r == i and c == j)) for c in range(n)) for r in range(n)))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(tuple(tuple(Fraction(int(r == c)) for c in range(n)) for r in range(n)))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def _check(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch: %dx%d vs %dx%d" % (self.rows, self.cols, other.rows, other.cols))

    def __add__(self, other):
        self._check(other)
        return RationalMatrix(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)))

    def __sub__(self, other):
        self._check(other)
        return RationalMatrix(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)))

    def __neg__(self):
        return RationalMatrix(tuple(tuple(-a for a in r) for r in self.entries))

    def scale(self, c) -> "RationalMatrix":
        c = frac(c)
        return RationalMatrix(tuple(tuple(c * a for a in r) for r in self.entries))

    def __rmul__(self, c):
        return self.scale(c)

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError("dimension mismatch for product")
        return RationalMatrix(tuple(map(tuple, matmul(self.entries, other.entries))))

    def T(self) -> "RationalMatrix":
        return RationalMatrix(tuple(zip(*self.entries)))

    def trace(self) -> Fraction:
        return sum((self.entries[i][i] for i in range(min(self.rows, self.cols))), Fraction(0))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    def flat(self) -> tuple:
        return tuple(x for r in self.entries for x in r)

    def to_float(self):
        import numpy as np
        return np.array([[float(x) for x in r] for r in self.entries])

    def to_json(self):
        return [[fmt(x) for x in r] for r in self.entries]

    def __repr__(self):
        return "RationalMatrix(%s)" % self.to_json()


def block(blocks) -> RationalMatrix:
    """Assemble a matrix from a grid of blocks (lists of lists or RationalMatrix)."""
    rows = []
    for brow in blocks:
        mats = [b.entries if isinstance(b, RationalMatrix) else [[frac(x) for x in r] for r in b] for b in brow]
        for i in range(len(mats[0])):
            rows.append([x for m in mats for x in m[i]])
    return RationalMatrix.of(rows)
