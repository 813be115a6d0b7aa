"""Elliptic elements of h-perp and the discrete-series criterion."""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import linalg as la
from .errors import InconsistencyError, SpecError
from .liealg import (MatrixLieAlgebra, SpectrumKind, Subspace, bracket, centralizer,
                     is_semisimple_element, orthogonal_complement, preserving, sl,
                     sp, spectrum_type)
from .linalg import RationalMatrix

ZERO = Fraction(0)


class ElementClass(enum.Enum):
    ELLIPTIC = "ELLIPTIC"
    WEAKLY_ELLIPTIC = "WEAKLY_ELLIPTIC"
    SEMISIMPLE_NONELLIPTIC = "SEMISIMPLE_NONELLIPTIC"
    OTHER = "OTHER"


class Verdict(enum.Enum):
    SATISFIED = "SATISFIED"
    EMPTY_INTERIOR = "EMPTY_INTERIOR"
    INCONCLUSIVE = "INCONCLUSIVE"


def hperp(g: MatrixLieAlgebra, h: Subspace) -> Subspace:
    return orthogonal_complement(g, h)


def classify_element(g: MatrixLieAlgebra, X: RationalMatrix) -> ElementClass:
    ss = is_semisimple_element(g, X)
    imag = spectrum_type(g, X).kind is SpectrumKind.IMAGINARY
    if imag:
        return ElementClass.ELLIPTIC if ss else ElementClass.WEAKLY_ELLIPTIC
    return ElementClass.SEMISIMPLE_NONELLIPTIC if ss else ElementClass.OTHER


def weakly_elliptic(g: MatrixLieAlgebra, X: RationalMatrix) -> bool:
    return spectrum_type(g, X).kind is SpectrumKind.IMAGINARY


def killing_gram(g: MatrixLieAlgebra, V: Subspace) -> list:
    ads = [g.ad_coords(v) for v in V.basis]
    return [[sum((A[i][k] * B[k][i] for i in range(g.dim) for k in range(g.dim) if A[i][k] and B[k][i]), ZERO)
             for B in ads] for A in ads]


def is_psd(G) -> bool:
    """Exact positive semidefiniteness via all principal minors."""
    import itertools
    n = len(G)
    for k in range(1, n + 1):
        for idx in itertools.combinations(range(n), k):
            if la.det([[G[i][j] for j in idx] for i in idx]) < 0:
                return False
    return True


@dataclass
class EllipticReport:
    hperp_dim: int
    witness: RationalMatrix | None
    witness_class: ElementClass | None
    interior_evidence: list
    verdict: Verdict
    seed: int
    certificate: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "hperp_dim": self.hperp_dim,
            "witness": self.witness.to_json() if self.witness is not None else None,
            "witness_class": self.witness_class.value if self.witness_class else None,
            "samples": len(self.interior_evidence),
            "samples_weakly_elliptic": sum(1 for _, ok in self.interior_evidence if ok),
            "verdict": self.verdict.value,
            "seed": self.seed,
            "certificate": self.certificate,
        }


def _random_rational(rng: random.Random, radius: Fraction, den: int) -> Fraction:
    q = rng.randint(1, den)
    p = rng.randint(-int(radius * q), int(radius * q))
    return Fraction(p, q)


def _poly_at(coeffs, A) -> list:
    d = len(A)
    R = [[ZERO] * d for _ in range(d)]
    for c in coeffs:
        R = la.matmul(R, A)
        for i in range(d):
            R[i][i] += c
    return R


def _definite(G) -> bool:
    n = len(G)
    lead = [la.det([[G[i][j] for j in range(k)] for i in range(k)]) for k in range(1, n + 1)]
    pos = all(x > 0 for x in lead)
    neg = all((x < 0) if k % 2 == 0 else (x > 0) for k, x in enumerate(lead))
    return pos or neg


def stability_certificate(g: MatrixLieAlgebra, X: RationalMatrix) -> dict | None:
    """Exact certificate that every element near X is weakly elliptic.

    ad X is skew for the invariant form.  Split g by the rational irreducible
    factors p of the characteristic polynomial of ad X.  If ad X is semisimple
    with imaginary spectrum and the form is definite on every ker p(ad X),
    then for Y near X each perturbed spectral block carries a definite form
    for which ad Y is skew, so the spectrum of ad Y stays imaginary.
    """
    if X.is_zero() or classify_element(g, X) is not ElementClass.ELLIPTIC:
        return None
    A = g.ad(X)
    poly = la.to_poly(la.charpoly(A))
    blocks = []
    for q, _mult in poly.factor_list()[1]:
        coeffs = [la.frac(c) for c in q.monic().all_coeffs()]
        V = la.nullspace(_poly_at(coeffs, A), g.dim)
        G = [[g.kappa_coords(u, v) for v in V] for u in V]
        if not _definite(G):
            return None
        blocks.append({"factor": [la.fmt(c) for c in coeffs], "dim": len(V),
                       "sign": "+" if G[0][0] > 0 else "-"})
    return {"kind": "definite_spectral_blocks", "blocks": blocks}


def interior_elliptic_test(g: MatrixLieAlgebra, h: Subspace, samples: int = 200, radius=Fraction(1, 20),
                           seed: int = 0, candidates=(), den: int = 97, search: int = 200) -> EllipticReport:
    """Look for an elliptic witness in h-perp and probe a rational ball around it."""
    hp = hperp(g, h)
    radius = Fraction(radius)
    rng = random.Random(seed)
    if hp.dim == 0:
        return EllipticReport(0, None, None, [], Verdict.EMPTY_INTERIOR, seed, {"kind": "hperp_zero"})
    G = killing_gram(g, hp)
    if is_psd(G):
        # weakly elliptic X has kappa(X,X) = sum of squares of imaginary eigenvalues <= 0,
        # so the weakly elliptic set is contained in the null cone of a semidefinite form
        if la.rank([list(r) for r in G]) > 0:
            return EllipticReport(hp.dim, None, None, [], Verdict.EMPTY_INTERIOR, seed,
                                  {"kind": "killing_form_psd_on_hperp", "gram": [[la.fmt(x) for x in r] for r in G]})
    parity = defining_parity_obstruction(g, hp, rng)
    if parity is not None:
        return EllipticReport(hp.dim, None, None, [], Verdict.EMPTY_INTERIOR, seed, parity)
    witness, wclass = None, None
    pool = list(candidates)
    for _ in range(search):
        pool.append(g.element(tuple(sum((rng.randint(-2, 2) * b[i] for b in hp.basis), ZERO) for i in range(g.dim))))
    stab = None
    for X in pool:
        if not hp.contains(X) or X.is_zero():
            continue
        stab = stability_certificate(g, X)
        if stab is not None:
            witness, wclass = X, ElementClass.ELLIPTIC
            break
    if witness is None:
        return EllipticReport(hp.dim, None, None, [], Verdict.INCONCLUSIVE, seed, {"kind": "no_witness"})
    evidence = []
    mats = hp.matrices()
    for _ in range(samples):
        Y = witness
        for b in mats:
            c = _random_rational(rng, radius, den)
            if c:
                Y = Y + b.scale(c)
        evidence.append((Y, weakly_elliptic(g, Y)))
    ok = all(e for _, e in evidence)
    cert = {"kind": "exact_witness", "witness_charpoly": [la.fmt(x) for x in spectrum_type(g, witness).charpoly],
            "semisimple": True, "stability": stab,
            "stabilizer_dim": centralizer(g, g.subspace([witness]), within=h).dim, "radius": la.fmt(radius), "denominator_bound": den,
            "ball_all_weakly_elliptic": ok}
    if not ok:
        # cannot happen when the stability certificate is valid
        raise InconsistencyError("sampled point near a certified witness is not weakly elliptic")
    return EllipticReport(hp.dim, witness, wclass, evidence, Verdict.SATISFIED, seed, cert)


def _is_full_sl(g: MatrixLieAlgebra) -> bool:
    return g.dim == g.n * g.n - 1 and all(b.trace() == 0 for b in g.basis)


def defining_parity_obstruction(g: MatrixLieAlgebra, hp: Subspace, rng: random.Random | None = None,
                                tries: int = 8) -> dict | None:
    """Exact obstruction for g = sl(N).

    ad X has imaginary spectrum iff all eigenvalues of X share one real part,
    which is 0 since tr X = 0.  A real matrix with imaginary spectrum has
    p(-t) = (-1)^N p(t), so every coefficient of the wrong parity vanishes.
    If one of them is a nonzero polynomial on h-perp, the weakly elliptic
    set lies in a proper hypersurface.
    """
    if not _is_full_sl(g) or hp.dim == 0:
        return None
    rng = rng or random.Random(0)
    mats = hp.matrices()
    pts = list(mats)
    for _ in range(tries):
        X = mats[0].scale(0)
        for b in mats:
            X = X + b.scale(rng.randint(-3, 3))
        pts.append(X)
    N = g.n
    for X in pts:
        coeffs = la.charpoly([list(r) for r in X.entries])   # leading first
        for k, c in enumerate(coeffs):
            # coefficient of t^(N-k); wrong parity when k is odd
            if k % 2 == 1 and c != 0:
                return {"kind": "defining_charpoly_parity", "point": X.to_json(),
                        "degree": N - k, "coefficient": la.fmt(c)}
    return None


def edge_obstruction(datum, roots, I=None) -> bool:
    """Nonzero edge of the compression cone of Z (or of Z_I) rules out an elliptic interior."""
    if I is None:
        return bool(roots.edge.dim if hasattr(roots.edge, "dim") else len(roots.edge))
    from .spherical import face_space
    return face_space(datum, roots, I).dim > 0


# ------------------------------------------------------------ families

def _D(vals, n) -> list:
    M = [[ZERO] * n for _ in range(n)]
    for i, t in enumerate(vals):
        M[2 * i][2 * i + 1] = Fraction(t)
        M[2 * i + 1][2 * i] = -Fraction(t)
    return M


def _v(vals, n) -> list:
    out = []
    for i, s in enumerate(vals):
        out.extend([Fraction(s)] * (2 if len(out) + 2 <= n and not (n % 2 and i == len(vals) - 1) else 1))
    if len(out) != n:
        raise SpecError("parameter vector has wrong length")
    return out


@lru_cache(maxsize=None)
def so_gl_pair(n: int):
    N = 2 * n + 1
    e = {}
    for i in range(n):
        e[(i, n + i)] = 1
        e[(n + i, i)] = 1
    e[(2 * n, 2 * n)] = 1
    J = RationalMatrix.of([[e.get((i, j), 0) for j in range(N)] for i in range(N)])
    g = preserving(J, within=sl(N), name="so(%d,%d)" % (n, n + 1))
    hmats = []
    for i in range(n):
        for j in range(n):
            M = [[0] * N for _ in range(N)]
            M[i][j] = 1
            M[n + j][n + i] = -1
            hmats.append(RationalMatrix.of(M))
    return g, g.subspace(hmats)


@lru_cache(maxsize=None)
def sl_sp_pair(n: int):
    N = 2 * n + 1
    g = sl(N)
    return g, g.subspace(list(sp(2 * n, N).basis))


def t0_family(family: str, n: int, params, variant: str = "corrected", strict: bool = True) -> RationalMatrix:
    """One member of the explicit families in h-perp.

    SO_n_np1_GL: params (t, s) with len(t) = n // 2 and len(s) = (n + 1) // 2.
    SL_odd_Sp:   params (t, s, tp, spr) each of length n // 2, n even.
    The 'paper' variant uses the sign pattern as usually displayed; the
    'corrected' variant flips one block so that generic members are elliptic.
    """
    if n < 2:
        raise SpecError("n must be at least 2")
    N = 2 * n + 1
    X = [[ZERO] * N for _ in range(N)]
    if family == "SO_n_np1_GL":
        t, s = params
        if len(t) != n // 2 or len(s) != (n + 1) // 2:
            raise SpecError("SO family expects |t| = %d and |s| = %d" % (n // 2, (n + 1) // 2))
        D = _D(t, n)
        v = _v(s, n)
        sign = 1 if variant == "corrected" else -1
        for i in range(n):
            for j in range(n):
                X[i][n + j] = D[i][j]
                X[n + i][j] = sign * D[i][j]
            X[i][2 * n] = v[i]
            X[n + i][2 * n] = v[i]
            X[2 * n][i] = -v[i]
            X[2 * n][n + i] = -v[i]
        g, h = so_gl_pair(n)
    elif family == "SL_odd_Sp":
        if n % 2:
            raise SpecError("only even n is implemented for the SL family")
        t, s, tp, spr = params
        m = n // 2
        if not all(len(p) == m for p in (t, s, tp, spr)):
            raise SpecError("SL family expects four parameter vectors of length %d" % m)
        Dt, Ds = _D(t, n), _D(s, n)
        vt, vs = _v(tp, n), _v(spr, n)
        lower = -1 if variant == "corrected" else 1
        for i in range(n):
            for j in range(n):
                X[i][j] = Dt[i][j]
                X[i][n + j] = Ds[i][j]
                X[n + i][j] = -lower * Ds[i][j] if variant == "paper" else Ds[i][j]
                X[n + i][n + j] = lower * Dt[i][j] if variant == "corrected" else Dt[i][j]
            X[i][2 * n] = vt[i]
            X[n + i][2 * n] = vs[i]
            X[2 * n][i] = -vt[i]
            X[2 * n][n + i] = -vs[i]
        g, h = sl_sp_pair(n)
    else:
        raise SpecError("unknown family %r" % family)
    M = RationalMatrix.of(X)
    if strict and not hperp(g, h).contains(M):
        raise InconsistencyError("family member is not in h-perp")
    return M


def family_pair(family: str, n: int):
    return so_gl_pair(n) if family == "SO_n_np1_GL" else sl_sp_pair(n)


def family_basis(family: str, n: int, variant: str = "corrected") -> list:
    """Basis of the family: unit parameter vectors."""
    if family == "SO_n_np1_GL":
        lens = [n // 2, (n + 1) // 2]
    else:
        lens = [n // 2] * 4
    out = []
    for k, L in enumerate(lens):
        for i in range(L):
            params = [[0] * l for l in lens]
            params[k][i] = 1
            out.append(t0_family(family, n, params, variant))
    return out


# ------------------------------------------------------ polar dominance

def slice_from_datum(d) -> list:
    """(a_Z + m_Z)^0: each X in a_Z + m_Z corrected by T0(X) in u into h-perp."""
    g = d.g
    hp = hperp(g, d.h)
    m = d.par.m
    mZ = orthogonal_complement_in(g, m, m & d.h)
    base = (d.aZ + mZ).matrices()
    u = d.levi.u
    out = []
    for X in base:
        # solve kappa(X + u, h_j) = 0 for u in the unipotent radical
        rows = [[g.kappa(ub, hb) for ub in u.matrices()] for hb in d.h.matrices()]
        rhs = [-g.kappa(X, hb) for hb in d.h.matrices()]
        sol = la.solve(rows, rhs) if u.dim else ([] if all(r == 0 for r in rhs) else None)
        if sol is None:
            raise InconsistencyError("slice element cannot be corrected into h-perp")
        Y = X
        for c, ub in zip(sol, u.matrices()):
            if c:
                Y = Y + ub.scale(c)
        if not hp.contains(Y):
            raise InconsistencyError("slice not inside h-perp")
        out.append(Y)
    return out


def orthogonal_complement_in(g, V: Subspace, W: Subspace) -> Subspace:
    """kappa-orthocomplement of W inside V."""
    if W.dim == 0:
        return V
    rows = [[g.kappa_coords(v, w) for v in V.basis] for w in W.basis]
    ker = la.nullspace(rows, V.dim)
    return Subspace(g, [tuple(sum((k[j] * V.basis[j][i] for j in range(V.dim)), ZERO) for i in range(g.dim)) for k in ker])


@dataclass
class PolarReport:
    ranks: list
    target: int
    slice_in_hperp: bool

    @property
    def ok(self) -> bool:
        return self.slice_in_hperp and any(r == self.target for r in self.ranks)


def polar_dominance_check(g: MatrixLieAlgebra, h: Subspace, slice_basis, sample_points=None,
                          seed: int = 0, samples: int = 3) -> PolarReport:
    hp = hperp(g, h)
    inside = all(hp.contains(X) for X in slice_basis)
    if not inside:
        raise InconsistencyError("slice is not contained in h-perp")
    S = g.subspace(list(slice_basis))
    rng = random.Random(seed)
    pts = list(sample_points or [])
    for _ in range(samples):
        X = slice_basis[0].scale(0)
        for b in slice_basis:
            X = X + b.scale(Fraction(rng.randint(1, 97), rng.randint(1, 97)) * rng.choice((1, -1)))
        pts.append(X)
    ranks = []
    hm = h.matrices()
    for X in pts:
        V = g.subspace([bracket(Y, X) for Y in hm]) + S
        ranks.append(V.dim)
    return PolarReport(ranks, hp.dim, inside)
