"""Finite-dimensional toy models for the Maass-Selberg linear algebra.

Frequencies are real vectors gamma; the exponent is i*gamma.  A frequency
given with Fraction entries is read as a rational multiple of pi, which
makes resonance detection exact.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
import sympy
from scipy.stats import unitary_group

TOL = 1e-9


# ------------------------------------------------------ exp polynomials

@dataclass
class ExpPolynomial:
    """p(t) = sum_lambda q_lambda(t) e^{i gamma_lambda . t} on R^k.

    ``terms`` maps a frequency tuple to {monomial exponent tuple: coefficient}.
    """
    terms: dict
    rho: tuple | None = None

    def __post_init__(self):
        clean = {}
        for lam, poly in self.terms.items():
            q = {tuple(m): complex(c) for m, c in poly.items() if c != 0}
            if q:
                clean[tuple(lam)] = q
        self.terms = clean

    @property
    def k(self) -> int:
        for lam in self.terms:
            return len(lam)
        return 1

    def is_zero(self) -> bool:
        return not self.terms

    def __call__(self, t) -> complex:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        total = 0j
        for lam, q in self.terms.items():
            phase = cmath.exp(1j * float(np.dot(_freq(lam), t)))
            total += phase * sum(c * float(np.prod(t ** np.array(m))) for m, c in q.items())
        return total

    @classmethod
    def one_dim(cls, pairs) -> "ExpPolynomial":
        """From [(gamma, [c0, c1, ...])] meaning sum (c0 + c1 t + ...) e^{i gamma t}."""
        terms = {}
        for gamma, coeffs in pairs:
            poly = terms.setdefault((gamma,), {})
            for d, c in enumerate(coeffs):
                poly[(d,)] = poly.get((d,), 0) + c
        return cls(terms)


def _freq(lam) -> np.ndarray:
    return np.array([float(x) * math.pi if isinstance(x, Fraction) else float(x) for x in lam])


def decay_uniqueness_check(p: ExpPolynomial, eps: float, C: float, horizon: float = 100.0,
                           step: float = 1.0) -> tuple[bool, float | None]:
    """Nonzero p cannot satisfy |p(t)| <= C e^{-eps t}: return a witness t*."""
    if p.is_zero():
        return True, None
    t = 0.0
    while t <= horizon:
        if abs(p(t)) > C * math.exp(-eps * t):
            return True, t
        t += step
    return False, None


# ------------------------------------------------------------- Cesaro

def cesaro_block_average(f: Callable[[int], complex], n: int) -> complex:
    """(1/n) sum_{t=n+1}^{2n} f(t)."""
    vals = [complex(f(t)) for t in range(n + 1, 2 * n + 1)]
    return complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals)) / n


def block_averages(values: np.ndarray) -> np.ndarray:
    """All block averages at once: values[t-1] = f(t) for t = 1..2N gives avg(n), n = 1..N."""
    S = np.concatenate([[0], np.cumsum(values)])
    N = len(values) // 2
    n = np.arange(1, N + 1)
    return (S[2 * n] - S[n]) / n


def cesaro_bound(gamma: float, n) -> np.ndarray:
    return 2.0 / (np.asarray(n, dtype=float) * abs(1 - cmath.exp(1j * gamma)))


# ------------------------------------------------------------- models

@dataclass
class ToySpectralModel:
    """Blocks (gamma_j, s_j): on block j the generator acts by i gamma_j(X) + N_{s_j}."""
    freqs: list
    sizes: list
    unitary: bool = True

    @property
    def dim(self) -> int:
        return sum(self.sizes)

    @property
    def semisimple(self) -> bool:
        return all(s == 1 for s in self.sizes)

    def offsets(self) -> list:
        out, o = [], 0
        for s in self.sizes:
            out.append(o)
            o += s
        return out

    def phase(self, j: int, X) -> float:
        return float(np.dot(_freq(self.freqs[j]), np.asarray(X, dtype=float)))

    def flow(self, xi: np.ndarray, X, t: float) -> np.ndarray:
        """exp(t A(X)) xi, blockwise e^{i t gamma(X)} sum_k t^k N^k / k!."""
        out = np.zeros(self.dim, dtype=complex)
        for j, (o, s) in enumerate(zip(self.offsets(), self.sizes)):
            blk = xi[o:o + s]
            res = np.zeros(s, dtype=complex)
            for k in range(s):
                # N shifts coordinates up by one
                res[:s - k] += (t ** k / math.factorial(k)) * blk[k:]
            out[o:o + s] = cmath.exp(1j * t * self.phase(j, X)) * res
        return out

    def components(self, xi: np.ndarray) -> list:
        return [(j, np.pad(xi[o:o + s], (o, self.dim - o - s))) for j, (o, s) in enumerate(zip(self.offsets(), self.sizes))]


def resonant(model: ToySpectralModel, j: int, l: int, X) -> tuple[bool, bool]:
    """((gamma_j - gamma_l)(X) in 2 pi Z, exact?)."""
    a, b = model.freqs[j], model.freqs[l]
    if all(isinstance(x, (Fraction, int)) for x in list(a) + list(b)) and all(isinstance(x, (Fraction, int)) for x in X):
        d = sum((Fraction(x) - Fraction(y)) * Fraction(z) for x, y, z in zip(a, b, X))
        return d.denominator == 1 and d.numerator % 2 == 0, True
    d = model.phase(j, X) - model.phase(l, X)
    r = d / (2 * math.pi)
    return abs(r - round(r)) < TOL, False


def closed_form_limit(model: ToySpectralModel, F: np.ndarray, xi: np.ndarray, directions) -> tuple[float, bool]:
    comps = [F @ c for _, c in model.components(xi)]
    total, exact = 0.0, True
    n = len(comps)
    for j in range(n):
        for l in range(n):
            if j == l:
                total += float(np.vdot(comps[j], comps[j]).real)
                continue
            ok = True
            for X in directions:
                r, ex = resonant(model, j, l, X)
                exact = exact and ex
                ok = ok and r
            if ok:
                total += float(np.vdot(comps[l], comps[j]).real)
    return total, exact


@dataclass
class AveragingResult:
    kind: str                   # "LIMIT" or "DIVERGES"
    value: float | None
    closed_form: float | None
    order: float | None = None
    exact_resonance: bool = True


def averaging_limit(model: ToySpectralModel, F: np.ndarray, xi: np.ndarray, X, n: int = 10_000,
                    extra_directions: Sequence = ()) -> AveragingResult:
    F = np.asarray(F, dtype=complex)
    xi = np.asarray(xi, dtype=complex)
    norms = lambda t, D=X: float(np.linalg.norm(F @ model.flow(xi, D, t)) ** 2)
    if not model.semisimple:
        ns = [100 * 2 ** k for k in range(6)]
        avgs = [cesaro_block_average(lambda t: norms(t), m).real for m in ns]
        if avgs[-1] > 0 and avgs[-1] > 10 * avgs[0]:
            slope = np.polyfit(np.log(ns), np.log(avgs), 1)[0]
            return AveragingResult("DIVERGES", None, None, float(round(slope, 3)))
    dirs = [X] + list(extra_directions)
    cf, exact = closed_form_limit(model, F, xi, dirs)
    if not extra_directions:
        val = cesaro_block_average(norms, n).real
    else:
        # iterate the block average along each direction in turn
        m = max(20, int(round(n ** (1.0 / len(dirs)))))
        grids = [range(m + 1, 2 * m + 1)] * len(dirs)
        acc = 0.0
        import itertools
        for ts in itertools.product(*grids):
            v = model.flow(xi, dirs[0], ts[0])
            for D, t in zip(dirs[1:], ts[1:]):
                v = model.flow(v, D, t)
            acc += float(np.linalg.norm(F @ v) ** 2)
        val = acc / m ** len(dirs)
    return AveragingResult("LIMIT", val, cf, None, exact)


def translate_norm_preserved(model: ToySpectralModel, xi, X, ts=(0, 1, 5, 50)) -> bool:
    if not (model.semisimple and model.unitary):
        return False
    n0 = np.linalg.norm(xi)
    return all(abs(np.linalg.norm(model.flow(np.asarray(xi, dtype=complex), X, t)) - n0) < 1e-9 for t in ts)


# ------------------------------------------------------ partial isometries

def _is_exact(A) -> bool:
    return all(isinstance(x, (int, Fraction, sympy.Basic)) for x in np.asarray(A, dtype=object).ravel())


def _sym(A) -> sympy.Matrix:
    return sympy.Matrix([[sympy.nsimplify(x) if isinstance(x, Fraction) else x for x in row] for row in A])


@dataclass
class IsometryReport:
    hypothesis: bool
    adjoint_isometry: bool
    exact: bool
    residual: float

    @property
    def ok(self) -> bool:
        return self.hypothesis and self.adjoint_isometry


def _polarization_set(n: int, exact: bool):
    vecs = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        vecs.append(e)
        for k in range(i + 1, n):
            a = [0] * n
            a[i], a[k] = 1, 1
            b = [0] * n
            b[i], b[k] = 1, (sympy.I if exact else 1j)
            vecs += [a, b]
    return vecs


def onb_partial_isometry_check(J, basis=None, tol: float = 1e-12) -> IsometryReport:
    """J: M -> N as an (dim N) x (dim M) matrix, basis eta_j of M as columns."""
    exact = _is_exact(J) and (basis is None or _is_exact(basis))
    if exact:
        Jm = _sym(J)
        B = sympy.eye(Jm.shape[1]) if basis is None else _sym(basis)
        onb = sympy.simplify(B.H * B - sympy.eye(B.shape[1])) == sympy.zeros(B.shape[1])
        cols = [Jm * B[:, j] for j in range(B.shape[1])]
        hyp = onb
        for x in _polarization_set(Jm.shape[0], True):
            xv = sympy.Matrix(x)
            lhs = (xv.H * xv)[0]
            rhs = sum((abs((c.H * xv)[0]) ** 2 for c in cols), sympy.Integer(0))
            if sympy.simplify(lhs - rhs) != 0:
                hyp = False
                break
        # J^* is an isometry iff J J^* = 1
        iso = sympy.simplify(Jm * Jm.H - sympy.eye(Jm.shape[0])) == sympy.zeros(Jm.shape[0])
        return IsometryReport(bool(hyp), bool(iso), True, 0.0)
    Jn = np.asarray(J, dtype=complex)
    B = np.eye(Jn.shape[1]) if basis is None else np.asarray(basis, dtype=complex)
    res = float(np.max(np.abs(B.conj().T @ B - np.eye(B.shape[1])))) if B.size else 0.0
    cols = Jn @ B
    for x in _polarization_set(Jn.shape[0], False):
        x = np.asarray(x, dtype=complex)
        lhs = float(np.vdot(x, x).real)
        rhs = float(np.sum(np.abs(cols.conj().T @ x) ** 2))
        res = max(res, abs(lhs - rhs))
    hyp = res <= tol
    iso_res = float(np.max(np.abs(Jn @ Jn.conj().T - np.eye(Jn.shape[0])))) if Jn.size else 0.0
    return IsometryReport(bool(hyp), bool(iso_res <= tol), False, max(res, iso_res))


def random_coisometry(n: int, m: int, seed: int) -> np.ndarray:
    if n > m:
        raise ValueError("co-isometry needs n <= m")
    U = unitary_group.rvs(m, random_state=seed) if m > 1 else np.array([[cmath.exp(1j * seed)]])
    return U[:n, :]


@dataclass
class ToyFamily:
    """Multiplicity space with ONB eta (columns) and the component map into M^{I,lambda}."""
    eta: np.ndarray
    component: np.ndarray


def maass_selberg_toy(family: ToyFamily, lam=None) -> IsometryReport:
    """Certify that the component map is a surjective partial isometry."""
    return onb_partial_isometry_check(family.component, family.eta)


@dataclass
class RadonReport:
    ok: bool
    residual: float
    witness: np.ndarray | None
    norm_bound_ok: bool


def radon_transitivity_toy(R_I, R_J_I, R_J, pieces: Sequence = (), weyl_order: int | None = None,
                           tol: float = 1e-9) -> RadonReport:
    """Check R_J = R_J^I o R_I; optionally ||sum of pieces|| <= |W_j|."""
    if _is_exact(R_I) and _is_exact(R_J_I) and _is_exact(R_J):
        D = _sym(R_J_I) * _sym(R_I) - _sym(R_J)
        ok = D == sympy.zeros(*D.shape)
        Dn = np.array(D.evalf(), dtype=complex)
    else:
        Dn = np.asarray(R_J_I, dtype=complex) @ np.asarray(R_I, dtype=complex) - np.asarray(R_J, dtype=complex)
        ok = None
    u, s, vh = np.linalg.svd(Dn) if Dn.size else (None, np.zeros(1), None)
    resid = float(s[0]) if s.size else 0.0
    if ok is None:
        ok = resid <= tol
    witness = None if ok else vh[0].conj()
    bound = True
    if pieces:
        total = sum(np.asarray(p, dtype=complex) for p in pieces)
        bound = float(np.linalg.norm(total, 2)) <= (weyl_order or len(pieces)) + tol
    return RadonReport(bool(ok), resid, witness, bound)
