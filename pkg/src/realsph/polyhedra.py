"""Exact homogeneous linear inequality systems (Fourier-Motzkin).

``solve_homogeneous`` decides whether a system of homogeneous constraints
``a.y >= 0`` / ``a.y > 0`` has a solution, returning either a witness y or a
Gordan/Farkas certificate: nonnegative multipliers, positive on at least
one strict row, whose combination of the rows vanishes.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

ZERO = Fraction(0)


@dataclass(frozen=True)
class Result:
    feasible: bool
    witness: tuple | None = None
    multipliers: tuple | None = None


def _norm(row):
    # scale to make the first nonzero entry +-1 (keeps numbers small)
    for x in row:
        if x:
            s = abs(x)
            return tuple(v / s for v in row)
    return tuple(row)


def solve_homogeneous(nonstrict: Sequence[Sequence], strict: Sequence[Sequence], dim: int) -> Result:
    rows = []
    for k, a in enumerate(list(nonstrict) + list(strict)):
        a = tuple(Fraction(x) for x in a)
        mult = tuple(Fraction(int(i == k)) for i in range(len(nonstrict) + len(strict)))
        rows.append((a, k >= len(nonstrict), mult))
    m = len(rows)
    stages = []
    cur = rows
    for var in range(dim - 1, -1, -1):
        pos = [r for r in cur if r[0][var] > 0]
        neg = [r for r in cur if r[0][var] < 0]
        zer = [r for r in cur if r[0][var] == 0]
        stages.append((var, pos, neg))
        nxt = list(zer)
        seen = set()
        for p in pos:
            for q in neg:
                cp, cq = p[0][var], -q[0][var]
                a = tuple(x / cp + y / cq for x, y in zip(p[0], q[0]))
                mult = tuple(x / cp + y / cq for x, y in zip(p[2], q[2]))
                key = (_norm(a), p[1] or q[1])
                if key in seen:
                    continue
                seen.add(key)
                nxt.append((a, p[1] or q[1], mult))
        cur = nxt
    for a, st, mult in cur:
        if st:
            # 0 > 0 is derived: certificate of infeasibility
            return Result(False, multipliers=mult)
    # back substitution
    y = [ZERO] * dim
    for var, pos, neg in reversed(stages):
        lo, lo_strict, hi, hi_strict = None, False, None, False
        for a, st, _ in pos:
            b = -sum((a[i] * y[i] for i in range(dim) if i != var), ZERO) / a[var]
            if lo is None or b > lo or (b == lo and st):
                lo, lo_strict = b, st
        for a, st, _ in neg:
            b = -sum((a[i] * y[i] for i in range(dim) if i != var), ZERO) / a[var]
            if hi is None or b < hi or (b == hi and st):
                hi, hi_strict = b, st
        if lo is None and hi is None:
            y[var] = ZERO
        elif hi is None:
            y[var] = lo + 1 if lo_strict else lo
        elif lo is None:
            y[var] = hi - 1 if hi_strict else hi
        else:
            y[var] = (lo + hi) / 2
    y = tuple(y)
    for k, (a, st, _) in enumerate(rows):
        v = sum((x * w for x, w in zip(a, y)), ZERO)
        assert v > 0 if st else v >= 0, "back substitution failed"
    return Result(True, witness=y)


def in_cone(v: Sequence, gens: Sequence[Sequence]) -> tuple[bool, tuple | None]:
    """Exact test v in cone(gens); returns (member, coefficients or separating y)."""
    dim = len(v)
    res = solve_homogeneous([tuple(g) for g in gens], [tuple(-Fraction(x) for x in v)], dim)
    if res.feasible:
        return False, res.witness
    mult = res.multipliers
    mu = mult[-1]
    return True, tuple(c / mu for c in mult[:-1])


def interiors_disjoint(A: Sequence[Sequence], B: Sequence[Sequence], dim: int) -> Result:
    """Cones given by inequality normals (x in cone iff n.x <= 0 for n in rows).
    Interiors meet iff the strict system is feasible."""
    strict = [tuple(-Fraction(x) for x in n) for n in list(A) + list(B)]
    return solve_homogeneous([], strict, dim)
