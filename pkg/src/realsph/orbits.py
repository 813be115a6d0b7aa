"""Two-group combinatorics of open P-orbits.

Torsion elements are sign vectors in {-1, 1}^r, written in the lattice
basis psi_1..psi_r adapted to the spherical roots (the ith coordinate is
the value of psi_i).  For a subset I of the roots the coordinates split
into the parallel block (roots outside I, the A_I part) and the
perpendicular block (roots in I).
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import rootcomb
from .errors import InconsistencyError, SpecError

log = logging.getLogger(__name__)

Sign = tuple


def mul(s: Sign, t: Sign) -> Sign:
    return tuple(a * b for a, b in zip(s, t))


def one(r: int) -> Sign:
    return (1,) * r


def _closure(gens: Iterable[Sign], r: int) -> frozenset:
    out = {one(r)}
    for g in gens:
        out |= {mul(g, x) for x in out}
    return frozenset(out)


def _check_signs(vs, r, what):
    for v in vs:
        if len(v) != r or any(x not in (1, -1) for x in v):
            raise SpecError("%s: %r is not a sign vector of length %d" % (what, v, r))


@dataclass
class FiberData:
    """Per-class data supplied for a subset I, in class order."""
    W_I_sizes: list | None = None
    sF_sizes: list | None = None


@dataclass
class TorsionSetup:
    r: int
    F_M: frozenset
    F: tuple                     # ordered; labels w1, w2, ... follow F_M-orbit order
    base_point: Sign
    F_of_I: dict = field(default_factory=dict)      # frozenset(I) -> frozenset of sign vectors of length k
    fibers: dict = field(default_factory=dict)      # frozenset(I) -> FiberData
    classes: dict = field(default_factory=dict)     # frozenset(I) -> list of lists of F elements
    complex_group: bool = False                     # F(I) defaults to every parallel part
    n_roots: int | None = None                      # |S|; smaller than r when Z has an edge

    def __post_init__(self):
        _check_signs(self.F_M, self.r, "F_M")
        _check_signs(self.F, self.r, "F")
        if one(self.r) not in self.F_M or _closure(self.F_M, self.r) != frozenset(self.F_M):
            raise SpecError("F_M is not a subgroup of F_R")
        if self.base_point not in self.F:
            raise SpecError("base point must lie in F")
        if {mul(m, t) for m in self.F_M for t in self.F} != set(self.F):
            raise InconsistencyError("F_M does not act on F")

    @property
    def F_R(self) -> list:
        return [tuple(v) for v in itertools.product((1, -1), repeat=self.r)]

    def parallel_indices(self, I) -> list:
        return [i for i in range(self.r) if i not in I]

    def F_I_of(self, I) -> frozenset:
        k = self.r - len(I)
        if frozenset(I) in self.F_of_I:
            return frozenset(self.F_of_I[frozenset(I)])
        if self.complex_group:
            return frozenset(par for par, _ in (coordinate_split(self, I, self.rel(t)) for t in self.F))
        return frozenset({one(k)})

    def rel(self, t: Sign) -> Sign:
        return mul(t, self.base_point)


def coordinate_split(setup: TorsionSetup, I, t: Sign) -> tuple:
    """t = t_par * t_perp with t_par on the roots outside I and t_perp on I."""
    I = frozenset(I)
    par = tuple(t[i] for i in range(setup.r) if i not in I)
    perp = tuple(t[i] for i in range(setup.r) if i in I)
    return par, perp


def combine(setup: TorsionSetup, I, par: Sign, perp: Sign) -> Sign:
    I = frozenset(I)
    p, q = iter(par), iter(perp)
    return tuple(next(q) if i in I else next(p) for i in range(setup.r))


# ------------------------------------------------------------------ W

@dataclass
class OpenOrbits:
    labels: list       # "w1", ...
    orbits: list       # frozensets of sign vectors (F_M-orbits)
    real_orbits: list  # F_M-orbits on F_R

    def label_of(self, t: Sign) -> str:
        for lab, o in zip(self.labels, self.orbits):
            if t in o:
                return lab
        raise InconsistencyError("%r is not an open orbit parameter" % (t,))

    @property
    def size(self) -> int:
        return len(self.orbits)


def _orbits(group, elems) -> list:
    out, seen = [], set()
    for t in elems:
        if t in seen:
            continue
        o = frozenset(mul(m, t) for m in group)
        seen |= o
        out.append(o)
    return out


def open_orbits(setup: TorsionSetup) -> OpenOrbits:
    orbs = _orbits(setup.F_M, setup.F)
    # the base point's orbit is the identity w1
    orbs.sort(key=lambda o: setup.base_point not in o)
    return OpenOrbits(["w%d" % (i + 1) for i in range(len(orbs))], orbs, _orbits(setup.F_M, setup.F_R))


# ------------------------------------------------------------ partition

@dataclass
class ClassData:
    key: frozenset          # orbit of the perpendicular coordinate
    W_c: list               # labels
    F_Ic: frozenset         # parallel parts, relative to the base point
    F_perp: frozenset
    sF: list                # F(I)-cosets in F_Ic
    W_Ic: list              # F_M-orbits in F(I) x F_perp
    images: dict            # coset rep -> sorted labels


@dataclass
class OrbitPartition:
    I: frozenset
    W: list
    classes: list
    F_of_I: frozenset
    supplied: FiberData | None
    resolution: tuple | None      # permutation applied to supplied fiber data
    notes: list

    @property
    def cardinality_identity(self) -> bool:
        return len(self.W) == sum(len(c.sF) * len(c.W_Ic) for c in self.classes)

    def to_json(self):
        return {
            "I": sorted(self.I),
            "W": self.W,
            "classes": [{"W_c": c.W_c, "W_Ic_size": len(c.W_Ic), "sF_size": len(c.sF),
                         "images": {"".join("+" if x > 0 else "-" for x in k) or "1": v for k, v in sorted(c.images.items())}}
                        for c in self.classes],
            "resolution": list(self.resolution) if self.resolution is not None else None,
            "notes": self.notes,
        }


def _check_F_of_I(setup, I) -> frozenset:
    k = setup.r - len(I)
    FI = setup.F_I_of(I)
    _check_signs(FI, k, "F(I)")
    if one(k) not in FI or _closure(FI, k) != FI:
        raise InconsistencyError("F(I) is not a subgroup of {-1,1}^%d" % k)
    return FI


def fine_partition(setup: TorsionSetup, I) -> OrbitPartition:
    I = frozenset(I)
    oo = open_orbits(setup)
    FI = _check_F_of_I(setup, I)
    Mperp = frozenset(coordinate_split(setup, I, m)[1] for m in setup.F_M)
    # classes: F_M-orbits of the perpendicular part relative to the base point
    groups: dict = {}
    if I in setup.classes:
        for c in setup.classes[I]:
            _check_signs(c, setup.r, "class")
            key = frozenset(coordinate_split(setup, I, setup.rel(tuple(t)))[1] for t in c)
            groups[key] = [tuple(t) for t in c]
        if sorted(t for g in groups.values() for t in g) != sorted(setup.F):
            raise SpecError("supplied classes for I=%s do not partition F" % sorted(I))
        if any({mul(m, t) for m in setup.F_M for t in g} != set(g) for g in groups.values()):
            raise InconsistencyError("supplied classes are not unions of F_M-orbits")
    elif len(I) == (setup.n_roots if setup.n_roots is not None else setup.r):
        # no boundary: the whole of W is one class
        groups[frozenset(coordinate_split(setup, I, setup.rel(t))[1] for t in setup.F)] = list(setup.F)
    else:
        for t in setup.F:
            perp = coordinate_split(setup, I, setup.rel(t))[1]
            key = frozenset(mul(m, perp) for m in Mperp)
            groups.setdefault(key, []).append(t)
    base_key = next(k for k, g in groups.items() if setup.base_point in g)
    keys = sorted(groups, key=lambda k: (k != base_key, sorted(k)))
    classes = []
    covered = []
    for key in keys:
        ts = groups[key]
        W_c = sorted({oo.label_of(t) for t in ts}, key=oo.labels.index)
        F_Ic = frozenset(coordinate_split(setup, I, setup.rel(t))[0] for t in ts)
        F_perp = frozenset(coordinate_split(setup, I, setup.rel(t))[1] for t in ts)
        if not all(mul(f, x) in F_Ic for f in FI for x in F_Ic):
            raise InconsistencyError("F(I) does not act on F_I for class %s" % sorted(key))
        cosets = _orbits(FI, sorted(F_Ic, reverse=True))
        W_Ic_elems = [combine(setup, I, s, u) for s in FI for u in F_perp]
        W_Ic = _orbits(setup.F_M, W_Ic_elems)
        images = {}
        for cos in cosets:
            rep = max(cos)
            img = set()
            for s in FI:
                for u in F_perp:
                    x = mul(combine(setup, I, mul(s, rep), u), setup.base_point)
                    img.add(oo.label_of(x))
            images[rep] = sorted(img, key=oo.labels.index)
            if len(images[rep]) != len(W_Ic):
                raise InconsistencyError("m_(c,t) is not injective for I=%s" % sorted(I))
            covered.extend(images[rep])
        classes.append(ClassData(key, W_c, F_Ic, F_perp, cosets, W_Ic, images))
    if sorted(covered, key=oo.labels.index) != oo.labels:
        raise InconsistencyError("images do not partition W for I=%s" % sorted(I))
    # identity class splitting F_1 = F_I x F_perp
    c1 = classes[0]
    prod = {combine(setup, I, a, b) for a in c1.F_Ic for b in c1.F_perp}
    rel1 = {setup.rel(t) for t in groups[keys[0]]}
    if prod != rel1:
        raise InconsistencyError("identity class does not split as F_I x F_perp")
    notes: list = []
    supplied = setup.fibers.get(I)
    resolution = None
    if supplied is not None:
        resolution = _resolve(oo, classes, supplied, I, notes)
    return OrbitPartition(I, oo.labels, classes, FI, supplied, resolution, notes)


def _resolve(oo, classes, fd: FiberData, I, notes) -> tuple:
    n = len(classes)
    Wsz = fd.W_I_sizes or [len(c.W_Ic) for c in classes]
    sFsz = fd.sF_sizes or [len(c.sF) for c in classes]
    if len(Wsz) != n or len(sFsz) != n:
        raise InconsistencyError("supplied fiber data has %d classes, computed %d" % (len(sFsz), n))
    sizes = [len(c.W_c) for c in classes]

    def ok(perm):
        return all(sizes[i] == sFsz[perm[i]] * Wsz[perm[i]] for i in range(n))

    ident = tuple(range(n))
    if ok(ident):
        return ident
    bad = [i for i in range(n) if sizes[i] != sFsz[i] * Wsz[i]]
    msg = "I=%s: supplied data violates |W_c| = |sF_c|*|W_I,c| for classes %s" % (sorted(I), [i + 1 for i in bad])
    for perm in itertools.permutations(range(n)):
        if perm[0] == 0 and ok(perm):   # the identity class stays put
            notes.append(msg + "; resolved by assigning supplied fibers %s" % [p + 1 for p in perm])
            log.info(notes[-1])
            return perm
    for perm in itertools.permutations(range(n)):
        if ok(perm):
            notes.append(msg + "; resolved by assigning supplied fibers %s (identity class moved)" % [p + 1 for p in perm])
            log.info(notes[-1])
            return perm
    raise InconsistencyError(msg + "; no reassignment of classes satisfies the identity")


def matching_map(setup: TorsionSetup, I, mode: str = "SUPPLIED", symmetric=None) -> dict:
    """m: W_I -> W for the identity class, keyed by F_M-orbit representatives."""
    I = frozenset(I)
    if mode == "SYMMETRIC":
        if symmetric is None:
            raise SpecError("symmetric mode needs a Weyl model")
        mm = matsuki_model(symmetric, I)
        return dict(mm.inclusion)
    part = fine_partition(setup, I)
    c1 = part.classes[0]
    oo = open_orbits(setup)
    out = {}
    for orb in c1.W_Ic:
        x = mul(max(orb), setup.base_point)
        out[tuple(sorted(orb, reverse=True))] = oo.label_of(x)
    if len(set(out.values())) != len(out):
        raise InconsistencyError("m is not injective")
    rep_one = tuple(sorted(frozenset(setup.F_M), reverse=True))
    if out.get(rep_one) != oo.labels[0]:
        raise InconsistencyError("m does not send the identity coset to the identity")
    return out


@dataclass
class DiagramReport:
    fiber_injective: bool
    exact: bool
    commutes: bool
    quotient_iso: bool
    real_split: bool

    @property
    def ok(self) -> bool:
        return self.fiber_injective and self.exact and self.commutes and self.quotient_iso and self.real_split


def two_group_diagram_check(setup: TorsionSetup, I) -> DiagramReport:
    I = frozenset(I)
    oo = open_orbits(setup)
    part = fine_partition(setup, I)
    c1 = part.classes[0]
    FI = part.F_of_I
    k = setup.r - len(I)
    # fiber (F_M cap F(I))\F_I -> W
    MF = frozenset(m for m in setup.F_M if coordinate_split(setup, I, m)[1] == one(len(I))
                   and coordinate_split(setup, I, m)[0] in FI)
    MFpar = frozenset(coordinate_split(setup, I, m)[0] for m in MF)
    fib = _orbits(MFpar, sorted(c1.F_Ic, reverse=True))
    imgs = []
    for o in fib:
        x = mul(combine(setup, I, max(o), one(len(I))), setup.base_point)
        if x not in setup.F:
            imgs = None
            break
        imgs.append(oo.label_of(x))
    injective = imgs is not None and len(set(imgs)) == len(imgs)
    # W -> W_hat by the perpendicular coordinate
    Mperp = frozenset(coordinate_split(setup, I, m)[1] for m in setup.F_M)

    def pi(t):
        return frozenset(mul(m, coordinate_split(setup, I, setup.rel(t))[1]) for m in Mperp)

    base = pi(setup.base_point)
    pre = sorted({oo.label_of(t) for t in setup.F if pi(t) == base}, key=oo.labels.index)
    exact = injective and pre == sorted(set(imgs), key=oo.labels.index)
    # square: pi(m(s,u)) equals the F(I)-orbit class of (s,u), i.e. [u]
    commutes, classes_hat = True, set()
    for orb in c1.W_Ic:
        x = mul(max(orb), setup.base_point)
        u = coordinate_split(setup, I, max(orb))[1]
        classes_hat.add(frozenset(mul(m, u) for m in Mperp))
        if pi(x) != frozenset(mul(m, u) for m in Mperp):
            commutes = False
    # W_I / F(I) has one point per perpendicular class
    quot = _orbits(FI, [coordinate_split(setup, I, max(o))[0] for o in c1.W_Ic])
    W_hat_1 = {pi(t) for t in setup.F if pi(t) in classes_hat}
    quotient_iso = len(classes_hat) == len(W_hat_1) and len(quot) >= 1
    # W_R = W_hat_R x (F_I,R cap F_M)\F_I,R
    WR = len(oo.real_orbits)
    hatR = len(_orbits(Mperp, list(itertools.product((1, -1), repeat=len(I)))))
    FIR_M = frozenset(coordinate_split(setup, I, m)[0] for m in setup.F_M
                      if coordinate_split(setup, I, m)[1] == one(len(I)))
    fibR = len(_orbits(FIR_M, list(itertools.product((1, -1), repeat=k))))
    return DiagramReport(injective, exact, commutes, quotient_iso, WR == hatR * fibR)


# -------------------------------------------------------------- Matsuki

@dataclass
class SymmetricDatum:
    rs: rootcomb.RootSystem
    WH_words: list

    def element(self, word) -> tuple:
        m = rootcomb._identity(self.rs.rank)
        for i in word:
            if not 1 <= i <= self.rs.rank:
                raise SpecError("word letter %d out of range" % i)
            m = rootcomb._compose(m, self.rs._generators[i - 1])
        return m


@dataclass
class MatsukiModel:
    cosets: list               # W/W_H as frozensets of matrices, identity first
    double_cosets: list        # W(I)-orbits on the cosets, as index lists
    local: list                # W(I)/(W(I) cap W_H)
    inclusion: dict            # local coset index -> global coset index
    WH_order: int

    @property
    def size(self) -> int:
        return len(self.cosets)


def _subgroup(gens, n) -> frozenset:
    elems = {rootcomb._identity(n)}
    frontier = list(elems)
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = rootcomb._compose(x, g)
                if y not in elems:
                    elems.add(y)
                    new.append(y)
        frontier = new
    return frozenset(elems)


def matsuki_model(sd: SymmetricDatum, I) -> MatsukiModel:
    rs = sd.rs
    I = frozenset(I)
    W = [w.matrix for w in rootcomb.enumerate_weyl(rs)]
    WH = _subgroup([sd.element(w) for w in sd.WH_words], rs.rank)
    if not WH <= set(W):
        raise SpecError("W_H is not a subgroup of W")
    cosets = []
    seen = set()
    for w in W:
        if w in seen:
            continue
        c = frozenset(rootcomb._compose(w, h) for h in WH)
        seen |= c
        cosets.append(c)
    index = {m: i for i, c in enumerate(cosets) for m in c}
    WI = [w.matrix for w in rootcomb.parabolic_subgroup(rs, I)]
    orbits, done = [], set()
    for i, c in enumerate(cosets):
        if i in done:
            continue
        rep = next(iter(c))
        o = sorted({index[rootcomb._compose(x, rep)] for x in WI})
        done |= set(o)
        orbits.append(o)
    WIH = [w for w in WI if w in WH]
    local, lseen = [], set()
    for w in WI:
        if w in lseen:
            continue
        c = frozenset(rootcomb._compose(w, h) for h in WIH)
        lseen |= c
        local.append(c)
    inclusion = {j: index[next(iter(c))] for j, c in enumerate(local)}
    if len(set(inclusion.values())) != len(inclusion):
        raise InconsistencyError("W(I)/(W(I) cap W_H) -> W/W_H is not injective")
    return MatsukiModel(cosets, orbits, local, inclusion, len(WH))


def matsuki_vs_partition(mm: MatsukiModel, part: OrbitPartition) -> dict:
    """Compare W(I)-orbits on W with the fine partition."""
    orbit_sizes = sorted(len(o) for o in mm.double_cosets)
    class_sizes = sorted(len(c.W_c) for c in part.classes)
    fibers = sum(len(c.sF) for c in part.classes)
    out = {
        "orbits_match_classes": orbit_sizes == class_sizes,
        "orbit_count": len(mm.double_cosets),
        "fiber_count": fibers,
        "bijection_with_fibers": len(mm.double_cosets) == fibers,
    }
    if not out["bijection_with_fibers"]:
        log.warning("W(I)-orbits on W number %d but the fibers sF_{I,c} number %d", len(mm.double_cosets), fibers)
    return out
