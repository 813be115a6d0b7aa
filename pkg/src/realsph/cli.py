"""Command line front end.

    realsph analyze --space sl3-so12 --report md
    realsph selftest

Exit codes: 0 ok, 1 failed check, 2 bad spec, 3 internal inconsistency.
"""
from __future__ import annotations

import argparse
import concurrent.futures as cf
import difflib
import itertools
import json
import logging
import multiprocessing
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from importlib import metadata, resources
from pathlib import Path

from . import elliptic as ell
from . import fans, orbits, rootcomb, specio
from . import linalg as la
from .errors import InconsistencyError, RealSphError, SpecError
from .spherical import contraction_limit_check, degeneration, degeneration_transitivity, levi_signature

log = logging.getLogger("realsph")

EXIT_OK, EXIT_FAIL, EXIT_SPEC, EXIT_INCONSISTENT = 0, 1, 2, 3


def version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


@dataclass
class Options:
    seed: int = 0
    tolerance: float = 1e-9
    samples: int = 200
    subset: tuple | None = None      # root names
    jobs: int = 1
    contraction: bool = True


def jsonable(x):
    if isinstance(x, Fraction):
        return la.fmt(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, frozenset, set)):
        seq = sorted(x) if isinstance(x, (frozenset, set)) else x
        return [jsonable(v) for v in seq]
    if hasattr(x, "value") and hasattr(x, "name"):      # enums
        return x.value
    if isinstance(x, float):
        return float("%.6g" % x)
    return x


class _Stage:
    """Name the failing stage in propagated errors."""

    def __init__(self, name):
        self.name = name

    def __enter__(self):
        log.debug("stage %s", self.name)

    def __exit__(self, et, ev, tb):
        if ev is not None and isinstance(ev, RealSphError) and not str(ev).startswith("["):
            raise type(ev)("[%s] %s" % (self.name, ev)) from ev
        return False


def _names(roots, I) -> list:
    return [roots.labels[i] for i in sorted(I)]


def _subsets(n, only=None) -> list:
    if only is not None:
        return [frozenset(only)]
    return [frozenset(c) for k in range(n + 1) for c in itertools.combinations(range(n), k)]


# ------------------------------------------------------------ per-I work

_CTX: dict = {}


def _contraction_job(I):
    b, opts = _CTX["built"], _CTX["opts"]
    c = contraction_limit_check(b.datum, b.roots, I, tol=opts.tolerance)
    return I, c


def _run_contractions(built, subsets, opts) -> dict:
    _CTX.update(built=built, opts=opts)
    if opts.jobs > 1 and len(subsets) > 1:
        ctx = multiprocessing.get_context("fork")
        with cf.ProcessPoolExecutor(max_workers=opts.jobs, mp_context=ctx) as ex:
            out = dict(ex.map(_contraction_job, subsets))
    else:
        out = dict(map(_contraction_job, subsets))
    return out


# -------------------------------------------------------------- sections

def _section_roots(b) -> dict:
    d, R, par = b.datum, b.roots, b.par
    return {
        "a_dim": par.a.dim,
        "aH_dim": d.aH.dim,
        "aZ_dim": d.aZ.dim,
        "rank": R.rank,
        "roots": R.labels,
        "S": [[la.fmt(x) for x in s] for s in R.S],
        "S_lattice": [list(map(int, s)) for s in R.S_lattice],
        "M_generators": sorted({par.label(m) for m in R.M_generators}),
        "edge_dim": R.edge.dim,
        "wonderful": R.edge.dim == 0 and abs(la.det([[Fraction(x) for x in s] for s in R.S_lattice])) == 1
        if len(R.S_lattice) == R.rank else False,
        "X0": d.g.element(d.levi.X0).to_json(),
        "dims": {"g": d.g.dim, "h": d.h.dim, "l_cap_h": d.l_cap_h.dim, "u": d.levi.u.dim},
    }


def _section_degenerations(b, subsets, opts, failures) -> list:
    d, R = b.datum, b.roots
    cons = _run_contractions(b, subsets, opts) if opts.contraction else {}
    out = []
    for I in subsets:
        D = degeneration(d, R, I)
        entry = {"I": _names(R, I), "dim": D.hI.dim, "checks": D.checks,
                 "aI_dim": D.aI.dim, "kept_components": len(D.kept)}
        if I:
            J = frozenset(sorted(I)[:-1])
            entry["transitivity_with"] = _names(R, J)
            entry["transitive"] = degeneration_transitivity(d, R, I, J)
            if not entry["transitive"]:
                failures.append("transitivity %s" % entry["I"])
        c = cons.get(I)
        if c is not None:
            entry["contraction"] = {
                "epsilon": la.fmt(c.epsilon) if c.epsilon is not None else None,
                "fitted_rate": c.fitted_rate,
                "distance_t5": c.distance_at(5),
                "distance_t20": c.distance_at(20),
                "monotone": c.monotone,
                "ok": c.ok,
            }
            if not c.ok:
                failures.append("contraction %s" % entry["I"])
        out.append(entry)
    return out


def _section_fan(b, subsets, failures, choices) -> dict:
    R = b.roots
    fan, coords, q = fans.fan_for_roots([tuple(map(int, s)) for s in R.S_lattice], R.rank)
    cert = fans.verify_fan(fan)
    out = {"dim": fan.dim, "S_coords": [list(c) for c in coords],
           "edge": [list(map(int, v)) for v in q.edge] if q else [],
           "maximal_cones": [list(map(list, c.generators)) for c in fan.maximal],
           "all_smooth": all(fans.is_smooth(c) for c in fan.maximal),
           "certificate": {"face_closed": cert.face_closed, "face_to_face": cert.face_to_face,
                           "covers": cert.covers, "smooth": cert.smooth},
           "faces": {}}
    if not cert.ok:
        failures.append("fan certificate")
    for I in subsets:
        cs = fans.cones_with_span(fan, I, coords)
        key = ",".join(_names(R, I)) or "{}"
        if not cs:
            failures.append("F_I empty for %s" % key)
            out["faces"][key] = {"F_I": []}
            continue
        chosen = min(cs, key=lambda t: (len(t[0].generators), t[0].generators))[0]
        db = fans.dual_basis_data(fan, I, chosen, coords)
        choices["j_I"][key] = db.j_I
        out["faces"][key] = {"F_I": [{"generators": list(map(list, c.generators)),
                                       "I_C": _names(R, ic)} for c, ic in cs],
                             "chosen": list(map(list, chosen.generators)),
                             "j_I": db.j_I, "psi": [list(p) for p in db.psi], "e": [list(v) for v in db.e],
                             "e_I": list(db.e_I), "k": db.k}
    return out


def torsion_setup(spec_data: dict, roots) -> orbits.TorsionSetup:
    t = spec_data["torsion"]
    r = roots.rank
    sig = lambda vs: [tuple(int(x) for x in v) for v in vs]
    idx = lambda names: frozenset(roots.index(n) for n in names)
    F_of_I = {idx(e["I"]): frozenset(sig(e["F"])) for e in t.get("F_of_I", [])}
    fibers = {idx(e["I"]): orbits.FiberData(e.get("W_I_sizes"), e.get("sF_sizes")) for e in t.get("fibers", [])}
    classes = {idx(e["I"]): [sig(c) for c in e["classes"]] for e in t.get("classes", [])}
    return orbits.TorsionSetup(r, frozenset(sig(t["F_M"])), tuple(sig(t["F"])), tuple(t["base_point"]),
                               F_of_I, fibers, classes,
                               bool(t.get("complex_group", False)) or t.get("F_of_I_default") == "full",
                               n_roots=len(roots.S))


def symmetric_datum(spec_data: dict) -> orbits.SymmetricDatum | None:
    s = spec_data.get("symmetric")
    if s is None:
        return None
    return orbits.SymmetricDatum(rootcomb.named(s["type"], s["rank"]), [tuple(w) for w in s["W_H"]])


def _signs(v) -> str:
    return "".join("+" if x > 0 else "-" for x in v)


def _section_orbits(b, subsets, failures, notes) -> dict:
    R = b.roots
    setup = torsion_setup(b.spec.data, R)
    oo = orbits.open_orbits(setup)
    out = {"F_R_size": len(setup.F_R), "F": [_signs(t) for t in setup.F], "F_M": sorted(_signs(m) for m in setup.F_M),
           "W": {lab: sorted(_signs(t) for t in o) for lab, o in zip(oo.labels, oo.orbits)},
           "W_size": oo.size, "W_R_size": len(oo.real_orbits), "per_I": {}}
    sd = symmetric_datum(b.spec.data)
    at_orbit = {}
    for e in b.spec.data["torsion"].get("orbit_h", []):
        if e["label"] not in oo.labels:
            raise SpecError("orbit_h names unknown orbit %r" % e["label"])
        bo = specio.build_at_orbit(b.spec, e["h"])
        if bo.roots.S_lattice != R.S_lattice:
            raise InconsistencyError("base point %s yields different spherical roots" % e["label"])
        at_orbit[e["label"]] = bo
    for I in subsets:
        key = ",".join(_names(R, I)) or "{}"
        part = orbits.fine_partition(setup, I)
        diag = orbits.two_group_diagram_check(setup, I)
        m = orbits.matching_map(setup, I)
        entry = {"F_of_I": sorted(_signs(f) or "1" for f in part.F_of_I),
                 "classes": [{"W_c": c.W_c, "F_Ic": sorted(_signs(f) or "1" for f in c.F_Ic),
                              "sF_size": len(c.sF), "W_Ic_size": len(c.W_Ic),
                              "images": {(_signs(k) or "1"): v for k, v in sorted(c.images.items())}}
                             for c in part.classes],
                 "cardinality_identity": part.cardinality_identity,
                 "supplied_fibers": None if part.supplied is None else
                 {"W_I_sizes": part.supplied.W_I_sizes, "sF_sizes": part.supplied.sF_sizes},
                 "resolution": None if part.resolution is None else [p + 1 for p in part.resolution],
                 "diagram": {"fiber_injective": diag.fiber_injective, "exact": diag.exact, "commutes": diag.commutes,
                             "quotient_iso": diag.quotient_iso, "real_split": diag.real_split},
                 "matching_map": {",".join(_signs(x) for x in k): v for k, v in sorted(m.items())}}
        if at_orbit:
            for c, cd in zip(entry["classes"], part.classes):
                sig = {lab: list(levi_signature(at_orbit[lab].datum, at_orbit[lab].roots, I))
                       for lab in cd.W_c if lab in at_orbit}
                c["levi_signature"] = sig
                if len({tuple(v) for v in sig.values()}) > 1:
                    failures.append("Levi signature not constant on a class for %s" % key)
        notes.extend(n.replace("I=%s" % sorted(I), "I=" + key, 1) for n in part.notes)
        if not part.cardinality_identity:
            failures.append("cardinality identity %s" % key)
        if not diag.ok:
            failures.append("two-group diagram %s" % key)
        if sd is not None and sd.rs.rank == len(R.S):
            mm = orbits.matsuki_model(sd, I)
            cmp = orbits.matsuki_vs_partition(mm, part)
            entry["matsuki"] = {"W_over_WH": mm.size, "W_I_orbits": mm.double_cosets, "local_size": len(mm.local), **cmp}
            if mm.size != oo.size:
                failures.append("Matsuki size %d vs |W| %d" % (mm.size, oo.size))
            if not cmp["bijection_with_fibers"]:
                notes.append("I=%s: %d W(I)-orbits on W but %d fibers sF_{I,c}" % (key, cmp["orbit_count"], cmp["fiber_count"]))
        out["per_I"][key] = entry
    return out


def _section_elliptic(b, subsets, opts, failures) -> dict:
    d, R, g, h = b.datum, b.roots, b.g, b.h
    e = b.spec.data.get("elliptic", {})
    cands = [specio._mat(w) for w in e.get("witnesses", [])]
    fam = e.get("family")
    if fam:
        cands.append(ell.t0_family(fam, e["n"], e.get("params") or [[1] * (e["n"] // 2), [1] * ((e["n"] + 1) // 2)],
                                   e.get("variant", "corrected"), strict=False))
    rep = ell.interior_elliptic_test(g, h, samples=opts.samples, seed=opts.seed, candidates=cands)
    out = rep.to_json()
    out["edge_obstruction_Z"] = ell.edge_obstruction(d, R)
    if out["edge_obstruction_Z"] and rep.verdict is ell.Verdict.INCONCLUSIVE:
        out["verdict"] = ell.Verdict.EMPTY_INTERIOR.value
        out["certificate"] = {"kind": "edge_obstruction", "edge_dim": R.edge.dim}
    proper = [I for I in subsets if len(I) < len(R.S)]
    out["edge_obstruction_proper"] = {",".join(_names(R, I)) or "{}": ell.edge_obstruction(d, R, I) for I in proper}
    if not all(out["edge_obstruction_proper"].values()):
        failures.append("edge obstruction missing for a proper degeneration")
    if out["edge_obstruction_Z"] and rep.verdict is ell.Verdict.SATISFIED:
        raise InconsistencyError("elliptic witness found although Z has a nonzero edge")
    if rep.verdict is ell.Verdict.SATISFIED:
        sl = ell.slice_from_datum(d)
        pr = ell.polar_dominance_check(g, h, sl, sample_points=[rep.witness], seed=opts.seed)
        out["polar"] = {"slice_dim": len(sl), "ranks": pr.ranks, "target": pr.target, "ok": pr.ok}
        if fam and e.get("n") and ell.family_pair(fam, e["n"])[0].basis == g.basis:
            fp = ell.polar_dominance_check(g, h, ell.family_basis(fam, e["n"], e.get("variant", "corrected")), seed=opts.seed)
            out["polar_family"] = {"slice_dim": len(ell.family_basis(fam, e["n"])), "ranks": fp.ranks, "ok": fp.ok}
        if not pr.ok:
            failures.append("polar dominance")
    return out


def weyl_tables(rs: rootcomb.RootSystem) -> dict:
    W = rootcomb.enumerate_weyl(rs)
    par = rootcomb.parseval_coefficients(rs, W)
    out = {"type": rs.name, "order": len(W), "subsets": {}}
    for k in range(rs.rank + 1):
        for I in itertools.combinations(range(rs.rank), k):
            I = frozenset(I)
            D = rootcomb.distinguished_reps(rs, I, W)
            WI = rootcomb.parabolic_subgroup(rs, I)
            sq = rootcomb.subquotient_WI(rs, I, W)
            tiles = rootcomb.tiling(rs, I, W)
            cert = rootcomb.verify_tiling(rs, I, tiles)
            nclass, q, coef = par[I]
            out["subsets"][rootcomb.subset_label(I)] = {
                "D_I": len(D), "W_of_I": len(WI), "product_ok": len(D) * len(WI) == len(W),
                "W_I_order": sq.order, "restriction_injective": sq.injective,
                "tiles": len(tiles), "tiling_disjoint": cert.disjoint, "tiling_covers": cert.covered,
                "fundamental_domain": len(rootcomb.fundamental_domain(rs, I, W)),
                "class_size": nclass, "parseval": la.fmt(coef),
            }
    return out


# ----------------------------------------------------------------- analyze

def analyze(spec: specio.SpaceSpec, opts: Options | None = None) -> dict:
    opts = opts or Options()
    failures: list = []
    notes: list = []
    choices: dict = {"j_I": {}}
    t0 = time.perf_counter()
    with _Stage("local structure"):
        b = specio.build(spec)
    R = b.roots
    only = None
    if opts.subset is not None:
        only = specio.subset_from_names(R, opts.subset)
    subsets = _subsets(len(R.S), only)
    report: dict = {"space": spec.name, "description": spec.data.get("description", "")}
    with _Stage("spherical roots"):
        report["spherical"] = _section_roots(b)
    choices["X0"] = report["spherical"]["X0"]
    with _Stage("degenerations"):
        report["degenerations"] = _section_degenerations(b, subsets, opts, failures)
    with _Stage("fan"):
        if R.S:
            report["fan"] = _section_fan(b, subsets, failures, choices)
    if "torsion" in spec.data:
        with _Stage("orbits"):
            report["orbits"] = _section_orbits(b, subsets, failures, notes)
    with _Stage("elliptic"):
        report["elliptic"] = _section_elliptic(b, subsets, opts, failures)
    sd = symmetric_datum(spec.data)
    if sd is not None:
        with _Stage("weyl"):
            report["weyl"] = weyl_tables(sd.rs)
    report["provenance"] = {"tool": "realsph", "version": version(), "seed": opts.seed,
                            "tolerance": opts.tolerance, "samples": opts.samples,
                            "subset": list(opts.subset) if opts.subset else None, "choices": choices}
    report["notes"] = notes
    report["failed_checks"] = failures
    log.info("analyzed %s in %.1fs", spec.name, time.perf_counter() - t0)
    return jsonable(report)


def summary(report: dict) -> dict:
    """Seed independent digest used for golden comparisons."""
    sph = report["spherical"]
    out = {"space": report["space"], "roots": sph["roots"], "S_lattice": sph["S_lattice"],
           "edge_dim": sph["edge_dim"], "aZ_dim": sph["aZ_dim"],
           "degenerations": {",".join(e["I"]) or "{}": {"dim": e["dim"],
                                                        "epsilon": e.get("contraction", {}).get("epsilon"),
                                                        "ok": e.get("contraction", {}).get("ok")}
                             for e in report["degenerations"]},
           "elliptic": {"verdict": report["elliptic"]["verdict"],
                        "certificate_kind": report["elliptic"]["certificate"].get("kind"),
                        "edge_obstruction_Z": report["elliptic"]["edge_obstruction_Z"],
                        "polar_ok": report["elliptic"].get("polar", {}).get("ok")},
           "failed_checks": report["failed_checks"]}
    if "fan" in report:
        out["fan"] = {"maximal_cones": report["fan"]["maximal_cones"], "certificate": report["fan"]["certificate"]}
    if "orbits" in report:
        o = report["orbits"]
        out["orbits"] = {"W_size": o["W_size"], "F_R_size": o["F_R_size"],
                         "per_I": {k: {"classes": [c["W_c"] for c in v["classes"]],
                                       "levi_signature": [c.get("levi_signature") for c in v["classes"]],
                                       "sF": [c["sF_size"] for c in v["classes"]],
                                       "W_I": [c["W_Ic_size"] for c in v["classes"]],
                                       "resolution": v["resolution"]} for k, v in o["per_I"].items()}}
    if "weyl" in report:
        out["weyl"] = report["weyl"]
    return out


# ------------------------------------------------------------------ render

def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=1) + "\n"


def render_md(report: dict) -> str:
    L = ["# %s" % report["space"], ""]
    if report.get("description"):
        L += [report["description"], ""]
    s = report["spherical"]
    L += ["## Spherical roots", "",
          "- dim a = %s, dim a_H = %s, rank = %s, edge dim = %s" % (s["a_dim"], s["aH_dim"], s["rank"], s["edge_dim"]),
          "- S = %s (lattice coordinates %s)" % (", ".join(s["roots"]), s["S_lattice"]),
          "- exponent generators: %s" % ", ".join(s["M_generators"]), ""]
    L += ["## Degenerations", "", "| I | dim h_I | epsilon | fitted | d(20) | ok |", "|---|---|---|---|---|---|"]
    for e in report["degenerations"]:
        c = e.get("contraction", {})
        L.append("| {%s} | %s | %s | %s | %s | %s |" % (",".join(e["I"]), e["dim"], c.get("epsilon"),
                                                       c.get("fitted_rate"), c.get("distance_t20"), c.get("ok")))
    L.append("")
    if "fan" in report:
        f = report["fan"]
        L += ["## Fan", "", "- maximal cones: %s" % f["maximal_cones"], "- certificate: %s" % f["certificate"], ""]
        for k, v in f["faces"].items():
            L.append("- I = {%s}: %d cones, j_I = %s, e_I = %s" % (k.strip("{}"), len(v["F_I"]), v.get("j_I"), v.get("e_I")))
        L.append("")
    if "orbits" in report:
        o = report["orbits"]
        L += ["## Open orbits", "", "- |F_R| = %d, |W| = %d" % (o["F_R_size"], o["W_size"])]
        for lab, ts in o["W"].items():
            L.append("- %s = %s" % (lab, ts))
        for k, v in o["per_I"].items():
            cls = "; ".join("%s (sF %d, W_I %d)" % (c["W_c"], c["sF_size"], c["W_Ic_size"]) for c in v["classes"])
            L.append("- I = {%s}: %s; identity %s" % (k.strip("{}"), cls, v["cardinality_identity"]))
        L.append("")
    e = report["elliptic"]
    L += ["## Elliptic criterion", "", "- verdict: %s (%s)" % (e["verdict"], e["certificate"].get("kind")),
          "- edge obstruction on Z: %s" % e["edge_obstruction_Z"]]
    if "polar" in e:
        L.append("- polar ranks %s, target %s" % (e["polar"]["ranks"], e["polar"]["target"]))
    L.append("")
    if "weyl" in report:
        w = report["weyl"]
        L += ["## Weyl tables (%s, |W| = %d)" % (w["type"], w["order"]), "",
              "| I | D_I | W(I) | W_I | tiles | parseval |", "|---|---|---|---|---|---|"]
        for k, v in w["subsets"].items():
            L.append("| %s | %d | %d | %d | %d | %s |" % (k, v["D_I"], v["W_of_I"], v["W_I_order"], v["tiles"], v["parseval"]))
        L.append("")
    if report["notes"]:
        L += ["## Notes", ""] + ["- %s" % n for n in report["notes"]] + [""]
    L += ["## Provenance", "", "```json", json.dumps(report["provenance"], sort_keys=True, indent=1), "```",
          "", "Failed checks: %s" % (", ".join(report["failed_checks"]) or "none"), ""]
    return "\n".join(L)


# ---------------------------------------------------------------- selftest

def golden_dir() -> Path:
    return Path(str(resources.files("realsph").joinpath("data", "golden")))


def _invariant_suite(seed: int) -> list:
    """Fast module-level checks; returns failure messages."""
    import random

    import numpy as np

    from . import spectral

    bad = []
    for kind, n in (("A", 2), ("B", 2), ("A", 3)):
        t = weyl_tables(rootcomb.named(kind, n))
        for k, v in t["subsets"].items():
            if not (v["product_ok"] and v["restriction_injective"] and v["tiling_disjoint"] and v["tiling_covers"]):
                bad.append("weyl %s%d %s" % (kind, n, k))
    rng = random.Random(seed)
    for _ in range(5):
        r = rng.randint(2, 3)
        while True:
            gens = [tuple(rng.randint(-2, 2) for _ in range(r)) for _ in range(r)]
            if la.det([[Fraction(x) for x in v] for v in gens]) != 0:
                break
        fan = fans.smooth_subdivide(fans.LatticeCone(gens, r))
        if not fans.verify_fan(fan).ok:
            bad.append("fan %s" % (gens,))
    for k in range(5):
        J = spectral.random_coisometry(2, 4, seed + k)
        if not spectral.onb_partial_isometry_check(J).ok or spectral.onb_partial_isometry_check(1.1 * J).ok:
            bad.append("coisometry %d" % k)
    n = np.arange(1, 2001)
    for gamma in (0.5, 1.0, 2.5):
        avg = spectral.block_averages(np.exp(1j * gamma * np.arange(1, 4001)))[: len(n)]
        if np.any(np.abs(avg) > spectral.cesaro_bound(gamma, n) + 1e-12):
            bad.append("cesaro %s" % gamma)
    return bad


def run_selftest(opts: Options, gdir: Path | None = None, names=specio.BUNDLED, out=None) -> int:
    out = out or sys.stdout
    gdir = Path(gdir) if gdir else golden_dir()
    status = EXIT_OK
    bad = _invariant_suite(opts.seed)
    for b in bad:
        print("FAIL invariant: %s" % b, file=out)
    if bad:
        status = EXIT_FAIL
    else:
        print("ok   invariant suite", file=out)
    for name in names:
        rep = analyze(specio.load(name), opts)
        got = json.dumps(summary(rep), sort_keys=True, indent=1).splitlines()
        path = gdir / ("%s.json" % name)
        if not path.exists():
            print("FAIL %s: missing golden file %s" % (name, path), file=out)
            status = EXIT_FAIL
            continue
        try:
            want = json.dumps(json.loads(path.read_text()), sort_keys=True, indent=1).splitlines()
        except json.JSONDecodeError as exc:
            print("FAIL %s: unreadable golden file (%s)" % (name, exc), file=out)
            status = EXIT_FAIL
            continue
        if got != want:
            print("FAIL %s: report differs from golden" % name, file=out)
            for line in difflib.unified_diff(want, got, "golden", "current", lineterm=""):
                print("  " + line, file=out)
            status = EXIT_FAIL
        else:
            print("ok   %s" % name, file=out)
    return status


def write_golden(opts: Options, gdir: Path, names=specio.BUNDLED) -> None:
    gdir.mkdir(parents=True, exist_ok=True)
    for name in names:
        rep = analyze(specio.load(name), opts)
        (gdir / ("%s.json" % name)).write_text(json.dumps(summary(rep), sort_keys=True, indent=1) + "\n")


# -------------------------------------------------------------------- main

def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="realsph", description="Combinatorial invariants of real spherical spaces.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(q):
        q.add_argument("--seed", type=int, default=0)
        q.add_argument("--tolerance", type=float, default=1e-9)
        q.add_argument("--samples", type=int, default=200)
        q.add_argument("--jobs", type=int, default=1, help="worker processes for per-I contraction checks")

    a = sub.add_parser("analyze", help="analyze one space")
    a.add_argument("--space", required=True, help="spec file or bundled name (%s)" % ", ".join(specio.BUNDLED))
    a.add_argument("--subset", default=None, help="comma-separated root names; restricts the per-I sections")
    a.add_argument("--report", choices=("json", "md"), default="json")
    a.add_argument("--output", "-o", default=None)
    a.add_argument("--no-contraction", action="store_true", help="skip the numeric contraction limits")
    common(a)
    s = sub.add_parser("selftest", help="invariant suite plus bundled regression set")
    s.add_argument("--golden-dir", default=None)
    s.add_argument("--write-golden", action="store_true", help="regenerate the golden files instead of comparing")
    common(s)
    sub.add_parser("list", help="list bundled examples")
    v = sub.add_parser("validate", help="check a spec against the schema and print its canonical form")
    v.add_argument("--space", required=True)
    sub.add_parser("schema", help="print the JSON schema of space specs")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.cmd == "list":
            print("\n".join(specio.BUNDLED))
            return EXIT_OK
        if args.cmd == "schema":
            print(json.dumps(specio.SCHEMA, sort_keys=True, indent=1))
            return EXIT_OK
        if args.cmd == "validate":
            print(specio.serialize(specio.load(args.space)))
            return EXIT_OK
        opts = Options(seed=args.seed, tolerance=args.tolerance, samples=args.samples, jobs=args.jobs)
        if args.cmd == "selftest":
            gdir = Path(args.golden_dir) if args.golden_dir else None
            if args.write_golden:
                write_golden(opts, gdir or golden_dir())
                return EXIT_OK
            return run_selftest(opts, gdir)
        if args.subset:
            opts.subset = tuple(x.strip() for x in args.subset.split(",") if x.strip())
        opts.contraction = not args.no_contraction
        rep = analyze(specio.load(args.space), opts)
        text = render_json(rep) if args.report == "json" else render_md(rep)
        if args.output:
            Path(args.output).write_text(text)
        else:
            sys.stdout.write(text)
        return EXIT_FAIL if rep["failed_checks"] else EXIT_OK
    except SpecError as exc:
        print("spec error: %s" % exc, file=sys.stderr)
        return EXIT_SPEC
    except InconsistencyError as exc:
        print("inconsistency: %s" % exc, file=sys.stderr)
        return EXIT_INCONSISTENT


if __name__ == "__main__":
    sys.exit(main())
