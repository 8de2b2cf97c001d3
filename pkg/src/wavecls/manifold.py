"""Classifying manifolds, sampled as point clouds, and the equivalence
decision built on top of them."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import cKDTree

from .classify import ClassificationReport, SubclassTag
from .expr import Expr, differentiate
from .invariants import UX, VX, caseB_gate
from .program import compile_expr, eval_program
from .simplify import simplify
from .system import InadmissibleSystem

GUARD_TOL = 1e-6
RANK_SV_CUTOFF = 1e-8
CLOUD_GAP_FACTOR = 5.0    # multiples of the same-system resampling gap
M1_MATCH_TOL = 1e-9
CURVE_TOL = 1e-6
CURVE_GRID = 4001

EQUIVALENT = "Equivalent"
INEQUIVALENT = "Inequivalent"
UNKNOWN = "ConsistentUnknown"


@dataclass
class ClassifyingCloud:
    tag: SubclassTag
    var_names: Tuple[str, ...]
    inv_names: Tuple[str, ...]
    base: np.ndarray       # (n, len(var_names)) accepted sample coordinates
    values: np.ndarray     # (n, len(inv_names)) invariant values there
    attempted: int = 0
    rejected: int = 0
    guard_tol: float = GUARD_TOL

    @property
    def acceptance(self) -> float:
        return len(self.base) / max(self.attempted, 1)


@dataclass
class EquivalenceVerdict:
    status: str            # Equivalent | Inequivalent | ConsistentUnknown
    reason: str
    details: Dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.status == EQUIVALENT


def _programs(rep: ClassificationReport, exprs: Sequence[Expr],
              names: Sequence[str]):
    return [compile_expr(simplify(rep.system.bound(e)), tuple(names))
            for e in exprs]


def _guard_exprs(rep: ClassificationReport) -> List[Expr]:
    if rep.tag is SubclassTag.P1:
        F, G = rep.system.F, rep.system.G
        P = rep.case_a.P
        Fu = differentiate(F, "u")
        Px = differentiate(P, "x")
        Pu = differentiate(P, "u")
        return [simplify(g) for g in (
            Fu, VX, UX ** 2 - VX ** 2,
            P - F * G * UX + F * VX,
            -P + F * G * UX + F * VX,
            G * Px + G * Pu * UX - Pu * VX)]
    if rep.tag is SubclassTag.P2:
        ns = rep.normalized
        Fu = ns.du(ns.F_eff)
        return [simplify(g) for g in (
            Fu, VX, UX ** 2 - VX ** 2, 3 * UX - 5 * VX,
            caseB_gate(ns.F_eff, ns.dx, ns.du))]
    if rep.tag is SubclassTag.P3:
        return [rep.f_only.M1u]
    raise ValueError("subclass %s has no sampled classifying manifold"
                     % rep.tag.value)


def _cloud_axes(rep: ClassificationReport):
    if rep.tag is SubclassTag.P3:
        return ("u",), ("M1", "M2", "D4M1")
    names = tuple(sorted(rep.invariants))
    return ("x", "u", "u_x", "v_x"), names


def sample_cloud(rep: ClassificationReport, n: int = 400,
                 seed: int = 0,
                 guard_tol: float = GUARD_TOL) -> ClassifyingCloud:
    """Rejection-sample the invariant image over the system's box. Points
    where any guard denominator is within guard_tol of zero, or where any
    invariant fails to evaluate finitely, are discarded."""
    if rep.tag in (SubclassTag.P4, SubclassTag.P5):
        raise ValueError(
            "subclass %s is decided without a sampled manifold" % rep.tag.value)
    var_names, inv_names = _cloud_axes(rep)
    if rep.tag is SubclassTag.P3:
        inv_exprs = [rep.f_only.M1, rep.f_only.M2, rep.f_only.D4M1]
    else:
        inv_exprs = [rep.invariants[k] for k in inv_names]
    inv_progs = _programs(rep, inv_exprs, var_names)
    guard_progs = _programs(rep, _guard_exprs(rep), var_names)

    box = rep.system.box
    rng = np.random.default_rng(seed)
    kept_base: List[np.ndarray] = []
    kept_vals: List[np.ndarray] = []
    got = attempted = 0
    limit = max(200 * n, 20000)
    while got < n and attempted < limit:
        batch = max(n, 256)
        pts = np.column_stack([
            rng.uniform(*box[name], size=batch) for name in var_names])
        attempted += batch
        ok = np.ones(batch, dtype=bool)
        for gp in guard_progs:
            gv = eval_program(gp, pts)
            ok &= np.isfinite(gv) & (np.abs(gv) >= guard_tol)
        vals = np.column_stack([eval_program(p, pts) for p in inv_progs])
        ok &= np.isfinite(vals).all(axis=1)
        kept_base.append(pts[ok])
        kept_vals.append(vals[ok])
        got += int(ok.sum())
    if got < n and got < 0.01 * attempted:
        raise InadmissibleSystem(
            "guard rejection left %d of %d samples; the box misses the "
            "manifold's admissible region" % (got, attempted))
    base = np.concatenate(kept_base)[:n]
    vals = np.concatenate(kept_vals)[:n]
    return ClassifyingCloud(tag=rep.tag, var_names=var_names,
                            inv_names=inv_names, base=base, values=vals,
                            attempted=attempted, rejected=attempted - got,
                            guard_tol=guard_tol)


def estimate_dimension(cloud: ClassifyingCloud, rep: ClassificationReport,
                       h: float = 1e-5, max_points: int = 64) -> int:
    """Median rank of the finite-difference Jacobian of the invariant map
    across the cloud; this is the dimension of the invariant image."""
    var_names, inv_names = cloud.var_names, cloud.inv_names
    if rep.tag is SubclassTag.P3:
        inv_exprs = [rep.f_only.M1, rep.f_only.M2, rep.f_only.D4M1]
    else:
        inv_exprs = [rep.invariants[k] for k in inv_names]
    progs = _programs(rep, inv_exprs, var_names)
    pts = cloud.base[:max_points]
    ranks = []
    for p in pts:
        J = np.empty((len(progs), len(var_names)))
        good = True
        for j in range(len(var_names)):
            hi = p.copy(); hi[j] += h
            lo = p.copy(); lo[j] -= h
            for i, prog in enumerate(progs):
                vh = eval_program(prog, hi[None, :])[0]
                vl = eval_program(prog, lo[None, :])[0]
                J[i, j] = (vh - vl) / (2 * h)
            if not np.isfinite(J[:, j]).all():
                good = False
                break
        if not good:
            continue
        sv = np.linalg.svd(J, compute_uv=False)
        top = sv[0] if len(sv) else 0.0
        ranks.append(int((sv > RANK_SV_CUTOFF * max(top, 1.0)).sum()))
    if not ranks:
        raise InadmissibleSystem("no finite Jacobians on the cloud")
    return int(np.median(ranks))


def export_csv(cloud: ClassifyingCloud, path: str):
    header = ",".join(cloud.var_names + cloud.inv_names)
    data = np.column_stack([cloud.base, cloud.values])
    np.savetxt(path, data, delimiter=",", header=header, comments="")


# ----------------------------------------------------------------------
# equivalence decisions

def _curve_samples(rep: ClassificationReport,
                   guard_tol: float = GUARD_TOL) -> np.ndarray:
    """(M1, M2, D4M1) on a dense deterministic u-grid, guard-filtered and
    sorted by M1."""
    lo, hi = rep.system.box.get("u", (0.2, 2.0))
    u = np.linspace(lo, hi, CURVE_GRID)[:, None]
    progs = _programs(rep, [rep.f_only.M1, rep.f_only.M2, rep.f_only.D4M1],
                      ("u",))
    guard = _programs(rep, [rep.f_only.M1u], ("u",))[0]
    vals = np.column_stack([eval_program(p, u) for p in progs])
    gv = eval_program(guard, u)
    ok = (np.isfinite(vals).all(axis=1) & np.isfinite(gv)
          & (np.abs(gv) >= guard_tol))
    vals = vals[ok]
    if len(vals) < 16:
        raise InadmissibleSystem("classifying curve has almost no admissible "
                                 "points over the box")
    return vals[np.argsort(vals[:, 0])]


def _interp_curve(grid: np.ndarray, m1: np.ndarray,
                  f: np.ndarray) -> np.ndarray:
    """Cubic interpolation of a classifying curve sampled at uneven M1
    abscissae; falls back to linear when the data are too sparse."""
    from scipy.interpolate import CubicSpline
    xs, idx = np.unique(m1, return_index=True)
    ys = f[idx]
    if len(xs) < 4:
        return np.interp(grid, xs, ys)
    return CubicSpline(xs, ys)(grid)


def curve_compare_P3(repA: ClassificationReport, repB: ClassificationReport,
                     n: int = 400, tol: float = CURVE_TOL,
                     seed: int = 0) -> EquivalenceVerdict:
    """Compare the classifying curves (M1, M2) and (M1, delta4 M1) over the
    shared range of M1 values. The outer 5% quantile tails of M1 are dropped
    on each side; there the curve parametrization degenerates and sampling
    becomes too sparse to interpolate."""
    va = _curve_samples(repA)
    vb = _curve_samples(repB)
    m1a, m1b = va[:, 0], vb[:, 0]
    lo = max(np.quantile(m1a, 0.05), np.quantile(m1b, 0.05))
    hi = min(np.quantile(m1a, 0.95), np.quantile(m1b, 0.95))
    spans = min(np.ptp(m1a), np.ptp(m1b))
    if spans <= 0 or (hi - lo) < 0.1 * spans:
        return EquivalenceVerdict(
            INEQUIVALENT,
            "classifying curves cover essentially disjoint M1 ranges",
            {"rangeA": (float(m1a.min()), float(m1a.max())),
             "rangeB": (float(m1b.min()), float(m1b.max()))})
    grid = np.linspace(lo, hi, 500)
    devs = {}
    for col, name in ((1, "H1"), (2, "H2")):
        fa = _interp_curve(grid, m1a, va[:, col])
        fb = _interp_curve(grid, m1b, vb[:, col])
        rel = np.abs(fa - fb) / (1.0 + np.abs(fa) + np.abs(fb))
        devs[name] = float(rel.max())
    worst = max(devs.values())
    details = {"deviations": devs, "m1_overlap": (float(lo), float(hi))}
    if worst <= tol:
        return EquivalenceVerdict(
            EQUIVALENT, "classifying curves coincide on the shared M1 range",
            details)
    if worst > 10 * tol:
        return EquivalenceVerdict(
            INEQUIVALENT, "classifying curves differ beyond tolerance",
            details)
    return EquivalenceVerdict(
        UNKNOWN, "curve deviation falls in the inconclusive band", details)


def _cloud_gap(ca: ClassifyingCloud, cb: ClassifyingCloud) -> float:
    """Symmetric 90th-percentile nearest-neighbour distance between the two
    invariant images, in arcsinh-compressed coordinates (the raw invariants
    are heavy-tailed near the guard boundaries)."""
    A, B = np.arcsinh(ca.values), np.arcsinh(cb.values)
    ta, tb = cKDTree(A), cKDTree(B)
    dab, _ = tb.query(A)
    dba, _ = ta.query(B)
    return float(max(np.quantile(dab, 0.9), np.quantile(dba, 0.9)))


def decide_equivalence(repA: ClassificationReport,
                       repB: ClassificationReport,
                       n: int = 400, tol: float = CURVE_TOL,
                       seed: int = 0) -> EquivalenceVerdict:
    """Three-valued equivalence decision. Negative answers are definitive
    whenever the tags or available invariants separate the systems; a
    positive overlap for P1 or P2 is capped at ConsistentUnknown because
    the higher invariants needed to close the case have no printed form."""
    if repA.tag is not repB.tag:
        return EquivalenceVerdict(
            INEQUIVALENT,
            "different subclasses %s vs %s" % (repA.tag.value, repB.tag.value),
            {"tagA": repA.tag.value, "tagB": repB.tag.value})
    tag = repA.tag
    if tag is SubclassTag.P5:
        return EquivalenceVerdict(
            EQUIVALENT,
            "both systems linearize to u_t = v_x, v_t = u_x by a time rescale",
            {})
    if tag is SubclassTag.P4:
        ma, mb = repA.m1_value, repB.m1_value
        gap = abs(ma - mb)
        lim = M1_MATCH_TOL * (1.0 + max(abs(ma), abs(mb)))
        details = {"M1A": ma, "M1B": mb, "limit": lim}
        if gap <= lim:
            return EquivalenceVerdict(
                EQUIVALENT, "constant invariant M1 matches", details)
        return EquivalenceVerdict(
            INEQUIVALENT, "constant invariant M1 differs", details)
    if tag is SubclassTag.P3:
        return curve_compare_P3(repA, repB, n=n, tol=tol, seed=seed)

    a0 = sample_cloud(repA, n=n, seed=seed)
    a1 = sample_cloud(repA, n=n, seed=seed + 17)
    b0 = sample_cloud(repB, n=n, seed=seed + 1)
    b1 = sample_cloud(repB, n=n, seed=seed + 18)
    # resampling the same system calibrates the finite-sample gap scale
    base = max(_cloud_gap(a0, a1), _cloud_gap(b0, b1), 1e-12)
    gap = _cloud_gap(a0, b0)
    details = {"gap": gap, "baseline": base,
               "threshold": CLOUD_GAP_FACTOR * base}
    if gap > CLOUD_GAP_FACTOR * base:
        return EquivalenceVerdict(
            INEQUIVALENT,
            "invariant images are separated in the %s chart" % tag.value,
            details)
    return EquivalenceVerdict(
        UNKNOWN,
        "invariant images overlap, but the unprinted higher invariants "
        "would be needed for a definitive yes",
        details)
