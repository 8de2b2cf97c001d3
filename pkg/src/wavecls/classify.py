"""Five-way classification of wave systems and report rendering."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .expr import Expr, evaluate, free_vars, to_str
from .invariants import (CaseAInvariants, CaseBInvariants, FOnlyInvariants,
                         build_caseA, build_caseB, build_F_only, build_P,
                         caseB_gate)
from .normalize import (NormalizationStep, NormalizedSystem,
                        identity_normalization, reduce_case_B, reduce_case_C,
                        reduce_P_const, reduce_separable)
from .oracle import ConstVerdict, ZeroVerdict, is_constant, is_identically_zero
from .simplify import simplify
from .system import WaveSystem


class SubclassTag(str, enum.Enum):
    P1 = "P1"
    P2 = "P2"
    P3 = "P3"
    P4 = "P4"
    P5 = "P5"


LINEARIZABLE = {SubclassTag.P3, SubclassTag.P4, SubclassTag.P5}

_CRITERIA = {
    SubclassTag.P1: ("equivalent iff the fourth-order classifying manifolds "
                     "of the K-invariants locally overlap; only P, R, K1-K3 "
                     "are printed, so positive overlap here is capped at "
                     "ConsistentUnknown"),
    SubclassTag.P2: ("equivalent iff the fourth-order classifying manifolds "
                     "of the L-invariants locally overlap; only L1-L4 are "
                     "printed, so positive overlap here is capped at "
                     "ConsistentUnknown"),
    SubclassTag.P3: ("equivalent iff the classifying curves coincide: same "
                     "functions H1, H2 with M2 = H1(M1) and "
                     "delta4(M1) = H2(M1)"),
    SubclassTag.P4: "equivalent iff same constant value of M1",
    SubclassTag.P5: ("all members are equivalent to the linear wave system "
                     "via the time rescale t -> t/m"),
}


@dataclass
class ClassifyConfig:
    trials: int = 32
    zeta: float = 1e-9
    seed: int = 0
    x0: Optional[float] = None


@dataclass
class ClassificationReport:
    tag: SubclassTag
    system: WaveSystem
    normalized: NormalizedSystem
    gates: Dict[str, dict] = field(default_factory=dict)
    invariants: Dict[str, Expr] = field(default_factory=dict)
    m1_value: Optional[float] = None
    f_only: Optional[FOnlyInvariants] = None
    case_a: Optional[CaseAInvariants] = None
    case_b: Optional[CaseBInvariants] = None
    config: ClassifyConfig = field(default_factory=ClassifyConfig)

    @property
    def linearizable(self) -> bool:
        return self.tag in LINEARIZABLE

    @property
    def symmetry_note(self) -> str:
        if self.linearizable:
            return "infinite-dimensional symmetry pseudo-group"
        return ("finite-dimensional symmetry group of dimension "
                "6 - dim C^(4) >= 2")

    @property
    def criterion(self) -> str:
        return _CRITERIA[self.tag]

    def trail(self) -> List[dict]:
        return [s.summary() for s in self.normalized.steps]


def _zv_dict(v: ZeroVerdict) -> dict:
    out = {"zero": v.identically_zero, "trials": v.trials,
           "tolerance": v.tolerance}
    if not v.identically_zero:
        out["witness"] = v.witness
        out["value"] = v.value
    return out


def _cv_dict(v: ConstVerdict) -> dict:
    out = {"constant": v.constant}
    if v.constant:
        out["value"] = v.value
    else:
        out["witness_var"] = v.witness_var
    return out


def classify(sys: WaveSystem,
             cfg: Optional[ClassifyConfig] = None) -> ClassificationReport:
    """Decide the invariant subclass of the system; every gate verdict is
    retained in the report."""
    cfg = cfg or ClassifyConfig()
    unbound = {n for n in (free_vars(sys.a) | free_vars(sys.b))
               if n not in ("x", "u")}
    if unbound:
        raise ValueError("unexpected names %s" % sorted(unbound))
    missing = [k for k, v in sys.params.items() if v is None]
    if missing:
        raise ValueError(
            "parameters %s need numeric values before classification"
            % missing)
    sys.validate(seed=cfg.seed)

    F, G = sys.F, sys.G
    box, params, seed = sys.box, sys.params, cfg.seed
    kw = dict(box=box, params=params, trials=cfg.trials, zeta=cfg.zeta,
              seed=seed)
    gates: Dict[str, dict] = {}

    from .expr import differentiate

    fu_zero = is_identically_zero(differentiate(F, "u"), **kw)
    gx_zero = is_identically_zero(differentiate(G, "x"), **kw)
    gates["F_u_zero"] = _zv_dict(fu_zero)
    gates["G_x_zero"] = _zv_dict(gx_zero)

    if fu_zero.identically_zero and gx_zero.identically_zero:
        gu_zero = is_identically_zero(differentiate(G, "u"), **kw)
        gates["G_u_zero"] = _zv_dict(gu_zero)
        if gu_zero.identically_zero:
            return _finish_P5(sys, identity_normalization(F), gates, cfg)

    if gx_zero.identically_zero:
        ns = reduce_case_B(F, G, box, params, seed=seed)
    elif fu_zero.identically_zero:
        ns = reduce_case_C(F, G, box, params, seed=seed)
    else:
        P = build_P(F, G)
        pv = is_constant(P, ("x", "u"), box, trials=cfg.trials,
                         zeta=cfg.zeta, params=params, seed=seed)
        gates["P_const"] = _cv_dict(pv)
        if not pv.constant:
            inv = build_caseA(F, G)
            return ClassificationReport(
                tag=SubclassTag.P1, system=sys,
                normalized=identity_normalization(F), gates=gates,
                invariants=inv.as_dict(), case_a=inv, config=cfg)
        ns = reduce_P_const(F, G, pv.value, box, params, seed=seed)

    return _case_B_route(sys, ns, gates, cfg)


def _case_B_route(sys: WaveSystem, ns: NormalizedSystem, gates, cfg):
    box, params, seed = sys.box, sys.params, cfg.seed
    kw = dict(box=box, params=params, trials=cfg.trials, zeta=cfg.zeta,
              seed=seed)
    gate = caseB_gate(ns.F_eff, ns.dx, ns.du)
    bz = is_identically_zero(gate, **kw)
    gates["lnF_xu_zero"] = _zv_dict(bz)
    if not bz.identically_zero:
        inv = build_caseB(ns.F_eff, ns.dx, ns.du)
        return ClassificationReport(
            tag=SubclassTag.P2, system=sys, normalized=ns, gates=gates,
            invariants=inv.as_dict(), case_b=inv, config=cfg)

    ns = reduce_separable(ns, box, params, seed=seed, x0=cfg.x0)
    x0 = ns.steps[-1].x0
    fu_eff = ns.du(ns.F_eff)
    fz = is_identically_zero(fu_eff, **kw)
    gates["F_u_eff_zero"] = _zv_dict(fz)
    if fz.identically_zero:
        return _finish_P5(sys, ns, gates, cfg)

    inv = build_F_only(ns.F_eff, du=ns.du, x0=x0)
    mv = is_constant(inv.M1, sorted(free_vars(inv.M1) & {"x", "u"}) or ("u",),
                     box, trials=cfg.trials, zeta=cfg.zeta, params=params,
                     seed=seed)
    gates["M1_const"] = _cv_dict(mv)
    if mv.constant:
        return ClassificationReport(
            tag=SubclassTag.P4, system=sys, normalized=ns, gates=gates,
            invariants={"M1": inv.M1}, m1_value=mv.value, f_only=inv,
            config=cfg)
    return ClassificationReport(
        tag=SubclassTag.P3, system=sys, normalized=ns, gates=gates,
        invariants=inv.as_dict(), f_only=inv, config=cfg)


def _finish_P5(sys: WaveSystem, ns: NormalizedSystem, gates, cfg):
    center = {n: 0.5 * (lo + hi) for n, (lo, hi) in sys.box.items()}
    m = evaluate(simplify(sys.bound(ns.F_eff)), center)
    ns.steps.append(NormalizationStep(
        kind="time_scale", dx=ns.dx, du=ns.du, m=m,
        note="t -> t/m with m = %g maps to u_t = v_x, v_t = u_x" % m))
    return ClassificationReport(
        tag=SubclassTag.P5, system=sys, normalized=ns, gates=gates,
        invariants={}, m1_value=None, config=cfg)


# ----------------------------------------------------------------------
# rendering

def report_dict(rep: ClassificationReport) -> dict:
    return {
        "tag": rep.tag.value,
        "system": {"a": to_str(rep.system.a), "b": to_str(rep.system.b),
                   "F": to_str(rep.system.F), "G": to_str(rep.system.G),
                   "params": rep.system.params},
        "trail": rep.trail(),
        "gates": rep.gates,
        "invariants": {k: to_str(v) for k, v in sorted(rep.invariants.items())},
        "m1_value": rep.m1_value,
        "linearizable": rep.linearizable,
        "symmetry": rep.symmetry_note,
        "equivalence_criterion": rep.criterion,
        "unavailable_invariants": _unavailable(rep.tag),
    }


def _unavailable(tag: SubclassTag) -> str:
    if tag is SubclassTag.P1:
        return "K4..K20 have no printed closed form"
    if tag is SubclassTag.P2:
        return "L5..L8 have no printed closed form"
    return ""


def explain(rep: ClassificationReport) -> str:
    """Deterministic human-readable rendering of a report."""
    lines = []
    lines.append("system: %s" % rep.system.describe())
    lines.append("subclass: %s" % rep.tag.value)
    lines.append("F = %s" % to_str(rep.system.F))
    lines.append("G = %s" % to_str(rep.system.G))
    for name, g in rep.gates.items():
        lines.append("gate %s: %s" % (name, g))
    for s in rep.trail():
        lines.append("step: %s" % s)
    for name, e in sorted(rep.invariants.items()):
        lines.append("%s = %s" % (name, to_str(e)))
    un = _unavailable(rep.tag)
    if un:
        lines.append("note: %s" % un)
    if rep.m1_value is not None:
        lines.append("M1 = %.12g" % rep.m1_value)
    lines.append("symmetry: %s" % rep.symmetry_note)
    lines.append("criterion: %s" % rep.criterion)
    lines.append("linearizable: %s" % rep.linearizable)
    return "\n".join(lines)
