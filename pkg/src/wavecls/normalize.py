"""Changes of variables realized as pullback derivations and jet rules.

No potential H(x,u) is ever integrated: each reduction only records how
partial derivatives and first-order jet coordinates transform, which is all
the downstream invariants need.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .expr import Expr, Num, differentiate, to_str
from .invariants import PARTIAL_U, PARTIAL_X, Derivation, GateViolation, caseB_gate
from .oracle import Box, is_identically_zero
from .simplify import simplify


@dataclass
class NormalizationStep:
    kind: str            # caseB | caseC | p_const | separable | time_scale
    dx: Derivation
    du: Derivation
    # jet rule: new u_x = jet_alpha + jet_beta * u_x, new v_x = v_x
    # (meaningless for the case-C swap, which redefines the jets wholesale)
    jet_alpha: Optional[Expr] = None
    jet_beta: Optional[Expr] = None
    swap: bool = False
    m: Optional[float] = None
    x0: Optional[float] = None
    note: str = ""

    def summary(self) -> Dict:
        out = {"kind": self.kind, "note": self.note}
        if self.jet_alpha is not None:
            out["jet_rule"] = "u_x -> (%s) + (%s)*u_x" % (
                to_str(self.jet_alpha), to_str(self.jet_beta))
        if self.swap:
            out["swap"] = "tbar=v, xbar=u, ubar=xtilde, vbar=t"
        if self.m is not None:
            out["m"] = self.m
        if self.x0 is not None:
            out["x0"] = self.x0
        return out


@dataclass
class NormalizedSystem:
    """Effective coefficient F (with G == 1) plus the composed pullback
    derivations, all expressed over the original (x, u) chart."""

    F_eff: Expr
    dx: Derivation
    du: Derivation
    steps: List[NormalizationStep] = field(default_factory=list)


def _require_zero(e: Expr, what: str, box: Optional[Box],
                  params: Optional[Dict[str, float]], seed: int):
    v = is_identically_zero(e, box, params=params, seed=seed)
    if not v.identically_zero:
        raise GateViolation("%s does not vanish (value %g at %r)"
                            % (what, v.value, v.witness))
    return v


def reduce_case_B(F: Expr, G: Expr, box: Optional[Box] = None,
                  params: Optional[Dict[str, float]] = None,
                  seed: int = 0) -> NormalizedSystem:
    """G depends on u only: straighten with d/du_new = (1/G) d/du.
    The effective F is unchanged as a function of the original (x, u)."""
    _require_zero(differentiate(G, "x"), "G_x (case B gate)", box, params, seed)
    du = Derivation(Num(0), simplify(1 / G), "(1/G) d/du")
    step = NormalizationStep(
        kind="caseB", dx=PARTIAL_X, du=du,
        jet_alpha=Num(0), jet_beta=simplify(G),
        note="u-straightening; no explicit potential constructed")
    return NormalizedSystem(F_eff=simplify(F), dx=PARTIAL_X, du=du,
                            steps=[step])


def reduce_case_C(F: Expr, G: Expr, box: Optional[Box] = None,
                  params: Optional[Dict[str, float]] = None,
                  seed: int = 0) -> NormalizedSystem:
    """F depends on x only: straighten x with F d/dx, then swap charts
    (tbar = v, xbar = u, ubar = xtilde, vbar = t). The swapped coefficient
    is 1/G with the roles of the arguments exchanged, realized here by
    pointing the new x-derivation along u and the new u-derivation along
    F d/dx."""
    _require_zero(differentiate(F, "u"), "F_u (case C gate)", box, params, seed)
    dx = Derivation(Num(0), Num(1), "d/du (swapped x-direction)")
    du = Derivation(simplify(F), Num(0), "F d/dx (swapped u-direction)")
    step = NormalizationStep(
        kind="caseC", dx=dx, du=du, swap=True,
        note="hodograph-type swap after x-straightening")
    return NormalizedSystem(F_eff=simplify(1 / G), dx=dx, du=du, steps=[step])


def reduce_P_const(F: Expr, G: Expr, m: float, box: Optional[Box] = None,
                   params: Optional[Dict[str, float]] = None,
                   seed: int = 0) -> NormalizedSystem:
    """P = m constant: the chart with dH = -m/F dx + G du exists; its
    pullback partials are d/dx + m/(F G) d/du and (1/G) d/du."""
    compat = simplify(differentiate(simplify(-m / F), "u")
                      - differentiate(G, "x"))
    v = is_identically_zero(compat, box, params=params, seed=seed)
    if not v.identically_zero:
        warnings.warn(
            "P-const compatibility residual d/du(-m/F) - d/dx(G) = %g at %r; "
            "proceeding on the strength of the P = const gate"
            % (v.value, v.witness))
    du = Derivation(Num(0), simplify(1 / G), "(1/G) d/du")
    dx = Derivation(Num(1), simplify(m / (F * G)), "d/dx + (m/(F G)) d/du")
    step = NormalizationStep(
        kind="p_const", dx=dx, du=du,
        jet_alpha=simplify(-m / F), jet_beta=simplify(G), m=m,
        note="potential chart for P = %g; H never materialized" % m)
    return NormalizedSystem(F_eff=simplify(F), dx=dx, du=du, steps=[step])


def reduce_separable(ns: NormalizedSystem, box: Optional[Box] = None,
                     params: Optional[Dict[str, float]] = None,
                     seed: int = 0, x0: Optional[float] = None) -> NormalizedSystem:
    """(ln F) has vanishing mixed derivative in the current chart: the
    x-dependence is a pure scale factor, so downstream M-invariants are
    evaluated on the frozen slice x = x0 (default: box center)."""
    gate = caseB_gate(ns.F_eff, ns.dx, ns.du)
    _require_zero(gate, "F F_xu - F_x F_u (separability gate)",
                  box, params, seed)
    if x0 is None:
        from .oracle import DEFAULT_BOX
        lo, hi = (box or DEFAULT_BOX).get("x", DEFAULT_BOX["x"])
        x0 = 0.5 * (lo + hi)
    step = NormalizationStep(
        kind="separable", dx=ns.dx, du=ns.du, x0=x0,
        note="scale factor dropped via degree-0 homogeneity of M1")
    return NormalizedSystem(F_eff=ns.F_eff, dx=ns.dx, du=ns.du,
                            steps=ns.steps + [step])


def swap_jet_rules(u_t: float, u_x: float, v_t: float, v_x: float) -> Dict[str, float]:
    """First-jet transformation of the swap tbar=v, xbar=u, ubar=x, vbar=t
    (chain rule through the inverse Jacobian of (t,x) -> (v,u))."""
    J = v_t * u_x - v_x * u_t
    if J == 0.0:
        raise ZeroDivisionError("degenerate jet for the hodograph swap")
    return {
        "ubar_tbar": -u_t / J,
        "ubar_xbar": v_t / J,
        "vbar_tbar": u_x / J,
        "vbar_xbar": -v_x / J,
    }


def identity_normalization(F: Expr) -> NormalizedSystem:
    return NormalizedSystem(F_eff=simplify(F), dx=PARTIAL_X, du=PARTIAL_U,
                            steps=[])
