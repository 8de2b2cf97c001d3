"""Differential invariants of the contact symmetry pseudo-group, built as
expressions in (x, u, u_x, v_x) from a system's coefficient pair (F, G).

Derivative symbols are injected through `Derivation` operators so the same
formulas serve both the raw chart (plain partials) and normalized charts
(pullback derivations supplied by the normalize module).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .expr import Expr, Num, Var, differentiate, substitute
from .simplify import simplify

X = Var("x")
U = Var("u")
UX = Var("u_x")
VX = Var("v_x")


class GateViolation(ValueError):
    """A subclass gate predicate failed for the requested construction."""


@dataclass(frozen=True)
class Derivation:
    """First-order derivation c_x d/dx + c_u d/du on expressions in (x, u).
    Jet coordinates u_x, v_x are held fixed."""

    cx: Expr
    cu: Expr
    label: str = ""

    def __call__(self, e: Expr) -> Expr:
        return simplify(self.cx * differentiate(e, "x")
                        + self.cu * differentiate(e, "u"))

    def describe(self) -> str:
        return self.label or "(%s)*d/dx + (%s)*d/du" % (self.cx, self.cu)


PARTIAL_X = Derivation(Num(1), Num(0), "d/dx")
PARTIAL_U = Derivation(Num(0), Num(1), "d/du")


def build_P(F: Expr, G: Expr,
            dx: Derivation = PARTIAL_X, du: Derivation = PARTIAL_U) -> Expr:
    """P = G_x F^2 / F_u, the pivotal case-A function."""
    return simplify(dx(G) * F ** 2 / du(F))


@dataclass(frozen=True)
class CaseAInvariants:
    """P, R, K1..K3 for systems with G_x != 0, F_u != 0, P != const.
    K4..K20 exist but have no printed closed form and are not constructed."""

    P: Expr
    R: Expr
    K1: Expr
    K2: Expr
    K3: Expr

    def as_dict(self):
        return {"P": self.P, "R": self.R, "K1": self.K1, "K2": self.K2,
                "K3": self.K3}


def build_caseA(F: Expr, G: Expr) -> CaseAInvariants:
    dx, du = PARTIAL_X, PARTIAL_U
    Fu = du(F)
    Fx = dx(F)
    Fuu = du(Fu)
    Fxu = dx(Fu)
    Gu = du(G)
    P = build_P(F, G)
    Px = dx(P)
    Pu = du(P)

    R = simplify(
        Fu * (F * G * Px + P * Pu) * (P - F * G * UX + F * VX) ** 2
        / (2 * F ** 3 * (G * Px + (G * UX - VX) * Pu) ** 2))

    K1 = simplify(
        2 * F * VX
        * (2 * Fu ** 2 * G * P + Fu * Gu * F * P - Fuu * F * G * P
           - G ** 2 * F ** 2 * Fxu - Fu * F * G * Pu + G ** 2 * Fx * Fu * F)
        / ((P - UX * G * F + F * VX) * Fu ** 2 * G
           * (-P + UX * G * F + F * VX)))

    K2 = simplify(
        Fu * (-P + UX * G * F + F * VX) * (-P + UX * G * F - F * VX) ** 2
        / (2 * F ** 3 * VX * (UX * Pu * G + Px * G - Pu * VX)))

    K3 = simplify(
        VX * (P * Pu + F * G * Px)
        / ((F * G * UX + F * VX - P) * (G * Px + G * Pu * UX - Pu * VX)))

    return CaseAInvariants(P=P, R=R, K1=K1, K2=K2, K3=K3)


@dataclass(frozen=True)
class CaseBInvariants:
    """L1..L4 for systems u_t = F v_x, v_t = F u_x with (ln F)_{xu} != 0.
    L5..L8 have no printed closed form. L_{1,x} and L_{2,x} are partial
    x-derivatives holding u, u_x, v_x fixed."""

    L1: Expr
    L2: Expr
    L3: Expr
    L4: Expr

    def as_dict(self):
        return {"L1": self.L1, "L2": self.L2, "L3": self.L3, "L4": self.L4}


def caseB_gate(F: Expr, dx: Derivation = PARTIAL_X,
               du: Derivation = PARTIAL_U) -> Expr:
    """F F_xu - F_x F_u; vanishes exactly when (ln F)_{xu} does."""
    return simplify(F * dx(du(F)) - dx(F) * du(F))


def build_caseB(F: Expr, dx: Derivation = PARTIAL_X,
                du: Derivation = PARTIAL_U) -> CaseBInvariants:
    Fu = du(F)
    Fx = dx(F)
    Fuu = du(Fu)
    Fxu = dx(Fu)

    L1 = simplify(
        (3 * VX ** 2 * Fu ** 2 - 3 * Fuu * VX ** 2 * F - 5 * VX * Fxu * F
         + 5 * VX * Fx * Fu - 3 * UX * Fx * Fu + 3 * Fuu * UX ** 2 * F
         - 3 * UX ** 2 * Fu ** 2 + 3 * UX * Fxu * F)
        / ((UX ** 2 - VX ** 2) * Fu ** 2))

    L2 = simplify(
        (Fu ** 2 * L1 * UX + 8 * VX * Fu ** 2 - 8 * VX * F * Fuu
         + Fu ** 2 * L1 * VX)
        / (Fu ** 2 * (3 * UX - 5 * VX)))

    L1x = dx(L1)
    L2x = dx(L2)
    gate = simplify(F * Fxu - Fx * Fu)

    L3 = simplify(
        Num(1) / 64 * Fu ** 3 * (UX ** 2 - VX ** 2)
        * (6 * UX ** 2 * Fu * L2 * L1 - UX ** 2 * Fu * L1 ** 2
           - 9 * UX ** 2 * Fu * L2 ** 2 + 8 * Fx * L1 * VX
           - 24 * F * VX * L2x + 8 * F * L1x * VX
           - 6 * Fu * VX ** 2 * L2 * L1 + Fu * L1 ** 2 * VX ** 2
           - 24 * Fx * L2 * VX + 9 * Fu * VX ** 2 * L2 ** 2)
        / (VX ** 2 * gate ** 2))

    L4 = simplify(
        -(Num(1) / 16) * Fu * (UX ** 2 - VX ** 2)
        * (6 * UX ** 2 * Fu * L2 ** 2 + 9 * UX ** 2 * Fu * L2
           - 3 * UX ** 2 * Fu * L1 - 4 * UX ** 2 * Fu * L1 ** 2
           + 10 * UX ** 2 * Fu * L2 * L1 + 18 * UX * Fx * L2
           - 6 * UX * Fx * L1 - 6 * Fu * VX ** 2 * L2 ** 2
           + 10 * Fx * L1 * VX + 4 * Fu * L1 ** 2 * VX ** 2
           + 16 * F * L1x * VX - 9 * Fu * VX ** 2 * L2
           + 3 * Fu * L1 * VX ** 2 - 30 * Fx * L2 * VX
           - 10 * Fu * VX ** 2 * L2 * L1)
        / gate)

    return CaseBInvariants(L1=L1, L2=L2, L3=L3, L4=L4)


@dataclass(frozen=True)
class FOnlyInvariants:
    """M1, M2, M3 plus the derivation data for systems u_t = F(u) v_x,
    v_t = F(u) u_x. delta3 = M_{1,u}^{-1} d/du and
    delta4 = (1 - 4 F^2 M_{1,u}^2 / F_u^2) M_{1,u}^{-1} d/du."""

    M1: Expr
    M2: Expr
    M3: Expr
    M1u: Expr
    D4M1: Expr
    x0: Optional[float] = None

    def as_dict(self):
        return {"M1": self.M1, "M2": self.M2, "M3": self.M3,
                "D4M1": self.D4M1}


def build_M1(F: Expr, du: Derivation = PARTIAL_U) -> Expr:
    Fu = du(F)
    Fuu = du(Fu)
    Fuuu = du(Fuu)
    return simplify(
        (4 * F * Fu ** 2 * Fuu + 4 * F ** 2 * Fuu ** 2
         - 4 * F ** 2 * Fu * Fuuu - 3 * Fu ** 4) / Fu ** 4)


def build_F_only(F: Expr, du: Derivation = PARTIAL_U,
                 x0: Optional[float] = None) -> FOnlyInvariants:
    """M-invariants of F; when F (or du) still carries x-dependence from a
    normalization chart, the slice x = x0 is frozen at the end."""
    Fu = du(F)
    M1 = build_M1(F, du)
    M1u = du(M1)

    if M1u.kind == "num" and M1u.value == 0.0:
        # M1 structurally constant: every higher invariant vanishes
        M2 = M3 = D4M1 = Num(0)
    else:
        M1uu = du(M1u)
        M2 = simplify(
            (2 * F * du(Fu) * M1u - F * Fu * M1uu - 2 * Fu ** 2 * M1u)
            / (F * Fu * M1u ** 2))
        D4M1 = simplify(1 - 4 * F ** 2 * M1u ** 2 / Fu ** 2)
        # multi-index (3,4) applies delta4 first, then delta3
        d3_D4M1 = simplify(du(D4M1) / M1u)
        M3 = simplify(-(M2 * D4M1 + d3_D4M1))

    if x0 is not None:
        sub = {"x": Num(x0)}
        M1, M2, M3 = (simplify(substitute(e, sub)) for e in (M1, M2, M3))
        M1u = simplify(substitute(M1u, sub))
        D4M1 = simplify(substitute(D4M1, sub))
    return FOnlyInvariants(M1=M1, M2=M2, M3=M3, M1u=M1u, D4M1=D4M1, x0=x0)


def delta3(inv: FOnlyInvariants, g: Expr,
           du: Derivation = PARTIAL_U) -> Expr:
    return simplify(du(g) / inv.M1u)


def delta4(inv: FOnlyInvariants, g: Expr,
           du: Derivation = PARTIAL_U) -> Expr:
    return simplify(inv.D4M1 * du(g) / inv.M1u)
