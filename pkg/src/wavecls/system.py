"""Wave systems u_t = a(x,u) v_x, v_t = b(x,u) u_x and the derived
coefficient pair F = (a b)^(1/2), G = (b/a)^(1/2)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from .expr import Expr, Num, free_vars, parse, substitute, to_str
from .oracle import (DEFAULT_BOX, Box, OracleError, is_identically_zero,
                     sample_box)
from .program import compile_expr, eval_program
from .simplify import simplify


class InadmissibleSystem(ValueError):
    """a*b or b/a fails positivity on the box, or names are unbound."""


def build_F_G(a: Expr, b: Expr):
    """F = (a b)^(1/2), G = (b/a)^(1/2); then a = F/G and b = F G."""
    F = simplify((a * b) ** 0.5)
    G = simplify((b / a) ** 0.5)
    return F, G


@dataclass
class WaveSystem:
    a: Expr
    b: Expr
    params: Dict[str, float] = field(default_factory=dict)
    box: Box = field(default_factory=lambda: dict(DEFAULT_BOX))
    F: Expr = field(init=False)
    G: Expr = field(init=False)

    def __post_init__(self):
        bad = free_vars(self.a) | free_vars(self.b)
        bad -= {"x", "u"}
        if bad:
            raise InadmissibleSystem(
                "coefficients may depend on x and u only, found %s"
                % sorted(bad))
        self.F, self.G = build_F_G(self.a, self.b)

    @classmethod
    def from_strings(cls, a_text: str, b_text: str,
                     params: Optional[Dict[str, float]] = None,
                     box: Optional[Box] = None) -> "WaveSystem":
        params = dict(params or {})
        a = parse(a_text, parameters=params)
        b = parse(b_text, parameters=params)
        return cls(a, b, params=params,
                   box=dict(box) if box else dict(DEFAULT_BOX))

    def bound(self, e: Expr) -> Expr:
        """e with this system's parameter values substituted."""
        if not self.params:
            return e
        return substitute(e, {k: Num(v) for k, v in self.params.items()})

    def validate(self, n: int = 200, seed: int = 0):
        """Sample positivity of a*b and b/a; check F/G identities under the
        zero oracle. Raises InadmissibleSystem on failure."""
        rng = np.random.default_rng(seed)
        for label, e in (("a*b", self.a * self.b), ("b/a", self.b / self.a)):
            s = simplify(self.bound(e))
            names = sorted(free_vars(s))
            if names:
                pts = sample_box(self.box, names, n, rng)
                vals = eval_program(compile_expr(s, names), pts)
            else:
                vals = np.full(1, s.value if s.kind == "num" else np.nan)
            good = np.isfinite(vals)
            if not good.any() or (vals[good] <= 0.0).any():
                raise InadmissibleSystem(
                    "%s is not positive on the sampling box" % label)
        for label, e in (("a - F/G", self.a - self.F / self.G),
                         ("b - F*G", self.b - self.F * self.G)):
            try:
                v = is_identically_zero(e, self.box, params=self.params,
                                        seed=seed)
            except OracleError as exc:
                raise InadmissibleSystem(str(exc))
            if not v.identically_zero:
                raise InadmissibleSystem(
                    "%s does not vanish (value %g at %r)"
                    % (label, v.value, v.witness))

    def describe(self) -> str:
        return "u_t = (%s) v_x,  v_t = (%s) u_x" % (to_str(self.a),
                                                    to_str(self.b))
