"""Randomized zero-equivalence and constancy oracles.

Zero testing for this function class is undecidable, so verdicts are
probabilistic: NonZero always carries a witness, IdenticallyZero can be a
false positive with vanishing probability as trials grow. The round-off
guard compares |value| against zeta * (1 + local scale), where the local
scale is the magnitude of the top-level additive terms at the sample point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from .expr import Expr, Num, differentiate, evaluate, free_vars, substitute
from .program import compile_expr, eval_program
from .simplify import simplify

Box = Dict[str, Tuple[float, float]]

DEFAULT_TRIALS = 32
DEFAULT_ZETA = 1e-9

# generic signs: u_x^2 != v_x^2 and the K/L denominators stay away from 0
DEFAULT_BOX: Box = {
    "x": (0.2, 2.0),
    "u": (0.2, 2.0),
    "u_x": (0.3, 1.5),
    "v_x": (-1.5, -0.3),
}


class OracleError(RuntimeError):
    """Sampling failed (no admissible point found, unbound names, ...)."""


@dataclass(frozen=True)
class ZeroVerdict:
    identically_zero: bool
    trials: int
    tolerance: float
    witness: Optional[Dict[str, float]] = None
    value: Optional[float] = None

    def __bool__(self):
        return self.identically_zero


@dataclass(frozen=True)
class ConstVerdict:
    constant: bool
    value: Optional[float] = None
    witness_var: Optional[str] = None
    zero_verdicts: Tuple[ZeroVerdict, ...] = field(default_factory=tuple)

    def __bool__(self):
        return self.constant


def _additive_terms(e: Expr, sign=1.0, out=None) -> List[Tuple[float, Expr]]:
    if out is None:
        out = []
    if e.kind == "add":
        _additive_terms(e.args[0], sign, out)
        _additive_terms(e.args[1], sign, out)
    elif e.kind == "sub":
        _additive_terms(e.args[0], sign, out)
        _additive_terms(e.args[1], -sign, out)
    elif e.kind == "neg":
        _additive_terms(e.args[0], -sign, out)
    else:
        out.append((sign, e))
    return out


def sample_box(box: Box, names: Iterable[str], n: int,
               rng: np.random.Generator) -> np.ndarray:
    cols = []
    for name in names:
        try:
            lo, hi = box[name]
        except KeyError:
            raise OracleError("no box interval for %r" % name)
        if not (hi > lo):
            raise OracleError("degenerate interval for %r" % name)
        cols.append(rng.uniform(lo, hi, size=n))
    if not cols:
        return np.empty((n, 0))
    return np.column_stack(cols)


def _bind(e: Expr, params: Optional[Dict[str, float]]) -> Expr:
    if params:
        e = substitute(e, {k: Num(v) for k, v in params.items()})
    return e


def is_identically_zero(e: Expr, box: Optional[Box] = None,
                        trials: int = DEFAULT_TRIALS,
                        zeta: float = DEFAULT_ZETA,
                        params: Optional[Dict[str, float]] = None,
                        seed: int = 0) -> ZeroVerdict:
    """Evaluate simplify(e) at `trials` uniform points of the box; NonZero
    with a witness on the first value exceeding the guard."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    box = DEFAULT_BOX if box is None else box
    s = simplify(_bind(e, params))
    if s.kind == "num":
        if s.value == 0.0:
            return ZeroVerdict(True, trials, zeta)
        return ZeroVerdict(False, trials, zeta, witness={}, value=s.value)
    names = sorted(free_vars(s))
    prog = compile_expr(s, names)
    term_progs = [compile_expr(simplify(t), names)
                  for _, t in _additive_terms(s)]
    rng = np.random.default_rng(seed)
    accepted = 0
    attempts = 0
    max_attempts = 64 * trials
    while accepted < trials:
        budget = min(max(trials - accepted, 8), 256)
        if attempts >= max_attempts:
            raise OracleError(
                "no admissible sample point after %d attempts" % attempts)
        pts = sample_box(box, names, budget, rng)
        attempts += budget
        vals = eval_program(prog, pts)
        scales = np.zeros(budget)
        ok = np.isfinite(vals)
        for tp in term_progs:
            tv = eval_program(tp, pts)
            ok &= np.isfinite(tv)
            scales += np.abs(np.where(np.isfinite(tv), tv, 0.0))
        for i in range(budget):
            if not ok[i]:
                continue
            accepted += 1
            if abs(vals[i]) > zeta * (1.0 + scales[i]):
                witness = dict(zip(names, map(float, pts[i])))
                return ZeroVerdict(False, accepted, zeta,
                                   witness=witness, value=float(vals[i]))
            if accepted >= trials:
                break
    return ZeroVerdict(True, trials, zeta)


def is_constant(e: Expr, variables: Iterable[str],
                box: Optional[Box] = None,
                trials: int = DEFAULT_TRIALS,
                zeta: float = DEFAULT_ZETA,
                params: Optional[Dict[str, float]] = None,
                seed: int = 0) -> ConstVerdict:
    """Constant iff every partial over `variables` passes the zero oracle;
    the constant's value is taken at the box center."""
    box = DEFAULT_BOX if box is None else box
    bound = _bind(e, params)
    verdicts = []
    for v in sorted(variables):
        d = simplify(differentiate(bound, v))
        zv = is_identically_zero(d, box, trials=trials, zeta=zeta, seed=seed)
        verdicts.append(zv)
        if not zv.identically_zero:
            return ConstVerdict(False, witness_var=v,
                                zero_verdicts=tuple(verdicts))
    center = {name: 0.5 * (lo + hi) for name, (lo, hi) in box.items()}
    value = evaluate(simplify(bound), center)
    return ConstVerdict(True, value=value, zero_verdicts=tuple(verdicts))
