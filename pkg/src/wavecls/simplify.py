"""Heuristic, semantics-preserving simplification.

Expressions are flattened to a sum of products with numeric coefficients;
like terms and like powers are collected, quotients are distributed termwise
over sums, and exp factors are merged through their arguments. Powers with
fractional exponents assume positive bases, which the sampling boxes
guarantee.
"""

from __future__ import annotations

import math
from typing import Dict, List, Optional, Tuple

from .expr import Call, Div, Expr, Mul, Neg, Num, Pow, to_str

# A product is a triple (coeff, factors, exp_terms):
#   coeff:     float
#   factors:   dict base-Expr -> exponent (float, or Expr when symbolic)
#   exp_terms: list of Exprs summed into the argument of a single exp()


def _is_num(e, v=None):
    return e.kind == "num" and (v is None or e.value == v)


def _numeric(e):
    """Float value of a canonically-numeric node (num or neg of num)."""
    if e.kind == "num":
        return e.value
    if e.kind == "neg" and e.args[0].kind == "num":
        return -e.args[0].value
    return None


def _merge_factor(factors, base, expo):
    if base in factors:
        old = factors[base]
        if isinstance(old, float) and isinstance(expo, float):
            new = old + expo
        else:
            oe = old if isinstance(old, Expr) else Num(old)
            ne = expo if isinstance(expo, Expr) else Num(expo)
            new = simplify(oe + ne)
            nv = _numeric(new)
            if nv is not None:
                new = nv
        if isinstance(new, float) and new == 0.0:
            del factors[base]
        else:
            factors[base] = new
    else:
        factors[base] = expo


def _prod_merge(p, q):
    c1, f1, x1 = p
    c2, f2, x2 = q
    out = dict(f1)
    for b, e in f2.items():
        _merge_factor(out, b, e)
    return (c1 * c2, out, x1 + x2)


def _prod_invert(p):
    c, f, x = p
    if c == 0.0:
        raise ZeroDivisionError("division by an expression that simplifies to 0")
    inv = {}
    for b, e in f.items():
        inv[b] = -e if isinstance(e, float) else simplify(Neg(e))
    return (1.0 / c, inv, [simplify(Neg(t)) for t in x])


def _prod_scale_exp(p, n):
    """p ** n for numeric n; returns None when the rewrite is unsound."""
    c, f, x = p
    if c < 0.0 and n != int(n):
        return None
    if c == 0.0:
        return (0.0, {}, []) if n > 0 else None
    out = {}
    for b, e in f.items():
        ne = e * n if isinstance(e, float) else simplify(Mul(e, Num(n)))
        if isinstance(ne, Expr):
            nv = _numeric(ne)
            if nv is not None:
                ne = nv
        if not (isinstance(ne, float) and ne == 0.0):
            out[b] = ne
    return (c ** n, out, [simplify(Mul(Num(n), t)) for t in x])


def _as_product(e: Expr):
    k = e.kind
    if k == "num":
        return (e.value, {}, [])
    if k in ("var", "param"):
        return (1.0, {e: 1.0}, [])
    if k == "neg":
        c, f, x = _as_product(e.args[0])
        return (-c, f, x)
    if k == "mul":
        return _prod_merge(_as_product(e.args[0]), _as_product(e.args[1]))
    if k == "div":
        return _prod_merge(_as_product(e.args[0]),
                           _prod_invert(_as_product(e.args[1])))
    if k == "call":
        arg = simplify(e.args[0])
        if e.name == "exp":
            return (1.0, {}, [arg])
        if e.name == "sqrt":
            p = _prod_scale_exp(_as_product(arg), 0.5)
            if p is not None:
                return p
            return (1.0, {Call("sqrt", arg): 1.0}, [])
        return (1.0, {Call(e.name, arg): 1.0}, [])
    if k == "pow":
        expo = simplify(e.args[1])
        base = simplify(e.args[0])
        ev = _numeric(expo)
        if ev is not None:
            if ev == 0.0:
                return (1.0, {}, [])
            p = _prod_scale_exp(_as_product(base), ev)
            if p is not None:
                return p
            return (1.0, {base: ev}, [])
        if base.kind == "pow":
            return _as_product(Pow(base.args[0], Mul(base.args[1], expo)))
        if base.kind == "call" and base.name == "exp":
            return (1.0, {}, [simplify(Mul(expo, base.args[0]))])
        if _is_num(base, 1.0):
            return (1.0, {}, [])
        return (1.0, {base: expo}, [])
    # add/sub: atomic factor holding a simplified sum
    s = simplify(e)
    if s.kind in ("add", "sub"):
        return (1.0, {s: 1.0}, [])
    if s.kind == "neg":
        inner = s.args[0]
        if inner.kind in ("add", "sub"):
            return (-1.0, {inner: 1.0}, [])
    return _as_product(s)


# term keys -----------------------------------------------------------

def _normalize_prod(p) -> Tuple[float, Tuple, Optional[Expr]]:
    """Fold the exp() accumulator into a canonical form and build a
    hashable key: (coeff, sorted factor items, exp-argument or None)."""
    coeff, factors, exp_terms = p
    arg = None
    if exp_terms:
        acc: Dict = {}
        for t in exp_terms:
            for key, c in _as_sum(t).items():
                acc[key] = acc.get(key, 0.0) + c
        arg = _rebuild_sum(acc)
        av = _numeric(arg)
        if av is not None:
            coeff *= math.exp(av)
            arg = None
    items = tuple(sorted(((b, e if isinstance(e, Expr) else ("#", e))
                          for b, e in factors.items()),
                         key=lambda kv: to_str(kv[0])))
    return coeff, items, arg


def _key_factors(items) -> Dict:
    out = {}
    for b, e in items:
        out[b] = e if isinstance(e, Expr) else float(e[1])
    return out


def _sum_add(acc: Dict, p):
    coeff, items, arg = _normalize_prod(p)
    key = (items, arg)
    acc[key] = acc.get(key, 0.0) + coeff


def _key_to_prod(key, coeff):
    items, arg = key
    return (coeff, _key_factors(items), [] if arg is None else [arg])


# sum decomposition ---------------------------------------------------

def _as_sum(e: Expr) -> Dict:
    """Map (factor-items, exp-arg) -> coefficient."""
    k = e.kind
    acc: Dict = {}
    if k in ("add", "sub"):
        sign = 1.0 if k == "add" else -1.0
        for key, c in _as_sum(e.args[0]).items():
            acc[key] = acc.get(key, 0.0) + c
        for key, c in _as_sum(e.args[1]).items():
            acc[key] = acc.get(key, 0.0) + sign * c
        return acc
    if k == "neg":
        return {key: -c for key, c in _as_sum(e.args[0]).items()}
    if k == "div":
        sn = {k2: c for k2, c in _as_sum(e.args[0]).items() if c != 0.0}
        sd = {k2: c for k2, c in _as_sum(e.args[1]).items() if c != 0.0}
        # numerator exactly proportional to denominator -> a constant
        if sn and sn.keys() == sd.keys():
            ks = iter(sn)
            k0 = next(ks)
            ratio = sn[k0] / sd[k0]
            if all(sn[k2] == ratio * sd[k2] for k2 in ks):
                _sum_add(acc, (ratio, {}, []))
                return acc
        inv = _prod_invert(_as_product(e.args[1]))
        for key, c in sn.items():
            _sum_add(acc, _prod_merge(_key_to_prod(key, c), inv))
        return acc
    if k == "mul":
        sa = _as_sum(e.args[0])
        sb = _as_sum(e.args[1])
        if len(sa) == 1 or len(sb) == 1:
            for ka, ca in sa.items():
                pa = _key_to_prod(ka, ca)
                for kb, cb in sb.items():
                    _sum_add(acc, _prod_merge(pa, _key_to_prod(kb, cb)))
            return acc
    _sum_add(acc, _as_product(e))
    return acc


# rebuilding ----------------------------------------------------------

def _rebuild_pow(base: Expr, expo) -> Expr:
    if isinstance(expo, Expr):
        ev = _numeric(expo)
        if ev is not None:
            expo = ev
    if isinstance(expo, float):
        if expo == 1.0:
            return base
        expo = Num(expo)
    return Pow(base, expo)


def _rebuild_product(coeff: float, factors: Dict, arg: Optional[Expr]) -> Expr:
    if coeff == 0.0:
        return Num(0)
    numer: List[Expr] = []
    denom: List[Expr] = []
    for base, expo in sorted(factors.items(), key=lambda kv: to_str(kv[0])):
        if isinstance(expo, Expr):
            ev = _numeric(expo)
            if ev is not None:
                expo = ev
        if isinstance(expo, float) and expo < 0.0:
            denom.append(_rebuild_pow(base, -expo))
        else:
            numer.append(_rebuild_pow(base, expo))
    if arg is not None:
        numer.append(Call("exp", arg))
    neg = coeff < 0.0
    mag = abs(coeff)
    expr: Optional[Expr] = None
    if mag != 1.0 or not numer:
        expr = Num(mag)
    for f in numer:
        expr = f if expr is None else Mul(expr, f)
    if denom:
        dex: Optional[Expr] = None
        for f in denom:
            dex = f if dex is None else Mul(dex, f)
        expr = Div(expr, dex)
    return Neg(expr) if neg else expr


def _rebuild_sum(acc: Dict) -> Expr:
    entries = []
    for (items, arg), c in acc.items():
        if c == 0.0:
            continue
        body = _rebuild_product(1.0, _key_factors(items), arg)
        entries.append((to_str(body), c, items, arg))
    if not entries:
        return Num(0)
    entries.sort(key=lambda t: t[0])
    expr: Optional[Expr] = None
    for _, c, items, arg in entries:
        term = _rebuild_product(abs(c), _key_factors(items), arg)
        if expr is None:
            expr = Neg(term) if c < 0.0 else term
        elif c < 0.0:
            expr = expr - term
        else:
            expr = expr + term
    return expr


_CACHE: Dict[Expr, Expr] = {}


def simplify(e: Expr) -> Expr:
    """Semantics-preserving canonicalization; idempotent on its own output."""
    hit = _CACHE.get(e)
    if hit is not None:
        return hit
    try:
        out = _rebuild_sum(_as_sum(e))
    except ZeroDivisionError:
        # a denominator simplifies to literal zero: leave the input intact,
        # evaluation will report the domain error
        out = e
    if len(_CACHE) > 200000:
        _CACHE.clear()
    _CACHE[e] = out
    _CACHE[out] = out
    return out
