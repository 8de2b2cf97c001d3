"""Immutable expression trees: construction, parsing, printing, evaluation,
exact symbolic differentiation."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Tuple

FUNCTIONS = (
    "exp", "ln", "sqrt", "sin", "cos", "tan",
    "sinh", "cosh", "tanh", "arctan",
)

DEFAULT_VARIABLES = frozenset({"x", "u", "u_x", "v_x", "t", "v"})


class ExprError(ValueError):
    """Malformed expression (rejected at construction)."""


class ParseError(ValueError):
    def __init__(self, message, position):
        super().__init__("%s (at position %d)" % (message, position))
        self.position = position


class DomainError(ArithmeticError):
    """Evaluation left the real domain; carries the offending subexpression."""

    def __init__(self, message, subexpr):
        super().__init__("%s in %s" % (message, to_str(subexpr)))
        self.subexpr = subexpr


@dataclass(frozen=True)
class Expr:
    """One node of an immutable expression tree.

    kind is one of: num, var, param, call, neg, add, sub, mul, div, pow.
    """

    kind: str
    value: float = 0.0
    name: str = ""
    args: Tuple["Expr", ...] = field(default_factory=tuple)

    # -- operator sugar for building formulas in code ------------------
    def __add__(self, other):
        return Add(self, _coerce(other))

    def __radd__(self, other):
        return Add(_coerce(other), self)

    def __sub__(self, other):
        return Sub(self, _coerce(other))

    def __rsub__(self, other):
        return Sub(_coerce(other), self)

    def __mul__(self, other):
        return Mul(self, _coerce(other))

    def __rmul__(self, other):
        return Mul(_coerce(other), self)

    def __truediv__(self, other):
        return Div(self, _coerce(other))

    def __rtruediv__(self, other):
        return Div(_coerce(other), self)

    def __pow__(self, other):
        return Pow(self, _coerce(other))

    def __neg__(self):
        return Neg(self)

    def __str__(self):
        return to_str(self)


def _coerce(v) -> Expr:
    if isinstance(v, Expr):
        return v
    if isinstance(v, (int, float)):
        return Num(v)
    raise TypeError("cannot use %r in an expression" % (v,))


def Num(v) -> Expr:
    v = float(v)
    if not math.isfinite(v):
        raise ExprError("number literals must be finite, got %r" % v)
    return Expr("num", value=v)


def Var(name) -> Expr:
    return Expr("var", name=name)


def Param(name) -> Expr:
    return Expr("param", name=name)


def Call(fn, arg) -> Expr:
    if fn not in FUNCTIONS:
        raise ExprError("unknown function %r" % fn)
    return Expr("call", name=fn, args=(_coerce(arg),))


def Neg(a) -> Expr:
    return Expr("neg", args=(_coerce(a),))


def Add(a, b) -> Expr:
    return Expr("add", args=(_coerce(a), _coerce(b)))


def Sub(a, b) -> Expr:
    return Expr("sub", args=(_coerce(a), _coerce(b)))


def Mul(a, b) -> Expr:
    return Expr("mul", args=(_coerce(a), _coerce(b)))


def Div(a, b) -> Expr:
    b = _coerce(b)
    if b.kind == "num" and b.value == 0.0:
        raise ExprError("literal zero denominator")
    return Expr("div", args=(_coerce(a), b))


def Pow(a, b) -> Expr:
    a, b = _coerce(a), _coerce(b)
    if a.kind == "num" and a.value == 0.0 and b.kind == "num" and b.value <= 0.0:
        raise ExprError("0 raised to a non-positive literal exponent")
    return Expr("pow", args=(a, b))


def free_names(e: Expr) -> set:
    """All variable and parameter names occurring in e."""
    out = set()
    stack = [e]
    while stack:
        n = stack.pop()
        if n.kind in ("var", "param"):
            out.add(n.name)
        stack.extend(n.args)
    return out


def free_vars(e: Expr) -> set:
    out = set()
    stack = [e]
    while stack:
        n = stack.pop()
        if n.kind == "var":
            out.add(n.name)
        stack.extend(n.args)
    return out


def depends_on(e: Expr, name: str) -> bool:
    return name in free_names(e)


def substitute(e: Expr, bindings: Dict[str, object]) -> Expr:
    """Replace variables/parameters by expressions or numbers."""
    if e.kind in ("var", "param"):
        if e.name in bindings:
            return _coerce(bindings[e.name])
        return e
    if not e.args:
        return e
    new_args = tuple(substitute(a, bindings) for a in e.args)
    if new_args == e.args:
        return e
    return Expr(e.kind, value=e.value, name=e.name, args=new_args)


# ----------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>\^|\*|/|\+|-|−|·|\(|\)))"
)


def _tokenize(text):
    pos = 0
    tokens = []
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            rest = text[pos:].lstrip()
            if not rest:
                break
            raise ParseError("unexpected character %r" % rest[0],
                             len(text) - len(rest))
        if m.group("num") is not None:
            tokens.append(("num", m.group("num"), m.start("num")))
        elif m.group("name") is not None:
            tokens.append(("name", m.group("name"), m.start("name")))
        else:
            op = m.group("op")
            if op == "−":
                op = "-"
            elif op == "·":
                op = "*"
            tokens.append(("op", op, m.start("op")))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    """Recursive descent for:
    expr   := term (("+"|"-") term)*
    term   := factor (("*"|"/") factor)*
    factor := ("-")? power
    power  := atom ("^" factor)?
    atom   := NUMBER | NAME | NAME "(" expr ")" | "(" expr ")"
    """

    def __init__(self, tokens, variables, parameters):
        self.tokens = tokens
        self.i = 0
        self.variables = variables
        self.parameters = parameters

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, pos = self.peek()
        if kind != "op" or val != op:
            raise ParseError("expected %r" % op, pos)
        return self.next()

    def parse_expr(self):
        e = self.parse_term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in ("+", "-"):
                self.next()
                rhs = self.parse_term()
                e = Add(e, rhs) if val == "+" else Sub(e, rhs)
            else:
                return e

    def parse_term(self):
        e = self.parse_factor()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in ("*", "/"):
                self.next()
                rhs = self.parse_factor()
                try:
                    e = Mul(e, rhs) if val == "*" else Div(e, rhs)
                except ExprError as exc:
                    raise ParseError(str(exc), pos)
            else:
                return e

    def parse_factor(self):
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.next()
            return Neg(self.parse_power())
        return self.parse_power()

    def parse_power(self):
        base = self.parse_atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.next()
            expo = self.parse_factor()
            try:
                return Pow(base, expo)
            except ExprError as exc:
                raise ParseError(str(exc), pos)
        return base

    def parse_atom(self):
        kind, val, pos = self.next()
        if kind == "num":
            return Num(float(val))
        if kind == "name":
            nkind, nval, _ = self.peek()
            if nkind == "op" and nval == "(":
                if val not in FUNCTIONS:
                    raise ParseError("unknown function %r" % val, pos)
                self.next()
                arg = self.parse_expr()
                self.expect_op(")")
                return Call(val, arg)
            if val in FUNCTIONS:
                raise ParseError("function %r used without arguments" % val, pos)
            if val in self.parameters:
                return Param(val)
            if val in self.variables:
                return Var(val)
            raise ParseError("unbound name %r" % val, pos)
        if kind == "op" and val == "(":
            e = self.parse_expr()
            self.expect_op(")")
            return e
        raise ParseError("unexpected token %r" % val, pos)


def parse(text: str, parameters: Iterable[str] = (),
          variables: Optional[Iterable[str]] = None) -> Expr:
    """Parse text to an Expr. Names in `parameters` become parameter nodes;
    other names must be in `variables` (default x, u, u_x, v_x, t, v)."""
    vs = DEFAULT_VARIABLES if variables is None else frozenset(variables)
    p = _Parser(_tokenize(text), vs, frozenset(parameters))
    e = p.parse_expr()
    kind, val, pos = p.peek()
    if kind != "end":
        raise ParseError("unexpected trailing token %r" % val, pos)
    return e


# ----------------------------------------------------------------------
# printing

_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "neg": 2, "pow": 3,
         "num": 9, "var": 9, "param": 9, "call": 9}


def _num_str(v):
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def to_str(e: Expr) -> str:
    k = e.kind
    if k == "num":
        return _num_str(e.value)
    if k in ("var", "param"):
        return e.name
    if k == "call":
        return "%s(%s)" % (e.name, to_str(e.args[0]))
    if k == "neg":
        a = e.args[0]
        inner = to_str(a)
        if _PREC[a.kind] < 2 or a.kind == "neg":
            inner = "(%s)" % inner
        return "-" + inner
    a, b = e.args
    if k == "pow":
        # grammar requires an atom base; exponent is a factor
        base = to_str(a)
        if _PREC[a.kind] < 9:
            base = "(%s)" % base
        expo = to_str(b)
        if _PREC[b.kind] < 3:
            expo = "(%s)" % expo
        return "%s^%s" % (base, expo)
    op = {"add": "+", "sub": "-", "mul": "*", "div": "/"}[k]
    level = _PREC[k]
    left = to_str(a)
    if _PREC[a.kind] < level:
        left = "(%s)" % left
    right = to_str(b)
    # -, / are left-associative; also parenthesize unary minus on the right
    if _PREC[b.kind] < level or (k in ("sub", "div") and _PREC[b.kind] == level) \
            or b.kind == "neg":
        right = "(%s)" % right
    return "%s %s %s" % (left, op, right)


# ----------------------------------------------------------------------
# evaluation

def evaluate(e: Expr, binding: Dict[str, float]) -> float:
    """IEEE double value of e at the binding. Raises DomainError when the
    point leaves the real domain of a subexpression."""
    k = e.kind
    if k == "num":
        return e.value
    if k in ("var", "param"):
        try:
            return float(binding[e.name])
        except KeyError:
            raise DomainError("unbound name %r" % e.name, e)
    if k == "neg":
        return -evaluate(e.args[0], binding)
    if k == "call":
        a = evaluate(e.args[0], binding)
        fn = e.name
        if fn == "ln":
            if a <= 0.0:
                raise DomainError("ln of non-positive value %g" % a, e)
            return math.log(a)
        if fn == "sqrt":
            if a < 0.0:
                raise DomainError("sqrt of negative value %g" % a, e)
            return math.sqrt(a)
        if fn == "exp":
            try:
                return math.exp(a)
            except OverflowError:
                raise DomainError("exp overflow at %g" % a, e)
        if fn == "arctan":
            return math.atan(a)
        return getattr(math, fn)(a)
    a = evaluate(e.args[0], binding)
    b = evaluate(e.args[1], binding)
    if k == "add":
        return a + b
    if k == "sub":
        return a - b
    if k == "mul":
        return a * b
    if k == "div":
        if b == 0.0:
            raise DomainError("division by zero", e)
        return a / b
    if k == "pow":
        if a == 0.0 and b <= 0.0:
            raise DomainError("0 raised to non-positive power %g" % b, e)
        if a < 0.0 and b != int(b):
            raise DomainError("negative base %g with non-integer exponent" % a, e)
        try:
            return math.pow(a, b)
        except OverflowError:
            raise DomainError("pow overflow", e)
    raise ExprError("unknown node kind %r" % k)


# ----------------------------------------------------------------------
# differentiation

def _d_add(a, b):
    if a.kind == "num" and a.value == 0.0:
        return b
    if b.kind == "num" and b.value == 0.0:
        return a
    if a.kind == "num" and b.kind == "num":
        return Num(a.value + b.value)
    return Add(a, b)


def _d_sub(a, b):
    if b.kind == "num" and b.value == 0.0:
        return a
    if a.kind == "num" and b.kind == "num":
        return Num(a.value - b.value)
    if a.kind == "num" and a.value == 0.0:
        return Neg(b)
    return Sub(a, b)


def _d_mul(a, b):
    if (a.kind == "num" and a.value == 0.0) or (b.kind == "num" and b.value == 0.0):
        return Num(0)
    if a.kind == "num" and a.value == 1.0:
        return b
    if b.kind == "num" and b.value == 1.0:
        return a
    if a.kind == "num" and b.kind == "num":
        return Num(a.value * b.value)
    return Mul(a, b)


def _d_div(a, b):
    if a.kind == "num" and a.value == 0.0:
        return Num(0)
    if b.kind == "num" and b.value == 1.0:
        return a
    return Div(a, b)


def _d_pow(a, b):
    if b.kind == "num":
        if b.value == 1.0:
            return a
        if b.value == 0.0:
            return Num(1)
    return Pow(a, b)


_FN_DERIV = {
    "exp": lambda a: Call("exp", a),
    "ln": lambda a: _d_div(Num(1), a),
    "sqrt": lambda a: _d_div(Num(1), _d_mul(Num(2), Call("sqrt", a))),
    "sin": lambda a: Call("cos", a),
    "cos": lambda a: Neg(Call("sin", a)),
    "tan": lambda a: _d_add(Num(1), _d_pow(Call("tan", a), Num(2))),
    "sinh": lambda a: Call("cosh", a),
    "cosh": lambda a: Call("sinh", a),
    "tanh": lambda a: _d_sub(Num(1), _d_pow(Call("tanh", a), Num(2))),
    "arctan": lambda a: _d_div(Num(1), _d_add(Num(1), _d_pow(a, Num(2)))),
}


def differentiate(e: Expr, v: str) -> Expr:
    """Exact partial derivative with respect to the variable named v.
    Parameters and other variables are held fixed."""
    k = e.kind
    if k in ("num", "param"):
        return Num(0)
    if k == "var":
        return Num(1) if e.name == v else Num(0)
    if k == "neg":
        d = differentiate(e.args[0], v)
        if d.kind == "num":
            return Num(-d.value)
        return Neg(d)
    if k == "call":
        a = e.args[0]
        da = differentiate(a, v)
        return _d_mul(_FN_DERIV[e.name](a), da)
    a, b = e.args
    if k == "add":
        return _d_add(differentiate(a, v), differentiate(b, v))
    if k == "sub":
        return _d_sub(differentiate(a, v), differentiate(b, v))
    if k == "mul":
        return _d_add(_d_mul(differentiate(a, v), b), _d_mul(a, differentiate(b, v)))
    if k == "div":
        da, db = differentiate(a, v), differentiate(b, v)
        if db.kind == "num" and db.value == 0.0:
            return _d_div(da, b)
        num = _d_sub(_d_mul(da, b), _d_mul(a, db))
        return _d_div(num, _d_pow(b, Num(2)))
    if k == "pow":
        da, db = differentiate(a, v), differentiate(b, v)
        if db.kind == "num" and db.value == 0.0:
            # exponent free of v: b * a^(b-1) * a'
            if da.kind == "num" and da.value == 0.0:
                return Num(0)
            bm1 = Num(b.value - 1.0) if b.kind == "num" else _d_sub(b, Num(1))
            return _d_mul(_d_mul(b, _d_pow(a, bm1)), da)
        if da.kind == "num" and da.value == 0.0:
            # base free of v: a^b * ln(a) * b'
            return _d_mul(_d_mul(e, Call("ln", a)), db)
        inner = _d_add(_d_mul(db, Call("ln", a)), _d_div(_d_mul(b, da), a))
        return _d_mul(e, inner)
    raise ExprError("unknown node kind %r" % k)
