"""Command line interface.

Exit codes: 0 success (or Equivalent), 1 internal error, 2 inadmissible
input, 3 Inequivalent, 4 ConsistentUnknown.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Dict, Optional, Tuple

from .classify import ClassifyConfig, classify, explain, report_dict
from .expr import DomainError, ExprError, ParseError
from .invariants import GateViolation
from .manifold import (EQUIVALENT, INEQUIVALENT, UNKNOWN, decide_equivalence,
                       export_csv, sample_cloud)
from .oracle import DEFAULT_BOX, OracleError
from .system import InadmissibleSystem, WaveSystem

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INADMISSIBLE = 2
EXIT_INEQUIVALENT = 3
EXIT_UNKNOWN = 4

SCHEMA = 1


class CliError(Exception):
    def __init__(self, msg: str, code: int = EXIT_INADMISSIBLE):
        super().__init__(msg)
        self.code = code


def read_equation_file(path: str) -> Tuple[str, str, Dict[str, float]]:
    """Parse an equation file with lines `a = ...`, `b = ...`,
    `param NAME = VALUE` and `#` comments."""
    a = b = None
    params: Dict[str, float] = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise CliError("cannot read %s: %s" % (path, exc))
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError("%s:%d: expected `name = value`" % (path, lineno))
        lhs, rhs = (s.strip() for s in line.split("=", 1))
        if lhs == "a":
            a = rhs
        elif lhs == "b":
            b = rhs
        elif lhs.startswith("param "):
            name = lhs[len("param "):].strip()
            try:
                params[name] = float(rhs)
            except ValueError:
                raise CliError("%s:%d: parameter %s needs a numeric value"
                               % (path, lineno, name))
        else:
            raise CliError("%s:%d: unknown key %r" % (path, lineno, lhs))
    if a is None or b is None:
        raise CliError("%s: both `a = ...` and `b = ...` are required" % path)
    return a, b, params


def _parse_params(items) -> Dict[str, float]:
    out: Dict[str, float] = {}
    for item in items or ():
        if "=" not in item:
            raise CliError("--param expects NAME=VALUE, got %r" % item)
        name, _, val = item.partition("=")
        try:
            out[name.strip()] = float(val)
        except ValueError:
            raise CliError("--param %s: %r is not a number" % (name, val))
    return out


def _parse_box(items) -> Optional[Dict[str, Tuple[float, float]]]:
    if not items:
        return None
    box = dict(DEFAULT_BOX)
    for item in items:
        if "=" not in item or ":" not in item:
            raise CliError("--box expects VAR=LO:HI, got %r" % item)
        name, _, rng = item.partition("=")
        lo_s, _, hi_s = rng.partition(":")
        try:
            lo, hi = float(lo_s), float(hi_s)
        except ValueError:
            raise CliError("--box %s: bounds must be numbers" % name)
        if not lo < hi:
            raise CliError("--box %s: need LO < HI" % name)
        box[name.strip()] = (lo, hi)
    return box


def _build_system(args, suffix: str = "") -> WaveSystem:
    file_attr = getattr(args, "file" + suffix, None)
    a_attr = getattr(args, "a" + suffix, None)
    b_attr = getattr(args, "b" + suffix, None)
    params = _parse_params(args.param)
    if file_attr:
        a_text, b_text, file_params = read_equation_file(file_attr)
        file_params.update(params)
        params = file_params
    else:
        if not (a_attr and b_attr):
            raise CliError("provide --a%s and --b%s, or --file%s"
                           % (suffix, suffix, suffix))
        a_text, b_text = a_attr, b_attr
    try:
        return WaveSystem.from_strings(a_text, b_text, params=params,
                                       box=_parse_box(args.box))
    except (ParseError, ExprError, InadmissibleSystem) as exc:
        raise CliError(str(exc))


def _classify(args, sys_: WaveSystem):
    cfg = ClassifyConfig(trials=args.n, zeta=args.zero_tol, seed=args.seed)
    try:
        return classify(sys_, cfg)
    except (InadmissibleSystem, GateViolation, OracleError, DomainError,
            ValueError) as exc:
        raise CliError(str(exc))


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        payload = {"schema": SCHEMA, **payload}
        print(json.dumps(payload, sort_keys=True, indent=2, default=_json_default))
    else:
        print(text)


def _json_default(o):
    try:
        return float(o)
    except (TypeError, ValueError):
        return str(o)


def _maybe_cloud(args, rep) -> None:
    if not getattr(args, "cloud_out", None):
        return
    cloud = sample_cloud(rep, n=args.n * 10, seed=args.seed)
    export_csv(cloud, args.cloud_out)


def cmd_classify(args) -> int:
    sys_ = _build_system(args)
    rep = _classify(args, sys_)
    _emit(args, {"report": report_dict(rep)}, explain(rep))
    if rep.tag.value in ("P1", "P2", "P3"):
        _maybe_cloud(args, rep)
    return EXIT_OK


def cmd_invariants(args) -> int:
    sys_ = _build_system(args)
    rep = _classify(args, sys_)
    lines = ["subclass: %s" % rep.tag.value]
    for name, e in sorted(rep.invariants.items()):
        from .expr import to_str
        lines.append("%s = %s" % (name, to_str(e)))
    if rep.m1_value is not None:
        lines.append("M1 = %.12g" % rep.m1_value)
    if not rep.invariants and rep.m1_value is None:
        lines.append("no nontrivial invariants; all members are equivalent")
    payload = report_dict(rep)
    _emit(args, {"report": {k: payload[k] for k in
                            ("tag", "invariants", "m1_value",
                             "unavailable_invariants")}},
          "\n".join(lines))
    if rep.tag.value in ("P1", "P2", "P3"):
        _maybe_cloud(args, rep)
    return EXIT_OK


def cmd_equivalent(args) -> int:
    sysA = _build_system(args)
    sysB = _build_system(args, suffix="2")
    repA = _classify(args, sysA)
    repB = _classify(args, sysB)
    try:
        v = decide_equivalence(repA, repB, n=max(args.n * 10, 200),
                               tol=args.tol, seed=args.seed)
    except (InadmissibleSystem, OracleError, DomainError) as exc:
        raise CliError(str(exc))
    text = "\n".join([
        "A: %s  [%s]" % (sysA.describe(), repA.tag.value),
        "B: %s  [%s]" % (sysB.describe(), repB.tag.value),
        "verdict: %s" % v.status,
        "reason: %s" % v.reason,
    ])
    _emit(args, {"verdict": {"status": v.status, "reason": v.reason,
                             "details": v.details,
                             "tagA": repA.tag.value,
                             "tagB": repB.tag.value}}, text)
    return {EQUIVALENT: EXIT_OK, INEQUIVALENT: EXIT_INEQUIVALENT,
            UNKNOWN: EXIT_UNKNOWN}[v.status]


def _add_system_args(p, suffix: str = ""):
    p.add_argument("--a" + suffix, metavar="EXPR",
                   help="coefficient of v_x in u_t%s" % (" (system B)" if suffix else ""))
    p.add_argument("--b" + suffix, metavar="EXPR",
                   help="coefficient of u_x in v_t%s" % (" (system B)" if suffix else ""))
    p.add_argument("--file" + suffix, metavar="PATH",
                   help="equation file with a = ..., b = ..., param lines")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="wavecls",
        description="Classify quasilinear wave systems u_t = a(x,u) v_x, "
                    "v_t = b(x,u) u_x up to contact equivalence.")
    sub = ap.add_subparsers(dest="command", required=True)

    defs = dict(
        param=dict(action="append", metavar="NAME=VAL",
                   help="bind a parameter (repeatable)"),
        box=dict(action="append", metavar="VAR=LO:HI",
                 help="override a sampling interval (repeatable)"),
        n=dict(type=int, default=32, help="oracle trials per gate"),
        seed=dict(type=int, default=0, help="random seed"),
        tol=dict(type=float, default=1e-6,
                 help="relative tolerance for curve comparison"),
        zero_tol=dict(type=float, default=1e-9,
                      help="zero-oracle rejection threshold"),
        format=dict(choices=("text", "json"), default="text"),
        cloud_out=dict(metavar="PATH.csv",
                       help="write the sampled classifying cloud as CSV"),
    )

    for name, fn, two in (("classify", cmd_classify, False),
                          ("invariants", cmd_invariants, False),
                          ("equivalent", cmd_equivalent, True)):
        p = sub.add_parser(name)
        _add_system_args(p)
        if two:
            _add_system_args(p, "2")
        for flag, kw in defs.items():
            p.add_argument("--" + flag.replace("_", "-"), **kw)
        p.set_defaults(func=fn)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return exc.code
    except Exception as exc:  # pragma: no cover - defensive
        print("internal error: %s" % exc, file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
