"""Compare the compiled evaluation kernel against the pure numpy fallback.

Usage: python3 benchmarks/bench_kernel.py [n_points]
"""

import sys
import time

import numpy as np

from wavecls import program
from wavecls.expr import parse
from wavecls.invariants import build_caseA, build_F_only
from wavecls.program import HAVE_COMPILED, compile_expr, eval_program
from wavecls.system import build_F_G

NAMES = ("x", "u", "u_x", "v_x")


def bench(prog, pts, backend, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        eval_program(prog, pts, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 100000
    rng = np.random.default_rng(0)
    pts = np.column_stack([rng.uniform(0.3, 1.8, n) for _ in NAMES])

    F, G = build_F_G(parse("exp(u - x)"), parse("exp(u + x)"))
    inv = build_caseA(F, G)
    m = build_F_only(parse("1 / (1 + u^2)"))
    cases = {
        "small (polynomial)": parse("x * u + u_x^2 - v_x^2"),
        "medium (K2)": inv.K2,
        "large (M2)": m.M2,
    }

    print("points: %d   compiled extension available: %s"
          % (n, HAVE_COMPILED))
    header = "%-22s %12s %12s %8s" % ("expression", "compiled", "pure", "ratio")
    print(header)
    print("-" * len(header))
    for name, e in cases.items():
        prog = compile_expr(e, NAMES)
        t_pure = bench(prog, pts, program._pure)
        if HAVE_COMPILED:
            t_comp = bench(prog, pts, program._compiled)
            a = eval_program(prog, pts, backend=program._compiled)
            b = eval_program(prog, pts, backend=program._pure)
            mask = np.isfinite(a) & np.isfinite(b)
            assert np.allclose(a[mask], b[mask], rtol=1e-12)
            print("%-22s %10.2fms %10.2fms %7.2fx"
                  % (name, t_comp * 1e3, t_pure * 1e3, t_pure / t_comp))
        else:
            print("%-22s %12s %10.2fms %8s"
                  % (name, "n/a", t_pure * 1e3, "n/a"))


if __name__ == "__main__":
    main()
