"""Probe linear acyclicity of the odd-power subspaces beyond the guaranteed range.

For each (p, n, m) we build A = <a, a^3, ..., a^(2m-1)> in GF(p^n), check
whether A meets A^2 trivially, and if so ask whether the identity on A is
linearly acyclic (every strong equivalent map is a scalar multiple).
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

from acyclic_matching import linear_core as lc
from acyclic_matching.fields import make_tower


@dataclass
class Case:
    p: int
    n: int
    m: int


DEFAULT_CASES = [Case(5, 3, 1), Case(5, 3, 2), Case(5, 5, 1), Case(5, 5, 2), Case(7, 5, 2), Case(3, 5, 2), Case(5, 7, 2), Case(5, 7, 3)]


def run_case(case: Case, budget: int):
    L = make_tower(case.p, case.n)
    A = lc.odd_power_subspace(L, L.gen(), case.m)
    t0 = time.perf_counter()
    trivial = lc.intersect(A, lc.product(A, A)).is_zero()
    verdict = None
    if trivial and A.dim == case.m:
        verdict = lc.is_linear_acyclic(lc.identity_map(A), budget=budget)
    return A.dim, trivial, verdict, time.perf_counter() - t0


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--budget", type=int, default=2_000_000)
    ap.add_argument("--case", nargs=3, type=int, action="append", metavar=("P", "N", "M"))
    args = ap.parse_args(argv)
    cases = [Case(*c) for c in args.case] if args.case else DEFAULT_CASES
    print(f"{'p':>3} {'n':>3} {'m':>3} {'dim':>4} {'A & A^2 = 0':>12} {'identity acyclic':>17} {'secs':>7}")
    for c in cases:
        dim, trivial, verdict, dt = run_case(c, args.budget)
        shown = {True: "yes", False: "no", None: "-" if not trivial else "unknown"}[verdict]
        print(f"{c.p:>3} {c.n:>3} {c.m:>3} {dim:>4} {str(trivial):>12} {shown:>17} {dt:>7.2f}")


if __name__ == "__main__":
    main()
