#!/usr/bin/env python3
"""Fuzz the Courant axioms and the derived-bracket equality at desk scale.

Useful for longer soak runs than the test suite performs; every failure is
printed with its case index and identity name.
"""

import argparse
import time

from gcgeo.charts import Chart
from gcgeo.suites import run_axiom_suite, run_derived_bracket_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cases", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--degree", type=int, default=2)
    args = ap.parse_args()

    chart = Chart.real("x", "y", "z")
    t0 = time.perf_counter()
    res = run_axiom_suite(chart, cases=args.cases, seed=args.seed, degree=args.degree)
    print(
        f"axioms: {args.cases} cases, {len(res.checked)} identities checked, "
        f"{len(res.failures)} failures in {time.perf_counter() - t0:.2f}s"
    )
    for f in res.failures[:10]:
        print("  FAIL", f)
    t0 = time.perf_counter()
    res2 = run_derived_bracket_suite(chart, cases=max(10, args.cases // 4), seed=args.seed)
    print(
        f"derived bracket: {len(res2.failures)} failures in {time.perf_counter() - t0:.2f}s"
    )
    raise SystemExit(0 if res.passed and res2.passed else 1)


if __name__ == "__main__":
    main()
