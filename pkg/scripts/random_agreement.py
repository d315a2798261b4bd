#!/usr/bin/env python3
"""Cross-check saturation against bounded finite-model search.

Generates random function-free problems (ground facts, guarded rules with
flat heads, one conjunctive query), answers each by saturation, and
independently decides it by enumerating models over at most three domain
elements (exact for this problem class).  Reports the agreement rate.

Usage: python scripts/random_agreement.py [--count N] [--seed S]
"""

from __future__ import annotations

import argparse
import pathlib
import random
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent
                        / "tests"))

from guardedsat.clausify import trans
from guardedsat.oracle import sat_enumerate
from guardedsat.qans import answer
from util import random_problem


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=100,
                    help="number of random problems (default 100)")
    ap.add_argument("--seed", type=int, default=0,
                    help="generator seed (default 0)")
    ap.add_argument("--budget", type=int, default=200000,
                    help="saturation step budget per problem")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    agree = disagree = 0
    t0 = time.monotonic()
    for i in range(args.count):
        prob = random_problem(rng)
        res = answer(prob, step_budget=args.budget)
        out = trans(prob)
        model = sat_enumerate(list(out.lg_clauses) +
                              list(out.query_clauses), max_domain=3)
        expected = "no" if model is not None else "yes"
        if res.verdict == expected:
            agree += 1
        else:
            disagree += 1
            print(f"[{i}] MISMATCH: saturation={res.verdict} "
                  f"model-search={expected}")
    dt = time.monotonic() - t0
    print(f"{agree}/{args.count} agree ({disagree} mismatches) "
          f"in {dt:.2f}s")
    return 0 if disagree == 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())
