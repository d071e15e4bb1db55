#!/usr/bin/env python3
"""Singular vectors of the vacuum module at weight ((p-1)p', 0), as coefficient tables."""

import argparse
import time

from n2zhu.reps import find_singular, present_module
from n2zhu.superalg import Parameters, fmt_q


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("cases", nargs="*", default=["4,1", "2,3", "3,2"], help="p,pp pairs")
    args = ap.parse_args()
    for case in args.cases:
        p, pp = map(int, case.split(","))
        P = Parameters(p, pp)
        lvl = (p - 1) * pp
        t = time.perf_counter()
        vac = present_module("vacuum-ns2", P)
        vecs = find_singular(vac, lvl, 0)
        spec = vac.free.spec
        print(f"(p, p') = ({p}, {pp}), c = {fmt_q(P.c)}, level {lvl}: "
              f"{len(vecs)} vector(s) in {time.perf_counter() - t:.2f}s")
        for v in vecs:
            for k, c in sorted(v.items()):
                print(f"  {fmt_q(c):>8}  {' '.join(spec.label(g) for g in k[0])}")


if __name__ == "__main__":
    main()
