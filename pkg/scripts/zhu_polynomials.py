#!/usr/bin/env python3
"""Images of the singular vector in both twisted Zhu algebras."""

import argparse

import sympy as sp

from n2zhu import zhu
from n2zhu.acceptance import phi_c
from n2zhu.superalg import Parameters


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("cases", nargs="*", default=["4,1", "2,3", "3,2"])
    ap.add_argument("--id", action="store_true", help="also print f_c and g_c")
    args = ap.parse_args()
    for case in args.cases:
        P = Parameters(*map(int, case.split(",")))
        phi = phi_c(P).normalized()
        print(f"{case}: P1 = {sp.factor(phi.P1)}")
        print(f"{' ' * len(case)}  P2 = {sp.factor(phi.P2)}")
        if args.id:
            f, g = zhu.zhu_polys(P)
            print(f"{' ' * len(case)}  f = {sp.factor(f)}")
            print(f"{' ' * len(case)}  g = {sp.factor(g)}")


if __name__ == "__main__":
    main()
