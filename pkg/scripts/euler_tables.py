#!/usr/bin/env python3
"""Euler characteristic of a BGG-type complex against the simple character."""

import argparse
from fractions import Fraction

from n2zhu.resolutions import VARIANTS, ResolutionSpec, verify_euler
from n2zhu.superalg import Parameters


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--variant", choices=VARIANTS, default="n2-parabolic")
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--pp", type=int, default=2)
    ap.add_argument("--r", type=int, default=1)
    ap.add_argument("--s", type=int, default=0)
    ap.add_argument("--j", type=Fraction)
    ap.add_argument("--max-level", type=Fraction, default=Fraction(4))
    args = ap.parse_args()
    window = (-8, 8) if args.variant == "n2-relaxed" else None
    spec = ResolutionSpec(args.variant, Parameters(args.p, args.pp), args.r, args.s, args.j,
                          window=window)
    rep = verify_euler(spec, args.max_level)
    for t in rep["terms"]:
        mods = ", ".join(m["label"] for m in t["modules"])
        print(f"term {t['n']}: {mods}  (lowest level {t['lowest_level']})")
    simple = {(r["level"], r["charge"]): r["dim"] for r in rep["simple"]}
    print(f"{'level':>6} {'charge':>7} {'euler':>6} {'simple':>6}")
    for r in rep["euler"]:
        print(f"{r['level']:>6} {r['charge']:>7} {r['dim']:>6} "
              f"{simple.get((r['level'], r['charge']), 0):>6}")
    print("match" if rep["match"] else f"MISMATCH at {len(rep['mismatches'])} weights")


if __name__ == "__main__":
    main()
