#!/usr/bin/env python3
"""Fusion of the c = -1 chiral module with each simple A_id(L_{-1}) module."""

from n2zhu import references, zhu
from n2zhu.superalg import Parameters


def main():
    P = Parameters(3, 2)
    common, isolated = zhu.classification_data(P)
    print(f"curve: {common} = 0, isolated points (h, q): {isolated}")
    for label, expected in references.FUSION.items():
        h, q = zhu.label_eigenvalues(P, label)
        rep = zhu.fz_kernel_and_fusion(P, h, q)
        got = sorted(s["label"] for s in rep["summands"])
        mark = "ok" if got == sorted(expected) else "DIFFERS"
        print(f"{label:>8} -> {' + '.join(got):<22} eigenvalues {rep['xl_eigenvalues']}  [{mark}]")


if __name__ == "__main__":
    main()
