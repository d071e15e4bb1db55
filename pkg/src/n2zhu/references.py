"""Published closed forms used as comparison targets."""

from __future__ import annotations

from fractions import Fraction

import sympy as sp

from .superalg import NS2_GM, NS2_GP, NS2_J, NS2_L

Z, J = sp.symbols("Z J")
xl, xr, y = sp.symbols("x_l x_r y")


def _L(n):
    return (2 * n, NS2_L)


def _J(n):
    return (2 * n, NS2_J)


def _Gp(n2):
    return (n2, NS2_GP)


def _Gm(n2):
    return (n2, NS2_GM)


# words are applied right to left to the vacuum; order inside a word is
# exactly as printed, not necessarily PBW order
SINGULAR_WORDS = {
    (4, 1): [(10, (_J(-3),)), (-3, (_L(-3),)), (3, (_Gp(-3), _Gm(-3))),
             (-12, (_L(-2), _J(-1))), (8, (_J(-1),) * 3)],
    (2, 3): [(-10, (_J(-3),)), (-6, (_L(-3),)), (6, (_Gp(-3), _Gm(-3))),
             (6, (_L(-2), _J(-1))), (1, (_J(-1),) * 3)],
    (3, 2): [(42, (_J(-4),)), (24, (_L(-4),)), (27, (_J(-2), _J(-2))),
             (-84, (_J(-3), _J(-1))), (-6, (_Gp(-3), _Gm(-5))), (6, (_Gp(-5), _Gm(-3))),
             (-32, (_L(-2), _L(-2))), (-36, (_L(-3), _J(-1))),
             (36, (_J(-1), _Gp(-3), _Gm(-3))), (12, (_L(-2), _J(-1), _J(-1))),
             (9, (_J(-1),) * 4)],
}


def singular_element(p, pp) -> dict:
    """{word: coeff} whose action on the vacuum gives the singular vector."""
    return {w: Fraction(c) for c, w in SINGULAR_WORDS[(p, pp)]}


def phi(p, pp):
    """(P1, P2) of the sigma-twisted image, up to scale."""
    if (p, pp) == (4, 1):
        return sp.expand((4 * J - 1) * (J * (4 * J + 1) - 6 * Z)), sp.Integer(-6)
    if (p, pp) == (2, 3):
        return sp.expand((J + 1) * (J * (J - 1) + 6 * Z)), sp.Integer(-6)
    if (p, pp) == (3, 2):
        return (sp.expand(((6 * J + 1) * (6 * J + 5) - 48 * Z) * ((6 * J - 1) * (6 * J - 5) + 96 * Z)),
                sp.Integer(-72 ** 2) * J)
    raise KeyError((p, pp))


def kernel_generators():
    """f1..f3, g1..g3 for c = -1 in x_l, x_r, y."""
    P = xl - xr
    Q = xl + xr + sp.Rational(1, 3)
    R = y + sp.Rational(1, 3)
    f = [3 * P * (P + R) - Q, (2 * P + R) * (P - R),
         (2 * P + R) * ((3 * P - 4) * (P - R) - 3 * Q + 2)]
    g = [2 * P + 2 * R - 1, Q - P - R, 4 * P ** 2 + (1 - 2 * R) * P - 2 * R ** 2 + 2 * R - 3 * Q]
    return [sp.expand(x) for x in f], [sp.expand(x) for x in g]


# fusion with L_{3/2}-type module for c = -1: right label -> sorted summand labels
FUSION = {
    "C(-1)": ["C(0)"],
    "C(0)": ["C(1)"],
    "C(1)": ["Pi C_1/3"],
    "C_0": ["C_2/3"],
    "C_1/2": ["C_7/6"],
    "C_-1/3": ["C_1/3", "Pi C(-1)"],
}
