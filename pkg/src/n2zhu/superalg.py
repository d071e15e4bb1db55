"""Bracket tables for the N=2 superconformal algebra, affine sl(2) and gl(1|1).

A generator mode is a pair ``(dmode, rank)`` of ints: ``dmode`` is twice the
mode index and ``rank`` is the position of the family in the PBW order.  The
natural tuple order on these pairs *is* the PBW order (ascending mode, then
family rank), which keeps the rewriting code free of lookups.

Brackets return plain dicts ``{monomial: Fraction}`` where a monomial is a
tuple of generator modes; ``()`` is the unit.  Central elements are evaluated
to scalars when the algebra is built.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Callable

Gen = tuple  # (dmode, rank)

UNIT = ()


@dataclass(frozen=True)
class Parameters:
    """Admissible data (p, p') with the derived a, k, c."""

    p: int
    pp: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not isinstance(self.pp, int):
            raise ValueError("p and p' must be integers")
        if self.p < 2:
            raise ValueError(f"p >= 2 violated (p={self.p})")
        if self.pp < 1:
            raise ValueError(f"p' >= 1 violated (p'={self.pp})")
        if gcd(self.p, self.pp) != 1:
            raise ValueError(f"gcd(p, p') = 1 violated ({self.p}, {self.pp})")

    @property
    def a(self) -> Fraction:
        return Fraction(self.pp, self.p)

    @property
    def k(self) -> Fraction:
        return Fraction(self.p, self.pp) - 2

    @property
    def c(self) -> Fraction:
        return 3 * (1 - 2 * self.a)

    def j(self, m, n) -> Fraction:
        """j_{m,n} = (m-1)/2 - n/(2a)."""
        return Fraction(m - 1, 2) - Fraction(n) / (2 * self.a)

    def delta(self, j) -> Fraction:
        """Conformal weight j(j+1)/(k+2) of the affine highest weight j."""
        j = Fraction(j)
        return j * (j + 1) * self.a

    def kw_set(self):
        return [(m, n) for m in range(1, self.p) for n in range(self.pp)]

    def bpz_set(self):
        return [(m, n) for (m, n) in self.kw_set()
                if n != 0 and self.pp * m + self.p * n <= self.p * self.pp]


@dataclass(frozen=True)
class Family:
    name: str
    odd: bool
    half: bool      # modes in 1/2 + Z (else in Z)
    charge: int     # J0-charge (ns2), H0-charge (affine), J-charge (gl11)
    zero_only: bool = False


@dataclass(frozen=True, eq=False)
class AlgebraSpec:
    name: str
    families: tuple
    central: Fraction
    params: Parameters | None
    bracket_fn: Callable = field(repr=False, default=None)

    def family(self, g: Gen) -> Family:
        return self.families[g[1]]

    def is_odd(self, g: Gen) -> bool:
        return self.families[g[1]].odd

    def charge(self, g: Gen) -> int:
        return self.families[g[1]].charge

    def gen(self, name: str, mode) -> Gen:
        """Generator by family name and (rational) mode, validated."""
        for rank, fam in enumerate(self.families):
            if fam.name == name:
                d = Fraction(mode) * 2
                if d.denominator != 1:
                    raise ValueError(f"mode {mode} not in lattice of {name}")
                d = int(d)
                self._check(fam, d, name, mode)
                return (d, rank)
        raise ValueError(f"unknown family {name!r} for {self.name}")

    def _check(self, fam, d, name, mode):
        if fam.zero_only and d != 0:
            raise ValueError(f"{name} only has mode 0")
        if (d % 2 == 1) != fam.half:
            raise ValueError(f"mode {mode} not in lattice of {name}")

    def validate(self, g: Gen):
        if not (isinstance(g, tuple) and len(g) == 2 and 0 <= g[1] < len(self.families)):
            raise ValueError(f"not a generator of {self.name}: {g!r}")
        fam = self.families[g[1]]
        self._check(fam, g[0], fam.name, Fraction(g[0], 2))

    def mode(self, g: Gen) -> Fraction:
        return Fraction(g[0], 2)

    def label(self, g: Gen) -> str:
        return f"{self.families[g[1]].name}[{fmt_q(Fraction(g[0], 2))}]"

    def bracket(self, x: Gen, y: Gen) -> dict:
        return self.bracket_fn(x, y)

    def generators(self, window) -> list:
        """All generator modes with |mode| <= window, in PBW order."""
        out = []
        w2 = int(2 * Fraction(window))
        for d in range(-w2, w2 + 1):
            for rank, fam in enumerate(self.families):
                if fam.zero_only and d != 0:
                    continue
                if (d % 2 == 1) == fam.half:
                    out.append((d, rank))
        return sorted(out)


def fmt_q(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _add(d, key, val):
    if val:
        v = d.get(key, 0) + val
        if v:
            d[key] = v
        else:
            d.pop(key, None)


# --- ns2 ---------------------------------------------------------------

NS2_L, NS2_J, NS2_GP, NS2_GM = 0, 1, 2, 3

NS2_FAMILIES = (
    Family("L", False, False, 0),
    Family("J", False, False, 0),
    Family("G+", True, True, 1),
    Family("G-", True, True, -1),
)


def _ns2_ordered(x, y, c):
    """Bracket for rank(x) <= rank(y); returns dict."""
    (dx, fx), (dy, fy) = x, y
    n, m = Fraction(dx, 2), Fraction(dy, 2)
    out = {}
    s = dx + dy
    if fx == NS2_L:
        if fy == NS2_L:
            _add(out, ((s, NS2_L),), n - m)
            if s == 0:
                _add(out, UNIT, (n ** 3 - n) * c / 12)
        elif fy == NS2_J:
            _add(out, ((s, NS2_J),), -m)
        else:
            _add(out, ((s, fy),), n / 2 - m)
    elif fx == NS2_J:
        if fy == NS2_J:
            if s == 0:
                _add(out, UNIT, n * c / 3)
        elif fy == NS2_GP:
            _add(out, ((s, NS2_GP),), Fraction(1))
        else:
            _add(out, ((s, NS2_GM),), Fraction(-1))
    elif fx == NS2_GP and fy == NS2_GM:
        _add(out, ((s, NS2_L),), Fraction(2))
        _add(out, ((s, NS2_J),), n - m)
        if s == 0:
            _add(out, UNIT, (n * n - Fraction(1, 4)) * c / 3)
    return out


def _super_swap(spec_families, x, y, ordered):
    """Use super-antisymmetry to evaluate [x, y] from [y, x]."""
    res = ordered(y, x)
    sign = 1 if (spec_families[x[1]].odd and spec_families[y[1]].odd) else -1
    return {k: sign * v for k, v in res.items()}


def _make_bracket(families, ordered):
    @lru_cache(maxsize=None)
    def br(x, y):
        if x[1] <= y[1]:
            return ordered(x, y)
        return _super_swap(families, x, y, ordered)

    def bracket(x, y):
        return dict(br(x, y))

    return bracket


# --- affine sl(2) ------------------------------------------------------

AFF_F, AFF_H, AFF_E = 0, 1, 2

AFF_FAMILIES = (
    Family("F", False, False, -2),
    Family("H", False, False, 0),
    Family("E", False, False, 2),
)


def _aff_ordered(x, y, k):
    (dx, fx), (dy, fy) = x, y
    m = Fraction(dx, 2)
    s = dx + dy
    out = {}
    if fx == AFF_F:
        if fy == AFF_H:      # [F_m, H_n] = -[H_n, F_m] = 2F
            _add(out, ((s, AFF_F),), Fraction(2))
        elif fy == AFF_E:    # [F_m, E_n] = -[E_n, F_m] = -H_{m+n} + m k delta
            _add(out, ((s, AFF_H),), Fraction(-1))
            if s == 0:
                _add(out, UNIT, m * k)
    elif fx == AFF_H:
        if fy == AFF_H:
            if s == 0:
                _add(out, UNIT, 2 * m * k)
        elif fy == AFF_E:
            _add(out, ((s, AFF_E),), Fraction(2))
    return out


# --- gl(1|1) -----------------------------------------------------------

GL_Z, GL_J, GL_PM, GL_PP = 0, 1, 2, 3

GL_FAMILIES = (
    Family("Z", False, False, 0, True),
    Family("J", False, False, 0, True),
    Family("Psi-", True, False, -1, True),
    Family("Psi+", True, False, 1, True),
)


def _gl_ordered(x, y):
    fx, fy = x[1], y[1]
    out = {}
    if fx == GL_J and fy == GL_PM:
        _add(out, ((0, GL_PM),), Fraction(-1))
    elif fx == GL_J and fy == GL_PP:
        _add(out, ((0, GL_PP),), Fraction(1))
    elif fx == GL_PM and fy == GL_PP:
        _add(out, ((0, GL_Z),), Fraction(2))
    return out


def build_algebra(name: str, params: Parameters | None = None) -> AlgebraSpec:
    if name == "ns2":
        if params is None:
            raise ValueError("ns2 needs parameters")
        c = params.c
        return AlgebraSpec("ns2", NS2_FAMILIES, c, params,
                           _make_bracket(NS2_FAMILIES, lambda x, y: _ns2_ordered(x, y, c)))
    if name == "affine-sl2":
        if params is None:
            raise ValueError("affine-sl2 needs parameters")
        k = params.k
        if k == -2:
            raise ValueError("critical level k = -2 rejected")
        return AlgebraSpec("affine-sl2", AFF_FAMILIES, k, params,
                           _make_bracket(AFF_FAMILIES, lambda x, y: _aff_ordered(x, y, k)))
    if name == "gl11":
        return AlgebraSpec("gl11", GL_FAMILIES, Fraction(0), None,
                           _make_bracket(GL_FAMILIES, _gl_ordered))
    raise ValueError(f"unknown algebra id {name!r}")


# --- Jacobi ------------------------------------------------------------

def _bracket_lin(spec, x, elem):
    """[x, elem] for elem a combination of generators and the unit."""
    out = {}
    for mono, cf in elem.items():
        if not mono:
            continue
        (y,) = mono
        for k, v in spec.bracket(x, y).items():
            _add(out, k, cf * v)
    return out


def _bracket_lin_left(spec, elem, z):
    out = {}
    for mono, cf in elem.items():
        if not mono:
            continue
        (y,) = mono
        for k, v in spec.bracket(y, z).items():
            _add(out, k, cf * v)
    return out


def check_super_jacobi(spec: AlgebraSpec, mode_window=4) -> dict:
    """Graded Jacobi [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|}[y,[x,z]] on a window."""
    if mode_window < 1:
        raise ValueError("mode_window >= 1 required")
    gens = spec.generators(mode_window)
    violations = []
    for x in gens:
        for y in gens:
            xy = spec.bracket(x, y)
            sxy = -1 if spec.is_odd(x) and spec.is_odd(y) else 1
            for z in gens:
                lhs = _bracket_lin(spec, x, spec.bracket(y, z))
                rhs = _bracket_lin_left(spec, xy, z)
                for k, v in _bracket_lin(spec, y, spec.bracket(x, z)).items():
                    _add(rhs, k, sxy * v)
                if lhs != rhs:
                    violations.append((spec.label(x), spec.label(y), spec.label(z)))
    antisym = []
    for x in gens:
        for y in gens:
            s = 1 if spec.is_odd(x) and spec.is_odd(y) else -1
            if spec.bracket(x, y) != {k: s * v for k, v in spec.bracket(y, x).items()}:
                antisym.append((spec.label(x), spec.label(y)))
    return {"algebra": spec.name, "window": mode_window,
            "violations": violations, "antisymmetry_violations": antisym}


# --- spectral flow -----------------------------------------------------

def spectral_flow_generator(spec: AlgebraSpec, theta, x: Gen) -> dict:
    """Image of a generator mode under the flow automorphism U_theta.

    U(L_n) = L_n + theta J_n + theta^2 c/6 delta_{n,0},
    U(J_n) = J_n + theta c/3 delta_{n,0},
    U(G+-_r) = G+-_{r +- theta}.
    Only integer theta keeps the Neveu-Schwarz mode lattice.
    """
    if spec.name != "ns2":
        raise ValueError("spectral flow is defined on ns2 only")
    spec.validate(x)
    theta = Fraction(theta)
    if theta.denominator != 1:
        raise ValueError("theta must be an integer to stay in the NS sector")
    c = spec.central
    d, f = x
    out = {}
    if f == NS2_L:
        _add(out, ((d, NS2_L),), Fraction(1))
        _add(out, ((d, NS2_J),), theta)
        if d == 0:
            _add(out, UNIT, theta * theta * c / 6)
    elif f == NS2_J:
        _add(out, ((d, NS2_J),), Fraction(1))
        if d == 0:
            _add(out, UNIT, theta * c / 3)
    elif f == NS2_GP:
        _add(out, ((d + 2 * int(theta), NS2_GP),), Fraction(1))
    else:
        _add(out, ((d - 2 * int(theta), NS2_GM),), Fraction(1))
    return out
