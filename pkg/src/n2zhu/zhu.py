"""Twisted Zhu algebras of the N=2 vacuum module and the Frenkel-Zhu bimodule.

Vacuum vectors are dicts over keys of the parabolic vacuum module
(``((mono), 0)``), module vectors over keys of the target free module.
Field modes of generators follow
    L_(n) = L_{n-1},  J_(n) = J_n,  G_(n) = G_{n-1/2};
composite states use the Borcherds iterate formula.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import sympy as sp

from . import references
from .exactla import Echelon
from .reps import FreeModule, present_module
from .superalg import NS2_GM, NS2_GP, NS2_J, NS2_L, Parameters, _add, fmt_q

TWISTS = ("id", "sigma")
DEFAULT_SLACK_BOUND = 6
MAX_DEPTH = 200

FIELD_WEIGHT = {NS2_L: Fraction(2), NS2_J: Fraction(1),
                NS2_GP: Fraction(3, 2), NS2_GM: Fraction(3, 2)}


def binom(x, k: int) -> Fraction:
    """Generalized binomial coefficient for rational x."""
    x = Fraction(x)
    out = Fraction(1)
    for i in range(k):
        out = out * (x - i) / (i + 1)
    return out


def field_index(g) -> Fraction:
    """n with X_(n) equal to the algebra mode g."""
    d, f = g
    mode = Fraction(d, 2)
    if f == NS2_L:
        return mode + 1
    if f == NS2_J:
        return mode
    return mode + Fraction(1, 2)


def mode_of(family, n) -> tuple:
    """Algebra mode of the field mode X_(n)."""
    n = Fraction(n)
    if family == NS2_L:
        m = n - 1
    elif family == NS2_J:
        m = n
    else:
        m = n - Fraction(1, 2)
    return (int(2 * m), family)


def _is_odd(f):
    return f in (NS2_GP, NS2_GM)


def _scale_add(out, vec, s):
    if s:
        for k, v in vec.items():
            _add(out, k, s * v)


# ---------------------------------------------------------------------------
# field modes


class FieldEngine:
    """Modes of vacuum states acting on a free module, with memoization."""

    def __init__(self, params: Parameters):
        self.params = params
        self.vac_pres = present_module("vacuum-ns2", params)
        self.vac = self.vac_pres.free
        self._memo = {}

    def weight(self, mono) -> Fraction:
        return Fraction(-sum(g[0] for g in mono), 2)

    def parity(self, mono) -> int:
        return sum(1 for g in mono if _is_odd(g[1])) % 2

    def apply(self, A: dict, n, w: dict, M: FreeModule) -> dict:
        """A_(n) w for a vacuum vector A and a module vector w."""
        n = Fraction(n)
        out = {}
        for (amono, _), ac in A.items():
            for key, wc in w.items():
                _scale_add(out, self._mono(amono, n, key, M), ac * wc)
        return out

    def _mono(self, mono, n, key, M, depth=0):
        ck = (id(M), mono, n, key)
        hit = self._memo.get(ck)
        if hit is not None:
            return hit
        if depth > MAX_DEPTH:
            raise RecursionError("field mode recursion exceeded its depth guard")
        lv = M.level(key)
        wt = self.weight(mono)
        if lv + wt - n - 1 < 0:
            res = {}
        elif not mono:
            res = {key: Fraction(1)} if n == -1 else {}
        else:
            g, rest = mono[0], mono[1:]
            X = g[1]
            p = field_index(g)
            pB = self.parity(rest)
            wB = self.weight(rest)
            wX = FIELD_WEIGHT[X]
            sgn2 = (1 if int(p) % 2 else -1) * (-1 if _is_odd(X) and pB else 1)
            res = {}
            imax = int(max(lv + wB - n - 1, lv + wX - 1))
            for i in range(0, imax + 1):
                cf = (-1) ** i * binom(p, i)
                if not cf:
                    continue
                # X_(p-i) B_(n+i) w
                if lv + wB - (n + i) - 1 >= 0:
                    bw = self._mono(rest, n + i, key, M, depth + 1)
                    if bw:
                        xg = mode_of(X, p - i)
                        for k, v in bw.items():
                            _scale_add(res, M.act_gen(xg, k), cf * v)
                # B_(p+n-i) X_(i) w
                if lv + wX - i - 1 >= 0:
                    xw = M.act_gen(mode_of(X, i), key)
                    for k, v in xw.items():
                        _scale_add(res, self._mono(rest, p + n - i, k, M, depth + 1),
                                   sgn2 * cf * v)
        self._memo[ck] = res
        return res


_ENGINES = {}


def field_engine(params) -> FieldEngine:
    eng = _ENGINES.get(params)
    if eng is None:
        eng = FieldEngine(params)
        _ENGINES[params] = eng
    return eng


def field_mode_apply(params, A: dict, n, v: dict, M: FreeModule | None = None) -> dict:
    eng = field_engine(params)
    return eng.apply(A, n, v, M or eng.vac)


def vac_state(params, *gens) -> dict:
    """Vacuum vector gens[0] gens[1] ... 1, normal ordered."""
    eng = field_engine(params)
    return eng.vac.act_word(tuple(gens), eng.vac.cyclic())


# ---------------------------------------------------------------------------
# twisted products


def _homogeneous_parts(eng, A):
    parts = {}
    for k, v in A.items():
        parts.setdefault((eng.weight(k[0]), eng.parity(k[0])), {})[k] = v
    return parts


def _module_parity(M: FreeModule, key):
    return sum(1 for g in key[0] if M.spec.is_odd(g)) % 2


def _sum_modes(eng, A, v, M, coef, first):
    """sum_l coef(l) A_(l + first) v, truncated by weight."""
    out = {}
    for key, vc in v.items():
        lv = M.level(key)
        for amono_key, ac in A.items():
            wt = eng.weight(amono_key[0])
            lmax = int(lv + wt - 1 - first)
            for l in range(0, lmax + 1):
                c = coef(l)
                if c:
                    _scale_add(out, eng._mono(amono_key[0], Fraction(l + first), key, M),
                               c * ac * vc)
    return out


def _star(params, g, A: dict, v: dict, side="left", M: FreeModule | None = None) -> dict:
    if g not in TWISTS:
        raise ValueError(f"unknown twist {g!r}")
    eng = field_engine(params)
    M = M or eng.vac
    out = {}
    for (D, i), Ah in _homogeneous_parts(eng, A).items():
        if g == "id" and i == 1:
            continue
        if side == "left":
            part = _sum_modes(eng, Ah, v, M, lambda l, D=D: binom(D, l), -1)
            _scale_add(out, part, 1)
        else:
            for key, vc in v.items():
                j = _module_parity(M, key)
                s = -1 if (g == "sigma" and i and j) else 1
                part = _sum_modes(eng, Ah, {key: vc}, M, lambda l, D=D: binom(D - 1, l), -1)
                _scale_add(out, part, s)
    return out


def _circle(params, g, A: dict, v: dict, M: FreeModule | None = None) -> dict:
    if g not in TWISTS:
        raise ValueError(f"unknown twist {g!r}")
    eng = field_engine(params)
    M = M or eng.vac
    out = {}
    for (D, i), Ah in _homogeneous_parts(eng, A).items():
        if g == "sigma":
            part = _sum_modes(eng, Ah, v, M, lambda l, D=D: binom(D, l), -2)
        else:
            part = _sum_modes(eng, Ah, v, M, lambda l, D=D, i=i: binom(D - Fraction(i, 2), l),
                              -2 + i)
        _scale_add(out, part, 1)
    return out


def _check_homogeneous(params, A):
    eng = field_engine(params)
    if len(_homogeneous_parts(eng, A)) > 1:
        raise ValueError("A must be homogeneous in weight and parity")


def zhu_star(ctx, A: dict, v: dict, side="left", module: FreeModule | None = None) -> dict:
    """A * v (side='left') or v * A (side='right') for the twist of ctx."""
    _check_homogeneous(ctx.params, A)
    return _star(ctx.params, ctx.g, A, v, side, module)


def zhu_circle(ctx, A: dict, v: dict, module: FreeModule | None = None) -> dict:
    _check_homogeneous(ctx.params, A)
    return _circle(ctx.params, ctx.g, A, v, module)


# ---------------------------------------------------------------------------
# descent rewriting


def _descent_data(g, family):
    """(beta, n0): X_(n) w = -sum_{l>=1} binom(beta, l) X_(n+l) w mod O for n <= n0."""
    if g == "sigma" or not _is_odd(family):
        return FIELD_WEIGHT[family], -2
    return FIELD_WEIGHT[family] - Fraction(1, 2), -1


class Descent:
    """Reduction of module vectors modulo O_g onto irreducible monomials."""

    def __init__(self, params, g, M: FreeModule):
        self.params = params
        self.g = g
        self.M = M
        self._memo = {}

    def reducible(self, gen) -> bool:
        return field_index(gen) <= _descent_data(self.g, gen[1])[1]

    def is_irreducible(self, key) -> bool:
        return not any(self.reducible(x) for x in key[0])

    def reduce(self, vec: dict) -> dict:
        out = {}
        for k, v in vec.items():
            _scale_add(out, self._key(k), v)
        return out

    def _key(self, key):
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        mono, t = key
        pos = next((i for i, x in enumerate(mono) if self.reducible(x)), None)
        if pos is None:
            res = {key: Fraction(1)}
        else:
            M = self.M
            x = mono[pos]
            rest_key = (mono[:pos] + mono[pos + 1:], t)
            w = M.act_gen(x, rest_key)
            s = w.get(key)
            if not s:
                raise RuntimeError("descent: leading monomial lost in reordering")
            res = {}
            beta, _ = _descent_data(self.g, x[1])
            p = field_index(x)
            lv = M.level(rest_key)
            wX = FIELD_WEIGHT[x[1]]
            # X_(p) rest = s*key + (commutator terms)
            for l in range(1, int(lv + wX - p - 1) + 1):
                c = binom(beta, l)
                if c:
                    y = M.act_gen(mode_of(x[1], p + l), rest_key)
                    _scale_add(res, self.reduce(y), -c / s)
            corr = {k: v for k, v in w.items() if k != key}
            _scale_add(res, self.reduce(corr), -1 / s)
        self._memo[key] = res
        return res


# ---------------------------------------------------------------------------
# Zhu contexts


def _vac_keys_upto(eng, W):
    keys = []
    d = 0
    while Fraction(d, 2) <= W:
        for m in eng.vac.monos_at_level(Fraction(d, 2)):
            keys.append((m, 0))
        d += 1
    return keys


def expected_codims(g, delta):
    """dim of the degree-<=delta filtered piece of U(gl11) or C[h, q]."""
    delta = Fraction(delta)
    if g == "sigma":
        n = 0
        a = 0
        while 2 * a <= delta:
            b = 0
            while 2 * a + b <= delta:
                for e1, e2 in product((0, 1), repeat=2):
                    if 2 * a + b + Fraction(3, 2) * (e1 + e2) <= delta:
                        n += 1
                b += 1
            a += 1
        return n
    return sum(1 for a in range(int(delta // 2) + 1) for b in range(int(delta - 2 * a) + 1))


@dataclass
class ZhuContext:
    g: str
    params: Parameters
    delta: Fraction
    slack: int
    method: str
    certificate: dict
    echelon: Echelon | None = field(default=None, repr=False)
    descent: Descent | None = field(default=None, repr=False)

    def basis(self):
        eng = field_engine(self.params)
        return [k for k in _vac_keys_upto(eng, self.delta) if self.descent.is_irreducible(k)]


@dataclass
class ZhuCoset:
    ctx: ZhuContext
    coords: dict   # irreducible vacuum key -> Fraction

    def is_zero(self):
        return not self.coords

    def __eq__(self, other):
        return isinstance(other, ZhuCoset) and self.coords == other.coords

    def table(self):
        spec = field_engine(self.ctx.params).vac.spec
        return {(" ".join(spec.label(x) for x in k[0]) or "1"): fmt_q(v)
                for k, v in sorted(self.coords.items())}


def _column(eng, desc, key):
    # heavier vectors first; within a weight, reducible monomials first
    return (-eng.weight(key[0]), 0 if not desc.is_irreducible(key) else 1, key)


def _generator_elements(g, eng, W):
    """Descent elements sum_i binom(beta + n', i) X_(n0 - m + i) B, top weight <= W."""
    for X in (NS2_L, NS2_J, NS2_GP, NS2_GM):
        beta, n0 = _descent_data(g, X)
        wX = FIELD_WEIGHT[X]
        for bkey in _vac_keys_upto(eng, W):
            wB = eng.weight(bkey[0])
            m = 0
            while wX + wB - (n0 - m) - 1 <= W:
                for npr in range(0, m + 1):
                    vec = {}
                    lmax = int(wB + wX - 1 - (n0 - m))
                    for i in range(0, lmax + 1):
                        c = binom(beta + npr, i)
                        if c:
                            y = eng.vac.act_gen(mode_of(X, n0 - m + i), bkey)
                            _scale_add(vec, y, c)
                    if vec:
                        yield vec
                m += 1


def _full_elements(g, eng, W):
    keys = _vac_keys_upto(eng, W)
    for akey in keys:
        wA = eng.weight(akey[0])
        i = eng.parity(akey[0])
        first = -2 if (g == "sigma" or i == 0) else -1
        for bkey in keys:
            if wA + eng.weight(bkey[0]) - first - 1 > W:
                continue
            vec = _circle(eng.params, g, {akey: Fraction(1)}, {bkey: Fraction(1)})
            if vec:
                yield vec


def build_o_span(g, params: Parameters, delta, slack=None, spanning="full",
                 slack_bound=DEFAULT_SLACK_BOUND, certify=True) -> ZhuContext:
    """Span of O_g intersected with V_{<=delta}, grown in slack until stable.

    spanning='full' uses every circle product A o B; 'generators' uses the
    descent elements of the four generating fields (cheaper, same span).
    """
    if g not in TWISTS:
        raise ValueError(f"unknown twist {g!r}")
    delta = Fraction(delta)
    if delta < 0:
        raise ValueError("delta >= 0 required")
    eng = field_engine(params)
    desc = Descent(params, g, eng.vac)
    low_keys = _vac_keys_upto(eng, delta)
    ech = Echelon()
    seen = set()
    dims = []
    chosen = None
    s = 0
    bound = slack if slack is not None else slack_bound
    gen = _generator_elements if spanning == "generators" else _full_elements
    while s <= bound:
        W = delta + s
        for vec in gen(g, eng, W):
            sig = tuple(sorted(vec.items()))
            if sig in seen:
                continue
            seen.add(sig)
            ech.add({_column(eng, desc, k): v for k, v in vec.items()})
        d = sum(1 for c in ech.pivots if -c[0] <= delta)
        dims.append(d)
        if slack is None and len(dims) >= 3 and dims[-1] == dims[-2] == dims[-3]:
            chosen = s
            break
        s += 1
    if chosen is None:
        if slack is None:
            raise RuntimeError(f"O-span did not stabilize within slack {slack_bound}: {dims}")
        chosen = slack
    codim = len(low_keys) - dims[-1]
    expected = expected_codims(g, delta)
    cert = {"dims_by_slack": dims, "dim_V": len(low_keys), "codim": codim,
            "expected_codim": expected, "ok": codim == expected}
    if certify and codim != expected:
        raise RuntimeError(f"O-span certificate failed: codim {codim} != expected {expected}")
    return ZhuContext(g, params, delta, chosen, "span", cert, ech, desc)


def descent_context(g, params: Parameters, delta) -> ZhuContext:
    """Context that reduces by descent rewriting only (no span construction)."""
    eng = field_engine(params)
    desc = Descent(params, g, eng.vac)
    n_irr = sum(1 for k in _vac_keys_upto(eng, Fraction(delta)) if desc.is_irreducible(k))
    cert = {"codim": n_irr, "expected_codim": expected_codims(g, delta),
            "ok": n_irr == expected_codims(g, delta)}
    return ZhuContext(g, params, Fraction(delta), 0, "descent", cert, None, desc)


def zhu_reduce(ctx: ZhuContext, v: dict) -> ZhuCoset:
    eng = field_engine(ctx.params)
    for k in v:
        if eng.weight(k[0]) > ctx.delta:
            raise ValueError(f"vector of weight {eng.weight(k[0])} exceeds delta {ctx.delta}")
    if ctx.method == "span":
        r = ctx.echelon.reduce({_column(eng, ctx.descent, k): x for k, x in v.items()})
        return ZhuCoset(ctx, {c[2]: x for c, x in r.items()})
    return ZhuCoset(ctx, ctx.descent.reduce(v))


# ---------------------------------------------------------------------------
# cosets as gl(1|1) elements / polynomials

Zs, Js = sp.symbols("Z J")
hs, qs = sp.symbols("h q")


@dataclass
class Gl11Element:
    """P1(Z, J) + P2(Z, J) Psi- Psi+ (odd parts must vanish for even cosets)."""

    P1: sp.Expr
    P2: sp.Expr

    def normalized(self):
        """Scale so the leading coefficient (first term of P1, else P2) is 1."""
        for P in (self.P1, self.P2):
            poly = sp.Poly(P, Zs, Js)
            if not poly.is_zero:
                lc = poly.coeffs()[0]
                return Gl11Element(sp.expand(self.P1 / lc), sp.expand(self.P2 / lc))
        return self

    def proportional_to(self, other) -> bool:
        a, b = self.normalized(), other.normalized()
        return sp.expand(a.P1 - b.P1) == 0 and sp.expand(a.P2 - b.P2) == 0

    def table(self):
        return {"P1": poly_table(self.P1, (Zs, Js)), "P2": poly_table(self.P2, (Zs, Js))}


def poly_table(expr, gens):
    poly = sp.Poly(sp.expand(expr), *gens)
    out = {}
    for mon, cf in sorted(poly.terms()):
        label = "*".join(f"{g}^{e}" if e > 1 else str(g)
                         for g, e in zip(gens, mon) if e) or "1"
        out[label] = _sfmt(cf)
    return out


def _sfmt(x):
    x = sp.Rational(x)
    return str(x.p) if x.q == 1 else f"{x.p}/{x.q}"


def _q2s(x: Fraction):
    return sp.Rational(x.numerator, x.denominator)


def _left_gen_star(params, X, v):
    """X * v for a generating field X (simple mode sum)."""
    eng = field_engine(params)
    D = FIELD_WEIGHT[X]
    out = {}
    for key, vc in v.items():
        lv = eng.vac.level(key)
        for l in range(0, int(lv + D) + 1):
            c = binom(D, l)
            if c:
                _scale_add(out, eng.vac.act_gen(mode_of(X, l - 1), key), c * vc)
    return out


def _solve(images, target):
    """Coordinates of target in the span of images (dicts); None if absent."""
    cols = sorted({k for im in images for k in im} | set(target))
    idx = {k: i for i, k in enumerate(cols)}
    ech = Echelon()
    # augment each image with a tag column to recover coordinates
    n = len(cols)
    for j, im in enumerate(images):
        row = {idx[k]: v for k, v in im.items()}
        row[n + j] = Fraction(1)
        ech.add(row)
    r = ech.reduce({idx[k]: v for k, v in target.items()})
    if any(c < n for c in r):
        return None
    # target - sum(coeff * image) reduces to zero: r holds -coeffs on tags
    return [-r.get(n + j, Fraction(0)) for j in range(len(images))]


def gl11_monomials(delta):
    out = []
    delta = Fraction(delta)
    a = 0
    while 2 * a <= delta:
        b = 0
        while 2 * a + b <= delta:
            for e1, e2 in product((0, 1), repeat=2):
                if 2 * a + b + Fraction(3, 2) * (e1 + e2) <= delta:
                    out.append((a, b, e1, e2))
            b += 1
        a += 1
    return out


def gl11_image(params, a, b, e1, e2) -> dict:
    """Vacuum representative of i_sigma(Z^a J^b (Psi-)^e1 (Psi+)^e2)."""
    eng = field_engine(params)
    c = params.c
    v = eng.vac.cyclic()
    if e2:
        v = _left_gen_star(params, NS2_GP, v)
    if e1:
        v = _left_gen_star(params, NS2_GM, v)
    for _ in range(b):
        v = _left_gen_star(params, NS2_J, v)
    for _ in range(a):
        w = _left_gen_star(params, NS2_L, v)
        _scale_add(w, v, -c / 24)
        v = w
    return v


def coset_to_gl11(ctx: ZhuContext, coset: ZhuCoset) -> Gl11Element:
    if ctx.g != "sigma":
        raise ValueError("coset_to_gl11 needs the sigma twist")
    mons = gl11_monomials(ctx.delta)
    images = [zhu_reduce(ctx, gl11_image(ctx.params, *m)).coords for m in mons]
    sol = _solve(images, coset.coords)
    if sol is None:
        raise RuntimeError("coset not in the span of gl(1|1) images (O-span unstable?)")
    P1 = sp.Integer(0)
    P2 = sp.Integer(0)
    for (a, b, e1, e2), x in zip(mons, sol):
        if not x:
            continue
        term = _q2s(x) * Zs ** a * Js ** b
        if (e1, e2) == (0, 0):
            P1 += term
        elif (e1, e2) == (1, 1):
            P2 += term
        else:
            raise RuntimeError("odd component in an even coset")
    return Gl11Element(sp.expand(P1), sp.expand(P2))


def poly_image(params, a, b) -> dict:
    """Vacuum representative of h^a q^b under i_id."""
    eng = field_engine(params)
    v = eng.vac.cyclic()
    for _ in range(b):
        v = _left_gen_star(params, NS2_J, v)
    for _ in range(a):
        v = _left_gen_star(params, NS2_L, v)
    return v


def coset_to_poly(ctx: ZhuContext, coset: ZhuCoset) -> sp.Expr:
    if ctx.g != "id":
        raise ValueError("coset_to_poly needs the id twist")
    d = ctx.delta
    mons = [(a, b) for a in range(int(d // 2) + 1) for b in range(int(d - 2 * a) + 1)]
    images = [zhu_reduce(ctx, poly_image(ctx.params, a, b)).coords for a, b in mons]
    sol = _solve(images, coset.coords)
    if sol is None:
        raise RuntimeError("coset not in the span of polynomial images")
    return sp.expand(sum((_q2s(x) * hs ** a * qs ** b for (a, b), x in zip(mons, sol) if x),
                         sp.Integer(0)))


def projective(expr, gens):
    """Normalize a polynomial so its leading coefficient (lex order) is 1."""
    poly = sp.Poly(sp.expand(expr), *gens)
    if poly.is_zero:
        return sp.Integer(0)
    return sp.expand(expr / poly.coeffs()[0])


# ---------------------------------------------------------------------------
# gl(1|1) modules


@dataclass
class Gl11Action:
    even: sp.Expr      # scalar on the highest-weight line of M_{z,j}
    odd: sp.Expr       # scalar on Psi- v
    simple_dim: int
    zero_on_simple: bool


def gl11_action(phi: Gl11Element, z, j) -> Gl11Action:
    z, j = sp.nsimplify(z), sp.nsimplify(j)
    even = sp.simplify(phi.P1.subs({Zs: z, Js: j}))
    odd = sp.simplify(phi.P1.subs({Zs: z, Js: j - 1}) + 2 * z * phi.P2.subs({Zs: z, Js: j - 1}))
    if z == 0:
        return Gl11Action(even, odd, 1, even == 0)
    return Gl11Action(even, odd, 2, even == 0 and odd == 0)


def p01_points(params: Parameters):
    a = params.a
    pts = []
    for r in range(1, params.p):
        for th in range(0, r):
            z = a * (th + 1) * (r - 1 - th)
            mu = a * ((r - 1 - th) - (th + 1))
            pts.append((z, mu + Fraction(1, 2)))
    return pts


def p02_family(params: Parameters, mu=None):
    """[(z(mu), j(mu))] per (r, s) in I_BPZ, symbolic in mu by default."""
    mu = sp.Symbol("mu") if mu is None else mu
    a = _q2s(params.a)
    return [(((a * r - s) ** 2 - mu ** 2) / (4 * a), mu + sp.Rational(1, 2))
            for r, s in params.bpz_set()]


# ---------------------------------------------------------------------------
# Frenkel-Zhu bimodule of the chiral Verma module

xl, xr, ys, Ps = sp.symbols("x_l x_r y P")


@dataclass
class FZElement:
    f: sp.Expr   # even part
    g: sp.Expr   # coefficient of psi

    def table(self):
        return {"even": poly_table(self.f, (xl, xr, ys)), "odd": poly_table(self.g, (xl, xr, ys))}


class FZModel:
    """A_id(M+_{j,c}) in the polynomial normal form C[x_l, x_r, y](1 + psi)."""

    def __init__(self, params: Parameters, j):
        self.params = params
        self.j = Fraction(j)
        self.pres = present_module("chiral-verma-ns2", params, j=self.j)
        self.M = self.pres.free
        self.eng = field_engine(params)
        self.desc = Descent(params, "id", self.M)
        self._images = {}

    def hw(self):
        return self.M.cyclic()

    def psi(self):
        return self.M.act_gen((-1, NS2_GM), ((), 0))

    def _left_h(self, v):
        # L * v = L_{-2} v + 2 L_{-1} v + L_0 v
        out = {}
        for g, c in (((-4, NS2_L), 1), ((-2, NS2_L), 2), ((0, NS2_L), 1)):
            _scale_add(out, self.M.act_gen_vec(g, v), Fraction(c))
        return out

    def _right_h(self, v):
        out = {}
        for g in ((-4, NS2_L), (-2, NS2_L)):
            _scale_add(out, self.M.act_gen_vec(g, v), Fraction(1))
        return out

    def _left_q(self, v):
        out = {}
        for g in ((-2, NS2_J), (0, NS2_J)):
            _scale_add(out, self.M.act_gen_vec(g, v), Fraction(1))
        return out

    def _right_q(self, v):
        return self.M.act_gen_vec((-2, NS2_J), v)

    def left_star(self, A: dict, v: dict) -> dict:
        return _star(self.params, "id", A, v, "left", self.M)

    def right_star(self, v: dict, A: dict) -> dict:
        return _star(self.params, "id", A, v, "right", self.M)

    def image(self, a, b, c, e) -> dict:
        """Reduced image of P^a x_r^b y^c psi^e (P = x_l - x_r = L_{-1} + L_0)."""
        key = (a, b, c, e)
        hit = self._images.get(key)
        if hit is None:
            v = self.psi() if e else self.hw()
            for _ in range(c):
                v = self._right_q(v)
            for _ in range(b):
                v = self._right_h(v)
            for _ in range(a):
                w = self.M.act_gen_vec((-2, NS2_L), v)
                _scale_add(w, self.M.act_gen_vec((0, NS2_L), v), 1)
                v = w
            hit = self.desc.reduce(v)
            self._images[key] = hit
        return hit

    def reduce(self, v: dict) -> FZElement:
        red = self.desc.reduce(v)
        if not red:
            return FZElement(sp.Integer(0), sp.Integer(0))
        top = max(self.M.level(k) for k in v)
        parts = []
        for e in (0, 1):
            mons = [(a, b, c) for a in range(int(top) + 1) for b in range(int(top // 2) + 1)
                    for c in range(int(top) + 1) if a + 2 * b + c + Fraction(e, 2) <= top]
            parts.append((e, mons))
        images, labels = [], []
        for e, mons in parts:
            for m in mons:
                images.append(self.image(*m, e))
                labels.append((*m, e))
        sol = _solve(images, red)
        if sol is None:
            raise RuntimeError("fz_reduce: vector outside the polynomial model")
        f = sp.Integer(0)
        g = sp.Integer(0)
        for (a, b, c, e), x in zip(labels, sol):
            if x:
                t = _q2s(x) * (xl - xr) ** a * xr ** b * ys ** c
                if e:
                    g += t
                else:
                    f += t
        return FZElement(sp.expand(f), sp.expand(g))


def fz_reduce(params: Parameters, j, v: dict, model: FZModel | None = None) -> FZElement:
    model = model or FZModel(params, j)
    return model.reduce(v)


# -- the (3, 2) kernel and fusion -------------------------------------------


def w_vectors(model: FZModel):
    """w1 = G-_{-3/2} G-_{-1/2} v and w2 in M+_{2/3,-1}."""
    M = model.M
    w1 = M.act_word(((-3, NS2_GM), (-1, NS2_GM)), M.cyclic())
    terms = [(4, ((-4, NS2_J),)), (-3, ((-3, NS2_GP), (-1, NS2_GM))),
             (-2, ((-2, NS2_L), (-2, NS2_J))), (-2, ((-2, NS2_J), (-2, NS2_J))),
             (4, ((-2, NS2_L), (-2, NS2_L)))]
    w2 = M.act_elem({w: Fraction(c) for c, w in terms}, M.cyclic())
    return w1, w2


def kernel_generators(model: FZModel):
    """Computed f1'..f3', g1'..g3' (as FZElements) from w1 and w2."""
    M = model.M
    w1, w2 = w_vectors(model)
    gp_m, gp_p, gm_m = (-1, NS2_GP), (1, NS2_GP), (-1, NS2_GM)
    f1 = M.act_word((gp_m, gp_p), w1)
    f2 = w2
    f3 = M.act_word((gp_m, gm_m), w2)
    g1 = M.act_word((gp_p,), w1)
    g2 = M.act_word((gp_m,), w1)
    g3 = M.act_word((gm_m,), w2)
    fs = [model.reduce(v).f for v in (f1, f2, f3)]
    gs = [model.reduce(v).g for v in (g1, g2, g3)]
    return fs, gs


_FG_CACHE = {}


def zhu_polys(params: Parameters, delta=None):
    """(f_c, g_c) in C[h, q] via the id twist."""
    key = params
    if key in _FG_CACHE:
        return _FG_CACHE[key]
    from .reps import find_singular
    lvl = (params.p - 1) * params.pp
    vac = field_engine(params).vac_pres
    (N,) = find_singular(vac, lvl, 0)
    GG = field_engine(params).vac.act_word(((-1, NS2_GP), (-1, NS2_GM)), N)
    ctx = descent_context("id", params, delta or lvl + 1)
    f = coset_to_poly(ctx, zhu_reduce(ctx, N))
    g = coset_to_poly(ctx, zhu_reduce(ctx, GG))
    _FG_CACHE[key] = (f, g)
    return f, g


def classification_data(params: Parameters):
    """Zero locus of (f_c, g_c): common curve factor and isolated points."""
    f, g = zhu_polys(params)
    common = sp.gcd(sp.Poly(f, hs, qs), sp.Poly(g, hs, qs)).as_expr()
    f2 = sp.cancel(f / common)
    g2 = sp.cancel(g / common)
    pts = sp.solve([f2, g2], [hs, qs], dict=True)
    isolated = []
    for sol in pts:
        h0, q0 = sol[hs], sol[qs]
        if h0.is_rational and q0.is_rational and sp.simplify(common.subs({hs: h0, qs: q0})) != 0:
            isolated.append((h0, q0))
    isolated = sorted(set(isolated), key=lambda t: t[1])
    return common, isolated


def module_label(params, h, q, parity_flip=False):
    """Name of a 1-dim A_id(L_c) module from its (h, q) eigenvalues (c = -1)."""
    common, isolated = classification_data(params)
    h, q = sp.nsimplify(h), sp.nsimplify(q)
    pre = "Pi " if parity_flip else ""
    for h0, q0 in isolated:
        if h0 == h and q0 == q:
            eps = sp.Rational(3, 2) * q0
            return f"{pre}C({eps})"
    if sp.simplify(common.subs({hs: h, qs: q})) == 0:
        return f"{pre}C_{q}"
    return None


def fz_kernel_and_fusion(params: Parameters, h_right, q_right, right_odd=False,
                         use_reference_generators=False) -> dict:
    if (params.p, params.pp) != (3, 2):
        raise ValueError("the bimodule quotient is implemented for (p, p') = (3, 2)")
    hR, qR = sp.nsimplify(h_right), sp.nsimplify(q_right)
    f_c, g_c = zhu_polys(params)
    if sp.simplify(f_c.subs({hs: hR, qs: qR})) != 0 or sp.simplify(g_c.subs({hs: hR, qs: qR})) != 0:
        raise ValueError(f"(h, q) = ({hR}, {qR}) is not a module of A_id(L_c)")
    model = FZModel(params, Fraction(2, 3))
    if use_reference_generators:
        fs, gs = references.kernel_generators()
    else:
        fs, gs = kernel_generators(model)
    sub = {xr: hR, ys: qR}
    j = sp.Rational(2, 3)

    def quotient(polys):
        ps = [sp.Poly(sp.expand(p.subs(sub)), xl) for p in polys]
        ps = [p for p in ps if not p.is_zero]
        if not ps:
            raise ValueError("kernel vanishes identically; quotient infinite-dimensional")
        gcd = ps[0]
        for p in ps[1:]:
            gcd = sp.gcd(gcd, p)
        return gcd

    out_lines = []
    for part, polys, qshift in (("even", fs, j), ("odd", gs, j - 1)):
        gcd = quotient(polys)
        roots = sp.roots(gcd, xl)
        for r, mult in sorted(roots.items(), key=lambda t: sp.default_sort_key(t[0])):
            odd = (part == "odd") != bool(right_odd)
            q_left = qR + qshift
            out_lines.append({"xl": r, "q": q_left, "multiplicity": mult, "odd": odd,
                              "label": module_label(params, r, q_left, odd)})
    dim = sum(l["multiplicity"] for l in out_lines)
    return {
        "right": {"h": hR, "q": qR, "odd": right_odd,
                  "label": module_label(params, hR, qR, right_odd)},
        "dimension": dim,
        "xl_eigenvalues": [l["xl"] for l in out_lines],
        "parities": ["odd" if l["odd"] else "even" for l in out_lines],
        "summands": out_lines,
    }


def label_eigenvalues(params, label):
    """(h, q) for 'C(eps)' or 'C_j' style labels, from the derived locus."""
    common, isolated = classification_data(params)
    if label.startswith("C(") and label.endswith(")"):
        eps = sp.nsimplify(label[2:-1])
        for h0, q0 in isolated:
            if sp.Rational(3, 2) * q0 == eps:
                return h0, q0
        raise ValueError(f"no isolated point with epsilon {eps}")
    if label.startswith("C_"):
        q = sp.nsimplify(label[2:])
        sol = sp.solve(common.subs(qs, q), hs)
        if len(sol) != 1:
            raise ValueError("curve does not determine h uniquely")
        return sol[0], q
    raise ValueError(f"bad module label {label!r}")
