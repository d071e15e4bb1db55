"""Cyclic modules presented by eigenvalues, annihilators and relation vectors.

Vectors of the underlying free module are dicts ``{key: Fraction}`` with
``key = (mono, t)``: ``mono`` a normal-ordered tuple of lowering generator
modes applied to the cyclic vector and ``t`` the zero-mode coordinate of
relaxed modules (``F0^t v`` for t > 0, ``E0^{-t} v`` for t < 0; always 0
for highest-weight kinds).  Quotients by relation vectors are taken weight
space by weight space with exact linear algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exactla import Echelon, RationalMatrix, nullspace
from .pbw import Pbw
from .superalg import (AFF_E, AFF_F, AFF_H, GL_J, GL_PM, GL_PP, GL_Z, NS2_GM,
                       NS2_GP, NS2_J, NS2_L, Parameters, _add, build_algebra)

NS2_KINDS = ("verma-ns2", "chiral-verma-ns2", "vacuum-ns2", "gen-verma-ns2")
AFF_KINDS = ("verma-affine", "gen-verma-affine", "relaxed-verma-affine", "vacuum-affine")
KINDS = NS2_KINDS + AFF_KINDS + ("gl11-verma",)

FIXPOINT_CAP = 8

_ENGINES = {}


def engine_for(name, params):
    key = (name, params)
    eng = _ENGINES.get(key)
    if eng is None:
        eng = Pbw(build_algebra(name, params))
        _ENGINES[key] = eng
    return eng


def _scale_add(out, vec, s):
    for k, v in vec.items():
        _add(out, k, s * v)


# ---------------------------------------------------------------------------
# free modules


class FreeModule:
    """Induced module: lowering generators act freely on the cyclic vector."""

    def __init__(self, eng: Pbw, kind: str, lowering, zero_scalars, h0, q0,
                 relaxed=None):
        self.eng = eng
        self.spec = eng.spec
        self.kind = kind
        self._lowering = lowering          # predicate on generators
        self.zero_scalars = zero_scalars   # generator -> scalar on cyclic vector
        self.h0 = Fraction(h0)
        self.q0 = Fraction(q0)
        self.relaxed = relaxed             # (omega, j) for relaxed kinds
        self._cache = {}

    def is_lowering(self, g) -> bool:
        return self._lowering(g)

    # weights ---------------------------------------------------------------

    def level(self, key) -> Fraction:
        return Fraction(-sum(g[0] for g in key[0]), 2)

    def charge(self, key) -> Fraction:
        return self.q0 + sum(self.spec.charge(g) for g in key[0]) - 2 * key[1]

    def weight(self, key):
        return (self.level(key), self.charge(key))

    # action ----------------------------------------------------------------

    def _top(self, g, t) -> dict:
        if self.relaxed is not None:
            return self._top_relaxed(g, t)
        if self.is_lowering(g):
            return {((g,), 0): Fraction(1)}
        s = self.zero_scalars.get(g)
        if s:
            return {((), 0): Fraction(s)}
        return {}

    def _top_relaxed(self, g, t) -> dict:
        omega, j = self.relaxed
        d, f = g
        if d < 0:
            return {((g,), t): Fraction(1)}
        if d > 0:
            return {}
        H = 2 * j - 2 * t
        if f == AFF_H:
            return {((), t): H} if H else {}
        if f == AFF_F:
            if t >= 0:
                return {((), t + 1): Fraction(1)}
            # F0 E0^b v = (1/2)(omega - H' - H'^2/2) E0^{b-1} v
            Hp = H - 2
            s = (omega - Hp - Hp * Hp / 2) / 2
            return {((), t + 1): s} if s else {}
        if f == AFF_E:
            if t <= 0:
                return {((), t - 1): Fraction(1)}
            # E0 F0^a v = (1/2)(omega + H'' - H''^2/2) F0^{a-1} v
            Hpp = H + 2
            s = (omega + Hpp - Hpp * Hpp / 2) / 2
            return {((), t - 1): s} if s else {}
        raise ValueError(f"generator {g} not in affine sl2")

    def act_gen(self, g, key) -> dict:
        ck = (g, key)
        hit = self._cache.get(ck)
        if hit is not None:
            return hit
        mono, t = key
        spec = self.spec
        if not mono:
            res = self._top(g, t)
        else:
            y = mono[0]
            odd = spec.is_odd(g)
            if self.is_lowering(g) and (g < y or (g == y and not odd)):
                res = {((g,) + mono, t): Fraction(1)}
            elif g == y and odd:
                res = {}
                rest = (mono[1:], t)
                for bm, bc in spec.bracket(g, g).items():
                    _scale_add(res, self._act_lin(bm, rest), bc / 2)
            else:
                rest = (mono[1:], t)
                sign = -1 if odd and spec.is_odd(y) else 1
                res = {}
                for k, v in self.act_gen(g, rest).items():
                    _scale_add(res, self.act_gen(y, k), sign * v)
                for bm, bc in spec.bracket(g, y).items():
                    _scale_add(res, self._act_lin(bm, rest), bc)
        self._cache[ck] = res
        return res

    def _act_lin(self, bm, key):
        if not bm:
            return {key: Fraction(1)}
        return self.act_gen(bm[0], key)

    def act_gen_vec(self, g, vec) -> dict:
        out = {}
        for k, v in vec.items():
            _scale_add(out, self.act_gen(g, k), v)
        return out

    def act_word(self, word, vec) -> dict:
        for g in reversed(tuple(word)):
            vec = self.act_gen_vec(g, vec)
            if not vec:
                break
        return vec

    def act_elem(self, elem, vec) -> dict:
        """Action of an enveloping-algebra element ``{word: coeff}``."""
        out = {}
        for word, cf in elem.items():
            _scale_add(out, self.act_word(word, vec), Fraction(cf))
        return out

    def cyclic(self) -> dict:
        return {((), 0): Fraction(1)}

    # enumeration -------------------------------------------------------------

    def is_full_lowering(self, g) -> bool:
        """Generators of the whole negative part (used for submodules)."""
        if self.relaxed is None and self.spec.name == "affine-sl2" and g == (0, AFF_F):
            return True
        if self.spec.name == "gl11":
            return g[1] == GL_PM
        return g[0] < 0

    def creation_gens(self, max_level, full=False):
        """Lowering generators of positive level up to max_level, PBW order."""
        spec = self.spec
        pred = self.is_full_lowering if full else self.is_lowering
        out = []
        d_max = int(2 * Fraction(max_level))
        for d in range(-d_max, 0):
            for rank, fam in enumerate(spec.families):
                if fam.zero_only:
                    continue
                if (d % 2 == 1) != fam.half:
                    continue
                g = (d, rank)
                if pred(g):
                    out.append(g)
        return out

    def _level_zero_lowering(self, full=False):
        pred = self.is_full_lowering if full else self.is_lowering
        return [g for g in self.zero_scalars_domain() if pred(g)]

    def zero_scalars_domain(self):
        spec = self.spec
        return [(0, r) for r in range(len(spec.families))]

    def monos_at_level(self, dlevel, reverse=False, full=False):
        """All lowering monomials of positive-level generators at a level."""
        d2 = int(2 * Fraction(dlevel))
        if d2 < 0:
            return []
        gens = self.creation_gens(Fraction(d2, 2), full)
        if reverse:
            gens = gens[::-1]
        spec = self.spec
        out = []

        def rec(i, remaining, acc):
            if remaining == 0:
                out.append(tuple(sorted(acc)))
                return
            if i == len(gens):
                return
            g = gens[i]
            cost = -g[0]
            if cost > remaining:
                rec(i + 1, remaining, acc)
                return
            maxn = 1 if spec.is_odd(g) else remaining // cost
            for n in range(maxn, -1, -1) if reverse else range(maxn + 1):
                if n * cost > remaining:
                    break
                rec(i + 1, remaining - n * cost, acc + [g] * n)

        rec(0, d2, [])
        return out

    def lowering_monos(self, dlevel, dcharge, reverse=False, full=False):
        """Lowering monomials (incl. level-zero ones) with given shifts."""
        out = []
        spec = self.spec
        zero_low = self._level_zero_lowering(full)
        for m in self.monos_at_level(dlevel, reverse, full):
            ch = sum(spec.charge(g) for g in m)
            rem = Fraction(dcharge) - ch
            if not zero_low:
                if rem == 0:
                    out.append(m)
                continue
            (z,) = zero_low  # F0 of affine highest-weight kinds
            zc = spec.charge(z)
            q = rem / zc
            if q.denominator == 1 and q >= 0 and not (spec.is_odd(z) and q > 1):
                out.append(tuple(sorted(m + (z,) * int(q))))
        return out

    def keys_at(self, level, charge, reverse=False):
        level, charge = Fraction(level), Fraction(charge)
        if self.relaxed is None:
            return [(m, 0) for m in self.lowering_monos(level, charge - self.q0, reverse)]
        out = []
        spec = self.spec
        for m in self.monos_at_level(level, reverse):
            ch = self.q0 + sum(spec.charge(g) for g in m)
            t = (ch - charge) / 2
            if t.denominator == 1:
                out.append((m, int(t)))
        return out


# ---------------------------------------------------------------------------
# presentations


@dataclass(eq=False)
class ModulePresentation:
    kind: str
    params: Parameters | None
    free: FreeModule
    relations: list                 # free-module vectors (homogeneous)
    raising: list                   # generators spanning the positive part
    data: dict = field(default_factory=dict)
    charge_step: int = 1            # charge spacing of the mode lattice
    zero_dir: bool = False          # level-zero lowering (affine F0 / relaxed)

    @property
    def spec(self):
        return self.free.spec

    @property
    def h0(self):
        return self.free.h0

    @property
    def q0(self):
        return self.free.q0

    def quotient(self):
        q = self.data.get("_quotient")
        if q is None:
            q = Quotient(self)
            self.data["_quotient"] = q
        return q

    def act(self, elem, vec):
        return self.free.act_elem(elem, vec)

    def cyclic(self):
        return self.free.cyclic()

    def default_window(self, level):
        """Charge window for kinds whose level-zero direction is unbounded."""
        kind = self.kind
        if kind == "gen-verma-affine":
            m = self.data["m"]
            b = (m - 1) + 2 * int(Fraction(level) + 1)
            return (Fraction(-b), Fraction(b))
        return None


def present_module(kind: str, params: Parameters | None = None, **ev) -> ModulePresentation:
    """Build a presentation.

    Eigenvalue keywords per kind:
      verma-ns2: h, j;  chiral-verma-ns2: j (h optional, must equal j/2);
      vacuum-ns2: none;  gen-verma-ns2: m;  verma-affine: j;
      gen-verma-affine: m;  relaxed-verma-affine: h, j;  vacuum-affine: none;
      gl11-verma: z, j.
    ``uniform=True`` presents chiral/vacuum kinds as a Verma quotient by
    relation vectors instead of the equivalent parabolic free module.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown module kind {kind!r}")
    uniform = ev.pop("uniform", False)
    if kind in NS2_KINDS:
        return _present_ns2(kind, params, uniform, **ev)
    if kind in AFF_KINDS:
        return _present_affine(kind, params, **ev)
    eng = engine_for("gl11", None)
    z, j = Fraction(ev["z"]), Fraction(ev["j"])
    free = FreeModule(eng, kind, lambda g: g[1] == GL_PM,
                      {(0, GL_Z): z, (0, GL_J): j}, 0, j)
    return ModulePresentation(kind, None, free, [], [(0, GL_PP)], {"z": z, "j": j})


def _ns2_raising():
    return [(2, NS2_L), (4, NS2_L), (2, NS2_J), (1, NS2_GP), (1, NS2_GM)]


def _present_ns2(kind, params, uniform, **ev):
    if params is None:
        raise ValueError("ns2 modules need (p, p')")
    eng = engine_for("ns2", params)
    a = params.a
    rels = []
    data = {}
    gp_half, gm_half, l_m1 = (-1, NS2_GP), (-1, NS2_GM), (-2, NS2_L)
    if kind == "verma-ns2":
        h, j = Fraction(ev["h"]), Fraction(ev["j"])
        excluded = ()
    elif kind == "chiral-verma-ns2":
        j = Fraction(ev["j"])
        h = Fraction(ev.get("h", j / 2))
        if h != j / 2:
            raise ValueError(f"chiral Verma needs L0 = j/2 (got h={h}, j={j})")
        excluded = (gp_half,)
    elif kind == "vacuum-ns2":
        h = j = Fraction(0)
        excluded = (gp_half, gm_half, l_m1)
    else:
        m = int(ev["m"])
        if m < 1:
            raise ValueError("m >= 1 required")
        jm = params.j(m, 0)
        h, j = a * jm, 2 * a * jm
        excluded = (gp_half,)
        data["m"] = m
    if uniform and excluded:
        rel_words = [(g,) for g in excluded if g != l_m1]
        excluded = ()
    else:
        rel_words = []
    ex = frozenset(excluded)
    free = FreeModule(eng, kind, lambda g: g[0] < 0 and g not in ex,
                      {(0, NS2_L): h, (0, NS2_J): j}, h, j)
    for w in rel_words:
        rels.append(free.act_word(w, free.cyclic()))
    if kind == "gen-verma-ns2":
        word = tuple((-(2 * i - 1), NS2_GM) for i in range(m, 0, -1))
        rels.append(free.act_word(word, free.cyclic()))
    data.update({"h": h, "j": j})
    return ModulePresentation(kind, params, free, rels, _ns2_raising(), data)


def _present_affine(kind, params, **ev):
    if params is None:
        raise ValueError("affine modules need (p, p')")
    eng = engine_for("affine-sl2", params)
    k = params.k
    F0, H0, E0 = (0, AFF_F), (0, AFF_H), (0, AFF_E)
    data = {}
    rels = []
    if kind == "relaxed-verma-affine":
        h, j = Fraction(ev["h"]), Fraction(ev["j"])
        omega = 2 * (k + 2) * h
        free = FreeModule(eng, kind, lambda g: g[0] < 0, {}, h, 2 * j, relaxed=(omega, j))
        data.update({"h": h, "j": j, "omega": omega})
        raising = [(2, AFF_E), (2, AFF_F), (2, AFF_H)]
        return ModulePresentation(kind, params, free, [], raising, data, 2, True)
    if kind == "vacuum-affine":
        j = Fraction(0)
        low = lambda g: g[0] < 0
    elif kind == "verma-affine":
        j = Fraction(ev["j"])
        low = lambda g: g[0] < 0 or g == F0
    else:
        m = int(ev["m"])
        if m < 1:
            raise ValueError("m >= 1 required")
        j = Fraction(m - 1, 2)
        data["m"] = m
        low = lambda g: g[0] < 0 or g == F0
    h = params.delta(j)
    free = FreeModule(eng, kind, low, {H0: 2 * j}, h, 2 * j)
    if kind == "gen-verma-affine":
        rels.append(free.act_word((F0,) * data["m"], free.cyclic()))
    data.update({"j": j, "h": h})
    raising = [E0, (2, AFF_E), (2, AFF_F), (2, AFF_H)]
    return ModulePresentation(kind, params, free, rels, raising, data, 2,
                              kind != "vacuum-affine")


# ---------------------------------------------------------------------------
# weight spaces and quotients


@dataclass
class WeightSpaceBasis:
    level: Fraction
    charge: Fraction
    keys: list                 # spanning normal-form keys, sorted
    index: dict
    relations: Echelon         # relation subspace in key-index coordinates
    basis: list                # surviving keys (non-pivot), sorted

    @property
    def dimension(self):
        return len(self.basis)

    def reduce(self, vec) -> dict:
        """Canonical representative (supported on ``basis``) of a vector."""
        iv = {}
        for k, v in vec.items():
            i = self.index.get(k)
            if i is None:
                raise KeyError(f"key {k} not in weight space {self.level},{self.charge}")
            iv[i] = v
        r = self.relations.reduce(iv)
        return {self.keys[i]: v for i, v in r.items()}

    def coords(self, vec):
        r = self.reduce(vec)
        return [r.get(k, Fraction(0)) for k in self.basis]


class Quotient:
    """Free module modulo the submodule generated by seed vectors."""

    def __init__(self, pres: ModulePresentation, window=None):
        self.pres = pres
        self.free = pres.free
        self.window = window
        self.closed = []       # (weight, vec): n_+-closed relation seeds
        self.singular = []     # (weight, vec): seeds singular modulo the rest
        self._spaces = {}
        self._close(pres.relations)

    def copy(self):
        q = Quotient.__new__(Quotient)
        q.pres, q.free, q.window = self.pres, self.free, self.window
        q.closed = list(self.closed)
        q.singular = list(self.singular)
        q._spaces = {}
        return q

    def _weight_of(self, vec):
        ws = {self.free.weight(k) for k in vec}
        if len(ws) != 1:
            raise ValueError("vector not homogeneous")
        return ws.pop()

    def _raising_for_closure(self):
        ops = list(self.pres.raising)
        if self.free.relaxed is not None:
            ops += [(0, AFF_E), (0, AFF_F)]
        return ops

    def _in_window(self, charge):
        if self.window is None:
            return True
        lo, hi = self.window
        return lo <= charge <= hi

    def _close(self, vecs):
        per_weight = {}
        queue = []
        for v in vecs:
            if v:
                queue.append(v)
        while queue:
            v = queue.pop(0)
            w = self._weight_of(v)
            ech = per_weight.setdefault(w, (Echelon(), {}, []))
            eche, idx, keys = ech
            iv = {}
            for k, x in v.items():
                if k not in idx:
                    idx[k] = len(keys)
                    keys.append(k)
                iv[idx[k]] = x
            if not eche.add(iv):
                continue
            self.closed.append((w, v))
            for x in self._raising_for_closure():
                y = self.free.act_gen_vec(x, v)
                if y and self._in_window(self._weight_of(y)[1]):
                    queue.append(y)

    def add_singular(self, vec):
        w = self._weight_of(vec)
        self.singular.append((w, vec))
        self._spaces = {k: s for k, s in self._spaces.items()
                        if not _below_or_equal(k, w, self.pres.zero_dir)}

    def weight_space(self, level, charge, reverse=False) -> WeightSpaceBasis:
        level, charge = Fraction(level), Fraction(charge)
        key = (level, charge)
        hit = self._spaces.get(key)
        if hit is not None and not reverse:
            return hit
        if level < 0:
            raise ValueError("level must be >= 0")
        keys = sorted(self.free.keys_at(level, charge, reverse), key=_column_order)
        index = {k: i for i, k in enumerate(keys)}
        ech = Echelon()
        for (wl, wc), s in self.closed + self.singular:
            dl, dc = level - wl, charge - wc
            if dl < 0:
                continue
            for m in self.free.lowering_monos(dl, dc, full=True):
                y = self.free.act_word(m, s)
                if y:
                    ech.add({index[k]: v for k, v in y.items()})
        basis = [k for i, k in enumerate(keys) if i not in ech.pivots]
        ws = WeightSpaceBasis(level, charge, keys, index, ech, basis)
        if not reverse:
            self._spaces[key] = ws
        return ws

    def reduce(self, vec) -> dict:
        """Canonical representative of a (possibly inhomogeneous) vector."""
        parts = {}
        for k, v in vec.items():
            parts.setdefault(self.free.weight(k), {})[k] = v
        out = {}
        for (l, c), part in parts.items():
            out.update(self.weight_space(l, c).reduce(part))
        return out

    def is_zero(self, vec) -> bool:
        return not self.reduce(vec)

    # singular vectors ------------------------------------------------------

    def singular_vectors(self, level, charge):
        ws = self.weight_space(level, charge)
        if not ws.basis:
            return []
        cols = len(ws.basis)
        rows = []
        targets = {}
        for ci, b in enumerate(ws.basis):
            for x in self.pres.raising:
                y = self.free.act_gen(x, b)
                if not y:
                    continue
                wy = self.free.weight(next(iter(y)))
                if wy[0] < 0:
                    continue
                red = self.weight_space(*wy).reduce(y)
                for k, v in red.items():
                    ri = targets.setdefault((x, k), len(targets))
                    rows.append((ri, ci, v))
        m = RationalMatrix(len(targets), cols, {})
        for ri, ci, v in rows:
            m.entries[(ri, ci)] = m.entries.get((ri, ci), 0) + v
        m.entries = {k: v for k, v in m.entries.items() if v}
        out = []
        for vec in nullspace(m):
            out.append({b: x for b, x in zip(ws.basis, vec) if x})
        return out


def _column_order(key):
    # relations pivot on monomials whose rightmost factors sit closest to the
    # cyclic vector, so surviving basis monomials avoid the annihilated modes
    mono, t = key
    return (tuple((-d, -r) for d, r in reversed(mono)), -abs(t), t)


def _below_or_equal(key, w, zero_dir):
    (l, c), (wl, wc) = key, w
    if l > wl:
        return True
    if l == wl:
        return c == wc or (zero_dir and c < wc)
    return False


# ---------------------------------------------------------------------------
# public operations


def weight_space(pres: ModulePresentation, level, charge, reverse=False) -> WeightSpaceBasis:
    return pres.quotient().weight_space(level, charge, reverse)


def act(pres: ModulePresentation, elem, vec) -> dict:
    """Action followed by reduction to canonical representatives."""
    return pres.quotient().reduce(pres.act(elem, vec))


def find_singular(pres: ModulePresentation, level, charge):
    """Basis of singular vectors at (level, charge), leading coordinate 1."""
    return pres.quotient().singular_vectors(level, charge)


def is_singular(pres: ModulePresentation, vec) -> bool:
    q = pres.quotient()
    for x in pres.raising:
        y = pres.free.act_gen_vec(x, vec)
        if y and not q.is_zero(y):
            return False
    return True


# ---------------------------------------------------------------------------
# characters


@dataclass
class CharacterSeries:
    """Graded dimensions keyed by absolute (L0, charge).

    Entries are complete for L0 <= max_l0 and charge inside ``window``
    (``None`` = all charges).
    """

    entries: dict
    max_l0: Fraction
    window: tuple | None = None

    def __post_init__(self):
        self.entries = {k: v for k, v in self.entries.items()
                        if v and self._inside(k)}

    def _inside(self, k):
        if k[0] > self.max_l0:
            return False
        if self.window is not None and not (self.window[0] <= k[1] <= self.window[1]):
            return False
        return True

    def get(self, l0, charge):
        return self.entries.get((Fraction(l0), Fraction(charge)), 0)

    def _check(self, other):
        if self.max_l0 != other.max_l0 or self.window != other.window:
            raise ValueError("truncation mismatch")

    def __add__(self, other):
        self._check(other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, 0) + v
        return CharacterSeries(out, self.max_l0, self.window)

    def __sub__(self, other):
        return self + other.scaled(-1)

    def scaled(self, s):
        return CharacterSeries({k: s * v for k, v in self.entries.items()},
                               self.max_l0, self.window)

    def restricted(self, max_l0=None, window="keep"):
        return CharacterSeries(dict(self.entries),
                               self.max_l0 if max_l0 is None else Fraction(max_l0),
                               self.window if window == "keep" else window)

    def table(self, base=Fraction(0)):
        return [(l - base, c, d) for (l, c), d in sorted(self.entries.items())]

    def min_l0(self):
        return min((k[0] for k in self.entries), default=None)


def _support(pres, max_level, window):
    """(level, charge) pairs where the free module can be nonzero."""
    free = pres.free
    out = []
    d_max = int(2 * Fraction(max_level))
    for d in range(0, d_max + 1):
        level = Fraction(d, 2)
        charges = set()
        for m in free.monos_at_level(level):
            charges.add(free.q0 + sum(free.spec.charge(g) for g in m))
        if pres.zero_dir:
            w = window or pres.default_window(level)
            if w is None:
                raise ValueError("a charge window is required for this module kind")
            ext = set()
            for c in charges:
                x = c
                step = 2
                # walk down (F0) and, for relaxed, up (E0) within the window
                while x >= w[0]:
                    if x <= w[1]:
                        ext.add(x)
                    x -= step
                if free.relaxed is not None:
                    x = c + step
                    while x <= w[1]:
                        if x >= w[0]:
                            ext.add(x)
                        x += step
            charges = ext
        elif window is not None:
            charges = {c for c in charges if window[0] <= c <= window[1]}
        for c in sorted(charges, reverse=True):
            out.append((level, c))
    return out


def module_character(pres, max_level, window=None, quotient=None) -> CharacterSeries:
    q = quotient or pres.quotient()
    ent = {}
    for l, c in _support(pres, max_level, window):
        d = q.weight_space(l, c).dimension
        if d:
            ent[(pres.h0 + l, c)] = d
    return CharacterSeries(ent, pres.h0 + Fraction(max_level), _win(window))


def _win(window):
    return None if window is None else (Fraction(window[0]), Fraction(window[1]))


def submodule_character(pres, seeds, max_level, window=None) -> CharacterSeries:
    """Dimensions of U(lowering)·seeds modulo the presentation's relations."""
    q = pres.quotient()
    free = pres.free
    seeds = [s for s in seeds if s]
    ent = {}
    for l, c in _support(pres, max_level, window):
        ws = q.weight_space(l, c)
        ech = Echelon()
        bidx = {k: i for i, k in enumerate(ws.basis)}
        for s in seeds:
            wl, wc = free.weight(next(iter(s)))
            dl, dc = l - wl, c - wc
            if dl < 0:
                continue
            for m in free.lowering_monos(dl, dc, full=True):
                y = free.act_word(m, s)
                if y:
                    r = ws.reduce(y)
                    if r:
                        ech.add({bidx[k]: v for k, v in r.items()})
        if len(ech):
            ent[(pres.h0 + l, c)] = len(ech)
    return CharacterSeries(ent, pres.h0 + Fraction(max_level), _win(window))


@dataclass
class SimpleCharacterReport:
    character: CharacterSeries
    found: list          # (level, charge, round, vector)
    iterations: int
    subsingular: list    # found vectors that appeared only after a quotient


def simple_character(pres, max_level, window=None, report=False):
    """Simple quotient dimensions by iterated singular-vector removal.

    Singular vectors are searched level by level (charge descending within a
    level), removed, and the quotient is rescanned until nothing new appears.
    With a charge window the search runs on a window widened by 2*max_level
    for level-zero-unbounded kinds, since vectors below the window can still
    reach it through E_{-n}.
    """
    if pres.kind == "relaxed-verma-affine":
        raise ValueError("simple_character needs a highest-weight kind")
    window = _win(window)
    if pres.zero_dir:
        w = window or pres.default_window(max_level)
        if w is None:
            raise ValueError("a charge window is required for this module kind")
        widen = 2 * int(Fraction(max_level) + 1)
        search = _support(pres, max_level, (w[0] - widen, w[1]))
    else:
        search = _support(pres, max_level, None)
    q = pres.quotient().copy()
    found = []
    hw = (Fraction(0), pres.q0)
    iterations = 0
    while True:
        iterations += 1
        if iterations > FIXPOINT_CAP:
            raise RuntimeError("simple quotient did not converge within the fixpoint cap")
        new = 0
        for l, c in search:
            if (l, c) == hw:
                continue
            for v in q.singular_vectors(l, c):
                found.append((l, c, iterations, v))
                q.add_singular(v)
                new += 1
        if not new:
            break
    ent = {}
    for l, c in search:
        if window is not None and not (window[0] <= c <= window[1]):
            continue
        d = q.weight_space(l, c).dimension
        if d:
            ent[(pres.h0 + l, c)] = d
    ch = CharacterSeries(ent, pres.h0 + Fraction(max_level), window)
    if not report:
        return ch
    # a vector is subsingular when it is not already singular in the module
    sub = [f for f in found if not is_singular(pres, f[3])]
    return SimpleCharacterReport(ch, found, iterations, sub)


# -- closed forms and flows -------------------------------------------------


def _free_gens(kind, params, theta, budget_level):
    """(level, charge, odd) of the creation modes of a free kind."""
    gens = []
    d_max = int(2 * budget_level) + 2
    if kind in ("verma-ns2", "chiral-verma-ns2", "vacuum-ns2"):
        for d in range(1, d_max + 1):
            lvl = Fraction(d, 2)
            if d % 2 == 0:
                if not (kind == "vacuum-ns2" and d == 2):
                    gens.append((lvl, 0, False))
                gens.append((lvl, 0, False))
            else:
                if kind == "verma-ns2" or d > 1:
                    gens.append((lvl, 1, True))
                if kind != "vacuum-ns2" or d > 1:
                    gens.append((lvl, -1, True))
    else:
        for d in range(2, d_max + 1, 2):
            lvl = Fraction(d, 2)
            gens += [(lvl, 2, False), (lvl, 0, False), (lvl, -2, False)]
    return gens


def closed_form_character(kind, params, max_l0, window=None, theta=0, **ev) -> CharacterSeries:
    """Product-formula character of a free kind, optionally spectrally flowed.

    Keys are absolute (L0, charge); ``theta`` applies the flow
    (h, q) -> (h + theta q + theta^2 c/6, q + theta c/3) directly at the
    generator level, which keeps the expansion exact under truncation.
    """
    max_l0 = Fraction(max_l0)
    theta = Fraction(theta)
    if kind in ("verma-ns2", "chiral-verma-ns2", "vacuum-ns2"):
        c = params.c
        if kind == "verma-ns2":
            h, q = Fraction(ev["h"]), Fraction(ev["j"])
        elif kind == "chiral-verma-ns2":
            q = Fraction(ev["j"])
            h = q / 2
        else:
            h = q = Fraction(0)
        zero_dir = None
    elif kind in ("verma-affine", "relaxed-verma-affine"):
        if theta:
            raise ValueError("flow is defined for ns2 kinds only")
        c = Fraction(0)
        j = Fraction(ev["j"])
        q = 2 * j
        h = Fraction(ev["h"]) if kind == "relaxed-verma-affine" else params.delta(j)
        zero_dir = "F0" if kind == "verma-affine" else "relaxed"
        if window is None:
            raise ValueError("affine closed forms need a charge window")
    else:
        raise ValueError(f"no closed form for kind {kind!r}")
    h_new = h + theta * q + theta * theta * c / 6
    q_new = q + theta * c / 3
    room = max_l0 - h_new
    near = _free_gens(kind, params, theta, abs(theta) + 1)
    negsum = sum(min(Fraction(0), lvl + theta * e) for lvl, e, _ in near)
    gens = _free_gens(kind, params, theta, max(room - negsum + abs(theta), Fraction(0)))
    costs = [(lvl + theta * e, e, odd) for lvl, e, odd in gens]
    neg = [g for g in costs if g[0] <= 0]
    pos = [g for g in costs if g[0] > 0]
    if any(not odd for _, _, odd in neg):
        raise ValueError("non-positive even cost: flow leaves the positive-energy range")
    poly = {(Fraction(0), 0): 1}
    for cost, e, _ in neg:
        nxt = dict(poly)
        for (l, ch), n in poly.items():
            key = (l + cost, ch + e)
            nxt[key] = nxt.get(key, 0) + n
        poly = nxt
    for cost, e, odd in pos:
        nxt = dict(poly)
        for (l, ch), n in poly.items():
            k = 1
            while l + k * cost <= room:
                key = (l + k * cost, ch + k * e)
                nxt[key] = nxt.get(key, 0) + n
                if odd:
                    break
                k += 1
        poly = nxt
    poly = {k: v for k, v in poly.items() if k[0] <= room}
    ent = {}
    if zero_dir is None:
        for (l, ch), n in poly.items():
            key = (h_new + l, q_new + ch)
            ent[key] = ent.get(key, 0) + n
    else:
        lo, hi = Fraction(window[0]), Fraction(window[1])
        for (l, ch), n in poly.items():
            base = q_new + ch
            ts = range(0, int((base - lo) // 2) + 1) if zero_dir == "F0" else \
                range(int(-((hi - base) // 2)), int((base - lo) // 2) + 1)
            for t in ts:
                cc = base - 2 * t
                if lo <= cc <= hi:
                    key = (h_new + l, cc)
                    ent[key] = ent.get(key, 0) + n
    return CharacterSeries(ent, max_l0, _win(window))


def flow_character(ch: CharacterSeries, theta, c, max_l0=None) -> CharacterSeries:
    """Move each entry (h, q) to (h + theta q + theta^2 c/6, q + theta c/3)."""
    theta, c = Fraction(theta), Fraction(c)
    ent = {}
    for (h, q), n in ch.entries.items():
        key = (h + theta * q + theta * theta * c / 6, q + theta * c / 3)
        ent[key] = ent.get(key, 0) + n
    if max_l0 is None:
        max_l0 = max(ent, default=(Fraction(0),))[0] if ent else Fraction(0)
        max_l0 = max(k[0] for k in ent) if ent else Fraction(0)
    window = None
    if ch.window is not None:
        window = (ch.window[0] + theta * c / 3, ch.window[1] + theta * c / 3)
    return CharacterSeries(ent, Fraction(max_l0), window)


def gen_verma_ns2_character(params, m, max_l0, theta=0) -> CharacterSeries:
    """Character of V(m) from its presentation as a chiral Verma quotient.

    The relation vector G-_{-(2m-1)/2}...G-_{-1/2}|m> is a chiral singular
    vector in the frame flowed by m and generates a copy of the chiral Verma
    of charge -a(m+1) there; the quotient character is the difference.
    """
    a = params.a
    jm = params.j(m, 0)
    top = closed_form_character("chiral-verma-ns2", params, max_l0, theta=theta, j=2 * a * jm)
    sub = closed_form_character("chiral-verma-ns2", params, max_l0, theta=Fraction(theta) - m,
                                j=-a * (m + 1))
    return top - sub


def lowest_flowed_l0(kind, params, theta, **ev):
    """Exact lowest L0 of a flowed free ns2 module (minimal monomial cost)."""
    theta = Fraction(theta)
    c = params.c
    if kind == "verma-ns2":
        h, q = Fraction(ev["h"]), Fraction(ev["j"])
    else:
        q = Fraction(ev["j"])
        h = q / 2
    base = h + theta * q + theta * theta * c / 6
    extra = Fraction(0)
    for d in range(1, int(2 * abs(theta)) + 3, 2):
        r = Fraction(d, 2)
        if kind == "verma-ns2" or d > 1:
            extra += min(Fraction(0), r + theta)
        extra += min(Fraction(0), r - theta)
    return base + extra


# -- MFF vector -------------------------------------------------------------


def mff_vector(params: Parameters, r: int) -> dict:
    """E_{-1}^{p-r}|r> as an enveloping-algebra element (integral case p'=1)."""
    if params.pp != 1:
        raise ValueError("mff_vector needs p' = 1; use find_singular otherwise")
    if not 1 <= r <= params.p - 1:
        raise ValueError("1 <= r <= p-1 required")
    word = ((-2, AFF_E),) * (params.p - r)
    return {word: Fraction(1)}


def relaxed_image_weight(params: Parameters, r: int):
    """(L0, H0) of F0^{p-r} v_{p,p'}(r) in V(r): ((p-r)p' + Delta, r - 1)."""
    j = params.j(r, 0)
    return (params.p - r) * params.pp + params.delta(j), Fraction(r - 1)
