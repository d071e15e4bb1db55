"""BGG-type complexes and their Euler characteristics at finite truncation."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .reps import (CharacterSeries, closed_form_character, gen_verma_ns2_character,
                   lowest_flowed_l0, module_character, present_module, simple_character)
from .superalg import Parameters, fmt_q

VARIANTS = ("affine-verma", "affine-parabolic", "n2-chiral", "n2-parabolic", "n2-relaxed")

MAX_DEPTH = 64


@dataclass
class ResolutionSpec:
    variant: str
    params: Parameters
    r: int
    s: int = 0
    j: Fraction | None = None
    depth: int | None = None        # None: chosen from the truncation
    window: tuple | None = None     # charge window (affine kinds, relaxed)
    literal_twist: bool = False     # n2-relaxed: apply ^{pm}, ^{pm-r} verbatim

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        P = self.params
        if self.variant in ("affine-verma", "n2-chiral"):
            if (self.r, self.s) not in P.kw_set():
                raise ValueError(f"(r, s) = ({self.r}, {self.s}) not in I_KW")
        elif self.variant == "n2-relaxed":
            if (self.r, self.s) not in P.bpz_set():
                raise ValueError(f"(r, s) = ({self.r}, {self.s}) not in I_BPZ")
            if self.j is None:
                raise ValueError("n2-relaxed needs j")
            self.j = Fraction(self.j)
            for jj in (P.j(self.r, self.s), P.j(P.p - self.r, P.pp - self.s)):
                if (self.j - jj).denominator == 1:
                    raise ValueError(f"j = {self.j} lies in {jj} + Z")
        else:
            if self.s != 0:
                raise ValueError("parabolic variants take s = 0")
            if not 1 <= self.r <= P.p - 1:
                raise ValueError("1 <= r <= p-1 required")
        if self.depth is not None and self.depth < 0:
            raise ValueError("depth >= 0 required")


@dataclass
class TermModule:
    kind: str
    data: dict            # eigenvalue data, e.g. {"m": 7} or {"h": .., "j": ..}
    theta: int            # spectral-flow twist (0 on the affine side)
    label: str

    def presentation(self, params):
        return present_module(self.kind, params, **self.data)


@dataclass
class ResolutionTerm:
    n: int
    modules: list = field(default_factory=list)


def _index(variant_n, P, r):
    """(M, theta) of the n-th signed index for n in Z."""
    p = P.p
    if variant_n % 2 == 0:
        m = variant_n // 2
        return 2 * p * m + r, p * m
    m = (variant_n + 1) // 2
    return 2 * p * m - r, p * m - r


def _module(spec: ResolutionSpec, n: int) -> TermModule:
    P, r, s, v = spec.params, spec.r, spec.s, spec.variant
    M, theta = _index(n, P, r)
    a = P.a
    if v == "n2-parabolic":
        return TermModule("gen-verma-ns2", {"m": M}, theta, f"V({M})^{theta}")
    if v == "affine-parabolic":
        return TermModule("gen-verma-affine", {"m": M}, 0, f"V({M})")
    if v == "affine-verma":
        return TermModule("verma-affine", {"j": P.j(M, s)}, 0, f"M({M},{s})")
    if v == "n2-chiral":
        return TermModule("chiral-verma-ns2", {"j": 2 * a * P.j(M, s)}, theta,
                          f"M+({M},{s})^{theta}")
    jj = spec.j
    h = P.delta(P.j(M, s)) - a * jj * jj
    th = theta if spec.literal_twist else 0
    return TermModule("verma-ns2", {"h": h, "j": 2 * a * jj}, th, f"M({M},{s};j)^{th}")


def _term_indices(spec, n):
    if n == 0:
        return [0]
    if spec.variant in ("affine-parabolic", "n2-parabolic"):
        return [n]
    return [n, -n]


def bgg_complex(spec: ResolutionSpec, depth: int | None = None):
    """Terms 0..depth; term n lists its direct summands with their twists."""
    d = spec.depth if depth is None else depth
    if d is None:
        raise ValueError("depth not set; use verify_euler for automatic depth")
    return [ResolutionTerm(n, [_module(spec, i) for i in _term_indices(spec, n)])
            for n in range(d + 1)]


def lowest_l0(spec: ResolutionSpec, tm: TermModule) -> Fraction:
    """Exact lowest L0 (or a lower bound for quotients) of a twisted term."""
    P = spec.params
    if tm.kind == "gen-verma-ns2":
        m = tm.data["m"]
        jm = P.j(m, 0)
        return lowest_flowed_l0("chiral-verma-ns2", P, tm.theta, j=2 * P.a * jm)
    if tm.kind == "chiral-verma-ns2":
        return lowest_flowed_l0("chiral-verma-ns2", P, tm.theta, j=tm.data["j"])
    if tm.kind == "verma-ns2":
        return lowest_flowed_l0("verma-ns2", P, tm.theta, h=tm.data["h"], j=tm.data["j"])
    if tm.kind == "gen-verma-affine":
        return P.delta(Fraction(tm.data["m"] - 1, 2))
    return P.delta(tm.data["j"])


def _head_presentation(spec):
    return _module(spec, 0).presentation(spec.params)


def _window(spec, head, N):
    if spec.window is not None:
        return (Fraction(spec.window[0]), Fraction(spec.window[1]))
    if spec.variant in ("affine-parabolic", "affine-verma"):
        b = abs(head.q0) + 2 * N + 2
        return (-b, b)
    return None


def term_character(spec, tm: TermModule, max_l0, window) -> CharacterSeries:
    P = spec.params
    k = tm.kind
    if k == "gen-verma-ns2":
        ch = gen_verma_ns2_character(P, tm.data["m"], max_l0, theta=tm.theta)
    elif k in ("chiral-verma-ns2", "verma-ns2"):
        ch = closed_form_character(k, P, max_l0, theta=tm.theta, **tm.data)
    elif k == "verma-affine":
        ch = closed_form_character(k, P, max_l0, window=window, j=tm.data["j"])
    else:
        pres = tm.presentation(P)
        lv = Fraction(max_l0) - pres.h0
        if lv < 0:
            return CharacterSeries({}, Fraction(max_l0), window)
        ch = module_character(pres, lv, window=window)
    return CharacterSeries(dict(ch.entries), Fraction(max_l0), window)


def _table(ch: CharacterSeries, base):
    return [{"level": fmt_q(l - base), "charge": fmt_q(c), "dim": d}
            for (l, c), d in sorted(ch.entries.items())]


def verify_euler(spec: ResolutionSpec, max_level) -> dict:
    """Compare the alternating sum of term characters with the simple character."""
    N = Fraction(max_level)
    if N < 0:
        raise ValueError("truncation must be >= 0")
    P = spec.params
    head = _head_presentation(spec)
    base = head.h0
    max_l0 = base + N
    window = _window(spec, head, N)

    terms = []
    lows = []
    n = 0
    while True:
        mods = [_module(spec, i) for i in _term_indices(spec, n)]
        low = min(lowest_l0(spec, tm) for tm in mods) - base
        if n > 0 and low > N and spec.depth is None:
            break
        if spec.depth is not None and n > spec.depth:
            if low <= N:
                raise ValueError(f"depth {spec.depth} insufficient: term {n} starts at level {low}")
            break
        if n > MAX_DEPTH:
            raise RuntimeError("depth search did not terminate")
        terms.append(ResolutionTerm(n, mods))
        lows.append(low)
        n += 1

    euler = CharacterSeries({}, max_l0, window)
    for t in terms:
        for tm in t.modules:
            ch = term_character(spec, tm, max_l0, window)
            euler = euler + ch.scaled((-1) ** t.n)

    simple = simple_character(head, N, window=window, report=True)
    sc = simple.character
    keys = sorted(set(euler.entries) | set(sc.entries))
    mism = [{"level": fmt_q(l - base), "charge": fmt_q(c),
             "euler": euler.get(l, c), "simple": sc.get(l, c)}
            for (l, c) in keys if euler.get(l, c) != sc.get(l, c)]
    monotone = all(lows[i] < lows[i + 1] for i in range(len(lows) - 1))
    return {
        "variant": spec.variant,
        "p": P.p, "pp": P.pp, "r": spec.r, "s": spec.s,
        "j": None if spec.j is None else fmt_q(spec.j),
        "max_level": fmt_q(N),
        "window": None if window is None else [fmt_q(window[0]), fmt_q(window[1])],
        "terms": [{"n": t.n,
                   "modules": [{"label": tm.label, "kind": tm.kind, "theta": tm.theta}
                               for tm in t.modules],
                   "lowest_level": fmt_q(lows[i])}
                  for i, t in enumerate(terms)],
        "lowest_levels_increasing": monotone,
        "euler": _table(euler, base),
        "simple": _table(sc, base),
        "subsingular_flags": [{"level": fmt_q(l), "charge": fmt_q(c)}
                              for l, c, _, _ in simple.subsingular],
        "mismatches": mism,
        "match": not mism,
    }
