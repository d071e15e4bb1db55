"""Normal ordering in universal enveloping superalgebras.

Elements are sparse dicts ``{monomial: Fraction}``; a monomial is a
non-decreasing tuple of generator modes (odd generators never repeat).
"""

from __future__ import annotations

from fractions import Fraction

from .superalg import AlgebraSpec, _add

DEGREE_CAP = 64


class DegreeCapExceeded(ValueError):
    pass


class Pbw:
    """Rewriting engine bound to one algebra; caches left insertions."""

    def __init__(self, spec: AlgebraSpec, degree_cap: int = DEGREE_CAP):
        self.spec = spec
        self.degree_cap = degree_cap
        self._ins = {}

    def insert_left(self, g, mono) -> dict:
        """Normal form of ``g * mono`` for a normal-ordered monomial."""
        key = (g, mono)
        hit = self._ins.get(key)
        if hit is not None:
            return hit
        if len(mono) + 1 > self.degree_cap:
            raise DegreeCapExceeded(f"degree cap {self.degree_cap} exceeded")
        spec = self.spec
        out = {}
        if not mono or g < mono[0]:
            out[(g,) + mono] = Fraction(1)
        elif g == mono[0]:
            if spec.is_odd(g):
                # g g = 1/2 [g, g]
                for bm, bc in spec.bracket(g, g).items():
                    for k, v in self._lin_left(bm, mono[1:]).items():
                        _add(out, k, bc * v / 2)
            else:
                out[(g,) + mono] = Fraction(1)
        else:
            y, rest = mono[0], mono[1:]
            sign = -1 if spec.is_odd(g) and spec.is_odd(y) else 1
            for k, v in self.insert_left(g, rest).items():
                for k2, v2 in self.insert_left(y, k).items():
                    _add(out, k2, sign * v * v2)
            for bm, bc in spec.bracket(g, y).items():
                for k, v in self._lin_left(bm, rest).items():
                    _add(out, k, bc * v)
        self._ins[key] = out
        return out

    def _lin_left(self, bm, mono):
        if not bm:
            return {mono: Fraction(1)}
        (h,) = bm
        return self.insert_left(h, mono)

    def mono_times(self, a, b) -> dict:
        """Normal form of monomial a times monomial b."""
        cur = {b: Fraction(1)}
        for g in reversed(a):
            nxt = {}
            for k, v in cur.items():
                for k2, v2 in self.insert_left(g, k).items():
                    _add(nxt, k2, v * v2)
            cur = nxt
        return cur

    def multiply(self, e1: dict, e2: dict) -> dict:
        out = {}
        for a, ca in e1.items():
            for b, cb in e2.items():
                for k, v in self.mono_times(a, b).items():
                    _add(out, k, ca * cb * v)
        return out

    def normal_order(self, expr) -> dict:
        """Normal form of a combination of words.

        ``expr`` is either a dict ``{word: coeff}`` or a list of
        ``(coeff, word)`` pairs; words are arbitrary tuples of generators.
        """
        items = expr.items() if isinstance(expr, dict) else [(w, c) for c, w in expr]
        out = {}
        for word, cf in items:
            for g in word:
                self.spec.validate(g)
            cur = {(): Fraction(cf)}
            for g in reversed(tuple(word)):
                nxt = {}
                for k, v in cur.items():
                    for k2, v2 in self.insert_left(g, k).items():
                        _add(nxt, k2, v * v2)
                cur = nxt
            for k, v in cur.items():
                _add(out, k, v)
        return out

    # -- gradings --------------------------------------------------------

    def parity(self, mono) -> int:
        return sum(1 for g in mono if self.spec.is_odd(g)) % 2

    def weight(self, mono):
        """(-sum of modes, sum of charges): the (level, charge) shift."""
        return (Fraction(-sum(g[0] for g in mono), 2),
                sum(self.spec.charge(g) for g in mono))


def super_commutator_defect(eng: Pbw, x, y) -> tuple:
    """Returns (x y - (-1)^{|x||y|} y x, [x, y]) as normal forms."""
    s = -1 if eng.spec.is_odd(x) and eng.spec.is_odd(y) else 1
    lhs = eng.normal_order([(1, (x, y)), (-s, (y, x))])
    rhs = {(k if k else ()): v for k, v in eng.spec.bracket(x, y).items()}
    return lhs, rhs


def format_element(spec, elem: dict) -> dict:
    """JSON-friendly view: monomial label -> "num/den"."""
    from .superalg import fmt_q
    out = {}
    for mono in sorted(elem):
        label = " ".join(spec.label(g) for g in mono) or "1"
        out[label] = fmt_q(elem[mono])
    return out


def parse_expr(spec, text: str) -> list:
    """Parse an s-expression like ``(+ (* 2 G+[1/2] G-[-1/2]) (* -1 L[0]))``.

    Returns a list of (coeff, word) pairs.
    """
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0

    def parse():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            head = tokens[pos]
            pos += 1
            args = []
            while tokens[pos] != ")":
                args.append(parse())
            pos += 1
            return (head, args)
        return tok

    def to_terms(node):
        if isinstance(node, str):
            try:
                return [(Fraction(node), ())]
            except ValueError:
                return [(Fraction(1), (_gen(node),))]
        head, args = node
        if head == "+":
            return [t for a in args for t in to_terms(a)]
        if head == "*":
            terms = [(Fraction(1), ())]
            for a in args:
                new = []
                for c1, w1 in terms:
                    for c2, w2 in to_terms(a):
                        new.append((c1 * c2, w1 + w2))
                terms = new
            return terms
        raise ValueError(f"unknown operator {head!r}")

    def _gen(tok):
        if "[" not in tok or not tok.endswith("]"):
            raise ValueError(f"bad generator token {tok!r}")
        name, mode = tok[:-1].split("[", 1)
        return spec.gen(name, Fraction(mode))

    node = parse()
    if pos != len(tokens):
        raise ValueError("trailing tokens in expression")
    return to_terms(node)
