"""Exact rational linear algebra on sparse rows.

Rows are dicts ``{column: Fraction}`` with integer columns.  Everything is
deterministic: pivots are the first nonzero column, rows are processed in the
order given.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction


@dataclass
class RationalMatrix:
    rows: int
    cols: int
    entries: dict = field(default_factory=dict)  # (i, j) -> Fraction, no zeros

    @classmethod
    def from_dense(cls, data):
        data = [list(r) for r in data]
        nr = len(data)
        nc = len(data[0]) if data else 0
        ent = {}
        for i, r in enumerate(data):
            if len(r) != nc:
                raise ValueError("ragged matrix")
            for j, x in enumerate(r):
                if x:
                    ent[(i, j)] = Fraction(x)
        return cls(nr, nc, ent)

    @classmethod
    def from_rows(cls, rows, cols):
        ent = {}
        for i, r in enumerate(rows):
            for j, x in r.items():
                if x:
                    ent[(i, j)] = Fraction(x)
        return cls(len(rows), cols, ent)

    def row_dicts(self):
        out = [dict() for _ in range(self.rows)]
        for (i, j), x in self.entries.items():
            out[i][j] = x
        return out

    def to_dense(self):
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), x in self.entries.items():
            out[i][j] = x
        return out

    def apply(self, v):
        out = [Fraction(0)] * self.rows
        for (i, j), x in self.entries.items():
            out[i] += x * v[j]
        return out


def _axpy(target, row, scale):
    for c, x in row.items():
        v = target.get(c, 0) - scale * x
        if v:
            target[c] = v
        else:
            target.pop(c, None)


class Echelon:
    """Incrementally maintained row-echelon basis of a subspace."""

    def __init__(self):
        self.pivots = {}  # pivot column -> normalized row

    def __len__(self):
        return len(self.pivots)

    def reduce(self, v):
        v = {c: Fraction(x) for c, x in v.items() if x}
        heap = list(v)
        heapq.heapify(heap)
        seen = set()
        while heap:
            c = heapq.heappop(heap)
            if c in seen:
                continue
            seen.add(c)
            x = v.get(c)
            if not x:
                continue
            row = self.pivots.get(c)
            if row is None:
                continue
            for cc in row:
                if cc not in v and cc not in seen:
                    heapq.heappush(heap, cc)
            _axpy(v, row, x)
        return v

    def add(self, v) -> bool:
        r = self.reduce(v)
        if not r:
            return False
        p = min(r)
        inv = 1 / r[p]
        self.pivots[p] = {c: x * inv for c, x in r.items()}
        return True

    def contains(self, v) -> bool:
        return not self.reduce(v)


def rref(m: RationalMatrix):
    """Returns (rank, pivot columns, reduced matrix)."""
    ech = Echelon()
    for r in m.row_dicts():
        ech.add(r)
    piv = sorted(ech.pivots)
    rows = [dict(ech.pivots[p]) for p in piv]
    # back substitution, last pivot first
    for idx in range(len(piv) - 1, -1, -1):
        p = piv[idx]
        for jdx in range(idx):
            x = rows[jdx].get(p)
            if x:
                _axpy(rows[jdx], rows[idx], x)
    red = RationalMatrix.from_rows(rows + [{}] * (m.rows - len(rows)), m.cols)
    return len(piv), piv, red


def nullspace(m: RationalMatrix):
    rank, piv, red = rref(m)
    rows = red.row_dicts()[:rank]
    pivset = set(piv)
    basis = []
    for free in range(m.cols):
        if free in pivset:
            continue
        v = [Fraction(0)] * m.cols
        v[free] = Fraction(1)
        for p, r in zip(piv, rows):
            x = r.get(free)
            if x:
                v[p] = -x
        basis.append(normalize_first(v))
    return basis


def normalize_first(v):
    for x in v:
        if x:
            return [y / x for y in v]
    return list(v)


def membership(span, v):
    """Coordinates c with sum c_i span_i = v, or None."""
    v = [Fraction(x) for x in v]
    n = len(v)
    if any(len(s) != n for s in span):
        raise ValueError("length mismatch")
    k = len(span)
    # solve the n x k system augmented with v
    rows = []
    for i in range(n):
        r = {j: Fraction(span[j][i]) for j in range(k) if span[j][i]}
        if v[i]:
            r[k] = v[i]
        rows.append(r)
    rank, piv, red = rref(RationalMatrix.from_rows(rows, k + 1))
    if k in piv:
        return None
    coords = [Fraction(0)] * k
    for p, r in zip(piv, red.row_dicts()):
        coords[p] = r.get(k, Fraction(0))
    return coords
