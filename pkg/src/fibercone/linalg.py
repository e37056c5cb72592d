"""Exact sparse linear algebra over a Field.

Vectors are dicts ``{key: value}`` with comparable keys.  ``Echelon`` keeps
an incrementally built echelon form; each stored row carries an auxiliary
vector recording how it was combined from the inserted rows, which is what
turns elimination into a kernel computation.
"""

from __future__ import annotations

import heapq
from fractions import Fraction


def _axpy(dst: dict, a, src: dict, p):
    """dst -= a * src, in place."""
    for k, v in src.items():
        w = dst.get(k, 0) - a * v
        if p:
            w %= p
        if w:
            dst[k] = w
        else:
            dst.pop(k, None)


class Echelon:
    def __init__(self, field):
        self.field = field
        self.rows: dict = {}  # pivot key -> (row, aux), row[pivot] == 1

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: dict, aux: dict | None = None):
        vec = dict(vec)
        aux = dict(aux) if aux is not None else None
        p = self.field.p
        rows = self.rows
        heap = [k for k in vec if k in rows]
        heapq.heapify(heap)
        while heap:
            k = heapq.heappop(heap)
            c = vec.get(k)
            if not c:
                continue
            row, raux = rows[k]
            for kk in row:
                if kk != k and kk in rows and kk not in vec:
                    heapq.heappush(heap, kk)
            _axpy(vec, c, row, p)
            if aux is not None:
                _axpy(aux, c, raux, p)
        return vec, aux

    def add(self, vec: dict, aux: dict | None = None):
        """Insert a row; returns the reduced leftover (empty if dependent)."""
        vec, aux = self.reduce(vec, aux)
        if vec:
            piv = min(vec)
            inv = self.field.inv(vec[piv])
            p = self.field.p
            if p:
                vec = {k: v * inv % p for k, v in vec.items()}
                aux = {k: v * inv % p for k, v in aux.items()} if aux is not None else None
            else:
                vec = {k: v * inv for k, v in vec.items()}
                aux = {k: v * inv for k, v in aux.items()} if aux is not None else None
            self.rows[piv] = (vec, aux)
        return vec, aux

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)[0]


def kernel(columns: list[dict], field) -> list[dict]:
    """Basis of {c : sum_j c_j * columns[j] = 0}, as dicts ``{j: c_j}``."""
    ech = Echelon(field)
    out = []
    one = field.one
    for j, col in enumerate(columns):
        rest, aux = ech.add(col, {j: one})
        if not rest:
            out.append(aux)
    return out


def rank(vectors, field) -> int:
    ech = Echelon(field)
    for v in vectors:
        ech.add(v)
    return len(ech)


def solve_rational(a: list[list], b: list) -> list[Fraction]:
    """Solve the square system a x = b over QQ (Gauss-Jordan, exact)."""
    n = len(a)
    m = [[Fraction(v) for v in row] + [Fraction(bv)] for row, bv in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            raise ValueError("singular system")
        m[col], m[piv] = m[piv], m[col]
        pv = m[col][col]
        m[col] = [v / pv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [v - f * w for v, w in zip(m[r], m[col])]
    return [row[n] for row in m]
