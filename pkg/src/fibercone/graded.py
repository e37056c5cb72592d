"""Degree-by-degree linear algebra for cofinite homogeneous ideals over F_p.

For a homogeneous ideal I the degree-D piece is spanned by the variables
times I_{D-1} together with the generators of degree D.  Keeping each
piece in reduced row echelon form (columns in descending degrevlex order)
gives, at once, the standard monomials (non-pivot columns), the reduced
Groebner basis (rows whose pivot is not a multiple of a lower pivot) and a
minimal generating set (generators that enlarge the span).  The walk stops
at the first degree where I_D is all of R_D; if that has not happened by
n(δ-1)+1, with δ the largest generator degree, I is not cofinite and the
caller falls back to Buchberger.
"""

from __future__ import annotations

import numpy as np

from .monomials import DEGREVLEX, monomials_of_degree

# p^2 times a row count must stay inside int64
MAX_PRIME = 1 << 20


class GradedPieces:
    """Echelon data of a cofinite ideal, one entry per degree up to the first full one."""

    def __init__(self, levels, mingens, full_degree):
        self.levels = levels  # degree -> (monomials, rref, pivot indices)
        self.mingens = mingens
        self.full_degree = full_degree

    def standard_monomials(self) -> list[list[tuple]]:
        out = []
        for D in range(self.full_degree):
            mons, _, piv = self.levels[D]
            pset = set(piv)
            out.append([m for j, m in enumerate(mons) if j not in pset])
        return out

    def reduced_gb_terms(self, nvars: int) -> list[dict]:
        """Term dicts of the reduced Groebner basis, descending by leading monomial."""
        out = []
        prev: set = set()
        for D in range(self.full_degree + 1):
            mons, rref, piv = self.levels[D]
            leads = set()
            for row, j in zip(rref, piv):
                m = mons[j]
                leads.add(m)
                if any(m[i] and m[:i] + (m[i] - 1,) + m[i + 1:] in prev for i in range(nvars)):
                    continue
                nz = np.nonzero(row)[0]
                out.append((m, {mons[k]: int(row[k]) for k in nz}))
            prev = leads
        out.sort(key=lambda t: DEGREVLEX.key(t[0]), reverse=True)
        return [t for _, t in out]


def _rref(M: np.ndarray, p: int):
    """Reduced row echelon form mod p; returns (rows, pivot columns)."""
    M = M % p
    rows, cols = M.shape
    r = 0
    piv = []
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c])
        if not len(nz):
            continue
        k = r + nz[0]
        if k != r:
            M[[r, k]] = M[[k, r]]
        inv = pow(int(M[r, c]), p - 2, p)
        M[r] = M[r] * inv % p
        col = M[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if len(hit):
            M[hit] = (M[hit] - np.outer(col[hit], M[r])) % p
        piv.append(c)
        r += 1
    return M[:r], piv


def _insert(R: np.ndarray, piv: list, v: np.ndarray, p: int):
    """Add v to the span of the RREF rows R; returns (R, piv, grew)."""
    if len(piv):
        v = (v - v[piv] @ R) % p
    nz = np.flatnonzero(v)
    if not len(nz):
        return R, piv, False
    c = int(nz[0])
    v = v * pow(int(v[c]), p - 2, p) % p
    if len(piv):
        R = (R - np.outer(R[:, c], v)) % p
    pos = int(np.searchsorted(piv, c))
    R = np.insert(R, pos, v, axis=0) if len(piv) else v[None, :]
    return R, piv[:pos] + [c] + piv[pos:], True


def graded_pieces(gens, relations, nvars: int, p: int) -> GradedPieces | None:
    """Walk the degrees of (gens + relations); None when the ideal is not cofinite."""
    if p >= MAX_PRIME or not p:
        return None
    allg = [(g, False) for g in relations] + [(g, True) for g in gens]
    if not allg:
        return None
    delta = max(g.degree() for g, _ in allg)
    bound = nvars * (delta - 1) + 1
    by_deg: dict = {}
    for g, own in allg:
        by_deg.setdefault(g.degree(), []).append((g, own))
    levels = {}
    mingens = []
    prev = None  # (monomials, rref) of degree D-1
    for D in range(0, bound + 1):
        mons = sorted(monomials_of_degree(nvars, D), key=DEGREVLEX.key, reverse=True)
        index = {m: j for j, m in enumerate(mons)}
        cols = len(mons)
        if prev is not None and len(prev[1]):
            pm, pr = prev
            blocks = []
            for i in range(nvars):
                target = [index[m[:i] + (m[i] + 1,) + m[i + 1:]] for m in pm]
                B = np.zeros((pr.shape[0], cols), dtype=np.int64)
                B[:, target] = pr
                blocks.append(B)
            R, piv = _rref(np.vstack(blocks), p)
        else:
            R, piv = np.zeros((0, cols), dtype=np.int64), []
        for g, own in by_deg.get(D, ()):
            v = np.zeros(cols, dtype=np.int64)
            for e, c in g.terms.items():
                v[index[e]] = c
            R, piv, grew = _insert(R, piv, v, p)
            if grew and own:
                mingens.append(g if D else g.ring.one())
        levels[D] = (mons, R, piv)
        if len(piv) == cols:
            return GradedPieces(levels, mingens, D)
        prev = (mons, R)
    return None
