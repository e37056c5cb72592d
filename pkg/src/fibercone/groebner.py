"""Multivariate division and Buchberger's algorithm.

Reduction works on plain ``{exp: coeff}`` dicts with a heap of pending
monomials, so each step touches only the terms it changes.  Pair handling
follows the Gebauer-Moeller update (coprime-lead and chain criteria); the
queue is ordered by the normal strategy (lcm degree, then the monomial
order), or by sugar degree on request.
"""

from __future__ import annotations

import heapq
import logging
from itertools import count
from operator import add, le

from .errors import ResourceCapError
from .monomials import DEGREVLEX, MonomialOrder, mono_lcm
from .polynomial import Polynomial, PolyRing

log = logging.getLogger(__name__)

DEFAULT_PAIR_CAP = 200_000


def _neg_key_fn(order: MonomialOrder):
    key = order.key
    if order.kind == "degrevlex":
        return lambda e: (-sum(e),) + e[::-1]
    return lambda e: tuple(-x for x in key(e))


def _find_divisor(e, leads):
    for i, lead in enumerate(leads):
        if all(map(le, lead, e)):
            return i
    return -1


def _reduce(f: dict, leads, tails, negkey, p, full=True) -> dict:
    """Remainder of ``f`` modulo monic elements given as (lead, tail) lists.

    The largest remaining term is always treated first and is divided by
    the earliest-listed element whose lead divides it.  With ``full=False``
    only the leading terms are reduced.
    """
    f = dict(f)
    heap = [(negkey(e), e) for e in f]
    heapq.heapify(heap)
    rem = {}
    pop, push = heapq.heappop, heapq.heappush
    while heap:
        e = pop(heap)[1]
        c = f.pop(e, None)
        if c is None:
            continue
        i = _find_divisor(e, leads)
        if i < 0:
            rem[e] = c
            if not full:
                rem.update(f)
                return rem
            continue
        q = tuple(a - b for a, b in zip(e, leads[i]))
        for ge, gc in tails[i]:
            ne = tuple(map(add, ge, q))
            v = f.get(ne)
            if v is None:
                v = -c * gc
                if p:
                    v %= p
                f[ne] = v
                push(heap, (negkey(ne), ne))
            else:
                v -= c * gc
                if p:
                    v %= p
                if v:
                    f[ne] = v
                else:
                    del f[ne]
    return rem


def _monic_parts(terms: dict, order: MonomialOrder, field):
    """(lead, tail) of the monic multiple of a nonzero term dict."""
    key = order.key
    lead = max(terms, key=key)
    inv = field.inv(terms[lead])
    p = field.p
    tail = []
    for e, c in terms.items():
        if e != lead:
            v = c * inv
            tail.append((e, v % p if p else v))
    tail.sort(key=lambda t: key(t[0]), reverse=True)
    return lead, tail


def _as_dict(lead, tail, one):
    d = {lead: one}
    d.update(tail)
    return d


class GroebnerBasis:
    """A Groebner basis of the ideal generated by ``polys`` w.r.t. ``order``.

    When ``reduced`` is set the elements are monic, interreduced and sorted
    by leading monomial (descending), which makes the basis canonical.
    """

    def __init__(self, ring: PolyRing, order: MonomialOrder, polys, reduced: bool = False):
        self.ring = ring
        self.order = order
        self.polys = tuple(polys)
        self.reduced = reduced
        field = ring.field
        parts = [_monic_parts(g.terms, order, field) for g in self.polys]
        self._leads = [lt for lt, _ in parts]
        self._tails = [tl for _, tl in parts]
        self._negkey = _neg_key_fn(order)
        self._nf_cache: dict = {}

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def __eq__(self, other):
        return (
            isinstance(other, GroebnerBasis)
            and self.ring == other.ring
            and self.order == other.order
            and self.polys == other.polys
        )

    def __hash__(self):
        return hash(self.polys)

    def __repr__(self):
        return f"GroebnerBasis([{', '.join(str(g) for g in self.polys)}], {self.order})"

    @property
    def leading_monomials(self) -> list[tuple]:
        return list(self._leads)

    def is_unit(self) -> bool:
        return any(not any(e) for e in self._leads)

    def reduce_terms(self, terms: dict, full: bool = True) -> dict:
        return _reduce(terms, self._leads, self._tails, self._negkey, self.ring.field.p, full)

    def normal_form(self, f: Polynomial) -> Polynomial:
        return Polynomial(self.ring, self.reduce_terms(f.terms), _clean=True)

    def contains(self, f: Polynomial) -> bool:
        return not self.reduce_terms(f.terms)

    def nf_monomial(self, e: tuple) -> dict:
        """Normal form of the monomial ``e`` as a term dict (memoised)."""
        cache = self._nf_cache
        r = cache.get(e)
        if r is None:
            r = self.reduce_terms({e: self.ring.field.one})
            cache[e] = r
        return r


def normal_form(f: Polynomial, basis, order: MonomialOrder = DEGREVLEX) -> Polynomial:
    """Remainder of ``f`` on division by ``basis`` (any list of polynomials)."""
    basis = [g for g in basis if g]
    for g in basis:
        f._check(g)
    parts = [_monic_parts(g.terms, order, f.ring.field) for g in basis]
    rem = _reduce(
        f.terms, [lt for lt, _ in parts], [tl for _, tl in parts], _neg_key_fn(order), f.ring.field.p
    )
    return Polynomial(f.ring, rem, _clean=True)


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder = DEGREVLEX) -> Polynomial:
    """(L/LT(f))*f - (L/LT(g))*g for L the lcm of the leading monomials.

    Leading terms are normalised to coefficient 1 before the combination,
    so the result does not depend on scalar multiples of the inputs.
    """
    if not f or not g:
        raise ValueError("S-polynomial of a zero polynomial")
    f._check(g)
    field = f.ring.field
    lf, tf = _monic_parts(f.terms, order, field)
    lg, tg = _monic_parts(g.terms, order, field)
    return Polynomial(f.ring, _spoly_terms(lf, tf, lg, tg, field.p), _clean=True)


def _spoly_terms(lf, tf, lg, tg, p) -> dict:
    lcm = mono_lcm(lf, lg)
    qf = tuple(a - b for a, b in zip(lcm, lf))
    qg = tuple(a - b for a, b in zip(lcm, lg))
    out = {}
    for e, c in tf:
        out[tuple(map(add, e, qf))] = c
    for e, c in tg:
        ne = tuple(map(add, e, qg))
        v = out.get(ne, 0) - c
        if p:
            v %= p
        if v:
            out[ne] = v
        else:
            out.pop(ne, None)
    return out


class _Elem:
    __slots__ = ("lead", "tail", "sugar", "alive")

    def __init__(self, lead, tail, sugar):
        self.lead = lead
        self.tail = tail
        self.sugar = sugar
        self.alive = True


def buchberger(
    gens,
    order: MonomialOrder = DEGREVLEX,
    strategy: str = "normal",
    max_pairs: int = DEFAULT_PAIR_CAP,
    ring: PolyRing | None = None,
) -> GroebnerBasis:
    """Groebner basis (not yet interreduced) of the ideal generated by ``gens``.

    Zero generators are dropped; an all-zero input gives the empty basis.
    Raises :class:`ResourceCapError` after ``max_pairs`` pair reductions.
    """
    gens = list(gens)
    if ring is None:
        if not gens:
            raise ValueError("need a ring for an empty generator list")
        ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise ValueError(f"ring mismatch: {g.ring} vs {ring}")
    if strategy not in ("normal", "sugar"):
        raise ValueError(f"unknown selection strategy {strategy!r}")
    field = ring.field
    p = field.p
    key = order.key
    negkey = _neg_key_fn(order)
    use_sugar = strategy == "sugar"

    elems: list[_Elem] = []
    red_leads: list = []
    red_tails: list = []
    red_index: list[int] = []
    pairs: dict = {}
    queue: list = []
    tick = count()

    def rank(sug, lcm):
        return (sug if use_sugar else sum(lcm), key(lcm))

    for g in gens:
        if g:
            lead = max(g.terms, key=key)
            heapq.heappush(queue, (rank(g.degree(), lead), next(tick), -1, -1, g.terms, g.degree()))

    def insert(terms: dict, sugar: int):
        lead, tail = _monic_parts(terms, order, field)
        h = len(elems)
        hel = _Elem(lead, tail, sugar)
        # Gebauer-Moeller update
        cands = []
        for j, el in enumerate(elems):
            if el.alive:
                cands.append((j, mono_lcm(lead, el.lead)))
        kept = []
        for idx, (j, lcm) in enumerate(cands):
            coprime = not any(a and b for a, b in zip(lead, elems[j].lead))
            if coprime:
                kept.append((j, lcm, True))
                continue
            dominated = False
            for j2, lcm2 in cands[idx + 1:]:
                if all(map(le, lcm2, lcm)):
                    dominated = True
                    break
            if not dominated:
                for j2, lcm2, _ in kept:
                    if all(map(le, lcm2, lcm)):
                        dominated = True
                        break
            if not dominated:
                kept.append((j, lcm, False))
        for (i, j), lcm in list(pairs.items()):
            if all(map(le, lead, lcm)):
                l1 = mono_lcm(elems[i].lead, lead)
                l2 = mono_lcm(lead, elems[j].lead)
                if l1 != lcm and l2 != lcm:
                    del pairs[(i, j)]
        for j, lcm, coprime in kept:
            if coprime:
                continue
            ej = elems[j]
            sug = max(sugar + sum(lcm) - sum(lead), ej.sugar + sum(lcm) - sum(ej.lead))
            pairs[(j, h)] = lcm
            heapq.heappush(queue, (rank(sug, lcm), next(tick), j, h, None, sug))
        changed = False
        for el in elems:
            if el.alive and all(map(le, lead, el.lead)):
                el.alive = False
                changed = True
        elems.append(hel)
        if changed:
            red_leads.clear()
            red_tails.clear()
            red_index.clear()
            for k, el in enumerate(elems):
                if el.alive:
                    red_leads.append(el.lead)
                    red_tails.append(el.tail)
                    red_index.append(k)
        else:
            red_leads.append(lead)
            red_tails.append(tail)
            red_index.append(h)

    done = 0
    while queue:
        _, _, i, j, terms, sug = heapq.heappop(queue)
        if i >= 0:
            if pairs.pop((i, j), None) is None:
                continue
            done += 1
            if done > max_pairs:
                raise ResourceCapError(f"Groebner basis exceeded {max_pairs} pair reductions")
            ei, ej = elems[i], elems[j]
            terms = _spoly_terms(ei.lead, ei.tail, ej.lead, ej.tail, p)
        if not terms:
            continue
        rem = _reduce(terms, red_leads, red_tails, negkey, p)
        if rem:
            insert(rem, sug)
    log.debug("buchberger: %d generators, %d pairs reduced, %d elements", len(gens), done, len(elems))
    one = field.one
    basis = [Polynomial(ring, _as_dict(el.lead, el.tail, one), _clean=True) for el in elems if el.alive]
    return GroebnerBasis(ring, order, basis, reduced=False)


def reduce_basis(gb: GroebnerBasis) -> GroebnerBasis:
    """The unique reduced Groebner basis of the same ideal; idempotent."""
    if gb.reduced:
        return gb
    order, ring = gb.order, gb.ring
    field = ring.field
    key = order.key
    parts = [_monic_parts(g.terms, order, field) for g in gb.polys if g]
    parts.sort(key=lambda t: key(t[0]))
    minimal = []
    for lead, tail in parts:
        if not any(all(map(le, m[0], lead)) for m in minimal):
            minimal.append((lead, tail))
    negkey = _neg_key_fn(order)
    out = []
    one = field.one
    for idx, (lead, tail) in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        rem = _reduce(dict(tail), [o[0] for o in others], [o[1] for o in others], negkey, field.p)
        rem[lead] = one
        out.append(Polynomial(ring, rem, _clean=True))
    out.sort(key=lambda g: key(max(g.terms, key=key)), reverse=True)
    return GroebnerBasis(ring, order, out, reduced=True)


def groebner(gens, order: MonomialOrder = DEGREVLEX, ring: PolyRing | None = None, **kw) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``."""
    return reduce_basis(buchberger(gens, order, ring=ring, **kw))


def divide_exact(f: Polynomial, g: Polynomial, order: MonomialOrder = DEGREVLEX) -> Polynomial:
    """``f / g`` when ``g`` divides ``f``; raises ValueError otherwise."""
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    field = f.ring.field
    key = order.key
    lg = max(g.terms, key=key)
    inv = field.inv(g.terms[lg])
    q = f.ring.zero()
    r = f
    while r:
        lr = max(r.terms, key=key)
        if not all(map(le, lg, lr)):
            raise ValueError("polynomial division is not exact")
        mono = tuple(a - b for a, b in zip(lr, lg))
        c = r.terms[lr] * inv
        t = f.ring.monomial(mono, c)
        q = q + t
        r = r - g * t
    return q
