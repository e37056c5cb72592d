"""Homogeneous ideals in k[x_1..x_n]/(relations).

Every ideal is handled through its preimage in the ambient polynomial ring:
the relations are adjoined before any Groebner basis is computed, so
membership, equality, lengths and colons are all ambient computations.

Colon and intersection have two routes.  When one side is cofinite
(zero-dimensional) the work is finite linear algebra on standard monomials,
one degree at a time.  Otherwise the classical auxiliary-variable
elimination is used.  Both routes are exposed through ``method=`` so they
can be checked against each other.
"""

from __future__ import annotations

from itertools import combinations

from .errors import HypothesisError
from .field import DEFAULT_PRIME, Field, PrimeField
from .graded import GradedPieces, graded_pieces
from .groebner import DEFAULT_PAIR_CAP, GroebnerBasis, divide_exact, groebner
from .linalg import Echelon, kernel
from .monomials import DEGREVLEX, MonomialOrder, monomials_of_degree
from .polynomial import Polynomial, PolyRing


def _lead_dimension(leads, nvars: int) -> int:
    """Largest |S| with no leading monomial supported inside S."""
    supports = [frozenset(i for i, a in enumerate(e) if a) for e in leads]
    if any(not s for s in supports):
        raise HypothesisError("krull dimension of the unit ideal is undefined")
    for size in range(nvars, -1, -1):
        for subset in combinations(range(nvars), size):
            s = frozenset(subset)
            if not any(sup <= s for sup in supports):
                return size
    return 0


class RingContext:
    """R = k[names] / (relations) with the relations a homogeneous regular sequence."""

    def __init__(self, names, field: Field | None = None, relations=(), pair_cap: int = DEFAULT_PAIR_CAP):
        self.ring = PolyRing(names, field if field is not None else PrimeField(DEFAULT_PRIME))
        self.pair_cap = pair_cap
        rels = []
        for r in relations:
            if isinstance(r, str):
                r = self.ring(r)
            if r.ring != self.ring:
                raise ValueError("relation lives in a different ring")
            if not r:
                continue
            if not r.is_homogeneous():
                raise HypothesisError(f"relation {r} is not homogeneous")
            if r.degree() < 1:
                raise HypothesisError("relations must have positive degree")
            rels.append(r)
        self.relations = tuple(rels)
        self._rel_gb = groebner(self.relations, ring=self.ring, max_pairs=pair_cap)
        dim = _lead_dimension(self._rel_gb.leading_monomials, self.ring.nvars) if rels else self.ring.nvars
        if dim != self.ring.nvars - len(rels):
            raise HypothesisError(
                f"relations do not form a regular sequence (dimension {dim}, expected {self.ring.nvars - len(rels)})"
            )
        if dim <= 0:
            raise HypothesisError("ring must have positive Krull dimension")
        self.dim = dim

    @property
    def field(self) -> Field:
        return self.ring.field

    @property
    def names(self):
        return self.ring.names

    @property
    def nvars(self) -> int:
        return self.ring.nvars

    def __eq__(self, other):
        return isinstance(other, RingContext) and self.ring == other.ring and self._rel_gb == other._rel_gb

    def __hash__(self):
        return hash((self.ring, self._rel_gb))

    def __repr__(self):
        rel = f"/({', '.join(map(str, self.relations))})" if self.relations else ""
        return f"{self.ring}{rel}"

    def poly(self, text) -> Polynomial:
        return text if isinstance(text, Polynomial) else self.ring(text)

    def ideal(self, *gens) -> Ideal:
        if len(gens) == 1 and isinstance(gens[0], (list, tuple)):
            gens = gens[0]
        return Ideal(self, [self.poly(g) for g in gens])

    def maximal_ideal(self) -> Ideal:
        return Ideal(self, self.ring.gens(), cofinite=True)

    def unit_ideal(self) -> Ideal:
        return Ideal(self, [self.ring.one()], cofinite=True)

    def adjoin_relation(self, f: Polynomial) -> RingContext:
        return RingContext(self.names, self.field, self.relations + (f,), self.pair_cap)


class Ideal:
    """An ideal generated by homogeneous polynomials; immutable.

    Equality compares reduced Groebner bases (relations adjoined), so two
    presentations of the same ideal are equal and hash alike.
    """

    def __init__(self, ctx: RingContext, gens, cofinite: bool = False):
        self.ctx = ctx
        # hint: R/self is known to have finite length, so the graded route applies
        self.cofinite_hint = cofinite
        clean = []
        for g in gens:
            if g.ring != ctx.ring:
                raise ValueError(f"generator {g} lives in {g.ring}, expected {ctx.ring}")
            if not g:
                continue
            if not g.is_homogeneous():
                raise HypothesisError(f"generator {g} is not homogeneous")
            clean.append(g)
        self.gens = tuple(clean)
        self._gb: dict = {}
        self._std = None
        self._mingens = None
        self._graded = None

    # Groebner data

    def _graded_route(self) -> GradedPieces | None:
        if self._graded is None:
            ctx = self.ctx
            pieces = None
            if self.cofinite_hint:
                pieces = graded_pieces(self.gens, ctx.relations, ctx.nvars, ctx.field.p)
            self._graded = pieces if pieces is not None else False
        return self._graded or None

    def gb(self, order: MonomialOrder = DEGREVLEX) -> GroebnerBasis:
        gb = self._gb.get(order)
        if gb is None:
            ring = self.ctx.ring
            pieces = self._graded_route() if order == DEGREVLEX else None
            if pieces is not None:
                polys = [Polynomial(ring, t, _clean=True) for t in pieces.reduced_gb_terms(ring.nvars)]
                gb = GroebnerBasis(ring, order, polys, reduced=True)
            else:
                gb = groebner(self.gens + self.ctx.relations, order, ring=ring, max_pairs=self.ctx.pair_cap)
            self._gb[order] = gb
        return gb

    def known_cofinite(self) -> bool:
        """True when finiteness of R/self is already established without new work."""
        if self._graded_route() is not None:
            return True
        gb = self._gb.get(DEGREVLEX)
        return gb is not None and self.is_zero_dimensional()

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.ctx == other.ctx and self.gb() == other.gb()

    def __hash__(self):
        return hash(self.gb())

    def __repr__(self):
        return f"Ideal({', '.join(str(g) for g in self.gens)})"

    def is_unit(self) -> bool:
        return self.gb().is_unit()

    def is_zero(self) -> bool:
        return all(self.ctx._rel_gb.contains(g) for g in self.gens)

    def contains(self, f) -> bool:
        f = self.ctx.poly(f)
        return self.gb().contains(f)

    def __contains__(self, f):
        return self.contains(f)

    def __le__(self, other: Ideal) -> bool:
        """Containment self ⊆ other."""
        _same_ctx(self, other)
        gb = other.gb()
        return all(gb.contains(g) for g in self.gens)

    def __ge__(self, other: Ideal) -> bool:
        return other <= self

    # dimension and length

    def krull_dimension(self) -> int:
        return _lead_dimension(self.gb().leading_monomials, self.ctx.nvars)

    def is_zero_dimensional(self) -> bool:
        if self._graded_route() is not None:
            return True
        gb = self.gb()
        if gb.is_unit():
            return True
        pure = set()
        for e in gb.leading_monomials:
            sup = [i for i, a in enumerate(e) if a]
            if len(sup) == 1:
                pure.add(sup[0])
        return len(pure) == self.ctx.nvars

    def standard_monomials(self) -> list[list[tuple]]:
        """Monomials outside the leading-term ideal, grouped by degree."""
        if self._std is None and self._graded_route() is not None:
            self._std = self._graded_route().standard_monomials()
        if self._std is None:
            if not self.is_zero_dimensional():
                raise HypothesisError(f"{self} is not zero-dimensional (not m-primary)")
            gb = self.gb()
            leads = gb.leading_monomials
            n = self.ctx.nvars
            levels = []
            if not gb.is_unit():
                # e standard and l | e + e_i force l_i == e_i + 1, so index leads by (i, l_i)
                by_pos: dict = {}
                for l in leads:
                    for i, a in enumerate(l):
                        if a:
                            by_pos.setdefault((i, a), []).append(l)
                cur = [(0,) * n]
                while cur:
                    levels.append(cur)
                    nxt = set()
                    for e in cur:
                        for i in range(n):
                            f = e[:i] + (e[i] + 1,) + e[i + 1:]
                            if f in nxt:
                                continue
                            cands = by_pos.get((i, f[i]), ())
                            if not any(all(a <= b for a, b in zip(l, f)) for l in cands):
                                nxt.add(f)
                    cur = sorted(nxt, key=DEGREVLEX.key, reverse=True)
            self._std = levels
        return self._std

    def colength(self) -> int:
        """λ(R/self) for cofinite ideals."""
        return sum(len(level) for level in self.standard_monomials())

    def socle_degree_bound(self) -> int:
        """First degree in which the quotient vanishes."""
        return len(self.standard_monomials())

    # generators

    def minimal_generators(self) -> list[Polynomial]:
        """A minimal homogeneous generating set (relations taken into account)."""
        if self._mingens is None and self._graded_route() is not None:
            self._mingens = list(self._graded_route().mingens)
        if self._mingens is None:
            ctx = self.ctx
            gens = sorted(self.gens, key=lambda g: g.degree())
            kept: list[Polynomial] = []
            i = 0
            while i < len(gens):
                d = gens[i].degree()
                same = [g for g in gens[i:] if g.degree() == d]
                i += len(same)
                if d == 0:
                    kept = [ctx.ring.one()]
                    break
                lower = groebner(kept + list(ctx.relations), ring=ctx.ring, max_pairs=ctx.pair_cap)
                ech = Echelon(ctx.field)
                for g in same:
                    r = lower.reduce_terms(g.terms)
                    if r and ech.add(_dkey(r))[0]:
                        kept.append(g)
            self._mingens = kept
        return list(self._mingens)

    def num_generators(self) -> int:
        """μ(self)."""
        return len(self.minimal_generators())

    # arithmetic

    def __add__(self, other: Ideal) -> Ideal:
        _same_ctx(self, other)
        return Ideal(self.ctx, self.gens + other.gens, self.known_cofinite() or other.known_cofinite())

    def __mul__(self, other: Ideal) -> Ideal:
        _same_ctx(self, other)
        a, b = self.minimal_generators(), other.minimal_generators()
        return Ideal(self.ctx, [f * g for f in a for g in b], self.known_cofinite() and other.known_cofinite())

    def __pow__(self, n: int) -> Ideal:
        if n < 0:
            raise ValueError("negative ideal power")
        result = self.ctx.unit_ideal()
        for _ in range(n):
            result = result * self
        return result

    def scale_by(self, f: Polynomial) -> Ideal:
        return Ideal(self.ctx, [f * g for g in self.gens])


def _same_ctx(a: Ideal, b: Ideal):
    if a.ctx != b.ctx:
        raise ValueError("ideals live in different rings")


def _dkey(terms: dict) -> dict:
    # Echelon pivots on the smallest key; negate so pivots follow the order
    return {tuple(-x for x in DEGREVLEX.key(e)): c for e, c in terms.items()}


# ---------------------------------------------------------------- public ops


def ideal_sum(a: Ideal, b: Ideal) -> Ideal:
    return a + b


def product(a: Ideal, b: Ideal) -> Ideal:
    return a * b


def power(a: Ideal, n: int) -> Ideal:
    return a ** n


def contains(a: Ideal, f: Polynomial) -> bool:
    return a.contains(f)


def ideal_leq(a: Ideal, b: Ideal) -> bool:
    return a <= b


def ideal_eq(a: Ideal, b: Ideal) -> bool:
    return a == b


def krull_dimension(a: Ideal) -> int:
    return a.krull_dimension()


def is_zero_dimensional(a: Ideal) -> bool:
    return a.is_zero_dimensional()


def colength(a: Ideal) -> int:
    return a.colength()


def quotient_length(a: Ideal, b: Ideal) -> int:
    """λ(a/b) for cofinite b ⊆ a."""
    if not b <= a:
        raise HypothesisError("quotient_length needs the second ideal inside the first")
    return b.colength() - a.colength()


def min_generators(a: Ideal) -> int:
    if any(g.degree() == 0 for g in a.gens) or a.is_unit():
        raise HypothesisError("μ is only defined here for ideals inside the maximal ideal")
    return a.num_generators()


def intersect(a: Ideal, b: Ideal, method: str = "auto") -> Ideal:
    """a ∩ b.  ``method`` is ``auto``, ``linear`` (needs a cofinite side) or ``elimination``."""
    _same_ctx(a, b)
    if method == "auto":
        method = "linear" if (a.is_zero_dimensional() or b.is_zero_dimensional()) else "elimination"
    if method == "linear":
        if not a.is_zero_dimensional():
            a, b = b, a
        return _intersect_linear(a, b)
    if method == "elimination":
        return _intersect_elim(a, b)
    raise ValueError(f"unknown method {method!r}")


def colon(a: Ideal, b: Ideal, method: str = "auto") -> Ideal:
    """a : b."""
    _same_ctx(a, b)
    if b.is_zero():
        raise HypothesisError("colon by the zero ideal")
    if method == "auto":
        method = "linear" if a.is_zero_dimensional() else "elimination"
    if method == "linear":
        return _colon_linear(a, [g for g in b.gens])
    if method == "elimination":
        result = None
        for g in b.gens:
            q = _colon_elim(a, g)
            result = q if result is None else _intersect_elim(result, q)
        return result
    raise ValueError(f"unknown method {method!r}")


def colon_dimension_drop(a: Ideal, b: Ideal) -> int:
    """λ((a:b)/a) for cofinite a, straight from the kernel computation."""
    return sum(len(k) for _, k in _colon_kernels(a, list(b.gens)))


# ---------------------------------------------------------- linear routes


def _colon_kernels(a: Ideal, bgens):
    std = a.standard_monomials()
    gb = a.gb()
    top = len(std)
    field = a.ctx.field
    p = field.p
    out = []
    for d, sd in enumerate(std):
        columns = []
        for s in sd:
            col: dict = {}
            for gi, g in enumerate(bgens):
                if d + g.degree() >= top:
                    continue
                for m, c in g.terms.items():
                    nf = gb.nf_monomial(tuple(x + y for x, y in zip(s, m)))
                    for t, v in nf.items():
                        k = (gi, t)
                        w = col.get(k, 0) + c * v
                        if p:
                            w %= p
                        if w:
                            col[k] = w
                        else:
                            col.pop(k, None)
            columns.append(col)
        ker = kernel(columns, field)
        if ker:
            out.append((sd, ker))
    return out


def _colon_linear(a: Ideal, bgens) -> Ideal:
    ring = a.ctx.ring
    new = []
    for sd, ker in _colon_kernels(a, bgens):
        for vec in ker:
            new.append(Polynomial(ring, {sd[j]: c for j, c in vec.items()}))
    if not new:
        return a
    return Ideal(a.ctx, list(a.gb().polys) + new, cofinite=True)


def _intersect_linear(a: Ideal, b: Ideal) -> Ideal:
    """a cofinite; degree pieces of a ∩ b are kernels of the stacked normal forms."""
    ctx = a.ctx
    ring = ctx.ring
    field = ctx.field
    ga, gbb = a.gb(), b.gb()
    top = a.socle_degree_bound()
    n = ctx.nvars
    gens: list[Polynomial] = []
    prev: list[Polynomial] = []
    for d in range(top + 1):
        monos = monomials_of_degree(n, d)
        columns = []
        for m in monos:
            col = {}
            if d < top:
                for t, v in ga.nf_monomial(m).items():
                    col[(0, t)] = v
            for t, v in gbb.nf_monomial(m).items():
                col[(1, t)] = v
            columns.append(col)
        piece = [Polynomial(ring, {monos[j]: c for j, c in vec.items()}) for vec in kernel(columns, field)]
        ech = Echelon(field)
        for f in prev:
            for x in ring.gens():
                ech.add(_dkey((f * x).terms))
        for f in piece:
            if ech.add(_dkey(f.terms))[0]:
                gens.append(f)
        prev = piece
    gens.extend(g for g in b.minimal_generators() if g.degree() > top)
    return Ideal(ctx, gens, b.known_cofinite())


# ------------------------------------------------------ elimination routes


def _tagged_ring(ring: PolyRing) -> PolyRing:
    name = "_t"
    while name in ring.names:
        name += "_"
    return PolyRing((name,) + ring.names, ring.field)


def _homogeneous_parts(f: Polynomial) -> list[Polynomial]:
    parts: dict = {}
    for e, c in f.terms.items():
        parts.setdefault(sum(e), {})[e] = c
    return [Polynomial(f.ring, t, _clean=True) for t in parts.values()]


def _eliminate_intersection(ctx: RingContext, a_gens, b_gens) -> list[Polynomial]:
    """Generators of (a_gens) ∩ (b_gens) in the ambient ring, via t*A + (1-t)*B."""
    ring = ctx.ring
    big = _tagged_ring(ring)
    shift = list(range(1, ring.nvars + 1))
    t = big.gen(0)
    one_minus_t = big.one() - t
    gens = [t * f.to_ring(big, shift) for f in a_gens]
    gens += [one_minus_t * f.to_ring(big, shift) for f in b_gens]
    gb = groebner(gens, MonomialOrder("elim", 1), ring=big, strategy="sugar", max_pairs=ctx.pair_cap)
    out = []
    for g in gb.polys:
        if all(e[0] == 0 for e in g.terms):
            h = Polynomial(ring, {e[1:]: c for e, c in g.terms.items()}, _clean=True)
            out.extend(_homogeneous_parts(h))
    return out


def _intersect_elim(a: Ideal, b: Ideal) -> Ideal:
    rel = a.ctx.relations
    return Ideal(a.ctx, _eliminate_intersection(a.ctx, a.gens + rel, b.gens + rel))


def _colon_elim(a: Ideal, g: Polynomial) -> Ideal:
    # ambient colon (a + rel) : g = ((a + rel) ∩ (g)) / g, with (g) taken without relations
    inter = _eliminate_intersection(a.ctx, a.gens + a.ctx.relations, [g])
    return Ideal(a.ctx, [divide_exact(h, g) for h in inter])
