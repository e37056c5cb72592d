"""Sparse multivariate polynomials over an exact field."""

from __future__ import annotations

from .field import Field, FieldScalar
from .monomials import DEGREVLEX, MonomialOrder


class PolyRing:
    """k[x_1, ..., x_n]: variable names plus a coefficient field."""

    def __init__(self, names, field: Field):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self.names = names
        self.field = field
        self.nvars = len(names)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.names == other.names and self.field == other.field

    def __hash__(self):
        return hash((self.names, self.field))

    def __repr__(self):
        return f"{self.field.name}[{','.join(self.names)}]"

    def zero(self) -> Polynomial:
        return Polynomial(self, {})

    def one(self) -> Polynomial:
        return self.constant(1)

    def constant(self, c) -> Polynomial:
        return Polynomial(self, {(0,) * self.nvars: self.field.convert(c)})

    def gen(self, i: int) -> Polynomial:
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): self.field.one})

    def gens(self) -> list[Polynomial]:
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, exp, coeff=1) -> Polynomial:
        return Polynomial(self, {tuple(exp): self.field.convert(coeff)})

    def __call__(self, text: str) -> Polynomial:
        from .dsl import parse_polynomial

        return parse_polynomial(text, self)


class Polynomial:
    """Immutable polynomial; ``terms`` maps exponent tuples to nonzero coefficients.

    Equality is structural on the term dict, which is canonical (no zero
    coefficients, coefficients in canonical field form).  Ordered views are
    produced per monomial order on request.
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict, _clean: bool = False):
        self.ring = ring
        if not _clean:
            norm = ring.field.normalize
            terms = {e: c for e, c in ((e, norm(c)) for e, c in terms.items()) if c}
        self.terms = terms
        self._hash = None

    # structure

    def _check(self, other: Polynomial):
        if self.ring != other.ring:
            raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")

    def _lift(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, FieldScalar):
            other = other.value
        return self.ring.constant(other)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        try:
            return self == self._lift(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # arithmetic

    def __add__(self, other):
        other = self._lift(other)
        p = self.ring.field.p
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if p:
                v %= p
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial(self.ring, out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        p = self.ring.field.p
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if p:
                    v %= p
                out[e] = v
        return Polynomial(self.ring, {e: c for e, c in out.items() if c}, _clean=True)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> Polynomial:
        field = self.ring.field
        c = field.convert(c)
        if not c:
            return self.ring.zero()
        p = field.p
        if p:
            return Polynomial(self.ring, {e: v * c % p for e, v in self.terms.items()}, _clean=True)
        return Polynomial(self.ring, {e: v * c for e, v in self.terms.items()}, _clean=True)

    def mul_monomial(self, exp, c=1) -> Polynomial:
        field = self.ring.field
        c = field.convert(c)
        p = field.p
        out = {}
        for e, v in self.terms.items():
            w = v * c
            if p:
                w %= p
            out[tuple(a + b for a, b in zip(e, exp))] = w
        return Polynomial(self.ring, out)

    # order-dependent views

    def sorted_terms(self, order: MonomialOrder = DEGREVLEX) -> list[tuple]:
        """Terms ``(exp, coeff)`` strictly descending in ``order``."""
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def leading_term(self, order: MonomialOrder = DEGREVLEX) -> tuple:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=order.key)
        return e, self.terms[e]

    def leading_monomial(self, order: MonomialOrder = DEGREVLEX) -> tuple:
        return self.leading_term(order)[0]

    def leading_coefficient(self, order: MonomialOrder = DEGREVLEX):
        return self.leading_term(order)[1]

    def monic(self, order: MonomialOrder = DEGREVLEX) -> Polynomial:
        if not self.terms:
            return self
        return self.scale(self.ring.field.inv(self.leading_coefficient(order)))

    # grading

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def variables(self) -> set[int]:
        return {i for e in self.terms for i, a in enumerate(e) if a}

    # conversion

    def to_ring(self, ring: PolyRing, index_map) -> Polynomial:
        """Re-embed into ``ring``; ``index_map[i]`` is the target slot of variable i."""
        out = {}
        for e, c in self.terms.items():
            t = [0] * ring.nvars
            for i, a in enumerate(e):
                if a:
                    t[index_map[i]] += a
            out[tuple(t)] = ring.field.convert(c) if ring.field != self.ring.field else c
        return Polynomial(ring, out)

    def __str__(self):
        return self.to_str()

    def to_str(self, order: MonomialOrder = DEGREVLEX) -> str:
        if not self.terms:
            return "0"
        field = self.ring.field
        parts = []
        for e, c in self.sorted_terms(order):
            cs = field.to_str(c)
            neg = cs.startswith("-")
            if neg:
                cs = cs[1:]
            mono = "*".join(
                n if a == 1 else f"{n}^{a}" for n, a in zip(self.ring.names, e) if a
            )
            if not mono:
                body = cs
            elif cs == "1":
                body = mono
            else:
                body = f"{cs}*{mono}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        return " ".join(parts)

    def __repr__(self):
        return f"Polynomial({self.to_str()!r})"
