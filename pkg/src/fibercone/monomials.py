"""Monomials as exponent tuples, and monomial orders.

A monomial is a plain ``tuple`` of non-negative ints, one entry per ring
variable.  Orders expose ``key(exp)``: a tuple that compares like the
monomials do, so sorting and ``max`` work directly.
"""

from __future__ import annotations

from itertools import combinations_with_replacement


def _check_arity(a, b):
    if len(a) != len(b):
        raise ValueError(f"arity mismatch: {len(a)} vs {len(b)}")


def mono_mul(a: tuple, b: tuple) -> tuple:
    _check_arity(a, b)
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: tuple, b: tuple) -> bool:
    """Does ``a`` divide ``b``?"""
    _check_arity(a, b)
    return all(x <= y for x, y in zip(a, b))


def mono_quotient(b: tuple, a: tuple) -> tuple:
    """``b / a``; requires ``a | b``."""
    _check_arity(a, b)
    q = tuple(y - x for x, y in zip(a, b))
    if any(e < 0 for e in q):
        raise ValueError(f"{a} does not divide {b}")
    return q


def mono_lcm(a: tuple, b: tuple) -> tuple:
    _check_arity(a, b)
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_degree(a: tuple) -> int:
    return sum(a)


def monomials_of_degree(nvars: int, d: int) -> list[tuple]:
    """All exponent vectors of total degree ``d``, in lex-descending order."""
    if d < 0:
        return []
    if nvars == 0:
        return [()] if d == 0 else []
    out = []
    for combo in combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def _degrevlex_key(e):
    return (sum(e),) + tuple(-x for x in reversed(e))


class MonomialOrder:
    """``degrevlex``, ``lex`` or ``elim`` (block order eliminating the first
    ``k`` variables, degrevlex inside each block).

    Variables are ordered x_1 > x_2 > ... > x_n by position.
    """

    KINDS = ("degrevlex", "lex", "elim")

    def __init__(self, kind: str = "degrevlex", k: int = 0):
        if kind not in self.KINDS:
            raise ValueError(f"unknown monomial order {kind!r}")
        if kind == "elim" and k < 1:
            raise ValueError("elimination order needs k >= 1")
        self.kind = kind
        self.k = k if kind == "elim" else 0
        if kind == "degrevlex":
            self.key = _degrevlex_key
        elif kind == "lex":
            self.key = tuple
        else:
            self.key = self._elim_key

    def _elim_key(self, e):
        k = self.k
        return _degrevlex_key(e[:k]) + _degrevlex_key(e[k:])

    def compare(self, a: tuple, b: tuple) -> int:
        """-1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``."""
        _check_arity(a, b)
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.kind, self.k) == (other.kind, other.k)

    def __hash__(self):
        return hash((self.kind, self.k))

    def __repr__(self):
        return f"MonomialOrder({self.kind!r}" + (f", k={self.k})" if self.k else ")")


DEGREVLEX = MonomialOrder("degrevlex")
LEX = MonomialOrder("lex")
