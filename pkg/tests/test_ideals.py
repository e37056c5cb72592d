import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import F101, random_form, random_homogeneous_ideal_gens, re_present
from fibercone.errors import HypothesisError
from fibercone.ideals import Ideal, RingContext, colon, intersect, power, product, quotient_length
from fibercone.linalg import rank

CTX = RingContext(("x", "y", "z"), F101)
CTX2 = RingContext(("x", "y"), F101)
HYP = RingContext(("x", "y", "z"), F101, ("x^2 + y*z",))

seeds = st.integers(0, 10**6)


def rand_ideal(ctx, seed, cofinite=None, max_degree=3):
    rng = random.Random(seed)
    gens = random_homogeneous_ideal_gens(ctx.ring, rng, max_degree=max_degree)
    if cofinite:
        for i in range(ctx.nvars):
            e = [0] * ctx.nvars
            e[i] = rng.randint(2, 3)
            gens.append(ctx.ring.monomial(e))
    return Ideal(ctx, gens or [ctx.ring.gen(0)])


def brute_colength(I):
    """Σ_D (dim R_D - dim I_D) over degrees up to the socle bound, by linear algebra."""
    from fibercone.monomials import monomials_of_degree

    ctx = I.ctx
    total = 0
    gens = list(I.gens) + list(ctx.relations)
    D = 0
    while True:
        mons = monomials_of_degree(ctx.nvars, D)
        vecs = []
        for g in gens:
            if g.degree() <= D:
                for e in monomials_of_degree(ctx.nvars, D - g.degree()):
                    vecs.append(dict(g.mul_monomial(e).terms))
        gap = len(mons) - rank(vecs, ctx.field)
        total += gap
        if gap == 0:
            return total
        D += 1


def test_colength_examples():
    m = CTX.maximal_ideal()
    assert m.colength() == 1
    assert power(m, 3).colength() == 10
    assert CTX.ideal("x^2", "y^3", "z^4").colength() == 24
    assert HYP.maximal_ideal().colength() == 1
    # k[x,y,z]/(x^2+yz) has Hilbert function 1, 3, 5, ...: λ(R/m^3) = 9
    assert power(HYP.maximal_ideal(), 3).colength() == 9


@given(seeds)
def test_colength_matches_linear_algebra(seed):
    I = rand_ideal(CTX, seed, cofinite=True)
    assert I.colength() == brute_colength(I)


@given(seeds)
def test_colon_routes_agree_and_adjunction(seed):
    a = rand_ideal(CTX, seed, cofinite=True)
    b = rand_ideal(CTX, seed + 1)
    lin = colon(a, b, method="linear")
    eli = colon(a, b, method="elimination")
    assert lin == eli
    assert product(lin, b) <= a
    # anything c with c*b inside a lies in a : b
    rng = random.Random(seed)
    c = random_form(CTX.ring, rng.randint(1, 3), rng)
    assert (product(CTX.ideal(c), b) <= a) == lin.contains(c)


@given(seeds)
def test_intersection_routes_agree(seed):
    a = rand_ideal(CTX, seed, cofinite=True)
    b = rand_ideal(CTX, seed + 7)
    lin = intersect(a, b, method="linear")
    eli = intersect(a, b, method="elimination")
    assert lin == eli
    assert lin <= a and lin <= b
    assert product(a, b) <= lin


@given(seeds)
def test_colon_and_intersection_presentation_independent(seed):
    rng = random.Random(seed)
    a = rand_ideal(CTX, seed, cofinite=True)
    b = rand_ideal(CTX, seed + 3)
    a2 = Ideal(CTX, re_present(list(a.gens), rng, CTX.ring))
    b2 = Ideal(CTX, re_present(list(b.gens), rng, CTX.ring))
    assert a == a2 and b == b2
    assert colon(a, b) == colon(a2, b2)
    assert intersect(a, b) == intersect(a2, b2)


@given(seeds)
def test_quotient_ring_colon(seed):
    a = rand_ideal(HYP, seed, cofinite=True, max_degree=2)
    b = rand_ideal(HYP, seed + 1, max_degree=2)
    q = colon(a, b)
    assert q == colon(a, b, method="elimination")
    assert product(q, b) <= a


def test_colon_exact_examples():
    m = CTX2.maximal_ideal()
    assert colon(power(m, 3), m) == power(m, 2)
    assert colon(CTX2.ideal("x^2", "y^2"), CTX2.ideal("x*y")) == CTX2.ideal("x", "y")
    assert quotient_length(power(m, 2), power(m, 3)) == 3


def test_minimal_generators():
    I = CTX.ideal("x^2", "y^2", "x^2 + y^2", "x^3", "x*y*z")
    assert I.num_generators() == 3
    assert CTX.maximal_ideal().num_generators() == 3


def test_equality_and_containment():
    assert CTX.ideal("x", "y") == CTX.ideal("x + y", "x - y")
    assert CTX.ideal("x^2") <= CTX.ideal("x")
    assert not CTX.ideal("x") <= CTX.ideal("x^2")
    assert hash(CTX.ideal("x", "y")) == hash(CTX.ideal("y", "x + y"))


def test_dimension():
    assert CTX.ideal("x").krull_dimension() == 2
    assert CTX.ideal("x^2", "y^2", "z").is_zero_dimensional()
    assert HYP.dim == 2


def test_bad_relations_rejected():
    with pytest.raises(HypothesisError):
        RingContext(("x", "y"), F101, ("x^2 + y",))
    with pytest.raises(HypothesisError):
        RingContext(("x", "y"), F101, ("x*y", "x^2"))  # not a regular sequence


def test_non_homogeneous_generator_rejected():
    with pytest.raises(HypothesisError):
        CTX.ideal("x^2 + y")
