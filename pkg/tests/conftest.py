import os
import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from fibercone.corpus import CorpusParams, generate, run_corpus
from fibercone.field import PrimeField, QQ
from fibercone.monomials import monomials_of_degree
from fibercone.polynomial import PolyRing

settings.register_profile("default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=300, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

F101 = PrimeField(101)
F32003 = PrimeField(32003)

# corpus sizes used by the acceptance suite and the corpus tests
CORPUS_SIZES = {1: 25, 2: 50, 3: 3}
CORPUS_SEED = 42


def ring3(field=QQ):
    return PolyRing(("x", "y", "z"), field)


@st.composite
def polynomials(draw, ring, max_degree=3, max_terms=5, homogeneous=False, coeff=7):
    """Random polynomial in ``ring``; homogeneous of a drawn degree when asked."""
    n = ring.nvars
    if homogeneous:
        deg = draw(st.integers(1, max_degree))
        pool = monomials_of_degree(n, deg)
    else:
        pool = [e for d in range(max_degree + 1) for e in monomials_of_degree(n, d)]
    picks = draw(st.lists(st.sampled_from(pool), min_size=0, max_size=max_terms, unique=True))
    acc = ring.zero()
    for e in picks:
        c = draw(st.integers(-coeff, coeff))
        if c:
            acc = acc + ring.monomial(e, c)
    return acc


def random_form(ring, deg, rng, bound=5):
    acc = ring.zero()
    for e in monomials_of_degree(ring.nvars, deg):
        acc = acc + ring.monomial(e, rng.randint(-bound, bound))
    return acc


def random_homogeneous_ideal_gens(ring, rng, count=None, max_degree=3):
    """A few random forms, sometimes padded with pure powers so the ideal is cofinite."""
    count = count or rng.randint(1, 3)
    gens = [random_form(ring, rng.randint(1, max_degree), rng) for _ in range(count)]
    if rng.random() < 0.5:
        for i in range(ring.nvars):
            e = [0] * ring.nvars
            e[i] = rng.randint(2, max_degree)
            gens.append(ring.monomial(e))
    return [g for g in gens if g]


def re_present(gens, rng, ring):
    """Another generating set of the same ideal: invertible mixing of
    same-degree generators plus redundant multiples, shuffled."""
    by_deg = {}
    for g in gens:
        by_deg.setdefault(g.degree(), []).append(g)
    out = []
    for deg, gs in by_deg.items():
        k = len(gs)
        # unitriangular mixing keeps the span
        mixed = []
        for i in range(k):
            h = gs[i]
            for j in range(i + 1, k):
                h = h + gs[j].scale(rng.randint(-3, 3))
            mixed.append(h)
        out += mixed
    for g in list(out):
        if rng.random() < 0.5:
            out.append(g * ring.gen(rng.randrange(ring.nvars)))
    rng.shuffle(out)
    return out


@pytest.fixture(scope="session")
def corpus():
    """Analyze reports for the d = 1, 2, 3 corpora, computed once per session."""
    out = {}
    for dim, count in CORPUS_SIZES.items():
        params = CorpusParams(dim=dim, count=count, seed=CORPUS_SEED, max_degree=2 if dim == 3 else 3)
        docs = generate(params)
        out[dim] = (params, docs, run_corpus(params, docs))
    return out


@pytest.fixture
def rng():
    return random.Random(20240601)


EXAMPLE_TEXT = """\
ring R = {field}[x,y,z];
ideal I = -x^2+y^2, -y^2+z^2, x*y, y*z, z*x;
ideal J = -x^2+y^2, -y^2+z^2, x*y;
ideal K = maxideal;
"""


@pytest.fixture(scope="session")
def example_reports():
    """``analyze`` on the five-quadric example over F32003 and QQ, with wall times."""
    import time

    from fibercone.dsl import parse
    from fibercone.report import run_command

    out = {}
    for fld in ("F32003", "QQ"):
        t0 = time.perf_counter()
        rep = run_command(parse(EXAMPLE_TEXT.format(field=fld)), "analyze", seed=0)
        out[fld] = (rep, time.perf_counter() - t0)
    return out


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
