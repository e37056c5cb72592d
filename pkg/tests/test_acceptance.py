"""Acceptance suite: one test per criterion, each recording a pass/fail line.

The lines are printed as the test runs (visible with -s) and collected in
the terminal summary under "acceptance criteria".  Where a report carries a
verdict flag, the test recomputes the quantity from the raw numbers in the
report or from the engine rather than trusting the flag.
"""

import random
from contextlib import contextmanager
from fractions import Fraction

from conftest import ACCEPTANCE_LINES, F101, QQ, random_homogeneous_ideal_gens, re_present
from fibercone.dsl import parse
from fibercone.groebner import groebner
from fibercone.ideals import Ideal, RingContext, colon, intersect, quotient_length
from fibercone.polynomial import PolyRing

LABELS = ("R", "K", "I")


@contextmanager
def criterion(num, title):
    """Record '[PASS]' or '[FAIL]' for criterion ``num``; ``note`` collects counts."""
    note = {}
    try:
        yield note
    except BaseException as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        line = f"[FAIL] {num}. {title}: {msg[:160]}"
        ACCEPTANCE_LINES[num] = line
        print(line)
        raise
    extra = ", ".join(f"{k}={v}" for k, v in note.items())
    line = f"[PASS] {num}. {title}" + (f" ({extra})" if extra else "")
    ACCEPTANCE_LINES[num] = line
    print(line)


def num(s):
    return None if s is None else int(s)


def poly_binom(a: int, k: int) -> int:
    """C(a, k) as a polynomial in a, so negative a is allowed."""
    out = Fraction(1)
    for j in range(k):
        out = out * (a - j) / (j + 1)
    return int(out)


def hilbert_poly(coeffs, n: int) -> int:
    """Σ (-1)^i c_i C(n+d-1-i, d-i) with d = len(coeffs) - 1."""
    d = len(coeffs) - 1
    return sum((-1) ** i * c * poly_binom(n + d - 1 - i, d - i) for i, c in enumerate(coeffs))


def expand(numerator, power: int, N: int) -> list:
    """Coefficients of numerator(t) / (1-t)^power through t^N."""
    return [sum(c * poly_binom(n - i + power - 1, power - 1) for i, c in enumerate(numerator) if i <= n) for n in range(N + 1)]


def colength_of_K(rep, label):
    return {"R": 0, "K": num(rep["ideals"]["colength_K"]), "I": num(rep["ideals"]["colength_I"])}[label]


def all_reports(corpus, example_reports=None):
    out = []
    for dim, (_, docs, results) in sorted(corpus.items()):
        for doc, res in zip(docs, results):
            assert res.ok, f"d={dim} #{res.index}: {res.error}"
            out.append((dim, doc, res.report))
    for rep, _ in (example_reports or {}).values():
        out.append((num(rep["ring"]["dim"]), parse(rep["input"]), rep))
    return out


# 1 ------------------------------------------------------------------------

def check_example(rep, seconds, field_name):
    assert seconds < 30, f"{field_name}: {seconds:.1f}s"
    K = rep["filtrations"]["K"]
    assert K["amm"]["lam_mI_mJ"] == "1"
    red = rep["reduction"]
    assert red["r"] == "2" and red["verified"] is True
    checks = rep["checks"]
    assert checks["I_pow_r_plus_1_eq_J_I_pow_r"] is True
    assert checks["I_pow_r_eq_J_I_pow_r_minus_1"] is False
    assert checks["rr_I_eq_I"] is False and "x^2" in checks["rr_I_extra"]
    h0 = rep["filtrations"]["I"]["h0"]
    assert h0["positive_depth"] is False and num(h0["pieces"][0]) > 0
    assert rep["depth"]["g_depth_positive"] is False

    pres = rep["depth"]["presentation"]
    assert len(pres["variables"]) == 5
    assert rep["depth"]["fiber_depth_exact"] == "1"
    pair = [t for t in pres["tests"] if t["sequence"] == ["T1", "T2"]]
    assert pair and pair[0]["regular"] is False and pair[0]["witness"]

    # engine-side certificates for the same statements
    doc = parse(rep["input"])
    ctx = doc.context()
    I, J = doc.ideal("I"), doc.ideal("J")
    m = ctx.maximal_ideal()
    assert quotient_length(m * I, m * J) == 1
    assert I**3 == J * I**2 and I**2 != J * I
    x2 = ctx.poly("x^2")
    assert x2 not in I and I.scale_by(x2) <= I**2
    # the witness w lies in I^2 and satisfies w f2 ∈ f1 I^2 + m I^3 but w ∉ f1 I + m I^2
    f1, f2 = ctx.poly("-x^2+y^2"), ctx.poly("-y^2+z^2")
    w = ctx.poly(pair[0]["witness_image"])
    assert w == ctx.poly("-x^2*z^2 + y^2*z^2")
    assert w in I**2
    assert w * f2 in I.scale_by(f1) * I + m * I**3
    assert w not in I.scale_by(f1) + m * I**2


def test_example_regression(example_reports):
    with criterion(1, "five-quadric example over F32003 and QQ") as note:
        for fld, (rep, seconds) in example_reports.items():
            check_example(rep, seconds, fld)
            note[fld] = f"{seconds:.1f}s"


# 2 ------------------------------------------------------------------------

def test_classical_coefficient_formulas(corpus):
    with criterion(2, "e1 = Σv_n and e2 = Σ(n-1)v_n on the d = 2 corpus") as note:
        checked = 0
        for _, doc, rep in all_reports({2: corpus[2]}):
            f = rep["filtrations"]["R"]
            assert f["hilbert"]["names"][:3] == ["e0", "e1", "e2"]
            e0, e1, e2 = map(int, f["hilbert"]["coefficients"][:3])
            v = [int(x) for x in f["sequences"]["v"]]
            assert e0 == num(rep["reduction"]["e0"])
            assert e1 == sum(v[1:]), doc.to_text()
            assert e2 == sum((n - 1) * x for n, x in enumerate(v) if n >= 1), doc.to_text()
            checked += 1
        assert checked >= 20
        note["instances"] = checked


# 3 ------------------------------------------------------------------------

def test_generalized_coefficient_formulas(corpus):
    with criterion(3, "g1, g2 from v_n and the second-difference identity, K = m") as note:
        checked = points = 0
        for _, doc, rep in all_reports({2: corpus[2]}):
            f = rep["filtrations"]["K"]
            assert f["K"] == "maxideal"
            coeffs = [int(c) for c in f["hilbert"]["coefficients"]]
            seq = f["sequences"]
            v = [int(x) for x in seq["v"]]
            L = [int(x) for x in seq["rr_colengths"]]
            rho = [int(x) for x in seq["rho"]]
            g1, g2 = coeffs[1], coeffs[2]
            # λ(R/rr_K(I^0)) enters with a minus in g1 and a plus in g2
            assert g1 == sum(v[1:]) - L[0], doc.to_text()
            assert g2 == sum((n - 1) * x for n, x in enumerate(v) if n >= 1) + L[0], doc.to_text()
            stable = int(seq["rr_stable_from"])
            assert len(L) >= stable + 3 and len(rho) >= stable + 2, "sequence table too short"
            F = [hilbert_poly(coeffs, n) - L[n] for n in range(len(L))]
            for n in range(2, stable + 3):
                assert F[n] - 2 * F[n - 1] + F[n - 2] == rho[n - 1], (doc.to_text(), n)
                points += 1
            checked += 1
        assert checked >= 20
        note["instances"] = checked
        note["lemma points"] = points


# 4 ------------------------------------------------------------------------

def test_bounds_hold(corpus, example_reports):
    with criterion(4, "bounds with verified hypotheses hold") as note:
        seen = {}
        for dim, doc, rep in all_reports(corpus, example_reports):
            for label in LABELS:
                for b in rep["filtrations"][label]["bounds"]:
                    if not b["hypotheses_verified"]:
                        continue
                    assert all(b["hypotheses"].values())
                    assert num(b["lhs"]) <= num(b["rhs"]), (b["name"], label, doc.to_text())
                    assert b["holds"] is True
                    seen[b["name"]] = seen.get(b["name"], 0) + 1
        for name in ("rossi", "sum_rho", "g1", "m_g1_plus_2"):
            assert seen.get(name), f"bound {name} never checked"
        note.update(sorted(seen.items()))


# 5 ------------------------------------------------------------------------

def test_amm_fiber_depth(corpus):
    with criterion(5, "AMM instances at d = 2 have depth F(I) >= 1") as note:
        found = equi = 0
        for _, doc, rep in all_reports({2: corpus[2]}):
            amm = rep["filtrations"]["K"]["amm"]
            if not amm["almost_minimal_multiplicity"]:
                continue
            assert amm["lam_mI_mJ"] == "1"
            found += 1
            depth = rep["depth"]
            h0 = rep["filtrations"]["K"]["h0"]
            assert all(p == "0" for p in h0["pieces"]) and h0["positive_depth"] is True, doc.to_text()
            assert depth["fiber_positive_depth_h0"] is True
            degrees = {g.degree() for g in doc.ideal("I").minimal_generators()}
            if len(degrees) == 1:
                equi += 1
                assert num(depth["fiber_depth_exact"]) >= 1, doc.to_text()
        assert found > 0, "no AMM instance in the corpus"
        note["amm"] = found
        note["equigenerated"] = equi


# 6 ------------------------------------------------------------------------

def test_series_closed_forms(corpus):
    with criterion(6, "Hilbert series closed forms") as note:
        counts = {"d1": 0, "d2": 0, "g": 0}
        for dim, doc, rep in all_reports({1: corpus[1], 2: corpus[2]}):
            e0 = num(rep["reduction"]["e0"])
            for label in ("K", "I"):
                f = rep["filtrations"][label]
                ser = f["series"]
                if not f["amm"]["almost_minimal_multiplicity"]:
                    continue
                if dim == 2 and not ser["hypotheses"]["depth"]:
                    continue
                lam = colength_of_K(rep, label)
                s = num(f["s"])
                N = num(ser["N"])
                assert N >= s + dim + 5
                numer = [0] * (s + 2)
                numer[0] += lam
                numer[1] += e0 - 1 - lam
                numer[s + 1] += 1
                h = [int(x) for x in ser["h_series"]]
                assert h[: N + 1] == expand(numer, dim + 1, N), (label, doc.to_text())
                assert ser["match"] is True
                counts[f"d{dim}"] += 1
            # K = I: λ(I^n/I^{n+1}) read off the λ(R/I^{n+1}) column
            g = rep["filtrations"]["I"]["series"]["g_series"]
            if g is not None and g["lam_I2_JI"] == "1":
                hI = [int(x) for x in rep["filtrations"]["I"]["series"]["h_series"]]
                gvals = [hI[0]] + [hI[n] - hI[n - 1] for n in range(1, len(hI))]
                lamI = num(rep["ideals"]["colength_I"])
                r = num(rep["reduction"]["r"])
                numer = [0] * (r + 1)
                numer[0] += lamI
                numer[1] += e0 - 1 - lamI
                numer[r] += 1
                M = len(gvals) - 1
                assert gvals == expand(numer, dim, M), doc.to_text()
                assert g["match"] is True
                counts["g"] += 1
        assert counts["d1"] and counts["d2"] and counts["g"], counts
        note.update(counts)


# 7 ------------------------------------------------------------------------

def test_structural_identities(corpus, example_reports):
    with criterion(7, "structural identities on the full corpus") as note:
        checked = descents = qinv = 0
        for dim, doc, rep in all_reports(corpus, example_reports):
            e0 = num(rep["reduction"]["e0"])
            lamI = num(rep["ideals"]["colength_I"])
            for label in LABELS:
                f = rep["filtrations"][label]
                amm = f["amm"]
                assert num(amm["lam_J_KJ"]) == dim * colength_of_K(rep, label), (label, doc.to_text())
                assert num(amm["mu"]) + num(amm["lam_mI_mJ"]) == e0 - lamI + dim, doc.to_text()
                assert amm["mu_identity_residual"] == "0"
                desc = f["sequences"]["rr_colon_descent"]
                assert desc and all(desc), (label, doc.to_text())
                descents += len(desc)
                q = f["quotient_invariance"]
                if q is not None and q["equal"] is not None:
                    assert q["regular_pair"] is True and q["equal"] is True and q["s"] == q["s_bar"]
                    qinv += 1
                checked += 1
        assert qinv > 0
        note["filtrations"] = checked
        note["colon descents"] = descents
        note["quotient checks"] = qinv


# 8 ------------------------------------------------------------------------

def test_engine_canonicality():
    with criterion(8, "engine canonicality") as note:
        rng = random.Random(8)
        fields = (QQ, F101)
        for k in range(100):
            R = PolyRing(("x", "y", "z"), fields[k % 2])
            gens = random_homogeneous_ideal_gens(R, rng) or [R.gen(0)]
            other = re_present(gens, rng, R)
            assert groebner(gens, ring=R) == groebner(other, ring=R), k
            ctx = RingContext(("x", "y", "z"), fields[k % 2])
            assert Ideal(ctx, gens).gb() == Ideal(ctx, other).gb(), k
        note["gb ideals"] = 100

        nf = 0
        for k in range(40):
            R = PolyRing(("x", "y", "z"), fields[k % 2])
            G = groebner(random_homogeneous_ideal_gens(R, rng) or [R.gen(1)], ring=R)
            f = R.zero()
            for _ in range(6):
                e = tuple(rng.randint(0, 3) for _ in range(3))
                f = f + R.monomial(e, rng.randint(-9, 9))
            r = G.normal_form(f)
            assert G.normal_form(r) == r and G.contains(f - r)
            nf += 1
        note["nf checks"] = nf

        ops = 0
        ctx = RingContext(("x", "y", "z"), F101)
        for k in range(20):
            a = random_homogeneous_ideal_gens(ctx.ring, rng) or [ctx.ring.gen(0)]
            b = random_homogeneous_ideal_gens(ctx.ring, rng) or [ctx.ring.gen(1)]
            A, B = Ideal(ctx, a), Ideal(ctx, b)
            A2, B2 = Ideal(ctx, re_present(a, rng, ctx.ring)), Ideal(ctx, re_present(b, rng, ctx.ring))
            assert colon(A, B).gb() == colon(A2, B2).gb(), k
            assert intersect(A, B).gb() == intersect(A2, B2).gb(), k
            ops += 2
        note["colon/intersection pairs"] = ops
