"""Almost minimal multiplicity, reduction-number bound audits, fiber cone
presentations and depth, Hilbert series closed forms, and the
Cohen-Macaulay test for F_K(I).
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field

from .errors import DefectError, HypothesisError
from .groebner import buchberger
from .ideals import Ideal, RingContext, colon, intersect, quotient_length
from .invariants import (
    DEFAULT_WIDTH,
    HilbertData,
    LocalSetup,
    ReductionData,
    SequenceReport,
    binom,
    k_reduction_number,
    linear_combination_coefficients,
    ratliff_rush_wrt,
    rr_stabilization,
    superficial_candidate,
)
from .monomials import MonomialOrder, monomials_of_degree
from .polynomial import PolyRing, Polynomial

log = logging.getLogger(__name__)


# ------------------------------------------------------------------ AMM


@dataclass
class AMMVerdict:
    length: int  # λ(KI/KJ)
    minimal: bool
    amm: bool
    mu: int
    lam_mI_mJ: int
    mu_residual: int  # μ(I) + λ(mI/mJ) - (e0 - λ(R/I) + d)
    lam_J_KJ: int
    lam_J_KJ_expected: int  # d λ(R/K)
    lam_I_KI: int
    lam_I_KI_predicted: int  # e0 - λ(R/I) + d λ(R/K) - λ(KI/KJ)


def amm_check(setup: LocalSetup, red: ReductionData) -> AMMVerdict:
    J, I, K, m = red.J, setup.I, setup.K, setup.m
    d, e0 = setup.d, red.e0
    lam = quotient_length(setup.kipow(1), setup.kjipow(J, 0))
    mu = I.num_generators()
    lam_m = quotient_length(m * I, m * J)
    lam_RI = I.colength()
    resid = mu + lam_m - (e0 - lam_RI + d)
    if resid:
        raise DefectError(f"μ(I) + λ(mI/mJ) misses e0 - λ(R/I) + d by {resid}")
    lam_RK = K.colength()
    lam_jkj = quotient_length(J, setup.kjipow(J, 0))
    if lam_jkj != d * lam_RK:
        raise DefectError(f"λ(J/KJ) = {lam_jkj} but d·λ(R/K) = {d * lam_RK}")
    lam_iki = quotient_length(I, setup.kipow(1))
    pred = e0 - lam_RI + d * lam_RK - lam
    if lam_iki != pred:
        raise DefectError(f"λ(I/KI) = {lam_iki}, length identity predicts {pred}")
    return AMMVerdict(lam, lam == 0, lam == 1, mu, lam_m, resid, lam_jkj, d * lam_RK, lam_iki, pred)


def laddered_one_check(setup: LocalSetup, red: ReductionData, verdict: AMMVerdict | None = None) -> list[int]:
    """λ(K I^n / K J I^{n-1}) for n = 1..s+1; under AMM these are 1,...,1,0."""
    verdict = verdict or amm_check(setup, red)
    if not verdict.amm:
        raise HypothesisError("I does not have almost minimal multiplicity with respect to K")
    s = k_reduction_number(setup, red.J)
    vals = [quotient_length(setup.kipow(n), setup.kjipow(red.J, n - 1)) for n in range(1, s + 2)]
    if vals[:s] != [1] * s or vals[s] != 0:
        raise DefectError(f"AMM ladder broken: {vals}")
    return vals


# --------------------------------------------------------------- bounds


@dataclass
class BoundRecord:
    name: str
    hypotheses: dict
    lhs: int | None
    rhs: int | None
    holds: bool | None

    @property
    def applicable(self) -> bool:
        return all(self.hypotheses.values())


def _bound(name, hyps, lhs, rhs) -> BoundRecord:
    if not all(hyps.values()):
        return BoundRecord(name, hyps, lhs, rhs, None if rhs is None else lhs <= rhs)
    holds = lhs <= rhs
    if not holds:
        raise DefectError(f"bound {name} violated: {lhs} > {rhs} with hypotheses {hyps}")
    return BoundRecord(name, hyps, lhs, rhs, holds)


def intersection_hypothesis(setup: LocalSetup, J: Ideal) -> bool:
    """K I ∩ J == K J."""
    return intersect(setup.kipow(1), J) == setup.kjipow(J, 0)


def audit_bounds(
    setup: LocalSetup,
    red: ReductionData,
    hd: HilbertData,
    seqs: SequenceReport,
    classical: HilbertData | None = None,
    at_m: tuple | None = None,
) -> list[BoundRecord]:
    """Evaluate the reduction-number bounds that apply.

    ``classical`` is the K = R Hilbert data (for the e_1 bound); ``at_m`` is
    (HilbertData, s, λ(mI/mJ)) for K = m.  A bound whose hypotheses all
    hold and which fails raises DefectError.
    """
    J, d = red.J, setup.d
    s = k_reduction_number(setup, J)
    lam = quotient_length(setup.kipow(1), setup.kjipow(J, 0))
    hyp = {"KI∩J=KJ": intersection_hypothesis(setup, J)}
    out = [_bound("sum_rho", hyp, s, seqs.rho_sum - lam + 1)]
    two = {"d=2": d == 2}
    if d == 2:
        out.append(_bound("g1", {**hyp, **two}, s, hd[1] - lam + 1 + setup.K.colength()))
    else:
        out.append(BoundRecord("g1", {**hyp, **two}, s, None, None))
    if d == 2 and classical is not None:
        e = classical.coeffs
        out.append(_bound("rossi", two, red.r, e[1] - e[0] + setup.I.colength() + 1))
    else:
        out.append(BoundRecord("rossi", {**two, "classical data": classical is not None}, red.r, None, None))
    if d == 2 and at_m is not None:
        hm, sm, lam_m = at_m
        m_setup = setup.with_K(setup.m)
        mh = {"mI∩J=mJ": intersection_hypothesis(m_setup, J), **two}
        out.append(_bound("m_g1_plus_2", mh, sm, hm[1] + 2 - lam_m))
        out.append(_bound("amm_g1_plus_1", {**mh, "λ(mI/mJ)=1": lam_m == 1}, sm, hm[1] + 1))
    else:
        for name in ("m_g1_plus_2", "amm_g1_plus_1"):
            out.append(BoundRecord(name, {**two, "K=m data": at_m is not None}, None, None, None))
    return out


# -------------------------------------------------------------- H^0


@dataclass
class H0Report:
    pieces: list
    stable_from: int
    positive_depth: bool
    witness_degree: int | None


def h0_pieces(setup: LocalSetup, red: ReductionData, upto: int | None = None, w: int = DEFAULT_WIDTH) -> H0Report:
    """λ((rr_K(I^n) ∩ I^n) / K I^n) for n = 0..upto (default: rr stabilization + w)."""
    s = k_reduction_number(setup, red.J)
    n0, _ = rr_stabilization(setup, red.J, s, w)
    top = n0 + w if upto is None else upto
    pieces = []
    for n in range(top + 1):
        rr = ratliff_rush_wrt(setup, red.J, n).ideal
        meet = intersect(rr, setup.ipow(n))
        pieces.append(quotient_length(meet, setup.kipow(n)))
    nz = [n for n, p in enumerate(pieces) if p]
    return H0Report(pieces, n0, not nz, nz[0] if nz else None)


# ---------------------------------------------------- depth probes


@dataclass
class DepthProbe:
    classical_rr: list  # rr(I^n) == I^n for n = 1..window
    superficial: object | None  # SuperficialRecord
    window: int

    @property
    def g_positive(self) -> bool:
        return all(self.classical_rr)

    @property
    def regular_pair(self) -> bool:
        return self.superficial is not None and self.superficial.regular_pair


def depth_probe(setup: LocalSetup, red: ReductionData, window: int = 6, rng: random.Random | None = None) -> DepthProbe:
    """Evidence for depth G(I) >= 1 and for a superficial element regular on G(I) and F_K(I)."""
    classical = setup.with_K(setup.ctx.unit_ideal())
    rr = [ratliff_rush_wrt(classical, red.J, n).ideal == setup.ipow(n) for n in range(1, window + 1)]
    sup = superficial_candidate(setup, pool=red.J, window=window, rng=rng)
    return DepthProbe(rr, sup, window)


def gamma_hypothesis(setup: LocalSetup, probe: DepthProbe) -> tuple[bool, str]:
    """Whether depth G(I) >= d - 1 is established: (verified, how)."""
    d = setup.d
    if d == 1:
        return True, "d = 1"
    if d == 2:
        if probe.g_positive:
            return True, "probe: rr(I^n) = I^n on window"
        return False, "probe failed: rr(I^n) != I^n for some n"
    return False, "d >= 3: depth of G(I) only probed, verdict conditional"


# ------------------------------------------------- fiber presentation


@dataclass
class FiberPresentation:
    tctx: RingContext
    kernel: Ideal
    gens: list
    degree: int
    hilbert_check: list  # (n, dim of degree-n part, λ(I^n / m I^n))

    @property
    def nvars(self) -> int:
        return self.tctx.nvars

    @property
    def consistent(self) -> bool:
        return all(a == b for _, a, b in self.hilbert_check)

    def image(self, f: Polynomial) -> Polynomial:
        """Substitute T_i -> f_i."""
        ring = self.gens[0].ring
        acc = ring.zero()
        for e, c in f.terms.items():
            t = ring.constant(1).scale(c)
            for g, a in zip(self.gens, e):
                if a:
                    t = t * g**a
            acc = acc + t
        return acc


def _t_names(n, taken):
    base = "T"
    while any(f"{base}{i}" in taken for i in range(1, n + 1)):
        base += "T"
    return [f"{base}{i}" for i in range(1, n + 1)]


def fiber_presentation(setup: LocalSetup, check_upto: int = 4) -> FiberPresentation:
    """F(I) = k[f_1..f_μ] as k[T_1..T_μ]/ker for equigenerated I (K = m)."""
    if setup.K != setup.m:
        raise HypothesisError("fiber presentation needs K = m")
    gens = setup.I.minimal_generators()
    degs = {g.degree() for g in gens}
    if len(degs) != 1:
        raise HypothesisError("fiber presentation needs an equigenerated ideal")
    t = degs.pop()
    ctx = setup.ctx
    nx, mu = ctx.nvars, len(gens)
    tnames = _t_names(mu, ctx.names)
    big = PolyRing(list(ctx.names) + tnames, ctx.field)
    emb = list(range(nx))
    lifted = [g.to_ring(big, emb) for g in gens]
    rels = [r.to_ring(big, emb) for r in ctx.relations]
    polys = [big.gen(nx + i) - f for i, f in enumerate(lifted)] + rels
    gb = buchberger(polys, MonomialOrder("elim", nx), strategy="sugar", max_pairs=ctx.pair_cap, ring=big)
    tring_ctx = RingContext(tnames, ctx.field, pair_cap=ctx.pair_cap)
    back = [None] * nx + list(range(mu))
    ker = []
    for p in gb.polys:
        if all(all(a == 0 for a in e[:nx]) for e in p.terms):
            ker.append(_drop_x(p, tring_ctx.ring, nx))
    kernel = Ideal(tring_ctx, ker)
    lead = kernel.gb().leading_monomials if ker else []
    check = []
    for n in range(check_upto + 1):
        dim = sum(1 for e in monomials_of_degree(mu, n) if not any(_divides(l, e) for l in lead))
        check.append((n, dim, quotient_length(setup.ipow(n), setup.m * setup.ipow(n)) if n else 1))
    pres = FiberPresentation(tring_ctx, kernel, gens, t, check)
    if not pres.consistent:
        raise DefectError(f"fiber presentation Hilbert function disagrees: {check}")
    return pres


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _drop_x(p: Polynomial, ring: PolyRing, nx: int) -> Polynomial:
    return Polynomial(ring, {e[nx:]: c for e, c in p.terms.items()})


def sop_images(pres: FiberPresentation, J: Ideal) -> list[Polynomial]:
    """Degree-one forms in k[T] representing the generators of J."""
    ring = pres.tctx.ring
    out = []
    for g in J.minimal_generators():
        if g.degree() != pres.degree:
            raise HypothesisError("reduction generators are not of the generator degree")
        cs = linear_combination_coefficients(g, pres.gens)
        acc = ring.zero()
        for i, c in enumerate(cs):
            if c:
                acc = acc + ring.gen(i).scale(c)
        out.append(acc)
    return out


@dataclass
class DepthReport:
    fk_depth_lower: int | None = None
    fk_positive: bool | None = None
    g_positive: bool | None = None
    exact_fiber_depth: int | None = None
    evidence: list = field(default_factory=list)


def _is_regular(Q: Ideal, u: Polynomial):
    """(Q : u == Q, a witness in Q : u outside Q or None)."""
    c = colon(Q, Ideal(Q.ctx, [u]))
    if c == Q:
        return True, None
    for g in c.gb().polys:
        if not Q.contains(g):
            return False, g
    raise DefectError("colon differs from Q but has no generator outside Q")


def depth_by_sop(pres: FiberPresentation, sop, seed: int = 0, rng: random.Random | None = None):
    """Depth of k[T]/ker by regular-sequence tests on the given s.o.p. forms.

    Returns (depth, evidence).  The search tries single forms in input
    order, then all ordered pairs, and so on; the reported depth is the
    length of the longest regular sequence found among random combinations
    of the forms (which realises the grade of the ideal they generate).
    """
    rng = rng or random.Random(seed)
    ker = pres.kernel
    ctx = pres.tctx
    evidence = []

    def Q(prev):
        return Ideal(ctx, list(ker.gens) + list(prev))

    best = 0
    frontier = [()]
    for length in range(1, len(sop) + 1):
        nxt = []
        for prev in frontier:
            for i, u in enumerate(sop):
                if i in prev:
                    continue
                ok, wit = _is_regular(Q([sop[j] for j in prev]), u)
                evidence.append(
                    {
                        "sequence": [sop[j].to_str() for j in prev] + [u.to_str()],
                        "regular": ok,
                        "witness": None if ok else wit.to_str(),
                        "witness_image": None if ok else pres.image(wit).to_str(),
                    }
                )
                if ok:
                    nxt.append(prev + (i,))
        if not nxt:
            break
        best = length
        frontier = nxt
    field_ = ctx.field
    generic = 0
    prev = []
    for _ in range(len(sop)):
        u = ctx.ring.zero()
        for f in sop:
            u = u + f.scale(field_.random_element(rng))
        ok, _ = _is_regular(Q(prev), u)
        if not ok:
            break
        prev.append(u)
        generic += 1
    if generic < best:
        raise DefectError(f"generic depth {generic} below an exhibited regular sequence of length {best}")
    return generic, {"greedy_length": best, "tests": evidence}


# ---------------------------------------------------------------- series


def series_coefficients(numerator, denom_power: int, N: int) -> list[int]:
    """Coefficients through t^N of numerator(t) / (1-t)^denom_power."""
    out = []
    for n in range(N + 1):
        out.append(
            sum(a * binom(n - i + denom_power - 1, denom_power - 1) for i, a in enumerate(numerator) if i <= n)
        )
    return out


@dataclass
class SeriesReport:
    N: int
    h_series: list
    fiber_series: list
    numerator: list | None
    denominator_power: int
    closed: list | None
    match: bool | None
    hypotheses: dict
    hypotheses_verified: bool
    g_series: dict | None = None


def series(setup: LocalSetup, red: ReductionData, N: int | None = None, probe: DepthProbe | None = None, verdict: AMMVerdict | None = None) -> SeriesReport:
    J, d, e0 = red.J, setup.d, red.e0
    s = k_reduction_number(setup, J)
    if N is None:
        N = s + d + 5
    if N < s + d + DEFAULT_WIDTH:
        raise HypothesisError(f"truncation N = {N} is below s + d + w = {s + d + DEFAULT_WIDTH}")
    h = [setup.kipow(n).colength() for n in range(N + 1)]
    fib = [setup.kipow(n).colength() - setup.ipow(n).colength() for n in range(N + 1)]
    verdict = verdict or amm_check(setup, red)
    probe = probe or depth_probe(setup, red)
    gamma, how = gamma_hypothesis(setup, probe)
    lam_rk = setup.K.colength()
    hyps = {"amm": verdict.amm, "depth": gamma}
    numerator = closed = match = None
    if verdict.amm:
        numerator = [0] * (s + 2)
        numerator[0] += lam_rk
        numerator[1] += e0 - 1 - lam_rk
        numerator[s + 1] += 1
        closed = series_coefficients(numerator, d + 1, N)
        match = closed == h
    verified = all(hyps.values())
    if verified and not match:
        raise DefectError(f"Hilbert series {h} differs from closed form {closed}")
    hyps["depth_evidence"] = how
    gs = None
    if setup.K == setup.I:
        gs = g_series(setup, red, N)
    return SeriesReport(N, h, fib, numerator, d + 1, closed, match, hyps, verified, gs)


def g_series(setup: LocalSetup, red: ReductionData, N: int) -> dict:
    """Σ λ(I^n/I^{n+1}) t^n against its closed form when λ(I^2/JI) = 1."""
    J, d, e0, r = red.J, setup.d, red.e0, red.r
    lam = quotient_length(setup.ipow(2), setup.jipow(J, 1))
    vals = [setup.ipow(n + 1).colength() - setup.ipow(n).colength() for n in range(N + 1)]
    out = {"lam_I2_JI": lam, "values": vals, "numerator": None, "closed": None, "match": None}
    if lam != 1:
        return out
    lam_ri = setup.I.colength()
    num = [0] * (max(r, 1) + 1)
    num[0] += lam_ri
    num[1] += e0 - 1 - lam_ri
    num[r] += 1
    closed = series_coefficients(num, d, N)
    out.update(numerator=num, closed=closed, match=closed == vals)
    if closed != vals:
        raise DefectError(f"G(I) series {vals} differs from closed form {closed}")
    return out


# -------------------------------------------------------------------- CM


@dataclass
class CMVerdict:
    values: list
    cm: bool
    conditional: bool
    reason: str


def cm_check(setup: LocalSetup, red: ReductionData, probe: DepthProbe | None = None, verdict: AMMVerdict | None = None) -> CMVerdict:
    """F_K(I) Cohen-Macaulay iff λ((K I^n + J I^{n-1}) / J I^{n-1}) = 1 for n = 1..s (under AMM and depth G(I) >= d-1)."""
    verdict = verdict or amm_check(setup, red)
    if not verdict.amm:
        raise HypothesisError("CM criterion needs almost minimal multiplicity with respect to K")
    J = red.J
    s = k_reduction_number(setup, J)
    vals = []
    for n in range(1, s + 1):
        low = setup.jipow(J, n - 1)
        vals.append(quotient_length(setup.kipow(n) + low, low))
    if any(v > 1 for v in vals):
        raise DefectError(f"λ((KI^n + JI^(n-1))/JI^(n-1)) exceeds 1: {vals}")
    probe = probe or depth_probe(setup, red)
    gamma, how = gamma_hypothesis(setup, probe)
    return CMVerdict(vals, all(v == 1 for v in vals), not gamma, how)
