"""Reductions, Ratliff-Rush closures with respect to K, reduction numbers,
Hilbert functions and their coefficients.

Everything is organised around :class:`LocalSetup`, which owns the ideals
I and K and memoises the powers and closures the computations share.
Randomised choices (reductions, superficial elements) draw from the
setup's seeded generator, so results are reproducible.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement

from .errors import DefectError, HypothesisError, ResourceCapError
from .ideals import Ideal, RingContext, colon, quotient_length
from .linalg import Echelon, solve_rational
from .monomials import monomials_of_degree
from .polynomial import Polynomial

log = logging.getLogger(__name__)

DEFAULT_KMAX = 20
DEFAULT_REDUCTION_CAP = 30
DEFAULT_RETRIES = 8
DEFAULT_WIDTH = 3
DEFAULT_TABLE_CAP = 40


class _Powers:
    """I^n and J^n tables shared by every setup built on the same I."""

    def __init__(self, I: Ideal):
        self.I = I
        self.ipow = [I.ctx.unit_ideal(), I]
        self.jpow: dict = {}
        self.setups: dict = {}  # K -> LocalSetup

    def i(self, n: int) -> Ideal:
        while len(self.ipow) <= n:
            self.ipow.append(self.ipow[-1] * self.I)
        return self.ipow[n]

    def j(self, J: Ideal, n: int) -> Ideal:
        tab = self.jpow.setdefault(J, [J.ctx.unit_ideal(), J])
        while len(tab) <= n:
            tab.append(tab[-1] * J)
        return tab[n]


class LocalSetup:
    """R, an m-primary homogeneous ideal I, and an ideal K with I ⊆ K ⊆ m or K = R."""

    def __init__(self, ctx: RingContext, I: Ideal, K: Ideal | None = None, seed: int = 0, _powers=None):
        self.ctx = ctx
        self.I = I
        self.K = K if K is not None else ctx.unit_ideal()
        self.seed = seed
        self.m = ctx.maximal_ideal()
        if I.ctx != ctx or self.K.ctx != ctx:
            raise ValueError("ideals must live in the setup's ring")
        if any(g.degree() < 1 for g in I.gens) or I.is_unit():
            raise HypothesisError("I must be a proper ideal inside m")
        if not I.is_zero_dimensional():
            raise HypothesisError("I is not m-primary (R/I has infinite length)")
        if not I <= self.K:
            raise HypothesisError("I is not contained in K")
        if not self.K.is_unit() and not self.K <= self.m:
            raise HypothesisError("K must be the unit ideal or lie inside m")
        self._pow = _powers if _powers is not None else _Powers(I)
        self._pow.setups.setdefault(self.K, self)
        self._kpow: dict = {}
        self._kjpow: dict = {}
        self._jipow: dict = {}
        self._chain: dict = {}
        self._rr: dict = {}
        self.rng = random.Random(seed)

    @property
    def d(self) -> int:
        return self.ctx.dim

    @property
    def k_is_unit(self) -> bool:
        return self.K.is_unit()

    def with_K(self, K: Ideal) -> LocalSetup:
        """Same ring, I and I-power memo; different K.  One setup per K is kept."""
        if K == self.K:
            return self
        st = self._pow.setups.get(K)
        if st is None:
            st = LocalSetup(self.ctx, self.I, K, self.seed, _powers=self._pow)
            self._pow.setups[K] = st
        return st

    # memoised ideals

    def ipow(self, n: int) -> Ideal:
        return self._pow.i(n)

    def jpow(self, J: Ideal, n: int) -> Ideal:
        return self._pow.j(J, n)

    def kipow(self, n: int) -> Ideal:
        """K·I^n."""
        r = self._kpow.get(n)
        if r is None:
            if self.k_is_unit:
                r = self.ipow(n)
            elif self.K == self.I:
                r = self.ipow(n + 1)
            else:
                r = self.K * self.ipow(n) if n else self.K
            self._kpow[n] = r
        return r

    def jipow(self, J: Ideal, n: int) -> Ideal:
        """J·I^n."""
        key = (J, n)
        r = self._jipow.get(key)
        if r is None:
            r = J * self.ipow(n)
            self._jipow[key] = r
        return r

    def kjipow(self, J: Ideal, n: int) -> Ideal:
        """K·J·I^n."""
        key = (J, n)
        r = self._kjpow.get(key)
        if r is None:
            r = self.jipow(J, n) if self.k_is_unit else self.K * self.jipow(J, n)
            self._kjpow[key] = r
        return r


def maximal_ideal(ctx: RingContext) -> Ideal:
    return ctx.maximal_ideal()


# ------------------------------------------------------------ reductions


@dataclass
class ReductionData:
    J: Ideal
    r: int
    s: int
    verified: bool
    attempts: int
    degrees: tuple = ()
    minimal: bool = True

    @property
    def e0(self) -> int | None:
        """λ(R/J), the multiplicity, when J is a minimal reduction."""
        return self.J.colength() if self.minimal else None


def reduction_number(I: Ideal, J: Ideal, cap: int = DEFAULT_REDUCTION_CAP, setup: LocalSetup | None = None) -> int:
    """min{n : I^{n+1} = J I^n}."""
    setup = setup or LocalSetup(I.ctx, I)
    return k_reduction_number(setup.with_K(I.ctx.unit_ideal()), J, cap)


def k_reduction_number(setup: LocalSetup, J: Ideal, cap: int = DEFAULT_REDUCTION_CAP) -> int:
    """min{n : K I^{n+1} = K J I^n}."""
    if not J <= setup.I:
        raise HypothesisError("J is not contained in I")
    for n in range(cap + 1):
        if setup.kipow(n + 1) == setup.kjipow(J, n):
            return n
    raise ResourceCapError(f"no K-reduction found up to n = {cap}")


def _degree_piece(I: Ideal, D: int) -> list[Polynomial]:
    """A spanning set of the degree-D part of I (monomial multiples of generators)."""
    out = []
    n = I.ctx.nvars
    for g in I.minimal_generators():
        for e in monomials_of_degree(n, D - g.degree()):
            out.append(g.mul_monomial(e))
    return out


def _random_element(piece, field, rng) -> Polynomial:
    acc = None
    for f in piece:
        term = f.scale(field.random_element(rng))
        acc = term if acc is None else acc + term
    return acc


def find_minimal_reduction(
    setup: LocalSetup,
    cap: int = DEFAULT_REDUCTION_CAP,
    retries: int = DEFAULT_RETRIES,
    rng: random.Random | None = None,
) -> ReductionData:
    """Search for a homogeneous minimal reduction J of I.

    Candidates are generated by d random elements of I taken in prescribed
    degrees; degree patterns come from the generator degrees.  Among the
    m-primary candidates the one with least colength is tested (a reduction
    has colength e_0(I), the least possible), by scanning I^{n+1} = J I^n.
    """
    I, ctx, d = setup.I, setup.ctx, setup.d
    field = ctx.field
    if field.p and field.p < 1000:
        log.warning("small prime field F%d: generic choices may fail", field.p)
    gens = I.minimal_generators()
    if len(gens) == d:
        J = I
        return _finish_reduction(setup, J, cap, attempts=0, degrees=tuple(sorted(g.degree() for g in gens)))
    degs = sorted({g.degree() for g in gens})
    patterns = list(combinations_with_replacement(degs, d))
    rng = rng or setup.rng
    for attempt in range(1, retries + 1):
        best = None
        for pat in patterns:
            elems = [_random_element(_degree_piece(I, D), field, rng) for D in pat]
            if any(e is None or not e for e in elems):
                continue
            J = Ideal(ctx, elems)
            if not J.is_zero_dimensional():
                continue
            lam = J.colength()
            if best is None or lam < best[0]:
                best = (lam, J, pat)
        if best is None:
            continue
        lam, J, pat = best
        try:
            return _finish_reduction(setup, J, cap, attempt, pat)
        except ResourceCapError:
            log.info("reduction attempt %d: candidate of colength %d is not a reduction up to %d", attempt, lam, cap)
    raise ResourceCapError(f"no reduction found at cap {cap} after {retries} attempts")


def _finish_reduction(setup, J, cap, attempts, degrees) -> ReductionData:
    r = reduction_number(setup.I, J, cap, setup)
    s = k_reduction_number(setup, J, cap)
    return ReductionData(J=J, r=r, s=s, verified=True, attempts=attempts, degrees=tuple(degrees))


def reduction_from_generators(setup: LocalSetup, J: Ideal, cap: int = DEFAULT_REDUCTION_CAP, require_minimal: bool = True) -> ReductionData:
    """Verify a user-supplied J and wrap it as ReductionData.

    With require_minimal=False any reduction J of I is accepted (J = I gives
    r = 0); e0 is then left undefined.
    """
    minimal = len(J.minimal_generators()) == setup.d
    if require_minimal and not minimal:
        raise HypothesisError(f"J needs exactly d = {setup.d} minimal generators")
    if not J <= setup.I:
        raise HypothesisError("J is not contained in I")
    red = _finish_reduction(setup, J, cap, 0, tuple(sorted(g.degree() for g in J.minimal_generators())))
    red.minimal = minimal
    return red


# -------------------------------------------------------- Ratliff-Rush


@dataclass
class RRClosure:
    n: int
    ideal: Ideal
    k_star: int
    verified: bool
    chain_colengths: list = field(default_factory=list)


def _chain(setup: LocalSetup, J: Ideal, n: int, k: int) -> Ideal:
    """L(n, k) = K I^{n+k} : J^k, computed as L(n+1, k-1) : J."""
    key = (J, n, k)
    r = setup._chain.get(key)
    if r is None:
        inner = setup.kipow(n + k) if k == 1 else _chain(setup, J, n + 1, k - 1)
        r = colon(inner, J)
        setup._chain[key] = r
    return r


def ratliff_rush_wrt(setup: LocalSetup, J: Ideal, n: int, kmax: int = DEFAULT_KMAX) -> RRClosure:
    """rr_K(I^n) as the stable value of the chain K I^{n+k} : J^k.

    Stops at the first k* with L_{k*} = L_{k*+1}.  Without stabilisation
    by ``kmax`` the last chain member is returned with ``verified=False``.
    """
    key = (J, n, kmax)
    cached = setup._rr.get(key)
    if cached is not None:
        return cached
    if n < 0:
        raise ValueError("n must be non-negative")
    prev = _chain(setup, J, n, 1)
    lengths = [prev.colength()]
    result = None
    for k in range(2, kmax + 2):
        cur = _chain(setup, J, n, k)
        lengths.append(cur.colength())
        if lengths[-1] > lengths[-2] or not prev <= cur:
            raise DefectError(f"Ratliff-Rush chain for n={n} is not ascending at k={k}")
        if lengths[-1] == lengths[-2]:
            result = RRClosure(n, prev, k - 1, True, lengths)
            break
        prev = cur
    if result is None:
        log.warning("rr chain for n=%d did not stabilise by k=%d", n, kmax)
        result = RRClosure(n, prev, kmax, False, lengths)
    setup._rr[key] = result
    return result


def rr_colon_descent(setup: LocalSetup, J: Ideal, n: int, kmax: int = DEFAULT_KMAX) -> bool:
    """rr_K(I^n) : J == rr_K(I^{n-1})."""
    if n < 1:
        raise ValueError("descent needs n >= 1")
    top = ratliff_rush_wrt(setup, J, n, kmax).ideal
    low = ratliff_rush_wrt(setup, J, n - 1, kmax).ideal
    return colon(top, J) == low


# ------------------------------------------------------------- Hilbert


def hilbert_function(setup: LocalSetup, n: int) -> int:
    """λ(R / K I^n)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return setup.kipow(n).colength()


def binom(a: int, b: int) -> int:
    """Generalised binomial coefficient C(a, b) for integer a, b >= 0."""
    if b < 0:
        return 0
    num = 1
    for j in range(b):
        num *= a - j
    den = 1
    for j in range(2, b + 1):
        den *= j
    return num // den


def binomial_basis(n: int, d: int) -> list[int]:
    """Values C(n+d-1-i, d-i) for i = 0..d (the alternating-sign basis, unsigned)."""
    return [binom(n + d - 1 - i, d - i) for i in range(d + 1)]


def evaluate_hilbert_polynomial(coeffs, n: int) -> int:
    d = len(coeffs) - 1
    return sum((-1) ** i * g * b for i, (g, b) in enumerate(zip(coeffs, binomial_basis(n, d))))


@dataclass
class HilbertData:
    values: list
    coeffs: list
    window: tuple
    width: int
    classical: bool = False

    @property
    def names(self) -> list[str]:
        return [("e" if self.classical else "g") + str(i) for i in range(len(self.coeffs))]

    def __getitem__(self, i):
        return self.coeffs[i]

    def polynomial(self, n: int) -> int:
        return evaluate_hilbert_polynomial(self.coeffs, n)


class InsufficientTable(Exception):
    pass


def _diffs(values, d):
    out = list(values)
    for _ in range(d):
        out = [b - a for a, b in zip(out, out[1:])]
    return out


def fit_hilbert_polynomial(values, d: int, w: int = DEFAULT_WIDTH, e0: int | None = None, classical=False) -> HilbertData:
    """Coefficients g_0..g_d with values[n] = sum (-1)^i g_i C(n+d-1-i, d-i) on a tail window.

    The tail must have a constant d-th difference (equal to ``e0`` when
    given) long enough that the fitted polynomial reproduces ``w`` values
    beyond the d+1 that determine it; otherwise InsufficientTable.
    """
    N = len(values) - 1
    diff = _diffs(values, d)
    if not diff:
        raise InsufficientTable("table too short")
    last = diff[-1]
    if e0 is not None and last != e0:
        raise InsufficientTable(f"d-th difference {last} has not reached e0 = {e0}")
    i = len(diff) - 1
    while i > 0 and diff[i - 1] == last:
        i -= 1
    start = i  # values[start..N] agree with a degree-d polynomial
    if N - start + 1 < d + 1 + w:
        raise InsufficientTable("no persistent polynomial window yet")
    pts = list(range(start, start + d + 1))
    a = [[(-1) ** k * b for k, b in enumerate(binomial_basis(n, d))] for n in pts]
    sol = solve_rational(a, [values[n] for n in pts])
    if any(Fraction(c).denominator != 1 for c in sol):
        raise DefectError(f"non-integral Hilbert coefficients {sol}")
    coeffs = [int(c) for c in sol]
    for n in range(start, N + 1):
        if evaluate_hilbert_polynomial(coeffs, n) != values[n]:
            raise DefectError("fitted polynomial does not reproduce its window")
    return HilbertData(list(values), coeffs, (start, N), w, classical)


def hilbert_data(
    setup: LocalSetup,
    e0: int | None = None,
    start: int = 6,
    w: int = DEFAULT_WIDTH,
    cap: int = DEFAULT_TABLE_CAP,
) -> HilbertData:
    """Tabulate H_K(I, n) and fit, extending the table until the fit persists."""
    values = [hilbert_function(setup, n) for n in range(start + 1)]
    while True:
        try:
            return fit_hilbert_polynomial(values, setup.d, w, e0, classical=setup.k_is_unit)
        except InsufficientTable:
            if len(values) > cap:
                raise ResourceCapError(f"Hilbert polynomial not reached by n = {cap}")
            values.append(hilbert_function(setup, len(values)))


# ------------------------------------------------------------ sequences


@dataclass
class SequenceReport:
    rho: list
    nu: list
    v: list | None
    truncation: int
    rr_colengths: list
    rr_stable_from: int
    rr_verified: bool
    k_in_rr0: bool = True

    @property
    def rho_sum(self) -> int:
        return sum(self.rho)


def rr_stabilization(setup: LocalSetup, J: Ideal, s: int, w: int = DEFAULT_WIDTH, kmax: int = DEFAULT_KMAX, cap: int = DEFAULT_TABLE_CAP):
    """Least n0 with rr_K(I^n) = K I^n for n0 <= n < n0 + w, scanning at least past s; plus closures up to there."""
    closures = []
    run = 0
    n = 0
    while True:
        rr = ratliff_rush_wrt(setup, J, n, kmax)
        closures.append(rr)
        if rr.ideal.colength() == setup.kipow(n).colength():
            run += 1
        else:
            run = 0
        n0 = n - run + 1
        if run >= w and n > s:
            return n0, closures
        n += 1
        if n > cap:
            raise ResourceCapError(f"Ratliff-Rush filtration did not settle by n = {cap}")


def rho_nu_sequences(setup: LocalSetup, red: ReductionData, upto: int | None = None, w: int = DEFAULT_WIDTH, kmax: int = DEFAULT_KMAX) -> SequenceReport:
    """ρ_j^K = λ(rr_K(I^{j+1}) / J rr_K(I^j)), ν_j^K = λ(K I^{j+1} / K J I^j), and v_n when d = 2."""
    J = red.J
    s = k_reduction_number(setup, J)  # red.s may belong to another K
    n0, closures = rr_stabilization(setup, J, s, w, kmax)
    trunc = max(n0 + 1, s + 1) if upto is None else upto
    while len(closures) <= trunc + 1:
        closures.append(ratliff_rush_wrt(setup, J, len(closures), kmax))
    rr = [c.ideal for c in closures]
    rho, nu = [], []
    for j in range(trunc + 1):
        rho.append(quotient_length(rr[j + 1], J * rr[j]))
        nu.append(quotient_length(setup.kipow(j + 1), setup.kjipow(J, j)))
    for j in range(s, trunc + 1):
        if nu[j]:
            raise DefectError(f"ν_{j} = {nu[j]} although j >= s = {s}")
    v = None
    if setup.d == 2:
        v = v_values(red.e0, [c.colength() for c in rr], rho)
    return SequenceReport(
        rho=rho,
        nu=nu,
        v=v,
        truncation=trunc,
        rr_colengths=[c.colength() for c in rr],
        rr_stable_from=n0,
        rr_verified=all(c.verified for c in closures),
        k_in_rr0=setup.K <= rr[0],
    )


def v_values(e0: int, rr_colengths, rho) -> list:
    """v_0, v_1 from the colengths of rr_K(I^0), rr_K(I^1); v_n = ρ_{n-1} for n >= 2."""
    l0, l1 = rr_colengths[0], rr_colengths[1]
    return [e0 - l0, e0 - l1 + 2 * l0] + list(rho[1:])


def v_sequence(setup: LocalSetup, red: ReductionData, **kw) -> SequenceReport:
    if setup.d != 2:
        raise HypothesisError("v_n is defined here for dimension 2 only")
    return rho_nu_sequences(setup, red, **kw)


def fundamental_lemma_check(hd: HilbertData, seqs: SequenceReport) -> list[tuple]:
    """(n, Δ²[P_K(n) - λ(R/rr_K(I^n))], ρ_{n-1}) for n = 2 .. stabilization + 2."""
    L = seqs.rr_colengths
    f = [hd.polynomial(n) - L[n] for n in range(len(L))]
    out = []
    for n in range(2, min(seqs.rr_stable_from + 2, len(L) - 1, len(seqs.rho)) + 1):
        out.append((n, f[n] - 2 * f[n - 1] + f[n - 2], seqs.rho[n - 1]))
    return out


def coefficients_from_v(v, rr0_colength: int) -> tuple[int, int]:
    """(g_1, g_2) = (Σ_{n≥1} v_n - λ(R/rr_K(I^0)), Σ_{n≥1} (n-1) v_n + λ(R/rr_K(I^0)))."""
    g1 = sum(v[1:]) - rr0_colength
    g2 = sum((n - 1) * x for n, x in enumerate(v) if n >= 1) + rr0_colength
    return g1, g2


# ------------------------------------------------- superficial elements


def quotient_by_element(setup: LocalSetup, x: Polynomial, J: Ideal | None = None):
    """Pass to R/(x).  Returns the new setup (and the image of J when given)."""
    if not x or not x.is_homogeneous():
        raise HypothesisError("x must be a nonzero homogeneous element")
    if not setup.I.contains(x):
        raise HypothesisError("x is not in I")
    ctx = setup.ctx.adjoin_relation(x)  # dimension check rejects zerodivisors
    bar = LocalSetup(ctx, Ideal(ctx, setup.I.gens), Ideal(ctx, setup.K.gens), setup.seed)
    if J is None:
        return bar
    return bar, Ideal(ctx, J.gens)


@dataclass
class SuperficialRecord:
    x: Polynomial
    window: int
    fk_colon: list  # (K I^{n+1} : x) == K I^n, n = 0..window-1
    g_colon: list  # (I^{n+1} : x) == I^n
    attempts: int

    @property
    def regular_pair(self) -> bool:
        """Both colon conditions hold on the whole window."""
        return all(self.fk_colon) and all(self.g_colon)

    @property
    def superficial_tail(self) -> bool:
        return self.fk_colon[-1] and self.g_colon[-1]


def superficial_candidate(
    setup: LocalSetup,
    pool: Ideal | None = None,
    window: int = 6,
    retries: int = DEFAULT_RETRIES,
    rng: random.Random | None = None,
) -> SuperficialRecord:
    """Random element of least degree from ``pool`` (default I) with its colon record.

    Candidates whose colon conditions fail at the top of the window are
    resampled; the last record is returned when every retry fails there.
    """
    pool = pool or setup.I
    rng = rng or setup.rng
    field = setup.ctx.field
    gens = pool.minimal_generators()
    t = min(g.degree() for g in gens)
    low = [g for g in gens if g.degree() == t]
    rec = None
    for attempt in range(1, retries + 1):
        x = _random_element(low, field, rng)
        if not x:
            continue
        if not setup.k_is_unit and setup.kipow(1).contains(x):
            continue  # need x in I \ K I
        xi = Ideal(setup.ctx, [x])
        fk = [colon(setup.kipow(n + 1), xi) == setup.kipow(n) for n in range(window)]
        gg = [colon(setup.ipow(n + 1), xi) == setup.ipow(n) for n in range(window)]
        rec = SuperficialRecord(x, window, fk, gg, attempt)
        if rec.superficial_tail:
            return rec
    if rec is None:
        raise ResourceCapError("no nonzero superficial candidate found")
    return rec


# ------------------------------------------------------- small helpers


def linear_combination_coefficients(target: Polynomial, basis) -> list:
    """Coefficients c with target = Σ c_i basis_i (basis homogeneous of one degree)."""
    field = target.ring.field
    ech = Echelon(field)
    one = field.one
    for i, b in enumerate(basis):
        ech.add(dict(b.terms), {i: one})
    rest, aux = ech.reduce(dict(target.terms), {})
    if rest:
        raise ValueError("target is not in the span")
    p = field.p
    return [(-aux.get(i, 0)) % p if p else -aux.get(i, 0) for i in range(len(basis))]
