"""Command implementations and the JSON report.

Every length and coefficient is emitted as a decimal string; analyses
that do not apply are present with value null.  Random choices use one
generator per stage, seeded from (seed, stage), so a sub-command agrees
with the corresponding part of ``analyze``.
"""

from __future__ import annotations

import random
import time

from . import __version__
from .analysis import (
    amm_check,
    audit_bounds,
    cm_check,
    depth_by_sop,
    depth_probe,
    fiber_presentation,
    h0_pieces,
    laddered_one_check,
    series,
    sop_images,
)
from .dsl import MAXIDEAL, InputDocument
from .errors import DefectError, FiberconeError, HypothesisError
from .ideals import Ideal, colon, quotient_length
from .invariants import (
    DEFAULT_KMAX,
    DEFAULT_REDUCTION_CAP,
    DEFAULT_RETRIES,
    DEFAULT_WIDTH,
    LocalSetup,
    coefficients_from_v,
    find_minimal_reduction,
    fundamental_lemma_check,
    hilbert_data,
    hilbert_function,
    k_reduction_number,
    quotient_by_element,
    ratliff_rush_wrt,
    reduction_from_generators,
    rho_nu_sequences,
)

SCHEMA = "fibercone-report/1"
COMMANDS = ("analyze", "gb", "rr", "rednum", "hilbert", "series", "bounds", "depth", "cm")


def num(x):
    """Exact decimal string (None passes through)."""
    if x is None:
        return None
    if isinstance(x, bool):
        return x
    return str(x)


def nums(xs):
    return None if xs is None else [num(x) for x in xs]


def polys(ps):
    return [p.to_str() for p in ps]


class Analysis:
    """Lazily computed pieces of a report for one document and seed."""

    def __init__(self, doc: InputDocument, seed: int = 0, options: dict | None = None):
        self.doc = doc
        self.seed = seed
        opts = dict(doc.options)
        opts.update({k: v for k, v in (options or {}).items() if v is not None})
        self.kmax = opts.get("kmax", DEFAULT_KMAX)
        self.cap = opts.get("cap", DEFAULT_REDUCTION_CAP)
        self.width = opts.get("width", DEFAULT_WIDTH)
        self.retries = opts.get("retries", DEFAULT_RETRIES)
        self.trunc = opts.get("trunc")
        self.ctx = doc.context()
        self.I = doc.ideal("I")
        self.K = doc.ideal("K") if "K" in doc.ideals else self.ctx.maximal_ideal()
        self.setup = LocalSetup(self.ctx, self.I, self.K, seed)
        self._red = None
        self._variants: dict = {}
        self.require_minimal = True

    def rng(self, stage: str) -> random.Random:
        return random.Random(f"{self.seed}:{stage}")

    @property
    def d(self):
        return self.ctx.dim

    @property
    def red(self):
        if self._red is None:
            if "J" in self.doc.ideals:
                self._red = reduction_from_generators(self.setup, self.doc.ideal("J"), self.cap, self.require_minimal)
            else:
                self._red = find_minimal_reduction(self.setup, self.cap, self.retries, rng=self.rng("reduction"))
        return self._red

    def variant(self, label: str) -> LocalSetup:
        """Setups sharing I-powers: 'K' (input), 'R', 'm', 'I'."""
        st = self._variants.get(label)
        if st is None:
            K = {"K": self.K, "R": self.ctx.unit_ideal(), "m": self.ctx.maximal_ideal(), "I": self.I}[label]
            st = self.setup if label == "K" else self.setup.with_K(K)
            self._variants[label] = st
        return st

    def labels(self):
        """Distinct K-variants, input K first."""
        seen, out = [], []
        for lab in ("K", "R", "m", "I"):
            K = self.variant(lab).K
            if K not in seen:
                seen.append(K)
                out.append(lab)
        return out

    # per-variant data, memoised on the setup object

    def _memo(self, st, key, fn):
        cache = st.__dict__.setdefault("_report_memo", {})
        if key not in cache:
            cache[key] = fn()
        return cache[key]

    def hilbert(self, label):
        st = self.variant(label)
        return self._memo(st, "hd", lambda: hilbert_data(st, e0=self.red.e0, w=self.width))

    def sequences(self, label):
        st = self.variant(label)
        return self._memo(st, "seq", lambda: rho_nu_sequences(st, self.red, w=self.width, kmax=self.kmax))

    def s(self, label):
        st = self.variant(label)
        return self._memo(st, "s", lambda: k_reduction_number(st, self.red.J, self.cap))

    def amm(self, label):
        st = self.variant(label)
        return self._memo(st, "amm", lambda: amm_check(st, self.red))

    def probe(self, label):
        st = self.variant(label)
        return self._memo(st, "probe", lambda: depth_probe(st, self.red, rng=self.rng(f"superficial:{label}")))

    def h0(self, label):
        st = self.variant(label)
        return self._memo(st, "h0", lambda: h0_pieces(st, self.red, w=self.width))

    # report sections

    def ring_section(self):
        return {
            "field": self.ctx.field.name,
            "variables": list(self.ctx.names),
            "relations": polys(self.ctx.relations),
            "dim": num(self.d),
        }

    def ideals_section(self):
        def show(name):
            g = self.doc.ideals.get(name)
            if g is None:
                return None
            return MAXIDEAL if g == MAXIDEAL else polys(g)

        return {
            "I": show("I"),
            "J": show("J"),
            "K": show("K") if "K" in self.doc.ideals else MAXIDEAL,
            "I_minimal_generators": polys(self.I.minimal_generators()),
            "colength_I": num(self.I.colength()),
            "colength_K": num(self.K.colength()),
        }

    def reduction_section(self):
        red = self.red
        return {
            "J": polys(red.J.minimal_generators()),
            "given": "J" in self.doc.ideals,
            "minimal": red.minimal,
            "degrees": nums(red.degrees),
            "attempts": num(red.attempts),
            "e0": num(red.e0),
            "r": num(red.r),
            "s": num(red.s),
            "verified": red.verified,
        }

    def gb_section(self):
        out = {}
        for name in self.doc.ideals:
            ideal = self.doc.ideal(name)
            out[name] = polys(ideal.gb().polys)
        return out

    def hilbert_section(self, label, upto=None):
        st = self.variant(label)
        hd = self.hilbert(label)
        table = None
        if upto is not None:
            table = nums(hilbert_function(st, n) for n in range(upto + 1))
        return {
            "values": nums(hd.values),
            "coefficients": nums(hd.coeffs),
            "names": hd.names,
            "window": nums(hd.window),
            "width": num(hd.width),
            "table": table,
        }

    def sequences_section(self, label):
        seq = self.sequences(label)
        hd = self.hilbert(label)
        out = {
            "rho": nums(seq.rho),
            "nu": nums(seq.nu),
            "rho_sum": num(seq.rho_sum),
            "truncation": num(seq.truncation),
            "rr_colengths": nums(seq.rr_colengths),
            "rr_stable_from": num(seq.rr_stable_from),
            "rr_verified": seq.rr_verified,
            "K_in_rr0": seq.k_in_rr0,
            "v": nums(seq.v),
            "coefficient_formulas": None,
            "fundamental_lemma": None,
            "rr_colon_descent": None,
        }
        if not seq.k_in_rr0:
            raise DefectError("K is not contained in rr_K(I^0)")
        st = self.variant(label)
        descent = []
        for n in range(1, seq.truncation + 1):
            top = ratliff_rush_wrt(st, self.red.J, n, self.kmax).ideal
            low = ratliff_rush_wrt(st, self.red.J, n - 1, self.kmax).ideal
            ok = colon(top, self.red.J) == low
            if not ok and seq.rr_verified:
                raise DefectError(f"rr_K(I^{n}) : J differs from rr_K(I^{n - 1})")
            descent.append(ok)
        out["rr_colon_descent"] = descent
        if self.d == 2:
            g1, g2 = coefficients_from_v(seq.v, seq.rr_colengths[0])
            match = (g1, g2) == (hd[1], hd[2])
            if not match:
                raise DefectError(f"v-formulas give ({g1}, {g2}), fit gives ({hd[1]}, {hd[2]})")
            lemma = fundamental_lemma_check(hd, seq)
            if any(a != b for _, a, b in lemma):
                raise DefectError(f"fundamental lemma fails: {lemma}")
            out["coefficient_formulas"] = {
                "g1_from_v": num(g1),
                "g2_from_v": num(g2),
                "g1_fit": num(hd[1]),
                "g2_fit": num(hd[2]),
                "match": match,
            }
            out["fundamental_lemma"] = [{"n": num(n), "lhs": num(a), "rhs": num(b)} for n, a, b in lemma]
        return out

    def amm_section(self, label):
        v = self.amm(label)
        st = self.variant(label)
        ladder = laddered_one_check(st, self.red, v) if v.amm else None
        return {
            "lam_KI_KJ": num(v.length),
            "minimal_multiplicity": v.minimal,
            "almost_minimal_multiplicity": v.amm,
            "mu": num(v.mu),
            "lam_mI_mJ": num(v.lam_mI_mJ),
            "mu_identity_residual": num(v.mu_residual),
            "lam_J_KJ": num(v.lam_J_KJ),
            "d_times_lam_R_K": num(v.lam_J_KJ_expected),
            "lam_I_KI": num(v.lam_I_KI),
            "lam_I_KI_predicted": num(v.lam_I_KI_predicted),
            "ladder": nums(ladder),
        }

    def bounds_section(self, label):
        st = self.variant(label)
        classical = self.hilbert("R") if self.d == 2 else None
        at_m = None
        if self.d == 2:
            at_m = (self.hilbert("m"), self.s("m"), self.amm("m").lam_mI_mJ)
        recs = audit_bounds(st, self.red, self.hilbert(label), self.sequences(label), classical, at_m)
        return [
            {
                "name": r.name,
                "hypotheses": r.hypotheses,
                "hypotheses_verified": r.applicable,
                "lhs": num(r.lhs),
                "rhs": num(r.rhs),
                "holds": r.holds,
            }
            for r in recs
        ]

    def h0_section(self, label):
        h = self.h0(label)
        return {
            "pieces": nums(h.pieces),
            "stable_from": num(h.stable_from),
            "positive_depth": h.positive_depth,
            "first_nonzero": num(h.witness_degree),
        }

    def series_section(self, label, N=None):
        st = self.variant(label)
        N = N if N is not None else self.trunc
        rep = series(st, self.red, N, probe=self.probe(label), verdict=self.amm(label))
        gs = rep.g_series
        if gs is not None:
            gs = {k: (v if isinstance(v, bool) or v is None else nums(v) if isinstance(v, list) else num(v)) for k, v in gs.items()}
        return {
            "N": num(rep.N),
            "h_series": nums(rep.h_series),
            "fiber_series": nums(rep.fiber_series),
            "numerator": nums(rep.numerator),
            "denominator": f"(1-t)^{rep.denominator_power}",
            "closed_form": nums(rep.closed),
            "match": rep.match,
            "hypotheses": rep.hypotheses,
            "hypotheses_verified": rep.hypotheses_verified,
            "g_series": gs,
        }

    def cm_section(self, label):
        v = self.amm(label)
        if not v.amm:
            return None
        st = self.variant(label)
        c = cm_check(st, self.red, self.probe(label), v)
        return {"values": nums(c.values), "cohen_macaulay": c.cm, "conditional": c.conditional, "reason": c.reason}

    def quotient_section(self, label):
        """Reduction number before and after passing to R/(x) for a verified regular x."""
        if self.d < 2:
            return None
        st = self.variant(label)
        rec = self.probe(label).superficial
        if rec is None or not rec.regular_pair:
            return {"x": None if rec is None else rec.x.to_str(), "regular_pair": False, "s": num(self.s(label)), "s_bar": None, "equal": None}
        bar, Jbar = quotient_by_element(st, rec.x, self.red.J)
        Jbar = Ideal(bar.ctx, Jbar.minimal_generators())  # x is among J's generators, so d-1 remain
        sbar = k_reduction_number(bar, Jbar, self.cap)
        s = self.s(label)
        if sbar != s:
            raise DefectError(f"K-reduction number changes modulo a regular element: {s} -> {sbar}")
        return {"x": rec.x.to_str(), "regular_pair": True, "s": num(s), "s_bar": num(sbar), "equal": True}

    def d1_identity(self, label):
        """In dimension one: g_1 = Σ_{n≥1} λ(K I^n / K J I^{n-1}) - λ(R/K)."""
        if self.d != 1:
            return None
        st = self.variant(label)
        hd = self.hilbert(label)
        s = self.s(label)
        total = sum(quotient_length(st.kipow(n), st.kjipow(self.red.J, n - 1)) for n in range(1, s + 1))
        rhs = total - st.K.colength()
        if rhs != hd[1]:
            raise DefectError(f"dimension-one g1 identity fails: {hd[1]} != {rhs}")
        return {"g1": num(hd[1]), "sum_minus_colength": num(rhs), "match": True}

    def filtration(self, label):
        st = self.variant(label)
        return {
            "label": label,
            "K": MAXIDEAL if st.K == self.ctx.maximal_ideal() else polys(st.K.minimal_generators()),
            "s": num(self.s(label)),
            "hilbert": self.hilbert_section(label),
            "sequences": self.sequences_section(label),
            "amm": self.amm_section(label),
            "bounds": self.bounds_section(label),
            "h0": self.h0_section(label),
            "series": self.series_section(label),
            "cm": self.cm_section(label),
            "quotient_invariance": self.quotient_section(label),
            "dimension_one_identity": self.d1_identity(label),
        }

    def depth_section(self):
        m_label = "m"
        h0m = self.h0(m_label)
        probe = self.probe("K")
        g_pos = probe.g_positive and self.h0("I").positive_depth
        exact = None
        evidence = []
        presentation = None
        try:
            pres = fiber_presentation(self.variant(m_label))
        except HypothesisError as exc:
            evidence.append(f"no fiber presentation: {exc}")
            pres = None
        if pres is not None:
            sop = sop_images(pres, self.red.J)
            exact, ev = depth_by_sop(pres, sop, rng=self.rng("depth"))
            presentation = {
                "variables": list(pres.tctx.names),
                "kernel": polys(pres.kernel.gb().polys),
                "generator_degree": num(pres.degree),
                "hilbert_check": [[num(a) for a in row] for row in pres.hilbert_check],
                "sop": polys(sop),
                "greedy_length": num(ev["greedy_length"]),
                "tests": ev["tests"],
            }
            if h0m.positive_depth and exact < 1:
                raise DefectError("H^0 pieces vanish but the presented fiber cone has depth 0")
        lower = exact if exact is not None else (1 if h0m.positive_depth else 0)
        cm = self.cm_section(m_label)
        if exact is not None and cm is not None and cm["cohen_macaulay"] and not cm["conditional"] and exact != self.d:
            raise DefectError(f"CM criterion holds but depth of F(I) is {exact} < {self.d}")
        return {
            "fiber_depth_lower_bound": num(lower),
            "fiber_positive_depth_h0": h0m.positive_depth,
            "g_depth_positive": g_pos,
            "g_rr_probe": probe.classical_rr,
            "fiber_depth_exact": num(exact),
            "presentation": presentation,
            "evidence": evidence,
        }


def run_command(doc: InputDocument, command: str, seed: int = 0, options: dict | None = None) -> dict:
    """Build the report dictionary for one command.  Raises FiberconeError subclasses."""
    if command not in COMMANDS:
        raise ValueError(f"unknown command {command!r}")
    options = dict(options or {})
    t0 = time.perf_counter()
    a = Analysis(doc, seed, options)
    rep = {
        "schema": SCHEMA,
        "tool": {"name": "fibercone", "version": __version__},
        "command": command,
        "seed": num(seed),
        "input": doc.to_text(),
        "ring": a.ring_section(),
        "ideals": a.ideals_section(),
        "gb": None,
        "reduction": None,
        "rr": None,
        "hilbert": None,
        "filtrations": None,
        "series": None,
        "bounds": None,
        "depth": None,
        "cm": None,
        "checks": None,
    }
    if command == "gb":
        rep["gb"] = a.gb_section()
    elif command == "rednum":
        a.require_minimal = False
        rep["reduction"] = a.reduction_section()
    elif command == "rr":
        n = options.get("n") or 1
        rep["reduction"] = a.reduction_section()
        c = ratliff_rush_wrt(a.setup, a.red.J, n, a.kmax)
        rep["rr"] = {
            "n": num(n),
            "generators": polys(c.ideal.minimal_generators()),
            "colength": num(c.ideal.colength()),
            "colength_KIn": num(a.setup.kipow(n).colength()),
            "k_star": num(c.k_star),
            "verified": c.verified,
            "chain_colengths": nums(c.chain_colengths),
        }
    elif command == "hilbert":
        rep["reduction"] = a.reduction_section()
        rep["hilbert"] = a.hilbert_section("K", options.get("upto"))
    elif command == "series":
        rep["reduction"] = a.reduction_section()
        rep["series"] = a.series_section("K", options.get("trunc"))
    elif command == "bounds":
        rep["reduction"] = a.reduction_section()
        rep["bounds"] = a.bounds_section("K")
    elif command == "depth":
        rep["reduction"] = a.reduction_section()
        rep["depth"] = a.depth_section()
    elif command == "cm":
        rep["reduction"] = a.reduction_section()
        rep["cm"] = a.cm_section("K")
    else:
        rep["gb"] = a.gb_section()
        rep["reduction"] = a.reduction_section()
        rep["filtrations"] = {lab: a.filtration(lab) for lab in a.labels()}
        rep["series"] = rep["filtrations"]["K"]["series"]
        rep["bounds"] = rep["filtrations"]["K"]["bounds"]
        rep["cm"] = rep["filtrations"]["K"]["cm"]
        rep["depth"] = a.depth_section()
        rep["checks"] = power_checks(a)
    rep["timing"] = {"seconds": f"{time.perf_counter() - t0:.3f}"}
    rep["_analysis"] = a
    return rep


def power_checks(a: Analysis) -> dict:
    """Summary facts: reduction equalities and the classical rr of I."""
    red, I = a.red, a.I
    st = a.setup
    r = red.r
    out = {
        "I_pow_r_plus_1_eq_J_I_pow_r": st.ipow(r + 1) == st.jipow(red.J, r),
        "I_pow_r_eq_J_I_pow_r_minus_1": (st.ipow(r) == st.jipow(red.J, r - 1)) if r >= 1 else None,
        "rr_I_eq_I": ratliff_rush_wrt(a.variant("R"), red.J, 1, a.kmax).ideal == I,
        "rr_I_extra": polys(_outside(ratliff_rush_wrt(a.variant("R"), red.J, 1, a.kmax).ideal, I)),
    }
    return out


def _outside(big: Ideal, small: Ideal):
    return [g for g in big.minimal_generators() if not small.contains(g)]


__all__ = ["run_command", "Analysis", "SCHEMA", "COMMANDS", "FiberconeError"]
