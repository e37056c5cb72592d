"""Random instance generation and the aggregate audit over many reports.

Ideals are chosen from families that have homogeneous minimal reductions:
equigenerated ideals of random forms containing pure powers, random
subspaces of the forms of one degree, and monomial ideals
(x^a, y^b, ...) whose extra monomials lie on or above the segment joining
the two powers.  In dimension one the ring is k[x,y]/(f) with f a random
form; a quarter of the dimension-two instances live in k[x,y,z]/(q) with q
a random quadric, the rest in k[x,y].
"""

from __future__ import annotations

import json
import logging
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .dsl import MAXIDEAL, InputDocument, parse
from .errors import FiberconeError, HypothesisError, ResourceCapError
from .field import field_from_name
from .ideals import Ideal, RingContext
from .monomials import monomials_of_degree
from .polynomial import PolyRing

log = logging.getLogger(__name__)

VARS = {1: ("x", "y"), 2: ("x", "y"), 3: ("x", "y", "z")}


@dataclass
class CorpusParams:
    dim: int = 2
    field: str = "F32003"
    max_degree: int = 3
    count: int = 20
    seed: int = 0
    jobs: int = 1


def _form(ring: PolyRing, t: int, rng: random.Random, bound: int = 5):
    acc = ring.zero()
    for e in monomials_of_degree(ring.nvars, t):
        c = rng.randint(-bound, bound)
        if c:
            acc = acc + ring.monomial(e, c)
    return acc


def _pure_power(ring, i, t):
    e = [0] * ring.nvars
    e[i] = t
    return ring.monomial(e)


def _equigenerated(ring, t, rng):
    gens = [_pure_power(ring, i, t) for i in range(ring.nvars)]
    gens += [_form(ring, t, rng) for _ in range(rng.randint(0, ring.nvars))]
    return gens


def _subspace(ring, t, rng):
    """A random subspace of the degree-t forms, of dimension between nvars and all-but-one."""
    total = len(monomials_of_degree(ring.nvars, t))
    k = rng.randint(ring.nvars, max(ring.nvars, total - 1))
    return [_form(ring, t, rng) for _ in range(k)]


def _monomial_subspace(ring, t, rng):
    """Pure powers of degree t plus a random subset of the other degree-t monomials."""
    gens = [_pure_power(ring, i, t) for i in range(ring.nvars)]
    for e in monomials_of_degree(ring.nvars, t):
        if max(e) < t and rng.random() < 0.5:
            gens.append(ring.monomial(e))
    return gens


def _newton(ring, rng, max_degree):
    """(x^a, y^b) plus monomials on or above the segment from (a,0) to (0,b)."""
    a = rng.randint(1, max_degree)
    b = rng.randint(1, max_degree)
    if ring.nvars != 2 or a == b == 1:
        return None
    gens = [ring.monomial((a, 0)), ring.monomial((0, b))]
    for i in range(a):
        for j in range(b):
            if i + j <= max_degree and i * b + j * a >= a * b and rng.random() < 0.5:
                gens.append(ring.monomial((i, j)))
    return gens


def random_document(params: CorpusParams, rng: random.Random) -> InputDocument | None:
    fld = field_from_name(params.field)
    d = params.dim
    hyper = d == 2 and rng.random() < 0.25
    names = VARS[3] if hyper else VARS[d]
    ring = PolyRing(names, fld)
    rels = ()
    t = rng.randint(2, params.max_degree)
    if d == 1 or hyper:
        f = _form(ring, 2 if hyper else rng.randint(2, 3), rng)
        if not f:
            return None
        rels = (f,)
        t = 2 if hyper else t
    kinds = ["equi", "subspace", "monomial"] + (["newton"] if d == 2 and not hyper else [])
    kind = rng.choice(kinds)
    if kind == "equi":
        gens = _equigenerated(ring, t, rng)
    elif kind == "subspace":
        gens = _subspace(ring, t, rng)
    elif kind == "monomial":
        gens = _monomial_subspace(ring, t, rng)
    else:
        gens = _newton(ring, rng, params.max_degree)
    if not gens:
        return None
    gens = [g for g in gens if g]
    try:
        ctx = RingContext(names, fld, rels)
        I = Ideal(ctx, gens)
        if not I.is_zero_dimensional():
            return None
        if I.num_generators() == ctx.dim and rng.random() < 0.85:
            return None  # keep a few parameter ideals, mostly skip them
    except HypothesisError:
        return None
    doc = InputDocument(fld.name, names, rels, {"I": tuple(I.minimal_generators()), "K": MAXIDEAL}, {})
    return parse(doc.to_text())  # normalised through the printer


def generate(params: CorpusParams, cap_factor: int = 50) -> list[InputDocument]:
    rng = random.Random(f"corpus:{params.seed}:{params.dim}:{params.field}:{params.max_degree}")
    out = []
    tries = 0
    while len(out) < params.count:
        tries += 1
        if tries > cap_factor * params.count:
            raise ResourceCapError(f"only {len(out)} m-primary instances in {tries - 1} draws")
        doc = random_document(params, rng)
        if doc is not None:
            out.append(doc)
    return out


@dataclass
class InstanceResult:
    index: int
    text: str
    ok: bool
    error: str | None = None
    exit_code: int = 0
    report: dict | None = None


def _run_one(args) -> InstanceResult:
    from .report import run_command

    index, text, seed = args
    doc = parse(text)
    doc.options["seed"] = seed
    text = doc.to_text()
    try:
        rep = run_command(doc, "analyze", seed=seed)
        rep.pop("_analysis", None)
        return InstanceResult(index, text, True, report=rep)
    except FiberconeError as exc:
        return InstanceResult(index, text, False, f"{type(exc).__name__}: {exc}", exc.exit_code)


def instance_seed(params: CorpusParams, index: int) -> int:
    return params.seed * 100_003 + index


def run_corpus(params: CorpusParams, docs=None) -> list[InstanceResult]:
    docs = docs if docs is not None else generate(params)
    args = [(i, d.to_text(), instance_seed(params, i)) for i, d in enumerate(docs)]
    if params.jobs > 1:
        with ProcessPoolExecutor(params.jobs) as pool:
            res = list(pool.map(_run_one, args))
    else:
        res = [_run_one(a) for a in args]
    return sorted(res, key=lambda r: r.index)


@dataclass
class Aggregate:
    instances: int = 0
    analysed: int = 0
    skipped: dict = field(default_factory=dict)
    defects: int = 0
    amm: dict = field(default_factory=dict)
    minimal: dict = field(default_factory=dict)
    bounds_checked: int = 0
    bounds_held: int = 0
    identities_checked: int = 0
    identities_held: int = 0
    series_checked: int = 0
    series_matched: int = 0

    def as_dict(self):
        return {k: (str(v) if isinstance(v, int) else {a: str(b) for a, b in v.items()}) for k, v in self.__dict__.items()}


def aggregate(results: list[InstanceResult]) -> Aggregate:
    agg = Aggregate(instances=len(results))
    for r in results:
        if not r.ok:
            if r.exit_code == 4:
                agg.defects += 1
            else:
                key = r.error.split(":")[0]
                agg.skipped[key] = agg.skipped.get(key, 0) + 1
            continue
        agg.analysed += 1
        for lab, f in r.report["filtrations"].items():
            if f["amm"]["almost_minimal_multiplicity"]:
                agg.amm[lab] = agg.amm.get(lab, 0) + 1
            if f["amm"]["minimal_multiplicity"]:
                agg.minimal[lab] = agg.minimal.get(lab, 0) + 1
            for b in f["bounds"]:
                if b["hypotheses_verified"]:
                    agg.bounds_checked += 1
                    agg.bounds_held += bool(b["holds"])
            seq = f["sequences"]
            checks = [f["amm"]["mu_identity_residual"] == "0", f["amm"]["lam_J_KJ"] == f["amm"]["d_times_lam_R_K"]]
            checks += seq["rr_colon_descent"]
            if seq["coefficient_formulas"] is not None:
                checks.append(seq["coefficient_formulas"]["match"])
            agg.identities_checked += len(checks)
            agg.identities_held += sum(bool(c) for c in checks)
            s = f["series"]
            if s["hypotheses_verified"]:
                agg.series_checked += 1
                agg.series_matched += bool(s["match"])
    return agg


def dump_defect(result: InstanceResult, directory: str) -> str:
    """Write the offending document, seed included as an option, for replay."""
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, f"defect_{result.index:04d}.fc")
    with open(path, "w") as fh:
        fh.write(f"# {result.error}\n")
        fh.write(result.text)
    return path


def corpus_summary(params: CorpusParams, results) -> str:
    agg = aggregate(results)
    body = {"params": {k: str(v) for k, v in params.__dict__.items() if k != "jobs"}, "aggregate": agg.as_dict()}
    return json.dumps(body, indent=2, sort_keys=True, ensure_ascii=False)
