"""Command-line entry point: ``fibercone <command> [FILE] [flags]``.

FILE defaults to standard input.  The seed comes from ``--seed``, then the
``FIBERCONE_SEED`` environment variable, then ``option seed`` in the
document, then 0.  Exit codes follow the error classes in ``errors``.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .corpus import CorpusParams, aggregate, corpus_summary, dump_defect, generate, run_corpus
from .dsl import parse
from .errors import FiberconeError, ParseError
from .report import COMMANDS, run_command

log = logging.getLogger("fibercone")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fibercone", description="Fiber cone and Ratliff-Rush invariants of m-primary ideals.")
    p.add_argument("command", choices=COMMANDS + ("corpus",))
    p.add_argument("file", nargs="?", default="-", help="input document (default: stdin)")
    p.add_argument("--json", action="store_true", help="emit the JSON report")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--trunc", type=int, default=None, help="series truncation N")
    p.add_argument("--n", type=int, default=None, help="power for `rr`")
    p.add_argument("--upto", type=int, default=None, help="table length for `hilbert`")
    p.add_argument("--dim", type=int, default=2, choices=(1, 2, 3), help="corpus dimension")
    p.add_argument("--count", type=int, default=20, help="corpus size")
    p.add_argument("--field", default="F32003", help="corpus field")
    p.add_argument("--max-degree", type=int, default=None, help="corpus generator degree bound")
    p.add_argument("--jobs", type=int, default=1, help="corpus worker processes")
    p.add_argument("--dump", default="defects", help="directory for corpus defect documents")
    p.add_argument("--plot", default=None, metavar="DIR", help="write figures into DIR")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def resolve_seed(flag, doc=None) -> int:
    if flag is not None:
        return flag
    env = os.environ.get("FIBERCONE_SEED")
    if env:
        return int(env)
    if doc is not None and "seed" in doc.options:
        return doc.options["seed"]
    return 0


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


# ------------------------------------------------------------ text output


def _cell(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, list):
        return "[" + ", ".join(_cell(x) for x in v) + "]"
    return str(v)


def table(rows: list[list], header: list[str]) -> str:
    cells = [header] + [[_cell(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _kv(title: str, d: dict) -> str:
    return f"{title}\n" + table([[k, v] for k, v in d.items() if not isinstance(v, dict)], ["key", "value"])


def render_text(rep: dict) -> str:
    out = [f"fibercone {rep['tool']['version']}  command={rep['command']}  seed={rep['seed']}"]
    ring = rep["ring"]
    rel = f" / ({', '.join(ring['relations'])})" if ring["relations"] else ""
    out.append(f"ring {ring['field']}[{', '.join(ring['variables'])}]{rel}  dim={ring['dim']}")
    out.append("I = (" + ", ".join(rep["ideals"]["I_minimal_generators"]) + ")")
    if rep["gb"] is not None:
        out.append("Groebner bases (degrevlex)")
        for name, g in rep["gb"].items():
            out.append(f"  {name}: " + ", ".join(g))
    if rep["reduction"] is not None:
        out.append(_kv("reduction", rep["reduction"]))
    if rep["rr"] is not None:
        out.append(_kv("Ratliff-Rush closure", rep["rr"]))
    if rep["hilbert"] is not None:
        out.append(_kv("Hilbert data", rep["hilbert"]))
    if rep["filtrations"] is not None:
        rows = []
        for lab, f in rep["filtrations"].items():
            seq = f["sequences"]
            rows.append(
                [lab, f["amm"]["lam_KI_KJ"], f["amm"]["almost_minimal_multiplicity"], f["s"], f["hilbert"]["coefficients"], seq["rho"], seq["v"], seq["rr_stable_from"]]
            )
        out.append("filtrations K I^n (K: input, R: unit, m: maximal ideal, I: I itself)")
        out.append(table(rows, ["K", "lam(KI/KJ)", "AMM", "s", "coefficients", "rho", "v", "rr stable"]))
        brows = [[lab, b["name"], b["hypotheses_verified"], b["lhs"], b["rhs"], b["holds"]] for lab, f in rep["filtrations"].items() for b in f["bounds"]]
        out.append("bounds (lhs <= rhs)")
        out.append(table(brows, ["K", "bound", "hypotheses", "lhs", "rhs", "holds"]))
        srows = [[lab, f["series"]["N"], f["series"]["numerator"], f["series"]["hypotheses_verified"], f["series"]["match"]] for lab, f in rep["filtrations"].items()]
        out.append("series sum lam(R/KI^n) t^n")
        out.append(table(srows, ["K", "N", "closed-form numerator", "hypotheses", "match"]))
    elif rep["bounds"] is not None:
        out.append("bounds (lhs <= rhs)")
        out.append(table([[b["name"], b["hypotheses_verified"], b["lhs"], b["rhs"], b["holds"]] for b in rep["bounds"]], ["bound", "hypotheses", "lhs", "rhs", "holds"]))
    elif rep["series"] is not None:
        out.append(_kv("series", rep["series"]))
    if rep["cm"] is not None and rep["filtrations"] is None:
        out.append(_kv("Cohen-Macaulay criterion", rep["cm"]))
    if rep["depth"] is not None:
        dep = {k: v for k, v in rep["depth"].items() if k != "presentation"}
        out.append(_kv("depth", dep))
        pres = rep["depth"]["presentation"]
        if pres is not None:
            out.append(f"fiber cone presentation on {len(pres['variables'])} variables, kernel: " + ", ".join(pres["kernel"]))
            out.append("s.o.p. images: " + ", ".join(pres["sop"]))
            failed = [t for t in pres["tests"] if not t["regular"]]
            for t in failed[:3]:
                out.append(f"  not regular: {' , '.join(t['sequence'])}  witness {t['witness']} -> {t['witness_image']}")
    if rep["checks"] is not None:
        out.append(_kv("checks", rep["checks"]))
    out.append(f"time {rep['timing']['seconds']}s")
    return "\n\n".join(out) + "\n"


def render_json(rep: dict) -> str:
    return json.dumps(rep, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# ------------------------------------------------------------ commands


def _run_single(args) -> int:
    try:
        doc = parse(_read(args.file))
    except ParseError as exc:
        print(f"fibercone: parse error: {exc}", file=sys.stderr)
        return exc.exit_code
    seed = resolve_seed(args.seed, doc)
    options = {"trunc": args.trunc, "n": args.n, "upto": args.upto}
    try:
        rep = run_command(doc, args.command, seed=seed, options=options)
    except FiberconeError as exc:
        print(f"fibercone: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    rep.pop("_analysis", None)
    sys.stdout.write(render_json(rep) if args.json else render_text(rep))
    if args.plot:
        from .plotting import report_figures

        stem = "report" if args.file == "-" else os.path.splitext(os.path.basename(args.file))[0]
        for path in report_figures(rep, args.plot, stem):
            print(f"wrote {path}", file=sys.stderr)
    return 0


def _run_corpus(args) -> int:
    seed = resolve_seed(args.seed)
    maxdeg = args.max_degree or (2 if args.dim == 3 else 3)
    params = CorpusParams(dim=args.dim, field=args.field, max_degree=maxdeg, count=args.count, seed=seed, jobs=args.jobs)
    try:
        docs = generate(params)
    except FiberconeError as exc:
        print(f"fibercone: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    results = run_corpus(params, docs)
    defects = [r for r in results if not r.ok and r.exit_code == 4]
    if args.json:
        sys.stdout.write(corpus_summary(params, results) + "\n")
    else:
        agg = aggregate(results).as_dict()
        print(f"corpus dim={params.dim} field={params.field} count={params.count} seed={params.seed}")
        print(table([[k, v] for k, v in agg.items() if not isinstance(v, dict)], ["aggregate", "value"]))
        for k in ("amm", "minimal", "skipped"):
            if agg[k]:
                print(f"{k}: " + ", ".join(f"{a}={b}" for a, b in sorted(agg[k].items())))
    if args.plot:
        from .plotting import bound_slack_figure

        path = bound_slack_figure([r.report for r in results if r.ok], args.plot, f"corpus_d{params.dim}")
        if path:
            print(f"wrote {path}", file=sys.stderr)
    if defects:
        first = defects[0]
        path = dump_defect(first, args.dump)
        print(f"fibercone: defect in instance {first.index}: {first.error}; replay with `fibercone analyze {path}`", file=sys.stderr)
        return 4
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    if args.command == "corpus":
        return _run_corpus(args)
    return _run_single(args)


if __name__ == "__main__":
    sys.exit(main())
