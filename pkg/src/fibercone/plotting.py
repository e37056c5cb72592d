"""Figures written next to a report: Hilbert functions against their
fitted polynomials, series against closed forms, and bound slack over a
corpus.  Uses the Agg backend; nothing is shown interactively.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .invariants import evaluate_hilbert_polynomial  # noqa: E402

LABELS = {"K": "K (input)", "R": "K = R", "m": "K = m", "I": "K = I"}


def _ints(xs):
    return [int(x) for x in xs]


def _save(fig, directory, name):
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, name)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def hilbert_figure(report: dict, directory: str, stem: str = "report") -> str | None:
    """λ(R/K I^n) per filtration, with the fitted polynomial dashed."""
    filts = report.get("filtrations")
    if not filts:
        return None
    fig, ax = plt.subplots(figsize=(6, 4))
    for lab, f in filts.items():
        h = f["hilbert"]
        vals = _ints(h["values"])
        coeffs = _ints(h["coefficients"])
        ns = range(len(vals))
        (line,) = ax.plot(ns, vals, "o", ms=4, label=LABELS.get(lab, lab))
        ax.plot(ns, [evaluate_hilbert_polynomial(coeffs, n) for n in ns], "--", color=line.get_color(), lw=1)
    ax.set_xlabel("n")
    ax.set_ylabel(r"$\lambda(R/KI^n)$")
    ax.set_title("Hilbert functions (dashed: fitted polynomial)")
    ax.legend(frameon=False, fontsize=8)
    return _save(fig, directory, f"{stem}_hilbert.png")


def rr_figure(report: dict, directory: str, stem: str = "report") -> str | None:
    """Colength gap λ(rr_K(I^n)/K I^n) per filtration: nonzero terms mark H^0 or rr growth."""
    filts = report.get("filtrations")
    if not filts:
        return None
    fig, ax = plt.subplots(figsize=(6, 3.5))
    for lab, f in filts.items():
        rr = _ints(f["sequences"]["rr_colengths"])
        h = _ints(f["hilbert"]["values"])
        m = min(len(rr), len(h))
        ax.plot(range(m), [h[n] - rr[n] for n in range(m)], "o-", ms=4, label=LABELS.get(lab, lab))
    ax.set_xlabel("n")
    ax.set_ylabel(r"$\lambda(rr_K(I^n)/KI^n)$")
    ax.legend(frameon=False, fontsize=8)
    return _save(fig, directory, f"{stem}_rr_gap.png")


def series_figure(report: dict, directory: str, stem: str = "report") -> str | None:
    s = report.get("series")
    if not s:
        return None
    fig, ax = plt.subplots(figsize=(6, 3.5))
    h = _ints(s["h_series"])
    ax.plot(range(len(h)), h, "o", ms=4, label=r"$\lambda(R/KI^n)$")
    if s["closed_form"] is not None:
        c = _ints(s["closed_form"])
        ax.plot(range(len(c)), c, "--", lw=1, label="closed form")
    fib = _ints(s["fiber_series"])
    ax.plot(range(len(fib)), fib, "s", ms=3, label=r"$\lambda(I^n/KI^n)$")
    ax.set_xlabel("n")
    ax.set_title("truncated series, depth hypothesis " + ("verified" if s["hypotheses_verified"] else "not verified"))
    ax.legend(frameon=False, fontsize=8)
    return _save(fig, directory, f"{stem}_series.png")


def report_figures(report: dict, directory: str, stem: str = "report") -> list[str]:
    out = [hilbert_figure(report, directory, stem), rr_figure(report, directory, stem), series_figure(report, directory, stem)]
    return [p for p in out if p]


def bound_slack_figure(reports: list[dict], directory: str, stem: str = "corpus") -> str | None:
    """Histogram of rhs - lhs for every bound checked with verified hypotheses."""
    slack: dict = {}
    for rep in reports:
        for f in rep["filtrations"].values():
            for b in f["bounds"]:
                if b["hypotheses_verified"]:
                    slack.setdefault(b["name"], []).append(int(b["rhs"]) - int(b["lhs"]))
    if not slack:
        return None
    fig, ax = plt.subplots(figsize=(6, 4))
    names = sorted(slack)
    ax.hist([slack[n] for n in names], bins=range(0, max(max(v) for v in slack.values()) + 2), label=names, align="left")
    ax.set_xlabel("rhs - lhs")
    ax.set_ylabel("count")
    ax.set_title("reduction-number bound slack")
    ax.legend(frameon=False, fontsize=8)
    return _save(fig, directory, f"{stem}_bound_slack.png")
