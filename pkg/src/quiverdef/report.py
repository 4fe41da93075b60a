"""Corpus regression reports: rows, TSV table, JSON, and summary figures."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from . import deform as D
from . import homalg as H
from . import reps as R
from .corpus import CorpusEntry

SCHEMA = "quiverdef-report/1"


@dataclass
class ReportRow:
    module: str
    dims: tuple[int, ...]
    end_dim: int | None = None
    stable_end_dim: int | None = None
    tangent_dim: int | None = None
    verdict: str | None = None
    order: int | None = None
    ring: str | None = None
    universal: bool | None = None
    branches: int | None = None
    elapsed_ms: int | None = None
    expected_ring: str | None = None
    source: str | None = None
    status: str = "COMPUTED"
    error: str | None = None

    def to_json(self) -> dict:
        return {
            "module": self.module,
            "dims": list(self.dims),
            "end_dim": self.end_dim,
            "stable_end_dim": self.stable_end_dim,
            "tangent_dim": self.tangent_dim,
            "verdict": self.verdict,
            "order": self.order,
            "ring": self.ring,
            "universal": self.universal,
            "branches_explored": self.branches,
            "elapsed_ms": self.elapsed_ms,
            "expected_ring": self.expected_ring,
            "source": self.source,
            "status": self.status,
            "error": self.error,
        }


@dataclass
class Report:
    entry_name: str
    field_p: int
    max_order: int
    seed: int
    rows: list[ReportRow] = field(default_factory=list)
    algebra_dim: int = 0
    elapsed_ms: int = 0

    @property
    def any_fail(self) -> bool:
        return any(r.status == "FAIL" for r in self.rows)

    @property
    def any_error(self) -> bool:
        return any(r.status == "ERROR" for r in self.rows)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "entry": self.entry_name,
            "field": self.field_p,
            "max_order": self.max_order,
            "seed": self.seed,
            "algebra_dim": self.algebra_dim,
            "elapsed_ms": self.elapsed_ms,
            "rows": [r.to_json() for r in self.rows],
            "all_pass": not (self.any_fail or self.any_error),
        }

    def to_tsv(self) -> str:
        cols = [
            "module",
            "dims",
            "end",
            "stable_end",
            "tangent",
            "ring",
            "universal",
            "expected",
            "status",
        ]
        lines = ["\t".join(cols)]
        for r in self.rows:
            lines.append(
                "\t".join(
                    [
                        r.module,
                        "x".join(map(str, r.dims)),
                        str(r.end_dim),
                        str(r.stable_end_dim),
                        str(r.tangent_dim),
                        r.ring or (r.error or ""),
                        str(r.universal),
                        r.expected_ring or "-",
                        r.status,
                    ]
                )
            )
        return "\n".join(lines)


def _ring_text(verdict: str, order: int | None, max_order: int) -> str:
    if verdict == "trivial":
        return "k"
    if verdict == "truncated":
        return f"k[[t]]/(t^{order})"
    if verdict == "smooth_to_order":
        return f"k[[t]] (to order {max_order})"
    return "tangent >= 2"


def run_report(entry: CorpusEntry, p: int = 2, max_order: int = 8, seed: int = 0) -> Report:
    t0 = time.monotonic()
    algebra = entry.algebra(p)
    rep = Report(entry.name, p, max_order, seed, algebra_dim=algebra.dim)
    for name in entry.module_specs:
        try:
            m = entry.build_module(algebra, name)
        except Exception as e:
            rep.rows.append(ReportRow(module=name, dims=(), status="ERROR", error=str(e)))
            continue
        row = ReportRow(module=name, dims=m.dims)
        try:
            row.end_dim = R.end_dim(m)
            row.stable_end_dim = H.stable_end_dim(m)
            v = D.versal_classify(m, max_order=max_order, module_name=name)
            row.tangent_dim = v.tangent_dim
            row.verdict = v.verdict
            row.order = v.order
            row.ring = _ring_text(v.verdict, v.order, max_order)
            row.universal = v.universal
            row.branches = v.branches_explored
            row.elapsed_ms = v.elapsed_ms
        except (D.SearchBudgetExceeded, D.BruteForceBudgetExceeded, H.OrbitInconclusive) as e:
            row.status = "ERROR"
            row.error = str(e)
            rep.rows.append(row)
            continue
        exp = entry.expected.get(name)
        if exp is not None:
            row.expected_ring = _ring_text(exp["verdict"], exp["order"], max_order)
            row.source = exp["source"]
            ok = (
                row.end_dim == exp["end_dim"]
                and row.stable_end_dim == exp["stable_end_dim"]
                and row.verdict == exp["verdict"]
                and (row.verdict != "truncated" or row.order == exp["order"])
            )
            row.status = "PASS" if ok else "FAIL"
        rep.rows.append(row)
    rep.elapsed_ms = int((time.monotonic() - t0) * 1000)
    return rep


def render_figure(report: Report, out_path: str):
    """One summary PNG per entry: tangent dimensions colored by verdict."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = [r for r in report.rows if r.tangent_dim is not None]
    names = [r.module for r in rows]
    tangents = [r.tangent_dim for r in rows]
    colors = []
    for r in rows:
        if r.status == "FAIL":
            colors.append("#c0392b")
        elif r.verdict == "trivial":
            colors.append("#7f8c8d")
        elif r.verdict == "truncated":
            colors.append("#2980b9")
        else:
            colors.append("#27ae60")
    fig, ax = plt.subplots(figsize=(max(4.0, 0.8 * len(names)), 3.2))
    ax.bar(range(len(names)), tangents, color=colors)
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=45, ha="right", fontsize=8)
    ax.set_ylabel("tangent dimension")
    ax.set_yticks(range(0, max(tangents + [1]) + 1))
    ax.set_title(f"{report.entry_name} over GF({report.field_p})")
    for k, r in enumerate(rows):
        ax.text(k, r.tangent_dim + 0.05, r.ring or "", ha="center", fontsize=7, rotation=0)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def report_json_text(report: Report) -> str:
    return json.dumps(report.to_json(), indent=2)
