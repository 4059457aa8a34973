"""Optimality scores, job reports and their table / CSV / JSON renderings."""

from __future__ import annotations

import csv
import io
import json
import math
import statistics
from typing import Iterable, Sequence

import numpy as np

from .errors import NoValidTasks, ZeroIdealCost
from .trace_model import (
    ExcludedTask,
    IdealEstimate,
    OrderedTaskTrace,
    TaskScore,
    VetReport,
)

DEFAULT_BUCKETS = 1000
REPORT_CSV_HEADER = ("task_id", "pr_ns", "ei_ns", "oc_ns", "vet_task")
REPORT_FORMATS = ("table", "csv", "json")


def vet_task(estimate: IdealEstimate) -> float:
    """``(EI + OC) / EI``; exactly 1.0 when there is no overhead."""
    if not estimate.ei > 0:
        raise ZeroIdealCost(f"estimated ideal cost is {estimate.ei}")
    return (estimate.ei + estimate.oc) / estimate.ei


def vet_job(ratios: Sequence[float]) -> float:
    ratios = list(ratios)
    if not ratios:
        raise NoValidTasks("no task produced a vet score")
    return math.fsum(ratios) / len(ratios)


def bucket_distribution(trace: OrderedTaskTrace, buckets: int = DEFAULT_BUCKETS):
    """Sum durations over contiguous, near-equal-count groups of ranks.

    Group sizes differ by at most one (larger groups first). With fewer
    ranks than buckets each rank is its own bucket. Totals are exact ints.
    """
    if buckets < 1:
        raise ValueError(f"buckets must be positive, got {buckets}")
    n = trace.n
    b = min(buckets, n)
    size, extra = divmod(n, b)
    values = trace.y.tolist()
    out = []
    start = 0
    for i in range(b):
        stop = start + size + (1 if i < extra else 0)
        out.append((i, sum(values[start:stop])))
        start = stop
    return out


def _std(values):
    return statistics.stdev(values) if len(values) > 1 else 0.0


def build_report(job_id: str, scores: Iterable[TaskScore], excluded: Iterable[ExcludedTask] = (),
                 distributions=None) -> VetReport:
    scores = tuple(scores)
    excluded = tuple(excluded)
    distributions = dict(distributions or {})
    if not scores:
        return VetReport(job_id=job_id, excluded_tasks=excluded, distributions=distributions)
    prs = [s.pr for s in scores]
    eis = [s.ei for s in scores]
    return VetReport(
        job_id=job_id,
        per_task=scores,
        vet_job=vet_job(s.vet_task for s in scores),
        pr_mean=statistics.fmean(prs),
        pr_std=_std(prs),
        ei_mean=statistics.fmean(eis),
        ei_std=_std(eis),
        excluded_tasks=excluded,
        distributions=distributions,
    )


# -- rendering ---------------------------------------------------------------

def _seconds(ns):
    return "n/a" if ns is None else f"{ns / 1e9:.3f}s"


def _ratio(v):
    return "n/a" if v is None else f"{v:.3f}"


def _render_table(reports: Sequence[VetReport]) -> str:
    header = ["Type", ""] + [r.job_id for r in reports]
    rows = [
        header,
        ["number of tasks", ""] + [str(len(r.per_task)) for r in reports],
        ["PR", "mean"] + [_seconds(r.pr_mean) for r in reports],
        ["", "std"] + [_seconds(r.pr_std) for r in reports],
        ["EI", "mean"] + [_seconds(r.ei_mean) for r in reports],
        ["", "std"] + [_seconds(r.ei_std) for r in reports],
        ["vet_job", ""] + [_ratio(r.vet_job) for r in reports],
    ]
    widths = [max(len(row[c]) for row in rows) for c in range(len(header))]
    lines = []
    for i, row in enumerate(rows):
        label = f"{row[0]:<{widths[0]}} {row[1]:<{widths[1]}}"
        cells = " | ".join(f"{cell:>{widths[c + 2]}}" for c, cell in enumerate(row[2:]))
        lines.append(f"{label} | {cells}")
        if i == 0:
            lines.append("-" * len(lines[-1]))
    footnotes = [
        f"* excluded {r.job_id}/{e.task_id}: {e.reason}"
        for r in reports for e in r.excluded_tasks
    ]
    return "\n".join(lines + footnotes) + "\n"


def _render_csv(reports: Sequence[VetReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_CSV_HEADER)
    for r in reports:
        for s in r.per_task:
            writer.writerow([s.task_id, repr(s.pr), repr(s.ei), repr(s.oc), repr(s.vet_task)])
    return buf.getvalue()


def render_reports(reports: Sequence[VetReport], fmt: str = "table") -> bytes:
    """Deterministic rendering of one or more job reports.

    JSON output is always an array of report objects.
    """
    reports = list(reports)
    if fmt == "table":
        text = _render_table(reports)
    elif fmt == "csv":
        text = _render_csv(reports)
    elif fmt == "json":
        text = json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True) + "\n"
    else:
        raise ValueError(f"unknown report format {fmt!r}; expected one of {REPORT_FORMATS}")
    return text.encode("utf-8")


def render_report(report: VetReport, fmt: str = "table") -> bytes:
    return render_reports([report], fmt)


def parse_reports_json(data) -> list[VetReport]:
    if isinstance(data, (bytes, bytearray)):
        data = data.decode("utf-8")
    doc = json.loads(data)
    if isinstance(doc, dict):
        doc = [doc]
    return [VetReport.from_dict(d) for d in doc]


def read_vet_values(text: str) -> list[float]:
    """Vet scores from a one-column list or a report CSV.

    A header is optional for one-column input; with several columns the
    ``vet_task`` column is selected by name.
    """
    rows = [row for row in csv.reader(io.StringIO(text)) if row and any(c.strip() for c in row)]
    if not rows:
        return []
    first = [c.strip() for c in rows[0]]
    try:
        [float(c) for c in first]
        has_header = False
    except ValueError:
        has_header = True
    col = 0
    if has_header:
        if "vet_task" in first:
            col = first.index("vet_task")
        elif len(first) != 1:
            raise ValueError(f"no vet_task column in header {first}")
        rows = rows[1:]
    elif len(first) != 1:
        raise ValueError("multi-column input needs a header with a vet_task column")
    return [float(row[col]) for row in rows]


def score_row(task_id: str, estimate: IdealEstimate) -> TaskScore:
    return TaskScore(task_id, estimate.pr, estimate.ei, estimate.oc, vet_task(estimate))


def as_array(report: VetReport) -> np.ndarray:
    """Per-task vet scores as an array (handy for KS comparisons)."""
    return np.array([s.vet_task for s in report.per_task], dtype=np.float64)
