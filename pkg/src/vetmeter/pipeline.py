"""End-to-end analysis: samples -> per-task estimates -> job reports."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable

from .changepoint import DEFAULT_OMEGA, estimate_changepoint
from .errors import VetmeterError, describe
from .ideal import estimate_ideal
from .ingest import aggregate_units, build_ordered_trace, group_samples
from .trace_model import DEFAULT_PHASE, ExcludedTask, IdealEstimate, RecordSample, VetReport
from .vet import DEFAULT_BUCKETS, build_report, bucket_distribution, score_row

DEFAULT_UNIT = 5
THREADS_ENV = "VETMETER_THREADS"


@dataclass(frozen=True)
class TaskOutcome:
    job_id: str
    task_id: str
    estimate: IdealEstimate | None = None
    score: object = None
    distribution: list | None = None
    error: str | None = None


def thread_count(env=None) -> int:
    """Worker count from ``VETMETER_THREADS`` (unset or 0 means one per CPU)."""
    env = os.environ if env is None else env
    raw = env.get(THREADS_ENV, "0").strip() or "0"
    value = int(raw)
    if value < 0:
        raise ValueError(f"{THREADS_ENV} must be >= 0, got {value}")
    return value or (os.cpu_count() or 1)


def analyze_task(samples, unit_size=DEFAULT_UNIT, omega=DEFAULT_OMEGA, buckets=DEFAULT_BUCKETS):
    """Run one task's samples (sorted by seq) through the estimator chain."""
    head = samples[0]
    try:
        units = aggregate_units(samples, unit_size)
        trace = build_ordered_trace(units, unit_size)
        fit = estimate_changepoint(trace, omega)
        estimate = estimate_ideal(trace, fit)
        score = score_row(head.task_id, estimate)
    except VetmeterError as exc:
        return TaskOutcome(head.job_id, head.task_id, error=describe(exc))
    dist = [total for _, total in bucket_distribution(trace, buckets)] if buckets else None
    return TaskOutcome(head.job_id, head.task_id, estimate, score, dist)


def analyze_samples(
    samples: Iterable[RecordSample],
    phase: str = DEFAULT_PHASE,
    unit_size: int = DEFAULT_UNIT,
    omega: int = DEFAULT_OMEGA,
    buckets: int = DEFAULT_BUCKETS,
    threads: int | None = None,
) -> list[VetReport]:
    """One report per job, ordered by job id; tasks ordered by task id.

    ``buckets=0`` skips the bucketed distributions.
    """
    groups = group_samples(samples, phase)
    keys = sorted(groups)
    workers = thread_count() if threads is None else (threads or os.cpu_count() or 1)

    def run(key):
        return analyze_task(groups[key], unit_size, omega, buckets)

    if workers > 1 and len(keys) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run, keys))
    else:
        outcomes = [run(k) for k in keys]

    by_job: dict = {}
    for outcome in outcomes:
        by_job.setdefault(outcome.job_id, []).append(outcome)
    reports = []
    for job_id in sorted(by_job):
        done = by_job[job_id]
        reports.append(
            build_report(
                job_id,
                [o.score for o in done if o.error is None],
                [ExcludedTask(o.task_id, o.error) for o in done if o.error is not None],
                {o.task_id: o.distribution for o in done
                 if o.error is None and o.distribution is not None},
            )
        )
    return reports
