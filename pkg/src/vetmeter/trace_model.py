"""Core value types: profiled records, ordered traces, fits, estimates, reports.

Durations are integer nanoseconds everywhere; derived statistics are float64.
Every type is immutable once constructed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

KNOWN_PHASES = ("read-map", "spill", "merge", "shuffle", "sort", "reduce-write")
DEFAULT_PHASE = "read-map"


def is_known_phase(phase: str) -> bool:
    return phase in KNOWN_PHASES


@dataclass(frozen=True, slots=True)
class RecordSample:
    """One profiled duration.

    ``phase`` is an open enumeration: names outside ``KNOWN_PHASES`` are kept
    verbatim so that traces from non-Hadoop pipelines survive a round trip.
    """

    job_id: str
    task_id: str
    phase: str
    seq: int
    duration: int

    def __post_init__(self):
        if self.seq < 0:
            raise ValueError(f"seq must be non-negative, got {self.seq}")
        if self.duration < 0:
            raise ValueError(f"duration must be non-negative, got {self.duration}")

    @property
    def key(self):
        return (self.job_id, self.task_id, self.phase, self.seq)


def _frozen_durations(values) -> np.ndarray:
    arr = np.array(values, dtype=np.int64)
    if arr.ndim != 1:
        raise ValueError("durations must be one-dimensional")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class OrderedTaskTrace:
    """A task's durations as order statistics ``y[0] <= y[1] <= ...``.

    Indexing in the estimators is 1-based to match rank notation: rank ``i``
    lives at ``y[i - 1]``.
    """

    task_id: str
    phase: str
    y: np.ndarray
    unit_size: int = 1

    def __post_init__(self):
        y = _frozen_durations(self.y)
        object.__setattr__(self, "y", y)
        if y.size < 1:
            raise ValueError("an ordered trace needs at least one duration")
        if y[0] < 0:
            raise ValueError("durations must be non-negative")
        if y.size > 1 and np.any(y[1:] < y[:-1]):
            raise ValueError("durations must be sorted ascending")
        if self.unit_size < 1:
            raise ValueError("unit_size must be positive")

    @property
    def n(self) -> int:
        return int(self.y.size)

    def rank(self, i: int) -> int:
        """Duration at 1-based rank ``i``."""
        return int(self.y[i - 1])

    def __eq__(self, other):
        if not isinstance(other, OrderedTaskTrace):
            return NotImplemented
        return (
            self.task_id == other.task_id
            and self.phase == other.phase
            and self.unit_size == other.unit_size
            and np.array_equal(self.y, other.y)
        )

    def __hash__(self):
        return hash((self.task_id, self.phase, self.unit_size, self.y.tobytes()))

    def to_dict(self) -> dict:
        return {
            "task_id": self.task_id,
            "phase": self.phase,
            "unit_size": self.unit_size,
            "y": [int(v) for v in self.y],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "OrderedTaskTrace":
        return cls(d["task_id"], d["phase"], d["y"], d["unit_size"])


@dataclass(frozen=True)
class ChangePointFit:
    """Two-segment least-squares fit; lines are ``intercept + slope * rank``."""

    t_hat: int
    left: tuple
    right: tuple
    sse: float
    omega: int

    def to_dict(self) -> dict:
        return {
            "t_hat": self.t_hat,
            "left": list(self.left),
            "right": list(self.right),
            "sse": self.sse,
            "omega": self.omega,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ChangePointFit":
        return cls(d["t_hat"], tuple(d["left"]), tuple(d["right"]), d["sse"], d["omega"])


@dataclass(frozen=True)
class IdealEstimate:
    t_hat: int
    g_anchor: tuple
    ei: float
    oc: float
    pr: float

    def to_dict(self) -> dict:
        return {
            "t_hat": self.t_hat,
            "g_anchor": list(self.g_anchor),
            "ei": self.ei,
            "oc": self.oc,
            "pr": self.pr,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "IdealEstimate":
        return cls(d["t_hat"], tuple(d["g_anchor"]), d["ei"], d["oc"], d["pr"])


@dataclass(frozen=True)
class TaskScore:
    task_id: str
    pr: float
    ei: float
    oc: float
    vet_task: float


@dataclass(frozen=True)
class ExcludedTask:
    task_id: str
    reason: str


@dataclass(frozen=True)
class VetReport:
    """Per-job summary.

    ``vet_job`` and the mean/std fields are ``None`` when no task survived
    the preconditions; ``distributions`` maps task id to bucket totals.
    """

    job_id: str
    per_task: tuple = ()
    vet_job: Optional[float] = None
    pr_mean: Optional[float] = None
    pr_std: Optional[float] = None
    ei_mean: Optional[float] = None
    ei_std: Optional[float] = None
    excluded_tasks: tuple = ()
    distributions: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "job_id": self.job_id,
            "per_task": [
                {"task_id": s.task_id, "pr": s.pr, "ei": s.ei, "oc": s.oc, "vet_task": s.vet_task}
                for s in self.per_task
            ],
            "vet_job": self.vet_job,
            "pr_mean": self.pr_mean,
            "pr_std": self.pr_std,
            "ei_mean": self.ei_mean,
            "ei_std": self.ei_std,
            "excluded_tasks": [{"task_id": e.task_id, "reason": e.reason} for e in self.excluded_tasks],
            "distributions": {k: list(v) for k, v in self.distributions.items()},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "VetReport":
        return cls(
            job_id=d["job_id"],
            per_task=tuple(TaskScore(**row) for row in d["per_task"]),
            vet_job=d["vet_job"],
            pr_mean=d["pr_mean"],
            pr_std=d["pr_std"],
            ei_mean=d["ei_mean"],
            ei_std=d["ei_std"],
            excluded_tasks=tuple(ExcludedTask(**row) for row in d["excluded_tasks"]),
            distributions={k: [int(v) for v in vals] for k, vals in d.get("distributions", {}).items()},
        )
