"""Synthetic per-record traces with known injected overhead.

Each record costs a jittered base CPU time, plus an I/O cost for a fraction of
records, plus a Pareto-distributed spike for another (independent) fraction.
Normal records therefore fall into a CPU-only or CPU+I/O class, and spiked
records carry reducible overhead whose exact total is reported back as ground
truth.

Randomness comes from :mod:`vetmeter.rng`, keyed by ``(seed, task_index,
record_index)``. Because the selection draw of a record does not depend on
``overhead_fraction``, raising the fraction only ever adds spikes to records
that had none, and the spike sizes stay put.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import rng
from .errors import InvalidConfig, IoWriteFailure
from .ingest import serialize_trace
from .trace_model import RecordSample

# keeps every duration an exact float64 integer and sums inside int64
MAX_SPIKE_NS = 2**50

_JITTER, _IO_PICK, _OVERHEAD_PICK, _SPIKE = range(4)


@dataclass(frozen=True)
class SimConfig:
    records: int = 2000
    tasks: int = 8
    base_cpu_ns: int = 1500
    jitter_fraction: float = 0.05
    io_fraction: float = 0.1
    io_cost_ns: int = 4000
    overhead_fraction: float = 0.05
    overhead_tail_alpha: float = 1.3
    overhead_scale_ns: int = 1_000_000
    seed: int = 0
    phase: str = "read-map"

    def validate(self) -> "SimConfig":
        problems = []
        if self.records < 1:
            problems.append("records must be >= 1")
        if self.tasks < 1:
            problems.append("tasks must be >= 1")
        if self.base_cpu_ns < 1:
            problems.append("base_cpu_ns must be positive")
        if not 0.0 <= self.jitter_fraction < 1.0:
            problems.append("jitter_fraction must lie in [0, 1)")
        if not 0.0 <= self.io_fraction <= 1.0:
            problems.append("io_fraction must lie in [0, 1]")
        if self.io_cost_ns < 1:
            problems.append("io_cost_ns must be positive")
        if not 0.0 <= self.overhead_fraction <= 1.0:
            problems.append("overhead_fraction must lie in [0, 1]")
        if not self.overhead_tail_alpha > 0:
            problems.append("overhead_tail_alpha must be positive")
        if self.overhead_scale_ns < 1:
            problems.append("overhead_scale_ns must be positive")
        if not -(2**63) <= self.seed < 2**64:
            problems.append("seed must fit in 64 bits")
        if problems:
            raise InvalidConfig("; ".join(problems))
        return self

    @property
    def job_id(self) -> str:
        return f"sim_{self.seed}"


@dataclass(frozen=True)
class GroundTruth:
    task_id: str
    injected_overhead_ns: int
    base_sum_ns: int
    io_sum_ns: int

    @property
    def total_ns(self) -> int:
        return self.base_sum_ns + self.io_sum_ns + self.injected_overhead_ns


def task_id(task_index: int) -> str:
    return f"m_{task_index:04d}"


def record_components(config: SimConfig, task_index: int, record_index):
    """Per-record ``(base, io, spike)`` integer arrays for the given indices."""
    idx = np.atleast_1d(np.asarray(record_index, dtype=np.uint64))
    seed, ti = config.seed, task_index

    u = rng.uniforms(seed, ti, _JITTER, idx)
    base = np.rint(config.base_cpu_ns * (1.0 + config.jitter_fraction * (2.0 * u - 1.0)))
    base = base.astype(np.int64)

    io_hit = rng.uniforms(seed, ti, _IO_PICK, idx) < config.io_fraction
    io = np.where(io_hit, config.io_cost_ns, 0).astype(np.int64)

    spike_hit = rng.uniforms(seed, ti, _OVERHEAD_PICK, idx) < config.overhead_fraction
    u = rng.uniforms(seed, ti, _SPIKE, idx)
    with np.errstate(over="ignore"):
        magnitude = config.overhead_scale_ns * u ** (-1.0 / config.overhead_tail_alpha)
    magnitude = np.minimum(np.rint(magnitude), MAX_SPIKE_NS).astype(np.int64)
    spike = np.where(spike_hit, magnitude, 0).astype(np.int64)
    return base, io, spike


def simulate_durations(config: SimConfig, task_index: int):
    """Durations of one task in emission order, plus its ground truth."""
    config.validate()
    base, io, spike = record_components(config, task_index, np.arange(config.records))
    truth = GroundTruth(
        task_id=task_id(task_index),
        injected_overhead_ns=int(sum(int(v) for v in spike)),
        base_sum_ns=int(sum(int(v) for v in base)),
        io_sum_ns=int(sum(int(v) for v in io)),
    )
    return base + io + spike, truth


def simulate_task(config: SimConfig, task_index: int):
    """Simulated samples of one task and the exact injected overhead."""
    durations, truth = simulate_durations(config, task_index)
    tid = task_id(task_index)
    samples = [
        RecordSample(config.job_id, tid, config.phase, i, int(d))
        for i, d in enumerate(durations)
    ]
    return samples, truth


def simulate_job_samples(config: SimConfig):
    samples, truths = [], []
    for ti in range(config.tasks):
        task_samples, truth = simulate_task(config, ti)
        samples.extend(task_samples)
        truths.append(truth)
    return samples, truths


def truth_payload(truths) -> list:
    return [asdict(t) for t in truths]


def simulate_job(config: SimConfig, out=None):
    """Simulate ``config.tasks`` tasks as one JSONL trace.

    Returns ``(trace_bytes, truths)``. When ``out`` is given the trace is
    written there and the ground truth to ``<out>.truth.json``.
    """
    config.validate()
    samples, truths = simulate_job_samples(config)
    data = serialize_trace(samples)
    if out is not None:
        out = Path(out)
        try:
            out.write_bytes(data)
            truth_path(out).write_text(json.dumps(truth_payload(truths), indent=2) + "\n")
        except OSError as exc:
            raise IoWriteFailure(str(exc)) from exc
    return data, truths


def truth_path(out) -> Path:
    out = Path(out)
    return out.with_name(out.name + ".truth.json")
