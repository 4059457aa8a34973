"""Trace file parsing, unit aggregation and order-statistic construction.

Two on-disk formats are accepted:

* JSONL, one object per line with exactly the keys
  ``job, task, phase, seq, duration_ns``;
* CSV with the header ``job,task,phase,seq,duration_ns``. Ids are restricted
  to ``[A-Za-z0-9_.-]`` so no quoting is ever needed.
"""

from __future__ import annotations

import enum
import io
import json
import re
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DuplicateKey,
    EmptyTrace,
    MalformedLine,
    NegativeDuration,
    ZeroUnitSize,
)
from .trace_model import OrderedTaskTrace, RecordSample

CSV_HEADER = ("job", "task", "phase", "seq", "duration_ns")
JSON_KEYS = frozenset(CSV_HEADER)
_ID_RE = re.compile(r"^[A-Za-z0-9_.-]+$")


class TraceFileFormat(str, enum.Enum):
    JSONL = "jsonl"
    CSV = "csv"


def _as_text_lines(data) -> Iterable[str]:
    if isinstance(data, (bytes, bytearray)):
        data = data.decode("utf-8")
    if isinstance(data, str):
        return data.splitlines()
    if isinstance(data, io.TextIOBase):
        return (line.rstrip("\r\n") for line in data)
    # binary stream or any iterable of lines
    return (
        (line.decode("utf-8") if isinstance(line, (bytes, bytearray)) else line).rstrip("\r\n")
        for line in data
    )


def _strict_int(value, line_no, name):
    if isinstance(value, bool) or not isinstance(value, int):
        raise MalformedLine(line_no, f"{name} must be an integer, got {value!r}")
    return value


def _parse_jsonl_line(line, line_no):
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedLine(line_no, f"invalid JSON ({exc.msg})") from None
    if not isinstance(obj, dict):
        raise MalformedLine(line_no, "expected a JSON object")
    keys = set(obj)
    if keys != JSON_KEYS:
        missing = sorted(JSON_KEYS - keys)
        extra = sorted(keys - JSON_KEYS)
        raise MalformedLine(line_no, f"missing keys {missing}, unexpected keys {extra}")
    for name in ("job", "task", "phase"):
        if not isinstance(obj[name], str) or not obj[name]:
            raise MalformedLine(line_no, f"{name} must be a non-empty string")
    seq = _strict_int(obj["seq"], line_no, "seq")
    duration = _strict_int(obj["duration_ns"], line_no, "duration_ns")
    return obj["job"], obj["task"], obj["phase"], seq, duration


def _parse_csv_row(line, line_no):
    fields = line.split(",")
    if len(fields) != len(CSV_HEADER):
        raise MalformedLine(line_no, f"expected {len(CSV_HEADER)} columns, got {len(fields)}")
    job, task, phase, seq_s, dur_s = (f.strip() for f in fields)
    for name, value in (("job", job), ("task", task)):
        if not _ID_RE.match(value):
            raise MalformedLine(line_no, f"invalid {name} id {value!r}")
    if not phase:
        raise MalformedLine(line_no, "empty phase")
    try:
        seq = int(seq_s)
        duration = int(dur_s)
    except ValueError:
        raise MalformedLine(line_no, "seq and duration_ns must be integers") from None
    return job, task, phase, seq, duration


def parse_trace(data, fmt=TraceFileFormat.JSONL) -> list[RecordSample]:
    """Parse a trace into samples, in file order.

    ``data`` may be bytes, str, a text/binary stream or an iterable of lines.
    Errors carry the 1-based line number (the CSV header is line 1).
    """
    fmt = TraceFileFormat(fmt)
    samples = []
    seen = set()
    lines = iter(_as_text_lines(data))
    line_no = 0
    if fmt is TraceFileFormat.CSV:
        header = next(lines, None)
        line_no = 1
        if header is None or tuple(h.strip() for h in header.split(",")) != CSV_HEADER:
            raise MalformedLine(1, f"CSV header must be {','.join(CSV_HEADER)}")
        parse_line = _parse_csv_row
    else:
        parse_line = _parse_jsonl_line
    for line in lines:
        line_no += 1
        if not line.strip():
            continue
        job, task, phase, seq, duration = parse_line(line, line_no)
        if seq < 0:
            raise MalformedLine(line_no, f"seq must be non-negative, got {seq}")
        if duration < 0:
            raise NegativeDuration(line_no, duration)
        key = (job, task, phase, seq)
        if key in seen:
            raise DuplicateKey(key, line_no)
        seen.add(key)
        samples.append(RecordSample(job, task, phase, seq, duration))
    return samples


def serialize_trace(samples: Iterable[RecordSample], fmt=TraceFileFormat.JSONL) -> bytes:
    fmt = TraceFileFormat(fmt)
    out = []
    if fmt is TraceFileFormat.CSV:
        out.append(",".join(CSV_HEADER))
        for s in samples:
            for value in (s.job_id, s.task_id):
                if not _ID_RE.match(value):
                    raise ValueError(f"id {value!r} cannot be written to CSV")
            if "," in s.phase:
                raise ValueError(f"phase {s.phase!r} cannot be written to CSV")
            out.append(f"{s.job_id},{s.task_id},{s.phase},{s.seq},{s.duration}")
    else:
        for s in samples:
            out.append(
                json.dumps(
                    {"job": s.job_id, "task": s.task_id, "phase": s.phase,
                     "seq": s.seq, "duration_ns": s.duration},
                    separators=(",", ":"),
                )
            )
    return ("\n".join(out) + "\n").encode("utf-8") if out else b""


def aggregate_units(samples: Sequence[RecordSample], unit_size: int) -> list[RecordSample]:
    """Sum consecutive groups of ``unit_size`` samples into one sample each.

    A trailing partial group is kept as its own unit so total time is conserved.
    """
    if unit_size < 1:
        raise ZeroUnitSize(f"unit_size must be positive, got {unit_size}")
    if unit_size == 1:
        return [
            RecordSample(s.job_id, s.task_id, s.phase, i, s.duration)
            for i, s in enumerate(samples)
        ]
    units = []
    for start in range(0, len(samples), unit_size):
        group = samples[start:start + unit_size]
        head = group[0]
        units.append(
            RecordSample(head.job_id, head.task_id, head.phase, len(units),
                         sum(s.duration for s in group))
        )
    return units


def build_ordered_trace(samples: Sequence[RecordSample], unit_size: int = 1) -> OrderedTaskTrace:
    if not samples:
        raise EmptyTrace("cannot order an empty set of samples")
    head = samples[0]
    y = np.sort(np.fromiter((s.duration for s in samples), dtype=np.int64, count=len(samples)))
    return OrderedTaskTrace(head.task_id, head.phase, y, unit_size)


def group_samples(samples: Iterable[RecordSample], phase: str | None = None) -> dict:
    """Group samples by ``(job_id, task_id, phase)``, each group sorted by seq."""
    groups: dict = {}
    for s in samples:
        if phase is not None and s.phase != phase:
            continue
        groups.setdefault((s.job_id, s.task_id, s.phase), []).append(s)
    for group in groups.values():
        group.sort(key=lambda s: s.seq)
    return groups
