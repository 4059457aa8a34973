import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vetmeter import rng as crng
from vetmeter.errors import InvalidConfig
from vetmeter.ingest import parse_trace
from vetmeter.pipeline import analyze_samples, analyze_task
from vetmeter.simulator import (
    SimConfig,
    record_components,
    simulate_durations,
    simulate_job,
    simulate_task,
    truth_path,
)
from vetmeter.tail_stats import hill_curve
from vetmeter.trace_model import OrderedTaskTrace


def test_counter_draws_are_reproducible_in_isolation():
    full = crng.uniforms(7, 3, 0, np.arange(1000))
    assert crng.uniforms(7, 3, 0, [417])[0] == full[417]
    assert np.all((full > 0) & (full < 1))
    assert not np.array_equal(full, crng.uniforms(7, 4, 0, np.arange(1000)))
    assert not np.array_equal(full, crng.uniforms(8, 3, 0, np.arange(1000)))


def test_uniforms_look_uniform():
    u = crng.uniforms(1, 0, 0, np.arange(200_000))
    counts, _ = np.histogram(u, bins=20, range=(0, 1))
    assert np.all(np.abs(counts - 10_000) < 500)
    assert abs(u.mean() - 0.5) < 0.003


def test_negative_seed_accepted():
    d1, _ = simulate_durations(SimConfig(records=50, seed=-5), 0)
    d2, _ = simulate_durations(SimConfig(records=50, seed=-5), 0)
    assert np.array_equal(d1, d2)


def test_ideal_scenario_end_to_end():
    cfg = SimConfig(records=500, overhead_fraction=0, io_fraction=0, jitter_fraction=0)
    samples, truth = simulate_task(cfg, 0)
    assert {s.duration for s in samples} == {cfg.base_cpu_ns}
    assert truth.injected_overhead_ns == 0
    assert analyze_task(samples).score.vet_task == 1.0


def test_same_seed_same_trace():
    cfg = SimConfig(records=300)
    assert simulate_task(cfg, 2) == simulate_task(cfg, 2)
    assert simulate_job(cfg)[0] == simulate_job(cfg)[0]


def test_categories_and_conservation():
    cfg = SimConfig(records=5000, jitter_fraction=0.1)
    base, io, spike = record_components(cfg, 0, np.arange(cfg.records))
    durations, truth = simulate_durations(cfg, 0)
    assert np.array_equal(durations, base + io + spike)
    assert truth.total_ns == int(durations.sum())
    assert truth.injected_overhead_ns == int(spike.sum())
    assert np.all(np.abs(base - cfg.base_cpu_ns) <= cfg.jitter_fraction * cfg.base_cpu_ns + 1)
    assert set(np.unique(io)) == {0, cfg.io_cost_ns}
    assert abs((io > 0).mean() - cfg.io_fraction) < 0.02
    assert abs((spike > 0).mean() - cfg.overhead_fraction) < 0.015
    assert spike[spike > 0].min() >= cfg.overhead_scale_ns


def test_spikes_nest_as_fraction_grows():
    lo = record_components(SimConfig(records=3000, overhead_fraction=0.02), 1, np.arange(3000))[2]
    hi = record_components(SimConfig(records=3000, overhead_fraction=0.10), 1, np.arange(3000))[2]
    hit = lo > 0
    assert np.array_equal(lo[hit], hi[hit])
    assert (hi > 0).sum() > hit.sum()


def test_default_trace_is_heavy_tailed():
    cfg = SimConfig(records=100_000)
    durations, truth = simulate_durations(cfg, 0)
    tr = OrderedTaskTrace("t", "read-map", np.sort(durations))
    # read alpha inside the spike population (top 1%)
    curve = hill_curve(tr, 1000, k_summary=1000)
    assert 1.1 <= curve.summary_alpha <= 1.5
    top = np.sort(durations)[-int(0.01 * durations.size):]
    assert top.sum() > 0.5 * durations.sum()


@pytest.mark.parametrize("field, value", [
    ("records", 0), ("tasks", 0), ("base_cpu_ns", 0), ("jitter_fraction", 1.0),
    ("io_fraction", 1.5), ("overhead_fraction", -0.1), ("overhead_tail_alpha", 0.0),
    ("overhead_scale_ns", 0), ("io_cost_ns", 0),
])
def test_invalid_config(field, value):
    with pytest.raises(InvalidConfig):
        SimConfig(**{field: value}).validate()


def test_simulate_job_files(tmp_path):
    cfg = SimConfig(records=1000, tasks=4, seed=3)
    out = tmp_path / "trace.jsonl"
    data, truths = simulate_job(cfg, out)
    assert out.read_bytes() == data
    samples = parse_trace(data)
    assert len(samples) == 4000
    truth = json.loads(truth_path(out).read_text())
    assert [t["task_id"] for t in truth] == ["m_0000", "m_0001", "m_0002", "m_0003"]
    for row in truth:
        assert set(row) >= {"task_id", "injected_overhead_ns", "base_sum_ns"}
        task_total = sum(s.duration for s in samples if s.task_id == row["task_id"])
        assert task_total == row["base_sum_ns"] + row["io_sum_ns"] + row["injected_overhead_ns"]
    for row, (_, t) in zip(truth, (simulate_durations(cfg, i) for i in range(4))):
        assert row["injected_overhead_ns"] == t.injected_overhead_ns


@given(st.integers(-(2**63), 2**64 - 1), st.integers(0, 50))
def test_determinism_property(seed, task):
    cfg = SimConfig(records=20, seed=seed)
    a, ta = simulate_durations(cfg, task)
    b, tb = simulate_durations(cfg, task)
    assert np.array_equal(a, b) and ta == tb


def test_analysis_of_simulated_job_names_every_task():
    cfg = SimConfig(records=400, tasks=3)
    samples = parse_trace(simulate_job(cfg)[0])
    (report,) = analyze_samples(samples, buckets=10, threads=2)
    assert [s.task_id for s in report.per_task] == ["m_0000", "m_0001", "m_0002"]
    assert all(len(v) == 10 for v in report.distributions.values())
    assert all(s.vet_task >= 1.0 for s in report.per_task)
