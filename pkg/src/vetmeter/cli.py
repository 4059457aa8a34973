"""Command-line entry point.

Exit codes: 0 success, 1 fatal error, 2 partial result (excluded tasks or a
degenerate tail), 3 KS test rejects sameness of the two populations.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import simulator
from .changepoint import DEFAULT_OMEGA, MIN_OMEGA
from .errors import DegenerateTail, EmptySample, VetmeterError
from .ingest import TraceFileFormat, aggregate_units, build_ordered_trace, group_samples, parse_trace
from .pipeline import DEFAULT_UNIT, analyze_samples
from .tail_stats import curve_csv, emplot_points, hill_curve, ks_two_sample
from .trace_model import DEFAULT_PHASE, RecordSample
from .vet import DEFAULT_BUCKETS, REPORT_FORMATS, read_vet_values, render_reports

EXIT_OK, EXIT_FATAL, EXIT_PARTIAL, EXIT_KS_REJECT = 0, 1, 2, 3
MAX_DEFAULT_KMAX = 10_000


def _err(msg):
    print(f"vetmeter: {msg}", file=sys.stderr)


def _emit(data: bytes, out):
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.write(data.decode("utf-8"))
        sys.stdout.flush()


def _load(path, fmt):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise VetmeterError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return parse_trace(data, fmt)
    except UnicodeDecodeError as exc:
        raise VetmeterError(f"{path}: not valid UTF-8 ({exc.reason})") from exc
    except VetmeterError as exc:
        exc.args = (f"{path}: {exc}",)
        raise


def cmd_analyze(args) -> int:
    if args.omega < MIN_OMEGA:
        _err(f"--omega must be >= {MIN_OMEGA}")
        return EXIT_FATAL
    if args.unit < 1 or args.buckets < 0:
        _err("--unit must be >= 1 and --buckets >= 0")
        return EXIT_FATAL
    samples = _load(args.input, args.format)
    reports = analyze_samples(
        samples, phase=args.phase, unit_size=args.unit, omega=args.omega, buckets=args.buckets
    )
    if not reports:
        _err(f"no samples for phase {args.phase!r} in {args.input}")
        return EXIT_FATAL
    _emit(render_reports(reports, args.report), args.out)
    excluded = sum(len(r.excluded_tasks) for r in reports)
    if excluded:
        _err(f"{excluded} task(s) excluded; see report")
        return EXIT_PARTIAL
    return EXIT_OK


def _sim_config(args) -> simulator.SimConfig:
    return simulator.SimConfig(
        records=args.records,
        tasks=args.tasks,
        base_cpu_ns=args.base_ns,
        jitter_fraction=args.jitter,
        io_fraction=args.io_fraction,
        io_cost_ns=args.io_ns,
        overhead_fraction=args.overhead_fraction,
        overhead_tail_alpha=args.alpha,
        overhead_scale_ns=args.overhead_scale_ns,
        seed=args.seed,
    )


def cmd_simulate(args) -> int:
    config = _sim_config(args).validate()
    simulator.simulate_job(config, args.out)
    print(f"wrote {config.records * config.tasks} records to {args.out} "
          f"(truth: {simulator.truth_path(args.out)})", file=sys.stderr)
    return EXIT_OK


def _tail_trace(args):
    samples = _load(args.input, args.format)
    groups = group_samples(samples, args.phase)
    units = []
    for (_, task, _), group in sorted(groups.items()):
        if args.task is None or task == args.task:
            units.extend(aggregate_units(group, args.unit))
    if not units:
        raise EmptySample(f"no samples for phase {args.phase!r}"
                          + (f" and task {args.task!r}" if args.task else ""))
    zeros = sum(1 for u in units if u.duration == 0)
    if zeros:
        _err(f"warning: ignoring {zeros} zero-duration unit(s) for tail statistics")
    positive = [u for u in units if u.duration > 0]
    if not positive:
        raise EmptySample("no positive durations left")
    head = positive[0]
    pooled = [RecordSample(head.job_id, args.task or "*", head.phase, i, u.duration)
              for i, u in enumerate(positive)]
    return build_ordered_trace(pooled, args.unit)


def cmd_tail(args) -> int:
    trace = _tail_trace(args)
    show_hill = args.hill or not args.emplot
    show_emplot = args.emplot or not args.hill
    chunks = []
    if show_hill:
        if trace.n < 2:
            _err("need at least two positive durations for a Hill plot")
            return EXIT_PARTIAL
        k_max = args.kmax if args.kmax is not None else min(trace.n - 1, MAX_DEFAULT_KMAX)
        try:
            curve = hill_curve(trace, k_max, args.k_summary)
        except DegenerateTail as exc:
            _err(f"DegenerateTail: {exc}")
            return EXIT_PARTIAL
        text = curve_csv(("k", "alpha"), curve.points)
        if args.hill_out:
            Path(args.hill_out).write_text(text)
        else:
            chunks.append(text)
        print(f"summary_alpha={curve.summary_alpha:.4f} hill={curve.summary_hill:.6f} "
              f"k={curve.k_summary} n={trace.n}", file=sys.stderr)
    if show_emplot:
        pts = emplot_points(trace)
        text = curve_csv(("log_x", "log_p"), pts.tolist())
        if args.emplot_out:
            Path(args.emplot_out).write_text(text)
        else:
            chunks.append(text)
    if chunks:
        sys.stdout.write("\n".join(chunks))
    return EXIT_OK


def cmd_ks(args) -> int:
    values = []
    for path in (args.a, args.b):
        try:
            values.append(read_vet_values(Path(path).read_text()))
        except (OSError, ValueError) as exc:
            _err(f"{path}: {exc}")
            return EXIT_FATAL
    result = ks_two_sample(*values)
    print(f"d={result.d_statistic:.6f} p={result.p_value:.6f} n1={result.n1} n2={result.n2}")
    return EXIT_OK if result.p_value >= args.alpha_level else EXIT_KS_REJECT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vetmeter",
        description="Estimate ideal running time and overhead of record-oriented jobs "
                    "from per-record duration traces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fmt_choices = [f.value for f in TraceFileFormat]

    p = sub.add_parser("analyze", help="EI/OC decomposition and vet scores per task and job")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=fmt_choices, default="jsonl")
    p.add_argument("--phase", default=DEFAULT_PHASE)
    p.add_argument("--unit", type=int, default=DEFAULT_UNIT, help="records per unit (default 5)")
    p.add_argument("--omega", type=int, default=DEFAULT_OMEGA, help="probing window (default 3)")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--report", choices=REPORT_FORMATS, default="table")
    p.add_argument("--buckets", type=int, default=DEFAULT_BUCKETS,
                   help="buckets per task distribution in JSON reports (0 disables)")
    p.set_defaults(func=cmd_analyze)

    defaults = simulator.SimConfig()
    p = sub.add_parser("simulate", help="write a synthetic JSONL trace plus ground truth")
    p.add_argument("--records", type=int, default=defaults.records)
    p.add_argument("--tasks", type=int, default=defaults.tasks)
    p.add_argument("--base-ns", type=int, default=defaults.base_cpu_ns)
    p.add_argument("--jitter", type=float, default=defaults.jitter_fraction)
    p.add_argument("--io-fraction", type=float, default=defaults.io_fraction)
    p.add_argument("--io-ns", type=int, default=defaults.io_cost_ns)
    p.add_argument("--overhead-fraction", type=float, default=defaults.overhead_fraction)
    p.add_argument("--alpha", type=float, default=defaults.overhead_tail_alpha)
    p.add_argument("--overhead-scale-ns", type=int, default=defaults.overhead_scale_ns)
    p.add_argument("--seed", type=int, default=defaults.seed)
    p.add_argument("--out", default="sim_trace.jsonl")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("tail", help="Hill plot and emplot data as CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=fmt_choices, default="jsonl")
    p.add_argument("--phase", default=DEFAULT_PHASE)
    p.add_argument("--task", help="restrict to one task (default: pool all tasks)")
    p.add_argument("--unit", type=int, default=1)
    p.add_argument("--kmax", type=int)
    p.add_argument("--k-summary", type=int, help="k at which alpha is read (default 5%% of n)")
    p.add_argument("--hill", action="store_true")
    p.add_argument("--emplot", action="store_true")
    p.add_argument("--hill-out")
    p.add_argument("--emplot-out")
    p.set_defaults(func=cmd_tail)

    p = sub.add_parser("ks", help="two-sample KS test on vet_task values")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--alpha-level", type=float, default=0.05)
    p.set_defaults(func=cmd_ks)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except VetmeterError as exc:
        _err(f"{type(exc).__name__}: {exc}")
        return EXIT_FATAL
    except OSError as exc:
        _err(str(exc))
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
