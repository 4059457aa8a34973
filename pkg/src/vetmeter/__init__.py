"""Measure how far record-oriented jobs are from their overhead-free running time."""

from .changepoint import estimate_changepoint, ols_line
from .ideal import estimate_ideal, g_hat
from .ingest import (
    TraceFileFormat,
    aggregate_units,
    build_ordered_trace,
    parse_trace,
    serialize_trace,
)
from .pipeline import analyze_samples
from .simulator import SimConfig, simulate_job, simulate_task
from .tail_stats import emplot_points, hill_curve, ks_two_sample
from .trace_model import (
    ChangePointFit,
    IdealEstimate,
    OrderedTaskTrace,
    RecordSample,
    VetReport,
)
from .vet import (
    bucket_distribution,
    parse_reports_json,
    render_report,
    render_reports,
    vet_job,
    vet_task,
)

__version__ = "0.1.0"
