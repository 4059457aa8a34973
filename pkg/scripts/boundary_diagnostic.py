"""Where the change point lands versus where the injected spikes start.

For each task, prints the fitted split, the rank of the first unit that
carries a spike, and the OC obtained if the split sat at that boundary.
"""

import argparse

import numpy as np

from vetmeter.changepoint import estimate_changepoint
from vetmeter.ideal import estimate_ideal
from vetmeter.ingest import aggregate_units, build_ordered_trace
from vetmeter.simulator import SimConfig, record_components, simulate_task
from vetmeter.trace_model import ChangePointFit


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--unit", type=int, default=5)
    args = ap.parse_args()
    config = SimConfig(seed=args.seed)
    for i in range(config.tasks):
        samples, truth = simulate_task(config, i)
        units = aggregate_units(samples, args.unit)
        trace = build_ordered_trace(units, args.unit)
        fit = estimate_changepoint(trace)
        est = estimate_ideal(trace, fit)
        spikes = record_components(config, i, np.arange(config.records))[2]
        unit_spike = np.add.reduceat(spikes, np.arange(0, spikes.size, args.unit)) > 0
        boundary = trace.n - int(unit_spike.sum())
        at_boundary = estimate_ideal(trace, ChangePointFit(boundary, (0.0, 0.0), (0.0, 0.0), 0.0, 3))
        print(f"{truth.task_id}: n={trace.n} t_hat={fit.t_hat} boundary={boundary} "
              f"injected={truth.injected_overhead_ns / 1e6:.1f}ms oc={est.oc / 1e6:.1f}ms "
              f"oc@boundary={at_boundary.oc / 1e6:.1f}ms")


if __name__ == "__main__":
    main()
