"""Compare estimated OC with the overhead injected by the simulator.

    python3 scripts/overhead_recovery.py --seeds 20 --records 2000
"""

import argparse
import math

import numpy as np

from vetmeter.pipeline import analyze_samples
from vetmeter.simulator import SimConfig, simulate_job_samples


def relative_errors(seeds, **overrides):
    out = []
    for seed in seeds:
        samples, truths = simulate_job_samples(SimConfig(seed=seed, **overrides))
        (report,) = analyze_samples(samples, buckets=0, threads=1)
        injected = sum(t.injected_overhead_ns for t in truths)
        oc = math.fsum(s.oc for s in report.per_task)
        out.append((seed, injected, oc, abs(oc - injected) / injected))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--records", type=int, default=2000)
    ap.add_argument("--alpha", type=float, nargs="*", default=[1.3])
    args = ap.parse_args()
    for alpha in args.alpha:
        rows = relative_errors(range(args.seeds), records=args.records, overhead_tail_alpha=alpha)
        print(f"alpha={alpha}")
        for seed, injected, oc, err in rows:
            print(f"  seed={seed:3d} injected={injected / 1e9:10.4f}s oc={oc / 1e9:10.4f}s rel_err={err:.3f}")
        print(f"  median rel_err={np.median([r[3] for r in rows]):.3f}")


if __name__ == "__main__":
    main()
