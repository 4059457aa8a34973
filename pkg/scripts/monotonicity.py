"""vet_job as the simulated overhead fraction grows, per seed.

    python3 scripts/monotonicity.py --seeds 20
"""

import argparse

from vetmeter.pipeline import analyze_samples
from vetmeter.simulator import SimConfig, simulate_job_samples

FRACTIONS = (0.0, 0.02, 0.05, 0.10)


def vet_curve(seed, fractions=FRACTIONS, **overrides):
    vets = []
    for f in fractions:
        samples, _ = simulate_job_samples(SimConfig(seed=seed, overhead_fraction=f, **overrides))
        (report,) = analyze_samples(samples, buckets=0, threads=1)
        vets.append(report.vet_job)
    return vets


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--records", type=int, default=2000)
    args = ap.parse_args()
    print("seed " + " ".join(f"{f:>8}" for f in FRACTIONS) + "  monotone")
    ok = 0
    for seed in range(args.seeds):
        vets = vet_curve(seed, records=args.records)
        mono = all(a < b for a, b in zip(vets, vets[1:]))
        ok += mono
        print(f"{seed:4d} " + " ".join(f"{v:8.3f}" for v in vets) + f"  {mono}")
    print(f"{ok}/{args.seeds} seeds strictly increasing")


if __name__ == "__main__":
    main()
