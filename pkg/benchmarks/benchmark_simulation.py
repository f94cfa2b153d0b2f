"""Benchmark the compiled Monte Carlo kernel against the pure-Python twin.

Runs identical trial batches through every available backend, times them,
verifies the results are bit-identical, and prints a small table with the
speedup. Exits non-zero if the backends disagree in any bit.

Usage:
    python3 benchmarks/benchmark_simulation.py [--trials N] [--seed S]
"""

from __future__ import annotations

import argparse
import sys
import time

from mttdl.markov_core import FailureModel
from mttdl.montecarlo import SimConfig, available_backends, simulate_mttdl

# Failure and repair rates of comparable size keep the expected number of
# events per trial small, so the benchmark measures kernel throughput rather
# than one astronomically reliable array.
CASES = (
    (
        "single parity, 3 disks",
        FailureModel(3, 2, (0.01, 0.02), (0.5,)),
    ),
    (
        "triple parity, 12 disks",
        FailureModel(
            12,
            9,
            (0.05, 0.08, 0.12, 0.2),
            (0.6, 0.5, 0.4),
        ),
    ),
    (
        "quad parity, 16 disks, direct-loss rates",
        FailureModel(
            16,
            12,
            (0.04, 0.06, 0.09, 0.14, 0.2),
            (0.5, 0.4, 0.3, 0.2),
            (0.01, 0.01, 0.01, 0.01),
        ),
    ),
)


def run_case(name: str, model: FailureModel, config: SimConfig) -> bool:
    timings: dict[str, float] = {}
    results = {}
    for backend in available_backends():
        started = time.perf_counter()
        results[backend] = simulate_mttdl(model, config, backend=backend)
        timings[backend] = time.perf_counter() - started

    print(f"\n{name} ({config.trials} trials, seed {config.seed})")
    reference = None
    agree = True
    for backend, result in results.items():
        rate = config.trials / timings[backend]
        print(
            f"  {backend:>8}: {timings[backend]:8.3f} s "
            f"({rate:12,.0f} trials/s)  mean={result.mean_hours!r}"
        )
        if reference is None:
            reference = result
        else:
            agree = (
                result.mean_hours == reference.mean_hours
                and result.stderr_hours == reference.stderr_hours
                and result.trials_completed == reference.trials_completed
                and result.trials_truncated == reference.trials_truncated
            )
    if len(results) > 1:
        ordered = sorted(timings.values())
        print(f"  speedup: {ordered[-1] / ordered[0]:.1f}x")
        print(f"  bit-identical: {'yes' if agree else 'NO'}")
    return agree


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=200_000)
    parser.add_argument("--seed", type=int, default=2026)
    args = parser.parse_args(argv)

    backends = available_backends()
    print(f"available backends: {', '.join(backends)}")
    if len(backends) == 1:
        print("compiled kernel not built; timing the fallback only")

    config = SimConfig(trials=args.trials, seed=args.seed)
    all_agree = True
    for name, model in CASES:
        all_agree &= run_case(name, model, config)

    if not all_agree:
        print("\nERROR: backends disagree", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
