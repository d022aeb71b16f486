"""Run the three LeadingOnes noise sweeps and report the ln(mean)/ln(n) trend.

Usage:
    python3 scripts/replicate_trends.py [--workers 8] [--runs 200] [--out results/]

Each sweep writes a CSV and prints one line per n plus the number of adjacent
inversions in the normalized column (a steadily growing exponent shows up as
an increasing column).
"""

import argparse
import time
from pathlib import Path

from noisyea.harness import load_config, run_experiment

HERE = Path(__file__).resolve().parent
CONFIGS = [
    "lo_bitwise_logn_over_n.cfg",
    "lo_bitwise_p1_q_logn_over_n2.cfg",
    "lo_onebit_logn_over_n.cfg",
]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--workers", type=int, default=8)
    parser.add_argument("--runs", type=int, default=None, help="override runs per n")
    parser.add_argument("--out", type=Path, default=Path("results"))
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    for name in CONFIGS:
        overrides = {"output": str(args.out / name.replace(".cfg", ".csv"))}
        if args.runs is not None:
            overrides["runs_per_n"] = str(args.runs)
        config = load_config(HERE / "configs" / name, overrides)
        start = time.perf_counter()
        rows = run_experiment(config, workers=args.workers)
        print(f"# {name}  ({time.perf_counter() - start:.1f}s, csv: {config.output})")
        for row in rows:
            print(f"  n={row.n:4d}  mean={row.mean_evals:12.1f}  censored={row.censored:3d}"
                  f"  normalized={row.normalized:.4f}")
        norm = [r.normalized for r in rows]
        inversions = sum(b <= a for a, b in zip(norm, norm[1:]))
        print(f"  adjacent inversions: {inversions}")


if __name__ == "__main__":
    main()
