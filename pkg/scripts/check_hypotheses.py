"""Print hypothesis-check reports for OneMax across n and a few noise levels.

Usage:
    python3 scripts/check_hypotheses.py [--n 32 64 100] [--m 1]

For every n this prints the upper-bound check (c = 1/15, l = min(30 ln n, n/2)),
the lower-bound check (c = 16, l = max(1, n/128)), and the sampling gap.
"""

import argparse
import math

from noisyea.noise import NoiseSpec
from noisyea.verify import check_lemma4, check_lemma5, sampling_gap


def noises(n):
    return {
        "bitwise(ln n/n, 1/n)": NoiseSpec.bitwise(math.log(n) / n, 1 / n),
        "onebit(ln n/n)": NoiseSpec.onebit(math.log(n) / n),
        "onebit(1)": NoiseSpec.onebit(1.0),
        "bitwise(1, 1/2)": NoiseSpec.bitwise(1.0, 0.5),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, nargs="+", default=[32, 64, 100, 128])
    parser.add_argument("--m", type=int, default=1)
    args = parser.parse_args()
    for n in args.n:
        for label, noise in noises(n).items():
            upper = check_lemma4(n, noise, args.m, 1 / 15, min(30 * math.log(n), n / 2))
            lower = check_lemma5(n, noise, args.m, 16, max(1.0, n / 128))
            print(f"n={n:4d} {label:22s} upper={upper.satisfied!s:5s} ({upper.margin:+.4f})"
                  f"  lower={lower.satisfied!s:5s} ({lower.margin:+.4f})"
                  f"  gap={sampling_gap(n, noise):+.4f}")


if __name__ == "__main__":
    main()
