"""Command line: ``noisyea {run,oracle,experiment,verify} ...``."""

from __future__ import annotations

import argparse
import math
import sys

from noisyea import engine, harness, oracle, verify
from noisyea.noise import NoiseSpec, SamplingSpec
from noisyea.problems import BitString, ProblemKind


def _noise(args, n: int) -> NoiseSpec:
    return NoiseSpec.parse(args.noise, n)


def cmd_run(args) -> int:
    config = engine.RunConfig(
        problem=ProblemKind.parse(args.problem),
        n=args.n,
        noise=_noise(args, args.n),
        sampling=SamplingSpec(args.m),
        max_evaluations=args.max_evaluations,
        seed=args.seed,
        hitting=engine.Hitting[args.hitting.upper()],
    )
    print(engine.run(config).to_line())
    return 0


def cmd_oracle(args) -> int:
    problem = ProblemKind.parse(args.problem)
    x = BitString.parse(args.x)
    noise = _noise(args, x.n)
    if args.what == "pmf":
        law = oracle.m_fold_sum_pmf(oracle.noisy_pmf(problem, x, noise), args.m)
        print("value,mass")
        for value, mass in enumerate(law.mass):
            print(f"{value},{mass:.17g}")
    elif args.what == "expect":
        print(f"expected={oracle.expected_noisy_fitness(problem, x, noise):.17g}")
    else:
        if args.offspring is None:
            raise ValueError("--offspring is required for 'accept'")
        y = BitString.parse(args.offspring)
        prob = oracle.sampled_acceptance_probability(problem, x, y, noise, args.m)
        print(f"acceptance={prob:.17g}")
    return 0


def cmd_experiment(args) -> int:
    overrides = {"output": args.out}
    if args.master_seed is not None:
        overrides["master_seed"] = str(args.master_seed)
    if args.runs is not None:
        overrides["runs_per_n"] = str(args.runs)
    config = harness.load_config(args.config, overrides)
    rows = harness.run_experiment(config, workers=args.workers)
    if config.output is None:
        sys.stdout.write(harness.format_csv(rows))
    return 0


def cmd_verify(args) -> int:
    import numpy as np

    n = args.n
    noise = _noise(args, n)
    if args.check == "lemma4":
        reports = [verify.check_lemma4(n, noise, args.m, args.c, args.l)]
    elif args.check == "lemma5":
        reports = [verify.check_lemma5(n, noise, args.m, args.c, args.l)]
    elif args.check == "gap":
        gap = verify.sampling_gap(n, noise)
        reports = [verify.ConditionReport(
            "gap", n, {"noise": str(noise), "gap": f"{gap:.17g}"}, bool(gap > 0),
            "min over j<=k<n", float(gap))]
    elif args.check == "forms":
        reports = verify.verify_closed_forms(n)
    else:
        rng = np.random.default_rng(np.random.SeedSequence(args.seed))
        drift, ci = verify.empirical_drift(
            ProblemKind.parse(args.problem), n, noise, args.m, args.level, args.trials, rng)
        reports = [verify.ConditionReport(
            "drift", n,
            {"noise": str(noise), "m": args.m, "level": args.level, "trials": args.trials,
             "seed": args.seed, "drift": f"{drift:.17g}", "ci95": f"{ci:.17g}"},
            bool(drift - ci > 0), "drift minus ci95", float(drift - ci))]
    for report in reports:
        print(report.to_line())
    return 0 if all(r.satisfied for r in reports) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="noisyea", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="one (1+1)-EA run, printed as key=value")
    p.add_argument("--problem", default="onemax")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--noise", default="none", help="none | onebit:p=P | bitwise:p=P,q=Q (Q may be 1/n)")
    p.add_argument("--m", type=int, default=1, help="sample size")
    p.add_argument("--max-evaluations", type=lambda s: int(float(s)),
                   default=engine.DEFAULT_MAX_EVALUATIONS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--hitting", choices=["state", "evaluation"], default="state")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("oracle", help="exact laws and acceptance probabilities")
    p.add_argument("what", choices=["pmf", "expect", "accept"])
    p.add_argument("--problem", default="onemax")
    p.add_argument("--x", required=True, help="bit string (parent for 'accept')")
    p.add_argument("--offspring")
    p.add_argument("--noise", default="none")
    p.add_argument("--m", type=int, default=1)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("experiment", help="n-grid sweep from a key=value config file")
    p.add_argument("--config", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="CSV path (overrides the config's output)")
    p.add_argument("--master-seed", type=int)
    p.add_argument("--runs", type=int, help="override runs_per_n")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("verify", help="check hypotheses and closed forms; exit 1 on failure")
    p.add_argument("--check", required=True, choices=["lemma4", "lemma5", "gap", "forms", "drift"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--noise", default="none")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--c", type=float, default=1 / 15)
    p.add_argument("--l", type=float, default=None, help="default: n/2 (lemma4) or n/4 (lemma5)")
    p.add_argument("--problem", default="onemax")
    p.add_argument("--level", type=int, default=1)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "l", "unset") is None:
        args.l = args.n / 2 if args.check == "lemma4" else args.n / 4
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError) as e:
        print(f"noisyea: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
