"""The (1+1)-EA with reevaluation and optional sampling.

Each iteration mutates the parent, evaluates the offspring and re-evaluates the
parent with fresh noise (m samples each), and keeps the offspring when its
sampled mean is at least the parent's. Running time is counted in fitness
evaluations: ``m`` for the initial solution plus ``2m`` per iteration.
"""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass, field

import numpy as np

from noisyea import _kernels
from noisyea.noise import NoiseSpec, SamplingSpec
from noisyea.problems import BitString, ProblemKind

DEFAULT_MAX_EVALUATIONS = 10**7


class Hitting(enum.Enum):
    """When a run counts as having found the optimum.

    ``STATE``: the maintained solution (after selection) is 1^n.
    ``EVALUATION``: additionally, an evaluated offspring equal to 1^n counts
    even if selection rejects it.
    """

    STATE = _kernels.HIT_STATE
    EVALUATION = _kernels.HIT_EVALUATION


def make_rng(seed: int) -> np.random.Generator:
    """The PCG64 stream used for a run with the given 64-bit seed."""
    return np.random.default_rng(np.random.SeedSequence(int(seed)))


def derive_seed(master_seed: int, n: int, run_index: int) -> int:
    """Per-run seed: first 64-bit word of ``SeedSequence([master_seed, n, run_index])``."""
    ss = np.random.SeedSequence([int(master_seed), int(n), int(run_index)])
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class RunConfig:
    problem: ProblemKind
    n: int
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    sampling: SamplingSpec = field(default_factory=SamplingSpec)
    max_evaluations: int = DEFAULT_MAX_EVALUATIONS
    seed: int = 0
    hitting: Hitting = Hitting.STATE

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.max_evaluations < self.sampling.m:
            raise ValueError("max_evaluations must leave room for the initial evaluation")


@dataclass(frozen=True)
class RunResult:
    iterations: int
    evaluations: int
    hit: bool
    censored: bool
    final_true_fitness: int
    seed: int

    def to_line(self) -> str:
        parts = []
        for key, value in asdict(self).items():
            if isinstance(value, bool):
                value = str(value).lower()
            parts.append(f"{key}={value}")
        return " ".join(parts)


def mutate(x: BitString, rng: np.random.Generator) -> BitString:
    """Standard bit mutation: flip each bit independently with probability 1/n."""
    out = np.empty(x.n, np.uint8)
    _kernels.mutate_into(x.bits, out, rng)
    return BitString(out)


def accept(parent_sum: int, offspring_sum: int, m_parent: int, m_offspring: int) -> bool:
    """Keep the offspring iff its sampled mean is >= the parent's (ties go to the offspring)."""
    return offspring_sum * m_parent >= parent_sum * m_offspring


def _kernel_args(config: RunConfig):
    return (
        config.problem.value,
        config.n,
        config.noise.kind.value,
        config.noise.p,
        config.noise.q,
        config.sampling.m,
        config.max_evaluations,
        config.hitting.value,
    )


_NO_TRACE = np.empty(0, np.int64)


def run(config: RunConfig) -> RunResult:
    """Run the EA once; identical configs (seed included) give identical results."""
    rng = make_rng(config.seed)
    it, ev, hit, cens, fit = _kernels.run_kernel(*_kernel_args(config), rng, _NO_TRACE)
    return RunResult(int(it), int(ev), bool(hit), bool(cens), int(fit), config.seed)


def trace_run(config: RunConfig, max_iterations: int) -> tuple[RunResult, np.ndarray]:
    """Like :func:`run` but also return the true fitness after each iteration.

    The trace covers at most ``max_iterations`` iterations; the run itself is
    unaffected, so the result equals ``run(config)``.
    """
    rng = make_rng(config.seed)
    trace = np.full(max_iterations, -1, np.int64)
    it, ev, hit, cens, fit = _kernels.run_kernel(*_kernel_args(config), rng, trace)
    result = RunResult(int(it), int(ev), bool(hit), bool(cens), int(fit), config.seed)
    return result, trace[: min(int(it), max_iterations)]


def acceptance_frequency(
    problem: ProblemKind,
    parent: BitString,
    offspring: BitString,
    noise: NoiseSpec,
    m: int,
    trials: int,
    rng: np.random.Generator,
) -> float:
    """Fraction of ``trials`` selection steps (as done inside :func:`run`) that keep the offspring."""
    hits = _kernels.acceptance_trials(
        problem.value, parent.bits, offspring.bits, noise.kind.value, noise.p, noise.q,
        m, trials, rng,
    )
    return hits / trials
