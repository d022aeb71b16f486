"""(1+1)-EA under prior noise: simulation, exact oracle and hypothesis checks."""

from noisyea.engine import RunConfig, RunResult, accept, mutate, run
from noisyea.noise import (
    NoiseKind,
    NoiseSpec,
    SamplingSpec,
    noisy_fitness,
    perturb,
    sampled_fitness_sum,
)
from noisyea.oracle import (
    Pmf,
    acceptance_probability,
    comparison_probability,
    expected_noisy_fitness,
    m_fold_sum_pmf,
    mc_sampled_comparison,
    noisy_pmf,
    sampled_acceptance_probability,
)
from noisyea.problems import (
    BitString,
    ProblemKind,
    is_optimal,
    true_fitness,
    uniform_random_solution,
)

__all__ = [
    "BitString", "NoiseKind", "NoiseSpec", "Pmf", "ProblemKind", "RunConfig", "RunResult",
    "SamplingSpec", "accept", "acceptance_probability", "comparison_probability",
    "expected_noisy_fitness", "is_optimal", "m_fold_sum_pmf", "mc_sampled_comparison",
    "mutate", "noisy_fitness", "noisy_pmf", "perturb", "run", "sampled_acceptance_probability",
    "sampled_fitness_sum", "true_fitness", "uniform_random_solution",
]
