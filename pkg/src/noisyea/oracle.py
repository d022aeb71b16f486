"""Exact laws of noisy fitness values and of the comparisons the EA makes.

These are the ground truth for the Monte-Carlo machinery: the distribution of
f^n(x) is built analytically (binomial convolution for OneMax, a product of
per-bit survival probabilities for LeadingOnes, an average over the n single
flips for one-bit noise), and sampled comparisons use the exact law of the
m-fold sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import signal, stats

from noisyea import _kernels
from noisyea.noise import NoiseKind, NoiseSpec
from noisyea.problems import BitString, ProblemKind, true_fitness

MAX_SUPPORT = 10**7
# above this many multiply-adds a direct convolution is too slow; use FFT
_DIRECT_CONV_LIMIT = 50_000_000
NORMALIZATION_TOL = 1e-12


class SupportTooLarge(ValueError):
    """Raised when an exact m-fold law would exceed ``MAX_SUPPORT`` points."""


@dataclass(frozen=True)
class Pmf:
    """Probability mass function on the integers ``0 .. len(mass) - 1``."""

    mass: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.mass, dtype=np.float64).reshape(-1)
        if arr.size == 0:
            raise ValueError("empty pmf")
        if np.any(arr < 0) or np.any(arr > 1 + NORMALIZATION_TOL):
            raise ValueError("pmf masses must lie in [0, 1]")
        total = math.fsum(arr)
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"pmf sums to {total!r}, not 1")
        arr.flags.writeable = False
        object.__setattr__(self, "mass", arr)

    @classmethod
    def point(cls, value: int, size: int) -> "Pmf":
        mass = np.zeros(size)
        mass[value] = 1.0
        return cls(mass)

    @classmethod
    def from_dict(cls, masses: dict[int, float], size: int | None = None) -> "Pmf":
        size = size if size is not None else max(masses) + 1
        mass = np.zeros(size)
        for value, w in masses.items():
            mass[value] += w
        return cls(mass)

    def as_dict(self, tol: float = 0.0) -> dict[int, float]:
        return {i: float(w) for i, w in enumerate(self.mass) if w > tol}

    @property
    def max_value(self) -> int:
        return self.mass.size - 1

    def __getitem__(self, value: int) -> float:
        if 0 <= value < self.mass.size:
            return float(self.mass[value])
        return 0.0

    def mean(self) -> float:
        return math.fsum(np.arange(self.mass.size) * self.mass)

    def variance(self) -> float:
        mu = self.mean()
        return math.fsum((np.arange(self.mass.size) - mu) ** 2 * self.mass)

    def prob_at_least(self, value: int) -> float:
        return math.fsum(self.mass[max(value, 0):])

    def prob_at_most(self, value: int) -> float:
        if value < 0:
            return 0.0
        return math.fsum(self.mass[: value + 1])


def _clean(mass: np.ndarray) -> np.ndarray:
    # rounding can leave -1e-17 style residue after subtraction or FFT
    mass = np.clip(mass, 0.0, None)
    return mass / math.fsum(mass)


def _binomial(trials: int, q: float) -> np.ndarray:
    return stats.binom.pmf(np.arange(trials + 1), trials, q)


def _flip_law(problem: ProblemKind, x: BitString, noise: NoiseSpec) -> np.ndarray:
    """Law of f(x') given that noise happened."""
    n = x.n
    bits = x.bits
    law = np.zeros(n + 1)
    if noise.kind is NoiseKind.ONEBIT:
        for i in range(n):
            law[true_fitness(problem, x.flipped(i))] += 1.0
        return law / n
    q = noise.q
    if problem is ProblemKind.ONEMAX:
        k = int(bits.sum())
        # ones that survive: k - Binomial(k, q); zeros that flip: Binomial(n - k, q)
        kept = _binomial(k, q)[::-1]
        return _clean(np.convolve(kept, _binomial(n - k, q)))
    # LeadingOnes: P(LO(x') >= j) = prod_{i <= j} P(bit i of x' is 1)
    survive = 1.0
    for j in range(n):
        zero_after_noise = q if bits[j] == 1 else 1.0 - q
        law[j] = survive * zero_after_noise
        survive *= 1.0 - zero_after_noise
    law[n] = survive
    return law


def noisy_pmf(problem: ProblemKind, x: BitString, noise: NoiseSpec) -> Pmf:
    """Exact law of the noisy fitness f^n(x)."""
    f = true_fitness(problem, x)
    point = np.zeros(x.n + 1)
    point[f] = 1.0
    if noise.is_noiseless:
        return Pmf(point)
    mass = (1.0 - noise.p) * point + noise.p * _flip_law(problem, x, noise)
    return Pmf(_clean(mass))


def expected_noisy_fitness(problem: ProblemKind, x: BitString, noise: NoiseSpec) -> float:
    return noisy_pmf(problem, x, noise).mean()


def comparison_probability(a: Pmf, b: Pmf) -> tuple[float, float, float]:
    """``(P(A >= B), P(A > B), P(A = B))`` for independent A ~ a, B ~ b."""
    size = max(a.mass.size, b.mass.size)
    am = np.zeros(size)
    bm = np.zeros(size)
    am[: a.mass.size] = a.mass
    bm[: b.mass.size] = b.mass
    below = np.concatenate(([0.0], np.cumsum(bm)[:-1]))
    p_gt = min(math.fsum(am * below), 1.0)
    p_eq = min(math.fsum(am * bm), 1.0)
    return p_gt + p_eq, p_gt, p_eq


def acceptance_probability(
    problem: ProblemKind, parent: BitString, offspring: BitString, noise: NoiseSpec
) -> float:
    """P(f^n(offspring) >= f^n(parent)) with independent noise on both."""
    if parent.n != offspring.n:
        raise ValueError("parent and offspring lengths differ")
    off = noisy_pmf(problem, offspring, noise)
    par = noisy_pmf(problem, parent, noise)
    return comparison_probability(off, par)[0]


def _convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.size * b.size <= _DIRECT_CONV_LIMIT:
        return np.convolve(a, b)
    return _clean(signal.fftconvolve(a, b))


def m_fold_sum_pmf(a: Pmf, m: int) -> Pmf:
    """Exact law of the sum of ``m`` i.i.d. draws from ``a`` (binary powering)."""
    if m < 1:
        raise ValueError("m must be positive")
    support = m * a.max_value + 1
    if support > MAX_SUPPORT:
        raise SupportTooLarge(
            f"{m}-fold sum over 0..{a.max_value} needs {support} points (limit {MAX_SUPPORT})"
        )
    result = None
    base = np.array(a.mass)
    k = m
    while True:
        if k & 1:
            result = base if result is None else _convolve(result, base)
        k >>= 1
        if not k:
            break
        base = _convolve(base, base)
    return Pmf(_clean(result))


def sampled_acceptance_probability(
    problem: ProblemKind,
    parent: BitString,
    offspring: BitString,
    noise: NoiseSpec,
    m: int,
) -> float:
    """P(mean of m draws at offspring >= mean of m draws at parent), exactly."""
    off = m_fold_sum_pmf(noisy_pmf(problem, offspring, noise), m)
    par = m_fold_sum_pmf(noisy_pmf(problem, parent, noise), m)
    return comparison_probability(off, par)[0]


def mc_sampled_comparison(
    problem: ProblemKind,
    x: BitString,
    y: BitString,
    noise: NoiseSpec,
    m: int,
    trials: int,
    rng: np.random.Generator,
) -> tuple[float, float]:
    """Monte-Carlo estimate of P(f_hat(x) >= f_hat(y)) and its 95% half-width."""
    if trials < 1:
        raise ValueError("trials must be positive")
    hits = _kernels.compare_trials(
        problem.value, x.bits, y.bits, noise.kind.value, noise.p, noise.q, m, trials, rng
    )
    est = hits / trials
    return est, 1.96 * math.sqrt(est * (1.0 - est) / trials)
