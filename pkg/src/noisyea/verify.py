"""Numerical checks of runtime-analysis hypotheses at a fixed problem size.

The OneMax checks rely on the fact that the noisy value of a solution with k
ones depends only on k, so one exact (m-fold) law per class k suffices. Reports
state whether an inequality family holds at the given n and by how much; they
say nothing about asymptotic behaviour.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from noisyea import _kernels
from noisyea.noise import NoiseKind, NoiseSpec
from noisyea.oracle import expected_noisy_fitness, m_fold_sum_pmf, noisy_pmf
from noisyea.problems import BitString, ProblemKind, true_fitness

CLOSED_FORM_TOL = 1e-10


@dataclass(frozen=True)
class ConditionReport:
    name: str
    n: int
    params: dict
    satisfied: bool
    worst_case: str
    margin: float
    in_range: bool = True
    notes: tuple[str, ...] = field(default_factory=tuple)

    def to_line(self) -> str:
        parts = [f"check={self.name}", f"n={self.n}"]
        parts += [f"{k}={v}" for k, v in self.params.items()]
        parts += [
            f"satisfied={str(self.satisfied).lower()}",
            f"margin={self.margin:.17g}",
            f"worst_case={self.worst_case.replace(' ', '_')}",
            f"in_range={str(self.in_range).lower()}",
        ]
        if self.notes:
            parts.append("notes=" + ";".join(n.replace(" ", "_") for n in self.notes))
        return " ".join(parts)


@functools.lru_cache(maxsize=32)
def onemax_lt_table(n: int, noise: NoiseSpec, m: int = 1) -> np.ndarray:
    """``T[j, t] = P(f_hat(x^j) < f_hat(x^t))`` for OneMax classes j, t in 0..n.

    ``f_hat`` is the mean of m independent noisy evaluations; the comparison is
    done on exact m-fold sums. Shared by both hypothesis checks below.
    """
    laws = [m_fold_sum_pmf(noisy_pmf(ProblemKind.ONEMAX, BitString.with_ones(n, k), noise), m)
            for k in range(n + 1)]
    mass = np.vstack([law.mass for law in laws])
    # P(S_t > v) for every class t and value v
    above = 1.0 - np.cumsum(mass, axis=1)
    table = np.clip(mass @ above.T, 0.0, 1.0)
    table.flags.writeable = False
    return table


def check_lemma4(n: int, noise: NoiseSpec, m: int, c: float, l: float) -> ConditionReport:
    """Upper-bound hypothesis for noisy OneMax, required for every j <= k (not only j = k).

    Family 1: P(f(x^j) < f(x^{k+1})) >= 1 - l/n for all j <= k < n.
    Family 2: P(f(x^j) < f(x^{k+1})) >= 1 - c(n-k)/n for all j <= k < n - l.
    """
    table = onemax_lt_table(n, noise, m)
    notes = []
    if not 0 < c <= 1 / 15:
        notes.append(f"c={c:g} outside (0, 1/15]")
    if not 2 < l <= n / 2:
        notes.append(f"l={l:g} outside (2, n/2]")
    margin = math.inf
    worst = ""
    for k in range(n):
        for j in range(k + 1):
            prob = table[j, k + 1]
            slack = prob - (1.0 - l / n)
            if slack < margin:
                margin, worst = slack, f"family1 j={j} k={k} P={prob:.6g}"
            if k < n - l:
                slack = prob - (1.0 - c * (n - k) / n)
                if slack < margin:
                    margin, worst = slack, f"family2 j={j} k={k} P={prob:.6g}"
    return ConditionReport(
        "lemma4", n, {"noise": str(noise), "m": m, "c": c, "l": l},
        bool(margin >= 0), worst, float(margin), not notes, tuple(notes),
    )


def check_lemma5(n: int, noise: NoiseSpec, m: int, c: float, l: float) -> ConditionReport:
    """Lower-bound hypothesis: P(f(x^k) < f(x^{k+1})) <= 1 - c(n-k)/n for n - l <= k < n."""
    table = onemax_lt_table(n, noise, m)
    notes = []
    if not l <= n / 4:
        notes.append(f"l={l:g} above n/4")
    if not c >= 16:
        notes.append(f"c={c:g} below 16")
    margin = math.inf
    worst = "no k in range"
    for k in range(max(0, math.ceil(n - l)), n):
        prob = table[k, k + 1]
        slack = (1.0 - c * (n - k) / n) - prob
        if slack < margin:
            margin, worst = slack, f"k={k} P={prob:.6g} bound={1.0 - c * (n - k) / n:.6g}"
    return ConditionReport(
        "lemma5", n, {"noise": str(noise), "m": m, "c": c, "l": l},
        bool(margin >= 0), worst, float(margin), not notes, tuple(notes),
    )


def sampling_gap(n: int, noise: NoiseSpec) -> float:
    """min over j <= k < n of E f^n(x^{k+1}) - E f^n(x^j) on OneMax."""
    means = [expected_noisy_fitness(ProblemKind.ONEMAX, BitString.with_ones(n, k), noise)
             for k in range(n + 1)]
    gap = math.inf
    best_low = -math.inf
    for k in range(n):
        best_low = max(best_low, means[k])
        gap = min(gap, means[k + 1] - best_low)
    return gap


def empirical_drift(
    problem: ProblemKind,
    n: int,
    noise: NoiseSpec,
    m: int,
    level: int,
    trials: int,
    rng: np.random.Generator,
) -> tuple[float, float]:
    """Monte-Carlo E(X_t - X_{t+1} | X_t = level) for X = number of 0-bits.

    Returns the mean and its 95% half-width. States at the level are drawn
    uniformly among strings with ``level`` zeros.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    if not 0 <= level <= n:
        raise ValueError(f"level {level} outside [0, {n}]")
    total, total_sq = _kernels.drift_trials(
        problem.value, n, noise.kind.value, noise.p, noise.q, m, level, trials, rng
    )
    mean = total / trials
    if trials == 1:
        return mean, math.inf
    var = max(total_sq - trials * mean * mean, 0.0) / (trials - 1)
    return mean, 1.96 * math.sqrt(var / trials)


# ---------------------------------------------------------------------------
# closed forms compared with the exact laws


def default_noise_grid(n: int) -> list[NoiseSpec]:
    levels = (0.0, 0.1, 0.5, 1.0)
    noises = [NoiseSpec.noiseless()]
    noises += [NoiseSpec.onebit(p) for p in levels]
    noises += [NoiseSpec.bitwise(p, q) for p in levels for q in (*levels, 1.0 / n)]
    return noises


def _lo_forms(n: int, noise: NoiseSpec):
    """``(name, deviation(law, lo))`` pairs for LeadingOnes event probabilities.

    ``lo`` is the true LeadingOnes value of the solution whose noisy law is
    ``law``. Identities contribute ``|exact - formula|``; upper bounds
    contribute the amount by which the exact value exceeds the bound.
    """
    p = 0.0 if noise.kind is NoiseKind.NOISELESS else noise.p

    def worst(values):
        return max(values, default=0.0)

    if noise.kind is NoiseKind.ONEBIT:
        return [
            # any of the first i ones flipped
            ("lo_onebit_prefix_broken", lambda law, lo: worst(
                abs(law.prob_at_most(i - 1) - p * i / n) for i in range(1, lo + 1))),
            ("lo_onebit_first_zero_flipped", lambda law, lo: worst(
                [abs(law.prob_at_least(lo + 1) - p / n)] if lo < n else [])),
            ("lo_onebit_keep_level", lambda law, lo: abs(law.prob_at_least(lo) - (1 - p * lo / n))),
            ("lo_onebit_lower_level_climbs", lambda law, lo: worst(
                max(law.prob_at_least(i) - p / n, 0.0) for i in range(lo + 1, n + 1))),
        ]

    q = noise.q if noise.kind is NoiseKind.BITWISE else 0.0
    forms = [
        ("lo_prefix_broken", lambda law, lo: worst(
            abs(law.prob_at_most(i - 1) - p * (1 - (1 - q) ** i)) for i in range(1, lo))),
        ("lo_level_broken", lambda law, lo: worst(
            [abs(law.prob_at_most(lo - 1) - p * (1 - (1 - q) ** lo))] if lo >= 1 else [])),
        ("lo_first_zero_flipped", lambda law, lo: worst(
            [abs(law.prob_at_least(lo + 1) - p * (1 - q) ** lo * q)] if lo < n else [])),
        ("lo_keep_level", lambda law, lo: abs(law.prob_at_least(lo) - (1 - p + p * (1 - q) ** lo))),
        ("lo_level_mass", lambda law, lo: worst(
            abs(law[l] - p * (1 - q) ** l * q) for l in range(lo))),
    ]
    if q <= 0.5:
        # reaching level i needs every 0 among the first i bits flipped; one 0 is the worst case
        forms.append(("lo_lower_level_climbs", lambda law, lo: worst(
            max(law.prob_at_least(i) - p * (1 - q) ** (i - 1) * q, 0.0)
            for i in range(lo + 1, n + 1))))
    return forms


def _report(name, n, noise, max_dev, worst, extra=None):
    params = {"noise": str(noise), "max_deviation": f"{max_dev:.3g}"}
    params.update(extra or {})
    return ConditionReport(name, n, params, bool(max_dev <= CLOSED_FORM_TOL), worst,
                           float(CLOSED_FORM_TOL - max_dev))


def _onemax_expectation(n: int, k: int, noise: NoiseSpec) -> float:
    if noise.kind is NoiseKind.NOISELESS:
        return float(k)
    if noise.kind is NoiseKind.ONEBIT:
        return (1 - 2 * noise.p / n) * k + noise.p
    pq = noise.p * noise.q
    return (1 - 2 * pq) * k + n * pq


def verify_closed_forms(n: int, noises: list[NoiseSpec] | None = None) -> list[ConditionReport]:
    """Compare closed-form event probabilities and expectations with the exact laws.

    LeadingOnes identities are checked on every x in {0,1}^n, so n is limited
    to 12. Each report carries the largest absolute deviation found.
    """
    if not 1 <= n <= 12:
        raise ValueError("closed-form verification enumerates {0,1}^n; need 1 <= n <= 12")
    noises = default_noise_grid(n) if noises is None else noises
    everything = [BitString(bits) for bits in itertools.product((0, 1), repeat=n)]
    reports = []
    for noise in noises:
        forms = _lo_forms(n, noise)
        dev = {name: 0.0 for name, _ in forms}
        worst = {name: "none" for name, _ in forms}
        for x in everything:
            lo = true_fitness(ProblemKind.LEADINGONES, x)
            law = noisy_pmf(ProblemKind.LEADINGONES, x, noise)
            for name, deviation in forms:
                d = deviation(law, lo)
                if d > dev[name]:
                    dev[name], worst[name] = d, f"x={x} LO={lo}"
        for name, _ in forms:
            reports.append(_report(name, n, noise, dev[name], worst[name]))

        # OneMax expectations: linear in the number of ones
        max_dev, where = 0.0, "none"
        for k in range(n + 1):
            got = expected_noisy_fitness(ProblemKind.ONEMAX, BitString.with_ones(n, k), noise)
            d = abs(got - _onemax_expectation(n, k, noise))
            if d > max_dev:
                max_dev, where = d, f"k={k}"
        reports.append(_report("onemax_expectation", n, noise, max_dev, where))

        if noise.kind is NoiseKind.ONEBIT:
            twin = NoiseSpec.bitwise(noise.p, 1.0 / n)
            max_dev, where = 0.0, "none"
            for k in range(n + 1):
                x = BitString.with_ones(n, k)
                d = abs(expected_noisy_fitness(ProblemKind.ONEMAX, x, noise)
                        - expected_noisy_fitness(ProblemKind.ONEMAX, x, twin))
                if d > max_dev:
                    max_dev, where = d, f"k={k}"
            reports.append(_report("onemax_onebit_equals_bitwise_1_over_n", n, noise,
                                   max_dev, where))
    return reports
