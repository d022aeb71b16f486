"""Prior noise (one-bit, bit-wise), single noisy evaluations and sampling.

Noise acts on a copy of the solution at evaluation time; the solution itself is
never changed. Every call draws fresh noise, so two evaluations of the same
solution are independent.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

import numpy as np

from noisyea import _kernels
from noisyea.problems import BitString, ProblemKind


class NoiseKind(enum.Enum):
    NOISELESS = _kernels.NOISELESS
    ONEBIT = _kernels.ONEBIT
    BITWISE = _kernels.BITWISE


@dataclass(frozen=True)
class NoiseSpec:
    """Noise model: ``NOISELESS``, ``ONEBIT(p)`` or ``BITWISE(p, q)``.

    ``p`` is the probability that noise happens at all; for bit-wise noise each
    bit of the evaluated copy is then flipped independently with probability
    ``q``. ``q`` is ignored by the other kinds.
    """

    kind: NoiseKind = NoiseKind.NOISELESS
    p: float = 0.0
    q: float = 0.0

    def __post_init__(self):
        for name in ("p", "q"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} is not a probability")

    @classmethod
    def noiseless(cls) -> "NoiseSpec":
        return cls()

    @classmethod
    def onebit(cls, p: float) -> "NoiseSpec":
        return cls(NoiseKind.ONEBIT, float(p), 0.0)

    @classmethod
    def bitwise(cls, p: float, q: float) -> "NoiseSpec":
        return cls(NoiseKind.BITWISE, float(p), float(q))

    @property
    def is_noiseless(self) -> bool:
        """True when evaluations are exact (also for p = 0 or bit-wise q = 0)."""
        if self.kind is NoiseKind.NOISELESS or self.p == 0.0:
            return True
        return self.kind is NoiseKind.BITWISE and self.q == 0.0

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "NoiseSpec":
        """Parse ``none``, ``onebit:p=<v>`` or ``bitwise:p=<v>,q=<v>``.

        A value may be written ``1/n``; it is resolved with the given ``n``.
        """
        text = text.strip().lower()
        if text in ("none", "noiseless"):
            return cls.noiseless()
        m = re.fullmatch(r"(onebit|bitwise):(.*)", text)
        if not m:
            raise ValueError(f"bad noise spec {text!r}")
        params = {}
        for part in filter(None, (s.strip() for s in m.group(2).split(","))):
            key, _, value = part.partition("=")
            params[key.strip()] = _resolve(value.strip(), n)
        if m.group(1) == "onebit":
            if set(params) != {"p"}:
                raise ValueError(f"onebit noise takes exactly p: {text!r}")
            return cls.onebit(params["p"])
        if set(params) != {"p", "q"}:
            raise ValueError(f"bitwise noise takes exactly p and q: {text!r}")
        return cls.bitwise(params["p"], params["q"])

    def __str__(self) -> str:
        if self.kind is NoiseKind.NOISELESS:
            return "none"
        if self.kind is NoiseKind.ONEBIT:
            return f"onebit:p={self.p!r}"
        return f"bitwise:p={self.p!r},q={self.q!r}"


def _resolve(value: str, n: int | None) -> float:
    if value.replace(" ", "") == "1/n":
        if n is None:
            raise ValueError("'1/n' needs a problem size")
        return 1.0 / n
    return float(value)


@dataclass(frozen=True)
class SamplingSpec:
    """Number ``m`` of independent noisy evaluations averaged; m = 1 is no sampling."""

    m: int = 1

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"sample size must be a positive integer, got {self.m}")


def perturb(x: BitString, noise: NoiseSpec, rng: np.random.Generator) -> BitString:
    """Return the copy that noise hands to the fitness function."""
    out = np.empty(x.n, np.uint8)
    _kernels.perturb_into(x.bits, out, noise.kind.value, noise.p, noise.q, rng)
    return BitString(out)


def noisy_fitness(
    problem: ProblemKind, x: BitString, noise: NoiseSpec, rng: np.random.Generator
) -> int:
    buf = np.empty(x.n, np.uint8)
    return int(
        _kernels.noisy_fitness(
            problem.value, x.bits, noise.kind.value, noise.p, noise.q, rng, buf
        )
    )


def sampled_fitness_sum(
    problem: ProblemKind,
    x: BitString,
    noise: NoiseSpec,
    sampling: SamplingSpec,
    rng: np.random.Generator,
) -> tuple[int, int]:
    """Sum of ``m`` independent noisy evaluations, returned as ``(sum, m)``.

    The sampled average is ``sum / m``; keeping the pair avoids float ties.
    """
    buf = np.empty(x.n, np.uint8)
    s = _kernels.sampled_sum(
        problem.value, x.bits, noise.kind.value, noise.p, noise.q, sampling.m, rng, buf
    )
    return int(s), sampling.m


def compare_sampled(a: tuple[int, int], b: tuple[int, int]) -> int:
    """Sign of ``a_sum/a_m - b_sum/b_m`` by exact cross-multiplication."""
    lhs = a[0] * b[1]
    rhs = b[0] * a[1]
    return (lhs > rhs) - (lhs < rhs)
