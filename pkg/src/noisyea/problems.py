"""Bit strings and the two pseudo-Boolean benchmarks, OneMax and LeadingOnes."""

from __future__ import annotations

import enum
from typing import Iterable

import numpy as np

from noisyea import _kernels


class ProblemKind(enum.Enum):
    ONEMAX = _kernels.ONEMAX
    LEADINGONES = _kernels.LEADINGONES

    @classmethod
    def parse(cls, text: str) -> "ProblemKind":
        key = text.strip().lower().replace("_", "").replace("-", "")
        for kind in cls:
            if kind.name.lower() == key:
                return kind
        raise ValueError(f"unknown problem {text!r} (expected onemax or leadingones)")

    def __str__(self) -> str:
        return {"ONEMAX": "OneMax", "LEADINGONES": "LeadingOnes"}[self.name]


class BitString:
    """Immutable fixed-length 0/1 string.

    Position 1 is the leftmost character of the text rendering, so
    ``BitString.parse("1101")`` has LeadingOnes value 2.
    """

    __slots__ = ("_bits",)

    def __init__(self, bits: Iterable[int] | np.ndarray):
        arr = np.array(bits, dtype=np.uint8).reshape(-1)
        if arr.size < 1:
            raise ValueError("a bit string needs at least one bit")
        if np.any(arr > 1):
            raise ValueError("bits must be 0 or 1")
        arr.flags.writeable = False
        self._bits = arr

    @classmethod
    def parse(cls, text: str) -> "BitString":
        text = text.strip()
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"not a bit string: {text!r}")
        return cls([int(c) for c in text])

    @classmethod
    def ones(cls, n: int) -> "BitString":
        return cls(np.ones(n, np.uint8))

    @classmethod
    def zeros(cls, n: int) -> "BitString":
        return cls(np.zeros(n, np.uint8))

    @classmethod
    def with_ones(cls, n: int, k: int) -> "BitString":
        """The representative ``1^k 0^(n-k)`` of the OneMax class with k ones."""
        if not 0 <= k <= n:
            raise ValueError(f"k={k} outside [0, {n}]")
        return cls([1] * k + [0] * (n - k))

    @property
    def bits(self) -> np.ndarray:
        """Read-only ``uint8`` view of the bits."""
        return self._bits

    @property
    def n(self) -> int:
        return int(self._bits.size)

    def count_ones(self) -> int:
        return int(self._bits.sum())

    def flipped(self, *positions: int) -> "BitString":
        """Copy with the given 0-based positions flipped."""
        arr = self._bits.copy()
        for i in positions:
            arr[i] ^= 1
        return BitString(arr)

    def __len__(self) -> int:
        return self.n

    def __iter__(self):
        return (int(b) for b in self._bits)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitString):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self._bits, other._bits))

    def __hash__(self) -> int:
        return hash(self._bits.tobytes())

    def __str__(self) -> str:
        return "".join("1" if b else "0" for b in self._bits)

    def __repr__(self) -> str:
        return f"BitString('{self}')"


def true_fitness(problem: ProblemKind, x: BitString) -> int:
    """OneMax: number of 1-bits. LeadingOnes: length of the leading run of 1-bits."""
    return int(_kernels.fitness(problem.value, x.bits))


def is_optimal(problem: ProblemKind, x: BitString) -> bool:
    # both problems have the unique optimum 1^n
    return true_fitness(problem, x) == x.n


def uniform_random_solution(n: int, rng: np.random.Generator) -> BitString:
    """Uniform draw from {0,1}^n; consumes exactly ``n`` doubles from ``rng``."""
    if n < 1:
        raise ValueError("n must be positive")
    out = np.empty(n, np.uint8)
    _kernels.random_solution_into(out, rng)
    return BitString(out)
