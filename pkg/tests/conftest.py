import itertools
import math

import numpy as np
import pytest

from noisyea.noise import NoiseKind


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)


# -- brute-force reference, independent of the package's code paths ----------


def ref_onemax(bits):
    return sum(bits)


def ref_leadingones(bits):
    count = 0
    for b in bits:
        if not b:
            break
        count += 1
    return count


REF_FITNESS = {"ONEMAX": ref_onemax, "LEADINGONES": ref_leadingones}


def enumerate_perturbations(bits, noise):
    """Yield (perturbed bits, probability) over all 2^n flip masks."""
    n = len(bits)
    kind = noise.kind
    for mask in itertools.product((0, 1), repeat=n):
        flips = sum(mask)
        if kind is NoiseKind.NOISELESS:
            prob = 1.0 if flips == 0 else 0.0
        elif kind is NoiseKind.ONEBIT:
            prob = (1 - noise.p) * (flips == 0) + noise.p / n * (flips == 1)
        else:
            prob = (1 - noise.p) * (flips == 0) + noise.p * noise.q**flips * (1 - noise.q) ** (n - flips)
        if prob:
            yield tuple(b ^ z for b, z in zip(bits, mask)), prob


def brute_pmf(problem, bits, noise):
    f = REF_FITNESS[problem.name]
    mass = [0.0] * (len(bits) + 1)
    for y, prob in enumerate_perturbations(tuple(bits), noise):
        mass[f(y)] += prob
    return mass


def brute_sum_pmf(mass, m):
    out = {0: 1.0}
    for _ in range(m):
        nxt = {}
        for s, w in out.items():
            for v, mv in enumerate(mass):
                if mv:
                    nxt[s + v] = nxt.get(s + v, 0.0) + w * mv
        out = nxt
    return out


def brute_ge(a: dict, b: dict) -> float:
    return math.fsum(wa * wb for va, wa in a.items() for vb, wb in b.items() if va >= vb)


def within_sigma(estimate, p, trials, k=3.0):
    sigma = math.sqrt(p * (1 - p) / trials)
    return abs(estimate - p) <= k * sigma + 1e-12


# -- acceptance summary ------------------------------------------------------------

ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(number: int, ok: bool, detail: str, elapsed: float) -> str:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({elapsed:.1f}s) {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
