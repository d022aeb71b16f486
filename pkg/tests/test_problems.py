import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from noisyea.problems import (
    BitString,
    ProblemKind,
    is_optimal,
    true_fitness,
    uniform_random_solution,
)

OM, LO = ProblemKind.ONEMAX, ProblemKind.LEADINGONES
bitstrings = st.lists(st.integers(0, 1), min_size=1, max_size=40).map(BitString)


@pytest.mark.parametrize(
    "problem, text, expected",
    [(OM, "1111", 4), (LO, "1101", 2), (LO, "0111", 0), (OM, "0101", 2), (LO, "1", 1)],
)
def test_true_fitness_examples(problem, text, expected):
    assert true_fitness(problem, BitString.parse(text)) == expected


@pytest.mark.parametrize("problem, text, expected", [(OM, "111", True), (LO, "110", False), (OM, "011", False)])
def test_is_optimal_examples(problem, text, expected):
    assert is_optimal(problem, BitString.parse(text)) is expected


@given(bitstrings)
def test_leadingones_never_exceeds_onemax(x):
    assert true_fitness(LO, x) <= true_fitness(OM, x)


@given(st.integers(1, 200), st.sampled_from([OM, LO]))
def test_extremes(n, problem):
    assert true_fitness(problem, BitString.ones(n)) == n
    assert true_fitness(problem, BitString.zeros(n)) == 0


@pytest.mark.parametrize("n", range(1, 13))
def test_optimal_iff_all_ones_exhaustive(n):
    ones = BitString.ones(n)
    for bits in itertools.product((0, 1), repeat=n):
        x = BitString(bits)
        for problem in (OM, LO):
            assert is_optimal(problem, x) == (x == ones)


def test_rendering_round_trip():
    x = BitString.parse("0101100")
    assert str(x) == "0101100"
    assert BitString.parse(str(x)) == x
    assert x.n == 7 and len(x) == 7


def test_bitstring_is_immutable():
    x = BitString.parse("0101")
    with pytest.raises(ValueError):
        x.bits[0] = 1


@pytest.mark.parametrize("bad", ["", "012", "1 0"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        BitString.parse(bad)


def test_uniform_n1_is_fair(rng):
    draws = [uniform_random_solution(1, rng).count_ones() for _ in range(20_000)]
    freq = np.mean(draws)
    assert abs(freq - 0.5) <= 3 * np.sqrt(0.25 / len(draws))


def test_uniform_n3_chi_square(rng):
    counts = np.zeros(8)
    for _ in range(100_000):
        x = uniform_random_solution(3, rng)
        counts[int(str(x), 2)] += 1
    expected = np.full(8, 100_000 / 8)
    # each cell within 3 sigma of 1/8 and the whole table passes chi-square
    sigma = np.sqrt(100_000 * (1 / 8) * (7 / 8))
    assert np.all(np.abs(counts - expected) <= 3 * sigma)
    assert stats.chisquare(counts, expected).pvalue > 1e-3


def test_uniform_is_deterministic_and_draws_n_numbers():
    a = uniform_random_solution(2, np.random.default_rng(7))
    b = uniform_random_solution(2, np.random.default_rng(7))
    assert a == b
    g1, g2 = np.random.default_rng(11), np.random.default_rng(11)
    uniform_random_solution(5, g1)
    g2.random(5)
    assert g1.random() == g2.random()
