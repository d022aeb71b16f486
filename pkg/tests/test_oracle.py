import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_ge, brute_pmf, brute_sum_pmf, within_sigma
from noisyea.noise import NoiseSpec
from noisyea.oracle import (
    MAX_SUPPORT,
    Pmf,
    SupportTooLarge,
    acceptance_probability,
    comparison_probability,
    expected_noisy_fitness,
    m_fold_sum_pmf,
    mc_sampled_comparison,
    noisy_pmf,
    sampled_acceptance_probability,
)
from noisyea.problems import BitString, ProblemKind, true_fitness

OM, LO = ProblemKind.ONEMAX, ProblemKind.LEADINGONES

NOISES = [
    NoiseSpec.noiseless(),
    NoiseSpec.onebit(0.3),
    NoiseSpec.onebit(1.0),
    NoiseSpec.bitwise(0.5, 0.2),
    NoiseSpec.bitwise(1.0, 0.5),
    NoiseSpec.bitwise(1.0, 0.9),
]

noise_st = st.one_of(
    st.just(NoiseSpec.noiseless()),
    st.floats(0, 1).map(NoiseSpec.onebit),
    st.tuples(st.floats(0, 1), st.floats(0, 1)).map(lambda pq: NoiseSpec.bitwise(*pq)),
)


def bits_st(lo=1, hi=10):
    return st.lists(st.integers(0, 1), min_size=lo, max_size=hi).map(BitString)


# -- Pmf ------------------------------------------------------------------------


def test_pmf_validation():
    with pytest.raises(ValueError):
        Pmf(np.array([0.5, 0.4]))
    with pytest.raises(ValueError):
        Pmf(np.array([1.2, -0.2]))
    law = Pmf.from_dict({0: 0.25, 2: 0.75})
    assert law.mean() == pytest.approx(1.5) and law[1] == 0.0 and law[5] == 0.0
    assert law.variance() == pytest.approx(0.75)


# -- exact laws vs enumeration ---------------------------------------------------


@pytest.mark.parametrize("noise", NOISES, ids=str)
@pytest.mark.parametrize("problem", [OM, LO], ids=str)
@pytest.mark.parametrize("n", [1, 2, 5, 8])
def test_pmf_matches_enumeration_everywhere(problem, noise, n):
    for bits in itertools.product((0, 1), repeat=n):
        law = noisy_pmf(problem, BitString(bits), noise)
        assert np.allclose(law.mass, brute_pmf(problem, bits, noise), atol=1e-12, rtol=0)


@given(bits_st(), noise_st, st.sampled_from([OM, LO]))
@settings(max_examples=150, deadline=None)
def test_pmf_is_a_distribution_on_0_to_n(x, noise, problem):
    law = noisy_pmf(problem, x, noise)
    assert law.mass.size == x.n + 1
    assert np.all(law.mass >= 0)
    assert abs(math.fsum(law.mass) - 1.0) <= 1e-12
    assert np.allclose(law.mass, brute_pmf(problem, tuple(x), noise), atol=1e-12, rtol=0)


def test_spec_examples():
    law = noisy_pmf(LO, BitString.parse("1100"), NoiseSpec.bitwise(1.0, 0.5))
    assert law.as_dict(tol=1e-15) == pytest.approx({0: 0.5, 1: 0.25, 2: 0.125, 3: 0.0625, 4: 0.0625})
    law = noisy_pmf(OM, BitString.parse("1100"), NoiseSpec.onebit(1.0))
    assert law.as_dict(tol=1e-15) == pytest.approx({1: 0.5, 3: 0.5})
    law = noisy_pmf(OM, BitString.parse("0000"), NoiseSpec.bitwise(1.0, 1.0))
    assert law.as_dict(tol=1e-15) == pytest.approx({4: 1.0})


@pytest.mark.parametrize("noise", NOISES, ids=str)
def test_onemax_law_depends_only_on_number_of_ones(noise):
    n = 8
    by_k = {}
    for bits in itertools.product((0, 1), repeat=n):
        law = noisy_pmf(OM, BitString(bits), noise).mass
        k = sum(bits)
        if k in by_k:
            assert np.allclose(law, by_k[k], atol=1e-14, rtol=0)
        else:
            by_k[k] = law


@pytest.mark.parametrize("n", [2, 5, 16, 64])
@pytest.mark.parametrize("p", [0.0, 0.3, 1.0])
def test_onemax_onebit_mean_equals_bitwise_one_over_n(n, p):
    for k in range(n + 1):
        x = BitString.with_ones(n, k)
        a = expected_noisy_fitness(OM, x, NoiseSpec.onebit(p))
        b = expected_noisy_fitness(OM, x, NoiseSpec.bitwise(p, 1 / n))
        assert abs(a - b) <= 1e-10
        assert abs(a - ((1 - 2 * p / n) * k + p)) <= 1e-10


@pytest.mark.parametrize("n", [3, 7, 10])
@pytest.mark.parametrize("q", [0.1, 0.5, 0.8])
def test_leadingones_level_mass_bitwise_p1(n, q):
    # with the prefix 1^l 0..., the noisy value is l' < l with prob (1-q)^l' q
    for lo in range(n + 1):
        x = BitString([1] * lo + [0] * (n - lo))
        law = noisy_pmf(LO, x, NoiseSpec.bitwise(1.0, q))
        for level in range(lo):
            assert abs(law[level] - (1 - q) ** level * q) <= 1e-12


@given(bits_st(), noise_st, st.sampled_from([OM, LO]))
@settings(max_examples=100, deadline=None)
def test_expectation_consistent_with_pmf(x, noise, problem):
    law = brute_pmf(problem, tuple(x), noise)
    assert abs(expected_noisy_fitness(problem, x, noise) - sum(v * w for v, w in enumerate(law))) <= 1e-10


# -- comparisons -------------------------------------------------------------------


@given(bits_st(1, 8), noise_st, st.sampled_from([OM, LO]), st.data())
@settings(max_examples=150, deadline=None)
def test_comparison_probability_identities(x, noise, problem, data):
    y = data.draw(bits_st(x.n, x.n))
    a, b = noisy_pmf(problem, x, noise), noisy_pmf(problem, y, noise)
    ge, gt, eq = comparison_probability(a, b)
    assert 0 <= gt <= 1 + 1e-12 and 0 <= eq <= 1 + 1e-12
    assert ge == gt + eq
    _, lt, eq2 = comparison_probability(b, a)
    assert abs(gt + lt + eq - 1) <= 1e-12
    assert abs(eq - eq2) <= 1e-15
    assert abs(ge - brute_ge(dict(enumerate(a.mass)), dict(enumerate(b.mass)))) <= 1e-12


def test_self_comparison_is_symmetric():
    for noise in NOISES:
        law = noisy_pmf(OM, BitString.parse("1101"), noise)
        _, gt, eq = comparison_probability(law, law)
        assert abs(eq + 2 * gt - 1) <= 1e-12


def test_noiseless_acceptance_is_an_indicator():
    for xs, ys in itertools.product(["0000", "1010", "1100", "1111"], repeat=2):
        x, y = BitString.parse(xs), BitString.parse(ys)
        for problem in (OM, LO):
            expected = float(true_fitness(problem, y) >= true_fitness(problem, x))
            assert acceptance_probability(problem, x, y, NoiseSpec.noiseless()) == expected


def test_acceptance_when_noise_breaks_lo_prefix():
    # LO(1000) = 1, LO(1100) = 2; the offspring loses if it reads 0 while the parent reads >= 1
    parent, child = BitString.parse("1000"), BitString.parse("1100")
    noise = NoiseSpec.bitwise(0.5, 0.5)
    p = acceptance_probability(LO, parent, child, noise)
    brute = brute_ge(dict(enumerate(brute_pmf(LO, tuple(child), noise))),
                     dict(enumerate(brute_pmf(LO, tuple(parent), noise))))
    assert abs(p - brute) <= 1e-12
    child_zero = noisy_pmf(LO, child, noise)[0]
    parent_pos = noisy_pmf(LO, parent, noise).prob_at_least(1)
    assert child_zero == pytest.approx(0.25)
    assert 1 - p >= child_zero * parent_pos - 1e-12


@pytest.mark.parametrize("n", [4, 7, 10])
def test_onebit_onemax_acceptance_bound_for_worse_offspring(n):
    # each one-bit evaluation moves by at most one, so a worse offspring needs noise to catch up
    p = 0.4
    noise = NoiseSpec.onebit(p)
    for k in range(1, n + 1):
        for j in range(k):
            prob = acceptance_probability(OM, BitString.with_ones(n, k), BitString.with_ones(n, j), noise)
            if k - j >= 3:
                assert prob == 0.0
            else:
                assert prob <= 2 * p + 1e-12


# -- sampling ------------------------------------------------------------------


@given(st.lists(st.floats(0.01, 1.0), min_size=1, max_size=6), st.integers(1, 6))
@settings(max_examples=60, deadline=None)
def test_m_fold_sum_matches_enumeration(weights, m):
    mass = np.array(weights) / math.fsum(weights)
    mass = mass / math.fsum(mass)
    law = m_fold_sum_pmf(Pmf(mass), m)
    brute = brute_sum_pmf(list(mass), m)
    assert law.mass.size == m * (mass.size - 1) + 1
    for value, w in brute.items():
        assert abs(law[value] - w) <= 1e-12


@pytest.mark.parametrize("m", [1, 2, 7, 64, 1000])
def test_m_fold_mean_and_variance_scale(m):
    base = noisy_pmf(OM, BitString.with_ones(12, 5), NoiseSpec.bitwise(0.7, 0.3))
    law = m_fold_sum_pmf(base, m)
    assert abs(law.mean() - m * base.mean()) <= 1e-9 * max(1, m)
    assert abs(law.variance() - m * base.variance()) <= 1e-9 * max(1, m)
    assert abs(math.fsum(law.mass) - 1) <= 1e-12


def test_large_sum_uses_fft_path_and_stays_normalized():
    base = noisy_pmf(OM, BitString.with_ones(64, 40), NoiseSpec.bitwise(1.0, 0.25))
    law = m_fold_sum_pmf(base, 20_000)
    assert np.all(law.mass >= 0)
    assert abs(law.mean() - 20_000 * base.mean()) <= 1e-6 * 20_000 * base.mean()


def test_support_guard():
    base = noisy_pmf(OM, BitString.with_ones(100, 3), NoiseSpec.onebit(0.5))
    with pytest.raises(SupportTooLarge):
        m_fold_sum_pmf(base, MAX_SUPPORT // 100 + 1)


def test_sampled_acceptance_m1_is_plain_acceptance():
    x, y = BitString.parse("110100"), BitString.parse("111000")
    for noise in NOISES:
        for problem in (OM, LO):
            assert sampled_acceptance_probability(problem, x, y, noise, 1) == pytest.approx(
                acceptance_probability(problem, x, y, noise), abs=1e-15)


@pytest.mark.parametrize("m", [1, 3, 10])
def test_mc_comparison_within_three_sigma(m):
    rng = np.random.default_rng(77 + m)
    noise = NoiseSpec.bitwise(0.8, 0.3)
    x, y = BitString.parse("11010110"), BitString.parse("11100100")
    exact = sampled_acceptance_probability(OM, y, x, noise, m)
    est, half = mc_sampled_comparison(OM, x, y, noise, m, 100_000, rng)
    assert within_sigma(est, exact, 100_000)
    assert half > 0
