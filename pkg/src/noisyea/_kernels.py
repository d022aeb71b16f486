"""Jitted inner loops shared by the noise, engine and verifier modules.

Everything here works on plain ``uint8`` arrays and integer codes so that numba
can compile it in nopython mode. Random numbers come from a
``numpy.random.Generator`` passed in by the caller; numba advances the same
PCG64 state numpy would, so a seeded generator reproduces results exactly.

Random-draw budget (one draw = one ``rng.random()`` double in [0, 1)):

* uniform solution: ``n`` draws, bit ``i`` is 1 iff ``u_i < 0.5``.
* mutation: ``n`` draws, bit ``i`` flips iff ``u_i < 1/n``.
* noiseless evaluation: 0 draws.
* one-bit noise: 1 draw (noise occurs iff ``u < p``), plus 1 draw selecting
  the flipped position ``floor(u * n)`` when noise occurs.
* bit-wise noise: 1 draw (noise occurs iff ``u < p``), plus ``n`` draws when
  noise occurs, bit ``i`` flips iff ``u_i < q``.
"""

import numpy as np
from numba import njit

ONEMAX = 0
LEADINGONES = 1

NOISELESS = 0
ONEBIT = 1
BITWISE = 2

HIT_STATE = 0
HIT_EVALUATION = 1


@njit(cache=True, nogil=True)
def fitness(problem, x):
    n = x.shape[0]
    if problem == ONEMAX:
        s = 0
        for i in range(n):
            s += x[i]
        return s
    for i in range(n):
        if x[i] == 0:
            return i
    return n


@njit(cache=True, nogil=True)
def random_solution_into(out, rng):
    for i in range(out.shape[0]):
        out[i] = 1 if rng.random() < 0.5 else 0


@njit(cache=True, nogil=True)
def mutate_into(x, out, rng):
    n = x.shape[0]
    rate = 1.0 / n
    for i in range(n):
        if rng.random() < rate:
            out[i] = 1 - x[i]
        else:
            out[i] = x[i]


@njit(cache=True, nogil=True)
def perturb_into(x, out, noise, p, q, rng):
    n = x.shape[0]
    for i in range(n):
        out[i] = x[i]
    if noise == NOISELESS:
        return
    if not rng.random() < p:
        return
    if noise == ONEBIT:
        pos = int(rng.random() * n)
        if pos >= n:
            pos = n - 1
        out[pos] = 1 - out[pos]
    else:
        for i in range(n):
            if rng.random() < q:
                out[i] = 1 - out[i]


@njit(cache=True, nogil=True)
def noisy_fitness(problem, x, noise, p, q, rng, buf):
    if noise == NOISELESS:
        return fitness(problem, x)
    perturb_into(x, buf, noise, p, q, rng)
    return fitness(problem, buf)


@njit(cache=True, nogil=True)
def sampled_sum(problem, x, noise, p, q, m, rng, buf):
    s = 0
    for _ in range(m):
        s += noisy_fitness(problem, x, noise, p, q, rng, buf)
    return s


@njit(cache=True, nogil=True)
def accepts(parent_sum, offspring_sum, m_parent, m_offspring):
    return offspring_sum * m_parent >= parent_sum * m_offspring


@njit(cache=True, nogil=True)
def is_all_ones(x):
    for i in range(x.shape[0]):
        if x[i] == 0:
            return False
    return True


@njit(cache=True, nogil=True)
def run_kernel(problem, n, noise, p, q, m, max_evaluations, hit_mode, rng, trace):
    """One (1+1)-EA run; returns (iterations, evaluations, hit, censored, final fitness).

    ``trace`` receives the true fitness of the maintained solution after each
    iteration while there is room in it; pass an empty array to skip tracing.
    """
    x = np.empty(n, np.uint8)
    y = np.empty(n, np.uint8)
    buf = np.empty(n, np.uint8)
    random_solution_into(x, rng)
    # the initial solution is evaluated once (m samples) even if it is optimal
    sampled_sum(problem, x, noise, p, q, m, rng, buf)
    evaluations = m
    iterations = 0
    if is_all_ones(x):
        return iterations, evaluations, True, False, n
    block = 2 * m
    tlen = trace.shape[0]
    while True:
        if evaluations + block > max_evaluations:
            return iterations, evaluations, False, True, fitness(problem, x)
        mutate_into(x, y, rng)
        off_sum = sampled_sum(problem, y, noise, p, q, m, rng, buf)
        par_sum = sampled_sum(problem, x, noise, p, q, m, rng, buf)
        evaluations += block
        iterations += 1
        offspring_optimal = is_all_ones(y)
        if accepts(par_sum, off_sum, m, m):
            x, y = y, x
        if iterations <= tlen:
            trace[iterations - 1] = fitness(problem, x)
        if is_all_ones(x) or (hit_mode == HIT_EVALUATION and offspring_optimal):
            return iterations, evaluations, True, False, fitness(problem, x)


@njit(cache=True, nogil=True)
def acceptance_trials(problem, parent, offspring, noise, p, q, m, trials, rng):
    """Count selections that keep the offspring over ``trials`` fresh evaluations."""
    n = parent.shape[0]
    buf = np.empty(n, np.uint8)
    hits = 0
    for _ in range(trials):
        off_sum = sampled_sum(problem, offspring, noise, p, q, m, rng, buf)
        par_sum = sampled_sum(problem, parent, noise, p, q, m, rng, buf)
        if accepts(par_sum, off_sum, m, m):
            hits += 1
    return hits


@njit(cache=True, nogil=True)
def compare_trials(problem, x, y, noise, p, q, m, trials, rng):
    """Count trials with sum of m draws at x >= sum of m draws at y."""
    n = x.shape[0]
    buf = np.empty(n, np.uint8)
    hits = 0
    for _ in range(trials):
        sx = sampled_sum(problem, x, noise, p, q, m, rng, buf)
        sy = sampled_sum(problem, y, noise, p, q, m, rng, buf)
        if sx >= sy:
            hits += 1
    return hits


@njit(cache=True, nogil=True)
def drift_trials(problem, n, noise, p, q, m, level, trials, rng):
    """Sum and sum of squares of the one-step decrease of the number of 0-bits.

    Each trial builds a fresh state with exactly ``level`` 0-bits placed
    uniformly at random (partial Fisher-Yates: ``level`` draws), then performs
    one mutation plus noisy selection step.
    """
    x = np.empty(n, np.uint8)
    y = np.empty(n, np.uint8)
    buf = np.empty(n, np.uint8)
    idx = np.empty(n, np.int64)
    total = 0.0
    total_sq = 0.0
    for _ in range(trials):
        for i in range(n):
            idx[i] = i
            x[i] = 1
        for i in range(level):
            j = i + int(rng.random() * (n - i))
            if j >= n:
                j = n - 1
            tmp = idx[i]
            idx[i] = idx[j]
            idx[j] = tmp
            x[idx[i]] = 0
        mutate_into(x, y, rng)
        off_sum = sampled_sum(problem, y, noise, p, q, m, rng, buf)
        par_sum = sampled_sum(problem, x, noise, p, q, m, rng, buf)
        after = level
        if accepts(par_sum, off_sum, m, m):
            after = n - fitness(ONEMAX, y)
        d = float(level - after)
        total += d
        total_sq += d * d
    return total, total_sq
