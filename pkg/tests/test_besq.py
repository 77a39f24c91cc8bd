import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from traplab.besq import (besq_absorption_prob, besq_marginal, besq_mean, besq_path,
                          besq_transition)
from traplab.errors import ParameterError
from traplab.stats import ks_critical_value, ks_two_sample


def test_absorbing_zero(rng):
    assert besq_transition(0, 0.0, 1.0, rng) == 0.0


def test_dim2_mean(rng):
    y = besq_transition(2, np.zeros(10**6), 1.5, rng)
    assert abs(y.mean() - 3.0) < 3 * y.std() / 1e3


def test_dim0_absorption(rng):
    y = besq_transition(0, np.ones(10**6), 1.0, rng)
    p = 0.6065306597126334
    assert besq_absorption_prob(1.0, 1.0) == pytest.approx(p)
    assert abs(np.mean(y == 0) - p) < 3 * np.sqrt(p * (1 - p) / 1e6)


def test_dim_errors(rng):
    with pytest.raises(ParameterError):
        besq_transition(1, 1.0, 1.0, rng)
    with pytest.raises(ParameterError):
        besq_transition(2, -1.0, 1.0, rng)
    with pytest.raises(ParameterError):
        besq_transition(2, 1.0, 0.0, rng)


@pytest.mark.parametrize("dim", [0, 2])
@pytest.mark.parametrize("y", [0.3, 2.0])
def test_moments(dim, y, rng):
    v = besq_transition(dim, np.full(10**5, y), 0.7, rng)
    assert abs(v.mean() - besq_mean(dim, y, 0.7)) < 3 * v.std() / np.sqrt(v.size)


def test_dim2_from_zero_is_exponential(rng):
    n = 10**5
    y = besq_marginal(2, 0.0, 1.0, n, rng=rng)
    ref = 2.0 * rng.exponential(size=n)
    assert ks_two_sample(y, ref) < ks_critical_value(n, n)


@pytest.mark.parametrize("dim", [0, 2])
def test_exact_vs_euler(dim, rng):
    n = 5000
    e = besq_marginal(dim, 1.0, 1.0, n, "euler", rng)
    x = besq_marginal(dim, 1.0, 1.0, n, "exact", rng)
    assert ks_two_sample(e, x) < ks_critical_value(n, n)


def test_euler_step_bound(rng):
    with pytest.raises(ParameterError):
        besq_marginal(2, 1.0, 1.0, 10, "euler", rng, euler_step=0.01)
    with pytest.raises(ParameterError):
        besq_path(2, 1.0, [0.0, 1.0], "euler", rng, euler_step=0.01)


@pytest.mark.parametrize("c", [4.0, 16.0])
def test_scaling(c, rng):
    n = 20000
    a = besq_transition(2, np.full(n, c * 0.5), c * 1.0, rng) / c
    b = besq_transition(2, np.full(n, 0.5), 1.0, rng)
    assert ks_two_sample(a, b) < ks_critical_value(n, n)


def test_markov_time_homogeneity(rng):
    # value at s+t given value y at s: resample from y directly or by chaining
    n = 20000
    chained = besq_transition(2, besq_transition(2, np.full(n, 1.0), 0.4, rng), 0.6, rng)
    direct = besq_transition(2, np.full(n, 1.0), 1.0, rng)
    assert ks_two_sample(chained, direct) < ks_critical_value(n, n)


def test_absorption_nondecreasing(rng):
    grid = np.linspace(0, 4, 41)
    paths = [besq_path(0, 1.0, grid, rng=rng) for _ in range(3000)]
    frac = np.mean([p.values == 0 for p in paths], axis=0)
    assert np.all(np.diff(frac) >= 0)
    for p in paths:
        if p.absorbed_at is not None:
            assert np.all(p.values[p.absorbed_at:] == 0)


def test_path_methods(rng):
    grid = np.linspace(0.0, 1.0, 11)
    for method in ("exact", "euler"):
        p = besq_path(2, 0.0, grid, method, rng)
        assert p.values[0] == 0 and np.all(p.values[1:] > 0) and not p.underflow
    with pytest.raises(ParameterError):
        besq_path(2, 0.0, [1.0, 0.5], rng=rng)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([0, 2]), st.floats(0, 50), st.floats(1e-3, 10))
def test_nonnegative(seed, dim, y, dt):
    assert besq_transition(dim, y, dt, seed) >= 0.0
