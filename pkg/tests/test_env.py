import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from traplab.env import (AtomicMeasure, TrapEnvironment, atom_density, measure_mass,
                         pareto_inverse_cdf, sample_atoms, sample_stable_increment,
                         sample_trap_depths, standard_positive_stable, truncation_deficit)
from traplab.errors import ParameterError, WindowError
from traplab.stats import ks_critical_value, ks_two_sample


def test_inverse_cdf_examples():
    assert pareto_inverse_cdf(0.25, 0.5) == pytest.approx(16.0)
    assert pareto_inverse_cdf(1.0, 0.5) == 1.0
    assert pareto_inverse_cdf(1 - 1e-12, 0.5) == pytest.approx(1.0)


@pytest.mark.parametrize("alpha", [0.0, 1.0, -0.3, 1.5])
def test_bad_alpha(alpha):
    with pytest.raises(ParameterError):
        sample_trap_depths(alpha, (0, 10), 1)


def test_pareto_tail_frequencies(rng):
    n = 10**6
    env = sample_trap_depths(0.5, (0, n - 1), rng)
    assert env.depths.min() >= 1.0
    for u in (2.0, 10.0, 100.0):
        p = u**-0.5
        frac = np.mean(env.depths >= u)
        assert abs(frac - p) <= 3 * np.sqrt(p * (1 - p) / n)


def test_adjacent_depths_uncorrelated(rng):
    # ranks avoid the infinite-variance problem
    env = sample_trap_depths(0.5, (0, 10**5), rng)
    u = env.depths ** -0.5
    r = np.corrcoef(u[:-1], u[1:])[0, 1]
    assert abs(r) < 3 / np.sqrt(u.size)


def test_environment_is_seed_determined():
    a = sample_trap_depths(0.4, (-5, 5), 7)
    b = sample_trap_depths(0.4, (-5, 5), 7)
    assert np.array_equal(a.depths, b.depths) and a.key == b.key
    assert a.depth(1000) == b.depth(1000) >= 1.0


def test_environment_is_read_only():
    env = TrapEnvironment.constant(1.0, (-3, 3))
    with pytest.raises(ValueError):
        env.depths[0] = 2.0
    assert env.depth(2) == 1.0 and len(env) == 7


def test_laplace_transform_alpha_half(rng):
    v = sample_stable_increment(1.0, 0.5, rng, size=10**6)
    e = np.exp(-v)
    assert abs(e.mean() - 0.16991552946752622) < 3 * e.std() / 1e3


def test_zero_and_negative_length(rng):
    assert sample_stable_increment(0.0, 0.5, rng) == 0.0
    with pytest.raises(ParameterError):
        sample_stable_increment(-1.0, 0.5, rng)


def test_increments_add_in_law(rng):
    n = 20000
    two = sample_stable_increment(2.0, 0.6, rng, size=n)
    ones = sample_stable_increment(np.ones((n, 2)), 0.6, rng).sum(axis=1)
    assert ks_two_sample(two, ones) < ks_critical_value(n, n)


def test_standard_stable_laplace(rng):
    s = standard_positive_stable(0.7, rng, 10**5)
    e = np.exp(-2.0 * s)
    assert abs(e.mean() - np.exp(-(2.0**0.7))) < 4 * e.std() / np.sqrt(s.size)


def test_atom_count_and_deficit():
    assert atom_density(0.5, 0.01) == pytest.approx(10.0)
    assert truncation_deficit(0.5, 0.01) == pytest.approx(0.1)


def test_atom_counts_poisson(rng):
    counts = np.array([len(sample_atoms(0.5, (0, 1), 0.01, rng)) for _ in range(4000)])
    assert abs(counts.mean() - 10) < 3 * np.sqrt(10 / 4000)
    assert abs(counts.var() / counts.mean() - 1) < 0.1


def test_atoms_sorted_and_weighted(rng):
    m = sample_atoms(0.3, (-2, 3), 1e-3, rng)
    assert np.all(np.diff(m.positions) > 0)
    assert m.positions.min() >= -2 and m.positions.max() <= 3
    assert m.weights.min() >= 1e-3


def test_sample_atoms_errors(rng):
    with pytest.raises(ParameterError):
        sample_atoms(0.5, (0, 1), 0.0, rng)
    with pytest.raises(ParameterError):
        sample_atoms(0.5, (0, np.inf), 0.1, rng)
    assert len(sample_atoms(0.5, (1.0, 1.0), 0.01, rng)) == 0


def test_truncated_mass_vs_exact(rng):
    # truncated masses undershoot exact increments by the computed deficit
    alpha, v_min, n = 0.5, 0.01, 20000
    trunc = np.array([measure_mass(sample_atoms(alpha, (0, 1), v_min, rng), 0, 1)
                      for _ in range(n)])
    exact = sample_stable_increment(1.0, alpha, rng, size=n)
    # compare medians: means are infinite; the deficit is a location shift
    shift = np.median(exact) - np.median(trunc)
    assert 0 < shift < 3 * truncation_deficit(alpha, v_min)
    assert np.mean(trunc <= np.median(exact)) >= 0.5


def test_mass_scaling_in_law(rng):
    # lam^{-1/alpha} rho(0, lam] ~ rho(0, 1] (small v_min, KS against exact increments)
    alpha, lam, n = 0.5, 4.0, 3000
    v_min = 1e-5
    scaled = np.array([measure_mass(sample_atoms(alpha, (0, lam), v_min * lam**2, rng), 0, lam)
                       for _ in range(n)]) / lam ** (1 / alpha)
    exact = sample_stable_increment(1.0, alpha, rng, size=n)
    assert ks_two_sample(scaled, exact) < ks_critical_value(n, n)


def test_mass_outside_window():
    m = AtomicMeasure.from_atoms([0.1, 0.5], [1.0, 2.0], window=(0, 1))
    with pytest.raises(WindowError):
        measure_mass(m, -1, 0.5)
    assert measure_mass(m, 0.5, 0.5) == 0.0
    assert measure_mass(m, 0.1, 0.5) == 2.0  # half-open (a, b]


def test_measure_validation():
    with pytest.raises(ParameterError):
        AtomicMeasure(0.5, 0, 1, 0.1, np.array([0.2, 0.2]), np.array([1.0, 1.0]))
    with pytest.raises(ParameterError):
        AtomicMeasure(0.5, 0, 1, 0.1, np.array([0.2]), np.array([-1.0]))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**31), st.floats(-1.9, 1.9), st.floats(0, 1), st.floats(0, 1))
def test_mass_additive(seed, a, f1, f2):
    m = sample_atoms(0.5, (-2, 2), 0.05, seed)
    b = a + (2 - a) * f1
    c = b + (2 - b) * f2
    total = measure_mass(m, a, c)
    assert measure_mass(m, a, b) + measure_mass(m, b, c) == pytest.approx(total, rel=1e-12,
                                                                           abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.floats(1e-12, 1.0), st.floats(0.05, 0.95))
def test_depths_at_least_one(u, alpha):
    assert pareto_inverse_cdf(u, alpha) >= 1.0
