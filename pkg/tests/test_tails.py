import numpy as np
import pytest

from traplab.errors import ParameterError
from traplab.tails import (curves_agree, estimate_tail_btm, estimate_tail_fin,
                           scaling_invariance_check, scaling_y)


def test_scaling_y():
    assert scaling_y(2.0, 1.0, 0.5) == pytest.approx(2.0**1.5)
    assert scaling_y(2.0, 8.0, 0.5) == pytest.approx(1.0)


def test_btm_curve_monotone(rng):
    c = estimate_tail_btm(0.5, 100.0, np.arange(1, 11), 10**4, rng)
    assert np.all(np.diff(c.k) <= 0)
    assert np.all(c.ci_lo <= c.p_hat) and np.all(c.p_hat <= c.ci_hi)
    assert c.regime == pytest.approx(0.1)


def test_btm_regime_guard(rng):
    with pytest.raises(ParameterError):
        estimate_tail_btm(0.5, 10.0, [5.0], 10**4, rng)
    with pytest.raises(ParameterError):
        estimate_tail_btm(0.5, 100.0, [5.0], 100, rng)


def test_fin_curve_and_fit(rng):
    c = estimate_tail_fin(0.5, np.linspace(0.25, 3, 12), 2 * 10**4, rng=rng, v_min=1e-2)
    f = c.fit()
    assert f.slope > 0 and f.r_squared > 0.9
    assert len(c.table()) == 12
    sub = c.restricted(0.5, 3.0)
    assert sub.y.min() >= 0.5 and sub.y.max() <= 3.0


def test_fin_methods_agree(rng):
    x = np.linspace(0.25, 2, 8)
    level = 1 - 0.05 / x.size  # joint statement over rows
    a = estimate_tail_fin(0.5, x, 10**4, "jump_chain", rng, v_min=1e-3, level=level)
    b = estimate_tail_fin(0.5, x, 10**4, "rescaled_btm", rng, epsilon=0.01, level=level)
    assert curves_agree(a, b)["overlap"]


def test_scaling_check_modes(rng):
    d = scaling_invariance_check(0.5, 16.0, 4000, "derived", rng, v_min=1e-2)
    lit = scaling_invariance_check(0.5, 16.0, 4000, "paper_literal", rng, v_min=1e-2)
    assert d["passed"] and lit["ratio_to_critical"] > 3
    with pytest.raises(ParameterError):
        scaling_invariance_check(0.5, 16.0, 4000, "other", rng)
