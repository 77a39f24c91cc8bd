"""Tail curves P(|X_t| >= x) and P(|Z_1| >= x), sub-Gaussian fits and the
self-similarity check for Z."""
from dataclasses import dataclass, field

import numpy as np

from ._rng import as_generator
from .btm import btm_positions
from .env import _check_alpha
from .errors import CapExceededError, ParameterError
from .fin import default_window, fin_jumpchain_samples, simulate_fin_rescaled_btm
from .stats import binomial_ci, fit_tail_exponent, ks_critical_value, ks_two_sample

TAIL_METHODS = ("jump_chain", "rescaled_btm")


def scaling_y(x, t, alpha):
    """y = (x / t^{alpha/(1+alpha)})^{1+alpha}."""
    x = np.asarray(x, dtype=float)
    return (x / t ** (alpha / (1.0 + alpha))) ** (1.0 + alpha)


@dataclass
class TailCurve:
    alpha: float
    process: str
    t: float
    x: np.ndarray
    y: np.ndarray
    k: np.ndarray
    n: int
    ci_lo: np.ndarray
    ci_hi: np.ndarray
    regime: float = None
    meta: dict = field(default_factory=dict)

    @property
    def p_hat(self):
        return self.k / self.n

    @property
    def unresolved(self):
        return self.k == 0

    def points(self):
        return [(float(y), int(k), int(self.n)) for y, k in zip(self.y, self.k)]

    def fit(self, **kw):
        return fit_tail_exponent(self.points(), **kw)

    def restricted(self, y_lo=-np.inf, y_hi=np.inf):
        m = (self.y >= y_lo) & (self.y <= y_hi)
        return TailCurve(self.alpha, self.process, self.t, self.x[m], self.y[m], self.k[m],
                         self.n, self.ci_lo[m], self.ci_hi[m], self.regime, dict(self.meta))

    def table(self):
        """Rows (t, x, y, k, n, p_hat, ci_lo, ci_hi)."""
        return [(self.t, float(x), float(y), int(k), int(self.n), float(k) / self.n,
                 float(lo), float(hi))
                for x, y, k, lo, hi in zip(self.x, self.y, self.k, self.ci_lo, self.ci_hi)]


def _counts(abs_vals, x_grid):
    s = np.sort(abs_vals)
    return s.size - np.searchsorted(s, x_grid, side="left")


def _curve(alpha, process, t, x_grid, abs_vals, level, regime, meta):
    x = np.sort(np.asarray(x_grid, dtype=float))
    if np.any(x < 0):
        raise ParameterError("x grid must be nonnegative")
    y = scaling_y(x, t, alpha)
    k = _counts(abs_vals, x)
    n = abs_vals.size
    lo, hi = binomial_ci(k, np.full(k.shape, n), level)
    return TailCurve(alpha, process, float(t), x, y, k.astype(np.int64), int(n),
                     np.asarray(lo), np.asarray(hi), regime, meta)


def estimate_tail_btm(alpha, t, x_grid, n_rep, rng=None, regime_bound=0.1, level=0.95,
                      min_rep=10**4):
    """Annealed tail of |X_t| for the BTM from one batch of replicas.

    Each replica contributes |X_t| to every threshold, so the events are
    nested in x and k is nonincreasing along the grid.
    """
    _check_alpha(alpha)
    if not t > 0:
        raise ParameterError("t must be positive")
    if n_rep < min_rep:
        raise ParameterError(f"n_rep must be at least {min_rep}")
    xmax = float(np.max(x_grid))
    if xmax / t > regime_bound:
        raise ParameterError(f"max(x)/t = {xmax / t:.3g} exceeds the regime bound {regime_bound}")
    x, n_ev, trunc = btm_positions(t, n_rep, rng, alpha=alpha, return_info=True)
    if trunc.any():
        raise CapExceededError(f"{int(trunc.sum())} BTM replicas hit the event cap")
    meta = {"statistic": "terminal |X_t|", "mean_events": float(n_ev.mean()),
            "regime_bound": regime_bound}
    return _curve(alpha, "btm", t, x_grid, np.abs(x).astype(float), level, xmax / t, meta)


def sample_fin_abs(alpha, n_rep, method="jump_chain", rng=None, v_min=1e-3, L=None,
                   epsilon=0.01, t=1.0, x_max=0.0):
    """Draws of Z_t with bookkeeping; returns (values, meta)."""
    if method not in TAIL_METHODS:
        raise ParameterError(f"method must be one of {TAIL_METHODS}")
    if method == "jump_chain":
        if L is None:
            L = default_window(alpha, t, x_max)
        s = fin_jumpchain_samples(t, n_rep, rng, alpha=alpha, v_min=v_min, L=L)
        meta = {"v_min": v_min, "L": L, "edge_fraction": s.edge_fraction,
                "mean_jumps": float(s.n_events.mean())}
        return s.values, meta
    vals = simulate_fin_rescaled_btm(alpha, epsilon, t, rng, size=n_rep)
    return vals, {"epsilon": epsilon}


def estimate_tail_fin(alpha, x_grid, n_rep, method="jump_chain", rng=None, v_min=1e-3, L=None,
                      epsilon=0.01, level=0.95):
    """Annealed tail of |Z_1| (t = 1 by self-similarity), y = x^{1+alpha}."""
    _check_alpha(alpha)
    vals, meta = sample_fin_abs(alpha, n_rep, method, rng, v_min, L, epsilon,
                                x_max=float(np.max(x_grid)))
    meta["method"] = method
    return _curve(alpha, f"fin:{method}", 1.0, x_grid, np.abs(vals), level, None, meta)


def curves_agree(c1, c2, min_successes=1):
    """Rows where Clopper-Pearson intervals of two curves overlap."""
    if not np.allclose(c1.y, c2.y):
        raise ParameterError("curves must share the y grid")
    resolved = (c1.k >= min_successes) & (c2.k >= min_successes)
    overlap = (c1.ci_lo <= c2.ci_hi) & (c2.ci_lo <= c1.ci_hi)
    return {"resolved": int(resolved.sum()), "overlap": bool(np.all(overlap[resolved])),
            "rows": overlap}


def scaling_invariance_check(alpha=0.5, lam=16.0, n=10**4, exponent_mode="derived", rng=None,
                             v_min=1e-3, level=0.05):
    """KS between lam^{-e} Z_lam and Z_1.

    ``derived`` uses e = alpha/(1+alpha); ``paper_literal`` uses (1+alpha)/alpha.
    """
    _check_alpha(alpha)
    if lam < 1:
        raise ParameterError("lambda must be at least 1")
    if n < 1000:
        raise ParameterError("n must be at least 1000")
    if exponent_mode == "derived":
        e = alpha / (1.0 + alpha)
    elif exponent_mode == "paper_literal":
        e = (1.0 + alpha) / alpha
    else:
        raise ParameterError("exponent_mode must be 'derived' or 'paper_literal'")
    rng = as_generator(rng)
    z1 = fin_jumpchain_samples(1.0, n, rng, alpha=alpha, v_min=v_min,
                               L=default_window(alpha, 1.0))
    zl = fin_jumpchain_samples(lam, n, rng, alpha=alpha, v_min=v_min,
                               L=default_window(alpha, lam))
    scaled = lam ** (-e) * zl.values
    d = ks_two_sample(scaled, z1.values)
    crit = ks_critical_value(n, n, level)
    return {"alpha": alpha, "lambda": lam, "mode": exponent_mode, "exponent": e, "n": n,
            "D": d, "critical_value": crit, "passed": bool(d < crit),
            "ratio_to_critical": d / crit,
            "edge_fraction": max(z1.edge_fraction, zl.edge_fraction)}
