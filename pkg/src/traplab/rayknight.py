"""Local-time profiles of Brownian motion stopped at the first passage of -a,
Ray-Knight comparisons against exact BESQ draws, and the product lower bound
for the hitting event of the FIN diffusion.

The profile comes from a simple random walk with space step delta and time
step delta**2, run until it first reaches -a.  Two samplers give the same law
for the walk's visit counts:

``crossing``
    Edge-crossing construction.  With A = a / delta, let D_k be the number of
    downward steps from site k.  Then D_{-A+1} = 1, the upward steps from k are
    NegBin(D_k, 1/2) given D_k, and D_{k+1} = U_k + 1 below the start, U_k
    from the start upward.  Visits to k equal U_k + D_k.  Cost is the number
    of sites covered, not the number of steps.
``walk``
    The walk itself, step by step (cost ~ hitting time / delta**2, heavy
    tailed; capped).
"""
from dataclasses import dataclass

import numpy as np
from numba import njit, prange

from ._rng import as_generator, replica_seeds
from .besq import besq_transition
from .env import _check_alpha, atom_density, truncation_deficit
from .errors import CapExceededError, InsufficientDataError, ParameterError
from .fin import default_window, fin_hitting_times
from .stats import ks_two_sample, ks_critical_value

DEFAULT_SITE_CAP = 10**9
DEFAULT_STEP_CAP = 10**10


@dataclass(frozen=True, eq=False)
class LocalTimeProfile:
    """Bin estimates ``values`` of l(x, tau_{-a}) at ``centers``."""

    a: float
    h: float
    delta: float
    centers: np.ndarray
    values: np.ndarray
    hit_time: float
    site_lo: int = 0
    site_visits: np.ndarray = None

    def at(self, x):
        j = int(np.rint(x / self.h)) - int(np.rint(self.centers[0] / self.h))
        if j < 0 or j >= self.values.size:
            return 0.0
        return float(self.values[j])

    def occupation_total(self):
        return float(np.sum(self.values) * self.h)


@njit(cache=True, inline="always")
def _nb_half(d):
    return np.random.negative_binomial(d, 0.5) if d > 0 else 0


@njit(cache=True)
def _crossing_visits(A, cap):
    """Visits to sites -A+1, -A+2, ... until the walk's range ends."""
    buf = np.empty(max(2 * A, 16), dtype=np.int64)
    d = 1
    k = -A + 1
    n = 0
    while d > 0:
        u = _nb_half(d)
        if n == buf.size:
            if n >= cap:
                return buf[:n], True
            buf = np.concatenate((buf, np.empty(n, dtype=np.int64)))
        buf[n] = u + d
        n += 1
        d = u + 1 if k < 0 else u
        k += 1
    return buf[:n].copy(), False


@njit(cache=True)
def _walk_visits(A, cap):
    span = 4 * A + 16
    buf = np.zeros(span, dtype=np.int64)
    off = A - 1  # index of site k is k + off, so site -A+1 sits at 0
    k = 0
    steps = 0
    top = 0
    while k > -A:
        if k + off >= buf.size:
            buf = np.concatenate((buf, np.zeros(buf.size, dtype=np.int64)))
        buf[k + off] += 1
        if k > top:
            top = k
        k += -1 if np.random.random() < 0.5 else 1
        steps += 1
        if steps >= cap:
            return buf[:top + off + 1].copy(), True
    return buf[:top + off + 1].copy(), False


@njit(cache=True)
def _seeded_profile(seed, A, cap, use_walk):
    np.random.seed(seed)
    if use_walk:
        return _walk_visits(A, cap)
    return _crossing_visits(A, cap)


def _steps(a, delta):
    A = a / delta
    if abs(A - round(A)) > 1e-9 * max(1.0, A):
        raise ParameterError("a must be an integer multiple of delta")
    return int(round(A))


def _bin_index(k, delta, h):
    return np.floor(k * delta / h + 0.5 + 1e-9).astype(np.int64)


def local_time_profile_at_hit(a, h, delta, rng=None, method="crossing", cap=None):
    """One profile of bin-averaged local time at the first passage of -a."""
    if not (a > 0 and h > 0 and delta > 0):
        raise ParameterError("a, h and delta must be positive")
    if not delta < h:
        raise ParameterError("need delta < h")
    if method not in ("crossing", "walk"):
        raise ParameterError(f"unknown method {method!r}")
    A = _steps(a, delta)
    if cap is None:
        cap = DEFAULT_STEP_CAP if method == "walk" else DEFAULT_SITE_CAP
    seed = replica_seeds(rng, 1)[0]
    visits, trunc = _seeded_profile(seed, A, int(cap), method == "walk")
    if trunc:
        raise CapExceededError(f"profile sampler hit its cap {cap}")
    sites = np.arange(-A + 1, -A + 1 + visits.size)
    j = _bin_index(sites, delta, h)
    j0 = int(j[0])
    occ = np.bincount(j - j0, weights=visits * (delta * delta))
    centers = (np.arange(occ.size) + j0) * h
    hit_time = float(visits.sum()) * delta * delta
    return LocalTimeProfile(float(a), float(h), float(delta), centers, occ / h, hit_time,
                            -A + 1, visits)


@njit(cache=True, parallel=True)
def _probe_batch(seeds, A, cap, lo, hi, delta2_over_h, out, out_hit, out_trunc):
    m = lo.size
    for r in prange(seeds.size):
        np.random.seed(seeds[r])
        visits, trunc = _crossing_visits(A, cap)
        out_trunc[r] = trunc
        tot = 0
        for i in range(visits.size):
            tot += visits[i]
        out_hit[r] = tot
        for p in range(m):
            s = 0
            for k in range(lo[p], hi[p] + 1):
                i = k + A - 1
                if 0 <= i < visits.size:
                    s += visits[i]
            out[r, p] = s * delta2_over_h


def profile_values(a, probe_points, n, h, delta, rng=None, cap=DEFAULT_SITE_CAP):
    """Bin estimates at ``probe_points`` for ``n`` independent profiles.

    Returns ``(values, hit_times)`` with ``values`` of shape (n, len(points)).
    """
    A = _steps(a, delta)
    x = np.atleast_1d(np.asarray(probe_points, dtype=float))
    j = np.floor(x / h + 0.5 + 1e-9)
    lo = np.ceil((j - 0.5) * h / delta - 1e-9).astype(np.int64)
    hi = np.ceil((j + 0.5) * h / delta - 1e-9).astype(np.int64) - 1
    seeds = replica_seeds(rng, n)
    out = np.empty((n, x.size))
    out_hit = np.empty(n, dtype=np.int64)
    out_trunc = np.empty(n, dtype=np.bool_)
    _probe_batch(seeds, A, int(cap), lo, hi, delta * delta / h, out, out_hit, out_trunc)
    if out_trunc.any():
        raise CapExceededError(f"{int(out_trunc.sum())} profiles hit the site cap {cap}")
    return out, out_hit * (delta * delta)


def besq_profile_oracle(a, x, n, rng=None):
    """Exact draws of l(x, tau_{-a}) from the Ray-Knight description."""
    rng = as_generator(rng)
    if x <= -a:
        return np.zeros(n)
    if x <= 0:
        return besq_transition(2, np.zeros(n), x + a, rng)
    l0 = besq_transition(2, np.zeros(n), a, rng)
    return besq_transition(0, l0, x, rng)


def ray_knight_mean(a, x):
    return 0.0 if x <= -a else 2.0 * (min(x, 0.0) + a)


def absorption_oracle(a, x):
    """P(l(x, tau_{-a}) = 0) for x > 0, which is x / (x + a)."""
    return x / (x + a)


def rayknight_check(a=1.0, n_samples=10**4, probe_points=(-0.5, 0.0, 0.5, 1.0), delta=1e-3,
                    h=0.05, rng=None, level=0.05, absorption_points=(2.0,)):
    """KS of profile values against exact BESQ draws at each probe point.

    Bonferroni over probe points.  Also compares means and variances (3 s.e.)
    and the zero-mass fraction at ``absorption_points``.
    """
    if n_samples < 100:
        raise InsufficientDataError("rayknight_check needs at least 100 samples")
    pts = [float(p) for p in probe_points]
    if any(p <= -a for p in pts):
        raise ParameterError("probe points must lie above -a")
    rng = as_generator(rng)
    all_pts = pts + [float(p) for p in absorption_points]
    vals, hits = profile_values(a, all_pts, n_samples, h, delta, rng)
    per_level = level / max(1, len(pts))
    rows = []
    for i, x in enumerate(pts):
        ref = besq_profile_oracle(a, x, n_samples, rng)
        d = ks_two_sample(vals[:, i], ref)
        crit = ks_critical_value(n_samples, n_samples, per_level)
        v = vals[:, i]
        se_mean = np.sqrt(v.var(ddof=1) / n_samples + ref.var(ddof=1) / n_samples)
        rows.append({
            "x": x, "ks_D": d, "ks_crit": crit, "ks_pass": bool(d < crit),
            "mean": float(v.mean()), "mean_oracle": ray_knight_mean(a, x),
            "mean_se": float(np.sqrt(v.var(ddof=1) / n_samples)),
            "mean_diff_se": float(se_mean),
            "var": float(v.var(ddof=1)), "var_ref": float(ref.var(ddof=1)),
        })
    absorption = []
    for i, x in enumerate(absorption_points, start=len(pts)):
        frac = float(np.mean(vals[:, i] == 0.0))
        p0 = absorption_oracle(a, x)
        se = float(np.sqrt(p0 * (1 - p0) / n_samples))
        absorption.append({"x": float(x), "fraction": frac, "oracle": p0, "se": se,
                           "pass": bool(abs(frac - p0) <= 3 * se)})
    return {"a": a, "delta": delta, "h": h, "n": n_samples, "level": level,
            "probes": rows, "absorption": absorption,
            "passed": all(r["ks_pass"] for r in rows) and all(r["pass"] for r in absorption),
            "mean_hit_time_note": "first-passage time has infinite mean",
            "max_hit_time": float(hits.max())}


# -- product lower bound for the hitting event ----------------------------------

@njit(cache=True)
def _rhs_trials(seed, dim, a, horizon, barrier, alpha, v_min, n, out):
    """``out[r]`` is True when sum_i v_i Y(x_i) <= 1 over atoms on (0, horizon]
    (and Y(horizon) <= barrier when barrier > 0); Y exact BESQ(dim) from a."""
    np.random.seed(seed)
    lam = v_min ** (-alpha)
    inv = -1.0 / alpha
    for r in range(n):
        y = a
        x = 0.0
        total = 0.0
        ok = True
        while True:
            gap = np.random.exponential() / lam
            if x + gap > horizon:
                break
            x += gap
            nn = np.random.poisson(y / (2.0 * gap))
            k = nn + dim // 2
            y = 2.0 * gap * np.random.gamma(k) if k > 0 else 0.0
            if dim == 0 and y == 0.0:
                break
            total += v_min * (1.0 - np.random.random()) ** inv * y
            if total > 1.0:
                ok = False
                break
        if ok and barrier > 0:
            rest = horizon - x
            if rest > 0:
                nn = np.random.poisson(y / (2.0 * rest))
                k = nn + dim // 2
                y = 2.0 * rest * np.random.gamma(k) if k > 0 else 0.0
            ok = y <= barrier
        out[r] = ok


def _factor(dim, a, horizon, barrier, alpha, v_min, n, rng):
    out = np.empty(n, dtype=np.bool_)
    _rhs_trials(int(as_generator(rng).integers(0, 2**32)), dim, float(a), float(horizon),
                float(barrier), float(alpha), float(v_min), int(n), out)
    return int(out.sum())


def g1_level(n, alpha):
    return n ** (1.0 / (1.0 + alpha)) * (n + 1) / n


def probe_lemma_G1(n, alpha=0.5, a=1.0, n_samples=10**5, rng=None, v_min=1e-3,
                   v_min_rhs=1e-4, L=None):
    """Monte Carlo of both sides of the product lower bound for
    P(H_{-b} <= (n+2)/n), b = n^{1/(1+alpha)} (n+1)/n.

    lhs: hitting probability from the FIN jump chain.
    rhs: P_a(int X drho <= 1) * P_a(int_0^1 Y drho <= 1; Y_1 <= a)^{n+1} with X
    a BESQ(0) and Y a BESQ(2), both from a, on independent truncated atoms.
    """
    _check_alpha(alpha)
    if not (1 <= int(n) <= 8):
        raise ParameterError("n must lie in 1..8")
    if not a > 0:
        raise ParameterError("a must be positive")
    n = int(n)
    rng = as_generator(rng)
    b = g1_level(n, alpha)
    T = (n + 2) / n
    if L is None:
        L = default_window(alpha, T, b)
    hit = fin_hitting_times(b, T, n_samples, rng, alpha=alpha, v_min=v_min, L=L)
    k_l = int(np.isfinite(hit.values).sum())
    p_l = k_l / n_samples
    se_l = np.sqrt(p_l * (1 - p_l) / n_samples)

    k_x = _factor(0, a, np.inf, 0.0, alpha, v_min_rhs, n_samples, rng)
    k_y = _factor(2, a, 1.0, a, alpha, v_min_rhs, n_samples, rng)
    p_x = k_x / n_samples
    p_y = k_y / n_samples
    rhs = p_x * p_y ** (n + 1)
    if k_x and k_y:
        rel = np.sqrt((1 - p_x) / (n_samples * p_x)
                      + (n + 1) ** 2 * (1 - p_y) / (n_samples * p_y))
        se_r = rhs * rel
    else:
        se_r = 0.0
    combined = float(np.hypot(se_l, se_r))
    unresolved = k_x == 0 or k_y == 0
    inconclusive = unresolved or (n_samples < 1000 and min(k_l, k_x, k_y) == 0)
    return {
        "n": n, "alpha": alpha, "a": a, "level": b, "horizon": T, "n_samples": n_samples,
        "lhs": p_l, "lhs_se": float(se_l), "lhs_edge_fraction": hit.edge_fraction,
        "rhs": rhs, "rhs_se": float(se_r), "factor_X": p_x, "factor_Y": p_y,
        "combined_se": combined, "v_min_lhs": v_min, "v_min_rhs": v_min_rhs,
        "rhs_truncation_deficit": truncation_deficit(alpha, v_min_rhs),
        "rhs_atom_density": atom_density(alpha, v_min_rhs),
        "inconclusive": bool(inconclusive),
        "passed": bool(p_l >= rhs - 3.0 * combined),
    }
