"""Event-driven simulation of the symmetric Bouchaud trap model.

At site x the walk waits an exponential time with mean ``tau_x`` and then
steps to x-1 or x+1 with probability 1/2 each.  Two environment modes exist:

* frozen: a :class:`~traplab.env.TrapEnvironment`, optionally with a
  reflecting boundary at the window ends (outward jumps suppressed);
* annealed: every replica draws its own environment lazily, site by site,
  from a per-replica key.
"""
from dataclasses import dataclass

import numpy as np
from numba import njit, prange
from scipy.integrate import solve_ivp
from scipy.sparse import diags

from ._rng import replica_seeds, site_depth, splitmix64
from .env import _check_alpha
from .errors import CapExceededError, IntegrationError, ParameterError

DEFAULT_EVENT_CAP = 10**9
_ENV_TAG = np.uint64(0x5DEECE66D)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Piecewise-constant path: ``positions[k]`` is occupied from ``times[k]``."""

    start: float
    times: np.ndarray
    positions: np.ndarray
    t_end: float
    truncated: bool = False

    def position_at(self, t):
        k = np.searchsorted(self.times, t, side="right")
        return self.start if k == 0 else self.positions[k - 1]

    @property
    def n_events(self):
        return self.times.size


def _env_args(env):
    if env is None:
        return np.empty(0), 1, 0, np.uint64(0), 0.5
    return env.depths, env.z_lo, env.z_hi, np.uint64(env.key), env.alpha


@njit(cache=True, inline="always")
def _depth(z, depths, z_lo, z_hi, key, alpha):
    if z_lo <= z <= z_hi:
        return depths[z - z_lo]
    return site_depth(key, z, alpha)


@njit(cache=True, inline="always")
def _hold_and_step(x, tau, reflect, z_lo, z_hi):
    """Mean holding time and next site; reflection removes the outward jump."""
    if reflect:
        if x == z_lo and x == z_hi:
            return np.inf, x
        if x == z_lo:
            return 2.0 * tau, x + 1
        if x == z_hi:
            return 2.0 * tau, x - 1
    if np.random.random() < 0.5:
        return tau, x - 1
    return tau, x + 1


@njit(cache=True, parallel=True)
def _btm_positions(seeds, t, depths, z_lo, z_hi, key, alpha, reflect, annealed, cap,
                   out_x, out_n, out_trunc):
    for r in prange(seeds.size):
        np.random.seed(seeds[r])
        k = splitmix64(np.uint64(seeds[r]) ^ _ENV_TAG) if annealed else key
        x = 0
        s = 0.0
        n = 0
        trunc = False
        while True:
            tau = _depth(x, depths, z_lo, z_hi, k, alpha)
            hold, nxt = _hold_and_step(x, tau, reflect, z_lo, z_hi)
            s += hold * np.random.exponential()
            if s > t:
                break
            x = nxt
            n += 1
            if n >= cap:
                trunc = True
                break
        out_x[r] = x
        out_n[r] = n
        out_trunc[r] = trunc


@njit(cache=True, parallel=True)
def _btm_hitting(seeds, b, two_sided, depths, z_lo, z_hi, key, alpha, annealed, cap,
                 out_t, out_trunc):
    for r in prange(seeds.size):
        np.random.seed(seeds[r])
        k = splitmix64(np.uint64(seeds[r]) ^ _ENV_TAG) if annealed else key
        x = 0
        s = 0.0
        n = 0
        hit = b == 0
        while not hit:
            tau = _depth(x, depths, z_lo, z_hi, k, alpha)
            s += tau * np.random.exponential()
            if np.random.random() < 0.5:
                x -= 1
            else:
                x += 1
            n += 1
            hit = (x == b) or (two_sided and x == -b)
            if not hit and n >= cap:
                break
        if hit:
            out_t[r] = s
            out_trunc[r] = False
        else:
            out_t[r] = np.inf
            out_trunc[r] = True


@njit(cache=True)
def _btm_record(seed, t, depths, z_lo, z_hi, key, alpha, reflect, cap):
    np.random.seed(seed)
    times = np.empty(64)
    pos = np.empty(64, dtype=np.int64)
    x = 0
    s = 0.0
    n = 0
    trunc = False
    while True:
        tau = _depth(x, depths, z_lo, z_hi, key, alpha)
        hold, nxt = _hold_and_step(x, tau, reflect, z_lo, z_hi)
        s += hold * np.random.exponential()
        if s > t:
            break
        if n == times.size:
            times = np.concatenate((times, np.empty(n)))
            pos = np.concatenate((pos, np.empty(n, dtype=np.int64)))
        x = nxt
        times[n] = s
        pos[n] = x
        n += 1
        if n >= cap:
            trunc = True
            break
    return times[:n].copy(), pos[:n].copy(), trunc


def _check_env(env):
    if not env.z_lo <= 0 <= env.z_hi:
        raise ParameterError("environment window must contain the origin")


def simulate_btm_path(env, t_max, rng=None, reflect=False, cap=DEFAULT_EVENT_CAP):
    """One exact BTM path on [0, t_max] in a frozen environment."""
    if not t_max > 0:
        raise ParameterError("t_max must be positive")
    _check_env(env)
    seed = replica_seeds(rng, 1)[0]
    depths, z_lo, z_hi, key, alpha = _env_args(env)
    times, pos, trunc = _btm_record(seed, float(t_max), depths, z_lo, z_hi, key, alpha,
                                    bool(reflect), int(cap))
    return Trajectory(0, times, pos, float(t_max), bool(trunc))


def btm_positions(t, n, rng=None, env=None, alpha=None, reflect=False,
                  cap=DEFAULT_EVENT_CAP, return_info=False):
    """``n`` independent draws of X_t.

    With ``env`` given the environment is frozen (quenched); otherwise each
    replica gets a fresh Pareto(alpha) environment (annealed).
    """
    if t < 0:
        raise ParameterError("t must be nonnegative")
    annealed = env is None
    if annealed:
        if alpha is None:
            raise ParameterError("annealed sampling needs alpha")
        if reflect:
            raise ParameterError("reflection needs a frozen environment window")
        _check_alpha(alpha)
    else:
        _check_env(env)
    depths, z_lo, z_hi, key, a_env = _env_args(env)
    if annealed:
        a_env = float(alpha)
    seeds = replica_seeds(rng, n)
    out_x = np.empty(n, dtype=np.int64)
    out_n = np.empty(n, dtype=np.int64)
    out_trunc = np.empty(n, dtype=np.bool_)
    _btm_positions(seeds, float(t), depths, z_lo, z_hi, key, a_env, bool(reflect), annealed,
                   int(cap), out_x, out_n, out_trunc)
    if return_info:
        return out_x, out_n, out_trunc
    if out_trunc.any():
        raise CapExceededError(f"{int(out_trunc.sum())} replicas hit the event cap {cap}")
    return out_x


def btm_position_at(env, t, rng=None, reflect=False, cap=DEFAULT_EVENT_CAP):
    """X_t for a single replica without storing the path."""
    if t == 0:
        return 0
    return int(btm_positions(t, 1, rng, env=env, reflect=reflect, cap=cap)[0])


def btm_hitting_times(b, n, rng=None, env=None, alpha=None, two_sided=False,
                      cap=DEFAULT_EVENT_CAP):
    """First time the walk sits at ``b`` (or at ``+-b`` when two_sided).

    Replicas that reach the cap return ``inf``; a second array flags them.
    """
    annealed = env is None
    if annealed and alpha is None:
        raise ParameterError("annealed sampling needs alpha")
    if not annealed:
        _check_env(env)
    b = int(b)
    if two_sided:
        b = abs(b)
    depths, z_lo, z_hi, key, a_env = _env_args(env)
    if annealed:
        a_env = float(alpha)
    seeds = replica_seeds(rng, n)
    out_t = np.empty(n)
    out_trunc = np.empty(n, dtype=np.bool_)
    _btm_hitting(seeds, b, bool(two_sided), depths, z_lo, z_hi, key, a_env, annealed,
                 int(cap), out_t, out_trunc)
    return out_t, out_trunc


def btm_hitting_time(env, b, rng=None, two_sided=False, cap=DEFAULT_EVENT_CAP):
    t, trunc = btm_hitting_times(b, 1, rng, env=env, two_sided=two_sided, cap=cap)
    return float(t[0]), bool(trunc[0])


def btm_generator(env):
    """Sparse generator of the frozen chain on its window, reflecting ends."""
    tau = env.depths
    m = tau.size
    if m < 2:
        raise ParameterError("window needs at least two sites")
    rate = 0.5 / tau
    up = rate[:-1].copy()
    down = rate[1:].copy()
    diag = -(np.r_[0.0, down] + np.r_[up, 0.0])
    return diags([down, diag, up], [-1, 0, 1], format="csr")


def btm_exact_marginal(env, t, rtol=1e-10, atol=1e-13):
    """Law of X_t on the frozen window by integrating the forward equations.

    Returns ``(sites, probabilities)``.  The boundary is reflecting, matching
    ``btm_positions(..., reflect=True)``.
    """
    _check_env(env)
    if t < 0:
        raise ParameterError("t must be nonnegative")
    sites = env.sites
    p0 = np.zeros(sites.size)
    p0[-env.z_lo] = 1.0
    if t == 0:
        return sites, p0
    qt = btm_generator(env).T.tocsr()
    sol = solve_ivp(lambda _, p: qt @ p, (0.0, float(t)), p0, method="Radau",
                    jac=qt, rtol=rtol, atol=atol)
    if not sol.success:
        raise IntegrationError(f"forward equations failed: {sol.message} "
                               f"(nfev={sol.nfev}, steps={sol.t.size})")
    return sites, sol.y[:, -1]
