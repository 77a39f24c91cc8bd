"""FIN diffusion Z = B[rho] by three independent routes.

``jump_chain``
    Exact Markov chain of B[mu] for the truncated atomic measure mu: from
    atom i with gaps g_l, g_r it jumps left at rate 1/(2 v_i g_l) and right
    at rate 1/(2 v_i g_r).  An outermost atom has an infinite outer gap (B
    returns with zero clock), so the chain is exact for the windowed measure;
    reaching an outermost atom is counted as an edge event.
``rescaled_btm``
    eps * X_{t eps^{-(1+alpha)/alpha}} for a fresh Pareto environment.
``path_oracle``
    Brute force: a random walk with space step delta and time step delta**2
    stands in for B, local time at each atom is occupation of a bin of width
    h divided by h, and the clock is inverted directly.
"""
from dataclasses import dataclass, field

import numpy as np
from numba import njit, prange

from ._rng import replica_seeds
from .btm import DEFAULT_EVENT_CAP, Trajectory, btm_positions
from .env import AtomicMeasure, _check_alpha, atom_density
from .errors import CapExceededError, ParameterError

METHODS = ("jump_chain", "rescaled_btm", "path_oracle")
DEFAULT_STEP_CAP = 2 * 10**9
PAIR_RATIO = 32.0


@dataclass(frozen=True)
class FinConfig:
    alpha: float = 0.5
    method: str = "jump_chain"
    v_min: float = 1e-3
    L: float = 20.0
    epsilon: float = 0.01
    h: float = 2e-3
    delta: float = 2e-3
    mode: str = "annealed"
    cap: int = DEFAULT_EVENT_CAP

    def __post_init__(self):
        _check_alpha(self.alpha)
        if self.method not in METHODS:
            raise ParameterError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if self.mode not in ("annealed", "quenched"):
            raise ParameterError(f"mode must be 'annealed' or 'quenched', got {self.mode!r}")
        for name in ("v_min", "L", "epsilon", "h", "delta"):
            if not getattr(self, name) > 0:
                raise ParameterError(f"{name} must be positive")
        if self.epsilon > 1:
            raise ParameterError("epsilon must lie in (0, 1]")
        if self.method == "rescaled_btm" and self.mode == "quenched":
            raise ParameterError("rescaled_btm draws a fresh environment per replica")


@dataclass
class FinSample:
    """Batch output; ``edge`` counts replicas that touched the window edge."""

    values: np.ndarray
    edge: np.ndarray = field(default=None)
    n_events: np.ndarray = field(default=None)

    @property
    def edge_fraction(self):
        return 0.0 if self.edge is None else float(np.mean(self.edge))


# -- jump chain ----------------------------------------------------------------

@njit(cache=True, inline="always")
def _chain_move_rates(rl, rr, v):
    """Holding time and direction (-1, +1, or 0 if pinned) from the two
    inverse gaps; one uniform serves both the direction and the holding time."""
    tot = rl + rr
    if tot == 0.0:
        return np.inf, 0
    w = np.random.random() * tot
    if w < rl:
        return -2.0 * v * np.log(1.0 - w / rl) / tot, -1
    return -2.0 * v * np.log(1.0 - (w - rl) / rr) / tot, 1


@njit(cache=True, inline="always")
def _chain_move(x_here, x_left, x_right, v, has_left, has_right):
    rl = 1.0 / (x_here - x_left) if has_left else 0.0
    rr = 1.0 / (x_right - x_here) if has_right else 0.0
    return _chain_move_rates(rl, rr, v)


@njit(cache=True, inline="always")
def _start_index(xs):
    """Index of the first atom B hits from 0 (gambler's ruin)."""
    n = xs.size
    j = np.searchsorted(xs, 0.0)
    if j == n:
        return n - 1
    if j == 0 or xs[j] == 0.0:
        return j
    xl = xs[j - 1]
    xr = xs[j]
    if np.random.random() * (xr - xl) < -xl:
        return j
    return j - 1


@njit(cache=True)
def _jc_quenched_one(xs, vs, t_max, hit_b, cap):
    n = xs.size
    i = _start_index(xs)
    s = 0.0
    k = 0
    edge = i == 0 or i == n - 1
    hit = hit_b > 0 and xs[i] <= -hit_b
    trunc = False
    while not hit:
        hl = i > 0
        hr = i < n - 1
        hold, d = _chain_move(xs[i], xs[i - 1] if hl else 0.0, xs[i + 1] if hr else 0.0,
                              vs[i], hl, hr)
        if s + hold > t_max:
            break
        s += hold
        i += d
        k += 1
        if i == 0 or i == n - 1:
            edge = True
        if hit_b > 0 and xs[i] <= -hit_b:
            hit = True
        elif k >= cap:
            trunc = True
            break
    return xs[i], s, hit, edge, k, trunc


@njit(cache=True, parallel=True)
def _jc_quenched_batch(seeds, xs, vs, t_max, hit_b, cap, out_x, out_s, out_hit, out_edge,
                       out_k, out_trunc):
    for r in prange(seeds.size):
        np.random.seed(seeds[r])
        x, s, hit, edge, k, trunc = _jc_quenched_one(xs, vs, t_max, hit_b, cap)
        out_x[r] = x
        out_s[r] = s
        out_hit[r] = hit
        out_edge[r] = edge
        out_k[r] = k
        out_trunc[r] = trunc


@njit(cache=True)
def _jc_record(seed, xs, vs, t_max, cap):
    np.random.seed(seed)
    n = xs.size
    i = _start_index(xs)
    times = np.empty(64)
    pos = np.empty(64)
    s = 0.0
    k = 0
    edge = i == 0 or i == n - 1
    while True:
        hl = i > 0
        hr = i < n - 1
        hold, d = _chain_move(xs[i], xs[i - 1] if hl else 0.0, xs[i + 1] if hr else 0.0,
                              vs[i], hl, hr)
        if s + hold > t_max:
            break
        s += hold
        i += d
        if k == times.size:
            times = np.concatenate((times, np.empty(k)))
            pos = np.concatenate((pos, np.empty(k)))
        times[k] = s
        pos[k] = xs[i]
        k += 1
        if i == 0 or i == n - 1:
            edge = True
        if k >= cap:
            break
    return times[:k].copy(), pos[:k].copy(), edge, k >= cap


@njit(cache=True, inline="always")
def _new_atom(last, direction, lam, v_min, inv_alpha, L):
    pos = last + direction * np.random.exponential() / lam
    if abs(pos) > L:
        return pos, -1.0
    return pos, v_min * (1.0 - np.random.random()) ** inv_alpha


@njit(cache=True)
def _grow(a, at_front):
    out = np.zeros(2 * a.size)
    if at_front:
        out[a.size:] = a
    else:
        out[:a.size] = a
    return out


@njit(cache=True)
def _pair_excursion(va, vb, ra, rin, rb, tau):
    """Bounces across a short gap between atoms a and b, started at a.

    ``ra`` and ``rb`` are the inverse outer gaps, ``rin`` the inverse inner
    gap.  The number of a->b->a round trips before leaving is geometric and
    the holds at each atom are i.i.d. exponentials, so the whole excursion
    costs O(1).  Returns ``(duration, jumps, side, stopped)``: ``side`` is
    the atom the walk leaves from (0 = a, 1 = b), or, when the excursion
    outlasts ``tau``, the atom occupied at ``tau``, located by splitting the
    gamma sums with beta variates.
    """
    la = (ra + rin) / (2.0 * va)
    lb = (rb + rin) / (2.0 * vb)
    qa = ra / (ra + rin)
    qb = rb / (rb + rin)
    pe = qa + (1.0 - qa) * qb
    m_pairs = int(np.floor(np.log(1.0 - np.random.random()) / np.log1p(-pe)))
    e = 1 if np.random.random() * pe >= qa else 0
    A = np.random.gamma(m_pairs, 1.0 / la) if m_pairs > 0 else 0.0
    B = np.random.gamma(m_pairs, 1.0 / lb) if m_pairs > 0 else 0.0
    fa = np.random.exponential(1.0 / la)
    fb = np.random.exponential(1.0 / lb) if e else 0.0
    T = A + B + fa + fb
    if T <= tau:
        return T, 2 * m_pairs + 1 + e, e, False
    if A + B > tau:
        m = m_pairs
        base = 0.0
        j = 0
        while m > 1:
            m1 = m // 2
            A1 = A * np.random.beta(m1, m - m1)
            B1 = B * np.random.beta(m1, m - m1)
            if base + A1 + B1 > tau:
                A, B, m = A1, B1, m1
            else:
                base += A1 + B1
                j += m1
                A, B, m = A - A1, B - B1, m - m1
        at_b = 1 if base + A <= tau else 0
        return tau, 2 * j + at_b, at_b, True
    at_b = 1 if tau - (A + B) >= fa else 0
    return tau, 2 * m_pairs + at_b, at_b, True


@njit(cache=True)
def _jc_annealed_one(alpha, v_min, L, t_max, hit_b, cap, pair_ratio):
    """One replica with atoms generated lazily outward from the origin.

    Generating outward in position order gives the same law as drawing every
    atom of the window up front.  ``bg[i]`` caches 1/(x[i+1] - x[i]).  The
    inner loop runs while both neighbours of the current atom exist; frontier
    growth and the outer atoms of the window are handled outside it.
    Pairs of atoms whose gap is ``pair_ratio`` times shorter than their
    outer gaps are crossed in one exact excursion step (0 disables this).
    """
    lam = v_min ** (-alpha)
    inv_alpha = -1.0 / alpha
    m = 1024
    bx = np.empty(m)
    bv = np.empty(m)
    bg = np.zeros(m)
    c = m // 2
    p, v = _new_atom(0.0, 1.0, lam, v_min, inv_alpha, L)
    r_done = v < 0
    hi = c - 1
    if not r_done:
        hi = c
        bx[c] = p
        bv[c] = v
    p, v = _new_atom(0.0, -1.0, lam, v_min, inv_alpha, L)
    l_done = v < 0
    lo = c
    if not l_done:
        lo = c - 1
        bx[lo] = p
        bv[lo] = v
        if not r_done:
            bg[lo] = 1.0 / (bx[c] - p)
    if lo > hi:
        return 0.0, 0.0, False, True, 0, False
    if r_done:
        i = lo
    elif l_done:
        i = hi
    else:
        i = c if np.random.random() * (bx[c] - bx[c - 1]) < -bx[c - 1] else c - 1
    neg_b = -hit_b if hit_b > 0 else -np.inf
    s = 0.0
    k = 0
    it = 0  # loop iterations; the cap bounds work, k counts jumps
    edge = False
    trunc = False
    hit = bx[i] <= neg_b
    while not hit:
        if i == hi and not r_done:
            if hi + 1 == bx.size:
                bx = _grow(bx, False)
                bv = _grow(bv, False)
                bg = _grow(bg, False)
            p, v = _new_atom(bx[hi], 1.0, lam, v_min, inv_alpha, L)
            if v > 0:
                bg[hi] = 1.0 / (p - bx[hi])
                hi += 1
                bx[hi] = p
                bv[hi] = v
            else:
                r_done = True
        if i == lo and not l_done:
            if lo == 0:
                sz = bx.size
                bx = _grow(bx, True)
                bv = _grow(bv, True)
                bg = _grow(bg, True)
                i += sz
                lo += sz
                hi += sz
            p, v = _new_atom(bx[lo], -1.0, lam, v_min, inv_alpha, L)
            if v > 0:
                lo -= 1
                bx[lo] = p
                bv[lo] = v
                bg[lo] = 1.0 / (bx[lo + 1] - p)
            else:
                l_done = True
        if i == lo or i == hi:
            # outer atom of the window: the only jump is inward
            edge = True
            if lo == hi:
                break
            d = 1 if i == lo else -1
            r = bg[i] if i == lo else bg[i - 1]
            hold = -2.0 * bv[i] * np.log(1.0 - np.random.random()) / r
            if s + hold > t_max:
                break
            s += hold
            i += d
            k += 1
            it += 1
            if bx[i] <= neg_b:
                hit = True
            elif it >= cap:
                trunc = True
                break
            continue
        stop = False
        while lo < i < hi:
            rl = bg[i - 1]
            rr = bg[i]
            if pair_ratio > 0.0:
                side = 0
                if i + 1 < hi and rr > pair_ratio * (rl + bg[i + 1]):
                    side = 1
                    rb = bg[i + 1]
                elif i - 1 > lo and rl > pair_ratio * (rr + bg[i - 2]) and bx[i - 1] > neg_b:
                    side = -1
                    rb = bg[i - 2]
                if side != 0:
                    T, jumps, at_b, stopped = _pair_excursion(
                        bv[i], bv[i + side], rl if side == 1 else rr,
                        rr if side == 1 else rl, rb, t_max - s)
                    k += jumps
                    it += 1
                    if stopped:
                        i = i + side if at_b else i
                        stop = True
                        break
                    s += T
                    i = i + 2 * side if at_b else i - side
                    if bx[i] <= neg_b:
                        hit = True
                        break
                    if it >= cap:
                        trunc = True
                        stop = True
                        break
                    continue
            tot = rl + rr
            w = np.random.random() * tot
            if w < rl:
                hold = -2.0 * bv[i] * np.log(1.0 - w / rl) / tot
                d = -1
            else:
                hold = -2.0 * bv[i] * np.log(1.0 - (w - rl) / rr) / tot
                d = 1
            if s + hold > t_max:
                stop = True
                break
            s += hold
            i += d
            k += 1
            it += 1
            if bx[i] <= neg_b:
                hit = True
                break
            if it >= cap:
                trunc = True
                stop = True
                break
        if stop:
            break
    return bx[i], s, hit, edge, k, trunc


@njit(cache=True, parallel=True)
def _jc_annealed_batch(seeds, alpha, v_min, L, t_max, hit_b, cap, pair_ratio, out_x, out_s,
                       out_hit, out_edge, out_k, out_trunc):
    for r in prange(seeds.size):
        np.random.seed(seeds[r])
        x, s, hit, edge, k, trunc = _jc_annealed_one(alpha, v_min, L, t_max, hit_b, cap,
                                                     pair_ratio)
        out_x[r] = x
        out_s[r] = s
        out_hit[r] = hit
        out_edge[r] = edge
        out_k[r] = k
        out_trunc[r] = trunc


def _check_measure(measure):
    if len(measure) < 3 or not (measure.positions[0] < 0 < measure.positions[-1]):
        raise ParameterError("measure needs at least 3 atoms with atoms on both sides of 0")


def _run_chain(n, rng, t_max, hit_b, cap, measure=None, alpha=None, v_min=None, L=None,
               pair_ratio=None):
    seeds = replica_seeds(rng, n)
    out_x = np.empty(n)
    out_s = np.empty(n)
    out_hit = np.empty(n, dtype=np.bool_)
    out_edge = np.empty(n, dtype=np.bool_)
    out_k = np.empty(n, dtype=np.int64)
    out_trunc = np.empty(n, dtype=np.bool_)
    if measure is not None:
        _jc_quenched_batch(seeds, measure.positions, measure.weights, float(t_max),
                           float(hit_b), int(cap), out_x, out_s, out_hit, out_edge, out_k,
                           out_trunc)
    else:
        _check_alpha(alpha)
        if not (v_min > 0 and L > 0):
            raise ParameterError("v_min and L must be positive")
        ratio = PAIR_RATIO if pair_ratio is None else float(pair_ratio)
        _jc_annealed_batch(seeds, float(alpha), float(v_min), float(L), float(t_max),
                           float(hit_b), int(cap), ratio, out_x, out_s, out_hit, out_edge, out_k,
                           out_trunc)
    if out_trunc.any():
        raise CapExceededError(f"{int(out_trunc.sum())} jump-chain replicas hit the cap {cap}")
    return out_x, out_s, out_hit, out_edge, out_k


def simulate_fin_jumpchain(measure, t_max, rng=None, cap=DEFAULT_EVENT_CAP):
    """One jump-chain path on a fixed atomic measure."""
    _check_measure(measure)
    if not t_max > 0:
        raise ParameterError("t_max must be positive")
    seed = replica_seeds(rng, 1)[0]
    times, pos, edge, trunc = _jc_record(seed, measure.positions, measure.weights,
                                            float(t_max), int(cap))
    return Trajectory(0.0, times, pos, float(t_max), bool(edge or trunc))


def fin_jumpchain_samples(t, n, rng=None, measure=None, alpha=0.5, v_min=1e-3, L=20.0,
                          cap=DEFAULT_EVENT_CAP, pair_ratio=None):
    """Draws of Z_t; annealed (fresh atoms per replica) unless a measure is given.

    ``pair_ratio`` tunes the exact shortcut for bounces across very short
    gaps in annealed mode (default PAIR_RATIO, 0 turns it off).
    """
    if measure is not None:
        _check_measure(measure)
    x, _, _, edge, k = _run_chain(n, rng, t, 0.0, cap, measure, alpha, v_min, L, pair_ratio)
    return FinSample(x, edge, k)


def fin_hitting_times(b, t_max, n, rng=None, measure=None, alpha=0.5, v_min=1e-3, L=20.0,
                      cap=DEFAULT_EVENT_CAP, pair_ratio=None):
    """First time Z reaches ``(-inf, -b]``, or inf if that happens after t_max."""
    if not b > 0:
        raise ParameterError("hitting level b must be positive")
    if L <= b:
        raise ParameterError("window must extend beyond the hitting level")
    _, s, hit, edge, k = _run_chain(n, rng, t_max, b, cap, measure, alpha, v_min, L,
                                    pair_ratio)
    return FinSample(np.where(hit, s, np.inf), edge, k)


# -- rescaled BTM --------------------------------------------------------------

def rescaled_horizon(alpha, epsilon, t):
    return t * epsilon ** (-(1.0 + alpha) / alpha)


def simulate_fin_rescaled_btm(alpha, epsilon, t, rng=None, size=None, cap=DEFAULT_EVENT_CAP):
    """``eps * X_{t eps^{-(1+alpha)/alpha}}`` in a fresh environment."""
    _check_alpha(alpha)
    if not 0 < epsilon <= 1:
        raise ParameterError("epsilon must lie in (0, 1]")
    if not t > 0:
        raise ParameterError("t must be positive")
    horizon = rescaled_horizon(alpha, epsilon, t)
    if not np.isfinite(horizon):
        raise CapExceededError("time horizon overflows; use a larger epsilon")
    n = 1 if size is None else int(size)
    x, _, trunc = btm_positions(horizon, n, rng, alpha=alpha, cap=cap, return_info=True)
    if trunc.any():
        raise CapExceededError(f"event cap {cap} hit at horizon {horizon:.3g}; "
                               "use a larger epsilon")
    out = epsilon * x.astype(float)
    return float(out[0]) if size is None else out


# -- path-discretization oracle ------------------------------------------------

@njit(cache=True)
def _oracle_core(xs, vs, t, h, delta, R, cap, visits):
    J = int(np.ceil(R / delta))
    rate = np.zeros(2 * J + 1)
    half = 0.5 * h
    for a in range(xs.size):
        j0 = int(np.ceil((xs[a] - half) / delta))
        j1 = int(np.ceil((xs[a] + half) / delta)) - 1
        for j in range(max(j0, -J), min(j1, J) + 1):
            rate[j + J] += vs[a] / h
    d2 = delta * delta
    j = 0
    clock = 0.0
    steps = 0
    record = visits.size == rate.size
    while True:
        dc = rate[j + J] * d2
        if clock + dc > t:
            break
        clock += dc
        if record:
            visits[j + J] += 1
        if j == J:
            j -= 1
        elif j == -J:
            j += 1
        elif np.random.random() < 0.5:
            j -= 1
        else:
            j += 1
        steps += 1
        if steps >= cap:
            return j * delta, steps, True
    return j * delta, steps, False


@njit(cache=True, parallel=True)
def _oracle_quenched_batch(seeds, xs, vs, t, h, delta, R, cap, out_x, out_steps, out_trunc):
    dummy = np.empty(0, dtype=np.int64)
    for r in prange(seeds.size):
        np.random.seed(seeds[r])
        x, st, tr = _oracle_core(xs, vs, t, h, delta, R, cap, dummy)
        out_x[r] = x
        out_steps[r] = st
        out_trunc[r] = tr


@njit(cache=True, parallel=True)
def _oracle_annealed_batch(seeds, alpha, v_min, L, t, h, delta, cap, out_x, out_steps,
                           out_trunc):
    dummy = np.empty(0, dtype=np.int64)
    lam = v_min ** (-alpha)
    for r in prange(seeds.size):
        np.random.seed(seeds[r])
        m = np.random.poisson(2.0 * L * lam)
        xs = np.sort(-L + 2.0 * L * np.random.random(m))
        vs = v_min * (1.0 - np.random.random(m)) ** (-1.0 / alpha)
        x, st, tr = _oracle_core(xs, vs, t, h, delta, L, cap, dummy)
        out_x[r] = x
        out_steps[r] = st
        out_trunc[r] = tr


def _oracle_reach(measure, h):
    return max(abs(measure.lo), abs(measure.hi), float(np.max(np.abs(measure.positions)))) + h + 1.0


def simulate_fin_pathdiscrete(measure, t, h, delta, rng=None, size=None, cap=DEFAULT_STEP_CAP):
    """Brute-force Z_t on a fixed measure (cost grows like delta**-2)."""
    if not (t > 0 and h > 0 and delta > 0):
        raise ParameterError("t, h and delta must be positive")
    n = 1 if size is None else int(size)
    seeds = replica_seeds(rng, n)
    out_x = np.empty(n)
    out_steps = np.empty(n, dtype=np.int64)
    out_trunc = np.empty(n, dtype=np.bool_)
    _oracle_quenched_batch(seeds, measure.positions, measure.weights, float(t), float(h),
                           float(delta), _oracle_reach(measure, h), int(cap), out_x,
                           out_steps, out_trunc)
    if out_trunc.any():
        raise CapExceededError(f"path oracle hit the step cap {cap}")
    return float(out_x[0]) if size is None else out_x


def pathdiscrete_occupation(measure, t, h, delta, rng=None, cap=DEFAULT_STEP_CAP):
    """One oracle run with its site-visit counts.

    Returns ``(position, grid, visits, walk_time)`` where ``walk_time`` is
    the elapsed time of the approximating walk (steps * delta**2).
    """
    R = _oracle_reach(measure, h)
    J = int(np.ceil(R / delta))
    visits = np.zeros(2 * J + 1, dtype=np.int64)
    seed = replica_seeds(rng, 1)[0]
    x, steps, trunc = _seeded_oracle(seed, measure.positions, measure.weights, float(t),
                                     float(h), float(delta), R, int(cap), visits)
    if trunc:
        raise CapExceededError(f"path oracle hit the step cap {cap}")
    return x, np.arange(-J, J + 1) * delta, visits, steps * delta * delta


@njit(cache=True)
def _seeded_oracle(seed, xs, vs, t, h, delta, R, cap, visits):
    np.random.seed(seed)
    return _oracle_core(xs, vs, t, h, delta, R, cap, visits)


def fin_pathdiscrete_samples(t, n, rng=None, alpha=0.5, v_min=1e-3, L=20.0, h=2e-3,
                             delta=2e-3, cap=DEFAULT_STEP_CAP):
    """Annealed oracle draws: atoms on [-L, L] are resampled per replica."""
    _check_alpha(alpha)
    seeds = replica_seeds(rng, n)
    out_x = np.empty(n)
    out_steps = np.empty(n, dtype=np.int64)
    out_trunc = np.empty(n, dtype=np.bool_)
    _oracle_annealed_batch(seeds, float(alpha), float(v_min), float(L), float(t), float(h),
                           float(delta), int(cap), out_x, out_steps, out_trunc)
    if out_trunc.any():
        raise CapExceededError(f"path oracle hit the step cap {cap}")
    return FinSample(out_x, None, out_steps)


# -- dispatch ------------------------------------------------------------------

def sample_fin(config, t, n, rng=None, measure=None):
    """Draw ``n`` samples of Z_t with the configured method and mode."""
    if config.mode == "quenched" and measure is None:
        raise ParameterError("quenched mode needs a measure")
    if config.method == "jump_chain":
        if config.mode == "quenched":
            return fin_jumpchain_samples(t, n, rng, measure=measure, cap=config.cap)
        return fin_jumpchain_samples(t, n, rng, alpha=config.alpha, v_min=config.v_min,
                                     L=config.L, cap=config.cap)
    if config.method == "rescaled_btm":
        vals = simulate_fin_rescaled_btm(config.alpha, config.epsilon, t, rng, size=n,
                                         cap=config.cap)
        return FinSample(vals)
    if config.mode == "quenched":
        return FinSample(simulate_fin_pathdiscrete(measure, t, config.h, config.delta, rng,
                                                   size=n))
    return fin_pathdiscrete_samples(t, n, rng, alpha=config.alpha, v_min=config.v_min,
                                    L=config.L, h=config.h, delta=config.delta)


def default_window(alpha, t, x_max=0.0, floor=20.0):
    """Window half-width L generous enough that edge hits stay rare."""
    scale = t ** (alpha / (1.0 + alpha))
    return float(max(floor, 8.0 * scale, 4.0 * x_max))


__all__ = [
    "FinConfig", "FinSample", "METHODS", "AtomicMeasure", "atom_density",
    "simulate_fin_jumpchain", "fin_jumpchain_samples", "fin_hitting_times",
    "simulate_fin_rescaled_btm", "rescaled_horizon", "simulate_fin_pathdiscrete",
    "pathdiscrete_occupation", "fin_pathdiscrete_samples", "sample_fin", "default_window",
]
