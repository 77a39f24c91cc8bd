"""Squared Bessel processes of dimension 2 and 0.

Exact transitions use the Poisson-Gamma mixture: given the current value y,
draw N ~ Poisson(y / (2 dt)); the next value is 2 dt * Gamma(N + d/2).  For
d = 0 and N = 0 the process has been absorbed at 0.

The Euler scheme works on the Bessel coordinate R = sqrt(Y),
``dR = (d - 1) / (2 R) dt + dW``, and squares the result.  For d = 2 the drift
is taken implicitly (R' = b + dt / (2 R') has a positive root), since the
explicit step explodes near 0; for d = 0 the explicit step is absorbed once R
falls to the floor.  Euler exists only as a cross-check of the exact sampler.
"""
from dataclasses import dataclass

import numpy as np
from numba import njit

from ._rng import as_generator
from .errors import ParameterError

DIMS = (0, 2)
EULER_FLOOR = 1e-8


def _check_dim(dim):
    if dim not in DIMS:
        raise ParameterError(f"dimension must be 0 or 2, got {dim!r}")


@dataclass(frozen=True, eq=False)
class BesqPath:
    dim: int
    grid: np.ndarray
    values: np.ndarray
    absorbed_at: int = None
    underflow: bool = False

    def value_at_end(self):
        return float(self.values[-1])


def besq_transition(dim, y, dt, rng=None, size=None):
    """Exact draw of Y_{s+dt} given Y_s = y.  ``y`` may be an array."""
    _check_dim(dim)
    if not dt > 0:
        raise ParameterError("dt must be positive")
    y = np.asarray(y, dtype=float)
    if np.any(y < 0):
        raise ParameterError("BESQ values are nonnegative")
    rng = as_generator(rng)
    shape = y.shape if size is None else size
    n = rng.poisson(y / (2.0 * dt), size=shape)
    shape_par = n + dim // 2
    g = rng.gamma(np.maximum(shape_par, 1), size=shape)
    out = np.where(shape_par > 0, 2.0 * dt * g, 0.0)
    return float(out) if out.ndim == 0 else out


def besq_mean(dim, y, t):
    return y + dim * t


def besq_absorption_prob(y, t):
    """P(BESQ(0) from y is at 0 by time t) = exp(-y / (2t))."""
    return float(np.exp(-y / (2.0 * t)))


@njit(cache=True, inline="always")
def _euler_step(r, drift_sign, dt, dw, floor):
    if drift_sign > 0:
        b = r + dw
        return max(floor, 0.5 * (b + np.sqrt(b * b + 2.0 * dt)))
    return r - 0.5 / max(r, floor) * dt + dw


@njit(cache=True)
def _euler_core(r0, drift_sign, steps, dt, floor, absorb, noise):
    r = r0
    sq = np.sqrt(dt)
    for k in range(steps):
        if absorb and r <= floor:
            return 0.0, k
        r = _euler_step(r, drift_sign, dt, sq * noise[k], floor)
    if absorb and r <= floor:
        return 0.0, steps
    return r, -1


def _euler_segment(dim, y, dt_total, step, rng):
    k = max(1, int(np.ceil(dt_total / step)))
    noise = rng.standard_normal(k)
    r, hit = _euler_core(np.sqrt(y), 1.0 if dim == 2 else -1.0, k, dt_total / k,
                         EULER_FLOOR, dim == 0, noise)
    return r * r, hit >= 0


def besq_path(dim, y0, grid, method="exact", rng=None, euler_step=None):
    """Sample Y on ``grid`` (first grid point carries y0)."""
    _check_dim(dim)
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 1 or np.any(np.diff(grid) <= 0):
        raise ParameterError("grid must be strictly increasing")
    if y0 < 0:
        raise ParameterError("y0 must be nonnegative")
    rng = as_generator(rng)
    span = grid[-1] - grid[0]
    vals = np.empty(grid.size)
    vals[0] = y0
    if method == "exact":
        for k in range(1, grid.size):
            vals[k] = besq_transition(dim, vals[k - 1], grid[k] - grid[k - 1], rng)
    elif method == "euler":
        step = 1e-3 * span if euler_step is None else float(euler_step)
        if span > 0 and step > 1e-3 * span:
            raise ParameterError("Euler step must be at most 1e-3 of the grid span")
        for k in range(1, grid.size):
            if dim == 0 and vals[k - 1] == 0.0:
                vals[k] = 0.0
                continue
            vals[k], _ = _euler_segment(dim, vals[k - 1], grid[k] - grid[k - 1], step, rng)
    else:
        raise ParameterError(f"unknown method {method!r}")
    zero = np.flatnonzero(vals[1:] == 0.0)
    absorbed = None
    underflow = False
    if zero.size:
        if dim == 0:
            absorbed = int(zero[0]) + 1
            vals[absorbed:] = 0.0
        else:
            underflow = True
    return BesqPath(dim, grid, vals, absorbed, underflow)


@njit(cache=True)
def _euler_batch(r0, drift_sign, steps, dt, floor, absorb, seed, out):
    np.random.seed(seed)
    sq = np.sqrt(dt)
    for i in range(out.size):
        r = r0[i]
        dead = absorb and r <= floor
        for _ in range(steps):
            if dead:
                break
            r = _euler_step(r, drift_sign, dt, sq * np.random.standard_normal(), floor)
            if absorb and r <= floor:
                dead = True
        out[i] = 0.0 if dead else r * r


def besq_marginal(dim, y0, t, n, method="exact", rng=None, euler_step=None):
    """``n`` independent draws of Y_t from Y_0 = y0 (scalar or length-n array)."""
    _check_dim(dim)
    if not t > 0:
        raise ParameterError("t must be positive")
    rng = as_generator(rng)
    y0 = np.broadcast_to(np.asarray(y0, dtype=float), (n,))
    if method == "exact":
        return besq_transition(dim, y0, t, rng)
    if method != "euler":
        raise ParameterError(f"unknown method {method!r}")
    step = 1e-3 * t if euler_step is None else float(euler_step)
    if step > 1e-3 * t:
        raise ParameterError("Euler step must be at most 1e-3 of the horizon")
    steps = int(np.ceil(t / step))
    out = np.empty(n)
    _euler_batch(np.sqrt(y0), 1.0 if dim == 2 else -1.0, steps, t / steps, EULER_FLOOR,
                 dim == 0, int(rng.integers(0, 2**32)), out)
    return out
