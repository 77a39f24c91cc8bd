"""Random environments: Pareto trap depths, stable subordinator increments and
truncated Poisson atom clouds.

The trap law is the pure Pareto law ``P(tau >= u) = u**-alpha`` for ``u >= 1``.
The subordinator ``V`` has Laplace transform
``E exp(-lam (V_{x+y} - V_x)) = exp(-y lam**alpha Gamma(1 - alpha))`` and its
jumps form a Poisson process with intensity ``alpha v**(-1-alpha) dx dv``.
"""
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma as gamma_fn

from ._rng import as_generator, open_uniform, site_depth
from .errors import ParameterError, WindowError


def _check_alpha(alpha):
    if not 0.0 < alpha < 1.0:
        raise ParameterError(f"alpha must lie in (0, 1), got {alpha!r}")


def pareto_inverse_cdf(u, alpha):
    """Map uniforms in (0, 1] to depths with ``P(tau >= x) = x**-alpha``."""
    _check_alpha(alpha)
    return np.asarray(u, dtype=float) ** (-1.0 / alpha)


@dataclass(frozen=True, eq=False)
class TrapEnvironment:
    """Trap depths on the integer window ``[z_lo, z_hi]``.

    Sites outside the window are not stored; ``depth`` extends the
    environment there with fresh Pareto draws seeded by ``(key, site)``.
    """

    alpha: float
    z_lo: int
    z_hi: int
    depths: np.ndarray
    key: int
    seed: object = None

    def __post_init__(self):
        d = np.asarray(self.depths, dtype=float)
        if d.shape != (self.z_hi - self.z_lo + 1,):
            raise ParameterError("depths length does not match the window")
        d.setflags(write=False)
        object.__setattr__(self, "depths", d)

    @property
    def window(self):
        return (self.z_lo, self.z_hi)

    @property
    def sites(self):
        return np.arange(self.z_lo, self.z_hi + 1)

    def __len__(self):
        return self.depths.size

    def depth(self, z):
        z = int(z)
        if self.z_lo <= z <= self.z_hi:
            return float(self.depths[z - self.z_lo])
        return float(site_depth(np.uint64(self.key), z, self.alpha))

    @classmethod
    def constant(cls, value, window, alpha=0.5):
        """Deterministic environment, e.g. all depths 1 (simple random walk)."""
        z_lo, z_hi = window
        return cls(alpha, z_lo, z_hi, np.full(z_hi - z_lo + 1, float(value)), key=0)


def sample_trap_depths(alpha, window, rng=None):
    """I.i.d. Pareto(alpha) depths on the integer window ``(z_lo, z_hi)``."""
    _check_alpha(alpha)
    z_lo, z_hi = (int(w) for w in window)
    if z_hi < z_lo:
        raise ParameterError(f"empty window {window!r}")
    rng = as_generator(rng)
    key = int(rng.integers(0, 2**63))
    u = 1.0 - rng.random(z_hi - z_lo + 1)  # (0, 1]
    return TrapEnvironment(alpha, z_lo, z_hi, pareto_inverse_cdf(u, alpha), key=key, seed=key)


# -- stable subordinator -------------------------------------------------------

def kanter_a(theta, alpha):
    """Kanter's function on (0, pi); increasing in theta."""
    k = alpha / (1.0 - alpha)
    return (np.sin(alpha * theta) ** k * np.sin((1.0 - alpha) * theta)
            / np.sin(theta) ** (1.0 / (1.0 - alpha)))


def standard_positive_stable(alpha, rng=None, size=None):
    """Exact draws of S with ``E exp(-lam S) = exp(-lam**alpha)``.

    Kanter's representation: ``S = (a(theta) / E)**((1 - alpha)/alpha)`` with
    theta uniform on (0, pi) and E standard exponential.
    """
    _check_alpha(alpha)
    rng = as_generator(rng)
    theta = np.pi * open_uniform(rng, size)
    e = -np.log(open_uniform(rng, size))
    return (kanter_a(theta, alpha) / e) ** ((1.0 - alpha) / alpha)


def stable_scale(y, alpha):
    """Scale factor turning S into an increment of V over length y."""
    return (y * gamma_fn(1.0 - alpha)) ** (1.0 / alpha)


def sample_stable_increment(y, alpha, rng=None, size=None):
    """Draw ``V_{x+y} - V_x``; ``y`` may be an array (independent intervals)."""
    _check_alpha(alpha)
    y_arr = np.asarray(y, dtype=float)
    if np.any(y_arr < 0):
        raise ParameterError("interval length must be nonnegative")
    if size is None and y_arr.ndim:
        size = y_arr.shape
    s = standard_positive_stable(alpha, rng, size)
    out = stable_scale(y_arr, alpha) * s
    if np.ndim(out) == 0:
        return float(out)
    return out


# -- truncated atom clouds -----------------------------------------------------

def atom_density(alpha, v_min):
    """Mean number of atoms with weight >= v_min per unit length."""
    return v_min ** (-alpha)


def truncation_deficit(alpha, v_min):
    """Mean mass per unit length carried by atoms lighter than v_min."""
    return alpha * v_min ** (1.0 - alpha) / (1.0 - alpha)


@dataclass(frozen=True, eq=False)
class AtomicMeasure:
    """Finite atomic measure ``sum_i v_i delta_{x_i}`` on ``[lo, hi]``."""

    alpha: float
    lo: float
    hi: float
    v_min: float
    positions: np.ndarray
    weights: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        x = np.ascontiguousarray(self.positions, dtype=float)
        v = np.ascontiguousarray(self.weights, dtype=float)
        if x.shape != v.shape or x.ndim != 1:
            raise ParameterError("positions and weights must be 1-d of equal length")
        if x.size and (np.any(np.diff(x) <= 0) or x[0] < self.lo or x[-1] > self.hi):
            raise ParameterError("atom positions must be strictly increasing inside the window")
        if np.any(v <= 0):
            raise ParameterError("atom weights must be positive")
        x.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "positions", x)
        object.__setattr__(self, "weights", v)

    @property
    def window(self):
        return (self.lo, self.hi)

    def __len__(self):
        return self.positions.size

    @classmethod
    def from_atoms(cls, positions, weights, window=None, alpha=0.5, v_min=None):
        x = np.asarray(positions, dtype=float)
        v = np.asarray(weights, dtype=float)
        order = np.argsort(x, kind="stable")
        x, v = x[order], v[order]
        if window is None:
            window = (float(x[0]), float(x[-1]))
        if v_min is None:
            v_min = float(v.min()) if v.size else 0.0
        return cls(alpha, float(window[0]), float(window[1]), v_min, x, v)


def sample_atoms(alpha, window, v_min, rng=None):
    """Atoms of rho with weight >= v_min on a bounded window.

    Count ~ Poisson(|window| v_min**-alpha); positions uniform; weights
    ``v_min * U**(-1/alpha)``.  Coincident positions are resampled.
    """
    _check_alpha(alpha)
    if not v_min > 0:
        raise ParameterError("v_min must be positive; rho itself has infinitely many atoms")
    lo, hi = (float(w) for w in window)
    if not (np.isfinite(lo) and np.isfinite(hi)) or hi < lo:
        raise ParameterError(f"window must be bounded and ordered, got {window!r}")
    rng = as_generator(rng)
    n = int(rng.poisson((hi - lo) * atom_density(alpha, v_min)))
    while True:
        x = np.sort(lo + (hi - lo) * rng.random(n))
        if n < 2 or np.all(np.diff(x) > 0):
            break
    v = v_min * (1.0 - rng.random(n)) ** (-1.0 / alpha)
    return AtomicMeasure(alpha, lo, hi, v_min, x, v)


def measure_mass(measure, a, b):
    """Mass of the half-open interval ``(a, b]``."""
    if a < measure.lo or b > measure.hi:
        raise WindowError(f"interval ({a}, {b}] leaves the window {measure.window}")
    if b <= a:
        return 0.0
    x = measure.positions
    i, j = np.searchsorted(x, [a, b], side="right")
    return float(measure.weights[i:j].sum())
