"""Coupling of Pareto trap environments to a single stable subordinator.

``G`` is defined by P(V_1 > G(u)) = P(tau_0 > u) = u**-alpha, so
G(u) is the (1 - u**-alpha)-quantile of V_1 and its generalized inverse is
G^{-1}(s) = P(V_1 > s)**(-1/alpha).  Applying G^{-1} to rescaled increments of
one subordinator realization gives a whole family of lattice environments,
one per epsilon, that are i.i.d. Pareto and converge to the subordinator's
jump measure as epsilon shrinks.

The law of V_1 is evaluated from the single-integral representation
P(S <= s) = (1/pi) int_0^pi exp(-s^{-alpha/(1-alpha)} a(theta)) dtheta for
the standard positive stable S, with V_1 = Gamma(1 - alpha)**(1/alpha) S.
The survival function uses the complementary integrand -expm1(...) so that
it keeps relative accuracy deep in the tail; far out (s**-alpha < 1e-3) the
convergent tail series takes over.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad_vec
from scipy.special import gammaln
from scipy.special import gamma as gamma_fn

from ._rng import as_generator
from .env import TrapEnvironment, _check_alpha, kanter_a, sample_stable_increment
from .errors import IntegrationError, ParameterError, WindowError

_BREAKS = tuple(sorted([np.pi - 10.0**-j for j in range(1, 9)] + [10.0**-j for j in range(2, 6)]))
_SERIES_Z = 1e-3
_SERIES_TERMS = 12


def _standardize(x, alpha):
    return np.asarray(x, dtype=float) / gamma_fn(1.0 - alpha) ** (1.0 / alpha)


def _series_sf(s, alpha):
    """P(S > s) = (1/pi) sum_k (-1)^{k+1} Gamma(k alpha)/k! sin(k pi alpha) s^{-k alpha}."""
    z = s ** (-alpha)
    k = np.arange(1, _SERIES_TERMS + 1)[:, None]
    coef = (-1.0) ** (k + 1) * np.exp(gammaln(k * alpha) - gammaln(k + 1)) * np.sin(k * np.pi * alpha)
    return np.sum(coef * z[None, :] ** k, axis=0) / np.pi


def _quad_both(s, alpha, epsabs=1e-14, epsrel=1e-11):
    """(cdf, sf) of the standard stable law at positive ``s`` via quadrature."""
    c = s ** (-alpha / (1.0 - alpha))
    m = s.size

    def f(theta):
        e = c * kanter_a(theta, alpha)
        return np.concatenate((np.exp(-e), -np.expm1(-e)))

    val, err, info = quad_vec(f, 0.0, np.pi, epsabs=epsabs, epsrel=epsrel, points=_BREAKS,
                              limit=4000, full_output=True)
    if not info.success:
        raise IntegrationError(f"stable CDF quadrature did not converge: status={info.status}, "
                               f"intervals={info.intervals.shape[0]}, err={err:.3g}")
    return val[:m] / np.pi, val[m:] / np.pi


def _cdf_sf(x, alpha):
    _check_alpha(alpha)
    x = np.asarray(x, dtype=float)
    if np.any(np.isnan(x)):
        raise ParameterError("x must not be NaN")
    flat = x.ravel()
    cdf = np.zeros(flat.size)
    sf = np.ones(flat.size)
    pos = flat > 0
    inf = np.isinf(flat)
    cdf[inf], sf[inf] = 1.0, 0.0
    s = _standardize(flat, alpha)
    far = pos & ~inf & (s ** (-alpha) < _SERIES_Z)
    mid = pos & ~inf & ~far
    if far.any():
        sf[far] = _series_sf(s[far], alpha)
        cdf[far] = 1.0 - sf[far]
    if mid.any():
        cdf[mid], sf[mid] = _quad_both(s[mid], alpha)
    return cdf.reshape(x.shape), sf.reshape(x.shape)


def stable_cdf_V1(x, alpha):
    """P(V_1 <= x) for V_1 with E exp(-lam V_1) = exp(-Gamma(1-alpha) lam**alpha)."""
    cdf, _ = _cdf_sf(x, alpha)
    return float(cdf) if cdf.ndim == 0 else cdf


def stable_sf_V1(x, alpha):
    """P(V_1 > x), accurate in relative terms far into the tail."""
    _, sf = _cdf_sf(x, alpha)
    return float(sf) if sf.ndim == 0 else sf


def levy_cdf_half(x):
    """Closed form at alpha = 1/2: P(V_1 <= x) = erfc(sqrt(pi) / (2 sqrt(x)))."""
    from scipy.special import erfc
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(x > 0, erfc(np.sqrt(np.pi) / (2.0 * np.sqrt(np.maximum(x, 1e-300)))), 0.0)


def coupling_inverse_exact(s, alpha):
    """G^{-1}(s) = P(V_1 > s)**(-1/alpha), and 1 for s <= 0."""
    s = np.asarray(s, dtype=float)
    sf = stable_sf_V1(np.maximum(s, 0.0), alpha)
    with np.errstate(divide="ignore"):
        out = np.where(s > 0, np.asarray(sf) ** (-1.0 / alpha), 1.0)
    return float(out) if out.ndim == 0 else out


def coupling_quantile(u, alpha, iters=80):
    """G(u) by vectorized bisection on the stable law (in log x)."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any(u < 1):
        raise ParameterError("G is defined for u >= 1")
    out = np.zeros(u.size)
    live = u > 1
    if not live.any():
        return out
    la = alpha * np.log(u[live])
    p_sf = np.exp(-la)
    p_cdf = -np.expm1(-la)
    use_cdf = p_sf > 0.5
    lo = np.full(la.size, np.log(1e-8))
    hi = np.log(10.0) + la / alpha + 5.0
    cdf_lo, sf_lo = _cdf_sf(np.exp(lo), alpha)
    cdf_hi, sf_hi = _cdf_sf(np.exp(hi), alpha)
    bad = (np.where(use_cdf, cdf_lo > p_cdf, sf_lo < p_sf)
           | np.where(use_cdf, cdf_hi < p_cdf, sf_hi > p_sf))
    if bad.any():
        raise IntegrationError(f"quantile bracket failed for u={u[live][bad][:3]!r}")
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        cdf, sf = _cdf_sf(np.exp(mid), alpha)
        below = np.where(use_cdf, cdf < p_cdf, sf > p_sf)
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    out[live] = np.exp(0.5 * (lo + hi))
    return out


@dataclass(frozen=True, eq=False)
class CouplingMap:
    """Tabulated G on ``u`` (u[0] = 1, G = 0 there).

    Interpolation: linear in u on the first segment, linear in (log u, log G)
    on the rest; the inverse uses the same rule, so both stay monotone and
    G^{-1}(G(u_i)) = u_i at nodes.  Queries beyond the table fall back to
    direct evaluation.
    """

    alpha: float
    u: np.ndarray
    G: np.ndarray

    def __post_init__(self):
        if self.u[0] != 1.0 or self.G[0] != 0.0:
            raise ParameterError("table must start at (1, 0)")
        if np.any(np.diff(self.u) <= 0) or np.any(np.diff(self.G) <= 0):
            raise ParameterError("table must be strictly increasing")

    @property
    def u_max(self):
        return float(self.u[-1])

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        if np.any(u < 1):
            raise ParameterError("G is defined for u >= 1")
        flat = u.ravel()
        out = np.empty(flat.size)
        inside = flat <= self.u_max
        q = flat[inside]
        i = np.clip(np.searchsorted(self.u, q, side="right") - 1, 0, self.u.size - 2)
        u0, u1, g0, g1 = self.u[i], self.u[i + 1], self.G[i], self.G[i + 1]
        first = i == 0
        res = np.empty(q.size)
        res[first] = g0[first] + (q[first] - u0[first]) / (u1[first] - u0[first]) * g1[first]
        r = ~first
        w = np.log(q[r] / u0[r]) / np.log(u1[r] / u0[r])
        res[r] = np.exp(np.log(g0[r]) + w * np.log(g1[r] / g0[r]))
        node = q == u0
        res[node] = g0[node]
        out[inside] = res
        if (~inside).any():
            out[~inside] = coupling_quantile(flat[~inside], self.alpha)
        out = out.reshape(u.shape)
        return float(out) if out.ndim == 0 else out

    def inverse(self, s):
        """G^{-1}(s) = inf{u : G(u) >= s}."""
        s = np.asarray(s, dtype=float)
        flat = s.ravel()
        out = np.ones(flat.size)
        inside = (flat > 0) & (flat <= self.G[-1])
        q = flat[inside]
        i = np.clip(np.searchsorted(self.G, q, side="left") - 1, 0, self.G.size - 2)
        u0, u1, g0, g1 = self.u[i], self.u[i + 1], self.G[i], self.G[i + 1]
        first = i == 0
        res = np.empty(q.size)
        res[first] = u0[first] + q[first] / g1[first] * (u1[first] - u0[first])
        r = ~first
        w = np.log(q[r] / g0[r]) / np.log(g1[r] / g0[r])
        res[r] = np.exp(np.log(u0[r]) + w * np.log(u1[r] / u0[r]))
        res[q == g1] = u1[q == g1]
        out[inside] = res
        beyond = flat > self.G[-1]
        if beyond.any():
            out[beyond] = coupling_inverse_exact(flat[beyond], self.alpha)
        out = out.reshape(s.shape)
        return float(out) if out.ndim == 0 else out

    def tabulation_error(self, rng=None, n=64, exact_inverse=True):
        """Max relative error of the table against fresh bisection at random u."""
        rng = as_generator(rng)
        u = np.exp(rng.uniform(0.0, np.log(self.u_max), n))
        direct = coupling_quantile(u, self.alpha)
        err_G = float(np.max(np.abs(self(u) / direct - 1.0)))
        out = {"G_rel": err_G}
        if exact_inverse:
            s = direct
            out["inverse_rel"] = float(np.max(np.abs(self.inverse(s) / u - 1.0)))
        return out

    def to_csv(self, path):
        np.savetxt(path, np.column_stack([self.u, self.G]), delimiter=",", header="u,G",
                   comments="", fmt="%.17g")


@lru_cache(maxsize=16)
def _table(alpha, n_grid, u_max):
    u = np.concatenate(([1.0], np.logspace(np.log10(1.0 + 1e-9), np.log10(u_max), n_grid - 1)))
    return u, coupling_quantile(u, alpha)


def build_coupling_map(alpha, n_grid=2**12, u_max=1e10):
    """Tabulate G on ``n_grid`` log-spaced points of [1, u_max]."""
    _check_alpha(alpha)
    if n_grid < 3 or not u_max > 1:
        raise ParameterError("need n_grid >= 3 and u_max > 1")
    u, G = _table(float(alpha), int(n_grid), float(u_max))
    return CouplingMap(float(alpha), u.copy(), G.copy())


def sample_coupled_traps(epsilon, window, measure_increments, cmap, z_lo=None):
    """tau_z = G^{-1}(eps^{-1/alpha} rho(eps z, eps (z+1)]) for the sites of ``window``.

    ``measure_increments[i]`` is the mass of the i-th cell of the window.
    """
    if not 0 < epsilon <= 1:
        raise ParameterError("epsilon must lie in (0, 1]")
    inc = np.asarray(measure_increments, dtype=float)
    z_lo_w, z_hi_w = (int(w) for w in window)
    if inc.ndim != 1 or inc.size != z_hi_w - z_lo_w + 1:
        raise ParameterError("need one increment per lattice site of the window")
    if np.any(~np.isfinite(inc)) or np.any(inc < 0):
        raise ParameterError("increments must be finite and nonnegative")
    tau = cmap.inverse(epsilon ** (-1.0 / cmap.alpha) * inc)
    return TrapEnvironment(cmap.alpha, z_lo_w, z_hi_w, np.atleast_1d(tau), key=0)


@dataclass(frozen=True, eq=False)
class SubordinatorRealization:
    """Exact increments of V over the cells of width 2**-level of [lo, hi)."""

    alpha: float
    lo: float
    hi: float
    level: int
    increments: np.ndarray

    @property
    def cell(self):
        return 2.0 ** -self.level

    def increments_at(self, epsilon):
        """Block sums over cells of width epsilon (a dyadic coarsening)."""
        ratio = epsilon / self.cell
        r = int(round(ratio))
        if r < 1 or abs(ratio - r) > 1e-9 or (r & (r - 1)):
            raise WindowError(f"epsilon={epsilon} is not a dyadic coarsening of 2^-{self.level}")
        n = self.increments.size
        if n % r:
            raise WindowError("window does not split into whole cells of that width")
        return self.increments.reshape(n // r, r).sum(axis=1)

    def sites(self, epsilon):
        z_lo = int(round(self.lo / epsilon))
        if abs(z_lo * epsilon - self.lo) > 1e-12:
            raise WindowError("window edge is not on the epsilon lattice")
        return z_lo, z_lo + int(round((self.hi - self.lo) / epsilon)) - 1


def sample_subordinator(alpha, window=(-1.0, 1.0), level=20, rng=None):
    lo, hi = (float(w) for w in window)
    n = (hi - lo) * 2.0**level
    if abs(n - round(n)) > 1e-9 or n < 1:
        raise WindowError("window length must be a multiple of 2^-level")
    inc = sample_stable_increment(np.full(int(round(n)), 2.0**-level), alpha, rng)
    return SubordinatorRealization(alpha, lo, hi, int(level), np.asarray(inc))


def triangle_bump(x):
    return np.clip(1.0 - np.abs(x), 0.0, None)


def cosine_bump(x):
    return np.where(np.abs(x) < 1.0, 0.5 * (1.0 + np.cos(np.pi * x)), 0.0)


TEST_FUNCTIONS = {"triangle": triangle_bump, "cosine": cosine_bump}


def vague_convergence_check(realization, test_functions=("triangle", "cosine"),
                            epsilons=tuple(2.0**-k for k in range(3, 11)), cmap=None):
    """Compare int f drho^eps with int f drho on one subordinator realization.

    ``rho^eps`` puts mass eps^{1/alpha} tau_z^eps at eps z; the reference
    integral uses the finest cells of the realization (left endpoints, as
    the lattice measure does).
    """
    alpha = realization.alpha
    if cmap is None:
        cmap = build_coupling_map(alpha)
    if cmap.alpha != alpha:
        raise ParameterError("coupling map and realization have different alpha")
    fns = {}
    for f in test_functions:
        fns[f if isinstance(f, str) else getattr(f, "__name__", "f")] = (
            TEST_FUNCTIONS[f] if isinstance(f, str) else f)
    fine_x = realization.lo + realization.cell * np.arange(realization.increments.size)
    ref = {name: float(np.sum(realization.increments * f(fine_x))) for name, f in fns.items()}
    rows = []
    for eps in epsilons:
        inc = realization.increments_at(eps)
        z_lo, z_hi = realization.sites(eps)
        env = sample_coupled_traps(eps, (z_lo, z_hi), inc, cmap)
        x = eps * env.sites
        mass = eps ** (1.0 / alpha) * env.depths
        for name, f in fns.items():
            val = float(np.sum(mass * f(x)))
            diff = abs(val - ref[name])
            rows.append({"epsilon": eps, "function": name, "lattice": val,
                         "reference": ref[name], "abs_diff": diff,
                         "rel_diff": diff / abs(ref[name]) if ref[name] else 0.0})
    trend = {}
    for name in fns:
        sub = [r for r in rows if r["function"] == name and r["abs_diff"] > 0]
        if len(sub) >= 2:
            k = -np.log2([r["epsilon"] for r in sub])
            trend[name] = float(np.polyfit(k, np.log([r["abs_diff"] for r in sub]), 1)[0])
        else:
            trend[name] = 0.0
    return {"alpha": alpha, "rows": rows, "reference": ref, "log_slope": trend}
