"""Two-sample KS, Clopper-Pearson intervals and the weighted tail-exponent fit."""
from dataclasses import asdict, dataclass

import numpy as np
from scipy import stats as sps

from .errors import InsufficientDataError, ParameterError

MIN_SUCCESSES = 20


def ks_two_sample(xs, ys):
    """Sup-distance between the two empirical CDFs."""
    xs = np.asarray(xs, dtype=float).ravel()
    ys = np.asarray(ys, dtype=float).ravel()
    if xs.size == 0 or ys.size == 0:
        raise InsufficientDataError("KS needs two nonempty samples")
    with np.errstate(divide="ignore"):
        return float(sps.ks_2samp(xs, ys, method="asymp").statistic)


def ks_critical_value(n, m, level=0.05):
    """Asymptotic two-sample critical value c(level) * sqrt((n + m) / (n m))."""
    if n < 1 or m < 1:
        raise InsufficientDataError("sample sizes must be positive")
    if not 0 < level < 1:
        raise ParameterError("level must lie in (0, 1)")
    c = np.sqrt(-0.5 * np.log(level / 2.0))
    return float(c * np.sqrt((n + m) / (n * m)))


def ks_test(xs, ys, level=0.05):
    d = ks_two_sample(xs, ys)
    crit = ks_critical_value(np.size(xs), np.size(ys), level)
    return {"D": d, "critical_value": crit, "level": level, "n": int(np.size(xs)),
            "m": int(np.size(ys)), "passed": bool(d < crit)}


def binomial_ci(k, n, level=0.95):
    """Clopper-Pearson interval; ``k`` and ``n`` may be arrays."""
    k = np.asarray(k)
    n = np.asarray(n)
    if np.any(n < 1) or np.any(k < 0) or np.any(k > n):
        raise ParameterError("need 0 <= k <= n and n >= 1")
    if not 0 < level < 1:
        raise ParameterError("level must lie in (0, 1)")
    q = (1.0 - level) / 2.0
    with np.errstate(invalid="ignore", divide="ignore"):
        lo = np.where(k == 0, 0.0, sps.beta.ppf(q, k, n - k + 1))
        hi = np.where(k == n, 1.0, sps.beta.ppf(1.0 - q, k + 1, n - k))
    if lo.ndim == 0:
        return float(lo), float(hi)
    return lo, hi


@dataclass
class FitReport:
    slope: float
    intercept: float  # fitted log C, so -log p = slope * y - intercept
    r_squared: float
    slope_ci: tuple
    intercept_ci: tuple
    slope_se: float
    intercept_se: float
    points_used: int
    residuals: np.ndarray
    y: np.ndarray
    neg_log_p: np.ndarray
    weights: np.ndarray
    chi2_dof: float
    scale: float
    dropped: list
    band: np.ndarray = None
    band_pass: bool = None
    level: float = 0.95

    @property
    def C(self):
        return float(np.exp(self.intercept))

    def to_dict(self):
        d = asdict(self)
        for key, val in d.items():
            if isinstance(val, np.ndarray):
                d[key] = val.tolist()
        d["C"] = self.C
        return d

    def predict(self, y):
        return self.slope * np.asarray(y, dtype=float) - self.intercept


def fit_tail_exponent(points, min_successes=MIN_SUCCESSES, level=0.95, min_span=4.0,
                      band_level=0.05):
    """WLS fit of -log(k/n) = c y - log C over rows ``(y, k, n)``.

    Rows with k < min_successes or k = n are dropped (and listed).  Weights
    are inverse delta-method variances (1 - p) / (n p).  Standard errors are
    inflated by max(1, sqrt(chi2/dof)).  ``band`` is the Bonferroni
    prediction half-width per row at family level ``band_level``.
    """
    rows = [tuple(p) for p in points]
    used, dropped = [], []
    for y, k, n in rows:
        if n < 1 or k < 0 or k > n:
            raise ParameterError(f"invalid row {(y, k, n)!r}")
        (used if min_successes <= k < n else dropped).append((float(y), int(k), int(n)))
    if len(used) < 3:
        raise InsufficientDataError(
            f"insufficient resolved tail: {len(used)} rows with k >= {min_successes}")
    y = np.array([u[0] for u in used])
    k = np.array([u[1] for u in used], dtype=float)
    n = np.array([u[2] for u in used], dtype=float)
    if y.min() <= 0 or y.max() / y.min() < min_span:
        raise InsufficientDataError(f"resolved y values must span a factor of {min_span}")
    p = k / n
    z = -np.log(p)
    var = (1.0 - p) / (n * p)
    w = 1.0 / var
    X = np.column_stack([y, -np.ones_like(y)])
    sw = np.sqrt(w)
    coef, *_ = np.linalg.lstsq(X * sw[:, None], z * sw, rcond=None)
    resid = z - X @ coef
    m = y.size
    dof = m - 2
    chi2 = float(np.sum(w * resid**2))
    chi2_dof = chi2 / dof if dof > 0 else float("nan")
    scale = max(1.0, np.sqrt(chi2_dof)) if dof > 0 else 1.0
    cov = np.linalg.inv(X.T @ (w[:, None] * X)) * scale**2
    se = np.sqrt(np.diag(cov))
    tq = sps.t.ppf(0.5 + level / 2.0, max(dof, 1))
    zbar = np.sum(w * z) / np.sum(w)
    ss_tot = float(np.sum(w * (z - zbar) ** 2))
    r2 = 1.0 - chi2 / ss_tot if ss_tot > 0 else 1.0
    r2 = float(min(1.0, max(0.0, r2)))
    tb = sps.t.ppf(1.0 - band_level / (2.0 * m), max(dof, 1))
    lev = np.einsum("ij,jk,ik->i", X, cov, X)
    band = tb * np.sqrt(scale**2 * var + lev)
    return FitReport(
        slope=float(coef[0]), intercept=float(coef[1]), r_squared=r2,
        slope_ci=(float(coef[0] - tq * se[0]), float(coef[0] + tq * se[0])),
        intercept_ci=(float(coef[1] - tq * se[1]), float(coef[1] + tq * se[1])),
        slope_se=float(se[0]), intercept_se=float(se[1]), points_used=m,
        residuals=resid, y=y, neg_log_p=z, weights=w, chi2_dof=chi2_dof, scale=float(scale),
        dropped=dropped, band=band, band_pass=bool(np.all(np.abs(resid) <= band)),
        level=level)


def slopes_agree(fit_a, fit_b, level=0.95):
    """Whether two independent slope estimates agree within their joint CI."""
    diff = fit_a.slope - fit_b.slope
    se = np.hypot(fit_a.slope_se, fit_b.slope_se)
    zq = sps.norm.ppf(0.5 + level / 2.0)
    return {"diff": float(diff), "joint_se": float(se), "half_width": float(zq * se),
            "passed": bool(abs(diff) <= zq * se)}
