"""Sub-Gaussian tails: -log P(|Z_1| >= x) is close to linear in x^{1+alpha}."""
# %%
import numpy as np

from traplab.tails import estimate_tail_btm, estimate_tail_fin

curve = estimate_tail_fin(0.5, np.linspace(0.25, 4.0, 16), 10**5,
                          rng=np.random.default_rng(2), v_min=3e-3)
fit = curve.fit()
print(f"{'x':>6} {'y':>7} {'p_hat':>10} {'fit':>10}")
for x, y, p in zip(curve.x, curve.y, curve.p_hat):
    if p > 0:
        print(f"{x:6.2f} {y:7.3f} {p:10.3e} {np.exp(-fit.predict(y)):10.3e}")
print(f"slope c = {fit.slope:.3f} {fit.slope_ci}, C = {fit.C:.3f}, r^2 = {fit.r_squared:.4f}")

# %% The same shape for the trap model itself at t = 100, in the scaled variable.
btm = estimate_tail_btm(0.5, 100.0, np.arange(1, 11), 10**5, np.random.default_rng(3))
fb = btm.fit()
print(f"BTM slope {fb.slope:.3f} {fb.slope_ci}, r^2 = {fb.r_squared:.4f}")
