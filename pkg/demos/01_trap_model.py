"""A walk among heavy-tailed traps.

Run with ``python demos/01_trap_model.py``.  Takes a few seconds.
"""
# %% A frozen environment: most traps are shallow, a few are very deep.
import numpy as np

from traplab.btm import btm_exact_marginal, btm_positions, simulate_btm_path
from traplab.env import sample_trap_depths

env = sample_trap_depths(0.5, (-20, 20), rng=7)
order = np.argsort(env.depths)[::-1][:3]
print("deepest traps (site, depth):", [(int(env.sites[i]), round(float(env.depths[i]), 1))
                                        for i in order])

# %% One trajectory. Long flat stretches are visits to deep traps.
tr = simulate_btm_path(env, 50.0, rng=1)
print(f"{tr.n_events} jumps by t=50, final site {tr.position_at(50.0)}")

# %% Monte Carlo against the forward equations on the same environment.
sites, p = btm_exact_marginal(env, 2.0)
x = btm_positions(2.0, 10**5, 3, env=env, reflect=True)
freq = np.bincount(x - env.z_lo, minlength=sites.size) / x.size
se = np.sqrt(p * (1 - p) / x.size)
worst = np.max(np.abs(freq - p) / np.maximum(se, 1e-300))
print(f"largest deviation from the exact law: {worst:.2f} standard errors")

# %% Annealed spread grows like t^{1/3} at alpha = 1/2, much slower than diffusion.
for t in (10.0, 100.0, 1000.0):
    s = btm_positions(t, 20000, 4, alpha=0.5)
    print(f"t={t:6.0f}  median |X_t| = {np.median(np.abs(s)):6.1f}  "
          f"ratio to t^(1/3) = {np.median(np.abs(s)) / t ** (1 / 3):.2f}")
