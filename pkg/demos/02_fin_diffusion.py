"""The scaling limit: Brownian motion slowed down by a random atomic measure.

Three independent samplers of Z_1 should produce the same law.
"""
# %%
import numpy as np

from traplab.fin import (fin_jumpchain_samples, fin_pathdiscrete_samples,
                         simulate_fin_rescaled_btm)
from traplab.stats import ks_test

rng = np.random.default_rng(11)
n = 5000
jc = fin_jumpchain_samples(1.0, n, rng, alpha=0.5, v_min=1e-3, L=20.0)
rb = simulate_fin_rescaled_btm(0.5, 0.02, 1.0, rng, size=n)
print("jump chain: mean jumps per replica", round(float(jc.n_events.mean())),
      " edge fraction", jc.edge_fraction)
print("jump chain vs rescaled trap model:", ks_test(jc.values, rb))

# %% The brute-force oracle is slow, so use a shorter horizon.
jc_half = fin_jumpchain_samples(0.5, 1000, rng, alpha=0.5).values
po = fin_pathdiscrete_samples(0.5, 1000, rng, alpha=0.5).values
print("jump chain vs path oracle at t=0.5:", ks_test(jc_half, po))

# %% Self-similarity: Z_16 scaled by 16^{-1/3} has the law of Z_1.
z16 = fin_jumpchain_samples(16.0, n, rng, alpha=0.5, L=40.0).values
print("16^{-1/3} Z_16 vs Z_1:", ks_test(16 ** (-1 / 3) * z16, jc.values))
