"""Local time of a Brownian path at its first visit to -a is a squared
Bessel process in the space variable: dimension 2 on [-a, 0], then
dimension 0 (absorbed at zero) to the right of the origin.
"""
# %%
import numpy as np

from traplab.rayknight import (absorption_oracle, local_time_profile_at_hit, ray_knight_mean,
                               rayknight_check)

rng = np.random.default_rng(5)
p = local_time_profile_at_hit(1.0, 0.05, 1e-3, rng)
print("one profile, sampled at a few levels:")
for x in (-1.0, -0.5, 0.0, 0.5, 1.0, 2.0):
    print(f"  l({x:+.1f}) = {p.at(x):.3f}   mean {ray_knight_mean(1.0, x):.2f}")
print("occupation identity:", p.occupation_total(), "=", p.hit_time)

# %% The full check with a coarser grid to keep this quick.
rep = rayknight_check(1.0, 2000, delta=5e-3, h=0.05, rng=rng)
for row in rep["probes"]:
    print(f"x={row['x']:+.1f}  KS D={row['ks_D']:.3f} (crit {row['ks_crit']:.3f})  "
          f"mean {row['mean']:.3f} vs {row['mean_oracle']:.3f}")
ab = rep["absorption"][0]
print(f"zero local time at x=2: {ab['fraction']:.3f}, oracle {absorption_oracle(1.0, 2.0):.3f}")
