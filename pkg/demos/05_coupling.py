"""One stable subordinator generates Pareto trap environments at every lattice
spacing, and the lattice measures converge to its jump measure."""
# %%
import numpy as np

from traplab.coupling import build_coupling_map, sample_subordinator, vague_convergence_check
from traplab.env import pareto_inverse_cdf, sample_stable_increment
from traplab.stats import ks_test

rng = np.random.default_rng(9)
cmap = build_coupling_map(0.5)
tau = cmap.inverse(sample_stable_increment(1.0, 0.5, rng, size=50000))
print("G^{-1}(V_1) vs Pareto(1/2):", ks_test(tau, pareto_inverse_cdf(rng.random(50000), 0.5)))

# %%
real = sample_subordinator(0.5, level=16, rng=rng)
rep = vague_convergence_check(real, cmap=cmap, epsilons=tuple(2.0**-k for k in range(3, 11)))
for row in rep["rows"]:
    if row["function"] == "triangle":
        print(f"eps=2^{int(np.log2(row['epsilon'])):d}  relative difference {row['rel_diff']:.2e}")
print("log2 slope of the error:", rep["log_slope"])
