# %% [markdown]
# # Four models for a random frequency set
#
# Each model is exchangeable, so it is determined by the law of |Omega|.

# %%
import numpy as np

from expsum_cs.omega_models import (
    BernoulliSelection,
    OccupationRange,
    PoissonProcess,
    UniformSubset,
    model_calibration,
    sample_omega,
    size_distribution,
)

N, n = 31, 20
f, tau = model_calibration(n, N)
print(f"calibrated to n={n}: f={f}, tau={tau:.4f}")
models = [UniformSubset(N, f), BernoulliSelection(N, tau), OccupationRange(N, n), PoissonProcess(N, tau)]

# %%
for m in models:
    d = size_distribution(m)
    print(f"{m.kind:20s} mean={float(d.mean()):7.3f} var={float(d.variance()):7.3f}")

# %% [markdown]
# The occupation model's exact law uses Stirling numbers; compare with sampling.

# %%
occ = OccupationRange(N, n)
sizes = [len(sample_omega(occ, s).omega) for s in range(20_000)]
emp = np.bincount(sizes, minlength=N + 1) / len(sizes)
exact = size_distribution(occ).as_array()
for k in range(10, 20):
    print(k, round(emp[k], 4), round(exact[k], 4))
