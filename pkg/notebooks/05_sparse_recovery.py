# %% [markdown]
# # Exact recovery from a random set of frequencies
#
# Draw n uniform frequencies, keep the distinct values as Omega, check the
# kernel certificate for T-sparse signals, then recover by l1 minimisation.

# %%
import numpy as np

from expsum_cs.exp_sums import FrequencyDraw, certificate_check, kernel_profile
from expsum_cs.recovery import basis_pursuit, guaranteed_recovery_check, measure, random_sparse_signal
from expsum_cs.tail_bounds import refined_nu_and_bound, theorem3_sample_size

N, T, C = 997, 2, 3.0
n = theorem3_sample_size(N, T, C)
print("n =", n, " predicted failure <=", refined_nu_and_bound(N, T, C)[1])

rng = np.random.default_rng(7)
draw = FrequencyDraw.random(N, n, rng)
holds, margin = certificate_check(kernel_profile(draw), T)
print(f"|Omega| = {len(draw.range())}, certificate holds: {holds}, margin {margin:.2f}")

# %%
x = random_sparse_signal(N, T, rng)
res = basis_pursuit(measure(x, draw.range()))
print(res.status, res.iterations, "max error", np.abs(res.reconstruction.values - x.values).max())

# %%
print(guaranteed_recovery_check(draw, T, trials=20, seed=1))

# %% [markdown]
# Without enough frequencies the certificate fails and recovery is no longer guaranteed.

# %%
small = FrequencyDraw.random(N, 40, rng)
print(guaranteed_recovery_check(small, T, trials=20, seed=1))
