# %% [markdown]
# # Random exponential sums, their moments, and the discrete MGF lemma

# %%
import math

import numpy as np

from expsum_cs.exp_sums import (
    FrequencyDraw,
    j_moment,
    kernel_profile,
    lemma_coefficient_terms,
    mgf_discrete,
    moment_exact,
)

# %% [markdown]
# ## Flatness of S(m) = sum_j e(m X_j / N)
#
# With n uniform draws on Z_97 the off-peak values are of order sqrt(n), far
# below the peak value n.

# %%
draw = FrequencyDraw.random(97, 200, np.random.default_rng(1))
prof = kernel_profile(draw)
print("peak", prof.peak, " off-peak sup", round(prof.offpeak_sup, 2), " sqrt(n log N)",
      round(math.sqrt(200 * math.log(97)), 2))

# %% [markdown]
# ## Exact moments on the circle
#
# E|sum e(x_j)|^{2p} counts pairs of anagram words; for n = 2 these are the
# central binomial coefficients.

# %%
for n in range(1, 5):
    print(n, [moment_exact(n, p) for p in range(6)])

# %% [markdown]
# ## J_k = E cos^k(2 pi X / N) and the lemma E e^{u cos(2 pi X/N)} <= e^{u^2/4}

# %%
for N in (3, 4, 5, 7):
    print(N, [str(j_moment(N, k)) for k in range(8)])

u = np.arange(1, 1001) * 0.01
for N in (2, 3, 4, 5, 11):
    worst = max(mgf_discrete(N, v) - math.exp(v * v / 4) for v in u)
    print(f"N={N:2d}  max(E e^(u cos) - e^(u^2/4)) = {worst:+.3e}")

print([lemma_coefficient_terms(5, k) for k in (1, 2, 3)])
