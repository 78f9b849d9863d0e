# %% [markdown]
# # Closed-form tail bounds
#
# Laplace-transform bounds for flatness over the first M frequencies on the
# circle, over all of Z_N minus 0, and the resulting sample sizes for sparse
# recovery certificates.

# %%
import math

from expsum_cs.tail_bounds import (
    BoundQuery,
    explicitness_exponent,
    log_tijdeman_range,
    optimal_nu_theorem1,
    paper_example_table,
    paper_table_csv,
    report,
    theorem1_failure,
    theorem_a_comparison,
    theorem_a_range,
)

# %%
n, delta = 200, 0.5
nu = optimal_nu_theorem1(n, delta)
print("nu =", nu)
for M in (1, 10, 100, 1000):
    print(M, theorem1_failure(M, n, delta, nu))

# %% [markdown]
# The random range (1/nu) e^{n delta^2 a^2} beats (1/2) 2^{n delta^2 / 4}:

# %%
for x in (3, 8, 16, 50):
    d = math.sqrt(x / 400)
    print(x, theorem_a_comparison(400, d, 3), theorem_a_comparison(400, d, 4))

# %% [markdown]
# The explicit construction's range is tiny by comparison (compare logs):

# %%
print("log explicit range:", log_tijdeman_range(10**6, 0.5))
print("log random range:  ", math.log(theorem_a_range(2000, 0.5)), "(n = 2000 already)")
print("exponent c at nu=10:", explicitness_exponent(10))

# %% [markdown]
# ## N = 997, T = 2

# %%
print(paper_table_csv(paper_example_table(997, 2, (1.5, 2, 3, 4))))
print(report("theorem3", BoundQuery(N=997, T=2, C=3.0)).to_json())
