# %% [markdown]
# # Empirical failure rates against the analytic bounds
#
# Every trial is seeded from (master seed, tag, trial index), so results are
# identical for any number of workers.

# %%
from expsum_cs.experiments import run_certificate, run_dominance_grid, run_tail2

r = run_tail2(31, 60, 0.5, 10_000, seed=1)
print(f"Tail2 N=31 n=60 delta=0.5: empirical {r.empirical_failure:.4f} +- {r.stderr:.4f}, bound {r.bound:.3g}")

# %%
for kind, a, n, d, r in run_dominance_grid(trials=2_000, seed=0):
    print(f"{kind} {a:3d} n={n:3d} delta={d}: {r.empirical_failure:.4f}  bound {r.bound:.3g}  ok={r.dominated}")

# %%
c = run_certificate(997, 2, 3.0, 200, seed=0)
print("certificate rate", c.cert_rate, "predicted >=", 1 - c.bound_pred)
