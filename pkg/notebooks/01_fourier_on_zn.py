# %% [markdown]
# # Signals on Z_N and the unitary DFT
#
# A signal is a complex vector indexed by residues mod N.  The transform uses
# the 1/sqrt(N) normalisation on both sides, so energy is preserved.

# %%
import numpy as np

from expsum_cs import Signal, dft, idft, norms

N = 11
rng = np.random.default_rng(0)
x = Signal(rng.standard_normal(N) + 1j * rng.standard_normal(N))
xh = dft(x)
print("||x||_2    =", norms(x).l2)
print("||xhat||_2 =", np.linalg.norm(xh.values))
print("round trip error:", np.abs(idft(xh).values - x.values).max())

# %% [markdown]
# A spike becomes a flat spectrum, and shifting in time multiplies the
# spectrum by a phase.

# %%
spike = Signal.indicator(N, 3)
print(np.round(np.abs(dft(spike).values), 6))
w = np.arange(N)
print(np.allclose(dft(x.shift(4)).values, np.exp(-2j * np.pi * 4 * w / N) * xh.values))

# %% [markdown]
# The reference transform is a direct O(N^2) product; `fast=True` uses numpy's FFT.

# %%
print(np.abs(dft(x, fast=True).values - xh.values).max())
