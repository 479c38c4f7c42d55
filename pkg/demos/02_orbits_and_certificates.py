# %% [markdown]
# # Orbits, growth and unimodal certificates

# %%
import numpy as np

from chaoscope import SparseVector, gallery, orbit, unimodal_certify

# %% [markdown]
# On the annulus example every finitely supported vector eventually grows
# like 2^n: the positive half of the shift has weight 2.

# %%
A = gallery("ex-2.10-annulus").spec
rng = np.random.default_rng(0)
vals = rng.standard_normal(21)
x = SparseVector.from_array(vals / np.linalg.norm(vals), -10)
norms = np.array(orbit(A, x, 200).norms)
for n in (0, 10, 50, 100, 200):
    print(f"n={n:3d}  ||A^n x|| = {norms[n]:.4e}   log2 = {np.log2(norms[n]):7.2f}")

# %% [markdown]
# A unimodal certificate is a vector whose norm grows geometrically for m
# steps and then decays.  For 2B the basis vector e_30 climbs exactly by
# 2^i and then drops to zero after 30 more steps.

# %%
cert = unimodal_certify(gallery("backward-shift-2B").spec, gamma=2.0, m=30, horizon=120)
print("witness:", dict(cert.witness.items()), "peak:", max(cert.growth_norms), "last tail:", cert.decay_tail[-1])

# %%
cert = unimodal_certify(gallery("ex-3.6-unimodal-boundary").spec, gamma=2.0, m=50, horizon=2000)
tail = np.array(cert.decay_tail)
print("tail * (j+1) / 2^50 over the first few steps:", tail[:5] * np.arange(1, 6) / 2.0**50)
print("tail after", len(tail), "steps:", tail[-1])
