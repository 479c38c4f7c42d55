# %% [markdown]
# # A path inside the interior
#
# For t in [0, 1] the index-1 disk |z| < 5 shrinks toward the point 5 while
# an index-2 disk grows out of -5 until it fills |z| < 5.  Outside [0, 1]
# the picture stays at one endpoint.  The unit circle always meets a
# positive-index region, so F holds along the whole path.

# %%
import numpy as np

from chaoscope import classify, path_picture

# %%
for t in np.linspace(-1, 2, 13):
    pt = path_picture(t)
    v = classify(pt.picture)
    curves = [(round(c.center.real, 2), round(c.radius, 2)) for c in pt.picture.essential_curves]
    print(f"t={t:5.2f}  F={v.F!s:<5}  E1={v.E1!s:<5}  curves={curves}")
