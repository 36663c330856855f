# %% [markdown]
# # Gravitational spin velocity of a fast sphere
#
# Under gravity each particle's spin velocity splits into four terms.  We
# average them over a fine sphere and put them next to the closed forms.

# %%
import numpy as np

from spinframe.verify import AVG_POINT, averaged_pair

bf, closed = averaged_pair(AVG_POINT)
print("condition ratio:", bf.ratio)
for key in ("vI", "vII", "vIII", "vIV"):
    print(key, getattr(bf, key), getattr(closed, key))

# %% [markdown]
# The first and second terms agree.  The third and fourth come out at twice
# the closed forms; see the README notes.

# %%
for key in ("vIII", "vIV"):
    a, b = getattr(bf, key), getattr(closed, key)
    print(key, "ratio", (a @ b) / (b @ b))
