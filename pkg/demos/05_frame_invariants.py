# %% [markdown]
# # Invariants of frame differentials
#
# A frame differential has a rotation part, a space part and a temporal
# part.  Converting a disallowed rotation into a displacement keeps J1 and J2.

# %%
import numpy as np

from spinframe import invariants as inv

t, n, b = np.eye(3)
r, tau, ds = 2.0, 0.5, 0.1
f = inv.sphere_differential(t, b, r, tau, ds)
g = inv.apply_basic_property(f, inv.sphere_unpermitted(t, tau, ds), -r * n)
print("before:", inv.j_invariants(f, 1.0)[:2])
print("after: ", inv.j_invariants(g, 1.0)[:2])
print("expected:", (2 + r**2 * tau**2) * ds**2, r * tau * ds**2)

# %% [markdown]
# A circle with Thomas precession, either free or blocked.

# %%
for case in inv.circle_thomas_differentials(t, n, b, 0.5, 1.2, 1.0):
    print(inv.j_invariants(case, 1.0)[:2])
