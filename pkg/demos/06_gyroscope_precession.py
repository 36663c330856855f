# %% [markdown]
# # Gyroscope precession near a rotating mass
#
# The four precession formulas for a gyroscope near a set of gravitating
# sources, in SI units.

# %%
import numpy as np

from spinframe import precession as pr

earth = pr.GravSource(5.972e24, (0.0, 0.0, 0.0), angular_momentum=(0.0, 0.0, 5.86e33))
r = 7.027e6
v = np.sqrt(pr.G_SI * earth.mass / r)
gyro = pr.GyroState((0.0, r, 0.0), (0.0, 0.0, v))
p = pr.PpnParams()
for f in (pr.omega_fermi_walker, pr.omega_gyro, pr.omega_stars, pr.omega_relative):
    print(f.__name__, f(gyro, [earth], p))

# %% [markdown]
# The gyroscope sees its own precession relative to the stars as the
# difference of the two middle formulas.

# %%
print(pr.omega_gyro(gyro, [earth], p) - pr.omega_stars(gyro, [earth], p))
