# %% [markdown]
# # Disc on a plane, spin-down and free fall
#
# Three scenario runs, each compared with its closed-form prediction.

# %%
import numpy as np

from spinframe import verify
from spinframe.spin import disc_circle_radius, spin_down_displacement

d = verify.run_disc()
p = verify.DISC_POINT
print("disc radius", d.extras["circle_radius"], "predicted", disc_circle_radius(p["phi"], p["w"], p["g"]))
print("disc rate", d.extras["angular_rate"], "expected", p["omega_big"])

# %%
s = verify.run_spindown()
q = verify.SPINDOWN_POINT
print("spin-down", s.extras["displacement"], "predicted",
      spin_down_displacement(q["w1"], q["w2"], q["g"], q["phi"]))

# %% [markdown]
# The free-fall run uses a smaller sphere here to stay quick.  The measured
# departure along g is three times the closed form.

# %%
ff = dict(verify.FREEFALL_POINT, n_rings=8, n_per_ring=16, h=5e-4)
out = verify.run_freefall(ff)
print("departure factor:", verify.departure_amplitude(out, ff))
print("largest condition ratio:", out.ratio.max())
