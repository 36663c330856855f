# %% [markdown]
# # Spin velocity of a rigid body without gravity
#
# Each particle of a spinning body moves on a curve with a Frenet frame.
# Rotation of that frame about the tangent is converted to a displacement
# along the osculating-circle radius.  The mass-weighted mean of those
# displacements is the spin velocity of the body.

# %%
import numpy as np

from spinframe import sim
from spinframe.spin import system_spin_velocity

sphere = sim.discretize_sphere(1.0, 1.0, 16, 32)
law = sim.precessing_law(np.pi / 4, 0.7, 30.0)
system = sim.rigid_system(sphere, law, 0.4)
print("sphere spin velocity:", system_spin_velocity(system))

# %% [markdown]
# For a symmetric quadrature the particle contributions cancel to rounding.
# A general body under a general rotation law does not give zero.

# %%
rng = np.random.default_rng(5)
x = rng.normal(size=(3, 3))
m = np.array([1.0, 2.0, 1.5])
x -= m @ x / m.sum()
body = sim.BodyModel(m, x)
law2 = sim.ExpProductLaw([[0, 0, 1.0], [1.0, 0, 0]], [[0.0, 1.3, 0.4], [0.2, -0.7]])
sys2 = sim.rigid_system(body, law2, 0.9)
speed = max(np.linalg.norm(p.jet.r1) for p in sys2.particles)
print("relative spin velocity of a 3-particle body:",
      np.linalg.norm(system_spin_velocity(sys2)) / speed)
