# %% [markdown]
# # Lorentz transformations as complex rotations
#
# A proper orthochronous Lorentz matrix in the ``ict`` convention maps to a
# complex 3x3 rotation.  Here we check the map on a boost, take the polar
# split into a real rotation and a Hermitian factor, and apply a boost
# directly to a complex spacetime vector.

# %%
import numpy as np

from spinframe import liegroup as lg

c = 1.0
v = np.array([0.0, 0.0, 0.75])
L = lg.lorentz_boost(v, c)
F = lg.lorentz_to_complex(L)
print(np.round(F, 6))

# %% [markdown]
# A boost becomes ``cos A + i sin A`` with no real rotation part.

# %%
M, H = lg.polar_split(F)
print("rotation part:\n", np.round(M.real, 12))
print("back to 4x4 ok:", np.allclose(lg.complex_to_lorentz(F), L))

# %% [markdown]
# Composition is preserved: the map is a group homomorphism.

# %%
L2 = lg.lorentz_boost([0.3, -0.2, 0.1], c)
lhs = lg.lorentz_to_complex(L @ L2)
rhs = lg.lorentz_to_complex(L) @ lg.lorentz_to_complex(L2)
print("homomorphism error:", np.abs(lhs - rhs).max())

# %% [markdown]
# The six-dimensional group over space and space rotations splits into two
# commuting copies of so(3).

# %%
C, B = lg.hat([0.1, 0.2, 0.3]), lg.hat([0.0, -0.4, 0.2])
P, Q = lg.gs_split((C, B))
print("split blocks are C+B and C-B:", np.allclose(P, C + B), np.allclose(Q, C - B))

# %%
dr, t = np.array([1.0, 0.0, 0.0]), 2.0
print("boosted vector:", lg.apply_boost_c3(dr, t, [0.5, 0.0, 0.0], c, self_frame=True))
