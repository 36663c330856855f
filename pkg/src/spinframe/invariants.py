"""Structural invariants J1..J4 of a frame differential and the generalized line element.

``dxi`` (rotation part) is stored in length units: an angle differential
``dphi`` about an axis is carried as ``R dphi`` with ``R`` the lever arm, so
that ``|dxi|^2`` and ``|deta|^2`` add up in J1.
"""
from dataclasses import dataclass, field

import numpy as np

from . import liegroup


def _vec(x):
    return np.asarray(x, dtype=float)


@dataclass(frozen=True)
class FrameDifferential:
    dxi: np.ndarray
    deta: np.ndarray
    dtheta: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        for name in ("dxi", "deta", "dtheta"):
            object.__setattr__(self, name, _vec(getattr(self, name)))

    def rotated(self, m):
        """All three parts acted on by the same rotation."""
        return FrameDifferential(m @ self.dxi, m @ self.deta, m @ self.dtheta)

    def gs_algebra(self):
        """``(C, B)`` blocks of the G_s algebra element: ``C = hat(dxi)``, ``B = -hat(deta)``."""
        return liegroup.hat(self.dxi), -liegroup.hat(self.deta)


def j_invariants(f, c):
    """``(J1, J2, J3, J4)``.

    J1 = |dxi|^2 + |deta|^2 - c^2 |dtheta|^2,  J2 = dxi . deta,
    J3 = dxi . dtheta,  J4 = deta . dtheta.
    """
    j1 = f.dxi @ f.dxi + f.deta @ f.deta - c**2 * (f.dtheta @ f.dtheta)
    return float(j1), float(f.dxi @ f.deta), float(f.dxi @ f.dtheta), float(f.deta @ f.dtheta)


def split_invariants(f):
    """``(I1, I2)``: squared norms of the two so(3) components of the G_s element.

    Through the split ``(C, B) -> (C + B, C - B)`` these are
    ``|dxi + deta|^2`` and ``|dxi - deta|^2``; ``J1 = (I1 + I2)/2`` and
    ``J2 = (I1 - I2)/4`` when ``dtheta = 0``.
    """
    plus, minus = liegroup.gs_split(f.gs_algebra())
    # C - B = hat(dxi + deta), C + B = hat(dxi - deta)
    i1 = liegroup.vee(minus) @ liegroup.vee(minus)
    i2 = liegroup.vee(plus) @ liegroup.vee(plus)
    return float(i1), float(i2)


def apply_basic_property(f, unpermitted, r_vec):
    """Convert a disallowed rotation differential into a displacement.

    ``unpermitted`` is the rotation (angle vector, rad) the constraint
    forbids and ``r_vec`` points from the osculating center to the particle.
    The displacement ``unpermitted x r_vec`` is added to ``deta``; the same
    rotation, carried to length units through ``|r_vec|``, is taken out of
    ``dxi``; ``dtheta`` is untouched.
    """
    unpermitted, r_vec = _vec(unpermitted), _vec(r_vec)
    deta = f.deta + np.cross(unpermitted, r_vec)
    dxi = f.dxi + np.linalg.norm(r_vec) * unpermitted
    return FrameDifferential(dxi, deta, f.dtheta)


def generalized_line_element(ds, V, dt, c):
    """``dS^2 = ds^2 + V^2 dt^2 - c^2 dt^2``."""
    return ds**2 + V**2 * dt**2 - c**2 * dt**2


def temporal_orthogonality_check(f, rtol=1e-12):
    """Whether J3 and J4 vanish relative to the magnitudes involved."""
    _, _, j3, j4 = j_invariants(f, 1.0)
    nth = np.linalg.norm(f.dtheta)
    j3_zero = abs(j3) <= rtol * max(np.linalg.norm(f.dxi) * nth, np.finfo(float).tiny)
    j4_zero = abs(j4) <= rtol * max(np.linalg.norm(f.deta) * nth, np.finfo(float).tiny)
    return bool(j3_zero), bool(j4_zero)


# --- the worked configurations -----------------------------------------------------------

def sphere_differential(t, b, r, tau, ds):
    """Free trihedron on a spinning sphere: ``deta = t ds``, ``dxi = (r tau t + b) ds``."""
    t, b = _vec(t), _vec(b)
    return FrameDifferential((r * tau * t + b) * ds, t * ds)


def sphere_unpermitted(t, tau, ds):
    """The rotation a rigid sphere forbids: ``-tau t ds``."""
    return -tau * _vec(t) * ds


def circle_thomas_differentials(t, n, b, r, w, c, ds=1.0):
    """Rotating circle with free Thomas precession, and the same circle made rigid.

    Returns ``(free, blocked)``.  In the free case the particle axes precess
    with ``w_Th / w`` per unit arc length; in the blocked case the precession
    becomes the displacement ``V dt`` with ``V = w_Th x r_vec``.
    """
    from .kinematics import thomas_precession

    t, n, b = _vec(t), _vec(n), _vec(b)
    v = r * w * t
    a = r * w**2 * n
    w_th = thomas_precession(v, a, c)
    free = FrameDifferential(b * ds + w_th / w * ds, t * ds)
    r_vec = -r * n
    dt = ds / (r * w)
    blocked = FrameDifferential(b * ds, t * ds + np.cross(w_th, r_vec) * dt)
    return free, blocked
