"""Small-matrix algebra for SO(3,R), SO(3,C), the Lorentz group and G_s.

Vectors are plain length-3 numpy arrays and matrices are numpy arrays.
Lorentz transforms use the imaginary time coordinate ``x4 = i c t`` so that
every element is a complex orthogonal 4x4 matrix (``L @ L.T == I``); the
spatial block is real, the mixed row/column are imaginary and ``L[3, 3]``
is real.
"""
import numpy as np

from .errors import DomainError

ALGEBRA_TOL = 1e-12
ROUNDTRIP_TOL = 1e-10

# below this fraction of c a velocity is treated as zero (no boost direction)
ZERO_VELOCITY_FRACTION = 1e-12


def hat(v):
    """Skew matrix of ``v`` such that ``hat(v) @ w == np.cross(v, w)``."""
    v = np.asarray(v)
    x, y, z = v.astype(np.result_type(v.dtype, float))
    return np.array([[0, -z, y],
                     [z, 0, -x],
                     [-y, x, 0]])


def vee(m):
    """Inverse of :func:`hat`; reads the three independent entries."""
    m = np.asarray(m)
    return np.array([m[2, 1], m[0, 2], m[1, 0]])


def is_skew(m, tol=ALGEBRA_TOL):
    m = np.asarray(m)
    return m.shape == (3, 3) and np.abs(m + m.T).max() <= tol


def is_rotation(m, tol=ALGEBRA_TOL):
    m = np.asarray(m)
    if m.shape != (3, 3) or np.iscomplexobj(m):
        return False
    return (np.abs(m.T @ m - np.eye(3)).max() <= tol
            and abs(np.linalg.det(m) - 1.0) <= tol)


def is_complex_rotation(m, tol=ALGEBRA_TOL):
    """SO(3,C) membership: ``m @ m.T == I`` (plain transpose) and det 1."""
    m = np.asarray(m)
    if m.shape != (3, 3):
        return False
    scale = max(1.0, np.abs(m).max() ** 2)
    return (np.abs(m @ m.T - np.eye(3)).max() <= tol * scale
            and abs(np.linalg.det(m) - 1.0) <= tol * scale)


def exp_so3(m):
    """Rodrigues exponential of a real skew matrix."""
    m = np.asarray(m, dtype=float)
    w = vee(m)
    theta = np.linalg.norm(w)
    if theta < 1e-8:
        # Taylor terms keep full precision near zero
        a = 1.0 - theta**2 / 6.0
        b = 0.5 - theta**2 / 24.0
    else:
        a = np.sin(theta) / theta
        b = (1.0 - np.cos(theta)) / theta**2
    return np.eye(3) + a * m + b * (m @ m)


def _gamma(v, c):
    v = np.asarray(v, dtype=float)
    beta2 = float(v @ v) / c**2
    if not beta2 < 1.0:
        raise DomainError(f"|v| must be below c (|v|/c = {np.sqrt(beta2):.6g})")
    return 1.0 / np.sqrt(1.0 - beta2)


def boost_sin_cos(v, c):
    """Return ``(sin A, cos A)`` of the Hermitian SO(3,C) element of velocity ``v``.

    ``sin A = -1/(c sqrt(1 - v^2/c^2)) [[0, vz, -vy], [-vz, 0, vx], [vy, -vx, 0]]``,
    which is ``gamma/c * hat(v)``, so ``vee(sin A) = +gamma v / c``.
    ``cos A_ij = V4 delta_ij + V_i V_j / (1 + V4)`` with
    ``(V1, V2, V3, V4) = (vx, vy, vz, i c) / (i c sqrt(1 - v^2/c^2))``.
    """
    v = np.asarray(v, dtype=float)
    gamma = _gamma(v, c)
    bracket = np.array([[0.0, v[2], -v[1]],
                        [-v[2], 0.0, v[0]],
                        [v[1], -v[0], 0.0]])
    sin_a = -gamma / c * bracket
    vv = _four_velocity(v, c)
    cos_a = _cos_from_four_velocity(vv)
    return sin_a, cos_a


def _four_velocity(v, c):
    """(V1, V2, V3, V4); the spatial entries are purely imaginary."""
    gamma = _gamma(v, c)
    return np.concatenate([np.asarray(v, dtype=float) * gamma / (1j * c), [gamma + 0j]])


def _cos_from_four_velocity(vv):
    spatial, v4 = vv[:3], vv[3]
    cos_a = v4 * np.eye(3) + np.outer(spatial, spatial) / (1.0 + v4)
    return cos_a.real


def boost_matrix(vv):
    """The 4x4 pure boost built from a four-velocity ``(V1, V2, V3, V4)``."""
    spatial, v4 = vv[:3], vv[3]
    out = np.empty((4, 4), dtype=complex)
    out[:3, :3] = np.eye(3) - np.outer(spatial, spatial) / (1.0 + v4)
    out[:3, 3] = spatial
    out[3, :3] = -spatial
    out[3, 3] = v4
    return out


def lorentz_boost(v, c):
    """4x4 pure boost (ict convention) for velocity ``v``."""
    return boost_matrix(_four_velocity(v, c))


def lorentz_rotation(m):
    out = np.eye(4, dtype=complex)
    out[:3, :3] = m
    return out


def is_lorentz(l, tol=ALGEBRA_TOL):
    """Unit-component check in the ict representation."""
    l = np.asarray(l)
    if l.shape != (4, 4):
        return False
    scale = max(1.0, np.abs(l).max() ** 2)
    if np.abs(l @ l.T - np.eye(4)).max() > tol * scale:
        return False
    if np.abs(l[:3, :3].imag).max() > tol * scale or abs(l[3, 3].imag) > tol * scale:
        return False
    if np.abs(l[:3, 3].real).max() > tol * scale or np.abs(l[3, :3].real).max() > tol * scale:
        return False
    return l[3, 3].real >= 1.0 - tol * scale and abs(np.linalg.det(l) - 1) <= tol * scale


def lorentz_to_complex(l):
    """Map a unit-component Lorentz matrix to SO(3,C).

    The input is split as ``diag(M, 1) @ boost(V)``; the boost is read off the
    last row (``-V1, -V2, -V3, V4``), and ``M`` follows from
    ``l @ boost(V).T``.  The image is ``M @ (cos A + i sin A)``.
    """
    l = np.asarray(l, dtype=complex)
    if l.shape != (4, 4):
        raise DomainError("expected a 4x4 matrix")
    if not is_lorentz(l, tol=ROUNDTRIP_TOL):
        raise DomainError("matrix is not in the unit component of the Lorentz group")
    vv = np.concatenate([-l[3, :3], [l[3, 3]]])
    rot = (l @ boost_matrix(vv).T)[:3, :3].real
    sin_a = hat(1j * vv[:3]).real  # hat(i V); V is purely imaginary
    cos_a = _cos_from_four_velocity(vv)
    return rot @ (cos_a + 1j * sin_a)


def polar_split(m):
    """Split ``m`` in SO(3,C) into ``(M, H)`` with ``m = M @ H``.

    ``M`` is a real rotation and ``H = cos A + i sin A`` is Hermitian positive
    definite; ``H`` is the positive square root of ``m^H m``.
    """
    m = np.asarray(m, dtype=complex)
    evals, evecs = np.linalg.eigh(m.conj().T @ m)
    herm = (evecs * np.sqrt(evals)) @ evecs.conj().T
    herm = 0.5 * (herm + herm.conj().T)
    rot = (m @ np.linalg.inv(herm)).real
    return rot, herm


def complex_to_lorentz(m):
    """Inverse of :func:`lorentz_to_complex`."""
    m = np.asarray(m, dtype=complex)
    if not is_complex_rotation(m, tol=ROUNDTRIP_TOL):
        raise DomainError("matrix is not in SO(3,C)")
    rot, herm = polar_split(m)
    sin_a = herm.imag
    spatial = -1j * vee(sin_a)
    v4 = np.sqrt(1.0 + float(vee(sin_a) @ vee(sin_a)))
    vv = np.concatenate([spatial, [v4 + 0j]])
    return lorentz_rotation(rot) @ boost_matrix(vv)


def lorentz_algebra(a, b, c, x, y, z):
    """4x4 Lorentz algebra element with rotation part (a, b, c) and boost part (x, y, z)."""
    return np.array([[0, c, -b, 1j * x],
                     [-c, 0, a, 1j * y],
                     [b, -a, 0, 1j * z],
                     [-1j * x, -1j * y, -1j * z, 0]], dtype=complex)


def lorentz_algebra_params(l4, tol=ALGEBRA_TOL):
    """Inverse of :func:`lorentz_algebra`; raises if the pattern does not match."""
    l4 = np.asarray(l4, dtype=complex)
    if l4.shape != (4, 4):
        raise DomainError("expected a 4x4 matrix")
    a, b, c = l4[1, 2].real, -l4[0, 2].real, l4[0, 1].real
    x, y, z = (l4[:3, 3] / 1j).real
    scale = max(1.0, np.abs(l4).max())
    if np.abs(l4 - lorentz_algebra(a, b, c, x, y, z)).max() > tol * scale:
        raise DomainError("matrix does not match the Lorentz algebra pattern")
    return a, b, c, x, y, z


def algebra_iso(l4):
    """Lorentz algebra -> so(3,C).

    ``[[0, c, -b, ix], [-c, 0, a, iy], [b, -a, 0, iz], [-ix, -iy, -iz, 0]]``
    maps to ``[[0, c+iz, -b-iy], [-c-iz, 0, a+ix], [b+iy, -a-ix, 0]]``.
    """
    a, b, c, x, y, z = lorentz_algebra_params(l4)
    p, q, r = a + 1j * x, b + 1j * y, c + 1j * z
    return np.array([[0, r, -q],
                     [-r, 0, p],
                     [q, -p, 0]], dtype=complex)


def algebra_iso_inverse(m):
    m = np.asarray(m, dtype=complex)
    if m.shape != (3, 3) or np.abs(m + m.T).max() > ALGEBRA_TOL * max(1.0, np.abs(m).max()):
        raise DomainError("expected a complex skew 3x3 matrix")
    p, q, r = m[1, 2], -m[0, 2], m[0, 1]
    return lorentz_algebra(p.real, q.real, r.real, p.imag, q.imag, r.imag)


def bracket(x, y):
    return x @ y - y @ x


# --- the six-dimensional group G_s -----------------------------------------

def gs_matrix(c_block, b_block):
    """Algebra element ``[[C, B], [B, C]]`` of G_s."""
    return np.block([[c_block, b_block], [b_block, c_block]])


def gs_blocks(g6):
    g6 = np.asarray(g6)
    return g6[:3, :3], g6[:3, 3:]


def gs_bracket(g1, g2):
    """Bracket of two algebra elements given as ``(C, B)`` pairs."""
    (c1, b1), (c2, b2) = g1, g2
    return (bracket(c1, c2) + bracket(b1, b2),
            c1 @ b2 - b2 @ c1 + b1 @ c2 - c2 @ b1)


def gs_split(g):
    """``(C, B) -> (C + B, C - B)``, the isomorphism onto so(3) x so(3)."""
    c_block, b_block = g
    return c_block + b_block, c_block - b_block


def gs_exp(c_block, b_block):
    """Exponential of ``[[C, B], [B, C]]`` via the split into two rotations."""
    plus = exp_so3(c_block + b_block)
    minus = exp_so3(c_block - b_block)
    p, q = 0.5 * (plus + minus), 0.5 * (plus - minus)
    return np.block([[p, q], [q, p]])


def gs_z_translation(alpha):
    """The one-parameter subgroup of "translations" along z."""
    ca, sa = np.cos(alpha), np.sin(alpha)
    return np.array([[ca, 0, 0, 0, sa, 0],
                     [0, ca, 0, -sa, 0, 0],
                     [0, 0, 1, 0, 0, 0],
                     [0, sa, 0, ca, 0, 0],
                     [-sa, 0, 0, 0, ca, 0],
                     [0, 0, 0, 0, 0, 1.0]])


def is_gs_element(g6, tol=ALGEBRA_TOL):
    g6 = np.asarray(g6)
    if g6.shape != (6, 6):
        return False
    p, q = g6[:3, :3], g6[:3, 3:]
    return (np.abs(g6.T @ g6 - np.eye(6)).max() <= tol
            and np.abs(g6[3:, 3:] - p).max() <= tol
            and np.abs(g6[3:, :3] - q).max() <= tol)


# --- boosts acting on C^3 ---------------------------------------------------

def light_vector(v, c):
    """``c * v/|v|``; the zero vector when |v| is negligible against c."""
    v = np.asarray(v, dtype=float)
    speed = np.linalg.norm(v)
    if speed < ZERO_VELOCITY_FRACTION * c:
        return np.zeros(3)
    return v * (c / speed)


def apply_boost_c3(dr, t, v, c, self_frame=False):
    """Transform ``(dr, t)`` by the SO(3,C) boost of velocity ``v``.

    Builds ``[dr + v (t + dt); c_vec (t + dt)]`` with the non-simultaneity
    shift ``dt = (dr . v / c^2) / sqrt(1 - v^2/c^2)``, multiplies it by the
    real block form ``[[cos A, -sin A], [sin A, cos A]]`` and returns
    ``(dr_s, dr_t)``.  Measured from the basic coordinates (``self_frame``
    false) the left-hand side carries the factor ``(1 - v^2/c^2)^{-1/2}``,
    so the result is the self-frame one divided by that factor.
    """
    dr = np.asarray(dr, dtype=float)
    v = np.asarray(v, dtype=float)
    sin_a, cos_a = boost_sin_cos(v, c)
    gamma = _gamma(v, c)
    tau = t + (dr @ v / c**2) * gamma
    real_in = dr + v * tau
    imag_in = light_vector(v, c) * tau
    dr_s = cos_a @ real_in - sin_a @ imag_in
    dr_t = sin_a @ real_in + cos_a @ imag_in
    if not self_frame:
        dr_s, dr_t = dr_s / gamma, dr_t / gamma
    return dr_s, dr_t


def time_vector(x, v, c, offset=(0.0, 0.0, 0.0)):
    """``gamma v / c  x  x + offset``; its dot with ``v`` does not depend on ``x``."""
    v = np.asarray(v, dtype=float)
    gamma = _gamma(v, c)
    return np.cross(gamma * v / c, np.asarray(x, dtype=float)) + np.asarray(offset, dtype=float)
