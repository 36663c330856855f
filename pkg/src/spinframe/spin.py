"""Spin displacement, spin velocity and the averaged gravitational predictions.

Per-particle spin velocity is the binormal rate turned into a displacement
rate,  ``V_i = -(db_i/dt . n_i) r_i b_i``, which written in the raw time
derivatives of the trajectory is

    V_i = |r'|^4 (r', r'', r''') / |r' x r''|^4  (r' x r'').

System sums are mass weighted and accumulated with :func:`math.fsum`, so a
result does not depend on the order of the particles and is reproducible
bit for bit.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .kinematics import CURVATURE_EPS, SPEED_EPS, CurveJet


def _vec(x):
    return np.asarray(x, dtype=float)


def weighted_mean(values, masses):
    """Compensated ``sum(m_i v_i) / sum(m_i)`` over the leading axis."""
    values = np.asarray(values, dtype=float)
    masses = np.asarray(masses, dtype=float)
    total = math.fsum(masses.tolist())
    weighted = values * masses[:, None]
    return np.array([math.fsum(weighted[:, i].tolist()) for i in range(values.shape[1])]) / total


@dataclass(frozen=True)
class Particle:
    mass: float
    jet: CurveJet

    def __post_init__(self):
        if not self.mass > 0:
            raise DomainError("particle mass must be positive")


class ParticleSystem:
    """Masses and trajectory jets of ``n`` particles, stored as ``(n, 3)`` arrays."""

    def __init__(self, masses, r, r1, r2, r3):
        self.masses = np.asarray(masses, dtype=float)
        self.r, self.r1, self.r2, self.r3 = (np.atleast_2d(_vec(a)) for a in (r, r1, r2, r3))
        if self.masses.ndim != 1 or len(self.masses) == 0:
            raise DomainError("a particle system needs at least one particle")
        if np.any(self.masses <= 0):
            raise DomainError("particle masses must be positive")
        if not all(a.shape == (len(self.masses), 3) for a in (self.r, self.r1, self.r2, self.r3)):
            raise DomainError("jet arrays must have shape (n, 3)")
        self.u = weighted_mean(self.r1, self.masses)

    @classmethod
    def from_particles(cls, particles):
        particles = list(particles)
        if not particles:
            raise DomainError("a particle system needs at least one particle")
        return cls([p.mass for p in particles],
                   [p.jet.r for p in particles], [p.jet.r1 for p in particles],
                   [p.jet.r2 for p in particles], [p.jet.r3 for p in particles])

    @property
    def particles(self):
        return [Particle(m, CurveJet(*jet))
                for m, *jet in zip(self.masses, self.r, self.r1, self.r2, self.r3)]

    @property
    def total_mass(self):
        return math.fsum(self.masses.tolist())

    def __len__(self):
        return len(self.masses)


@dataclass(frozen=True)
class GravityContext:
    g: np.ndarray = field(default_factory=lambda: np.zeros(3))
    g1: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        object.__setattr__(self, "g", _vec(self.g))
        object.__setattr__(self, "g1", _vec(self.g1))


@dataclass(frozen=True)
class SpinTermBreakdown:
    vI: np.ndarray
    vII: np.ndarray
    vIII: np.ndarray
    vIV: np.ndarray
    total: np.ndarray
    ratio: float = float("nan")  # |r' x g| / |r' x r''|, the small parameter of the split

    @classmethod
    def from_terms(cls, vI, vII, vIII, vIV, ratio=float("nan")):
        return cls(vI, vII, vIII, vIV, vI + vII + vIII + vIV, ratio)

    def as_dict(self):
        return {"vI": self.vI, "vII": self.vII, "vIII": self.vIII, "vIV": self.vIV,
                "total": self.total}


@dataclass(frozen=True)
class AxisState:
    """Instantaneous spin axis of an axially symmetric body.

    ``curvature_flow`` is the mass average of ``d ln k / dt`` over the
    body's particles (1/s); it vanishes for a body spinning about its own
    symmetry axis.
    """
    b: np.ndarray
    w: float
    dbdt: np.ndarray = field(default_factory=lambda: np.zeros(3))
    dwdt: float = 0.0
    curvature_flow: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "b", _vec(self.b))
        object.__setattr__(self, "dbdt", _vec(self.dbdt))


# --- single particle ----------------------------------------------------------

def spin_displacement_rate(frame, r_vec):
    """``dL/ds = -tau t x r_vec``; zero on a degenerate frame."""
    if frame.degenerate:
        return np.zeros(3)
    return -frame.tau * np.cross(frame.t, _vec(r_vec))


def particle_spin_velocity(frame):
    """``-(db/dt . n) (1/k) b`` with ``db/dt`` from the jet."""
    if frame.degenerate:
        return np.zeros(3)
    return -float(frame.dbdt @ frame.n) / frame.k * frame.b


def spin_velocity_terms(q1, q2, q3):
    """Vectorised ``|q1|^4 (q1, q2, q3) / |q1 x q2|^4 (q1 x q2)`` over rows.

    Rows whose frame is degenerate (stationary or straight) give zero.
    """
    q1, q2, q3 = (np.atleast_2d(_vec(a)) for a in (q1, q2, q3))
    cross = np.cross(q1, q2)
    cross_norm = np.linalg.norm(cross, axis=1)
    speed = np.linalg.norm(q1, axis=1)
    ok = (speed > SPEED_EPS) & (cross_norm > CURVATURE_EPS * speed * np.linalg.norm(q2, axis=1))
    out = np.zeros_like(q1)
    if np.any(ok):
        triple = np.einsum("ij,ij->i", cross[ok], q3[ok])
        scale = speed[ok]**4 * triple / cross_norm[ok]**4
        out[ok] = scale[:, None] * cross[ok]
    return out


# --- systems ------------------------------------------------------------------

def system_spin_velocity(sys):
    """Mass-averaged spin velocity with particle velocities taken relative to the barycenter."""
    per_particle = spin_velocity_terms(sys.r1 - sys.u, sys.r2, sys.r3)
    return weighted_mean(per_particle, sys.masses)


def system_spin_velocity_gravity(sys, gctx):
    """As :func:`system_spin_velocity` seen from the freely falling frame (``r'' - g``, ``r''' - g'``)."""
    per_particle = spin_velocity_terms(sys.r1 - sys.u, sys.r2 - gctx.g, sys.r3 - gctx.g1)
    return weighted_mean(per_particle, sys.masses)


def condition_ratio(q1, r2, g):
    """Per-row ``|q1 x g| / |q1 x r''|``; the term split needs this to be small."""
    q1, r2 = np.atleast_2d(_vec(q1)), np.atleast_2d(_vec(r2))
    num = np.linalg.norm(np.cross(q1, _vec(g)), axis=1)
    den = np.linalg.norm(np.cross(q1, r2), axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(den > 0, num / den, np.inf)


def system_condition_ratio(sys, g):
    """Largest per-particle condition ratio of the system."""
    return float(condition_ratio(sys.r1 - sys.u, sys.r2, g).max())


def decompose_arrays(q1, q2, q3, g):
    """Vectorised four-term split; returns four ``(n, 3)`` arrays.

    vI   =  g . (r' x r''')  |r'|^4 (r' x r'') / |r' x r''|^4
    vII  = -g . (r' x r''')  |r'|^4 (r' x g)   / |r' x r''|^4
    vIII = -(r', r'', r''')  |r'|^4 (r' x g)   / |r' x r''|^4
    vIV  = 4 (r', r'', r''') |r'|^4 (r' x r'') / |r' x r''|^6 [(r' x r'') . (r' x g)]
    """
    q1, q2, q3 = (np.atleast_2d(_vec(a)) for a in (q1, q2, q3))
    g = _vec(g)
    c = np.cross(q1, q2)
    d = np.cross(q1, g)
    cn = np.linalg.norm(c, axis=1)
    speed = np.linalg.norm(q1, axis=1)
    ok = (speed > SPEED_EPS) & (cn > CURVATURE_EPS * speed * np.linalg.norm(q2, axis=1))
    terms = [np.zeros_like(q1) for _ in range(4)]
    if np.any(ok):
        c, d, cn, s4 = c[ok], d[ok], cn[ok], speed[ok]**4
        g_13 = np.cross(q1[ok], q3[ok]) @ g
        triple = np.einsum("ij,ij->i", c, q3[ok])
        base = s4 / cn**4
        terms[0][ok] = (g_13 * base)[:, None] * c
        terms[1][ok] = -(g_13 * base)[:, None] * d
        terms[2][ok] = -(triple * base)[:, None] * d
        terms[3][ok] = (4 * triple * base / cn**2 * np.einsum("ij,ij->i", c, d))[:, None] * c
    return terms


def decompose_terms(jet, g):
    """The four first-order gravitational terms for one particle (barycenter at rest)."""
    terms = [t[0] for t in decompose_arrays(jet.r1, jet.r2, jet.r3, g)]
    ratio = float(condition_ratio(jet.r1, jet.r2, g)[0])
    return SpinTermBreakdown.from_terms(*terms, ratio=ratio)


# --- averaged closed forms ----------------------------------------------------------

def _check_spin_rate(w):
    if not w > 0:
        raise DomainError("spin rate w must be positive")


def averaged_sphere_velocity(axis, g):
    """Closed-form body averages of the four terms.

    vI   = (db/dt . g) b / w^2 + 3 (g . b) (dw/dt) b / w^3 - (g . b) b (2 / w^2) <d ln k/dt>
    vII  = 0
    vIII = g x (b x db/dt) / (2 w^2)
    vIV  = -2 (db/dt . g) b / w^2
    """
    _check_spin_rate(axis.w)
    g = _vec(g)
    b, db, w = axis.b, axis.dbdt, axis.w
    gb = float(g @ b)
    dbg = float(db @ g)
    vI = (dbg / w**2 + 3.0 * gb * axis.dwdt / w**3 - gb * 2.0 * axis.curvature_flow / w**2) * b
    vII = np.zeros(3)
    vIII = np.cross(g, np.cross(b, db)) / (2.0 * w**2)
    vIV = -2.0 * dbg / w**2 * b
    return SpinTermBreakdown.from_terms(vI, vII, vIII, vIV)


def axis_fixed_spin_velocity(axis, g):
    """``3 (g . b) (dw/dt) b / w^3`` for a fixed axis and unchanging curvature.

    Only the spin-rate term is evaluated; ``dbdt`` and ``curvature_flow`` are
    assumed zero.
    """
    _check_spin_rate(axis.w)
    return 3.0 / axis.w**3 * float(_vec(g) @ axis.b) * axis.dwdt * axis.b


def newton_departure(axis, g, phi, dphi, d2phi=0.0):
    """Component of the spin acceleration along g for a sphere at constant w.

    ``-(g / 4 w^2) d^2(cos 2 phi)/dt^2`` where ``phi`` is the angle between
    the spin axis and g, given with its first two time derivatives.
    """
    _check_spin_rate(axis.w)
    g_mag = float(np.linalg.norm(_vec(g)))
    d2cos = -4.0 * math.cos(2 * phi) * dphi**2 - 2.0 * math.sin(2 * phi) * d2phi
    return -g_mag / (4.0 * axis.w**2) * d2cos


def disc_circle_radius(phi, w, g_mag):
    """Radius ``g |sin 2 phi| / (4 w^2)`` of the barycenter circle of a precessing disc."""
    if w == 0:
        raise DomainError("spin rate must be nonzero")
    return g_mag * abs(math.sin(2 * phi)) / (4.0 * w**2)


def spin_down_displacement(w1, w2, g_mag, phi):
    """Horizontal spin displacement ``(3/2) g (w2^-2 - w1^-2) sin phi cos phi``."""
    if w1 == 0 or w2 == 0 or (w1 > 0) != (w2 > 0):
        raise DomainError("w1 and w2 must be nonzero with the same sign")
    return 1.5 * g_mag * (w2**-2 - w1**-2) * math.sin(phi) * math.cos(phi)


def spin_energy(m, V):
    """Energy ``m |V|^2 / 2`` gained by spin motion up to spin velocity V."""
    if not m > 0:
        raise DomainError("mass must be positive")
    V = _vec(V)
    return 0.5 * m * float(V @ V)


def total_kinetic_energy(m, v, V):
    """``m v^2 / 2 + m V^2 / 2``: the spin part adds, it does not combine with v."""
    v = _vec(v)
    return 0.5 * m * float(v @ v) + spin_energy(m, V)


def _lambda_integrand(x, a):
    return 1.0 / (1.0 + (np.cos(x) + 1.0 / a)**2)**2


def lambda_coefficient(A, rtol=1e-12, max_nodes=1 << 20):
    """Disc average of ``|r' x r''|^4 / |r' x (r'' - g)|^4`` at 45 degrees tilt.

    ``(1 / (2 pi A^4)) int_0^{2 pi} dx / [1 + (cos x + 1/A)^2]^2`` with
    ``A = (sqrt 2 / 2) g / (r w^2)``.  The integrand is smooth and periodic,
    so the trapezoidal rule converges geometrically; nodes are doubled until
    successive estimates agree to ``rtol``.
    """
    if not A > 0:
        raise DomainError("A must be positive")
    n = 16
    prev = None
    while n <= max_nodes:
        x = 2 * np.pi * np.arange(n) / n
        est = _lambda_integrand(x, A).mean() / A**4
        if prev is not None and abs(est - prev) <= rtol * abs(est):
            return float(est)
        prev, n = est, 2 * n
    raise RuntimeError("lambda quadrature did not converge")


def lambda_parameter(g_mag, r, w):
    """``A = (sqrt 2 / 2) g / (r w^2)``."""
    return math.sqrt(2) / 2 * g_mag / (r * w**2)


# --- curvature flow -----------------------------------------------------------------

def curvature_flow(masses, jets_at, t, h):
    """Mass average of ``d ln k / dt`` by central differences.

    ``jets_at(t)`` returns ``(r1, r2)`` arrays of shape ``(n, 3)``.
    """
    def log_k(s):
        r1, r2 = jets_at(s)
        cross = np.linalg.norm(np.cross(r1, r2), axis=1)
        speed = np.linalg.norm(r1, axis=1)
        return np.log(cross / speed**3)

    rate = (log_k(t + h) - log_k(t - h)) / (2 * h)
    return float(weighted_mean(rate[:, None], masses)[0])

