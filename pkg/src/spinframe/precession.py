"""Gyroscope-axis precession from N gravitating, moving and rotating sources.

Every formula is a sum over sources of a geodetic term
``(v - v_a) x grad(G m_a / (r_a c^2))`` and a frame-dragging term
``G [J_a - 3 n_a (n_a . J_a)] / (r_a^3 c^2)`` with different coefficients.
``n_a`` is the unit vector from source ``a`` to the gyroscope, so the
gradient at the gyroscope is ``-G m_a n_a / (r_a^2 c^2)``.

One source of mass m at the origin, gyroscope at (r, 0, 0) moving with
(0, v, 0): n = (1, 0, 0), grad = (-G m / r^2 c^2, 0, 0) and the geodetic
factor ``v x grad`` equals ``(0, 0, G m v / (r^2 c^2))``.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

G_SI = 6.67430e-11
C_SI = 299792458.0


def _vec(x):
    return np.asarray(x, dtype=float)


@dataclass(frozen=True)
class GravSource:
    mass: float
    position: np.ndarray
    velocity: np.ndarray = field(default_factory=lambda: np.zeros(3))
    angular_momentum: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        if not self.mass > 0:
            raise DomainError("source mass must be positive")
        for name in ("position", "velocity", "angular_momentum"):
            object.__setattr__(self, name, _vec(getattr(self, name)))


@dataclass(frozen=True)
class GyroState:
    position: np.ndarray
    velocity: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        object.__setattr__(self, "position", _vec(self.position))
        object.__setattr__(self, "velocity", _vec(self.velocity))


@dataclass(frozen=True)
class PpnParams:
    gamma: float = 1.0
    G: float = G_SI
    c: float = C_SI

    def __post_init__(self):
        if not (self.G > 0 and self.c > 0):
            raise DomainError("G and c must be positive")


@dataclass(frozen=True)
class PrecessionTerms:
    """Per-formula sums before the coefficients are applied."""
    geodetic: np.ndarray   # sum (v - v_a) x grad
    dragging: np.ndarray   # sum G [J - 3 n (n . J)] / r^3 c^2
    source_motion: np.ndarray  # sum v_a x grad


def potential_gradient(gyro, source, p):
    """Gradient of ``G m_a / (r_a c^2)`` at the gyroscope."""
    sep = gyro.position - source.position
    r = np.linalg.norm(sep)
    if r == 0:
        raise DomainError("gyroscope coincides with a source")
    return -p.G * source.mass * sep / (r**3 * p.c**2)


def precession_terms(gyro, sources, p):
    geodetic = np.zeros(3)
    dragging = np.zeros(3)
    source_motion = np.zeros(3)
    for s in sources:
        grad = potential_gradient(gyro, s, p)
        sep = gyro.position - s.position
        r = np.linalg.norm(sep)
        n = sep / r
        geodetic = geodetic + np.cross(gyro.velocity - s.velocity, grad)
        j = s.angular_momentum
        dragging = dragging + p.G * (j - 3 * n * (n @ j)) / (r**3 * p.c**2)
        source_motion = source_motion + np.cross(s.velocity, grad)
    return PrecessionTerms(geodetic, dragging, source_motion)


def _combine(terms, k_geodetic, k_dragging, k_motion=0.0):
    return k_geodetic * terms.geodetic - k_dragging * terms.dragging - k_motion * terms.source_motion


def omega_fermi_walker(gyro, sources, p=PpnParams()):
    """Fermi-Walker transported axis: coefficients gamma + 1/2, (gamma + 1)/2, plus the 1/2 source-velocity term."""
    return _combine(precession_terms(gyro, sources, p), p.gamma + 0.5, 0.5 * (p.gamma + 1.0), 0.5)


def omega_gyro(gyro, sources, p=PpnParams()):
    """Axis precession seen close to the gyroscope: coefficients 2 and 1."""
    return _combine(precession_terms(gyro, sources, p), 2.0, 1.0)


def omega_stars(gyro, sources, p=PpnParams()):
    """Apparent precession of the distant stars: coefficients 1/2 and 1/4."""
    return _combine(precession_terms(gyro, sources, p), 0.5, 0.25)


def omega_relative(gyro, sources, p=PpnParams()):
    """Gyroscope relative to the distant stars: coefficients 3/2 and 3/4."""
    return _combine(precession_terms(gyro, sources, p), 1.5, 0.75)
