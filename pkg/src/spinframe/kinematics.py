"""Frenet-Serret frames, osculating circles and Thomas precession."""
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError

SPEED_EPS = 1e-12      # |r'| below this (m/s) is a stationary point
CURVATURE_EPS = 1e-12  # |r' x r''| <= eps * |r'| |r''| is a straight segment


@dataclass(frozen=True)
class CurveJet:
    """Position and its first three time derivatives at one instant."""
    r: np.ndarray
    r1: np.ndarray
    r2: np.ndarray
    r3: np.ndarray

    def __post_init__(self):
        for name in ("r", "r1", "r2", "r3"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))

    def shifted(self, u=(0.0, 0.0, 0.0), g=(0.0, 0.0, 0.0), g1=(0.0, 0.0, 0.0)):
        """Jet seen from a frame moving with velocity ``u`` and acceleration ``g``."""
        return CurveJet(self.r, self.r1 - np.asarray(u), self.r2 - np.asarray(g),
                        self.r3 - np.asarray(g1))


@dataclass(frozen=True)
class FrenetFrame:
    t: np.ndarray
    n: np.ndarray
    b: np.ndarray
    k: float
    tau: float
    s_rate: float
    dbdt: np.ndarray = field(default_factory=lambda: np.zeros(3))
    degenerate: bool = False

    @property
    def radius(self):
        """Radius of curvature 1/k (infinite on a degenerate frame)."""
        return np.inf if self.degenerate else 1.0 / self.k

    def matrix(self):
        """Rows t, n, b."""
        return np.vstack([self.t, self.n, self.b])


_ZERO = np.zeros(3)
DEGENERATE_FRAME = FrenetFrame(_ZERO, _ZERO, _ZERO, 0.0, 0.0, 0.0, _ZERO, True)


def frenet_frame(jet):
    """Frame, curvature and torsion of a trajectory from its time derivatives.

    ``k = |r1 x r2| / |r1|^3`` and ``tau = (r1, r2, r3) / |r1 x r2|^2``.
    ``dbdt`` is the chain-rule derivative of the binormal,
    ``(r1 x r3 - b (b . r1 x r3)) / |r1 x r2|``.  Stationary points and
    straight segments return a frame with ``degenerate=True``.
    """
    r1, r2, r3 = jet.r1, jet.r2, jet.r3
    speed = np.linalg.norm(r1)
    cross = np.cross(r1, r2)
    cross_norm = np.linalg.norm(cross)
    if speed <= SPEED_EPS or cross_norm <= CURVATURE_EPS * speed * np.linalg.norm(r2):
        return DEGENERATE_FRAME
    t = r1 / speed
    b = cross / cross_norm
    n = np.cross(b, t)
    k = cross_norm / speed**3
    tau = float(cross @ r3) / cross_norm**2
    c13 = np.cross(r1, r3)
    dbdt = (c13 - b * (b @ c13)) / cross_norm
    return FrenetFrame(t, n, b, float(k), tau, float(speed), dbdt)


@dataclass(frozen=True)
class TrajectorySampler:
    """A position function of time plus the finite-difference step used on it."""
    position: Callable[[float], np.ndarray]
    h: float = 1e-4

    def __post_init__(self):
        if not self.h > 0:
            raise DomainError("finite-difference step must be positive")


def jet_from_sampler(sampler, t):
    """Central differences, all O(h^2).

    r1 = (f(t+h) - f(t-h)) / 2h
    r2 = (f(t+h) - 2 f(t) + f(t-h)) / h^2
    r3 = (f(t+2h) - 2 f(t+h) + 2 f(t-h) - f(t-2h)) / 2h^3
    """
    h = sampler.h
    f = lambda s: np.asarray(sampler.position(s), dtype=float)
    p2, p1, p0, m1, m2 = f(t + 2 * h), f(t + h), f(t), f(t - h), f(t - 2 * h)
    return CurveJet(p0,
                    (p1 - m1) / (2 * h),
                    (p1 - 2 * p0 + m1) / h**2,
                    (p2 - 2 * p1 + 2 * m1 - m2) / (2 * h**3))


def thomas_precession(v, a, c):
    """Angular velocity ``-(v x a) / (2 c^2)``."""
    return -np.cross(np.asarray(v, dtype=float), np.asarray(a, dtype=float)) / (2.0 * c**2)


def osculating_center(jet):
    """Center ``r + n / k`` of the osculating circle."""
    frame = frenet_frame(jet)
    if frame.degenerate:
        raise DomainError("osculating circle undefined for a straight or stationary point")
    return jet.r + frame.n / frame.k
