"""Rigid bodies made of particles, prescribed rotation laws and the gravity scenarios.

Particle jets are taken relative to the barycenter: a body point ``x`` moves
as ``A(t) x`` and its first three derivatives come from the derivatives of
``A``.  The barycenter itself is integrated separately, and the spin
velocity is added to its rate as a displacement (no feedback into the
particle jets).
"""
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import Polynomial

from . import liegroup
from .errors import DomainError
from .kinematics import CurveJet
from .spin import (AxisState, GravityContext, ParticleSystem, SpinTermBreakdown,
                   averaged_sphere_velocity, axis_fixed_spin_velocity, condition_ratio,
                   decompose_arrays, spin_velocity_terms, weighted_mean)

E_X, E_Y, E_Z = np.eye(3)


# --- bodies -----------------------------------------------------------------------------

@dataclass(frozen=True)
class BodyModel:
    """Point masses at body-frame positions with their barycenter at the origin."""
    masses: np.ndarray
    positions: np.ndarray
    shape: str = "point-set"
    radius: float = 1.0

    def __post_init__(self):
        m = np.asarray(self.masses, dtype=float)
        x = np.atleast_2d(np.asarray(self.positions, dtype=float))
        if m.ndim != 1 or x.shape != (len(m), 3):
            raise DomainError("masses must be (n,) and positions (n, 3)")
        if np.any(m <= 0):
            raise DomainError("particle masses must be positive")
        scale = max(float(np.abs(x).max()), np.finfo(float).tiny)
        if np.linalg.norm(weighted_mean(x, m)) > 1e-12 * scale:
            raise DomainError("barycenter of the body is not at the origin")
        object.__setattr__(self, "masses", m)
        object.__setattr__(self, "positions", x)

    @property
    def particles(self):
        return list(zip(self.masses.tolist(), self.positions))

    @property
    def total_mass(self):
        return math.fsum(self.masses.tolist())

    def inertia(self, axis):
        """Moment of inertia about a unit axis through the barycenter."""
        axis = np.asarray(axis, dtype=float)
        axis = axis / np.linalg.norm(axis)
        rho2 = np.sum(self.positions**2, axis=1) - (self.positions @ axis)**2
        return math.fsum((self.masses * rho2).tolist())

    def __len__(self):
        return len(self.masses)


def _ring(radius, z, n, phase=0.5):
    ang = 2 * np.pi * (np.arange(n) + phase) / n
    return np.column_stack([radius * np.cos(ang), radius * np.sin(ang), np.full(n, z)])


def discretize_sphere(radius, mass, n_rings, n_per_ring):
    """Thin spherical shell as equal-mass particles on rings.

    Ring heights are midpoints of ``n_rings`` equal slices in z, which cut
    the shell into bands of equal area.
    """
    if n_rings < 4 or n_per_ring < 8:
        raise DomainError("sphere needs n_rings >= 4 and n_per_ring >= 8")
    if not (radius > 0 and mass > 0):
        raise DomainError("radius and mass must be positive")
    z = radius * (1.0 - (2 * np.arange(n_rings) + 1.0) / n_rings)
    rho = np.sqrt(radius**2 - z**2)
    pts = np.vstack([_ring(r, zz, n_per_ring) for r, zz in zip(rho, z)])
    m = np.full(len(pts), mass / len(pts))
    return BodyModel(m, pts, "sphere", radius)


def discretize_disc(radius, mass, n_radii, n_per_ring, hoop=False):
    """Flat disc in the body xy-plane.

    Rings sit at the midpoints of ``n_radii`` equal radial slices, each with
    the mass of its annulus.  ``hoop=True`` puts the whole mass on one ring
    of the given radius.
    """
    if n_radii < 1 or n_per_ring < 3:
        raise DomainError("disc needs n_radii >= 1 and n_per_ring >= 3")
    if not (radius > 0 and mass > 0):
        raise DomainError("radius and mass must be positive")
    if hoop:
        pts = _ring(radius, 0.0, n_per_ring)
        return BodyModel(np.full(n_per_ring, mass / n_per_ring), pts, "disc", radius)
    r = radius * (np.arange(n_radii) + 0.5) / n_radii
    ring_mass = mass * r / r.sum()
    pts = np.vstack([_ring(rr, 0.0, n_per_ring) for rr in r])
    m = np.repeat(ring_mass / n_per_ring, n_per_ring)
    return BodyModel(m, pts, "disc", radius)


def combine_bodies(*bodies, shape="point-set"):
    """Union of bodies sharing a barycenter, e.g. nested shells making a ball."""
    m = np.concatenate([b.masses for b in bodies])
    x = np.vstack([b.positions for b in bodies])
    return BodyModel(m, x, shape, max(b.radius for b in bodies))


def discretize_ball(radius, mass, n_shells, n_rings, n_per_ring):
    """Solid ball as concentric shells, each carrying the mass of its spherical layer."""
    if n_shells < 1:
        raise DomainError("ball needs n_shells >= 1")
    edges = radius * np.arange(n_shells + 1) / n_shells
    shells = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        m = mass * (hi**3 - lo**3) / radius**3
        shells.append(discretize_sphere(0.5 * (lo + hi), m, n_rings, n_per_ring))
    return combine_bodies(*shells, shape="sphere")


# --- motion laws --------------------------------------------------------------------------

def _poly(coeffs):
    return coeffs if isinstance(coeffs, Polynomial) else Polynomial(np.asarray(coeffs, dtype=float))


def _horner(coef, t):
    acc = 0.0
    for c in reversed(coef):
        acc = acc * t + c
    return acc


def _product_jet(p, q):
    """Derivatives 0..3 of a matrix product from those of its factors."""
    return [sum(math.comb(n, k) * p[k] @ q[n - k] for k in range(n + 1)) for n in range(4)]


@dataclass(frozen=True)
class ExpProductLaw:
    """``A(t) = exp(theta_1(t) K_1) ... exp(theta_m(t) K_m) R0`` with polynomial angles.

    ``axes`` are rotation axes (``K_i = hat(axis_i)``), ``angles`` the
    polynomial coefficients of each ``theta_i`` (lowest order first).
    Derivatives up to third order are exact.
    """
    axes: Sequence
    angles: Sequence
    r0: np.ndarray = field(default_factory=lambda: np.eye(3))
    spin_index: int = -1  # factor whose angle rate is the spin rate w

    def __post_init__(self):
        if len(self.axes) != len(self.angles):
            raise DomainError("one angle polynomial per axis")
        ks = tuple(liegroup.hat(np.asarray(a, dtype=float) / np.linalg.norm(a)) for a in self.axes)
        object.__setattr__(self, "_ks", ks)
        thetas = tuple(_poly(a) for a in self.angles)
        object.__setattr__(self, "_thetas", tuple(
            tuple(tuple(p.deriv(i).coef.tolist()) if i else tuple(p.coef.tolist()) for i in range(4))
            for p in thetas))
        object.__setattr__(self, "r0", np.asarray(self.r0, dtype=float))

    def _factor_jet(self, k, theta, t):
        d0, d1, d2, d3 = (_horner(c, t) for c in theta)
        f = liegroup.exp_so3(d0 * k)
        k2 = k @ k
        k3 = k2 @ k
        return [f, d1 * k @ f, (d2 * k + d1**2 * k2) @ f,
                (d3 * k + 3 * d1 * d2 * k2 + d1**3 * k3) @ f]

    def jets(self, t):
        """``[A, A', A'', A''']`` at time t."""
        z = np.zeros((3, 3))
        acc = [self.r0, z, z, z]
        for k, theta in reversed(list(zip(self._ks, self._thetas))):
            acc = _product_jet(self._factor_jet(k, theta, t), acc)
        return acc

    def __call__(self, t):
        return self.jets(t)[0]

    def spin_rate(self, t):
        """Rate of the spin factor's angle, the w of the averaged formulas."""
        return _horner(self._thetas[self.spin_index][1], t)

    def spin_acceleration(self, t):
        return _horner(self._thetas[self.spin_index][2], t)


@dataclass(frozen=True)
class RotationLaw:
    """Any rotation history ``A(t)``; derivatives by O(h^2) central differences."""
    rotation: Callable[[float], np.ndarray]
    h: float = 1e-4

    def __post_init__(self):
        if not self.h > 0:
            raise DomainError("finite-difference step must be positive")

    def jets(self, t):
        h = self.h
        f = lambda s: np.asarray(self.rotation(s), dtype=float)
        p2, p1, p0, m1, m2 = f(t + 2 * h), f(t + h), f(t), f(t - h), f(t - 2 * h)
        return [p0, (p1 - m1) / (2 * h), (p1 - 2 * p0 + m1) / h**2,
                (p2 - 2 * p1 + 2 * m1 - m2) / (2 * h**3)]

    def __call__(self, t):
        return np.asarray(self.rotation(t), dtype=float)


def precessing_law(phi, omega_big, w, w_dot=0.0):
    """Axis ``b = (sin phi cos Omega t, sin phi sin Omega t, cos phi)`` spinning at ``w + w_dot t``."""
    return ExpProductLaw([E_Z, E_Y, E_Z], [[0.0, omega_big], [phi], [0.0, w, 0.5 * w_dot]])


def nutating_law(omega_big, w, phi0=0.0):
    """Axis ``b = (sin phi, 0, cos phi)`` with ``phi = phi0 + Omega t``, spinning at w."""
    return ExpProductLaw([E_Y, E_Z], [[phi0, omega_big], [0.0, w]])


def tilted_spin_law(phi, w_poly):
    """Fixed axis ``b = (cos phi, 0, sin phi)`` with spin angle polynomial ``w_poly``."""
    return ExpProductLaw([E_Y, E_Z], [[0.5 * np.pi - phi], w_poly])


def law_axis(law, t, body_axis=E_Z):
    """Spin axis ``A b0`` and its time derivative."""
    a = law.jets(t)
    return a[0] @ body_axis, a[1] @ body_axis


def rigid_arrays(body, law, t):
    """``(r, r1, r2, r3)`` arrays of shape (n, 3) for all particles."""
    a = law.jets(t)
    return tuple(body.positions @ ai.T for ai in a)


def rigid_trajectories(body, law, t, h=None):
    """Per-particle jets of ``t -> A(t) x`` (``h`` only matters for finite-difference laws)."""
    if h is not None and isinstance(law, RotationLaw) and h != law.h:
        law = RotationLaw(law.rotation, h)
    r, r1, r2, r3 = rigid_arrays(body, law, t)
    return [CurveJet(*row) for row in zip(r, r1, r2, r3)]


def rigid_system(body, law, t, offset=(0.0, 0.0, 0.0), velocity=(0.0, 0.0, 0.0)):
    """ParticleSystem of the body at time t, optionally translated and moving."""
    r, r1, r2, r3 = rigid_arrays(body, law, t)
    return ParticleSystem(body.masses, r + np.asarray(offset), r1 + np.asarray(velocity), r2, r3)


# --- integration --------------------------------------------------------------------------

def rk4(rhs, y0, t0, h, n_steps):
    """Classic fixed-step RK4; returns times (n+1,) and states (n+1, dim)."""
    y = np.array(y0, dtype=float)
    ts = t0 + h * np.arange(n_steps + 1)
    out = np.empty((n_steps + 1, y.size))
    out[0] = y
    for i in range(n_steps):
        t, t_mid = ts[i], ts[i] + 0.5 * h
        k1 = rhs(t, y)
        k2 = rhs(t_mid, y + 0.5 * h * k1)
        k3 = rhs(t_mid, y + 0.5 * h * k2)
        k4 = rhs(ts[i + 1], y + h * k3)
        y = y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        out[i + 1] = y
    return ts, out


def _n_steps(t_end, h):
    if not (h > 0 and t_end > 0):
        raise DomainError("h and t_end must be positive")
    return int(round(t_end / h))


@dataclass
class SimOutput:
    t: np.ndarray
    position: np.ndarray
    spin_velocity: np.ndarray
    spin_acceleration: np.ndarray
    ratio: np.ndarray
    extras: dict = field(default_factory=dict)

    @property
    def condition_violated(self):
        """True when the condition ratio exceeded 1 at some sample."""
        return bool(np.any(self.ratio > 1.0))

    def columns(self):
        """Named columns for CSV output."""
        cols = {"t_s": self.t}
        for name, arr in (("x", self.position), ("V", self.spin_velocity), ("A", self.spin_acceleration)):
            for i, ax in enumerate("xyz"):
                cols[f"{name}_{ax}"] = arr[:, i]
        cols["ratio"] = self.ratio
        return cols


def _memo(f):
    """Cache a function of time for the length of one run (RK4 revisits the grid)."""
    cache = {}

    def wrapped(t):
        key = float(t)
        if key not in cache:
            cache[key] = f(key)
        return cache[key]
    return wrapped


def _grid_derivative(f, ts, h):
    """Values on the grid and their central differences, reusing neighbouring samples."""
    vals = np.array([f(t) for t in ts])
    padded = np.concatenate([[f(ts[0] - h)], vals, [f(ts[-1] + h)]])
    return vals, (padded[2:] - padded[:-2]) / (2 * h)


def run_free_fall(body, law, gctx, t_end, h, x0=(0.0, 0.0, 0.0), u0=(0.0, 0.0, 0.0)):
    """Barycenter of a spinning body in free fall.

    The spin velocity is the full mass-weighted formula evaluated on the
    barycentric jets with ``r'' - g`` and ``r''' - g'``.  Two bookkeepings
    are integrated side by side: ``position`` adds V to the rate
    (``dx/dt = U + V``); ``extras["position_accel"]`` treats dV/dt as an
    extra acceleration starting from rest (``dx/dt = U + V - V(0)``).
    ``spin_acceleration`` is dV/dt by central differences with step h.
    """
    n = _n_steps(t_end, h)
    g = gctx.g

    @_memo
    def sample(t):
        _, r1, r2, r3 = rigid_arrays(body, law, t)
        per = spin_velocity_terms(r1, r2 - g, r3 - gctx.g1)
        return weighted_mean(per, body.masses), float(condition_ratio(r1, r2, g).max())

    def spin_v(t):
        return sample(t)[0]

    v0 = spin_v(0.0)

    def rhs(t, y):
        v = spin_v(t)
        u = y[3:6]
        return np.concatenate([u + v, g, u + v - v0])

    y0 = np.concatenate([x0, u0, x0])
    ts, ys = rk4(rhs, y0, 0.0, h, n)
    vs, acc = _grid_derivative(spin_v, ts, h)
    ratio = np.array([sample(t)[1] for t in ts])
    g_mag = np.linalg.norm(g)
    departure = acc @ (g / g_mag) if g_mag > 0 else np.zeros(len(ts))
    return SimOutput(ts, ys[:, 0:3], vs, acc, ratio,
                     {"position_accel": ys[:, 6:9], "velocity": ys[:, 3:6], "departure": departure})


def fit_circle(xy):
    """Algebraic least-squares circle fit; returns (center (2,), radius)."""
    xy = np.asarray(xy, dtype=float)
    x, y = xy[:, 0], xy[:, 1]
    design = np.column_stack([x, y, np.ones_like(x)])
    sol, *_ = np.linalg.lstsq(design, x**2 + y**2, rcond=None)
    center = 0.5 * sol[:2]
    return center, float(np.sqrt(sol[2] + center @ center))


def fit_angular_rate(t, xy, center):
    """Slope of the unwrapped polar angle about ``center``."""
    d = np.asarray(xy) - center
    ang = np.unwrap(np.arctan2(d[:, 1], d[:, 0]))
    return float(np.polyfit(t, ang, 1)[0])


def axis_state(law, t, h=1e-4, body_axis=E_Z, curvature_flow=0.0):
    """AxisState of a law at time t.

    For an :class:`ExpProductLaw` w is the rate of its spin factor; otherwise
    it is the angular velocity component along the axis, differenced with h.
    """
    b, db = law_axis(law, t, body_axis)
    if isinstance(law, ExpProductLaw):
        w, dw = law.spin_rate(t), law.spin_acceleration(t)
    else:
        w = _projected_rate(law, t, body_axis)
        dw = (_projected_rate(law, t + h, body_axis) - _projected_rate(law, t - h, body_axis)) / (2 * h)
    return AxisState(b, w, db, dw, curvature_flow)


def _projected_rate(law, t, body_axis=E_Z):
    a = law.jets(t)
    omega = liegroup.vee(a[1] @ a[0].T)
    return float(omega @ (a[0] @ body_axis))


def run_disc_on_plane(body, law, g_mag, t_end, h):
    """Barycenter of a spinning disc resting on a horizontal plane.

    The barycenter moves with the horizontal part of the averaged spin
    velocity (sum of the closed-form terms) with ``g = (0, 0, -g_mag)``.
    ``extras`` holds the fitted circle, the fitted angular rate and the
    largest ``|V . b| / |V|``.
    """
    n = _n_steps(t_end, h)
    g = np.array([0.0, 0.0, -g_mag])
    horiz = np.diag([1.0, 1.0, 0.0])

    @_memo
    def spin_v(t):
        return averaged_sphere_velocity(axis_state(law, t, h), g).total

    ts, ys = rk4(lambda t, y: horiz @ spin_v(t), np.zeros(3), 0.0, h, n)
    vs, acc = _grid_derivative(spin_v, ts, h)
    ratio = np.array([float(condition_ratio(r1, r2, g).max())
                      for _, r1, r2, _ in (rigid_arrays(body, law, t) for t in ts)])
    center, radius = fit_circle(ys[:, :2])
    rate = fit_angular_rate(ts, ys[:, :2], center)
    axes = np.array([law_axis(law, t)[0] for t in ts])
    vnorm = np.linalg.norm(vs, axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        vb = np.where(vnorm > 0, np.abs(np.einsum("ij,ij->i", vs, axes)) / vnorm, 0.0)
    return SimOutput(ts, ys, vs, acc, ratio,
                     {"circle_center": center, "circle_radius": radius, "angular_rate": rate,
                      "max_v_dot_b": float(vb.max())})


def run_spin_down(body, w1, w2, phi, g_mag, t_end, h, w_law=None):
    """Horizontal drift while the spin rate falls from w1 to w2 about a fixed tilted axis.

    The axis is ``b = (cos phi, 0, sin phi)`` and ``w_law(t)`` defaults to a
    linear ramp over ``[0, t_end]``.  ``extras["displacement"]`` is the
    final horizontal distance.
    """
    n = _n_steps(t_end, h)
    if w_law is None:
        w_law = lambda t: w1 + (w2 - w1) * t / t_end
    samples = np.array([w_law(t) for t in np.linspace(0.0, t_end, n + 1)])
    if np.any(samples == 0) or np.any(np.sign(samples) != np.sign(samples[0])):
        raise DomainError("spin rate changes sign during spin-down")
    b = np.array([math.cos(phi), 0.0, math.sin(phi)])
    g = np.array([0.0, 0.0, -g_mag])
    horiz = np.diag([1.0, 1.0, 0.0])

    def spin_v(t):
        w = w_law(t)
        dw = (w_law(t + h) - w_law(t - h)) / (2 * h)
        sgn = 1.0 if w > 0 else -1.0
        return axis_fixed_spin_velocity(AxisState(sgn * b, abs(w), dwdt=sgn * dw), g)

    ts, ys = rk4(lambda t, y: horiz @ spin_v(t), np.zeros(3), 0.0, h, n)
    vs, acc = _grid_derivative(spin_v, ts, h)
    ratio = np.full(len(ts), np.nan)
    if len(body):
        radius = body.radius
        ratio = np.array([g_mag / (radius * w_law(t)**2) for t in ts])
    return SimOutput(ts, ys, vs, acc, ratio, {"displacement": float(np.linalg.norm(ys[-1, :2]))})


def brute_force_average(body, law, g, t, h=None):
    """Mass-weighted sums of the four per-particle terms at time t."""
    _, r1, r2, r3 = rigid_arrays(body, law, t)
    g = np.asarray(g, dtype=float)
    terms = [weighted_mean(v, body.masses) for v in decompose_arrays(r1, r2, r3, g)]
    ratio = float(condition_ratio(r1, r2, g).max())
    return SpinTermBreakdown.from_terms(*terms, ratio=ratio)


def exact_average(body, law, g, t):
    """The full (unsplit) mass-weighted spin velocity in free fall at time t, minus its g = 0 value."""
    _, r1, r2, r3 = rigid_arrays(body, law, t)
    g = np.asarray(g, dtype=float)
    with_g = weighted_mean(spin_velocity_terms(r1, r2 - g, r3), body.masses)
    without = weighted_mean(spin_velocity_terms(r1, r2, r3), body.masses)
    return with_g - without


def body_curvature_flow(body, law, t, h):
    """Mass average of d ln k / dt over the body's particles."""
    from .spin import curvature_flow

    def jets_at(s):
        _, r1, r2, _ = rigid_arrays(body, law, s)
        return r1, r2
    return curvature_flow(body.masses, jets_at, t, h)


def predicted_departure(law, g, t, w, body_axis=E_Z):
    """Closed-form g-axis departure ``-(|g| / 4 w^2) d^2(cos 2 phi)/dt^2`` along a law.

    ``phi`` is the angle between the spin axis and g; with ``c = b . g/|g|``,
    ``d^2 cos 2 phi / dt^2 = 4 (c'^2 + c c'')``.
    """
    g = np.asarray(g, dtype=float)
    g_mag = float(np.linalg.norm(g))
    a = law.jets(t)
    b, b1, b2 = (ai @ body_axis for ai in a[:3])
    ghat = g / g_mag
    c0, c1, c2 = float(b @ ghat), float(b1 @ ghat), float(b2 @ ghat)
    return -g_mag / (4.0 * w**2) * 4.0 * (c1**2 + c0 * c2)
