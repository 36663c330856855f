"""The verification suite: one group of numerical checks per acceptance criterion.

Every check returns a :class:`CheckResult`.  Randomised groups draw from
their own child of one ``numpy.random.SeedSequence``, so a group's numbers
do not depend on which other groups were run.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm
from scipy.spatial.transform import Rotation

from . import invariants as inv
from . import liegroup as lg
from . import precession as pr
from . import sim
from .spin import AxisState, GravityContext, averaged_sphere_velocity, newton_departure, \
    spin_down_displacement, disc_circle_radius, spin_velocity_terms, weighted_mean


@dataclass(frozen=True)
class CheckResult:
    name: str
    computed: float
    expected: float
    tol: float
    passed: bool

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return (f"CHECK {self.name} computed={self.computed:.17g} "
                f"expected={self.expected:.17g} tol={self.tol:.17g} {status}")


def error_check(name, err, tol):
    """An error measure that must not exceed tol (expected value 0)."""
    err = float(err)
    return CheckResult(name, err, 0.0, tol, bool(err <= tol))


def value_check(name, computed, expected, tol, relative=False):
    computed, expected = float(computed), float(expected)
    diff = abs(computed - expected)
    if relative:
        diff /= abs(expected)
    return CheckResult(name, computed, expected, tol, bool(diff <= tol))


def _rng(seed, group):
    return np.random.default_rng(np.random.SeedSequence([seed, group]))


# --- 1: isomorphisms --------------------------------------------------------------------

def _random_lorentz(rng, scale=1.0):
    return expm(lg.lorentz_algebra(*(scale * rng.uniform(-1, 1, 6))))


def check_isomorphisms(seed, n_group=1000, n_bracket=500):
    rng = _rng(seed, 1)
    hom, rt = 0.0, 0.0
    for _ in range(n_group):
        l1, l2 = _random_lorentz(rng), _random_lorentz(rng)
        f1, f2 = lg.lorentz_to_complex(l1), lg.lorentz_to_complex(l2)
        f12 = lg.lorentz_to_complex(l1 @ l2)
        hom = max(hom, np.abs(f12 - f1 @ f2).max() / max(1.0, np.abs(f12).max()))
        back = lg.complex_to_lorentz(f1)
        rt = max(rt, np.abs(back - l1).max() / max(1.0, np.abs(l1).max()))
    alg, gs = 0.0, 0.0
    for _ in range(n_bracket):
        x = lg.lorentz_algebra(*rng.uniform(-1, 1, 6))
        y = lg.lorentz_algebra(*rng.uniform(-1, 1, 6))
        lhs = lg.algebra_iso(lg.bracket(x, y))
        rhs = lg.bracket(lg.algebra_iso(x), lg.algebra_iso(y))
        alg = max(alg, np.abs(lhs - rhs).max())
        g1 = (lg.hat(rng.uniform(-1, 1, 3)), lg.hat(rng.uniform(-1, 1, 3)))
        g2 = (lg.hat(rng.uniform(-1, 1, 3)), lg.hat(rng.uniform(-1, 1, 3)))
        p1, m1 = lg.gs_split(g1)
        p2, m2 = lg.gs_split(g2)
        p12, m12 = lg.gs_split(lg.gs_bracket(g1, g2))
        gs = max(gs, np.abs(p12 - lg.bracket(p1, p2)).max(), np.abs(m12 - lg.bracket(m1, m2)).max())
    return [error_check("iso_homomorphism", hom, 1e-10),
            error_check("iso_roundtrip", rt, 1e-10),
            error_check("algebra_iso_bracket", alg, 1e-12),
            error_check("gs_split_bracket", gs, 1e-12)]


# --- 2: boosts acting on C^3 ----------------------------------------------------------------

def boost_via_lorentz(dr, t, v, c):
    """The self-frame result of :func:`liegroup.apply_boost_c3` computed through the 4x4 boost.

    The complex vector ``w`` is carried to a Lorentz-algebra element, conjugated
    by the 4x4 boost and carried back.
    """
    dr, v = np.asarray(dr, float), np.asarray(v, float)
    gamma = 1.0 / math.sqrt(1.0 - (v @ v) / c**2)
    tau = t + (dr @ v / c**2) * gamma
    w = (dr + v * tau) + 1j * lg.light_vector(v, c) * tau
    big = lg.lorentz_boost(v, c)
    x = lg.algebra_iso_inverse(lg.hat(w))
    out = lg.vee(lg.algebra_iso(big @ x @ big.T))
    return out.real, out.imag


def check_boosts(seed, n=500, c=1.0):
    rng = _rng(seed, 2)
    err = 0.0
    for _ in range(n):
        d = rng.normal(size=3)
        v = d / np.linalg.norm(d) * 0.9 * c * rng.uniform() ** (1 / 3)
        dr, t = rng.uniform(-1, 1, 3), rng.uniform(-1, 1)
        s1, t1 = lg.apply_boost_c3(dr, t, v, c, self_frame=True)
        s2, t2 = boost_via_lorentz(dr, t, v, c)
        scale = max(1.0, np.linalg.norm(s2), np.linalg.norm(t2))
        err = max(err, np.abs(s1 - s2).max() / scale, np.abs(t1 - t2).max() / scale)
    return [error_check("boost_equivalence", err, 1e-10)]


# --- 3: invariants --------------------------------------------------------------------------

def check_invariants(seed, n=1000):
    rng = _rng(seed, 3)
    dj1, dj2 = 0.0, 0.0
    for rot in Rotation.random(n, random_state=rng.integers(2**32)).as_matrix():
        t, nn, b = rot.T
        r, tau, ds = rng.uniform(0.1, 10), rng.uniform(-5, 5), rng.uniform(0.01, 2)
        f = inv.sphere_differential(t, b, r, tau, ds)
        f2 = inv.apply_basic_property(f, inv.sphere_unpermitted(t, tau, ds), -r * nn)
        j, j2 = inv.j_invariants(f, 1.0), inv.j_invariants(f2, 1.0)
        dj1 = max(dj1, abs(j2[0] - j[0]) / j[0])
        dj2 = max(dj2, abs(j2[1] - j[1]) / max(abs(j[1]), ds**2))
    e = np.eye(3)
    r, tau = 2.0, 0.5
    ws = inv.j_invariants(inv.sphere_differential(e[0], e[2], r, tau, 1.0), 1.0)
    rr, w, c = 0.8, 0.9, 1.0
    free, blocked = inv.circle_thomas_differentials(e[0], e[1], e[2], rr, w, c)
    expect = 1.0 + (1.0 - rr**2 * w**2 / (2 * c**2))**2
    jf, jb = inv.j_invariants(free, c), inv.j_invariants(blocked, c)
    stiff = inv.apply_basic_property(inv.FrameDifferential(np.zeros(3), e[0]), -e[2] / rr, -rr * e[1])
    js = inv.j_invariants(stiff, c)
    return [error_check("basic_property_sphere_J1", dj1, 1e-12),
            error_check("basic_property_sphere_J2", dj2, 1e-12),
            value_check("sphere_J1", ws[0], 2 + r**2 * tau**2, 1e-12),
            value_check("sphere_J2", ws[1], r * tau, 1e-12),
            value_check("circle_free_J1", jf[0], expect, 1e-12),
            value_check("circle_free_J2", jf[1], 0.0, 1e-12),
            value_check("circle_blocked_J1", jb[0], expect, 1e-12),
            value_check("circle_blocked_J2", jb[1], 0.0, 1e-12),
            value_check("circle_stiff_J1", js[0], 1.0, 1e-12),
            value_check("circle_stiff_J2", js[1], 0.0, 1e-12)]


# --- 4: zero spin velocity without gravity ----------------------------------------------------

def random_rigid_body(rng, n):
    """n random particles recentred on their barycenter."""
    m = rng.uniform(0.5, 2.0, n)
    x = rng.normal(size=(n, 3))
    x -= weighted_mean(x, m)
    return sim.BodyModel(m, x)


def random_two_axis_law(rng):
    """``A(t) = exp(t K1) exp(t K2) R0`` with random generators and start."""
    axes = rng.normal(size=(2, 3))
    rates = rng.uniform(0.5, 3.0, 2)
    r0 = Rotation.random(random_state=rng.integers(2**32)).as_matrix()
    return sim.ExpProductLaw(list(axes), [[0.0, rates[0]], [0.0, rates[1]]], r0)


def relative_spin(body, law, t):
    """``|V| / max particle speed`` for the barycentric motion at time t."""
    _, r1, r2, r3 = sim.rigid_arrays(body, law, t)
    v = weighted_mean(spin_velocity_terms(r1, r2, r3), body.masses)
    return np.linalg.norm(v) / np.linalg.norm(r1, axis=1).max()


def check_zero_spin(seed, n_configs=100):
    rng = _rng(seed, 4)
    worst = 0.0
    for _ in range(n_configs):
        body = random_rigid_body(rng, int(rng.integers(4, 21)))
        worst = max(worst, relative_spin(body, random_two_axis_law(rng), rng.uniform(0, 2)))
    sphere = sim.discretize_sphere(1.0, 1.0, 16, 32)
    sph = max(relative_spin(sphere, random_two_axis_law(rng), rng.uniform(0, 2)) for _ in range(10))
    return [error_check("zero_spin_rigid", worst, 1e-8),
            error_check("zero_spin_sphere", sph, 1e-10)]


# --- 5: averaged formulas --------------------------------------------------------------------

AVG_POINT = dict(radius=1.0, mass=1.0, n_rings=64, n_per_ring=128, phi=math.pi / 4,
                 omega_big=0.2, w=400.0, t=0.3, g=(9.81 * 0.6, 0.0, -9.81 * 0.8))


def averaged_pair(p=AVG_POINT):
    """(brute force, closed form) term breakdowns at an operating point."""
    body = sim.discretize_sphere(p["radius"], p["mass"], p["n_rings"], p["n_per_ring"])
    law = sim.precessing_law(p["phi"], p["omega_big"], p["w"])
    g = np.asarray(p["g"], dtype=float)
    bf = sim.brute_force_average(body, law, g, p["t"])
    flow = sim.body_curvature_flow(body, law, p["t"], 1e-4)
    closed = averaged_sphere_velocity(sim.axis_state(law, p["t"], curvature_flow=flow), g)
    return bf, closed


def check_averages(seed=0, p=AVG_POINT):
    bf, cl = averaged_pair(p)
    out = [error_check("avg_condition_ratio", bf.ratio, 1e-3)]
    for key in ("vI", "vIII", "vIV"):
        a, b = getattr(bf, key), getattr(cl, key)
        out.append(error_check(f"avg_{key}_rel", np.linalg.norm(a - b) / np.linalg.norm(b), 0.01))
    scale = np.linalg.norm(p["g"]) * p["omega_big"] / p["w"]**2
    out.append(error_check("avg_vII_zero", np.linalg.norm(bf.vII) / scale, 1e-6))
    return out


# --- 6: predictions -----------------------------------------------------------------------------

DISC_POINT = dict(radius=0.05, phi=math.pi / 4, w=50.0, omega_big=2.0, g=9.81, h=2e-3,
                  t_end=2 * math.pi / 2.0)
SPINDOWN_POINT = dict(w1=100.0, w2=50.0, g=10.0, phi=math.pi / 4, t_end=1.0, h=1e-3)
FREEFALL_POINT = dict(n_rings=16, n_per_ring=32, w=400.0, omega_big=2.0, g=9.81, h=2.5e-4,
                      t_end=math.pi / 2)


def run_disc(p=DISC_POINT):
    body = sim.discretize_disc(p["radius"], 1.0, 1, 16, hoop=True)
    law = sim.precessing_law(p["phi"], p["omega_big"], p["w"])
    return sim.run_disc_on_plane(body, law, p["g"], p["t_end"], p["h"])


def run_spindown(p=SPINDOWN_POINT):
    body = sim.discretize_disc(0.05, 1.0, 1, 16, hoop=True)
    return sim.run_spin_down(body, p["w1"], p["w2"], p["phi"], p["g"], p["t_end"], p["h"])


def run_freefall(p=FREEFALL_POINT):
    body = sim.discretize_sphere(1.0, 1.0, p["n_rings"], p["n_per_ring"])
    law = sim.nutating_law(p["omega_big"], p["w"])
    return sim.run_free_fall(body, law, GravityContext((0.0, 0.0, -p["g"])), p["t_end"], p["h"])


def departure_amplitude(out, p=FREEFALL_POINT):
    """Least-squares factor a in ``departure ~ a * prediction`` over the run."""
    axis = AxisState((0.0, 0.0, 1.0), p["w"])
    g = (0.0, 0.0, -p["g"])
    pred = np.array([newton_departure(axis, g, p["omega_big"] * t, p["omega_big"]) for t in out.t])
    dep = out.extras["departure"]
    return float(dep @ pred / (pred @ pred))


def check_predictions(seed=0):
    d = run_disc()
    r_pred = disc_circle_radius(DISC_POINT["phi"], DISC_POINT["w"], DISC_POINT["g"])
    s = run_spindown()
    sp = SPINDOWN_POINT
    l_pred = spin_down_displacement(sp["w1"], sp["w2"], sp["g"], sp["phi"])
    f = run_freefall()
    return [value_check("disc_radius", d.extras["circle_radius"], r_pred, 0.02, relative=True),
            value_check("disc_rate", d.extras["angular_rate"], DISC_POINT["omega_big"], 0.01, relative=True),
            error_check("disc_v_perp_b", d.extras["max_v_dot_b"], 1e-6),
            value_check("spindown_L", s.extras["displacement"], l_pred, 0.01, relative=True),
            value_check("freefall_departure_factor", departure_amplitude(f), 1.0, 0.02, relative=True)]


# --- 7: precession identities -----------------------------------------------------------------

def random_sources(rng, k):
    return [pr.GravSource(rng.uniform(0.1, 10), rng.normal(size=3) * 10, rng.normal(size=3),
                          rng.normal(size=3)) for _ in range(k)]


def check_precession(seed, n=1000):
    rng = _rng(seed, 7)
    p = pr.PpnParams(1.0, 1.0, 1.0)
    err = 0.0
    for _ in range(n):
        gyro = pr.GyroState(rng.normal(size=3) * 10, rng.normal(size=3))
        srcs = random_sources(rng, int(rng.integers(1, 6)))
        rel = pr.omega_relative(gyro, srcs, p)
        diff = pr.omega_gyro(gyro, srcs, p) - pr.omega_stars(gyro, srcs, p)
        err = max(err, np.abs(rel - diff).max() / np.abs(rel).max())
    gyro = pr.GyroState((3.0, 1.0, 2.0))
    spin_only = [pr.GravSource(1.0, (0.0, 0.0, 0.0), angular_momentum=(0.2, -0.4, 1.0))]
    fw = pr.omega_fermi_walker(gyro, spin_only, p)
    rel = pr.omega_relative(gyro, spin_only, p)
    k = int(np.argmax(np.abs(fw)))
    return [error_check("relative_identity", err, 1e-14),
            value_check("dragging_ratio", rel[k] / fw[k], 0.75, 1e-15)]


GROUPS = [("isomorphisms", check_isomorphisms), ("boosts", check_boosts),
          ("invariants", check_invariants), ("zero_spin", check_zero_spin),
          ("averages", check_averages), ("predictions", check_predictions),
          ("precession", check_precession)]


def run_all(seed=0, groups=None):
    """Run the named groups (all by default) in a fixed order."""
    results = []
    for name, fn in GROUPS:
        if groups is None or name in groups:
            results.extend(fn(seed))
    return results


def report(results):
    return "".join(r.line() + "\n" for r in results)
