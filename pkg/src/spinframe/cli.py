"""Batch front end: ``spinframe --config run.toml --out results/``.

The config is a TOML document.  Every table and key is checked against the
schema below; unknown keys are rejected with a spelling suggestion.

    seed = 0
    [scenario]  kind = "verify" | "precess" | "freefall" | "disc" | "spindown" | "invariants"
    [body]      shape ("sphere" | "disc" | "hoop"), radius_m, mass_kg, n_rings, n_per_ring
    [motion]    law ("precess" | "nutate"), phi_rad, omega_big_rad_s, w_rad_s, w1_rad_s, w2_rad_s
    [gravity]   gx, gy, gz
    [numeric]   h_s, t_end_s
    [constants] c_m_s, G, gamma_ppn
    [gyro]      position_m, velocity_m_s
    [[sources]] mass_kg, position_m, velocity_m_s, angular_momentum

Exit status: 0 all checks pass, 1 a check failed, 2 config error, 3 IO error.
"""
import argparse
import csv
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import invariants as inv
from . import precession as pr
from . import sim, verify
from .errors import DomainError
from .spin import GravityContext, disc_circle_radius, spin_down_displacement

KINDS = ("verify", "precess", "freefall", "disc", "spindown", "invariants")
EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3

_NUM = (int, float)
_VEC = "vec3"
SCHEMA = {
    "seed": int,
    "scenario": {"kind": str},
    "body": {"shape": str, "radius_m": _NUM, "mass_kg": _NUM, "n_rings": int, "n_per_ring": int},
    "motion": {"law": str, "phi_rad": _NUM, "omega_big_rad_s": _NUM, "w_rad_s": _NUM,
               "w1_rad_s": _NUM, "w2_rad_s": _NUM},
    "gravity": {"gx": _NUM, "gy": _NUM, "gz": _NUM},
    "numeric": {"h_s": _NUM, "t_end_s": _NUM},
    "constants": {"c_m_s": _NUM, "G": _NUM, "gamma_ppn": _NUM},
    "gyro": {"position_m": _VEC, "velocity_m_s": _VEC},
    "sources": [{"mass_kg": _NUM, "position_m": _VEC, "velocity_m_s": _VEC,
                 "angular_momentum": _VEC}],
}


class ConfigError(Exception):
    def __init__(self, path, message):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


def edit_distance(a, b):
    """Levenshtein distance."""
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def _suggest(key, allowed):
    best = min(allowed, key=lambda k: (edit_distance(key, k), k))
    return best if edit_distance(key, best) <= 2 else None


def _check_value(path, value, kind):
    if kind == _VEC:
        if (not isinstance(value, list) or len(value) != 3
                or not all(isinstance(x, _NUM) and not isinstance(x, bool) for x in value)):
            raise ConfigError(path, "expected an array of three numbers")
        return
    if isinstance(value, bool) or not isinstance(value, kind):
        name = "number" if kind is _NUM else kind.__name__
        raise ConfigError(path, f"expected {name}, got {type(value).__name__}")


def _validate(tree, schema, prefix=""):
    for key, value in tree.items():
        path = f"{prefix}{key}"
        if key not in schema:
            hint = _suggest(key, list(schema))
            raise ConfigError(path, "unknown key" + (f" (did you mean '{prefix}{hint}'?)" if hint else ""))
        spec = schema[key]
        if isinstance(spec, dict):
            if not isinstance(value, dict):
                raise ConfigError(path, "expected a table")
            _validate(value, spec, path + ".")
        elif isinstance(spec, list):
            if not isinstance(value, list) or not all(isinstance(v, dict) for v in value):
                raise ConfigError(path, "expected an array of tables")
            for i, item in enumerate(value):
                _validate(item, spec[0], f"{path}[{i}].")
        else:
            _check_value(path, value, spec)


@dataclass
class Scenario:
    kind: str
    seed: int = 0
    body: dict = field(default_factory=dict)
    motion: dict = field(default_factory=dict)
    gravity: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, -9.81]))
    h: float = None
    t_end: float = None
    c: float = pr.C_SI
    G: float = pr.G_SI
    gamma_ppn: float = 1.0
    gyro: dict = field(default_factory=dict)
    sources: list = field(default_factory=list)


BODY_DEFAULTS = {"shape": "sphere", "radius_m": 1.0, "mass_kg": 1.0, "n_rings": 16, "n_per_ring": 32}
MOTION_DEFAULTS = {"phi_rad": math.pi / 4, "omega_big_rad_s": 2.0, "w_rad_s": 400.0,
                   "w1_rad_s": 100.0, "w2_rad_s": 50.0}


def _positive(path, value):
    if not value > 0:
        raise ConfigError(path, "must be positive")
    return value


def parse_config(text):
    """Validated :class:`Scenario` from TOML text."""
    try:
        tree = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError("", f"malformed TOML: {exc}") from None
    _validate(tree, SCHEMA)
    kind = tree.get("scenario", {}).get("kind")
    if kind is None:
        raise ConfigError("scenario.kind", "missing")
    if kind not in KINDS:
        raise ConfigError("scenario.kind", f"must be one of {', '.join(KINDS)}")
    body = {**BODY_DEFAULTS, **tree.get("body", {})}
    if body["shape"] not in ("sphere", "disc", "hoop"):
        raise ConfigError("body.shape", "must be sphere, disc or hoop")
    for key in ("radius_m", "mass_kg", "n_rings", "n_per_ring"):
        _positive(f"body.{key}", body[key])
    motion = {**MOTION_DEFAULTS, "law": "nutate" if kind == "freefall" else "precess",
              **tree.get("motion", {})}
    if motion["law"] not in ("precess", "nutate"):
        raise ConfigError("motion.law", "must be precess or nutate")
    for key in ("w_rad_s", "w1_rad_s", "w2_rad_s"):
        if motion[key] == 0:
            raise ConfigError(f"motion.{key}", "must be nonzero")
    grav = tree.get("gravity", {})
    gravity = np.array([grav.get("gx", 0.0), grav.get("gy", 0.0), grav.get("gz", -9.81)], dtype=float)
    numeric = tree.get("numeric", {})
    h = numeric.get("h_s")
    t_end = numeric.get("t_end_s")
    if h is not None:
        _positive("numeric.h_s", h)
    if t_end is not None:
        _positive("numeric.t_end_s", t_end)
    consts = tree.get("constants", {})
    c = _positive("constants.c_m_s", consts.get("c_m_s", pr.C_SI))
    big_g = _positive("constants.G", consts.get("G", pr.G_SI))
    gyro = tree.get("gyro", {})
    sources = tree.get("sources", [])
    for i, s in enumerate(sources):
        if "mass_kg" not in s or "position_m" not in s:
            raise ConfigError(f"sources[{i}]", "needs mass_kg and position_m")
        _positive(f"sources[{i}].mass_kg", s["mass_kg"])
    if kind == "precess" and not sources:
        raise ConfigError("sources", "precess needs at least one source")
    return Scenario(kind, tree.get("seed", 0), body, motion, gravity, h, t_end, c, big_g,
                    consts.get("gamma_ppn", 1.0), gyro, sources)


# --- running --------------------------------------------------------------------------------

@dataclass
class RunReport:
    checks: list
    header: list
    rows: list

    @property
    def n_failed(self):
        return sum(not c.passed for c in self.checks)

    @property
    def exit_code(self):
        return EXIT_FAIL if self.n_failed else EXIT_OK

    def text(self):
        return verify.report(self.checks)


def _body(sc):
    b = sc.body
    if b["shape"] == "sphere":
        return sim.discretize_sphere(b["radius_m"], b["mass_kg"], b["n_rings"], b["n_per_ring"])
    return sim.discretize_disc(b["radius_m"], b["mass_kg"], b["n_rings"], b["n_per_ring"],
                               hoop=b["shape"] == "hoop")


def _law(sc):
    m = sc.motion
    if m["law"] == "nutate":
        return sim.nutating_law(m["omega_big_rad_s"], m["w_rad_s"], m["phi_rad"])
    return sim.precessing_law(m["phi_rad"], m["omega_big_rad_s"], m["w_rad_s"])


def _sim_rows(out):
    cols = out.columns()
    return list(cols), [list(r) for r in zip(*cols.values())]


def _run_verify(sc):
    checks = verify.run_all(sc.seed)
    rows = [[c.name, c.computed, c.expected, c.tol, int(c.passed)] for c in checks]
    return RunReport(checks, ["name", "computed", "expected", "tol", "passed"], rows)


def _run_precess(sc):
    p = pr.PpnParams(sc.gamma_ppn, sc.G, sc.c)
    gyro = pr.GyroState(sc.gyro.get("position_m", (0.0, 0.0, 0.0)),
                        sc.gyro.get("velocity_m_s", (0.0, 0.0, 0.0)))
    sources = [pr.GravSource(s["mass_kg"], s["position_m"], s.get("velocity_m_s", (0.0, 0.0, 0.0)),
                             s.get("angular_momentum", (0.0, 0.0, 0.0))) for s in sc.sources]
    results = {name: fn(gyro, sources, p) for name, fn in
               (("fermi_walker", pr.omega_fermi_walker), ("gyro", pr.omega_gyro),
                ("stars", pr.omega_stars), ("relative", pr.omega_relative))}
    diff = results["gyro"] - results["stars"]
    scale = max(np.abs(results["relative"]).max(), np.finfo(float).tiny)
    err = np.abs(results["relative"] - diff).max() / scale
    rows = [[name, *v] for name, v in results.items()]
    return RunReport([verify.error_check("relative_identity", err, 1e-14)],
                     ["formula", "omega_x", "omega_y", "omega_z"], rows)


def _default_h(sc, w):
    return sc.h if sc.h is not None else 0.05 / abs(w)


def _run_freefall(sc):
    m = sc.motion
    h = _default_h(sc, m["w_rad_s"])
    t_end = sc.t_end if sc.t_end is not None else 1.0
    out = sim.run_free_fall(_body(sc), _law(sc), GravityContext(sc.gravity), t_end, h)
    checks = [verify.error_check("freefall_condition_ratio", out.ratio.max(), 1.0)]
    g_mag = np.linalg.norm(sc.gravity)
    if m["law"] == "nutate" and g_mag > 0:
        law = _law(sc)
        pred = np.array([sim.predicted_departure(law, sc.gravity, t, abs(m["w_rad_s"])) for t in out.t])
        factor = float(out.extras["departure"] @ pred / (pred @ pred)) if pred @ pred > 0 else math.nan
        checks.append(verify.value_check("freefall_departure_factor", factor, 1.0, 0.02, relative=True))
    header, rows = _sim_rows(out)
    return RunReport(checks, header, rows)


def _run_disc(sc):
    m = sc.motion
    h = sc.h if sc.h is not None else 2e-3
    t_end = sc.t_end if sc.t_end is not None else 2 * math.pi / abs(m["omega_big_rad_s"])
    g_mag = float(np.linalg.norm(sc.gravity))
    out = sim.run_disc_on_plane(_body(sc), _law(sc), g_mag, t_end, h)
    pred = disc_circle_radius(m["phi_rad"], m["w_rad_s"], g_mag)
    checks = [verify.value_check("disc_radius", out.extras["circle_radius"], pred, 0.02, relative=True),
              verify.value_check("disc_rate", abs(out.extras["angular_rate"]), abs(m["omega_big_rad_s"]),
                                 0.01, relative=True),
              verify.error_check("disc_v_perp_b", out.extras["max_v_dot_b"], 1e-6)]
    header, rows = _sim_rows(out)
    return RunReport(checks, header, rows)


def _run_spindown(sc):
    m = sc.motion
    h = sc.h if sc.h is not None else 1e-3
    t_end = sc.t_end if sc.t_end is not None else 1.0
    g_mag = float(np.linalg.norm(sc.gravity))
    out = sim.run_spin_down(_body(sc), m["w1_rad_s"], m["w2_rad_s"], m["phi_rad"], g_mag, t_end, h)
    pred = spin_down_displacement(m["w1_rad_s"], m["w2_rad_s"], g_mag, m["phi_rad"])
    checks = [verify.value_check("spindown_L", out.extras["displacement"], abs(pred), 0.01, relative=True)]
    header, rows = _sim_rows(out)
    return RunReport(checks, header, rows)


def _run_invariants(sc):
    checks = verify.check_invariants(sc.seed)
    rng = np.random.default_rng(sc.seed)
    e = np.eye(3)
    rows = []
    for _ in range(20):
        r, tau, ds = rng.uniform(0.1, 10), rng.uniform(-5, 5), rng.uniform(0.01, 2)
        f = inv.sphere_differential(e[0], e[2], r, tau, ds)
        f2 = inv.apply_basic_property(f, inv.sphere_unpermitted(e[0], tau, ds), -r * e[1])
        rows.append([r, tau, ds, *inv.j_invariants(f, sc.c)[:2], *inv.j_invariants(f2, sc.c)[:2]])
    return RunReport(checks, ["r_m", "tau_1_m", "ds_m", "J1", "J2", "J1_after", "J2_after"], rows)


RUNNERS = {"verify": _run_verify, "precess": _run_precess, "freefall": _run_freefall,
           "disc": _run_disc, "spindown": _run_spindown, "invariants": _run_invariants}


def run(sc):
    return RUNNERS[sc.kind](sc)


def _fmt(x):
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return "%.16e" % float(x)


def write_outputs(report, out_dir):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "trajectory.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(report.header)
        for row in report.rows:
            w.writerow([_fmt(x) for x in row])
    (out_dir / "report.txt").write_text(report.text())


def main(argv=None):
    ap = argparse.ArgumentParser(prog="spinframe", description="Run a spin-velocity scenario from a TOML config.")
    ap.add_argument("--config", required=True, help="TOML scenario file")
    ap.add_argument("--out", default=".", help="output directory")
    ap.add_argument("--seed", type=int, help="overrides the config seed")
    ap.add_argument("--quiet", action="store_true", help="do not print the report")
    args = ap.parse_args(argv)
    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        sc = parse_config(text)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.seed is not None:
        if args.seed < 0:
            print("config error: --seed must be non-negative", file=sys.stderr)
            return EXIT_CONFIG
        sc.seed = args.seed
    try:
        report = run(sc)
    except DomainError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        write_outputs(report, args.out)
    except OSError as exc:
        print(f"error: cannot write outputs: {exc}", file=sys.stderr)
        return EXIT_IO
    if not args.quiet:
        sys.stdout.write(report.text())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
