"""Sweep execution.

Every sweep point is evaluated by a pure function of the resolved config
tree.  Points may run on a thread pool; results land in an index-ordered
list, so the emitted table does not depend on the thread count.
"""

import copy
import datetime
import functools
import itertools
import math
import threading
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .. import __version__
from ..cavity import Geometry, field_map, solve_cavity_modes
from ..dispersion import (
    decay_constants,
    interface_residual,
    propagation_quantities,
    solve_multilayer,
    spp_kperp,
    spp_omega,
)
from ..dynamics import (
    PhotonDrive,
    SPPDrive,
    creation_report,
    dominance_ratio,
    integrator_for,
)
from ..errors import VacSPPError
from ..media import MediumState, Polarization, RegionStack, spp_exists
from ..numerics import IntegratorConfig, bessel_zero
from .config import set_path


class SweepPointError(VacSPPError):
    """A solver failure annotated with the sweep point that caused it."""


@dataclass
class RunRecord:
    scenario: str
    config_hash: str
    timestamp: str
    version: str
    columns: tuple
    rows: list
    warnings: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)


def _medium(layer):
    def num(v):
        return complex(v[0], v[1]) if isinstance(v, list) else complex(v)

    return MediumState(num(layer["eps"]), num(layer.get("mu", 1.0)))


def _cfg(tree):
    num = tree["numerics"]
    step = 1.0 if num["method"] == "symplectic" else math.inf
    return IntegratorConfig(
        rel_tol=num["rel_tol"],
        abs_tol=num["abs_tol"],
        max_step=step,
        max_steps=int(num["max_steps"]),
        method=num["method"],
        digits=int(num["digits"]),
    )


def _geometry(tree):
    g = tree["geometry"]
    return Geometry(g["R"], g["L"], g["a"])


def _split(z):
    z = complex(z)
    return z.real, z.imag


# -- scenarios ----------------------------------------------------------------
# each returns (columns, point_function(tree) -> list of row tuples)


def _dispersion(tree):
    cols = (
        "omega", "bound", "k_perp_re", "k_perp_im", "kappa1_re", "kappa1_im",
        "kappa2_re", "kappa2_im", "lambda_sp", "prop_length", "interface_residual_rel",
    )

    def point(t):
        m1, m2 = (_medium(x) for x in t["regions"]["layers"])
        pol = Polarization(t["params"]["polarization"])
        w, c = float(t["params"]["omega"]), float(t["c"])
        k = spp_kperp(m1, m2, w, c, pol)
        k1, k2 = decay_constants(w, k, m1, m2, c)
        scale = abs(k1 / m1.eps) + abs(k2 / m2.eps) if pol is Polarization.TM_ELECTRIC else (
            abs(k1 / m1.mu) + abs(k2 / m2.mu)
        )
        res = abs(interface_residual(k1, k2, m1, m2, pol)) / scale if scale else 0.0
        pq = propagation_quantities(k) if k.real > 0 else None
        return [(
            w, int(spp_exists(m1, m2, pol)), *_split(k), *_split(k1), *_split(k2),
            pq.lambda_sp if pq else math.nan, pq.prop_length if pq else math.nan, res,
        )]

    return cols, point


def _multilayer(tree):
    cols = ("k_perp", "d", "omega_even", "omega_odd", "omega_single", "n_modes")

    def point(t):
        layers = [_medium(x) for x in t["regions"]["layers"]]
        d, c = float(t["regions"]["d"]), float(t["c"])
        k = float(t["params"]["k_perp"])
        pol = Polarization(t["params"]["polarization"])
        modes = solve_multilayer(RegionStack(tuple(layers), d), k, c, polarization=pol)
        try:
            single = spp_omega(k, layers[1], layers[0], c, pol)
        except VacSPPError:
            single = math.nan
        return [(
            k, d,
            modes.even.omega if modes.even else math.nan,
            modes.odd.omega if modes.odd else math.nan,
            single, len(modes.all),
        )]

    return cols, point


_FIELD_COLS = (
    "rho", "theta", "z",
    "E_rho_re", "E_rho_im", "E_theta_re", "E_theta_im", "E_z_re", "E_z_im",
    "B_rho_re", "B_rho_im", "B_theta_re", "B_theta_im", "B_z_re", "B_z_im",
)


def _cavity(tree):
    field_cfg = tree["params"].get("field")
    if field_cfg:
        cols = ("n", "p", "m", "omega") + _FIELD_COLS
    else:
        cols = (
            "n", "p", "m", "omega", "k1_re", "k1_im", "k2_re", "k2_im",
            "residual_transcendental", "residual_matching",
        )

    def point(t):
        prm = t["params"]
        e1, e2 = (_medium(x).eps.real for x in t["regions"]["layers"])
        n, p, count = int(prm["n"]), int(prm["p"]), int(prm["count"])
        modes = solve_cavity_modes(_geometry(t), e1, e2, n, p, count, float(t["c"]))
        if not field_cfg:
            return [
                (m.n, m.p, m.m, m.omega, *_split(m.k1), *_split(m.k2), *m.residuals())
                for m in modes
            ]
        want = int(field_cfg.get("m", 1))
        mode = next((m for m in modes if m.m == want), None)
        if mode is None:
            raise VacSPPError(f"mode m={want} not among the {len(modes)} solved modes")
        q = complex(*field_cfg.get("Q", [1.0, 0.0]))
        qd = complex(*field_cfg.get("Qdot", [0.0, 0.0]))
        side = int(field_cfg.get("side", 1))
        rows = []
        for s in field_map(mode, q, qd, field_cfg["points"], interface_side=side):
            vals = [v for comp in s.E + s.B for v in _split(comp)]
            rows.append((mode.n, mode.p, mode.m, mode.omega, *s.position, *vals))
        return rows

    return cols, point


def _drive(t):
    drv, prm = t["drive"], t["params"]
    branch = drv.get("branch", "SPPelectric")
    layer = t["regions"]["layers"][1]
    c = float(t["c"])
    if branch == "Photon":
        return PhotonDrive(
            _geometry(t), _medium(layer).eps.real, int(prm["n"]), int(prm["p"]),
            int(prm["m"]), float(drv.get("chi", 0.5)), c,
        )
    magnetic = branch == "SPPmagnetic"
    partner = _medium(layer).mu.real if magnetic else _medium(layer).eps.real
    return SPPDrive(float(prm["k_perp"]), partner, float(drv["chi"]), c, magnetic)


def _run_drive(drive, kappa, periods, tree):
    cfg = integrator_for(drive, _cfg(tree), int(tree["numerics"]["steps_per_period"]))
    duration = periods * math.pi / drive.omega0
    return creation_report(drive, kappa, duration, cfg, exact_null=True)


def _creation(tree):
    cols = (
        "branch", "kappa", "chi", "omega0", "t1", "N_numeric", "N_formula",
        "rate_fit", "rate_formula", "measured_constant",
    )

    def point(t):
        drive = _drive(t)
        drv = t["drive"]
        rep = _run_drive(drive, float(drv["kappa"]), float(drv["periods"]), t)
        return [(
            drive.branch.value, rep.kappa, drive.chi, drive.omega0, rep.t, rep.N_numeric,
            rep.N_formula, rep.growth_rate_fit, rep.growth_rate_formula, rep.measured_constant,
        )]

    return cols, point


@functools.lru_cache(maxsize=32)
def _photon_cached(key):
    tree = _thaw(key)
    t = copy.deepcopy(tree)
    t["drive"] = {"branch": "Photon", "chi": t["drive"]["photon_chi"]}
    drive = _drive(t)
    rep = _run_drive(drive, float(tree["drive"]["kappa"]), float(tree["drive"]["periods"]), t)
    return drive.omega0, rep


def _freeze(obj):
    if isinstance(obj, dict):
        return tuple(sorted((k, _freeze(v)) for k, v in obj.items()))
    if isinstance(obj, list):
        return ("__list__",) + tuple(_freeze(v) for v in obj)
    return obj


def _thaw(obj):
    if isinstance(obj, tuple):
        if obj and obj[0] == "__list__":
            return [_thaw(v) for v in obj[1:]]
        return {k: _thaw(v) for k, v in obj}
    return obj


def _compare(tree):
    cols = (
        "k_perp", "omega_sp", "t_sp", "N_sp_formula", "N_sp_ode", "rate_sp_formula",
        "rate_sp_fit", "omega_ph", "t_ph", "N_ph_formula", "N_ph_ode", "rate_ph_formula",
        "rate_ph_fit", "dominance_ratio", "k_threshold",
    )

    def point(t):
        g, prm = t["geometry"], t["params"]
        sp_tree = copy.deepcopy(t)
        sp_tree["drive"]["branch"] = "SPPelectric"
        sp = _drive(sp_tree)
        rep_sp = _run_drive(sp, float(t["drive"]["kappa"]), float(t["drive"]["periods"]), t)
        # the photon branch does not depend on k_perp
        ph_key = {k: v for k, v in t.items() if k not in ("params", "sweep", "output")}
        ph_key["params"] = {k: prm[k] for k in ("n", "p", "m")}
        w_ph, rep_ph = _photon_cached(_freeze(ph_key))
        x = bessel_zero(int(prm["n"]), int(prm["p"]))
        ratio, k_thr = dominance_ratio(sp.k_perp, x, g["R"], g["a"], g["L"])
        return [(
            sp.k_perp, sp.omega0, rep_sp.t, rep_sp.N_formula, rep_sp.N_numeric,
            rep_sp.growth_rate_formula, rep_sp.growth_rate_fit,
            w_ph, rep_ph.t, rep_ph.N_formula, rep_ph.N_numeric,
            rep_ph.growth_rate_formula, rep_ph.growth_rate_fit, ratio, k_thr,
        )]

    return cols, point


_SCENARIOS = {
    "DispersionSweep": _dispersion,
    "MultilayerSweep": _multilayer,
    "CavityModes": _cavity,
    "Creation": _creation,
    "Compare": _compare,
}


# -- execution ----------------------------------------------------------------


def sweep_points(config):
    """Cartesian product of the sweep axes, first axis slowest."""
    names = [ax.name for ax in config.axes]
    grids = [ax.values() for ax in config.axes]
    return [dict(zip(names, combo)) for combo in itertools.product(*grids)]


def _summary(config, columns, rows):
    out = {"points": len(sweep_points(config)), "rows": len(rows)}
    if config.scenario == "Compare" and rows:
        idx = {c: i for i, c in enumerate(columns)}
        k_thr = rows[0][idx["k_threshold"]]
        out["k_threshold_per_m"] = k_thr
        out["k_threshold_per_cm"] = k_thr / 100.0
        above = [r[idx["k_perp"]] for r in rows if r[idx["dominance_ratio"]] > 1.0]
        out["first_dominant_k_perp"] = min(above) if above else None
    if config.scenario == "Creation" and rows:
        col = columns.index("measured_constant")
        vals = [r[col] for r in rows if math.isfinite(r[col])]
        if vals:
            out["measured_constant_mean"] = sum(vals) / len(vals)
    return out


def run(config, threads=1, timestamp=None):
    """Execute the scenario over all sweep points.

    Raises
    ------
    SweepPointError
        Wrapping the first failing point (lowest index).
    """
    columns, point_fn = _SCENARIOS[config.scenario](config.tree)
    points = sweep_points(config)
    echo = tuple(ax.name for ax in config.axes)
    sink = []
    local = threading.local()

    def show(message, category, filename, lineno, file=None, line=None):
        sink.append((getattr(local, "index", -1), f"{category.__name__}: {message}"))

    def work(item):
        index, values = item
        local.index = index
        tree = copy.deepcopy(config.tree)
        for name, val in values.items():
            set_path(tree, name, val)
        try:
            return index, values, point_fn(tree), None
        except (VacSPPError, ArithmeticError, ValueError) as exc:
            return index, values, None, exc

    with warnings.catch_warnings():
        warnings.simplefilter("always")
        warnings.showwarning = show
        items = list(enumerate(points))
        if threads > 1 and len(items) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(work, items))
        else:
            results = [work(it) for it in items]

    rows = []
    for index, values, point_rows, exc in results:
        if exc is not None:
            where = ", ".join(f"{k}={v!r}" for k, v in values.items()) or "single point"
            raise SweepPointError(f"sweep point {index} ({where}): {exc}") from exc
        for r in point_rows:
            rows.append((index,) + tuple(values[name] for name in echo) + tuple(r))
    stamp = timestamp or datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
    all_cols = ("point",) + echo + columns
    return RunRecord(
        scenario=config.scenario,
        config_hash=config.config_hash(),
        timestamp=stamp,
        version=__version__,
        columns=all_cols,
        rows=rows,
        warnings=[msg for _, msg in sorted(sink, key=lambda x: x[0])],
        summary=_summary(config, all_cols, rows),
    )
