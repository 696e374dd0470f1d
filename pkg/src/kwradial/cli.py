"""Command line driver: every check as a command writing CSV or JSON.

Exit codes: 0 pass, 1 usage, 2 tolerance failure, 3 I/O.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__, fdcheck, gauge_invariants as gi, multicenter as mc, nahm, ode
from .families import SolutionFamily, Variant, governing_system, profile
from .radial import SingularLocusError, asd_ode_residual, kw_scaled_residual

EXIT_OK, EXIT_USAGE, EXIT_TOL, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad arguments; 2 is reserved for tolerance failures here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    family: str = "f1"
    C: float = 1.0
    t_min: float = 1e-3
    t_max: float = 1e3
    count: int = 1000
    log: bool = True
    h: float | None = None
    seed: int = 0
    out: str | None = None
    format: str = "csv"
    tol: float = 1e-10
    extra: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.count < 2:
            raise UsageError("--count must be at least 2")
        if not self.t_min < self.t_max:
            raise UsageError("--t-min must be smaller than --t-max")
        if self.log and self.t_min <= 0:
            raise UsageError("log grids need --t-min > 0")
        if self.format not in ("csv", "json"):
            raise UsageError("--format is csv or json")
        if self.h is not None and not self.h > 0:
            raise UsageError("--h must be positive")

    def grid(self) -> np.ndarray:
        if self.log:
            return np.logspace(math.log10(self.t_min), math.log10(self.t_max), self.count)
        return np.linspace(self.t_min, self.t_max, self.count)

    def family_obj(self) -> SolutionFamily:
        try:
            return SolutionFamily(Variant(self.family), self.C)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc

    def meta(self) -> dict:
        return {"command": self.command, "family": self.family, "C": self.C, "seed": self.seed,
                "version": __version__}


@dataclass
class Output:
    columns: tuple
    rows: np.ndarray
    meta: dict
    status: int = EXIT_OK


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % float(v)
    return str(v)


def render(o: Output, fmt: str) -> str:
    rows = np.atleast_2d(np.asarray(o.rows, dtype=float)) if len(o.rows) else np.empty((0, len(o.columns)))
    if fmt == "json":
        doc = {"meta": o.meta, "columns": list(o.columns), "rows": rows.tolist()}
        return json.dumps(doc, indent=1, sort_keys=True, default=_json_default) + "\n"
    buf = io.StringIO()
    for k in sorted(o.meta):
        v = o.meta[k]
        if isinstance(v, (list, tuple, dict)):
            v = json.dumps(v, sort_keys=True, default=_json_default)
        buf.write(f"# {k}: {_fmt(v)}\n")
    buf.write(",".join(o.columns) + "\n")
    for r in rows:
        buf.write(",".join("%.17g" % v for v in r) + "\n")
    return buf.getvalue()


def _json_default(v):
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, (np.floating, np.integer, np.bool_)):
        return v.item()
    raise TypeError(f"not serialisable: {type(v)}")


# --- commands ---------------------------------------------------------------------

def cmd_verify(cfg: RunConfig) -> Output:
    """Reduced residuals on the grid, a global-definedness check and an FD spot check."""
    fam = cfg.family_obj()
    p = profile(fam)
    meta = cfg.meta()
    status = EXIT_OK
    t = cfg.grid()
    t = t[p.admissible(t)]
    system = governing_system(fam)
    if p.meta.get("dense_poles"):
        # the poles of g accumulate at t = 0; follow the orbit towards s -> -inf
        st = ode.AutonomousState(0.0, float(p.g(1.0)), 0.0)
        traj = ode.integrate(-1.0, st, -40.0, tol=1e-10)
        poles = [q for q in p.g_poles if cfg.t_min <= q <= cfg.t_max]
        meta.update(blown_up=traj.blown_up, blow_up_s=float(traj.s[-1]), poles_in_window=len(poles),
                    diagnosis="g has infinitely many poles accumulating at t = 0")
        status = EXIT_TOL
    if system == "asd":
        r1, r2 = asd_ode_residual(p, t)
        meta["system"] = "lam=0: f'+f^2-g^2, t g'+2g-2t f g"
    else:
        r1, r2 = kw_scaled_residual(p, t)
        meta["system"] = "lam=-1 (t-scaled): t f'+f+g-2t f g, t g'+f+g-t(f^2-g^2)"
    worst = float(np.max(np.abs(np.concatenate([r1, r2])))) if t.size else 0.0
    meta["max_residual"] = worst
    meta["tol"] = cfg.tol
    if not worst < cfg.tol:
        status = EXIT_TOL
    if status == EXIT_OK:
        try:
            meta["t_f_limits"] = list(gi.tilde_f_limits(p))
        except gi.NoLimitError as exc:
            meta["limit_error"] = str(exc)
            status = EXIT_TOL
    n_fd = int(cfg.extra.get("fd_points", 5))
    if status == EXIT_OK and n_fd >= 5:
        s = fdcheck.catalog_sampler(fam)
        pts = fdcheck.random_points(np.random.default_rng(cfg.seed), n_fd, s)
        order = fdcheck.order_scan(s, pts, cfg.h)
        meta["fd_points"] = n_fd
        meta["fd_median_order"] = order
        # identically vanishing fields give no order; they pass trivially
        if not (math.isnan(order) or order >= 1.8):
            status = EXIT_TOL
    cols = ("t", "f", "g", "residual_1", "residual_2")
    rows = np.column_stack([t, p.f(t), p.g(t), r1, r2]) if t.size else np.empty((0, 5))
    return Output(cols, rows, meta, status)


def cmd_instanton(cfg: RunConfig) -> Output:
    fam = cfg.family_obj()
    meta = cfg.meta()
    meta["convention"] = gi.CONVENTION_NOTE
    try:
        rep = gi.instanton_report(fam, with_trace=bool(cfg.extra.get("trace")))
    except (gi.PoleInDomainError, gi.NoLimitError) as exc:
        meta["error"] = str(exc)
        return Output(("k_boundary", "k_quadrature", "error_estimate", "abs_k"), np.empty((0, 4)), meta, EXIT_TOL)
    meta["consistent"] = rep.consistent
    cols = ["k_boundary", "k_quadrature", "error_estimate", "abs_k"]
    row = [rep.k_boundary, rep.k_quadrature, rep.quadrature_error_estimate, rep.abs_k]
    if rep.k_trace_density is not None:
        cols.append("k_trace_density")
        row.append(rep.k_trace_density)
    return Output(tuple(cols), np.array([row]), meta, EXIT_OK if rep.consistent else EXIT_TOL)


def cmd_bubbling(cfg: RunConfig) -> Output:
    C = cfg.C
    if C <= 0:
        raise UsageError("bubbling needs --C > 0")
    r = float(cfg.extra.get("r", 1.0))
    t = cfg.grid()
    lhs, rhs = gi.bubbling_check(C, t)
    rel = np.abs(lhs - rhs) / np.abs(rhs)
    meta = cfg.meta()
    frac = gi.concentration_fraction(C, r)
    meta.update(r=r, concentration_fraction=frac, mass=gi.curvature_mass(C), mass_C1=gi.curvature_mass(1.0),
                max_rel_scaling_error=float(rel.max()))
    status = EXIT_OK
    if rel.max() > 1e-12:
        status = EXIT_TOL
    min_frac = cfg.extra.get("min_fraction")
    if min_frac is not None and frac < float(min_frac):
        status = EXIT_TOL
    return Output(("t", "F_norm_C", "C_F_norm_1_at_Ct", "rel_error"), np.column_stack([t, lhs, rhs, rel]), meta, status)


def cmd_singularity(cfg: RunConfig) -> Output:
    fam = cfg.family_obj()
    eps = [float(e) for e in cfg.extra.get("eps") or (1e-2, 5e-3, 2.5e-3)]
    meta = cfg.meta()
    try:
        vals = [gi.singular_mass(fam, e) for e in eps]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    expo = float(-np.polyfit(np.log(eps), np.log(vals), 1)[0])
    meta.update(exponent=expo, target="1 +- 0.1")
    status = EXIT_OK if abs(expo - 1.0) <= 0.1 else EXIT_TOL
    return Output(("eps", "mass"), np.column_stack([eps, vals]), meta, status)


def cmd_multicenter(cfg: RunConfig) -> Output:
    path = cfg.extra.get("centers")
    if not path:
        raise UsageError("multicenter needs --centers FILE (JSON with lambdas, centers, C)")
    cd = mc.CenterData.load(path)
    fam = SolutionFamily(Variant.GLUED_PLUS, cd.C)
    n = cfg.count if cfg.extra.get("count_given") else 20
    rng = np.random.default_rng(cfg.seed)
    pts = mc.random_admissible_points(cd, fam, rng, n)
    s = mc.sampler(cd, fam)
    rows = []
    for x in pts:
        rep = fdcheck.kw_residual_4d(s, x, cfg.h)
        order, _ = fdcheck.point_order(s, x, cfg.h)
        rows.append(list(x) + [rep.r_kw, rep.r_div, order])
    orders = np.array([r[-1] for r in rows])
    lam_tot, m, c0 = mc.radial_reduction(cd)
    meta = cfg.meta()
    meta.update(family="glued_plus", C=cd.C, centers=cd.to_json(), Lam=lam_tot, centroid=m.tolist(), c0=c0,
                median_order=float(np.nanmedian(orders)))
    if cfg.extra.get("instanton"):
        k, err = mc.conjectural_instanton_number(cd, fam)
        meta.update(conjectural_k=k, conjectural_k_error=err)
    status = EXIT_OK if np.nanmedian(orders) >= 1.8 else EXIT_TOL
    return Output(("x1", "x2", "x3", "x4", "r_kw", "r_div", "order"), np.array(rows), meta, status)


def cmd_nahm(cfg: RunConfig) -> Output:
    which = cfg.extra.get("which") or "plus_half"
    y_min = cfg.t_min if cfg.extra.get("range_given") else 1e-4
    y_max = cfg.t_max if cfg.extra.get("range_given") else 10.0
    if y_min <= 0:
        raise UsageError("y grid must be positive")
    cfg2 = RunConfig("nahm", t_min=y_min, t_max=y_max, count=cfg.count, log=cfg.log)
    y = cfg2.grid()
    tab = nahm.table(which, y)
    small = y[y < 0.1]
    res = nahm.nahm_pole_residual(which, small) if small.size else np.array([])
    meta = cfg.meta()
    meta.pop("family")
    meta.update(which=which, y_p_at_1e_3=float(1e-3 * nahm.pullback_profiles(which, 1e-3)[1]),
                decay_slope_p=nahm.decay_slope(which, "p"), decay_slope_a=nahm.decay_slope(which, "a"),
                cylinder_k=nahm.cylinder_instanton(which, cfg.C if cfg.C > 0 else 1.0))
    status = EXIT_OK
    if small.size and np.any(res > 5 * small):
        status = EXIT_TOL
    if abs(meta["decay_slope_p"] + 4.0) > 1e-2:
        status = EXIT_TOL
    return Output(nahm.TABLE_COLUMNS, tab, meta, status)


def cmd_odeplot(cfg: RunConfig) -> Output:
    fam = cfg.family_obj()
    meta = cfg.meta()
    if cfg.extra.get("phase"):
        t0 = float(cfg.extra.get("t0", 2.0))
        st = ode.orbit_state(fam, t0)
        s_end = st.s + float(cfg.extra.get("span", 3.0))
        traj = ode.integrate(-1.0, st, s_end, tol=1e-10)
        meta.update(traj.stats())
        return Output(ode.Trajectory.COLUMNS, traj.rows(), meta, EXIT_OK)
    p = profile(fam)
    t = cfg.grid()
    t = t[p.admissible(t)]
    fn = np.sqrt(gi.curvature_norm_sq(fam, t))
    return Output(("t", "f", "g", "F_norm"), np.column_stack([t, p.f(t), p.g(t), fn]), meta, EXIT_OK)


COMMANDS = {
    "verify": cmd_verify,
    "instanton": cmd_instanton,
    "bubbling": cmd_bubbling,
    "singularity": cmd_singularity,
    "multicenter": cmd_multicenter,
    "nahm": cmd_nahm,
    "odeplot": cmd_odeplot,
}


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="kwradial", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--family", default="f1", choices=[v.value for v in Variant])
        sp.add_argument("--C", type=float, default=1.0)
        sp.add_argument("--t-min", type=float, default=None)
        sp.add_argument("--t-max", type=float, default=None)
        sp.add_argument("--count", type=int, default=None)
        sp.add_argument("--log", action=argparse.BooleanOptionalAction, default=True)
        sp.add_argument("--h", type=float, default=None, help="finite-difference step")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", default=None, help="output path (default stdout)")
        sp.add_argument("--format", default="csv", choices=("csv", "json"))
        sp.add_argument("--tol", type=float, default=1e-10)
        if name == "verify":
            sp.add_argument("--fd-points", type=int, default=5)
        if name == "instanton":
            sp.add_argument("--trace", action="store_true", help="also run the 4D trace-density quadrature")
        if name == "bubbling":
            sp.add_argument("--r", type=float, default=1.0)
            sp.add_argument("--min-fraction", type=float, default=None)
        if name == "singularity":
            sp.add_argument("--eps", type=float, nargs="+", default=None)
        if name == "multicenter":
            sp.add_argument("--centers", default=None)
            sp.add_argument("--instanton", action="store_true")
        if name == "nahm":
            sp.add_argument("--which", choices=nahm.WHICH, default="plus_half")
        if name == "odeplot":
            sp.add_argument("--phase", action="store_true", help="autonomous trajectory instead of f, g, |F|")
            sp.add_argument("--t0", type=float, default=2.0)
            sp.add_argument("--span", type=float, default=3.0)
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    defaults = {"t_min": 1e-3, "t_max": 1e3, "count": 1000}
    if ns.command == "nahm":
        defaults["count"] = 200
    extra = {k: v for k, v in vars(ns).items() if k not in (
        "command", "family", "C", "t_min", "t_max", "count", "log", "h", "seed", "out", "format", "tol")}
    extra["count_given"] = ns.count is not None
    extra["range_given"] = ns.t_min is not None or ns.t_max is not None
    cfg = RunConfig(
        command=ns.command,
        family=ns.family,
        C=ns.C,
        t_min=defaults["t_min"] if ns.t_min is None else ns.t_min,
        t_max=defaults["t_max"] if ns.t_max is None else ns.t_max,
        count=defaults["count"] if ns.count is None else ns.count,
        log=ns.log,
        h=ns.h,
        seed=ns.seed,
        out=ns.out,
        format=ns.format,
        tol=ns.tol,
        extra=extra,
    )
    if ns.command == "nahm" and not extra["range_given"]:
        cfg.t_min, cfg.t_max = 1e-4, 10.0
    return cfg


def run(argv=None, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
        cfg.validate()
        out = COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"kwradial: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError) as exc:
        print(f"kwradial: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (SingularLocusError, fdcheck.DomainGuardError) as exc:
        print(f"kwradial: {exc}", file=sys.stderr)
        return EXIT_TOL
    text = render(out, cfg.format)
    try:
        if cfg.out:
            with open(cfg.out, "w", newline="\n") as fh:
                fh.write(text)
        else:
            stdout.write(text)
    except OSError as exc:
        print(f"kwradial: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return out.status


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
