"""Command-line front end: ``contactrelapse <command> --config FILE --out DIR``.

Exit status is 0 on success, 1 when the model rejects its inputs, 2 on usage errors
(bad flags, unreadable config).
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path
from typing import Any, Mapping, Optional, Sequence

from .core import EpiState, derived_rates, params_from_mapping
from .equilibria import EquilibriumSet, cubic_coefficients, endemic_equilibria
from .errors import ModelError
from .extensions import (FLU_HORIZON, FLU_I0, FLU_STRIDE, VECTOR_LABELS, VectorBorneParams,
                         immunized_r0, influenza_params, influenza_scenario, integrate_vector,
                         peak_prevalence, peak_prevalence_surface)
from .parallel import default_workers
from .simulate import (DEFAULT_HORIZON, DEFAULT_STRIDE, ScenarioSpec, basin_probe,
                       detect_convergence, initial_from_rho, integrate)
from .stability import classify_state, dulac_grid_max
from .sturm import Polynomial, count_roots
from .sweep import (branch_sweep, classify_regions, equilibrium_heatmap, r3_window_surface,
                    write_branches_csv, write_grid_csv)
from .theorem import inequality_holds, r0_window, theorem_constants, theta_stars

COMMANDS = ("simulate", "equilibria", "stability", "sturm", "theorem", "bifurcate", "heatmap",
            "window", "basin", "influenza", "vector")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- serialization

def _fmt(x: float) -> str:
    return format(x, ".17g")


def _json(obj: Any, indent: int = 0) -> str:
    """JSON with every float written to 17 significant digits (NaN/inf become null)."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return _fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, Mapping):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        return "[\n" + ",\n".join(inner + _json(v, indent + 1) for v in obj) + "\n" + pad + "]"
    if hasattr(obj, "item"):
        return _json(obj.item(), indent)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _write_json(path: Path, obj: Any) -> Path:
    path.write_text(_json(obj) + "\n")
    return path


def _write_rows(path: Path, header: Sequence[str], rows) -> Path:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) if isinstance(v, float) else v for v in row])
    return path


# ---------------------------------------------------------------- config

def load_config(path: Optional[str], overrides: Sequence[str] = ()) -> dict:
    if path is None:
        raise UsageError("--config is required for this command")
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"--config: no such file {path!r}")
    try:
        cfg = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise UsageError(f"--config: {path!r} is not valid JSON ({exc})") from None
    if not isinstance(cfg, dict):
        raise UsageError("--config: top level must be a JSON object")
    params = dict(cfg.get("params", {}))
    for item in overrides:
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"--set expects key=value, got {item!r}")
        try:
            params[key.strip()] = float(val)
        except ValueError:
            raise UsageError(f"--set {key}: {val!r} is not a number") from None
        if key.strip() in ("kappa", "theta", "c_i"):
            # ratio overrides replace any explicit contacts
            params.pop("c_s", None)
            params.pop("c_r", None)
    cfg["params"] = params
    return cfg


def _block(cfg: Mapping, name: str) -> dict:
    b = cfg.get(name, {})
    if not isinstance(b, dict):
        raise UsageError(f"config block {name!r} must be an object")
    return b


def _pair(v, name) -> tuple[float, float]:
    if not (isinstance(v, (list, tuple)) and len(v) == 2):
        raise UsageError(f"{name} must be a two-element list")
    return float(v[0]), float(v[1])


def _resolution(v) -> tuple[int, int]:
    if isinstance(v, int):
        return v, v
    a, b = _pair(v, "resolution")
    return int(a), int(b)


def _model(cfg):
    return params_from_mapping(cfg["params"])


# ---------------------------------------------------------------- commands

def _eq_payload(eq: EquilibriumSet, p, c) -> dict:
    def point(pt):
        cls = classify_state(pt.state, p, c)
        return {"s": pt.state.s, "i": pt.state.i, "r": pt.state.r, "stability": pt.stability,
                "eigenvalues": [[z.real, z.imag] for z in cls.eigenvalues]}

    return {"r0": derived_rates(p, c).r0, "kappa": c.kappa, "theta": c.theta,
            "dfe": point(eq.dfe), "endemic": [point(e) for e in eq.endemic],
            "rejected_roots": list(eq.rejected), "degenerate": eq.degenerate}


def cmd_equilibria(args, cfg, out: Path) -> str:
    p, c = _model(cfg)
    eq = endemic_equilibria(p, c)
    _write_json(out / "equilibria.json", _eq_payload(eq, p, c))
    stars = ", ".join(f"{x:.6f} ({pt.stability})" for x, pt in zip(eq.i_stars, eq.endemic))
    return f"R0={derived_rates(p, c).r0:.6f}; {len(eq.endemic)} endemic: {stars or 'none'}"


def cmd_stability(args, cfg, out: Path) -> str:
    p, c = _model(cfg)
    eq = endemic_equilibria(p, c)
    payload = _eq_payload(eq, p, c)
    if c.c_i >= c.c_s:
        payload["dulac_max"] = dulac_grid_max(p, c)
    _write_json(out / "stability.json", payload)
    labels = [eq.dfe.stability] + [e.stability for e in eq.endemic]
    return "DFE " + labels[0] + "; endemic " + (", ".join(labels[1:]) or "none")


def _initial(block) -> EpiState:
    if "rho" in block:
        return initial_from_rho(float(block["rho"]), float(block.get("N", 10_000)),
                                float(block.get("recovered", 10)))
    ini = block.get("initial")
    if not isinstance(ini, Mapping):
        raise UsageError("simulate block needs 'rho' or an 'initial' {s, i, r} object")
    try:
        return EpiState(float(ini["s"]), float(ini["i"]), float(ini["r"]))
    except KeyError as exc:
        raise UsageError(f"initial state is missing {exc.args[0]!r}") from None


def cmd_simulate(args, cfg, out: Path) -> str:
    p, c = _model(cfg)
    b = _block(cfg, "simulate")
    spec = ScenarioSpec(p, c, _initial(b), float(b.get("horizon", DEFAULT_HORIZON)),
                        float(b.get("stride", DEFAULT_STRIDE)))
    traj = integrate(spec, stop_on_convergence=bool(b.get("early_exit", True)))
    rep = detect_convergence(traj, endemic_equilibria(p, c))
    _write_rows(out / "trajectory.csv", ["t", "s", "i", "r"],
                ([float(t), *map(float, y)] for t, y in zip(traj.times, traj.states)))
    _write_json(out / "convergence.json", {
        "converged": rep.converged, "attained_at": rep.attained_at,
        "matched_equilibrium": rep.matched_equilibrium,
        "limit_state": list(rep.limit_state.as_tuple()), "max_drift": traj.max_drift})
    return (f"i(T)={rep.limit_state.i:.6f} converged={rep.converged} "
            f"matched={rep.matched_equilibrium}")


def cmd_basin(args, cfg, out: Path) -> str:
    p, c = _model(cfg)
    b = _block(cfg, "basin")
    rhos = b.get("rho")
    if not isinstance(rhos, list) or not rhos:
        raise UsageError("basin block needs a non-empty 'rho' list")
    res = basin_probe(p, c, [float(x) for x in rhos], float(b.get("N", 10_000)),
                      float(b.get("recovered", 10)), float(b.get("horizon", DEFAULT_HORIZON)),
                      float(b.get("stride", DEFAULT_STRIDE)), workers=args.workers)
    _write_rows(out / "basin.csv", ["rho", "i_limit", "matched_index", "converged"],
                ([r.rho, r.i_limit, "" if r.matched_index is None else r.matched_index,
                  int(r.converged)] for r in res))
    if b.get("trajectories"):
        for r in res:
            traj = integrate(ScenarioSpec(p, c, initial_from_rho(r.rho), float(
                b.get("horizon", DEFAULT_HORIZON)), float(b.get("stride", DEFAULT_STRIDE))))
            _write_rows(out / f"trajectory_rho{r.rho:g}.csv", ["t", "s", "i", "r"],
                        ([float(t), *map(float, y)] for t, y in zip(traj.times, traj.states)))
    return f"{len(res)} initial conditions; matched " + ", ".join(
        str(r.matched_index) for r in res)


def cmd_sturm(args, cfg, out: Path) -> str:
    if args.coeffs:
        poly = Polynomial(args.coeffs)
    else:
        p, c = _model(cfg)
        poly = Polynomial(cubic_coefficients(derived_rates(p, c), c.kappa, c.theta).as_tuple())
    a, b = args.interval
    n = count_roots(poly, a, b)
    if args.out_given:
        _write_json(out / "sturm.json", {"coeffs": list(poly.coeffs), "interval": [a, b],
                                         "count": n})
    return f"{n} distinct real roots in [{a:g}, {b:g}]"


def cmd_theorem(args, cfg, out: Path) -> str:
    p, c = _model(cfg)
    ts = theta_stars(p, c.kappa)
    win = r0_window(p, c.kappa, c.theta)
    holds = inequality_holds(p)
    _write_json(out / "theorem.json", {
        "inequality_holds": holds, "r_mu": p.r_mu, "r_phi": p.r_phi,
        "constants": theorem_constants(p).as_dict(),
        "theta_stars": {"theta1_star": ts.theta1_star, "theta2_star": ts.theta2_star,
                        "theta3_star": ts.theta3_star},
        "r0_max": win.r0_max})
    return f"inequality_holds={str(holds).lower()} r0_max={win.r0_max:.6f}"


def cmd_bifurcate(args, cfg, out: Path) -> str:
    p, c = _model(cfg)
    b = _block(cfg, "bifurcate")
    rng = _pair(b.get("r0_range", [0.5, 1.5]), "r0_range")
    diag = branch_sweep(p, c.kappa, c.theta, rng, int(b.get("steps", 300)), workers=args.workers)
    write_branches_csv(diag, out / "branches.csv")
    regions = classify_regions(diag)
    seen = list(dict.fromkeys(regions))
    _write_json(out / "diagram.json", {"kappa": c.kappa, "theta": c.theta,
                                       "region_boundaries": list(diag.region_boundaries),
                                       "regions": seen})
    return "boundaries " + ", ".join(f"{x:.6f}" for x in diag.region_boundaries) + \
        "; regions " + " ".join(seen)


def cmd_heatmap(args, cfg, out: Path) -> str:
    p, _ = _model(cfg)
    b = _block(cfg, "heatmap")
    grid = equilibrium_heatmap(
        p, _pair(b.get("kappa_range", [0.01, 1.0]), "kappa_range"),
        _pair(b.get("theta_range", [0.0, 2.0]), "theta_range"), float(b.get("i0", 0.1)),
        _resolution(b.get("resolution", [50, 50])), float(b.get("c_i", 3.0)),
        float(b.get("horizon", DEFAULT_HORIZON)), float(b.get("stride", DEFAULT_STRIDE)),
        workers=args.workers)
    write_grid_csv(grid, out / "heatmap.csv")
    return f"{grid.payload.size} cells, {len(grid.missing)} failed"


def cmd_window(args, cfg, out: Path) -> str:
    p, _ = _model(cfg)
    b = _block(cfg, "window")
    grid = r3_window_surface(p, _pair(b.get("kappa_range", [0.0, 1.0]), "kappa_range"),
                             _pair(b.get("theta_range", [0.0, 2.0]), "theta_range"),
                             _resolution(b.get("resolution", [50, 50])), workers=args.workers)
    write_grid_csv(grid, out / "heatmap.csv")
    return f"{grid.payload.size} cells, max window length {float(grid.payload.max()):.6f}"


def cmd_influenza(args, cfg, out: Path) -> str:
    b = _block(cfg, "influenza")
    i0 = float(b.get("i0", FLU_I0))
    horizon = float(b.get("horizon", FLU_HORIZON))
    stride = float(b.get("stride", FLU_STRIDE))
    cases = b.get("cases", [[1.0, 1.0]])
    peaks = []
    for kappa, theta in (_pair(x, "cases entry") for x in cases):
        traj = integrate(influenza_scenario(kappa, theta, i0, horizon, stride),
                         stop_on_convergence=False)
        t_pk, i_pk = peak_prevalence(traj)
        peaks.append({"kappa": kappa, "theta": theta, "t_peak": t_pk, "i_peak": i_pk})
        _write_rows(out / f"influenza_k{kappa:g}_t{theta:g}.csv", ["t", "s", "i", "r"],
                    ([float(t), *map(float, y)] for t, y in zip(traj.times, traj.states)))
    r0 = derived_rates(influenza_params(), influenza_scenario().contacts).r0
    _write_json(out / "peaks.json", {"r0": r0, "r_p": immunized_r0(r0, float(b.get("p", 0.2))),
                                      "cases": peaks})
    surf = b.get("surface")
    if surf:
        grid = peak_prevalence_surface(
            _pair(surf.get("kappa_range", [0.5, 1.5]), "kappa_range"),
            _pair(surf.get("theta_range", [0.5, 2.0]), "theta_range"),
            _resolution(surf.get("resolution", [50, 50])), i0, horizon, stride,
            workers=args.workers)
        write_grid_csv(grid, out / "heatmap.csv")
    return f"R0={r0:.4f}; peaks " + ", ".join(
        f"(k={x['kappa']:g}, t={x['theta']:g}) {x['i_peak']:.4f}" for x in peaks)


def cmd_vector(args, cfg, out: Path) -> str:
    b = _block(cfg, "vector")
    try:
        vp = VectorBorneParams(
            **{k: float(b[k]) for k in ("beta", "beta_v", "gamma", "mu_h", "alpha_h", "mu_v",
                                        "alpha_v", "n_h", "n_v")},
            contacts={k: float(v) for k, v in b.get("contacts", {k: 1.0 for k in
                                                                  VECTOR_LABELS}).items()},
            numerator=b.get("numerator", "population"),
            constant_incidence=bool(b.get("constant_incidence", False)))
        initial = [float(b["initial"][k]) for k in VECTOR_LABELS]
    except KeyError as exc:
        raise UsageError(f"vector block is missing {exc.args[0]!r}") from None
    traj = integrate_vector(vp, initial, float(b.get("horizon", 365.0)),
                            float(b.get("stride", 1.0)))
    _write_rows(out / "vector_trajectory.csv", ["t", *VECTOR_LABELS],
                ([float(t), *map(float, y)] for t, y in zip(traj.times, traj.states)))
    k = int(traj.states[:, 2].argmax())
    return f"host infection peak {float(traj.states[k, 2]):.6g} at t={float(traj.times[k]):g}"


HANDLERS = {"simulate": cmd_simulate, "equilibria": cmd_equilibria, "stability": cmd_stability,
            "sturm": cmd_sturm, "theorem": cmd_theorem, "bifurcate": cmd_bifurcate,
            "heatmap": cmd_heatmap, "window": cmd_window, "basin": cmd_basin,
            "influenza": cmd_influenza, "vector": cmd_vector}
NEEDS_CONFIG = set(COMMANDS) - {"influenza", "sturm"}


# ---------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--out", help="output directory (created if missing)")
    common.add_argument("--workers", type=int, default=None,
                        help="parallel worker processes (default: available cores)")
    common.add_argument("--seed", type=int, default=0, help="reserved; every path is deterministic")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a value in the config's params block")

    parser = _Parser(prog="contactrelapse", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        if name == "sturm":
            sp = sub.add_parser(name, help="count real roots with a Sturm chain")
            ssub = sp.add_subparsers(dest="action", required=True, parser_class=_Parser)
            cp = ssub.add_parser("count", parents=[common])
            cp.add_argument("--coeffs", type=float, nargs="+",
                            help="ascending coefficients (default: the config's equilibrium cubic)")
            cp.add_argument("--interval", type=float, nargs=2, default=[0.0, 1.0],
                            metavar=("A", "B"))
        elif name == "theorem":
            sp = sub.add_parser(name, help="three-root conditions near R0 = 1")
            tsub = sp.add_subparsers(dest="action", required=True, parser_class=_Parser)
            tsub.add_parser("check", parents=[common])
        else:
            sub.add_parser(name, parents=[common])
    return parser


def dispatch(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.workers is None:
            args.workers = default_workers()
        if args.workers < 1:
            raise UsageError("--workers must be >= 1")
        needs = args.command in NEEDS_CONFIG or (args.command == "sturm" and not args.coeffs)
        cfg = load_config(args.config, args.set) if (needs or args.config) else {"params": {}}
        args.out_given = args.out is not None
        out = Path(args.out or ".")
        out.mkdir(parents=True, exist_ok=True)
        summary = HANDLERS[args.command](args, cfg, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(summary)
    return 0


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
