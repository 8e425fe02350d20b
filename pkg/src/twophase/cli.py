"""Command-line front end: run cases, convergence studies, exact solutions.

Configuration is INI-style (configparser) with a [case] section plus
[eos1]/[eos2] blocks; any value can be overridden from the command line.
Every run leaves behind snapshot CSVs, a per-step diagnostics log and a
JSON manifest with the fully resolved configuration and its content hash,
so an identical manifest reproduces identical output bytes.
"""

from __future__ import annotations

import argparse
import configparser
import hashlib
import json
import os
import sys
from dataclasses import replace

import numpy as np

from .cases import (CaseConfig, RunDiagnostics, StageToggles, alloy_sweep,
                    build_case, case_names, simulate)
from .eos import StiffenedGasEos, density_from_p_T
from .hyperbolic import FIRST_ORDER, MINMOD, OVERBEE, Limiter
from .riemann_exact import SideState, exact_riemann, write_solution_csv
from .state import ETOT, MOMX, MOMY, write_snapshot_csv

_LIMITERS = {
    "first": Limiter(FIRST_ORDER, FIRST_ORDER),
    "minmod": Limiter(MINMOD, MINMOD),
    "overbee": Limiter(OVERBEE, MINMOD),
}

_STAGE_FLAGS = {
    "no-viscous": "viscous",
    "no-pressure-relax": "pressure_relax",
    "no-temp-relax": "temperature_relax",
    "no-conduction": "conduction",
}


class ConfigError(Exception):
    """Raised for any configuration problem; maps to exit code 2."""


# ---------------------------------------------------------------------------
# configuration handling

def _eos_from_section(sec) -> StiffenedGasEos:
    try:
        return StiffenedGasEos(gamma=sec.getfloat("gamma"),
                               p_inf=sec.getfloat("p_inf", 0.0),
                               cv=sec.getfloat("cv", 1.0),
                               q=sec.getfloat("q", 0.0))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid EOS parameters: {exc}") from exc


def _overrides_from_config(path: str) -> tuple[str, dict]:
    """Parse an INI file into (case name, CaseConfig override dict)."""
    cp = configparser.ConfigParser()
    if not cp.read(path):
        raise ConfigError(f"cannot read config file {path!r}")
    if "case" not in cp:
        raise ConfigError("config missing [case] section")
    for block in ("eos1", "eos2"):
        if block not in cp:
            raise ConfigError(f"config missing [{block}] section")
    sec = cp["case"]
    name = sec.get("name")
    if not name:
        raise ConfigError("[case] section must set 'name'")

    ov: dict = {"eos1": _eos_from_section(cp["eos1"]),
                "eos2": _eos_from_section(cp["eos2"])}
    for key, getter in (("nx", sec.getint), ("ny", sec.getint),
                        ("end_time", sec.getfloat), ("cfl", sec.getfloat)):
        if key in sec:
            ov[key] = getter(key)
    if "limiter" in sec:
        ov["limiter"] = _limiter_by_name(sec.get("limiter"))
    if "stages" in cp:
        st = cp["stages"]
        ov["stages"] = StageToggles(
            viscous=st.getboolean("viscous", True),
            pressure_relax=st.getboolean("pressure_relax", True),
            temperature_relax=st.getboolean("temperature_relax", True),
            conduction=st.getboolean("conduction", True))
    if "transport" in cp:
        from .diffusion import TransportModel
        tr = cp["transport"]
        ov["transport"] = TransportModel(
            mu1=tr.getfloat("mu1", 0.0), mu2=tr.getfloat("mu2", 0.0),
            mu_b1=tr.getfloat("mu_b1", 0.0), mu_b2=tr.getfloat("mu_b2", 0.0),
            lam1=tr.getfloat("lam1", 0.0), lam2=tr.getfloat("lam2", 0.0))
    return name, ov


def _limiter_by_name(name: str) -> Limiter:
    if name not in _LIMITERS:
        raise ConfigError(
            f"unknown limiter {name!r}; valid: {', '.join(sorted(_LIMITERS))}")
    return _LIMITERS[name]


def _eos_dict(e: StiffenedGasEos) -> dict:
    return {"gamma": e.gamma, "p_inf": e.p_inf, "cv": e.cv, "q": e.q}


def _transport_dict(tr) -> dict:
    out = {}
    for key in ("mu1", "mu2", "mu_b1", "mu_b2", "lam1", "lam2"):
        val = getattr(tr, key)
        out[key] = "model:callable" if callable(val) else float(val)
    return out


def resolved_config_dict(config: CaseConfig) -> dict:
    """Every field of the run materialized as plain JSON data."""
    lim = config.limiter
    return {
        "case": config.name,
        "nx": config.nx, "ny": config.ny,
        "end_time": config.end_time, "cfl": config.cfl,
        "x_extent": list(config.x_extent), "y_extent": list(config.y_extent),
        "bc_x": list(config.bc_x), "bc_y": list(config.bc_y),
        "limiter": {"interface": lim.interface, "bulk": lim.bulk,
                    "masses": lim.mass_kind},
        "stages": {"viscous": config.stages.viscous,
                   "pressure_relax": config.stages.pressure_relax,
                   "temperature_relax": config.stages.temperature_relax,
                   "conduction": config.stages.conduction},
        "eos1": _eos_dict(config.eos1), "eos2": _eos_dict(config.eos2),
        "transport": _transport_dict(config.transport),
        "source": None if config.source is None else {
            "intensity": config.source.intensity,
            "absorption_depth": config.source.absorption_depth,
            "rho_crt": config.source.rho_crt},
        "units": config.units,
    }


def config_hash(resolved: dict) -> str:
    blob = json.dumps(resolved, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


# ---------------------------------------------------------------------------
# run command

def _conservation_residuals(grid, totals0, diag: RunDiagnostics):
    """Relative budget misclosure for (mass, x-momentum, total energy)."""
    now = grid.totals()
    flux = diag.boundary_flux
    vol = grid.dx * (grid.dy if grid.ndim == 2 else 1.0)
    out = []
    for comp, mass_scaled in ((None, True), (MOMX, False), (ETOT, False)):
        if comp is None:
            drift = (now["mass"] - totals0["mass"]
                     - (flux[0] + flux[1]))
            scale = max(abs(totals0["mass"]), 1e-300)
        elif comp == MOMX:
            drift = now["mom_x"] - totals0["mom_x"] - flux[MOMX]
            scale = max(abs(totals0["mom_x"]),
                        abs(totals0["mass"]) * 1.0, 1e-300)
        else:
            # deposited source energy is already folded into the energy flux
            drift = now["etot"] - totals0["etot"] - flux[ETOT]
            scale = max(abs(totals0["etot"]), 1e-300)
        out.append(drift / scale)
    return out


def cmd_run(args) -> int:
    overrides: dict = {}
    name = args.case
    if args.config:
        name_cfg, overrides = _overrides_from_config(args.config)
        if name is None:
            name = name_cfg
    if name is None:
        raise ConfigError("no case selected: pass a config file or --case")

    if args.cells is not None:
        overrides["nx"] = args.cells
    if args.nx is not None:
        overrides["nx"] = args.nx
    if args.ny is not None:
        overrides["ny"] = args.ny
    if args.end_time is not None:
        overrides["end_time"] = args.end_time
    if args.cfl is not None:
        overrides["cfl"] = args.cfl
    if args.limiter is not None:
        overrides["limiter"] = _limiter_by_name(args.limiter)

    try:
        grid, config = build_case(name, **overrides)
    except KeyError as exc:
        raise ConfigError(str(exc)) from exc

    if args.stage:
        st = config.stages
        for flag in args.stage:
            if flag not in _STAGE_FLAGS:
                raise ConfigError(
                    f"unknown stage toggle {flag!r}; valid: "
                    f"{', '.join(sorted(_STAGE_FLAGS))}")
            st = replace(st, **{_STAGE_FLAGS[flag]: False})
        config.stages = st

    outdir = args.out
    os.makedirs(outdir, exist_ok=True)
    resolved = resolved_config_dict(config)
    digest = config_hash(resolved)

    diag = RunDiagnostics()
    totals0 = grid.totals()
    step_log: list[dict] = []
    snap_times = (np.linspace(0.0, config.end_time, args.snapshots + 1)[1:-1]
                  if args.snapshots > 1 else np.array([]))
    written = [0]
    t_prev = [0.0]

    def on_step(g, t, step):
        res = _conservation_residuals(g, totals0, diag)
        step_log.append({"step": step, "t": t, "dt": t - t_prev[0],
                         "relax_iterations": diag.relax_iterations,
                         "mass_residual": res[0],
                         "momentum_residual": res[1],
                         "energy_residual": res[2]})
        t_prev[0] = t
        while written[0] < snap_times.size and t >= snap_times[written[0]]:
            written[0] += 1
            write_snapshot_csv(
                g, os.path.join(outdir, f"snap_{written[0]:04d}.csv"))

    simulate(grid, config, callback=on_step, diagnostics=diag)

    final_csv = os.path.join(outdir, "final.csv")
    write_snapshot_csv(grid, final_csv)
    log_csv = os.path.join(outdir, "steps.csv")
    cols = ["step", "t", "dt", "relax_iterations",
            "mass_residual", "momentum_residual", "energy_residual"]
    with open(log_csv, "w") as fh:
        fh.write(",".join(cols) + "\n")
        for row in step_log:
            fh.write(",".join("%.17g" % row[c] for c in cols) + "\n")

    manifest = {
        "case": name,
        "config": resolved,
        "config_sha256": digest,
        "output_dir": os.path.abspath(outdir),
        "threads": args.threads,
        "steps": len(step_log),
        "final_snapshot": os.path.basename(final_csv),
        "step_log": os.path.basename(log_csv),
        "final_residuals": (step_log[-1] if step_log else None),
    }
    with open(os.path.join(outdir, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"{name}: {len(step_log)} steps -> {final_csv}")
    return 0


# ---------------------------------------------------------------------------
# convergence command

def _restrict(field: np.ndarray, n_coarse: int) -> np.ndarray:
    """Average a fine 1D field down to n_coarse cells (sizes must nest)."""
    n = field.shape[-1]
    if n % n_coarse:
        raise ConfigError(f"resolution {n} does not nest into {n_coarse}")
    return field.reshape(n_coarse, n // n_coarse).mean(axis=-1)


def _shock_tube_oracle(config: CaseConfig):
    """Exact solution matching the two-phase tube's pure-fluid regions."""
    pl, pr = 1.0e9, 1.0e5
    Tl, Tr = 293.02, 7.02
    left = SideState(rho=float(density_from_p_T(config.eos1, pl, Tl)),
                     u=0.0, p=pl, eos=config.eos1)
    right = SideState(rho=float(density_from_p_T(config.eos2, pr, Tr)),
                      u=0.0, p=pr, eos=config.eos2)
    return exact_riemann(left, right), 0.7


def cmd_convergence(args) -> int:
    res = sorted(args.resolutions)
    if len(res) < 3:
        raise ConfigError("need at least 3 resolutions")

    overrides = {}
    if args.case == "shock_tube":
        # the exact solution solves the Euler equations with no thermal
        # relaxation; compare like with like, or the contact region
        # converges to a genuinely different (thermally mixed) solution
        overrides["stages"] = StageToggles(temperature_relax=False)

    finals = {}
    for nx in res:
        if nx not in finals:
            grid, config = build_case(args.case, nx=nx, **overrides)
            simulate(grid, config)
            finals[nx] = (grid.x, grid.primitive().rho, config)

    config = finals[res[0]][2]
    oracle = None
    if args.case == "shock_tube":
        oracle, x0 = _shock_tube_oracle(config)

    rows = []
    if oracle is not None:
        sol = oracle
        for nx in res:
            x, rho, config = finals[nx]
            xi = (x - x0) / config.end_time
            exact = np.array([sol.sample(v)[0] for v in xi])
            # the diffuse interface has no pure-fluid counterpart; compare
            # outside a 10-cell band around the material contact
            dx = x[1] - x[0]
            x_contact = x0 + sol.u_star * config.end_time
            keep = np.abs(x - x_contact) > 5.0 * dx
            err = float(np.mean(np.abs(rho - exact)[keep])
                        / np.mean(np.abs(exact)[keep]))
            rows.append((nx, err))
    else:
        x_f, rho_f, _ = finals[res[-1]]
        for nx in res[:-1]:
            x, rho, _ = finals[nx]
            ref = _restrict(rho_f, nx)
            err = float(np.mean(np.abs(rho - ref)) / np.mean(np.abs(ref)))
            rows.append((nx, err))

    print("nx,l1_error,observed_order")
    lines = ["nx,l1_error,observed_order"]
    prev = None
    for nx, err in rows:
        order = ""
        if prev is not None and err > 0.0 and nx > prev[0]:
            p_nx, p_err = prev
            order = "%.3f" % (np.log(p_err / err) / np.log(nx / p_nx))
        line = f"{nx},{err:.6e},{order}"
        print(line)
        lines.append(line)
        prev = (nx, err)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    return 0


# ---------------------------------------------------------------------------
# sweep command

def cmd_sweep(args) -> int:
    try:
        table = alloy_sweep(args.velocities, nx=args.nx,
                            end_time=args.end_time)
    except (ValueError, RuntimeError) as exc:
        raise ConfigError(str(exc)) from exc
    lines = ["u_impact,shock_speed"]
    lines += [f"{u:.17g},{S:.17g}" for u, S in table]
    print("\n".join(lines))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    return 0


# ---------------------------------------------------------------------------
# riemann command

def cmd_riemann(args) -> int:
    eos_l = StiffenedGasEos(*args.eos_left)
    eos_r = StiffenedGasEos(*args.eos_right)
    left = SideState(rho=args.left[0], u=args.left[1], p=args.left[2],
                     eos=eos_l)
    right = SideState(rho=args.right[0], u=args.right[1], p=args.right[2],
                      eos=eos_r)
    sol = exact_riemann(left, right)
    x = np.linspace(args.xmin, args.xmax, args.samples)
    write_solution_csv(sol, x, args.time, args.out, x0=args.x0)
    ws = sol.wave_speeds()
    print(f"wave speeds: head_l={ws[0]:.6g} tail_l={ws[1]:.6g} "
          f"contact={ws[2]:.6g} tail_r={ws[3]:.6g} head_r={ws[4]:.6g}")
    print(f"wrote {args.out}")
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="twophase",
        description="Two-phase compressible flow solver with heat conduction")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a named case or a config file")
    run.add_argument("config", nargs="?", help="INI config file")
    run.add_argument("--case", choices=case_names())
    run.add_argument("--cells", type=int, help="alias for --nx")
    run.add_argument("--nx", type=int)
    run.add_argument("--ny", type=int)
    run.add_argument("--end-time", type=float, dest="end_time")
    run.add_argument("--cfl", type=float)
    run.add_argument("--limiter", choices=sorted(_LIMITERS))
    run.add_argument("--stage", action="append", default=[],
                     metavar="|".join(sorted(_STAGE_FLAGS)),
                     help="disable a solver stage (repeatable)")
    run.add_argument("--threads", type=int, default=1)
    run.add_argument("--snapshots", type=int, default=1,
                     help="number of evenly spaced snapshots (final always)")
    run.add_argument("--out", default="out")
    run.set_defaults(func=cmd_run)

    conv = sub.add_parser("convergence", help="L1 error table over resolutions")
    conv.add_argument("--case", required=True, choices=case_names())
    conv.add_argument("--resolutions", type=int, nargs="+", required=True)
    conv.add_argument("--out", help="write the table to this CSV")
    conv.set_defaults(func=cmd_convergence)

    swp = sub.add_parser("sweep",
                         help="impact-velocity sweep: shock speed table")
    swp.add_argument("--velocities", type=float, nargs="+", required=True,
                     metavar="U")
    swp.add_argument("--nx", type=int, default=400)
    swp.add_argument("--end-time", type=float, dest="end_time", default=4.0e-5)
    swp.add_argument("--out", help="write the table to this CSV")
    swp.set_defaults(func=cmd_sweep)

    rie = sub.add_parser("riemann", help="sample the exact single-phase solution")
    rie.add_argument("--left", type=float, nargs=3, required=True,
                     metavar=("RHO", "U", "P"))
    rie.add_argument("--right", type=float, nargs=3, required=True,
                     metavar=("RHO", "U", "P"))
    rie.add_argument("--eos-left", type=float, nargs=4, required=True,
                     metavar=("GAMMA", "P_INF", "CV", "Q"))
    rie.add_argument("--eos-right", type=float, nargs=4, required=True,
                     metavar=("GAMMA", "P_INF", "CV", "Q"))
    rie.add_argument("--time", type=float, required=True)
    rie.add_argument("--x0", type=float, default=0.0)
    rie.add_argument("--xmin", type=float, default=0.0)
    rie.add_argument("--xmax", type=float, default=1.0)
    rie.add_argument("--samples", type=int, default=1000)
    rie.add_argument("--out", required=True)
    rie.set_defaults(func=cmd_riemann)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "threads", None):
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                    "MKL_NUM_THREADS"):
            os.environ[var] = str(args.threads)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
