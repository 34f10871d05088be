"""Command-line frontend.

Subcommands::

    theta      evaluate the theta-function engine at a label's arguments
    cs         coherent-state quantities (expect-j, expect-u, norm2,
               distribution, overlap, coeffs, quantize, fidelity)
    spectrum   level energies at the border angles
    dynamics   integrate a strip trajectory and export it
    project    universal constraint-window projector
    verify     identity-verification suites (exit 1 on any failure)
    sweep      Cartesian parameter sweeps of scalar targets
    run        re-run a command from a JSON artifact or key=value config

Angles accept symbolic multiples of pi ("pi", "3pi", "pi/2", "-0.5pi") so
the border angles are expressible exactly.  All numeric output is printed
with 17 significant digits; CSV artifacts use a header row, comma
separators and LF line endings, and identical configs produce
byte-identical artifacts.  MOBIUSCS_WORKERS sets the default sweep
concurrency.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import dynamics, projection, report, states, theta
from .errors import DomainError, PrecisionError

WORKERS_ENV = "MOBIUSCS_WORKERS"

_ANGLE_RE = re.compile(r"^([+-]?\d*\.?\d*)\s*pi\s*(?:/\s*(\d*\.?\d+))?$")


def parse_angle(text: str) -> float:
    """Parse 'pi', '3pi', '-pi/2', '0.5pi' or a plain float (radians)."""
    text = str(text).strip()
    m = _ANGLE_RE.match(text)
    if m:
        coeff_s, div_s = m.groups()
        coeff = 1.0 if coeff_s in ("", "+") else -1.0 if coeff_s == "-" else float(coeff_s)
        value = coeff * math.pi
        if div_s:
            value /= float(div_s)
        return value
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse angle {text!r}") from None


def parse_offset(text: str) -> float:
    """Parse the basis offset: 'int'/'0' -> 0, 'half'/'0.5' -> 1/2."""
    key = str(text).strip().lower()
    if key in ("int", "integer", "0", "0.0", "boson"):
        return 0.0
    if key in ("half", "0.5", "1/2", "fermion"):
        return 0.5
    raise argparse.ArgumentTypeError(f"offset must be 'int' or 'half', got {text!r}")


def fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


# parameter name -> parser for config files given as key=value text
PARAM_PARSERS = {
    "phi": parse_angle, "phi2": parse_angle, "theta": parse_angle,
    "s": parse_offset,
    "l": float, "l2": float, "r": float, "j": float, "L0": float,
    "t": float, "t_end": float, "dt": float, "delta": float, "tol": float,
    "j_max": float, "z0": float,
    "workers": int,
    "grid": str, "out": str, "format": str, "target": str, "suite": str,
    "action": str,
}


def load_config(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        data = json.loads(text)
        return data
    mapping = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise DomainError(f"config line without '=': {line!r}")
        key, _, raw = line.partition("=")
        key = key.strip().replace("-", "_")
        if key not in PARAM_PARSERS:
            raise DomainError(f"unknown config key {key!r}")
        mapping[key] = PARAM_PARSERS[key](raw.strip())
    return mapping


def apply_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    """Fill parameters from --config for any flag not given on the command line."""
    if not getattr(args, "config", None):
        return
    data = load_config(args.config)
    if "config" in data and isinstance(data["config"], dict):
        data = data["config"]
    defaults = {a.dest: a.default for a in parser._actions}
    for key, value in data.items():
        key = key.replace("-", "_")
        if key in ("command",):
            continue
        if key not in defaults:
            raise DomainError(f"unknown config key {key!r} for this command")
        if getattr(args, key, None) == defaults.get(key):
            if isinstance(value, str) and key in PARAM_PARSERS:
                value = PARAM_PARSERS[key](value)
            setattr(args, key, value)


def emit(rows: list[dict], args, command: list[str], config: dict) -> None:
    """Write rows as CSV or JSON (stdout or --out), deterministically."""
    out_format = args.format
    if out_format == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        if rows:
            fieldnames = list(rows[0].keys())
            writer.writerow(fieldnames)
            for row in rows:
                writer.writerow([fmt(row[k]) for k in fieldnames])
        payload = buffer.getvalue()
    elif out_format == "json":
        artifact = {"command": command, "config": config, "rows": rows}
        payload = json.dumps(artifact, default=float) + "\n"
    else:
        raise DomainError(f"unknown format {args.format!r}")
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def make_label(args) -> states.StateLabel:
    return states.StateLabel(l=args.l, phi=args.phi, r=args.r, s=args.s)


def base_config(args, keys) -> dict:
    return {k: getattr(args, k) for k in keys}


# ---------------------------------------------------------------------------
# subcommand implementations
# ---------------------------------------------------------------------------

def cmd_theta(args) -> int:
    label = make_label(args)
    c = label.center
    tau_nat = 1j / math.pi
    tau_dual = 1j * math.pi
    shift = 0.0 if args.s == 0.0 else 0.5
    t3 = theta.theta3(1j * c / math.pi, tau_nat)
    t2 = theta.theta2(1j * c / math.pi, tau_nat)
    modular = math.exp(c * c) * math.sqrt(math.pi) * theta.theta3(c + shift, tau_dual)
    natural = t3 if args.s == 0.0 else t2
    rows = [
        {"quantity": "center", "value_re": c, "value_im": 0.0},
        {"quantity": "theta3_natural", "value_re": t3.real, "value_im": t3.imag},
        {"quantity": "theta2_natural", "value_re": t2.real, "value_im": t2.imag},
        {"quantity": "norm_modular_route", "value_re": modular.real, "value_im": modular.imag},
        {"quantity": "modular_residual",
         "value_re": abs(natural - modular) / max(1.0, abs(modular)), "value_im": 0.0},
        {"quantity": "logderiv_dual",
         "value_re": theta.theta3_logderiv(c + shift, tau_dual), "value_im": 0.0},
    ]
    emit(rows, args, ["theta"], base_config(args, ("l", "phi", "r", "s")))
    return 0


def cmd_cs(args) -> int:
    label = make_label(args)
    cfg_keys = ("l", "phi", "r", "s")
    if args.action == "expect-j":
        v1 = states.expect_j(label, method="ratio")
        v2 = states.expect_j(label, method="theta")
        v3 = states.expect_j(label, method="series")
        rows = [{"expect_j": v2, "ratio_path": v1, "series_path": v3,
                 "max_spread": max(abs(v1 - v2), abs(v1 - v3), abs(v2 - v3))}]
    elif args.action == "expect-u":
        d = states.expect_u(label, method="direct")
        t = states.expect_u(label, method="theta")
        rows = [{"expect_u_re": t.real, "expect_u_im": t.imag, "expect_u_abs": abs(t),
                 "spread": abs(d - t)}]
    elif args.action == "norm2":
        rows = [{"norm2": states.norm2(label, method="theta"),
                 "direct_path": states.norm2(label, method="direct"),
                 "modular_path": states.norm2(label, method="modular")}]
    elif args.action == "distribution":
        if args.j is not None:
            levels = [args.j]
        else:
            levels = states.level_grid(states.default_j_max(label.center), label.s)
        rows = [{"j": jj,
                 "probability": states.distribution(label, jj),
                 "gaussian": states.gaussian_distribution(jj, label.center)}
                for jj in levels]
        for row in rows:
            row["deviation"] = abs(row["probability"] - row["gaussian"])
    elif args.action == "overlap":
        other = states.StateLabel(l=args.l2, phi=args.phi2, r=args.r, s=args.s)
        direct = states.overlap(label, other, method="direct")
        closed = states.overlap(label, other, method="theta")
        rows = [{"overlap_re": closed.real, "overlap_im": closed.imag,
                 "spread": abs(direct - closed)}]
        cfg_keys = ("l", "phi", "r", "s", "l2", "phi2")
    elif args.action == "coeffs":
        v = states.build_cs(label, j_max=args.j_max)
        rows = [{"j": jj, "c_re": cc.real, "c_im": cc.imag}
                for jj, cc in zip(v.j, v.c)]
    elif args.action == "quantize":
        roots = states.quantization_scan(args.r, args.l, args.s)
        rows = []
        for phi in roots:
            lab = states.StateLabel(l=args.l, phi=phi, r=args.r, s=args.s)
            rows.append({"phi": phi, "center": lab.center,
                         "expect_j": states.expect_j(lab, method="ratio")})
    elif args.action == "fidelity":
        rows = [{"t": args.t,
                 "fidelity": states.temporal_fidelity(label, args.t, L0=args.L0)}]
        cfg_keys = ("l", "phi", "r", "s", "t", "L0")
    else:
        raise DomainError(f"unknown cs action {args.action!r}")
    emit(rows, args, ["cs", args.action], base_config(args, cfg_keys))
    return 0


def cmd_spectrum(args) -> int:
    levels = np.arange(-math.floor(args.j_max), math.floor(args.j_max) + 1) + args.s
    levels = levels[np.abs(levels) <= args.j_max]
    rows = []
    for j in levels:
        general = dynamics.energy_spectrum(float(j), args.L0, args.phi, args.r)
        rows.append({"j": float(j), "L0": args.L0,
                     "E": general.E,
                     "E_border": dynamics.energy_quantized(float(j), args.L0, args.r)})
    emit(rows, args, ["spectrum"], base_config(args, ("r", "s", "j_max", "L0", "phi")))
    return 0


def cmd_dynamics(args) -> int:
    phi_dot = dynamics.mobius_phidot(args.j, args.L0, args.phi, args.r)
    z0_dot = args.L0 + 0.5 * args.r * math.cos(0.5 * args.phi) * phi_dot
    s0 = dynamics.MobiusState(phi=args.phi, phi_dot=phi_dot, z0=args.z0, z0_dot=z0_dot)
    traj = dynamics.integrate_mobius(s0, args.r, t_end=args.t_end, dt=args.dt,
                                     energy_tol=args.tol)
    cols = traj.columns()
    names = list(dynamics.TRAJECTORY_COLUMNS)
    rows = [dict(zip(names, values)) for values in zip(*(cols[n] for n in names))]
    emit(rows, args, ["dynamics"],
         base_config(args, ("phi", "j", "L0", "z0", "r", "t_end", "dt", "tol")))
    return 0


def cmd_project(args) -> int:
    spec = projection.ProjectionSpec(theta=args.theta, phi=args.phi, delta=args.delta)
    ind = projection.universal_projector(spec, method="indicator")
    quad_val = projection.universal_projector(spec, method="quadrature")
    rows = [{
        "defect": spec.argument,
        "delta": args.delta,
        "indicator": ind,
        "quadrature": quad_val,
        "difference": abs(ind - quad_val),
    }]
    emit(rows, args, ["project"], base_config(args, ("theta", "phi", "delta")))
    return 0


def cmd_verify(args) -> int:
    checks = report.run_suite(args.suite)
    rows = [c.row() for c in checks]
    emit(rows, args, ["verify"], {"suite": args.suite})
    failed = [c for c in checks if not c.passed]
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{status} {c.check}: max_error={fmt(c.max_error)} tol={fmt(c.tolerance)}",
              file=sys.stderr)
    return 1 if failed else 0


_GRID_PART = re.compile(r"^(\w+)=([^:]+):([^:]+):(\d+)$")


def parse_grid(spec: str) -> list[tuple[str, np.ndarray]]:
    """Parse 'var=start:stop:count[,var=...]' into (name, values) pairs.

    Endpoints are inclusive; count is the number of points; count 0 gives an
    empty axis (and an empty sweep).
    """
    axes = []
    for part in spec.split(","):
        m = _GRID_PART.match(part.strip())
        if not m:
            raise DomainError(f"cannot parse grid component {part!r}")
        name, lo_s, hi_s, count_s = m.groups()
        name = name.replace("-", "_")
        if name not in PARAM_PARSERS:
            raise DomainError(f"unknown sweep variable {name!r}")
        caster = PARAM_PARSERS[name]
        lo, hi, count = caster(lo_s), caster(hi_s), int(count_s)
        axes.append((name, np.linspace(lo, hi, count)))
    return axes


SWEEP_TARGETS = ("expect-j", "expect-u", "norm2", "gaussian-supnorm", "energy", "projector")


def _sweep_eval(target: str, params: dict) -> dict:
    if target in ("expect-j", "expect-u", "norm2", "gaussian-supnorm"):
        label = states.StateLabel(l=params["l"], phi=params["phi"],
                                  r=params["r"], s=params["s"])
        if target == "expect-j":
            return {"expect_j": states.expect_j(label, method="ratio")}
        if target == "expect-u":
            val = states.expect_u(label, method="theta")
            return {"expect_u_re": val.real, "expect_u_im": val.imag}
        if target == "norm2":
            return {"norm2": states.norm2(label, method="theta")}
        levels = states.level_grid(states.default_j_max(label.center), label.s)
        sup = max(abs(states.distribution(label, jj)
                      - states.gaussian_distribution(jj, label.center))
                  for jj in levels)
        return {"supnorm": sup}
    if target == "energy":
        entry = dynamics.energy_spectrum(params["j"], params["L0"],
                                         params["phi"], params["r"])
        return {"E": entry.E}
    if target == "projector":
        spec = projection.ProjectionSpec(theta=params["theta"], phi=params["phi"],
                                         delta=params["delta"])
        return {"indicator": projection.universal_projector(spec, method="indicator")}
    raise DomainError(f"unknown sweep target {target!r}")


def cmd_sweep(args) -> int:
    axes = parse_grid(args.grid)
    base = {"l": args.l, "phi": args.phi, "r": args.r, "s": args.s,
            "j": args.j, "L0": args.L0, "theta": args.theta, "delta": args.delta}

    names = [name for name, _ in axes]
    value_lists = [vals for _, vals in axes]
    points = [()]
    for vals in value_lists:
        points = [p + (v,) for p in points for v in vals]

    def one(point):
        params = dict(base)
        params.update(dict(zip(names, point)))
        row = {name: params[name] for name in names}
        try:
            row.update(_sweep_eval(args.target, params))
            row["error"] = ""
        except Exception as exc:  # per-row failure is recorded, not fatal
            row["error"] = f"{type(exc).__name__}: {exc}"
        return row

    workers = args.workers
    if workers > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, points))
    else:
        rows = [one(p) for p in points]

    # column layout must not depend on which rows failed
    value_keys = sorted({k for row in rows for k in row} - set(names) - {"error"})
    rows = [{k: row.get(k, "") for k in (*names, *value_keys, "error")} for row in rows]
    emit(rows, args, ["sweep", args.target],
         {"target": args.target, "grid": args.grid, **base, "workers": workers})
    return 1 if any(row["error"] for row in rows) else 0


def cmd_run(args) -> int:
    data = load_config(args.config)
    if "command" not in data:
        raise DomainError("artifact has no 'command' entry; cannot re-run")
    command = data["command"]
    cfg = data.get("config", {})
    argv = list(command)
    for key, value in cfg.items():
        if key in ("target", "action"):  # already part of the command words
            continue
        argv.extend([f"--{key.replace('_', '-')}",
                     fmt(value) if not isinstance(value, str) else value])
    if args.out:
        argv.extend(["--out", args.out])
    argv.extend(["--format", args.format])
    return main(argv)


# ---------------------------------------------------------------------------
# parser wiring
# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser, *, label=False, out=True) -> None:
    if label:
        p.add_argument("--l", type=float, default=0.0, help="axial label l")
        p.add_argument("--phi", type=parse_angle, default=0.0,
                       help="angle (accepts 'pi', '3pi', 'pi/2', floats)")
        p.add_argument("--r", type=float, default=0.5, help="strip half-width")
        p.add_argument("--s", type=parse_offset, default=0.0,
                       help="basis offset: 'int' or 'half'")
    if out:
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--config", default=None,
                       help="config file (key=value lines or a JSON artifact)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mobiuscs", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("theta", help="theta engine values at a label")
    _add_common(p, label=True)
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("cs", help="coherent-state quantities")
    p.add_argument("action", choices=(
        "expect-j", "expect-u", "norm2", "distribution", "overlap",
        "coeffs", "quantize", "fidelity"))
    _add_common(p, label=True)
    p.add_argument("--j", type=float, default=None, help="basis level")
    p.add_argument("--j-max", dest="j_max", type=float, default=None)
    p.add_argument("--l2", type=float, default=0.0, help="second label l (overlap)")
    p.add_argument("--phi2", type=parse_angle, default=0.0, help="second label angle")
    p.add_argument("--t", type=float, default=1.0, help="evolution time (fidelity)")
    p.add_argument("--L0", type=float, default=0.0)
    p.set_defaults(func=cmd_cs)

    p = sub.add_parser("spectrum", help="level energies")
    _add_common(p, label=True)
    p.add_argument("--j-max", dest="j_max", type=float, default=3.0)
    p.add_argument("--L0", type=float, default=0.0)
    p.set_defaults(func=cmd_spectrum, phi=math.pi)

    p = sub.add_parser("dynamics", help="integrate a strip trajectory")
    _add_common(p, label=True)
    p.add_argument("--j", type=float, default=1.0, help="initial angular momentum")
    p.add_argument("--L0", type=float, default=0.0, help="axial momentum")
    p.add_argument("--z0", type=float, default=0.0, help="initial axial position")
    p.add_argument("--t-end", dest="t_end", type=float, default=10.0)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--tol", type=float, default=1e-6, help="energy-drift acceptance")
    p.set_defaults(func=cmd_dynamics)

    p = sub.add_parser("project", help="universal constraint-window projector")
    _add_common(p)
    p.add_argument("--theta", type=parse_angle, required=False, default=0.0)
    p.add_argument("--phi", type=parse_angle, default=0.0)
    p.add_argument("--delta", type=float, default=0.1)
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("verify", help="identity-verification suites")
    _add_common(p)
    p.add_argument("--suite", default="all",
                   choices=("theta", "states", "dynamics", "projection", "all"))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="Cartesian parameter sweep")
    p.add_argument("target", choices=SWEEP_TARGETS)
    _add_common(p, label=True)
    p.add_argument("--grid", required=True,
                   help="axes as 'var=start:stop:count[,var=...]' (inclusive)")
    p.add_argument("--j", type=float, default=0.5)
    p.add_argument("--L0", type=float, default=0.0)
    p.add_argument("--theta", type=parse_angle, default=0.0)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--workers", type=int,
                   default=int(os.environ.get(WORKERS_ENV, "1")))
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("run", help="re-run from a config or JSON artifact")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_run)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command != "run":
            sub_parser = None
            for action in parser._actions:
                if isinstance(action, argparse._SubParsersAction):
                    sub_parser = action.choices[args.command]
            apply_config(args, sub_parser)
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PrecisionError as exc:
        print(f"precision failure: {exc} (achieved {exc.achieved})", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
