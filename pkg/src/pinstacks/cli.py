"""Command-line front end: every capability as a subcommand with file outputs.

Subcommands
-----------
greens           evaluate the quasi-periodic Green's function at one point
matrix           assemble the triplet mode matrix and its eigensystem
dispersion-grid  dispersion-factor residuals over an (alpha0, beta) box
spectrum         transmittance / reflectance scan of a pin stack
steer            run the resonance-steering pipeline over angles

Conventions
-----------
All lengths are in units of the grating period (d = 1); angles on the command
line are in degrees.  Single-point diagnostics print JSON; scans print CSV
(``--format json`` switches to a JSON row list).  With ``--out`` the result
goes to that file and the exact parsed parameters are echoed alongside it as
``<out>.config.json``; ``--config`` re-runs such an echo, reproducing the
output.  Outputs are deterministic; the timestamp header is suppressed by
``--no-timestamp``.

Exit codes: 0 success, 2 numeric-domain error (light lines, invalid
geometry), 3 search failure (optimization or refinement did not converge).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .errors import DomainError, SearchError
from .greens import DEFAULT_POLICY, SpectralPoint, TruncationPolicy, greens
from .modes import (
    StackGeometry,
    assemble,
    dispersion_grid,
    dispersion_residual,
    eigensystem,
    locate_crossing,
)
from .scattering import PinStack, spectrum_scan
from .steering import feature_scan, q_factor, steer

TABLE1_ANGLES_DEG = [0.0, 3.0, 6.0, 9.0, 12.0, 15.0, 18.0, 21.0,
                     24.0, 27.0, 30.0, 33.0, 36.0, 45.0, 60.0]

_STEER_COLUMNS = ["theta_deg", "beta_g", "alpha0_g", "eta_star", "m_eff",
                  "beta_odd", "beta_even", "xi_edit", "beta_edit",
                  "q_notch", "q_pair", "error"]


def _policy(args: argparse.Namespace) -> TruncationPolicy:
    return TruncationPolicy(n_self=args.n_self, n_far=args.n_far)


def _alpha0_of(args: argparse.Namespace, beta: float) -> float:
    if args.alpha0 is not None:
        return args.alpha0
    return beta * math.sin(math.radians(args.theta))


def _timestamp() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _complex_json(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


def _config_echo(args: argparse.Namespace) -> dict:
    params = {k: v for k, v in vars(args).items()
              if k not in ("func", "config", "subcommand")}
    return {"subcommand": args.subcommand, "args": params}


def _emit(text: str, args: argparse.Namespace) -> None:
    if args.out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)
    echo = Path(str(out) + ".config.json")
    echo.write_text(json.dumps(_config_echo(args), indent=2, sort_keys=True) + "\n")


def _emit_json(payload: dict, args: argparse.Namespace) -> None:
    if not args.no_timestamp:
        payload = {"generated": _timestamp(), **payload}
    _emit(json.dumps(payload, indent=2) + "\n", args)


def _emit_rows(rows: list[dict], columns: list[str], args: argparse.Namespace,
               trailer: str | None = None) -> None:
    if args.format == "json":
        payload = {"rows": rows}
        if trailer:
            payload["note"] = trailer
        _emit_json(payload, args)
        return
    buf = io.StringIO()
    if not args.no_timestamp:
        buf.write(f"# generated {_timestamp()}\n")
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n",
                            extrasaction="ignore", restval="")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    if trailer:
        buf.write(f"# {trailer}\n")
    _emit(buf.getvalue(), args)


def _emit_table(rows: list[dict], columns: list[str],
                args: argparse.Namespace) -> None:
    """Aligned human-readable table (steer --format table)."""
    def cell(v) -> str:
        if v is None or v == "":
            return "-"
        if isinstance(v, float):
            return f"{v:.9g}"
        return str(v)

    text_rows = [[cell(r.get(c, "")) for c in columns] for r in rows]
    widths = [max(len(c), *(len(tr[i]) for tr in text_rows)) if text_rows
              else len(c) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip()]
    for tr in text_rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(tr, widths)).rstrip())
    _emit("\n".join(lines) + "\n", args)


def _add_shared(p: argparse.ArgumentParser, *, incidence: bool = True,
                required_incidence: bool = True,
                formats: tuple[str, ...] = ("csv", "json")) -> None:
    if incidence:
        g = p.add_mutually_exclusive_group(required=required_incidence)
        g.add_argument("--alpha0", type=float,
                       help="Bloch parameter alpha0 (fixed along scans)")
        g.add_argument("--theta", type=float,
                       help="incidence angle in degrees (alpha0 = beta sin "
                            "theta re-derived per beta along scans)")
    p.add_argument("--n-self", type=int, default=DEFAULT_POLICY.n_self,
                   help="truncation window on the source line "
                        "(default %(default)s)")
    p.add_argument("--n-far", type=int, default=DEFAULT_POLICY.n_far,
                   help="truncation window off the source line "
                        "(default %(default)s)")
    p.add_argument("--out", help="write output to this file (and echo the "
                                 "config to <out>.config.json)")
    p.add_argument("--format", choices=list(formats), default=formats[0],
                   help="output format (default %(default)s)")
    p.add_argument("--no-timestamp", action="store_true",
                   help="omit the generated-at header for byte-identical "
                        "reruns")


def cmd_greens(args: argparse.Namespace) -> int:
    policy = _policy(args)
    alpha0 = _alpha0_of(args, args.beta)
    point = SpectralPoint(alpha0, args.beta)
    n_terms = args.n
    if n_terms is None:
        n_terms = policy.n_self if args.y == 0.0 else policy.n_far
    value = greens(point, args.x, args.y, policy, n_terms=n_terms)
    half = greens(point, args.x, args.y, policy, n_terms=max(n_terms // 2, 1))
    _emit_json({
        "alpha0": alpha0,
        "beta": args.beta,
        "x": args.x,
        "y": args.y,
        "n_terms": n_terms,
        "value": _complex_json(value),
        "convergence_estimate": abs(value - half),
    }, args)
    return 0


def cmd_matrix(args: argparse.Namespace) -> int:
    policy = _policy(args)
    alpha0 = _alpha0_of(args, args.beta)
    geometry = StackGeometry(eta=args.eta, xi=args.xi)
    m = assemble(SpectralPoint(alpha0, args.beta), geometry, policy)
    es = eigensystem(m)
    r = dispersion_residual(m)
    _emit_json({
        "alpha0": alpha0,
        "beta": args.beta,
        "eta": args.eta,
        "xi": args.xi,
        "entries": {
            "m11": _complex_json(m.m11), "m12": _complex_json(m.m12),
            "m13": _complex_json(m.m13), "m21": _complex_json(m.m21),
        },
        "eigenvalues": {
            "lambda_1": _complex_json(es.lambda_1),
            "lambda_minus": _complex_json(es.lambda_minus),
            "lambda_plus": _complex_json(es.lambda_plus),
        },
        "eigenvectors": {
            "v_odd": [_complex_json(c) for c in es.v_odd],
            "v_e_minus": [_complex_json(c) for c in es.v_e_minus],
            "v_e_plus": [_complex_json(c) for c in es.v_e_plus],
        },
        "dispersion": {
            "odd": r.odd, "even": r.even,
            "log10_odd": r.log10_odd, "log10_even": r.log10_even,
        },
    }, args)
    return 0


def cmd_dispersion_grid(args: argparse.Namespace) -> int:
    policy = _policy(args)
    geometry = StackGeometry(eta=args.eta, xi=args.xi)
    alpha0_values = np.linspace(args.alpha0_min, args.alpha0_max,
                                args.alpha0_steps)
    beta_values = np.linspace(args.beta_min, args.beta_max, args.beta_steps)
    rows = dispersion_grid(alpha0_values, beta_values, geometry, policy)
    trailer = None
    if args.crossing:
        ca, cb = locate_crossing(rows)
        trailer = f"crossing alpha0={ca:.9g} beta={cb:.9g}"
    _emit_rows(rows, ["alpha0", "beta", "log10_odd", "log10_even", "status"],
               args, trailer=trailer)
    return 0


def _build_stack(args: argparse.Namespace) -> PinStack:
    if args.stack == "single":
        return PinStack.single()
    if args.stack == "empty":
        return PinStack(pins=())
    if args.eta is None:
        raise DomainError(f"--eta is required for --stack {args.stack}")
    if args.stack == "pair":
        return PinStack.pair(args.eta)
    return PinStack.triplet(args.eta, args.xi)


def cmd_spectrum(args: argparse.Namespace) -> int:
    policy = _policy(args)
    stack = _build_stack(args)
    theta = math.radians(args.theta) if args.theta is not None else None
    records = spectrum_scan(
        stack, (args.beta_min, args.beta_max),
        theta_i=theta, alpha0=args.alpha0,
        resolution=args.resolution, policy=policy,
        refine=args.refine, refine_jump=args.refine_jump,
    )
    orders: set[int] = set()
    if args.per_order:
        for rec in records:
            orders.update(rec.R_orders)
    order_cols = [f"{side}_{n}" for n in sorted(orders) for side in ("R", "T")]
    columns = ["beta", "alpha0", "T", "R", "energy_residual", "status"] + order_cols
    rows = []
    for rec in records:
        row = {"beta": rec.beta, "alpha0": rec.alpha0, "T": rec.T, "R": rec.R,
               "energy_residual": rec.energy_residual,
               "status": rec.error or "ok"}
        for n in sorted(orders):
            row[f"R_{n}"] = rec.R_orders.get(n, "")
            row[f"T_{n}"] = rec.T_orders.get(n, "")
        rows.append(row)
    _emit_rows(rows, columns, args)
    return 0


def _dump_angle_scans(res, results_dir: Path, policy: TruncationPolicy,
                      args: argparse.Namespace) -> None:
    """Per-angle notch / envelope scans next to the steer table."""
    if res.xi_edit is None or res.beta_edit is None:
        return
    theta = math.radians(res.theta_i) if res.theta_i else None
    stack = PinStack.triplet(res.eta_star, res.xi_edit)
    tag = f"theta{res.theta_i:g}"
    for name, records in [
        ("notch", feature_scan(stack, res.beta_edit, 1e-7, "notch", policy,
                               theta_i=theta)),
    ]:
        sub = argparse.Namespace(**{**vars(args),
                                    "out": str(results_dir / f"{tag}_{name}.csv"),
                                    "format": "csv"})
        rows = [{"beta": r.beta, "alpha0": r.alpha0, "T": r.T, "R": r.R}
                for r in records]
        _emit_rows(rows, ["beta", "alpha0", "T", "R"], sub)


def cmd_steer(args: argparse.Namespace) -> int:
    policy = _policy(args)
    if args.table1:
        degrees = TABLE1_ANGLES_DEG
    elif args.theta:
        degrees = args.theta
    else:
        raise DomainError("give at least one --theta angle or --table1")
    radians = [math.radians(t) for t in degrees]
    results = steer(radians, policy, m=args.m,
                    with_modes=not args.no_modes,
                    with_edit=args.with_edit or args.with_q,
                    with_q=args.with_q)
    rows = []
    for deg, res in zip(degrees, results):
        res.theta_i = deg          # report angles in degrees
        rows.append({
            "theta_deg": deg, "beta_g": res.beta_g, "alpha0_g": res.alpha0_g,
            "eta_star": res.eta_star, "m_eff": res.m_eff,
            "beta_odd": res.beta_odd, "beta_even": res.beta_even,
            "xi_edit": res.xi_edit, "beta_edit": res.beta_edit,
            "q_notch": res.q_notch, "q_pair": res.q_pair,
            "error": res.error or "",
        })
    if args.results_dir is not None:
        results_dir = Path(args.results_dir)
        results_dir.mkdir(parents=True, exist_ok=True)
        for res in results:
            _dump_angle_scans(res, results_dir, policy, args)
    if args.format == "table":
        _emit_table(rows, _STEER_COLUMNS, args)
    else:
        _emit_rows(rows, _STEER_COLUMNS, args)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pinstacks",
        description="Flexural plate waves on stacks of pinned gratings: "
                    "Green's function, trapped modes, scattering spectra, "
                    "and EDIT resonance steering.",
    )
    parser.add_argument("--config",
                        help="re-run from a config echo written by --out")
    sub = parser.add_subparsers(dest="subcommand")

    p = sub.add_parser("greens", help="evaluate the Green's function at one point")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--x", type=float, default=0.0)
    p.add_argument("--y", type=float, default=0.0)
    p.add_argument("--n", type=int, default=None,
                   help="override the truncation window for this evaluation")
    _add_shared(p, formats=("json",))
    p.set_defaults(func=cmd_greens)

    p = sub.add_parser("matrix", help="triplet mode matrix and eigensystem")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--xi", type=float, default=0.0)
    _add_shared(p, formats=("json",))
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("dispersion-grid",
                       help="dispersion residuals over an (alpha0, beta) box")
    p.add_argument("--alpha0-min", type=float, required=True)
    p.add_argument("--alpha0-max", type=float, required=True)
    p.add_argument("--alpha0-steps", type=int, default=41)
    p.add_argument("--beta-min", type=float, required=True)
    p.add_argument("--beta-max", type=float, required=True)
    p.add_argument("--beta-steps", type=int, default=41)
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--xi", type=float, default=0.0)
    p.add_argument("--crossing", action="store_true",
                   help="append the even/odd crossing estimate as a trailer")
    _add_shared(p, incidence=False)
    p.set_defaults(func=cmd_dispersion_grid)

    p = sub.add_parser("spectrum", help="transmittance scan of a pin stack")
    p.add_argument("--stack", choices=["single", "pair", "triplet", "empty"],
                   default="triplet")
    p.add_argument("--eta", type=float, help="grating separation (pair, triplet)")
    p.add_argument("--xi", type=float, default=0.0,
                   help="central-grating shift (triplet)")
    p.add_argument("--beta-min", type=float, required=True)
    p.add_argument("--beta-max", type=float, required=True)
    p.add_argument("--resolution", type=int, default=401)
    p.add_argument("--refine", action="store_true",
                   help="bisect intervals with transmittance jumps")
    p.add_argument("--refine-jump", type=float, default=0.1)
    p.add_argument("--per-order", action="store_true",
                   help="emit per-order R_n / T_n columns")
    _add_shared(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("steer", help="resonance-steering pipeline over angles")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--theta", type=float, nargs="+",
                   help="angles of incidence in degrees")
    g.add_argument("--table1", action="store_true",
                   help="run the fifteen tabulated angles 0..60 degrees")
    p.add_argument("--m", type=int, default=1, help="trapped-mode order")
    p.add_argument("--no-modes", action="store_true",
                   help="skip the unshifted even/odd resonance pair")
    p.add_argument("--with-edit", action="store_true",
                   help="tune the central-grating shift to the EDIT point")
    p.add_argument("--with-q", action="store_true",
                   help="measure notch and envelope Q factors (implies "
                        "--with-edit)")
    p.add_argument("--results-dir",
                   help="dump per-angle notch scans into this directory")
    _add_shared(p, incidence=False, formats=("csv", "json", "table"))
    p.set_defaults(func=cmd_steer)

    return parser


def _namespace_from_config(path: str,
                           parser: argparse.ArgumentParser) -> argparse.Namespace:
    with open(path) as f:
        saved = json.load(f)
    try:
        subcommand = saved["subcommand"]
        params = saved["args"]
    except (KeyError, TypeError):
        parser.error(f"{path} is not a config echo")
    funcs = {"greens": cmd_greens, "matrix": cmd_matrix,
             "dispersion-grid": cmd_dispersion_grid,
             "spectrum": cmd_spectrum, "steer": cmd_steer}
    if subcommand not in funcs:
        parser.error(f"unknown subcommand {subcommand!r} in {path}")
    return argparse.Namespace(config=None, subcommand=subcommand,
                              func=funcs[subcommand], **params)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config is not None:
        args = _namespace_from_config(args.config, parser)
    elif args.subcommand is None:
        parser.error("a subcommand is required unless --config is given")
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except SearchError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
