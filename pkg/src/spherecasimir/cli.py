"""Batch command-line interface.

Commands: ``energy``, ``capacitance``, ``expand``, ``verify`` and ``sweep``.
Geometry is given either as ``--R1 --R2 --L`` (common length unit) or as
``--mu --u``.  Exit codes: 0 success, 2 usage, 3 degenerate geometry,
4 non-convergence, 5 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Iterable

import numpy as np

from . import __version__
from .asymptotics import delta_short_distance, epsilon_delta, gamma_constants
from .errors import (
    DegenerateGeometryError,
    InvalidGeometryError,
    SeriesStalledError,
    VerificationError,
)
from .geometry import GeometryDerived, SphereGeometry, derive_parameters, geometry_from_mu
from .monopole import capacitance_matrix, free_energy_z_form, monopole_delta
from .oracle import (
    block_determinant_closed,
    block_determinant_direct,
    cyclic_matrix_determinant,
    delta_r_enumeration,
    delta_r_recursion,
    generating_function_residual,
)
from .scalar import (
    dirichlet_cyclic_determinant,
    dirichlet_expansion_coefficient,
    dirichlet_free_energy_multipole,
    dirichlet_free_energy_roundtrip,
    dirichlet_short_distance,
)
from .series import MAX_TERMS

EXIT_OK, EXIT_USAGE, EXIT_DEGENERATE, EXIT_STALLED, EXIT_VERIFY = 0, 2, 3, 4, 5

REPRESENTATIONS = ("auto", "roundtrip", "multipole", "closed_form", "asymptotic")
CSV_COLUMNS = (
    "R1", "R2", "L", "mu", "u", "Z",
    "phi_D", "phi_delta", "phi_total",
    "c11", "c22", "c12",
    "rep", "terms", "est_err",
)
AUTO_ASYMPTOTIC_MU = 0.02
AUTO_ROUNDTRIP_MU = 1.0


class UsageError(Exception):
    pass


# --- formatting -----------------------------------------------------------------


def fmt(x: Any) -> str:
    if isinstance(x, float):
        return f"{x:.17g}" if math.isfinite(x) else ""
    return str(x)


def _json_ready(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {k: _json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_ready(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return f"\x00{x:.17g}\x00" if math.isfinite(x) else None
    return obj


def to_json(obj: Any, indent: int | None = 2) -> str:
    """JSON with every float written to 17 significant digits; non-finite -> null."""
    text = json.dumps(_json_ready(obj), indent=indent)
    return re.sub(r'"\\u0000([^"\\]*)\\u0000"', r"\1", text)


# --- geometry handling ----------------------------------------------------------


def geometry_from_args(args: argparse.Namespace, allow_partial: bool = False) -> GeometryDerived | None:
    radii = [args.R1, args.R2, args.L]
    natural = [args.mu, args.u]
    has_radii = any(v is not None for v in radii)
    has_natural = any(v is not None for v in natural)
    if has_radii and has_natural:
        raise UsageError("give either --R1/--R2/--L or --mu/--u, not both")
    if has_radii:
        if any(v is None for v in radii):
            raise UsageError("--R1, --R2 and --L must all be given")
        return derive_parameters(SphereGeometry(*radii))
    if has_natural:
        if any(v is None for v in natural):
            if allow_partial:
                return None
            raise UsageError("--mu and --u must both be given")
        return geometry_from_mu(args.mu, args.u)
    if allow_partial:
        return None
    raise UsageError("no geometry given")


def with_separation(geom: GeometryDerived, L: float) -> GeometryDerived:
    if geom.is_sphere_plane:
        return geometry_from_mu(math.log1p(L + math.sqrt(L * (2.0 + L))), 0.0)
    return derive_parameters(SphereGeometry(geom.R1, geom.R2, L))


def choose_representation(rep: str, mu: float) -> str:
    if rep != "auto":
        return rep
    if mu < AUTO_ASYMPTOTIC_MU:
        return "asymptotic"
    if mu < AUTO_ROUNDTRIP_MU:
        return "roundtrip"
    return "multipole"


# --- evaluation -----------------------------------------------------------------


def evaluate_energy(geom: GeometryDerived, rep: str, tol: float, max_terms: int) -> dict[str, Any]:
    """Phi_D, Phi_Delta and Phi_total along the chosen representation."""
    path = choose_representation(rep, geom.mu)
    if path == "asymptotic":
        sd = delta_short_distance(geom.u, geom.mu, 1 if geom.v0 >= 0 else -1)
        phi_d = dirichlet_short_distance(geom.mu, 2)
        err_d = abs(dirichlet_expansion_coefficient(3)) * geom.mu**6
        return {
            "rep": path,
            "phi_D": phi_d,
            "phi_delta": sd.mercator,
            "phi_total": phi_d + sd.mercator,
            "terms": 0,
            "est_err": err_d + sd.next_order,
        }
    if path == "closed_form":
        zf = free_energy_z_form(geom, tol, max_terms)
        d, delta = zf.phi_D, zf.phi_delta
    else:
        if path == "roundtrip":
            d = dirichlet_free_energy_roundtrip(geom, tol, max_terms)
        elif path == "multipole":
            d = dirichlet_free_energy_multipole(geom, tol, max_terms)
        else:
            raise UsageError(f"unknown representation {rep!r}")
        delta = monopole_delta(geom, tol, max_terms)
    total = d.value + delta.value
    return {
        "rep": path,
        "phi_D": d.value,
        "phi_delta": delta.value,
        "phi_total": total,
        "terms": d.terms_used + delta.terms_used,
        "terms_D": d.terms_used,
        "terms_delta": delta.terms_used,
        "est_err": max(abs(d.last_term), abs(delta.last_term)),
    }


def force_proxy(geom: GeometryDerived, rep: str, tol: float, max_terms: int) -> tuple[float, float]:
    """-dPhi/dL by central differences with step cbrt(machine eps) * L."""
    h = np.cbrt(np.finfo(float).eps) * geom.L
    up = evaluate_energy(with_separation(geom, geom.L + h), rep, tol, max_terms)["phi_total"]
    down = evaluate_energy(with_separation(geom, geom.L - h), rep, tol, max_terms)["phi_total"]
    return -(up - down) / (2.0 * h), float(h)


def geometry_record(geom: GeometryDerived) -> dict[str, Any]:
    return {
        "R1": geom.R1, "R2": geom.R2, "L": geom.L,
        "mu": geom.mu, "u": geom.u, "Z": geom.Z, "y": geom.y, "v0": geom.v0,
    }


def sweep_row(task: tuple[dict[str, float], str, float, int]) -> dict[str, Any]:
    point, rep, tol, max_terms = task
    if "mu" in point:
        geom = geometry_from_mu(point["mu"], point["u"])
    else:
        geom = derive_parameters(SphereGeometry(point["R1"], point["R2"], point["L"]))
    res = evaluate_energy(geom, rep, tol, max_terms)
    row = {k: v for k, v in geometry_record(geom).items() if k in CSV_COLUMNS}
    if geom.is_sphere_plane:
        row.update(c11=math.inf, c22=math.inf, c12=math.inf)
    else:
        cap = capacitance_matrix(SphereGeometry(geom.R1, geom.R2, geom.L), tol, max_terms)
        row.update(c11=cap.c11, c22=cap.c22, c12=cap.c12)
    row.update({k: res[k] for k in ("phi_D", "phi_delta", "phi_total", "rep", "terms", "est_err")})
    return {k: row[k] for k in CSV_COLUMNS}


# --- verification -----------------------------------------------------------------


def run_verification(geom: GeometryDerived, tol: float, max_terms: int) -> list[dict[str, Any]]:
    """Oracle cross-checks at one geometry; each entry has name, deviation, limit, passed."""
    checks: list[tuple[str, float, float]] = []

    def rel(a: float, b: float) -> float:
        return abs(a - b) / max(abs(b), 1e-300)

    rt = dirichlet_free_energy_roundtrip(geom, tol * 1e-3, max_terms).value
    mp = dirichlet_free_energy_multipole(geom, tol * 1e-3, max_terms).value
    checks.append(("dirichlet roundtrip vs multipole", rel(rt, mp), 1e-11))
    zf = free_energy_z_form(geom, 1e-15, max_terms).value
    composed = mp + monopole_delta(geom, 1e-15, max_terms).value
    checks.append(("Z-form vs Phi_D + Phi_Delta", rel(zf, composed), 1e-10))
    if not geom.is_sphere_plane:
        checks.append(
            ("max |enumeration - recursion|, r <= 6",
             max(rel(delta_r_enumeration(r, geom), delta_r_recursion(r, geom)) for r in range(1, 7)),
             1e-12)
        )
        checks.append(
            ("cyclic det vs closed form, r <= 8",
             max(rel(cyclic_matrix_determinant(r, s, geom), dirichlet_cyclic_determinant(r, s, geom))
                 for r in range(1, 9) for s in "+-"),
             1e-10)
        )
        checks.append(
            ("block det vs Chebyshev form, n <= 20",
             max(rel(block_determinant_direct(n, c, [1] * (n - 1), geom), block_determinant_closed(n, c, geom))
                 for n in range(1, 21) for c in (1, 2)),
             1e-10)
        )
        checks.append(("generating function identity", generating_function_residual(geom), 1e-12))
    return [
        {"check": name, "max_deviation": dev, "limit": lim, "passed": bool(dev < lim)}
        for name, dev, lim in checks
    ]


# --- grid parsing -----------------------------------------------------------------

GRID_NAMES = ("R1", "R2", "L", "mu", "u")


def parse_grid(spec: str) -> tuple[str, list[float]]:
    """``NAME=v1,v2,...`` or ``NAME=start:stop:count`` (linear, endpoints included)."""
    if "=" not in spec:
        raise UsageError(f"grid spec {spec!r} must look like NAME=values")
    name, values = spec.split("=", 1)
    name = name.strip()
    if name not in GRID_NAMES:
        raise UsageError(f"grid parameter must be one of {GRID_NAMES}, got {name!r}")
    try:
        if ":" in values:
            start, stop, count = values.split(":")
            pts = np.linspace(float(start), float(stop), int(count)).tolist()
        else:
            pts = [float(v) for v in values.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse grid {spec!r}: {exc}") from None
    if not pts:
        raise UsageError(f"grid {spec!r} is empty")
    return name, pts


def sweep_points(args: argparse.Namespace) -> list[dict[str, float]]:
    axes = [parse_grid(g) for g in args.grid]
    names = [n for n, _ in axes]
    if len(set(names)) != len(names):
        raise UsageError("each grid parameter may appear once")
    fixed = {n: getattr(args, n) for n in GRID_NAMES if getattr(args, n) is not None and n not in names}
    keys = set(names) | set(fixed)
    if keys == {"R1", "R2", "L"} or keys == {"mu", "u"}:
        pass
    else:
        raise UsageError("sweep needs exactly R1, R2, L or mu, u between --grid and fixed flags")
    return [dict(fixed, **dict(zip(names, combo))) for combo in itertools.product(*(p for _, p in axes))]


# --- output -----------------------------------------------------------------------


def emit_table(rows: Iterable[dict[str, Any]], columns: Iterable[str], out, fmt_name: str) -> None:
    columns = list(columns)
    if fmt_name == "json":
        for row in rows:
            out.write(to_json(row, indent=None) + "\n")
        return
    if fmt_name == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([fmt(row[c]) for c in columns])
        return
    out.write(" ".join(columns) + "\n")
    for row in rows:
        out.write(" ".join(fmt(row[c]) or "-" for c in columns) + "\n")


def emit_report(report: dict[str, Any], out, fmt_name: str) -> None:
    if fmt_name == "json":
        out.write(to_json(report) + "\n")
        return
    flat = _flatten(report)
    if fmt_name == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(list(flat))
        writer.writerow([fmt(v) for v in flat.values()])
        return
    width = max(len(k) for k in flat)
    for k, v in flat.items():
        out.write(f"{k:<{width}}  {fmt(v)}\n")


def _flatten(d: dict[str, Any], prefix: str = "") -> dict[str, Any]:
    flat: dict[str, Any] = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            flat.update(_flatten(v, key + "."))
        elif isinstance(v, list):
            for i, item in enumerate(v):
                if isinstance(item, dict):
                    flat.update(_flatten(item, f"{key}.{i}."))
                else:
                    flat[f"{key}.{i}"] = item
        else:
            flat[key] = v
    return flat


# --- commands -------------------------------------------------------------------


def provenance(tol: float, rep: str, terms: Any) -> dict[str, Any]:
    return {"tolerance": tol, "representation": rep, "terms": terms, "version": f"spherecasimir {__version__}"}


def cmd_energy(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    geom = geometry_from_args(args)
    res = evaluate_energy(geom, args.rep, args.tol, args.max_terms)
    report: dict[str, Any] = {"command": "energy", "geometry": geometry_record(geom)}
    report.update({k: res[k] for k in ("phi_D", "phi_delta", "phi_total", "est_err")})
    if res["rep"] != "asymptotic":
        report["phi_D_roundtrip"] = dirichlet_free_energy_roundtrip(geom, args.tol, args.max_terms).value
        report["phi_D_multipole"] = dirichlet_free_energy_multipole(geom, args.tol, args.max_terms).value
    if args.force:
        f, h = force_proxy(geom, args.rep, args.tol, args.max_terms)
        report["force"] = {"minus_dphi_dL": f, "step": h}
    terms = {k: res[k] for k in ("terms_D", "terms_delta") if k in res} or res["terms"]
    report["provenance"] = provenance(args.tol, res["rep"], terms)
    return report, EXIT_OK


def cmd_capacitance(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    geom = geometry_from_args(args)
    if geom.is_sphere_plane:
        raise UsageError("capacitance needs two finite spheres (u > 0)")
    cap = capacitance_matrix(SphereGeometry(geom.R1, geom.R2, geom.L), args.tol, args.max_terms)
    report = {
        "command": "capacitance",
        "geometry": geometry_record(geom),
        "c11": cap.c11,
        "c22": cap.c22,
        "c12": cap.c12,
        "det": cap.det,
        "provenance": provenance(args.tol, "series", None),
    }
    return report, EXIT_OK


def cmd_expand(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    geom = geometry_from_args(args, allow_partial=True)
    if geom is None:
        if args.u is None:
            raise UsageError("expand needs --u, --mu/--u or --R1/--R2/--L")
        u, mu, sign = args.u, args.mu, 1
    else:
        u, mu, sign = geom.u, geom.mu, 1 if geom.v0 >= 0 else -1
    co = epsilon_delta(u, sign)
    names = ("eps0", "del0", "eps1", "del1", "eps2", "del2")
    report: dict[str, Any] = {"command": "expand", "u": u}
    report["coefficients"] = dict(zip(names, co.as_row()))
    report["gamma"] = dict(zip(("gamma1", "gamma2", "gamma3", "gamma4"), gamma_constants()))
    if mu is not None:
        sd = delta_short_distance(u, mu, sign)
        phi_d = dirichlet_short_distance(mu, 2)
        report["mu"] = mu
        report["phi_D"] = phi_d
        report["phi_delta"] = sd.mercator
        report["phi_delta_log_form"] = sd.log_form
        report["phi_total"] = phi_d + sd.mercator
        report["est_err"] = sd.next_order + abs(dirichlet_expansion_coefficient(3)) * mu**6
        report["beyond_soft_bound"] = sd.beyond_soft_bound
    report["provenance"] = provenance(args.tol, "asymptotic", 0)
    return report, EXIT_OK


def cmd_verify(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    geom = geometry_from_args(args)
    checks = run_verification(geom, args.tol, args.max_terms)
    ok = all(c["passed"] for c in checks)
    report = {
        "command": "verify",
        "geometry": geometry_record(geom),
        "checks": checks,
        "passed": ok,
        "provenance": provenance(args.tol, "oracle", None),
    }
    return report, EXIT_OK if ok else EXIT_VERIFY


def run_sweep(args: argparse.Namespace, out) -> int:
    if not args.grid:
        raise UsageError("sweep needs at least one --grid")
    tasks = [(p, args.rep, args.tol, args.max_terms) for p in sweep_points(args)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(sweep_row, tasks))
    else:
        rows = [sweep_row(t) for t in tasks]
    emit_table(rows, CSV_COLUMNS, out, args.format)
    return EXIT_OK


# --- argument parsing ---------------------------------------------------------------


def _tolerance(text: str) -> float:
    value = float(text)
    if not 1e-15 <= value <= 1e-3:
        raise argparse.ArgumentTypeError("tolerance must lie in [1e-15, 1e-3]")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    geo = common.add_argument_group("geometry")
    geo.add_argument("--R1", type=float)
    geo.add_argument("--R2", type=float)
    geo.add_argument("--L", type=float)
    geo.add_argument("--mu", type=float)
    geo.add_argument("--u", type=float)
    common.add_argument("--tol", type=_tolerance, default=1e-12)
    common.add_argument("--max-terms", type=int, default=MAX_TERMS)
    common.add_argument("--rep", choices=REPRESENTATIONS, default="auto")
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--out", help="write the report to this path instead of stdout")

    parser = argparse.ArgumentParser(
        prog="spherecasimir",
        description="Classical Casimir free energy of two Drude spheres (units of k_B T / 2).",
    )
    parser.add_argument("--version", action="version", version=f"spherecasimir {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    energy = sub.add_parser("energy", parents=[common], help="free energy at one geometry")
    energy.add_argument("--force", action="store_true", help="also report -dPhi/dL")
    sub.add_parser("capacitance", parents=[common], help="capacitance matrix")
    sub.add_parser("expand", parents=[common], help="short-distance expansion coefficients")
    sub.add_parser("verify", parents=[common], help="run the oracle cross-checks")
    sweep = sub.add_parser("sweep", parents=[common], help="evaluate a geometry grid")
    sweep.add_argument("--grid", action="append", default=[], help="NAME=v1,v2 or NAME=start:stop:count")
    sweep.add_argument("--jobs", type=int, default=1)
    return parser


COMMANDS = {
    "energy": cmd_energy,
    "capacitance": cmd_capacitance,
    "expand": cmd_expand,
    "verify": cmd_verify,
}


def run(argv: list[str] | None = None, stdout=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    stdout = stdout or sys.stdout
    buf = io.StringIO()
    try:
        if args.command == "sweep":
            status = run_sweep(args, buf)
        else:
            report, status = COMMANDS[args.command](args)
            emit_report(report, buf, args.format)
    except (UsageError, InvalidGeometryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DegenerateGeometryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except SeriesStalledError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STALLED
    except VerificationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(buf.getvalue())
    else:
        stdout.write(buf.getvalue())
    return status


def main() -> None:
    sys.exit(run())
