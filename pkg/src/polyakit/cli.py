"""Command-line front end: batch access to every capability, JSON or CSV out.

Subcommands
  coeffs       exact coefficient tables for any series family
  singularity  dominant-singularity constants with convergence diagnostics
  table        forest-size distribution tables, asymptotic and exact finite-n
  sample       seeded sampling experiments (decomposition stats, l_max growth)
  verify       the enumeration-vs-series equivalence matrix

Exit code 0 means every internal check passed; rationals are printed as
exact "p/q" strings, never floats.  POLYAKIT_ORDER overrides the default
truncation order used by the analytic commands.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict
from fractions import Fraction

from . import families
from .asymptotics import (DEFAULT_ORDER, decomposition_constants,
                          forest_asymptotics, solve_polya_singularity,
                          solve_variant_singularity)
from .families import OmegaSet
from .sampler import lmax_check, run_experiment
from .series import RationalSeries, UPoly
from .verify import run_verification

RESIDUAL_TOL = 1e-10
SHIFT_TOL = 1e-6


def _default_order() -> int:
    raw = os.environ.get("POLYAKIT_ORDER", "")
    return int(raw) if raw else DEFAULT_ORDER


def _frac(x: Fraction) -> str:
    return str(x)


def _series_payload(name: str, series: RationalSeries, n: int) -> dict:
    return {"family": name, "n": n,
            "coefficients": [_frac(series[k]) for k in range(n + 1)]}


def _poly_payload(name: str, rows, n: int) -> dict:
    out = []
    for k in range(n + 1):
        poly: UPoly = rows.row(k)
        out.append({"n": k,
                    "coefficients": {str(j): _frac(poly.coefficient(j))
                                     for j in range(poly.degree + 1)
                                     if poly.coefficient(j) != 0}})
    return {"family": name, "n": n, "rows": out}


def _coeffs_payload(family: str, n: int, omega_text: str | None) -> dict:
    if family == "polya":
        return _series_payload(family, families.polya_coeffs(n), n)
    if family == "cayley":
        return _series_payload(family, families.cayley_coeffs(n), n)
    if family == "dforest":
        return _series_payload(family, families.dforest_coeffs(n), n)
    if family == "pointed":
        return _series_payload(family, families.pointed_coeffs(n), n)
    if family == "hierarchy":
        table = families.hierarchy_int_table(n)
        return {"family": family, "n": n,
                "coefficients": [str(v) for v in table[: n + 1]]}
    if family == "binary":
        table = families.binary_int_table(n)
        return {"family": family, "n": n,
                "coefficients": [str(v) for v in table[: n + 1]]}
    if family == "omega":
        if not omega_text:
            raise SystemExit("--omega is required for the omega family")
        omega = OmegaSet.parse(omega_text)
        series = families.omega_polya_coeffs(omega, n)
        payload = _series_payload(family, series, n)
        payload["omega"] = omega.describe()
        return payload
    if family == "identity":
        r, _, _ = families.identity_tree_coeffs(n)
        return _series_payload(family, r, n)
    if family == "identity-dforest":
        _, dstar, _ = families.identity_tree_coeffs(n)
        return _series_payload(family, dstar, n)
    if family == "identity-pointed":
        _, _, rc = families.identity_tree_coeffs(n)
        return _series_payload(family, rc, n)
    if family == "e-series":
        return _series_payload(family, families.e_series(n), n)
    if family == "ctree-poly":
        return _poly_payload(family, families.ctree_polynomials(n), n)
    if family == "dforest-components":
        return _poly_payload(family, families.dforest_component_bivariate(n), n)
    raise SystemExit(f"unknown family: {family}")


def _payload_to_csv(payload: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    if "rows" in payload and isinstance(payload["rows"], list) \
            and payload["rows"] and "coefficients" in payload["rows"][0]:
        writer.writerow(["family", "n", "k", "value"])
        for row in payload["rows"]:
            for k, v in sorted(row["coefficients"].items(), key=lambda kv: int(kv[0])):
                writer.writerow([payload["family"], row["n"], k, v])
    elif "coefficients" in payload:
        writer.writerow(["family", "n", "value"])
        for k, v in enumerate(payload["coefficients"]):
            writer.writerow([payload["family"], k, v])
    else:
        flat = _flatten(payload)
        writer.writerow(["key", "value"])
        for k, v in flat:
            writer.writerow([k, v])
    return buf.getvalue()


def _flatten(obj, prefix: str = "") -> list[tuple[str, object]]:
    out: list[tuple[str, object]] = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            out.extend(_flatten(v, f"{prefix}{k}."))
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            out.extend(_flatten(v, f"{prefix}{i}."))
    else:
        out.append((prefix[:-1], obj))
    return out


def _emit(payload: dict, fmt: str, output: str | None) -> None:
    if fmt == "json":
        text = json.dumps(payload, indent=2, default=str) + "\n"
    else:
        text = _payload_to_csv(payload)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_coeffs(args) -> int:
    _emit(_coeffs_payload(args.family, args.n, args.omega), args.format,
          args.output)
    return 0


def _cmd_singularity(args) -> int:
    order = args.order or _default_order()
    if args.family == "polya":
        sing = solve_polya_singularity(order)
        payload = asdict(sing)
        payload["family"] = "polya"
        payload["forest"] = asdict(forest_asymptotics(order, sing))
        payload["decomposition"] = asdict(decomposition_constants(order))
        converged = (sing.residual < RESIDUAL_TOL
                     and sing.rho_shift < SHIFT_TOL)
    else:
        var = solve_variant_singularity(args.family, order)
        payload = asdict(var)
        payload["c_share"] = var.c_share
        converged = (var.residual < RESIDUAL_TOL
                     and var.tau_shift < SHIFT_TOL)
    payload["converged"] = converged
    _emit(payload, args.format, args.output)
    return 0 if converged else 1


def _cmd_table(args) -> int:
    order = args.order or _default_order()
    consts = decomposition_constants(order)
    row = families.exact_forest_size_row(args.exact_n, args.mmax)
    if args.which == "forest-size":
        m_values = list(range(args.mmax + 1))
        asym = consts.forest_size_distribution(args.mmax)
        exact = [float(v) for v in row]
    else:
        m_values = list(range(2, args.mmax + 1))
        asym = consts.conditional_forest_size(args.mmax)
        nonempty = 1 - row[0]  # size 1 is impossible, so this conditions on >= 2
        exact = [float(v / nonempty) for v in row[2:]]
    payload = {
        "table": args.which,
        "m": m_values,
        "asymptotic": [float(v) for v in asym],
        "exact_n": args.exact_n,
        "exact": exact,
    }
    _emit(payload, args.format, args.output)
    return 0


def _cmd_sample(args) -> int:
    if args.lmax:
        n_values = [int(v) for v in args.n_values.split(",") if v.strip()]
        payload = lmax_check(n_values, args.samples, s=args.s,
                             master_seed=args.seed,
                             exact_mean=args.exact_mean)
    else:
        if args.n is None:
            raise SystemExit("--n is required unless --lmax is given")
        payload = run_experiment(args.n, args.samples, args.seed).to_dict()
    _emit(payload, args.format, args.output)
    return 0


def _cmd_verify(args) -> int:
    report = run_verification(args.oracle_max)
    _emit(report.to_dict(), args.format, args.output)
    for row in report.rows:
        status = "PASS" if row.passed else "FAIL"
        print(f"{status}  n<={row.max_n:2}  {row.name}", file=sys.stderr)
    return 0 if report.all_passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polyakit",
        description="Exact enumeration, singularity analysis, and uniform "
                    "sampling for rooted-tree decompositions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--output", help="write to this path instead of stdout")

    p = sub.add_parser("coeffs", help="exact coefficient tables")
    p.add_argument("--family", required=True, choices=(
        "polya", "cayley", "dforest", "ctree-poly", "pointed",
        "dforest-components", "hierarchy", "binary", "omega", "identity",
        "identity-dforest", "identity-pointed", "e-series"))
    p.add_argument("--n", type=int, required=True, help="truncation order")
    p.add_argument("--omega", help="outdegree set, e.g. '0,2' or 'all-except:1'")
    common(p)
    p.set_defaults(func=_cmd_coeffs)

    p = sub.add_parser("singularity", help="dominant singularity constants")
    p.add_argument("--family", required=True,
                   choices=("polya", "hierarchy", "binary"))
    p.add_argument("--order", type=int,
                   help=f"series truncation (default POLYAKIT_ORDER or {DEFAULT_ORDER})")
    common(p)
    p.set_defaults(func=_cmd_singularity)

    p = sub.add_parser("table", help="forest-size distribution tables")
    p.add_argument("--which", required=True,
                   choices=("forest-size", "forest-size-conditional"))
    p.add_argument("--mmax", type=int, required=True)
    p.add_argument("--exact-n", type=int, default=300,
                   help="size for the exact finite-n comparison row")
    p.add_argument("--order", type=int)
    common(p)
    p.set_defaults(func=_cmd_table)

    p = sub.add_parser("sample", help="seeded sampling experiments")
    p.add_argument("--n", type=int, help="tree size")
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", default="0", help="master seed (any string)")
    p.add_argument("--lmax", action="store_true",
                   help="run the largest-forest growth report instead")
    p.add_argument("--n-values", default="500,2000,8000",
                   help="comma list of sizes for --lmax")
    p.add_argument("--s", type=float, default=0.5,
                   help="interval exponent for --lmax")
    p.add_argument("--exact-mean", action="store_true",
                   help="include the exact E L_n in the --lmax report")
    common(p)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("verify", help="enumeration-vs-series matrix")
    p.add_argument("--oracle-max", type=int, default=8,
                   help="cap every check's size range")
    common(p)
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
