"""Command-line front end.

Exit codes: 0 every check passed, 1 some check failed, 2 usage or parse
error, 3 quadrature did not converge.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import fock, inner, scatter, series
from .acceptance import AcceptanceRun
from .config import MAX_EMAX, MAX_ORDER, ConfigError, RunConfig, load_config, parse_range
from .quadrature import QuadratureError, QuadratureSpec
from .report import SCHEMA_VERSION, CheckReport, all_passed

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _envelope(command: str, params: dict, reports: list[CheckReport], **data) -> dict:
    out = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "params": params,
        "passed": all_passed(reports),
        "reports": [r.to_dict() for r in reports],
    }
    out.update(data)
    return out


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, allow_nan=True) + "\n"


def _reports_csv(reports: list[CheckReport]) -> str:
    lines = ["name,pass,measured,tolerance"]
    for r in reports:
        lines.append(f"\"{r.name}\",{str(r.passed).lower()},\"{r.measured}\",{r.tolerance}")
    return "\n".join(lines) + "\n"


def _finish(args, payload: dict, reports: list[CheckReport], csv_text: str | None = None) -> int:
    if args.format == "csv":
        _emit(csv_text if csv_text is not None else _reports_csv(reports), args.out)
    else:
        _emit(_dump_json(payload), args.out)
    for r in reports:
        print(r.line(), file=sys.stderr)
    return EXIT_OK if all_passed(reports) else EXIT_FAIL


def _parse_int_tuple(text: str, n: int, flag: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"{flag} expects {n} comma-separated integers, got {text!r}") from None
    if len(vals) != n:
        raise UsageError(f"{flag} expects {n} comma-separated integers, got {text!r}")
    return vals


def _phi(text: str) -> inner.InnerFunction:
    try:
        return inner.parse_phi(text)
    except inner.PhiParseError as exc:
        raise UsageError(f"--phi: {exc}") from None
    except ValueError as exc:
        raise UsageError(f"--phi: {exc}") from None


def _s_grid(text: str) -> np.ndarray:
    try:
        return np.geomspace(*parse_range(text))
    except ConfigError as exc:
        raise UsageError(f"--s: {exc}") from None


def _quad(args) -> QuadratureSpec:
    try:
        return QuadratureSpec(tol=args.tol)
    except ValueError as exc:
        raise UsageError(f"--tol: {exc}") from None


# ---------------------------------------------------------------- commands


def cmd_character(args) -> int:
    if not 0 <= args.order <= MAX_ORDER:
        raise UsageError(f"--order must be in [0, {MAX_ORDER}], got {args.order}")
    corrupt = _parse_int_tuple(args.corrupt, 3, "--corrupt") if args.corrupt else None
    reports = [
        series.jacobi_identity_check(args.order, corrupt=corrupt),
        series.z0_partition_check(args.order),
    ]
    table = series.dump(series.fermionic_character(args.order))
    payload = _envelope(
        "character", {"order": args.order, "corrupt": corrupt}, reports,
        coefficients=table,
        partitions=series.partition_gf(args.order).integer_coeffs(),
    )
    csv_text = "t,t2,z,coeff\n" + "".join(f"{r['t']},{r['t2']},{r['z']},{r['coeff']}\n" for r in table)
    return _finish(args, payload, reports, csv_text)


def cmd_fock(args) -> int:
    if not 0 <= args.emax <= MAX_EMAX:
        raise UsageError(f"--emax must be in [0, {MAX_EMAX}], got {args.emax}")
    c = fock.Cutoff(args.emax)
    if args.pair:
        m, n = _parse_int_tuple(args.pair, 2, "--pair")
        try:
            reports = [fock.current_algebra_check(m, n, c)]
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        reports = fock.full_check_suite(c)
    payload = _envelope(
        "fock-check", {"emax": args.emax, "pair": args.pair}, reports,
        basis_size=len(fock.enumerate_basis(c)),
    )
    return _finish(args, payload, reports)


def cmd_inner(args) -> int:
    phi = _phi(args.phi)
    grid = inner.CausalGrid(n=args.grid) if args.grid else None
    reports = inner.inner_check_suite(phi, grid)
    payload = _envelope(
        "inner-check", {"phi": inner.to_spec(phi), "grid": args.grid}, reports,
        functional_equation_residual=inner.functional_equation_probe(phi),
        check_conjugate=inner.to_spec(inner.check_conjugate(phi)),
    )
    return _finish(args, payload, reports)


def cmd_production(args) -> int:
    phi = _phi(args.phi)
    s_grid = _s_grid(args.s)
    rep = scatter.production_report(phi, s_grid, _quad(args))
    reports = [scatter.bound_check(rep)]
    payload = _envelope("production", {"phi": rep.phi_spec, "s": args.s, "tol": args.tol}, reports, production=rep.to_dict())
    if args.format == "csv" and args.out:
        Path(args.out).with_suffix(".json").write_text(_dump_json(payload))
    print(f"production flagged: {rep.production} (min |phi_tilde| = {rep.min_modulus:.6g})", file=sys.stderr)
    return _finish(args, payload, reports, rep.to_csv())


def cmd_scatter(args) -> int:
    phi = _phi(args.phi)
    quad = _quad(args)
    data: dict = {}
    if args.pq:
        try:
            p, q = (float(x) for x in args.pq.split(","))
        except ValueError:
            raise UsageError(f"--pq expects p,q, got {args.pq!r}") from None
        if not (p > 0 and q > 0):
            raise UsageError("--pq needs p, q > 0")
        val = scatter.phi_prime(phi, p, q, quad)
        data["phi_prime"] = {"p": p, "q": q, "re": val.real, "im": val.imag, "abs": abs(val)}
    s_grid = _s_grid(args.s)
    values = [scatter.phi_tilde(phi, float(s), quad) for s in s_grid]
    data["phi_tilde"] = [
        {"s": float(s), "re": v.real, "im": v.imag, "abs": abs(v)} for s, v in zip(s_grid, values)
    ]
    grid = scatter.gauss_grid(nodes=args.grid) if args.grid else None
    data["lw_invariance_residual"] = scatter.lw_invariance_residual(phi, scatter.exp_decay_wave(), quad, grid)
    payload = _envelope("scatter", {"phi": inner.to_spec(phi), "s": args.s, "pq": args.pq, "tol": args.tol}, [], **data)
    csv_text = "s,re_phi_tilde,im_phi_tilde,abs_phi_tilde\n" + "".join(
        f"{r['s']!r},{r['re']!r},{r['im']!r},{r['abs']!r}\n" for r in data["phi_tilde"]
    )
    return _finish(args, payload, [], csv_text)


def cmd_report_all(args) -> int:
    if args.config:
        try:
            cfg = load_config(args.config)
        except ConfigError as exc:
            raise UsageError(str(exc)) from None
    else:
        cfg = RunConfig()
    if args.order is not None:
        cfg.character.order = args.order
    if args.emax is not None:
        cfg.fock.emax = args.emax
    if args.tol is not None:
        cfg.scatter.tol = args.tol
    try:
        cfg.validate()
    except ConfigError as exc:
        raise UsageError(str(exc)) from None
    try:
        reports = AcceptanceRun(cfg).run_all()
    except inner.PhiParseError as exc:
        raise UsageError(f"config: {exc}") from None
    payload = _envelope("report-all", {"config": asdict(cfg)}, reports)
    return _finish(args, payload, reports)


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chiralnet", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", metavar="PATH")
        return p

    p = common(sub.add_parser("character", help="character identities and coefficient dump"))
    p.add_argument("--order", type=int, default=40, help="truncation order, doubled (40 keeps t^20)")
    p.add_argument("--corrupt", metavar="T2,Q,DELTA", help="debug: perturb one product coefficient")
    p.set_defaults(func=cmd_character)

    p = common(sub.add_parser("fock-check", help="exact mode-algebra identities"))
    p.add_argument("--emax", type=int, default=12, help="doubled energy cutoff")
    p.add_argument("--pair", metavar="M,N", help="only check [J_m, J_n]")
    p.set_defaults(func=cmd_fock)

    p = common(sub.add_parser("inner-check", help="inner-function and 2x2 matrix checks"))
    p.add_argument("--phi", required=True)
    p.add_argument("--grid", type=int, help="FFT points for the causality check")
    p.set_defaults(func=cmd_inner)

    p = common(sub.add_parser("production", help="phi_tilde curve and production flag"))
    p.add_argument("--phi", required=True)
    p.add_argument("--s", default="0.1:10:50", help="log grid a:b:n")
    p.add_argument("--tol", type=float, default=1e-7)
    p.set_defaults(func=cmd_production)

    p = common(sub.add_parser("scatter", help="raw phi_prime / phi_tilde evaluation"))
    p.add_argument("--phi", required=True)
    p.add_argument("--s", default="0.1:10:10", help="log grid a:b:n")
    p.add_argument("--pq", metavar="P,Q", help="also evaluate phi_prime(p, q)")
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--grid", type=int, help="Gauss nodes per axis for the kernel grid")
    p.set_defaults(func=cmd_scatter)

    p = common(sub.add_parser("report-all", help="run every acceptance criterion"))
    p.add_argument("--config", metavar="PATH")
    p.add_argument("--order", type=int)
    p.add_argument("--emax", type=int)
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_report_all)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QuadratureError as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
