"""Command-line front end.

Exit codes: 0 success (the verdict is in the report), 2 input error,
3 numerical non-convergence, 4 internal invariant violation.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from fractions import Fraction
from typing import Sequence

from . import _linalg as la
from .catalog import export_entry, get_entry, list_entries, verify_entry
from .dhmeasure import barycenter_error
from .errors import ConvergenceError, InputError, InvariantViolation
from .instance import Instance, dumps, parse_document, parse_instance
from .kstab import Verdict, check_kstability, check_with_soliton, datum_moments
from .quantized import quantized_barycenter

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_INVARIANT = 0, 2, 3, 4


def _num(x) -> str:
    """Rationals as "p/q"; reals as their shortest round-tripping repr."""
    if isinstance(x, (int, Fraction)):
        return la.fmt(x)
    return repr(float(x))


def _nums(v) -> list[str]:
    return [_num(x) for x in v]


def _precision(exact: bool) -> str:
    return "exact" if exact else "float64"


def _margin_table(v: Verdict) -> list[dict]:
    return [{"kind": kind, "generator": la.fmt_vec(g), "margin": _num(m)} for kind, g, m in v.margins]


def verdict_report(inst: Instance, v: Verdict, command: str = "check") -> dict:
    d = inst.datum
    rep = {
        "command": command,
        "instance": d.name,
        "status": v.status,
        "precision": _precision(v.exact),
        "barycenter": _nums(v.barycenter),
        "error_bound": _num(v.error_bound if not v.exact else 0),
        "two_rho_p": la.fmt_vec(d.two_rho_p),
        "bar_minus_two_rho_p": (la.fmt_vec(la.sub(v.barycenter, d.two_rho_p)) if v.exact else
                                [_num(b - float(t)) for b, t in zip(v.barycenter, d.two_rho_p)]),
        "margins": _margin_table(v),
        "destabilizer": None if v.destabilizer is None else {
            "generator": la.fmt_vec(v.destabilizer[0]), "description": v.destabilizer[1]},
        "zeta": None if d.zeta_is_zero else _nums(d.zeta_lift),
    }
    if v.soliton is not None:
        rep["soliton"] = {"zeta": _nums(v.soliton[0]), "residual": _num(v.soliton[1])}
    return rep


def _render_text(rep: dict) -> str:
    lines = []
    for key in sorted(rep):
        val = rep[key]
        if key == "margins":
            lines.append("margins:")
            for m in val:
                lines.append(f"  {m['kind']:<9} ({', '.join(m['generator'])}): {m['margin']}")
        elif isinstance(val, list):
            lines.append(f"{key}: ({', '.join(str(x) for x in val)})")
        elif isinstance(val, dict):
            lines.append(f"{key}:")
            for k2 in sorted(val):
                v2 = val[k2]
                if isinstance(v2, list):
                    v2 = "(" + ", ".join(str(x) for x in v2) + ")"
                lines.append(f"  {k2}: {v2}")
        else:
            lines.append(f"{key}: {'-' if val is None else val}")
    return "\n".join(lines) + "\n"


def _emit(rep: dict, fmt: str, out) -> None:
    out.write(dumps(rep) if fmt == "json" else _render_text(rep))


def _load(path: str) -> Instance:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return parse_instance(text)


def _tol(args, inst: Instance) -> float:
    return args.tol if getattr(args, "tol", None) is not None else inst.tolerance


def cmd_check(inst: Instance, args) -> dict:
    return verdict_report(inst, check_kstability(inst.datum, _tol(args, inst)))


def cmd_soliton(inst: Instance, args) -> dict:
    max_iter = args.max_iter or int(inst.options.get("max_iter", 60))
    sol, v = check_with_soliton(inst.datum.with_zeta(None), _tol(args, inst), max_iter)
    rep = verdict_report(inst, v, "soliton")
    rep["zeta"] = _nums(sol.zeta)
    rep["soliton"] = {"zeta": _nums(sol.zeta), "residual": _num(sol.residual),
                      "iterations": str(sol.iterations)}
    return rep


def cmd_barycenter(inst: Instance, args) -> dict:
    d = inst.datum
    tol = _tol(args, inst)
    m = datum_moments(d, tol)
    v = check_kstability(d, tol)
    rep = verdict_report(inst, v, "barycenter")
    rep["mass"] = _num(m.mass)
    rep["mass_log_scale"] = _num(m.log_scale)
    rep["barycenter_error_bound"] = _num(barycenter_error(d.delta_plus, m) if not m.exact else 0)
    return rep


def cmd_quantized(inst: Instance, args) -> dict:
    d = inst.datum
    k = args.level or int(inst.options.get("level", 0)) or None
    if k is None:
        raise InputError("a level is required (--level or options.level)", "/options/level")
    s = quantized_barycenter(d, k, inst.lattice_basis, inst.base_point)
    v = check_kstability(d, _tol(args, inst))
    gap = max(abs(float(a) - float(b)) for a, b in zip(s.q_barycenter, v.barycenter))
    return {
        "command": "quantized",
        "instance": d.name,
        "level": str(k),
        "lattice_points": str(s.count),
        "precision": _precision(s.exact),
        "q_barycenter": _nums(s.q_barycenter),
        "barycenter": _nums(v.barycenter),
        "gap_to_continuum": _num(gap),
    }


def _catalog_instance(name: str) -> Instance:
    get_entry(name)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return parse_document(export_entry(name))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sphkstab",
                                description="K-stability of Fano spherical varieties from moment data.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, tol=True):
        sp.add_argument("--input", required=True, metavar="FILE", help="instance JSON file")
        if tol:
            sp.add_argument("--tol", type=float, default=None, help="numerical tolerance")
        sp.add_argument("--format", choices=("json", "text"), default="json")

    common(sub.add_parser("check", help="stability verdict"))
    sp = sub.add_parser("soliton", help="solve for the soliton vector field, then check")
    common(sp)
    sp.add_argument("--max-iter", type=int, default=None)
    common(sub.add_parser("barycenter", help="barycenter, mass and margins"))
    sp = sub.add_parser("quantized", help="level-k lattice-sum barycenter")
    common(sp)
    sp.add_argument("--level", type=int, default=None)

    cat = sub.add_parser("catalog", help="built-in examples")
    cat.add_argument("action", choices=("list", "show", "check", "export"))
    cat.add_argument("name", nargs="?")
    cat.add_argument("--format", choices=("json", "text"), default="json")
    cat.add_argument("--tol", type=float, default=None)
    return p


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        if args.command == "catalog":
            return _run_catalog(args, out)
        if args.tol is not None and not args.tol > 0:
            raise InputError("--tol must be positive")
        inst = _load(args.input)
        handler = {"check": cmd_check, "soliton": cmd_soliton,
                   "barycenter": cmd_barycenter, "quantized": cmd_quantized}[args.command]
        _emit(handler(inst, args), args.format, out)
        return EXIT_OK
    except InputError as exc:
        err.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except ConvergenceError as exc:
        err.write(f"numerical error: {exc}\n")
        return EXIT_NUMERIC
    except (InvariantViolation, AssertionError) as exc:
        err.write(f"internal invariant violated: {exc}\n")
        return EXIT_INVARIANT


def _run_catalog(args, out) -> int:
    if args.action == "list":
        names = list_entries()
        if args.format == "json":
            out.write(dumps({"entries": names}))
        else:
            out.write("\n".join(names) + "\n")
        return EXIT_OK
    if not args.name:
        raise InputError(f"catalog {args.action} needs an entry name")
    if args.action == "export":
        get_entry(args.name)
        out.write(dumps(export_entry(args.name)))
        return EXIT_OK
    if args.action == "show":
        e = get_entry(args.name)
        rep = {"name": e.name, "expected_status": e.expected_status, "source_note": e.source_note,
               "expected_barycenter": None if e.expected_barycenter is None else la.fmt_vec(e.expected_barycenter),
               "instance": e.document}
        out.write(dumps(rep))
        return EXIT_OK
    inst = _catalog_instance(args.name)
    tol = args.tol if args.tol is not None else inst.tolerance
    _emit(verdict_report(inst, check_kstability(inst.datum, tol)), args.format, out)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


__all__ = ["run", "main", "build_parser", "verdict_report", "verify_entry"]
