"""Command-line front end: ``tpa-lab <command> ...``.

Exit codes: 0 when every check in the invocation passed, 1 when a check
failed, 2 for usage or input errors.
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import __version__
from .algebra import antisymmetry_residual, format_combination, jacobi_residual
from .catalog import (
    FAMILIES,
    FamilySpec,
    TPSpec,
    _Q_BASED,
    default_params,
    default_tp_params,
    catalog_dump,
    list_catalog,
    make_algebra,
    make_tp_product,
    param_names,
    tp_variants,
)
from .derivations import HALF, delta_derivation_space
from .linalg import format_rational, to_rational
from .report import failed_entries, run_verify_all
from .serialize import FormatError, algebra_to_json, dumps, load_algebra, write_json
from .tpa import associativity_constraints, case_split_solve, tpa_linear_space, verify_tpa

OK, FAILED, USAGE = 0, 1, 2


class CliError(Exception):
    pass


def _interval(text: str) -> tuple:
    lo, sep, hi = text.partition("..")
    try:
        a = int(lo)
        b = int(hi) if sep else a
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B or A, got {text!r}") from None
    return (a, b)


def _keyvals(items: Sequence[str]) -> dict:
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise CliError(f"expected k=v, got {item!r}")
        try:
            out[key.strip()] = to_rational(value.strip())
        except (ValueError, ZeroDivisionError):
            raise CliError(f"parameter {key!r}: {value!r} is not a rational number") from None
    return out


def _emit(doc, path: Optional[str]) -> None:
    if path == "-":
        sys.stdout.write(dumps(doc))
    elif path:
        write_json(path, doc)
        print(f"wrote {path}")


def _print_violations(title: str, violations, limit: int = 20) -> None:
    print(f"{title}: {len(violations)} violation(s)")
    for v in violations[:limit]:
        label = f" ({v.label})" if v.label else ""
        print(f"  {tuple(v.indices)}{label}: [{', '.join(format_rational(x) for x in v.residual)}]")
    if len(violations) > limit:
        print(f"  ... {len(violations) - limit} more")


# -- catalog -------------------------------------------------------------------------


def cmd_catalog_list(args) -> int:
    entries = list_catalog()
    if args.json:
        _emit(entries, args.json)
        return OK
    for e in entries:
        print(f"{e['family']:<10} {e['title']}")
        print(f"  n >= {e['min_n']}; parameters: {e['param_schema']}")
        for branch, keys in e["variants"].items():
            print(f"  {branch}: {', '.join(keys) or '-'}")
        if e["disputed"]:
            print(f"  disputed: {', '.join(e['disputed'])}")
        if e["corrected"]:
            print(f"  corrected readings: {', '.join(e['corrected'])}")
    return OK


def _family_spec(family: str, n: Optional[int], params: dict) -> FamilySpec:
    if family not in FAMILIES:
        raise CliError(f"unknown family {family!r}; valid families: {', '.join(FAMILIES)}")
    if n is None:
        n = 3 if family in _Q_BASED else 5
    given = default_params(family, n) if not params and param_names(family, n) else {}
    given.update(params)
    try:
        return FamilySpec(family, n, given)
    except ValueError as exc:
        raise CliError(str(exc)) from None


def cmd_catalog_show(args) -> int:
    spec = _family_spec(args.family, args.n, _keyvals(args.param))
    t = make_algebra(spec)
    if args.tp:
        tp_params = _keyvals(args.tp_param)
        try:
            base = default_tp_params(spec, args.tp)
            base.update(tp_params)
            tp = TPSpec(spec, args.tp, base)
        except ValueError as exc:
            raise CliError(str(exc)) from None
        p = make_tp_product(tp)
        print(tp.name)
        if tp.disputed:
            print(f"disputed: {tp.disputed}")
        if tp.known_issue:
            print(f"known issue: {tp.known_issue}")
        for line in p.format_table("·") or ["(zero product)"]:
            print(f"  {line}")
        _emit(algebra_to_json(p), args.json)
        return OK
    print(f"{spec.name}  branch: {spec.branch}")
    print(f"basis: {', '.join(spec.basis)}")
    for line in t.format_table():
        print(f"  {line}")
    print(f"TP variants: {', '.join(tp_variants(spec)) or '-'}")
    _emit(algebra_to_json(t), args.json)
    return OK


def cmd_catalog_dump(args) -> int:
    _emit(catalog_dump(), args.out or "-")
    return OK


# -- single-file checks -------------------------------------------------------------


def cmd_check_lie(args) -> int:
    t = load_algebra(args.algebra)
    anti = antisymmetry_residual(t)
    jac = jacobi_residual(t)
    if not anti and not jac:
        print(f"{t.name or args.algebra}: Lie axioms hold")
        return OK
    print(f"{t.name or args.algebra}: Lie axioms fail")
    if anti:
        _print_violations("antisymmetry", anti)
    if jac:
        _print_violations("jacobi", jac)
    return FAILED


def cmd_halfder(args) -> int:
    t = load_algebra(args.algebra)
    try:
        delta = to_rational(args.delta) if args.delta is not None else HALF
    except (ValueError, ZeroDivisionError):
        raise CliError(f"--delta: {args.delta!r} is not a rational number") from None
    space = delta_derivation_space(t, delta)
    print(f"delta: {format_rational(delta)}")
    print(f"dimension: {space.dimension}")
    for k, phi in enumerate(space.basis, 1):
        images = [format_combination(_sparse(phi.image(j)), t.basis) for j in range(t.dim)]
        print(f"  phi{k}: " + "; ".join(f"{b} -> {img}" for b, img in zip(t.basis, images) if img != "0"))
    _emit(space.to_json(), args.json)
    return OK


def _sparse(v) -> dict:
    return {k: c for k, c in enumerate(v, 1) if c}


def cmd_tpa_space(args) -> int:
    t = load_algebra(args.algebra)
    space = tpa_linear_space(t)
    print(f"dimension: {space.dim}")
    for name, q in zip(space.coordinates, space.basis):
        print(f"  {name}: " + ("; ".join(q.format_table("·")) or "0"))
    if args.constraints:
        constraints = associativity_constraints(space)
        print(f"associativity constraints: {len(constraints)}")
        for c in constraints:
            print(f"  {c} = 0")
        if constraints:
            try:
                parts = case_split_solve(constraints)
            except ValueError as exc:
                print(f"case split skipped: {exc}")
            else:
                print("components:")
                for comp in parts:
                    print(f"  {comp}")
    return OK


def cmd_tpa_verify(args) -> int:
    b = load_algebra(args.algebra)
    p = load_algebra(args.product)
    if b.dim != p.dim:
        raise CliError(f"dimension mismatch: algebra has {b.dim}, product has {p.dim}")
    report = verify_tpa(b, p)
    doc = report.to_json()
    if args.json:
        _emit(doc, args.json)
    else:
        sys.stdout.write(dumps(doc))
    return OK if report.is_tpa else FAILED


# -- acceptance matrix --------------------------------------------------------------


def cmd_verify_paper(args) -> int:
    doc = run_verify_all(args.n_s, args.n_r, args.seed)
    if args.out:
        write_json(args.out, doc)
    s = doc["summary"]
    print(f"entries: {len(doc['entries'])}  passed: {s['passed']}  failed: {s['failed']}  disputed: {s['disputed']}")
    for e in failed_entries(doc):
        where = f"{e['family']} n={e['n']} {e['params']}" + (f" {e['variant']}" if e.get("variant") else "")
        print(f"FAIL {e['check']}: {where}: expected {e['expected']}, computed {e['computed']}")
    if args.out:
        print(f"wrote {args.out}")
    return FAILED if s["failed"] else OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tpa-lab", description="Exact checks for transposed Poisson structures on solvable Lie algebras.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    cat = sub.add_parser("catalog", help="browse the built-in algebra families")
    csub = cat.add_subparsers(dest="action", required=True)
    p = csub.add_parser("list", help="families, parameters and TP variants")
    p.add_argument("--json", metavar="PATH", help="write the listing as JSON ('-' for stdout)")
    p.set_defaults(func=cmd_catalog_list)
    p = csub.add_parser("show", help="print one algebra or one of its TP products")
    p.add_argument("family")
    p.add_argument("--n", type=int)
    p.add_argument("--param", action="append", metavar="k=v", default=[])
    p.add_argument("--tp", metavar="VARIANT", help="show a TP product instead of the bracket")
    p.add_argument("--tp-param", action="append", metavar="k=v", default=[], help="TP parameters (default 1)")
    p.add_argument("--json", metavar="PATH", help="write the table in algebra JSON format")
    p.set_defaults(func=cmd_catalog_show)
    p = csub.add_parser("dump", help="every family at default parameters with its TP products")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_catalog_dump)

    chk = sub.add_parser("check", help="axiom checks on a JSON table")
    ksub = chk.add_subparsers(dest="action", required=True)
    p = ksub.add_parser("lie", help="antisymmetry and Jacobi")
    p.add_argument("algebra")
    p.set_defaults(func=cmd_check_lie)

    p = sub.add_parser("halfder", help="space of delta-derivations (default delta 1/2)")
    p.add_argument("algebra")
    p.add_argument("--delta", metavar="p/q")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_halfder)

    p = sub.add_parser("tpa-space", help="linear space of compatible commutative products")
    p.add_argument("algebra")
    p.add_argument("--constraints", action="store_true", help="also print associativity constraints and components")
    p.set_defaults(func=cmd_tpa_space)

    p = sub.add_parser("tpa-verify", help="check one (bracket, product) pair")
    p.add_argument("algebra")
    p.add_argument("product")
    p.add_argument("--json", metavar="PATH", help="write the report here instead of stdout")
    p.set_defaults(func=cmd_tpa_verify)

    p = sub.add_parser("verify-paper", help="run the full verification matrix")
    p.add_argument("--n-s", type=_interval, default=(4, 5), metavar="A..B")
    p.add_argument("--n-r", type=_interval, default=(3, 3), metavar="A..B")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_verify_paper)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
