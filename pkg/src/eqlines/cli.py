"""Command-line entry point.

Exit codes: 0 success, 1 verification or audit failure, 2 usage error, 3 internal error.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import bounds, constructions
from .codes import (
    CodeFormatError,
    NotPsd,
    NotUnit,
    ParseError,
    RangeError,
    load_code,
    parse_lset,
    save_code,
    validate,
)
from .exactmat import format_rational, parse_rational
from .prooflab import bad_vertex_audit, dumps_report, peeling_audit
from .search import MAX_ORDER, max_lines

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _emit(payload: dict, text: str, fmt: str) -> None:
    if fmt == "structured":
        sys.stdout.write(json.dumps(payload, indent=1, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text)


def _lset(text: str):
    try:
        return parse_lset(text)
    except (ParseError, RangeError) as exc:
        raise UsageError(f"bad L-set {text!r}: {exc}") from None


def _load(path: str):
    try:
        return load_code(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except CodeFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


def cmd_construct(args) -> int:
    if args.family == "simplex":
        if args.n is None:
            raise UsageError("--family simplex needs --n")
        code = constructions.simplex(args.n)
    else:
        if args.r is None or args.t is None:
            raise UsageError("--family ls needs --r and --t")
        try:
            code = constructions.ls_family(args.r, args.t, args.tau)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    save_code(code, args.out)
    _emit(
        {"label": code.label, "size": code.size, "out": args.out},
        f"wrote {code.label} ({code.size} points) to {args.out}\n",
        args.format,
    )
    return EXIT_OK


def cmd_gallery(args) -> int:
    code = constructions.gallery(args.name)
    save_code(code, args.out)
    _emit(
        {"label": code.label, "size": code.size, "declared_L": str(constructions.gallery_lset(args.name)), "out": args.out},
        f"wrote {code.label} ({code.size} points, declared L = {constructions.gallery_lset(args.name)}) to {args.out}\n",
        args.format,
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    code = _load(args.file)
    lset = _lset(args.L)
    if args.tol is not None and not code.is_exact:
        from dataclasses import replace

        code = replace(code, tol=args.tol)
    try:
        rep = validate(code, lset)
    except (NotUnit, NotPsd) as exc:
        _emit({"ok": False, "error": str(exc)}, f"not a spherical code: {exc}\n", args.format)
        return EXIT_FAIL
    lines = [f"{'verified' if rep.ok else 'NOT verified'}: size {rep.size}, dimension {rep.dimension}, L = {lset}\n"]
    if not rep.ok:
        lines.append(f"  {len(rep.offending_pairs)} offending pairs:\n")
        for i, j, v in rep.offending_pairs:
            val = format_rational(v) if isinstance(v, Fraction) else repr(v)
            lines.append(f"    ({i}, {j}): {val}\n")
    _emit(rep.to_dict(), "".join(lines), args.format)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_bound(args) -> int:
    if args.gerzon is not None:
        g = bounds.gerzon(args.gerzon)
        payload = {"d": args.gerzon, "bound": g.bound, "equality_possible": g.equality_possible}
        text = f"gerzon bound d = {args.gerzon}: {g.bound} (equality possible: {'yes' if g.equality_possible else 'no'})\n"
    elif args.relative is not None:
        d_txt, a_txt = args.relative
        d, alpha = int(d_txt), _rational(a_txt)
        v = bounds.relative_bound(d, alpha)
        shown = None if v is None else format_rational(v)
        payload = {"d": d, "alpha": format_rational(alpha), "bound": shown}
        text = f"relative bound d = {d}, alpha = {format_rational(alpha)}: " + (
            f"{shown}\n" if shown is not None else "not applicable (d >= 1/alpha^2)\n"
        )
    elif args.caps is not None:
        a_txt, d_txt = args.caps
        alpha, d = _rational(a_txt), int(d_txt)
        c = bounds.classical_caps(alpha, d)
        payload = {
            "alpha": format_rational(alpha),
            "d": d,
            "two_d_applies": c.two_d_applies,
            "known_exact": c.known_exact,
            "threshold_assumed": c.threshold_assumed,
        }
        text = (
            f"alpha = {format_rational(alpha)}, d = {d}: 2d cap applies: {'yes' if c.two_d_applies else 'no'}; "
            f"known exact: {c.known_exact if c.known_exact is not None else 'none'}"
            f"{' (threshold assumed)' if c.threshold_assumed else ''}\n"
        )
    else:
        b = bounds.bukh_constant(args.bukh)
        payload = b.to_dict()
        text = "".join(f"{k} = {v}\n" for k, v in b.as_rows())
    _emit(payload, text, args.format)
    return EXIT_OK


def cmd_audit(args) -> int:
    from .graphs import max_independent_set
    from .codes import attachment_graph

    code = _load(args.file)
    lset = _lset(args.L)
    overrides = {"n": args.override_n, "t": args.override_t, "eps": args.override_eps, "delta": args.override_delta}
    if not code.is_exact:
        raise UsageError("audits need an exact Gram code file")
    if args.indep:
        indep = [int(x) for x in args.indep.split(",")]
    else:
        indep = max_independent_set(attachment_graph(code, lset))
    audit = bad_vertex_audit(code, lset, indep, overrides, shuffle_seed=args.shuffle_seed)
    ok = audit.ok
    if args.peel:
        peel = peeling_audit(code, lset, overrides)
        ok = ok and peel.ok
        if args.format == "structured":
            sys.stdout.write(json.dumps({"audit": audit.to_dict(), "peeling": peel.to_dict()}, indent=1, sort_keys=True) + "\n")
        else:
            sys.stdout.write(audit.to_text() + peel.to_text())
    else:
        sys.stdout.write(dumps_report(audit, args.format))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_search(args) -> int:
    if args.max_order > MAX_ORDER:
        raise UsageError(f"--max-order must be at most {MAX_ORDER}")
    if args.max_order <= args.dim or args.dim < 2:
        raise UsageError("need 2 <= --dim < --max-order")
    res = max_lines(args.dim, args.max_order, dedup=args.dedup, workers=args.workers)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(res.dumps())
    _emit(res.to_dict(), res.to_text(), args.format)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text")

    p = argparse.ArgumentParser(prog="eqlines", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", parents=[common], help="build simplex or ls-family codes")
    c.add_argument("--family", choices=("simplex", "ls"), required=True)
    c.add_argument("--n", type=int)
    c.add_argument("--r", type=int)
    c.add_argument("--t", type=int)
    c.add_argument("--tau", type=_rational, default=Fraction(1, 2))
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_construct)

    g = sub.add_parser("gallery", parents=[common], help="write a classical witness code")
    g.add_argument("--name", choices=constructions.GALLERY_NAMES, required=True)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gallery)

    v = sub.add_parser("verify", parents=[common], help="validate a code file against an L-set")
    v.add_argument("file")
    v.add_argument("--L", required=True)
    v.add_argument("--tol", type=float)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bound", parents=[common], help="evaluate an upper bound")
    grp = b.add_mutually_exclusive_group(required=True)
    grp.add_argument("--gerzon", type=int, metavar="D")
    grp.add_argument("--relative", nargs=2, metavar=("D", "ALPHA"))
    grp.add_argument("--caps", nargs=2, metavar=("ALPHA", "D"))
    grp.add_argument("--bukh", type=_rational, metavar="BETA")
    b.set_defaults(func=cmd_bound)

    a = sub.add_parser("audit", parents=[common], help="bad-vertex audit and optional peeling")
    a.add_argument("file")
    a.add_argument("--L", required=True)
    a.add_argument("--override-n", type=int)
    a.add_argument("--override-t", type=_rational)
    a.add_argument("--override-eps", type=_rational)
    a.add_argument("--override-delta", type=_rational)
    a.add_argument("--indep", help="comma-separated independent set in circle order")
    a.add_argument("--shuffle-seed", type=int)
    a.add_argument("--peel", action="store_true")
    a.set_defaults(func=cmd_audit)

    s = sub.add_parser("search", parents=[common], help="exhaustive small-dimension search")
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--max-order", type=int, required=True)
    s.add_argument("--dedup", action="store_true")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out")
    s.set_defaults(func=cmd_search)
    return p


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"eqlines {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, ArithmeticError, KeyError) as exc:
        # domain errors raised by the library (bad parameters for the given input)
        print(f"eqlines {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # pragma: no cover - reported as an internal failure
        print(f"eqlines {args.command}: internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
