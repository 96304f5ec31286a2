"""Command-line front end.

Exit codes: 0 when every check passes, 1 when an identity fails, 2 for
usage, parse and precondition errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from umbra import catalog
from umbra.errors import DSLSyntaxError, UmbraError
from umbra.family import (
    DEFAULT_N,
    DEFAULT_NY,
    binomial_from_f,
    builtin,
    family_from_json,
    random_family,
)
from umbra.series import NEG_INF, poly_str, rat_str, rat_to_json

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def default_N():
    value = os.environ.get("UMBRA_DEFAULT_N")
    if value is None:
        return DEFAULT_N
    try:
        return int(value)
    except ValueError:
        raise UsageError(f"UMBRA_DEFAULT_N must be an integer, got {value!r}") from None


def family_from_spec(spec, N, N_y):
    """``builtin:<name>``, ``binomial:<series>``, ``random:<seed>`` or ``file:<path>``."""
    kind, sep, rest = spec.partition(":")
    if not sep:
        raise UsageError(f"family spec {spec!r} needs the form kind:value")
    if kind == "builtin":
        try:
            return builtin(rest, N, N_y)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if kind == "binomial":
        from umbra.dsl import parse_series

        f = parse_series(rest).evaluate(max(N, N_y))
        return binomial_from_f(f, N, N_y, f"binomial({rest})")
    if kind == "random":
        try:
            seed = int(rest)
        except ValueError:
            raise UsageError(f"random family needs an integer seed, got {rest!r}") from None
        return random_family(seed, N, N_y)
    if kind == "file":
        try:
            text = Path(rest).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {rest}: {exc.strerror}") from None
        return family_from_json(json.loads(text), N, N_y)
    raise UsageError(f"unknown family kind {kind!r}")


def _dump(obj):
    return json.dumps(obj, indent=2)


def _degree_json(d):
    return None if d == NEG_INF else d


# ---------------------------------------------------------------------------
# commands


def cmd_verify(args, out):
    N = args.N if args.N is not None else default_N()
    N_y = args.Ny if args.Ny is not None else max(DEFAULT_NY, N)
    fam = family_from_spec(args.family, N, N_y)
    if args.expr is not None:
        reports = [catalog.run_expression(args.expr, fam, args.seed, args.family)]
    elif args.id is not None:
        if args.id not in catalog.CATALOG:
            raise UsageError(f"unknown identity {args.id!r}; known: {', '.join(catalog.CATALOG)}")
        reports = [catalog.run_identity(args.id, fam, args.seed, args.family)]
    else:
        reports = catalog.run_catalog(fam, args.seed, args.family)
    ok = all(r.ok for r in reports)
    if args.json:
        out.write(
            _dump(
                {
                    "family": args.family,
                    "N": fam.N,
                    "N_y": fam.N_y,
                    "seed": args.seed,
                    "status": "pass" if ok else "fail",
                    "reports": [r.to_json() for r in reports],
                }
            )
            + "\n"
        )
    else:
        out.write(f"family {args.family}  N={fam.N}  N_y={fam.N_y}  seed={args.seed}\n")
        width = max(len(r.identity) for r in reports)
        for r in reports:
            line = f"  {r.identity:<{width}}  {r.status}  window={r.window}  checks={len(r.checks)}  {r.wall_time:.2f}s"
            if r.error:
                line += f"  error: {r.error}"
            elif r.mismatch:
                name, col, row, lhs, rhs = r.mismatch
                line += f"  first mismatch in {name}: column {col}, row {row}: {rat_str(lhs)} != {rat_str(rhs)}"
            out.write(line + "\n")
    return EXIT_PASS if ok else EXIT_FAIL


def _needed_table(N_y, size):
    return max(N_y, size)


def cmd_logderiv(args, out):
    from umbra.logderiv import (
        assemble_expansion,
        binomial_closed_form,
        build_context,
        depth_for,
        neumann_xi,
        oracle_logderiv,
    )

    n, H = args.n, args.H
    if n < 1 or H < 0:
        raise UsageError("need n >= 1 and H >= 0")
    N = args.N if args.N is not None else default_N()
    K = depth_for(n, H)
    N_y = _needed_table(args.Ny if args.Ny is not None else DEFAULT_NY, K + 1)
    fam = family_from_spec(args.family, N, N_y)
    ctx = build_context(fam)
    engine = assemble_expansion(ctx, n, H)
    oracle = oracle_logderiv(fam, n, H)
    xis = neumann_xi(ctx, n, min(K, ctx.order))
    result = {
        "family": args.family,
        "n": n,
        "H": H,
        "engine": engine.to_json(),
        "oracle": oracle.to_json(),
        "match": engine == oracle,
        "xi_degrees": [_degree_json(x.degree()) for x in xis],
    }
    if fam.is_binomial:
        closed = binomial_closed_form(fam, n, H)
        result["closed_form"] = closed.to_json()
        result["match"] = result["match"] and closed == oracle
    if args.json:
        out.write(_dump(result) + "\n")
    else:
        out.write(f"family {args.family}  n={n}  H={H}  K={K}\n")
        out.write("  engine: " + ", ".join(rat_str(c) for c in engine.coeffs) + "\n")
        out.write("  oracle: " + ", ".join(rat_str(c) for c in oracle.coeffs) + "\n")
        if "closed_form" in result:
            out.write("  closed: " + ", ".join(rat_str(c) for c in closed.coeffs) + "\n")
        out.write(f"  match: {result['match']}\n")
    return EXIT_PASS if result["match"] else EXIT_FAIL


def cmd_dual_logderiv(args, out):
    from umbra.logderiv import depth_for, dual_fn_logderiv

    n, H = args.n, args.H
    if n < 1 or H < 0:
        raise UsageError("need n >= 1 and H >= 0")
    N = args.N if args.N is not None else default_N()
    K = depth_for(n, H)
    N_y = _needed_table(args.Ny if args.Ny is not None else DEFAULT_NY, H + K + 1)
    fam = family_from_spec(args.family, N, N_y)
    result = dual_fn_logderiv(fam, n, H)
    ok = result.match and result.nonnegative
    if args.json:
        out.write(_dump({"family": args.family, **result.to_json(), "nonnegative": result.nonnegative}) + "\n")
    else:
        out.write(f"family {args.family}  n={n}  H={H}  K={K}\n")
        out.write("  engine: " + ", ".join(rat_str(c) for c in result.coeffs) + "\n")
        out.write("  direct: " + ", ".join(rat_str(c) for c in result.direct) + "\n")
        out.write(f"  match: {result.match}  no negative powers: {result.nonnegative}\n")
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_show(args, out):
    N = args.N if args.N is not None else default_N()
    N_y = args.Ny if args.Ny is not None else max(DEFAULT_NY, N)
    fam = family_from_spec(args.family, N, N_y)
    top = min(N, fam.table_size)
    what = args.what
    if what == "polys":
        items = [(f"p_{n}", p.to_json()["coeffs"], str(p)) for n, p in enumerate(fam.polys[: top + 1])]
    elif what == "fns":
        items = [(f"f_{n}", s.to_json()["coeffs"], str(s)) for n, s in enumerate(fam.fns[: top + 1])]
    elif what == "xi":
        items = [
            (f"xi[{n}]", [rat_to_json(c) for c in row], " ".join(rat_str(c) for c in row))
            for n, row in enumerate(fam.xi[: top + 1])
        ]
    else:  # dual
        items = [
            (f"xi*[{n}]", [rat_to_json(c) for c in row], " ".join(rat_str(c) for c in row))
            for n, row in enumerate(fam.xi_star[: top + 1])
        ] + [
            (f"p*_{n}", p.to_json()["coeffs"], poly_str(p.coeffs, "x") if p.coeffs else "0")
            for n, p in enumerate(fam.dual.polys[: top + 1])
        ]
    if args.json:
        payload = {"family": args.family, "what": what, "N": top, "N_y": fam.N_y}
        payload["items"] = [{"name": name, "coeffs": coeffs} for name, coeffs, _ in items]
        out.write(_dump(payload) + "\n")
    else:
        for name, _, text in items:
            out.write(f"{name} = {text}\n")
    return EXIT_PASS


# ---------------------------------------------------------------------------
# entry point


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    parser = _Parser(prog="umbra", description="Exact checks for monic polynomial families.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--family", required=True, help="builtin:<name> | binomial:<series> | random:<seed> | file:<path>")
        p.add_argument("--N", type=int, help="operator size (default 12 or $UMBRA_DEFAULT_N)")
        p.add_argument("--Ny", type=int, help="series order")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("verify", help="run catalog identities or an operator identity")
    common(p)
    p.add_argument("--id", help="catalog identity; all of them when omitted")
    p.add_argument("--expr", help='operator identity such as "DP*UP - UP*DP == ID"')
    p.add_argument("--seed", type=int, default=0, help="seed for random operators")
    p.set_defaults(run=cmd_verify)

    for name, run, helptext in (
        ("logderiv", cmd_logderiv, "expansion of x p_n'/(n p_n) in powers of 1/x"),
        ("dual-logderiv", cmd_dual_logderiv, "expansion of y f*_n'/(n f*_n)"),
    ):
        p = sub.add_parser(name, help=helptext)
        common(p)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--H", type=int, default=6)
        p.set_defaults(run=run)

    p = sub.add_parser("show", help="print family data")
    p.add_argument("what", choices=("polys", "fns", "xi", "dual"))
    common(p)
    p.set_defaults(run=cmd_show)
    return parser


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "id", None) and getattr(args, "expr", None):
            raise UsageError("--id and --expr are mutually exclusive")
        return args.run(args, out)
    except UsageError as exc:
        err.write(f"umbra: {exc}\n")
        return EXIT_USAGE
    except DSLSyntaxError as exc:
        err.write(f"umbra: syntax error: {exc}\n")
        return EXIT_USAGE
    except UmbraError as exc:
        err.write(f"umbra: {type(exc).__name__}: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
