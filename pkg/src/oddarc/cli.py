"""Command-line front end: enumeration, Betti numbers, structure-constant
tables, the odd center, and the verification suites.

Exit codes: 0 success, 1 a verification failed, 2 usage error.
All output is deterministic for fixed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import comb

from . import arc_algebras, diagrams, oddcohomology, tqft


def _write(text, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _check_bounds(n, k, cap):
    if n is None or k is None:
        raise SystemExit(2)
    if n < 0 or k < 0 or 2 * k > n:
        print(f"error: invalid type ({n},{k}): need 0 <= k <= n/2",
              file=sys.stderr)
        raise SystemExit(2)
    if n > cap:
        print(f"error: n={n} exceeds the cap {cap} (raise with --max-n)",
              file=sys.stderr)
        raise SystemExit(2)


def cmd_enumerate(args):
    _check_bounds(args.n, args.k, args.max_n)
    lines = []
    if args.weighted:
        items = diagrams.enumerate_weighted(args.n, args.k)
    else:
        items = diagrams.enumerate_matchings(args.n, args.k)
    for it in items:
        lines.append(str(it))
    lines.append(f"count={len(items)}")
    _write("\n".join(lines), args.out)
    return 0


def cmd_betti(args):
    _check_bounds(args.n, args.k, args.max_n)
    betti, _bases, _cols = oddcohomology.springer_cohomology(args.n, args.k)
    q = oddcohomology.quotient(args.n, args.k)
    _write(f"{json.dumps(betti)} | {json.dumps(list(q.ranks))}", args.out)
    return 0


def cmd_table(args):
    _check_bounds(args.n, args.k, args.max_n)
    ledger = _load_ledger(args.ledger)
    alg = arc_algebras.build_algebra(args.n, args.k, args.flavor, ledger)
    _write(alg.to_json(), args.out)
    return 0


def cmd_center(args):
    _check_bounds(args.n, args.k, args.max_n)
    alg = arc_algebras.build_algebra(args.n, args.k, "oh")
    vectors, _by_degree = arc_algebras.odd_center(alg)
    lines = [f"rank={len(vectors)}"]
    reduced = _center_constants(alg, vectors)
    for (i, j, t, c) in reduced:
        lines.append(f"{i} * {j} = {t}: {c}")
    _write("\n".join(lines), args.out)
    return 0


def _center_constants(alg, vectors):
    from . import intlinalg

    dim = len(alg.basis)
    rows = []
    for v in vectors:
        row = [0] * dim
        for i, c in v.items():
            row[i] = c
        rows.append(row)
    hnf = intlinalg.hermite_normal_form(rows, width=dim) if rows else []
    out = []
    for i, u in enumerate(vectors):
        for j, v in enumerate(vectors):
            prod = alg.multiply_vectors(u, v)
            dense = [0] * dim
            for t, c in prod.items():
                dense[t] = c
            _res, coeffs = intlinalg.hnf_reduce(dense, hnf)
            for t, c in enumerate(coeffs):
                if c:
                    out.append((i, j, t, c))
    return out


def _load_ledger(path):
    if not path:
        return arc_algebras.SignLedger()
    with open(path) as fh:
        return arc_algebras.SignLedger.from_text(fh.read())


def cmd_verify(args):
    from . import verification

    suites = {
        "tqft-relations": verification.suite_tqft_relations,
        "geom-commute": verification.suite_geom_commute,
        "hiso": verification.suite_hiso,
        "mod2": verification.suite_mod2,
        "center": verification.suite_center,
        "assoc": verification.suite_assoc,
    }
    if args.suite not in suites:
        print(f"error: unknown suite {args.suite!r}; choose from "
              f"{sorted(suites)}", file=sys.stderr)
        raise SystemExit(2)
    max_n = args.n if args.n is not None else None
    failures = suites[args.suite](max_n=max_n)
    if failures:
        _write(json.dumps({"suite": args.suite, "failures": failures}),
               args.out)
        return 1
    _write(json.dumps({"suite": args.suite, "failures": []}), args.out)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="oddarc",
        description="exact-integer engine for odd arc algebras and real "
                    "two-row Springer fiber cohomology")
    parser.add_argument("--max-n", type=int, default=10,
                        help="cap on n to bound runtime (default 10)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_nk(p):
        p.add_argument("n", type=int, nargs="?", default=None)
        p.add_argument("k", type=int, nargs="?", default=None)
        p.add_argument("--n", dest="n_flag", type=int, default=None)
        p.add_argument("--k", dest="k_flag", type=int, default=None)
        p.add_argument("--out", default=None)

    p = sub.add_parser("enumerate", help="list matchings in the text format")
    add_nk(p)
    p.add_argument("--weighted", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("betti", help="graded ranks: kernel side | quotient side")
    add_nk(p)
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("table", help="structure constants as JSON")
    add_nk(p)
    p.add_argument("--flavor", choices=arc_algebras.FLAVORS, default="oh")
    p.add_argument("--ledger", default=None)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("center", help="odd center rank and products")
    add_nk(p)
    p.set_defaults(func=cmd_center)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("suite")
    p.add_argument("--n", dest="n", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "n_flag") and args.n_flag is not None:
        args.n = args.n_flag
    if hasattr(args, "k_flag") and args.k_flag is not None:
        args.k = args.k_flag
    try:
        return args.func(args)
    except SystemExit as exc:
        raise exc
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
