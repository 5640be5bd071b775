"""Command-line front end.  Machine output is one JSON object per line.

Exit codes: 0 success, 1 domain error (bad equation, non-solution, missing
shares), 2 usage error (bad arguments, malformed JSON).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import baragar_umeda as bu
from . import enumeration as en
from . import fixtures, secret_share, vieta
from .core import (
    BUEquation,
    EquationError,
    GHEquation,
    NotASolution,
    bu_residual,
    eliminate_k,
    equation_from_json,
    eval_residual,
)


class UsageError(Exception):
    pass


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj) + "\n")


def _strs(x) -> list[str]:
    return [str(v) for v in x]


def _emit_solution(eq, x, **extra) -> None:
    r = eval_residual(eq, x) if isinstance(eq, GHEquation) else bu_residual(eq, x)
    if r != 0:
        raise NotASolution(x, r)
    _emit({"equation": eq.to_json(), "x": _strs(x), **extra})


def _parse_equation(text: str):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed equation JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise UsageError("equation JSON must be an object")
    try:
        return equation_from_json(obj)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"incomplete equation JSON: {exc}") from exc


def _parse_tuple(text: str) -> tuple[int, ...]:
    text = text.strip()
    try:
        if text.startswith("{"):
            return tuple(int(v) for v in json.loads(text)["x"])
        if text.startswith("["):
            return tuple(int(v) for v in json.loads(text))
        return tuple(int(v) for v in text.split(","))
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot parse tuple {text!r}") from exc


def _require_gh(eq) -> GHEquation:
    if not isinstance(eq, GHEquation):
        raise UsageError("this command needs a generalized Hurwitz (kind=gh) equation")
    return eq


# -- commands ------------------------------------------------------------------------


def cmd_solve(args) -> None:
    eq = _parse_equation(args.equation)
    if isinstance(eq, BUEquation):
        _bu_solve(eq, args.height_cap)
        return
    if eq.k:
        eq, _ = eliminate_k(eq)
        print(f"k eliminated; solving {eq}", file=sys.stderr)
    fs = en.enumerate_fundamental(eq, "sorted" if args.sorted else "raw")
    for x in fs:
        _emit_solution(eq, x)


def _bu_solve(eq: BUEquation, height_cap: int) -> None:
    res = bu.bu_enumerate_fundamental(eq, height_cap)
    for fam in res.families:
        _emit({"equation": eq.to_json(), "family": fam.to_json()})
    for x in res.solutions:
        fam = next((f.describe() for f in res.families if f.contains(x)), None)
        _emit_solution(eq, x, family=fam)


def cmd_reduce(args) -> None:
    eq = _require_gh(_parse_equation(args.equation))
    x = _parse_tuple(args.tuple)
    trace = [] if args.trace else None
    f, word = vieta.reduce(eq, x, trace)
    out = {"equation": eq.to_json(), "fundamental": _strs(f), "word": list(word)}
    if trace is not None:
        out["trace"] = [step.to_json() for step in trace]
    _emit(out)


def cmd_classify(args) -> None:
    if args.bu is not None:
        _bu_classify(args.bu, table1=False, pretty=args.pretty, c_max=bu.FINITE_PART_C_MAX,
                     height_cap=args.height_cap)
        return
    if args.n is None:
        raise UsageError("give an arity n or --bu E")
    for fs in en.classify_coefficients(args.n):
        if args.pretty:
            sols = "  ".join("(" + ", ".join(map(str, x)) + ")" for x in fs)
            print(f"a={fs.equation.a} d={fs.equation.d}: {sols}")
        else:
            for x in fs:
                eval_residual(fs.equation, x) == 0 or _die_residual(fs.equation, x)
            _emit({"equation": fs.equation.to_json(), "solutions": [_strs(x) for x in fs]})


def _die_residual(eq, x):
    raise NotASolution(x, eval_residual(eq, x))


def _bu_classify(e: int, table1: bool, pretty: bool, c_max: int, height_cap: int) -> None:
    rows = bu.bu_classify(e, c_max=c_max, height_cap=height_cap)
    for row in rows:
        res = row.result
        if pretty:
            fams = "; ".join(f.describe() for f in res.families)
            iso = "  ".join(str(t) for t in res.isolated)
            print(f"{row.equation}: {iso}" + (f"  families: {fams}" if fams else ""))
            continue
        for t in res.isolated:
            if bu_residual(row.equation, t):
                raise NotASolution(t, bu_residual(row.equation, t))
        _emit({
            "equation": row.equation.to_json(),
            "solutions": [_strs(t) for t in res.isolated],
            "families": [f.to_json() for f in res.families],
        })
    if table1:
        fixture = [r for r in fixtures.load("bu_table")["rows"] if r["e"] == e]
        diff = bu.table1_diff(rows, fixture)
        _emit({"table1_diff": {k: [_key_json(v) for v in vals] for k, vals in diff.items()}})


def _key_json(key) -> dict:
    (a, b, c), d = key
    return {"a": a, "b": b, "c": c, "d": d}


def cmd_tree(args) -> None:
    eq = _require_gh(_parse_equation(args.equation))
    root = _parse_tuple(args.root)
    nodes = en.tree_expand(eq, root, args.max_height, args.max_depth)
    if args.dot:
        sys.stdout.write(en.tree_to_dot(nodes))
    else:
        for node in nodes:
            _emit(node.to_json())


def cmd_bu(args) -> None:
    if args.bu_command == "classify":
        _bu_classify(args.e, args.table1, args.pretty, args.c_max, args.height_cap)
    else:
        eq = _parse_equation(args.equation)
        if not isinstance(eq, BUEquation):
            raise UsageError("bu solve needs a kind=bu equation")
        _bu_solve(eq, args.height_cap)


def cmd_share(args) -> None:
    if args.share_command == "deal":
        scheme, shares = secret_share.deal(args.n, args.t, args.p, seed=args.seed)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for s in shares:
            path = out / f"share_{s.i}.json"
            path.write_text(s.dumps() + "\n")
            _emit({"i": s.i, "file": str(path), "entries": len(s.entries)})
        print(f"m={scheme.m}; secret withheld (combine t shares to recover it)", file=sys.stderr)
        return
    shares = [_load_share(path) for path in args.files]
    if args.share_command == "combine":
        try:
            S = secret_share.combine(shares)
        except secret_share.MissingIndices as exc:
            _emit({"ok": False, "missing": exc.missing})
            raise
        _emit({"ok": True, "S": str(S)})
    else:
        n, t, p = shares[0].header
        S = secret_share.combine(shares)
        xs = dict(e for s in shares for e in s.entries)
        scheme = secret_share.ShareScheme(n, t, p, tuple(xs[j] for j in sorted(xs)), S)
        report = secret_share.verify_threshold(scheme, shares)
        _emit({
            "passed": report.passed,
            "t_subsets": report.t_subsets_checked,
            "below_threshold_subsets": report.below_subsets_checked,
            "failures": [[why, list(g)] for why, g in report.failures],
        })
        if not report.passed:
            raise secret_share.ShareError("threshold verification failed")


def _load_share(path: str) -> secret_share.Share:
    try:
        return secret_share.Share.from_json(json.loads(Path(path).read_text()))
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read share file {path}: {exc}") from exc


def selfcheck_results() -> list[dict]:
    out = []
    rows = fixtures.load("ternary_classification")["rows"]
    want = {(tuple(r["a"]), r["d"]): [tuple(s) for s in r["solutions"]] for r in rows}
    got = {(fs.equation.a, fs.equation.d): list(fs.solutions) for fs in en.classify_coefficients(3)}
    out.append({"check": "ternary_classification", "ok": got == want})

    bad = []
    for n, d, x in fixtures.transitive_rows(16):
        sols = en.enumerate_fundamental(GHEquation((1,) * n, d), "sorted").solutions
        if sols != (x,):
            bad.append([n, d])
    out.append({"check": "hurwitz_transitive_n_le_16", "ok": not bad, "bad": bad})

    table = fixtures.load("bu_table")["rows"]
    for e in (1, 2, 3):
        diff = bu.table1_diff(bu.bu_classify(e), [r for r in table if r["e"] == e])
        out.append({
            "check": f"bu_table_e{e}_finite_part",
            "ok": not (diff["missing"] or diff["mismatched"]),
            "extra": [_key_json(k) for k in diff["extra"]],
            "family_equations": len(diff["family_rows"]),
        })
    return out


def cmd_selfcheck(args) -> None:
    results = selfcheck_results()
    for r in results:
        _emit(r)
    if not all(r["ok"] for r in results):
        raise EquationError("selfcheck failed")


# -- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hurwitz", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="fundamental solutions of one equation")
    p.add_argument("equation", help='e.g. \'{"kind":"gh","n":3,"a":[1,1,5],"d":5,"k":0}\'')
    p.add_argument("--sorted", action="store_true", help="Hurwitz only: sorted representatives")
    p.add_argument("--height-cap", type=int, default=100, help="cap for listing family members")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("reduce", help="descend a solution to its fundamental solution")
    p.add_argument("equation")
    p.add_argument("tuple", help='"1,2,5" or \'{"x":["1","2","5"]}\'')
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("classify", help="coefficient classification for arity n")
    p.add_argument("n", type=int, nargs="?")
    p.add_argument("--bu", type=int, metavar="E", help="classify a x^2+b y^2+c z^2 = dxyz+E instead")
    p.add_argument("--height-cap", type=int, default=100)
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("tree", help="orbit tree above a fundamental solution")
    p.add_argument("equation")
    p.add_argument("root")
    p.add_argument("--max-height", type=int)
    p.add_argument("--max-depth", type=int)
    p.add_argument("--dot", action="store_true", help="emit graphviz DOT instead of JSON lines")
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("bu", help="a x^2 + b y^2 + c z^2 = d x y z + e")
    bsub = p.add_subparsers(dest="bu_command", required=True)
    q = bsub.add_parser("classify")
    q.add_argument("--e", type=int, required=True)
    q.add_argument("--table1", action="store_true", help="diff the finite part against the shipped table")
    q.add_argument("--c-max", type=int, default=bu.FINITE_PART_C_MAX)
    q.add_argument("--height-cap", type=int, default=100)
    q.add_argument("--pretty", action="store_true")
    q = bsub.add_parser("solve")
    q.add_argument("equation")
    q.add_argument("--height-cap", type=int, default=100)
    p.set_defaults(func=cmd_bu)

    p = sub.add_parser("share", help="combinatorial threshold secret sharing")
    ssub = p.add_subparsers(dest="share_command", required=True)
    q = ssub.add_parser("deal")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--t", type=int, required=True)
    q.add_argument("--p", type=int, required=True)
    q.add_argument("--seed", type=int)
    q.add_argument("--out", default=".", help="directory for share_<i>.json files")
    for name in ("combine", "verify"):
        q = ssub.add_parser(name)
        q.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_share)

    p = sub.add_parser("selfcheck", help="reproduce the shipped reference tables")
    p.set_defaults(func=cmd_selfcheck)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except NotASolution as exc:
        print(f"error: {exc}", file=sys.stderr)
        _emit({"error": "not a solution", "x": _strs(exc.x), "residual": str(exc.residual)})
        return 1
    except (EquationError, secret_share.ShareError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
