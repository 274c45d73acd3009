"""Command-line interface: JSON in, JSON out.

Exit codes: 0 success (member / separator found), 1 negative answer
(non-member / no separator), 2 bad input, 3 the two membership methods
disagree.  Emitted index sets are 1-based.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .errors import DomainError, InvariantViolation
from .hull import co_infinity, four_term_membership, hull_membership
from .oracle import P_MAX, convergence_rows
from .scalar import Tolerance, lambda_map, nary_boxplus, residual_index_set
from .separation import GeneratedBSet, search_separator, verify_separator
from .vector import as_vec

EXIT_OK, EXIT_NO, EXIT_ERR, EXIT_DISAGREE = 0, 1, 2, 3


class InputError(Exception):
    pass


def to_json(obj) -> str:
    """Deterministic JSON with floats at 17 significant digits."""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if math.isinf(obj):
            return '"inf"' if obj > 0 else '"-inf"'
        if math.isnan(obj):
            raise ValueError("NaN cannot be serialized")
        return format(obj, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {to_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(to_json(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _load(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what}: malformed JSON ({exc.msg})") from None


def _vector(obj, what: str):
    if not isinstance(obj, list) or not obj:
        raise InputError(f"{what}: expected a nonempty JSON array of numbers")
    if any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in obj):
        raise InputError(f"{what}: entries must be numbers")
    return as_vec(obj)


def _inputs(args, names):
    """Vectors named ``names`` from positional JSON or from ``--file``."""
    if args.file:
        try:
            with open(args.file, encoding="utf-8") as fh:
                doc = _load(fh.read(), args.file)
        except OSError as exc:
            raise InputError(f"cannot read {args.file}: {exc.strerror}") from None
        if len(names) == 1 and isinstance(doc, list):
            return [_vector(doc, names[0])]
        if not isinstance(doc, dict):
            raise InputError(f"{args.file}: expected an object with keys {names}")
        missing = [n for n in names if n not in doc]
        if missing:
            raise InputError(f"{args.file}: missing keys {missing}")
        return [_vector(doc[n], n) for n in names]
    given = args.vectors or []
    if len(given) != len(names):
        raise InputError(f"expected {len(names)} JSON vector(s) ({', '.join(names)}), got {len(given)}")
    return [_vector(_load(t, n), n) for t, n in zip(given, names)]


def _same_dim(*vs):
    if len({len(v) for v in vs}) != 1:
        raise InputError("vectors differ in dimension")


def cmd_nary(args, tol):
    (x,) = _inputs(args, ["x"])
    body = {
        "value": nary_boxplus(x, None, tol),
        "residual_set": sorted(i + 1 for i in residual_index_set(x, None, tol)),
        "lambda": list(lambda_map(x, tol)),
    }
    return body, EXIT_OK


def cmd_hull2(args, tol):
    x, y = _inputs(args, ["x", "y"])
    _same_dim(x, y)
    return co_infinity(x, y, tol).to_json_dict(), EXIT_OK


def cmd_member(args, tol):
    z, x, y = _inputs(args, ["z", "x", "y"])
    _same_dim(z, x, y)
    seg = hull_membership(z, co_infinity(x, y, tol), tol)
    four = four_term_membership(z, x, y, tol)
    body = {
        "member": seg,
        "segment": seg,
        "four_term": four,
        "via": "four-term" if four and not seg else "segment",
    }
    if seg != four:
        return body, EXIT_DISAGREE
    return body, EXIT_OK if seg else EXIT_NO


def cmd_converge(args, tol):
    x, y = _inputs(args, ["x", "y"])
    _same_dim(x, y)
    rows = convergence_rows(x, y, args.p_list, args.samples, args.seed)
    return rows, EXIT_OK


def _bset(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = _load(fh.read(), path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    if not isinstance(doc, dict) or "generators" not in doc:
        raise InputError(f"{path}: expected an object with 'generators'")
    gens = doc["generators"]
    if not isinstance(gens, list) or not gens:
        raise InputError(f"{path}: 'generators' must be a nonempty list")
    gens = [_vector(g, "generator") for g in gens]
    return GeneratedBSet(tuple(gens), doc.get("orthant"))


def cmd_separate(args, tol):
    if len(args.vectors or []) != 2:
        raise InputError("separate expects two set files")
    C1, C2 = (_bset(p) for p in args.vectors)
    a = search_separator(C1, C2, args.budget, args.seed, tol, args.samples)
    if a is None:
        return {"found": False, "a": None, "sup_C1": None, "inf_C2": None}, EXIT_NO
    rep = verify_separator(a, C1, C2, args.samples, args.seed, tol)
    body = {"found": rep.separated, "a": list(a), "sup_C1": rep.sup_c1, "inf_C2": rep.inf_c2}
    return body, EXIT_OK if rep.separated else EXIT_NO


COMMANDS = {
    "nary": (cmd_nary, "n-ary sum, residual index set and Λ of a vector", "x"),
    "hull2": (cmd_hull2, "breakpoints and segments of the limit hull of two points", "x y"),
    "member": (cmd_member, "is z in the limit hull of x and y", "z x y"),
    "converge": (cmd_converge, "Hausdorff distance of finite-p hulls to the limit hull", "x y"),
    "separate": (cmd_separate, "search for a separating coefficient vector", "c1_file c2_file"),
}


def _p_list(text):
    try:
        ps = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad p list {text!r}") from None
    if not ps or any(p < 0 or p > P_MAX for p in ps):
        raise argparse.ArgumentTypeError(f"p values must lie in [0, {P_MAX}]")
    return ps


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _nonneg(text):
    v = float(text)
    if not (v >= 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError("must be finite and >= 0")
    return v


def _add_common(p, suppress):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--tie-eps", type=_nonneg, default=d(0.0), help="magnitude tie threshold")
    p.add_argument("--seed", type=int, default=d(0), help="random seed")
    p.add_argument("--samples", type=_positive, default=d(1000), help="sample count")
    p.add_argument("--p-list", type=_p_list, default=d([5, 20, 100, 300]),
                   help="comma-separated p values for converge")
    p.add_argument("--budget", type=_positive, default=d(1000), help="separator search budget")
    p.add_argument("--output", default=d(None), help="write JSON here instead of stdout")
    p.add_argument("--file", default=d(None), help="read input vectors from a JSON file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bsharp", description=__doc__.splitlines()[0])
    _add_common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_, meta) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_, description=help_)
        _add_common(sp, suppress=True)
        sp.add_argument("vectors", nargs="*", metavar=meta)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERR
    try:
        tol = Tolerance(args.tie_eps)
        body, code = COMMANDS[args.command][0](args, tol)
        text = to_json(body) + "\n"
    except (InputError, DomainError, InvariantViolation, ValueError) as exc:
        print(f"bsharp {args.command}: {exc}", file=sys.stderr)
        return EXIT_ERR
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
