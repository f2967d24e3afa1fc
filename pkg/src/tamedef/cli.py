"""Command-line entry point: ``tamedef gene|model|sat|fiber|verify``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import genes, models, verify, weyl
from .algebra import Budget, BudgetExhausted, Ideal, ParseError, Ring, parse_poly, saturate
from .algebra.poly import names_in


class InputError(ValueError):
    pass


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _budget(args) -> Budget | None:
    if args.budget is None:
        return None
    return Budget(max_steps=args.budget)


def _read_json(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from None


# -- input validation ---------------------------------------------------------

def _check_enum(value, allowed, where):
    if value not in allowed:
        raise InputError(f"{where}: {value!r} is not one of {list(allowed)}")


def shape_from_json(data, p_default: int | None = None) -> weyl.ShapeData:
    if not isinstance(data, dict):
        raise InputError("shape: expected an object")
    p = data.get("p", p_default)
    if not isinstance(p, int) or p < 3:
        raise InputError(f"shape.p: expected an odd prime, got {p!r}")
    for key in ("s", "mu", "w"):
        if not isinstance(data.get(key), list):
            raise InputError(f"shape.{key}: expected a list")
    f = len(data["w"])
    for key in ("s", "mu"):
        if len(data[key]) != f:
            raise InputError(f"shape.{key}: expected {f} entries, got {len(data[key])}")
    for j, w in enumerate(data["w"]):
        _check_enum(w, weyl.SHAPE_NAMES, f"shape.w[{j}]")
    for j, s in enumerate(data["s"]):
        _check_enum(s, weyl.PERMS, f"shape.s[{j}]")
    for j, mu in enumerate(data["mu"]):
        if not (isinstance(mu, list) and len(mu) == 2 and all(isinstance(x, int) for x in mu)):
            raise InputError(f"shape.mu[{j}]: expected a pair of integers, got {mu!r}")
        if mu[0] < mu[1]:
            raise InputError(f"shape.mu[{j}]: expected mu[0] >= mu[1], got {mu!r}")
    return weyl.ShapeData(p, data["s"], data["mu"], data["w"])


def vertices_from_json(data) -> list[tuple[str, str]]:
    if not isinstance(data, list) or not data:
        raise InputError("vertices: expected a non-empty list")
    out = []
    for j, v in enumerate(data):
        if not (isinstance(v, list) and len(v) == 2):
            raise InputError(f"vertices[{j}]: expected [type, w]")
        _check_enum(v[0], models.VERTEX_TYPES, f"vertices[{j}][0]")
        _check_enum(v[1], weyl.SHAPE_NAMES, f"vertices[{j}][1]")
        out.append((v[0], v[1]))
    return out


def model_input(data, p_default=None):
    """A shape object, or an object with a ``vertices`` list of [type, w] pairs."""
    if isinstance(data, dict) and "vertices" in data:
        return vertices_from_json(data["vertices"])
    return shape_from_json(data, p_default)


def ideal_from_input(data) -> Ideal:
    """An object with ``generators`` (and optionally ``variables``), or a bare list of generators."""
    if isinstance(data, list):
        data = {"generators": data}
    if not isinstance(data, dict) or not isinstance(data.get("generators"), list):
        raise InputError("ideal: expected a list of generators or an object with 'generators'")
    texts = data["generators"]
    names = set(data.get("variables", []))
    for n, t in enumerate(texts):
        if not isinstance(t, str):
            raise InputError(f"generators[{n}]: expected a string")
        names |= names_in(t)
    ring = Ring.sorted(names or {"p"})
    gens = []
    for n, t in enumerate(texts):
        try:
            gens.append(parse_poly(t, ring))
        except ParseError as exc:
            raise InputError(f"generators[{n}]: {exc}") from None
    return Ideal(ring, gens)


# -- subcommands --------------------------------------------------------------

def cmd_gene(args) -> int:
    v = genes.digits(args.gamma, args.h, args.p, args.f)
    X = genes.gene_from_digits(v)
    _emit({"gene": X.text(), "entries": list(X.entries), "digits": list(v)})
    print(X.text(), file=sys.stderr)
    return 0


def cmd_model(args) -> int:
    src = model_input(_read_json(args.input), args.p)
    m = models.naive_model(src, args.framing)
    if args.normalize:
        m = models.normalize(m)
    if args.saturate:
        m = models.saturated_model(m, budget=_budget(args))
    _emit(m.to_json())
    print(f"{m.stage} model: {len(m.gens)} generators in {len(m.variables)} variables", file=sys.stderr)
    return 0


def cmd_sat(args) -> int:
    I = ideal_from_input(_read_json(args.input))
    if args.var not in I.ring:
        I = I.to_ring(Ring.sorted(set(I.ring.names) | {args.var}))
    sat = saturate(I, I.ring.var(args.var), method=args.method, budget=_budget(args))
    gens = Ideal(I.ring, sat.gens).reduced_gens(_budget(args)) if sat.gens else []
    _emit({"variables": list(I.ring.names), "generators": [str(g) for g in gens]})
    print(f"saturated by {args.var}: {len(gens)} generators", file=sys.stderr)
    return 0


def cmd_fiber(args) -> int:
    X = genes.Gene.parse(args.gene)
    shapes = genes.enumerate_fiber(X, args.p, args.kmax, exact=args.exact)
    _emit({"gene": X.text(), "p": args.p, "kmax": args.kmax,
           "shapes": [sh.to_json() for sh in shapes]})
    print(f"{len(shapes)} shapes in the fiber of {X.text()}", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    suite = verify.SUITES[args.suite]
    kwargs = {"workers": args.workers, "budget": _budget(args)}
    if args.suite in ("elkik", "genes", "kernel"):
        kwargs["seed"] = args.seed
    report = suite(**kwargs)
    _emit(report.to_json())
    print(report.summary(), file=sys.stderr)
    return report.exit_code


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tamedef", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=None, help="cap on Gröbner reduction steps")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)

    g = sub.add_parser("gene", parents=[common], help="gene of (gamma, h)")
    g.add_argument("--p", type=int, required=True)
    g.add_argument("--f", type=int, required=True)
    g.add_argument("gamma", type=int)
    g.add_argument("h", type=int)
    g.set_defaults(func=cmd_gene)

    m = sub.add_parser("model", parents=[common], help="model presentation of a shape")
    m.add_argument("input", help="shape JSON file, or - for stdin")
    m.add_argument("--p", type=int, default=None, help="prime, if the file does not give one")
    m.add_argument("--framing", choices=models.FRAMING_MODES, default="irreducible")
    m.add_argument("--normalize", action="store_true")
    m.add_argument("--saturate", action="store_true")
    m.set_defaults(func=cmd_model)

    s = sub.add_parser("sat", parents=[common], help="saturate an ideal by a variable")
    s.add_argument("input", help="ideal JSON file, or - for stdin")
    s.add_argument("--var", default="p")
    s.add_argument("--method", choices=("extended", "colon"), default="extended")
    s.set_defaults(func=cmd_sat)

    fb = sub.add_parser("fiber", parents=[common], help="shapes whose gene is equivalent to GENE")
    fb.add_argument("gene", help="two rows, e.g. 'O B / A AB'")
    fb.add_argument("--p", type=int, required=True)
    fb.add_argument("--kmax", type=int, default=3)
    fb.add_argument("--exact", action="store_true", help="equal genes only, not the whole class")
    fb.set_defaults(func=cmd_fiber)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=sorted(verify.SUITES))
    v.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, genes.GeneError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BudgetExhausted as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
