"""Command-line front end: ``dialgebras <command> [options]``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import experiments as ex
from .bso import bso_report
from .engine import (check_conjecture, extract_generators, find_identities, superfluity_prune, to_vectors)
from .expansion import GroupAlgebraOp, build_expansion_matrix
from .kp import KPError, kp, kp_reduce_opposite
from .linalg import GF, QQ, Field, PrimeField, is_prime
from .monomials import TreeBasis, enumerate_association_types
from .poly import ParseError, format_poly, poly_degree
from .varieties import (ConsequenceSpaces, UnknownBuiltinError, VarietySpec, builtin, corrupt_sign,
                        differential_triple_operations, dual_number_extension, make_differential_dialgebra,
                        matrix_algebra, parse_ops_text, verify_modulo, verify_on_free, verify_on_instance)


class ConstraintError(ValueError):
    pass


# --------------------------------------------------------------------------
# option handling


def _field(args, degree: int) -> Field:
    if args.field == "rational":
        return QQ
    p = args.modulus
    if not is_prime(p):
        raise ConstraintError(f"modulus {p} is not prime")
    if p <= degree:
        raise ConstraintError(f"modulus {p} must exceed the degree {degree}")
    return GF(p)


def _ops(spec: str | None, default: str = "diproducts") -> dict:
    spec = spec or default
    path = Path(spec)
    if path.is_file():
        return parse_ops_text(path.read_text())
    found = builtin(spec)
    if isinstance(found, VarietySpec):
        raise ConstraintError(f"{spec!r} is an identity set, not a set of operations")
    return found


def _variety(spec: str) -> VarietySpec:
    path = Path(spec)
    if path.is_file():
        return VarietySpec.from_text(path.read_text())
    found = builtin(spec)
    if not isinstance(found, VarietySpec):
        raise ConstraintError(f"{spec!r} is a set of operations, not an identity set")
    return found


def _basis(ops: dict, degree: int) -> TreeBasis:
    sig = {k: v.arity for k, v in sorted(ops.items())}
    types = enumerate_association_types(sig, degree)
    if not types:
        raise ConstraintError(f"no monomials of degree {degree} for arities {sorted(set(sig.values()))}")
    return TreeBasis(types)


def _json_default(x):
    if isinstance(x, Fraction):
        return str(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _emit(payload: dict, fmt: str, tables: dict | None = None) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(payload, indent=2, default=_json_default) + "\n")
        return
    lines = []
    for k, v in payload.items():
        lines.append(f"{k}\t{ex._tsv_value(v)}")
    for name, rows in (tables or {}).items():
        lines.append(f"# {name}")
        lines.extend("\t".join(str(x) for x in row) for row in rows)
    sys.stdout.write("\n".join(lines) + "\n")


def _header(name: str, degree: int, field: Field) -> dict:
    return {"schema": ex.SCHEMA, "experiment": name, "degree": degree, "field": ex.field_name(field),
            "modulus": field.p if isinstance(field, PrimeField) else None}


# --------------------------------------------------------------------------
# commands


def cmd_expand(args) -> int:
    ops = _ops(args.ops)
    field = _field(args, args.degree)
    basis = _basis(ops, args.degree)
    em = build_expansion_matrix(basis, ops, field)
    rows = [[ex.plain(field, x) for x in r] for r in em.matrix.tolist()]
    out = _header("expand", args.degree, field)
    out.update(matrix_shape=list(em.shape), rows=em.rows, cols=em.cols)
    if args.output == "json":
        out["matrix"] = rows
    _emit(out, args.output, {"expansion": [[""] + em.cols] + [[r] + row for r, row in zip(em.rows, rows)]})
    return 0


def cmd_identities(args) -> int:
    ops = _ops(args.ops)
    field = _field(args, args.degree)
    res = find_identities(ops, _basis(ops, args.degree), field)
    out = _header("identities", args.degree, field)
    out.update(matrix_shape=list(res.expansion.shape), rank=res.rank, nullity=res.nullity,
               identities=[format_poly(p) for p in res.polys()])
    _emit(out, args.output)
    return 0


def cmd_generators(args) -> int:
    ops = _ops(args.ops)
    field = _field(args, args.degree)
    basis = _basis(ops, args.degree)
    res = find_identities(ops, basis, field)
    seeds = []
    if args.variety:
        seeds = to_vectors([p for p in _variety(args.variety).identities if poly_degree(p) == args.degree],
                           basis, field)
    gen = extract_generators(res.identities, basis, field, seeds=seeds, target_dim=res.nullity,
                             expansion=res.expansion)
    prune = superfluity_prune(gen)
    out = _header("generators", args.degree, field)
    out.update(matrix_shape=list(res.expansion.shape), rank=res.rank, nullity=res.nullity,
               seed_span=gen.seed_dim, generators=[format_poly(p) for p in gen.generator_polys()],
               accepted=gen.accepted, rank_trajectory=gen.trajectory, removable=prune.removable)
    _emit(out, args.output)
    return 0


def cmd_kp(args) -> int:
    var = _variety(args.variety)
    arities = set(var.signature.values())
    if len(var.signature) != 1:
        raise ConstraintError("KP needs identities for a single operation")
    n = arities.pop()
    op = next(iter(var.signature))
    ids = [p.map_monomials(lambda m: _rename(m, op)) for p in var.identities]
    out_ids = kp(ids, n)
    for k in args.reduce_opposite or []:
        out_ids = kp_reduce_opposite(out_ids, k)
    out = {"schema": ex.SCHEMA, "experiment": "kp", "arity": n, "source": var.name,
           "identities": [format_poly(p) for p in out_ids]}
    _emit(out, args.output)
    return 0


def _rename(t, op):
    from .monomials import Node

    if not isinstance(t, Node):
        return t
    return Node("op", tuple(_rename(a, op) for a in t.args))


def cmd_bso(args) -> int:
    res = bso_report(GroupAlgebraOp.parse(args.omega))
    out = {"schema": ex.SCHEMA, "experiment": "bso", "omega": str(res.omega),
           "operations": {f"op{i + 1}": str(t) for i, t in enumerate(res.templates)},
           "duplicates": [r.describe() for r in res.duplicates],
           "symmetries": [r.describe() for r in res.symmetries],
           "redundant": [f"op{i + 1}" for i in res.redundant()]}
    _emit(out, args.output)
    return 0


def cmd_conjecture(args) -> int:
    field = _field(args, args.degree)
    res = check_conjecture(GroupAlgebraOp.parse(args.omega), args.degree, field)
    out = _header("conjecture", args.degree, field)
    out.update({k: v for k, v in res.as_dict().items() if k != "field"})
    _emit(out, args.output)
    return 0 if res.equal else 1


def cmd_verify(args) -> int:
    var = _variety(args.variety)
    degree = max(poly_degree(p) for p in var.identities)
    field = _field(args, degree)
    out = _header("verify", degree, field)
    out["variety"] = var.name
    ids = list(var.identities)
    if args.corrupt is not None:
        ids[args.corrupt] = corrupt_sign(ids[args.corrupt])
        out["corrupted"] = args.corrupt
    if args.instance:
        if not isinstance(field, PrimeField):
            raise ConstraintError("instances need a prime field")
        p = field.p
        mult, d = dual_number_extension(matrix_algebra(2, p), p)
        D = make_differential_dialgebra(mult, d, p)
        rep = verify_on_instance(ids, differential_triple_operations(mult, d, p), D.dim, p,
                                 args.trials, args.seed)
        out.update(mode="instance", instance=args.instance, **rep.as_dict())
        ok = rep.ok
    elif args.modulo:
        spaces = ConsequenceSpaces(_variety(args.modulo), field)
        results = verify_modulo(ids, spaces.variety, _ops(args.ops, "jordan-di-triple"), field, spaces)
        out.update(mode="modulo", modulo=spaces.variety.name, results=results)
        ok = all(results)
    else:
        results = verify_on_free(ids, _ops(args.ops))
        out.update(mode="free", results=results)
        ok = all(results)
    out["ok"] = ok
    _emit(out, args.output)
    return 0 if ok else 1


def cmd_reproduce(args) -> int:
    if args.field == "rational":
        field = QQ
    else:
        field = _field(args, ex.EXPERIMENT_DEGREE[args.experiment])
    ex.validate_field(field, ex.EXPERIMENT_DEGREE[args.experiment])
    rep = ex.run(args.experiment, field)
    if args.output == "json":
        sys.stdout.write(json.dumps(rep.as_dict(), indent=2, default=_json_default) + "\n")
    else:
        sys.stdout.write(rep.to_tsv())
    return 0 if rep.ok else 1


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", choices=["prime", "rational"], default="prime")
    common.add_argument("--modulus", type=int, default=101)
    common.add_argument("--output", choices=["json", "tsv"], default="json")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="dialgebras", description="Polynomial identities for dialgebra operations.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(fn=fn)
        return p

    p = add("expand", cmd_expand, "expansion matrix of all monomials of a degree")
    p.add_argument("--ops", help="operations file or builtin name (default diproducts)")
    p.add_argument("--degree", type=int, required=True)

    p = add("identities", cmd_identities, "nullspace identities of the expansion matrix")
    p.add_argument("--ops")
    p.add_argument("--degree", type=int, required=True)

    p = add("generators", cmd_generators, "module generators of the identities of a degree")
    p.add_argument("--ops")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--variety", help="identities to process first (file or builtin name)")

    p = add("kp", cmd_kp, "lift identities of one n-ary operation to n operations")
    p.add_argument("--variety", required=True)
    p.add_argument("--reduce-opposite", type=int, action="append",
                   help="eliminate operation K via its reversal identity (repeatable)")

    p = add("bso", cmd_bso, "lift an associative operation to dialgebra operations")
    p.add_argument("--omega", required=True, help='signed word list, e.g. "abc+cba"')

    p = add("conjecture", cmd_conjecture, "compare KP-lifted identities with identities of the lifted operations")
    p.add_argument("--omega", required=True)
    p.add_argument("--degree", type=int, required=True)

    p = add("verify", cmd_verify, "check an identity set for given operations")
    p.add_argument("--variety", required=True, help="identities to check (file or builtin name)")
    p.add_argument("--ops", help="operations file or builtin name")
    p.add_argument("--modulo", help="check modulo the consequences of this variety")
    p.add_argument("--instance", choices=["differential"], help="check on a concrete instance")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--corrupt", type=int, help="flip one sign of identity K (0-based) first")

    p = add("reproduce", cmd_reproduce, "run a named experiment with built-in checks")
    p.add_argument("experiment", choices=list(ex.EXPERIMENTS))
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ConstraintError, ex.FieldTooSmallError) as e:
        parser.exit(2, f"dialgebras: constraint error: {e}\n")
    except (UnknownBuiltinError, ParseError, KPError, ValueError) as e:
        parser.exit(2, f"dialgebras: error: {e}\n")


if __name__ == "__main__":
    sys.exit(main())
