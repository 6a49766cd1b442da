"""Command-line front end: JSON in, JSON out.

Exit codes: 0 success, 1 validation/usage error, 2 numerical or resource
error, 3 verification failure (some checked identity did not hold).
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import serialize as sz
from .algebra import MultiMatrixAlgebra, spectral_decompose
from .budget import set_budget
from .chern import T_cover, T_direct, chern_projection, generalized_chern
from .cyclic import hc_class, hc_dims, trace_map
from .errors import (
    DomainError,
    NumericalError,
    ResourceError,
    ValidationError,
)
from .generate import (
    random_ga_complex,
    random_n0class,
    random_normal,
    random_orthogonal_family,
)
from .lefschetz import (
    FiniteGroup,
    IrrepTable,
    generalized_lefschetz,
    lefschetz_first,
    lefschetz_second,
)
from .ngroup import functorial_map, h_map, n_class, t_map
from .scalars import parse_scalar, set_epsilon, to_complex
from .verify import BATTERIES

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2
EXIT_VERIFICATION = 3


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):  # usage problems are validation errors
        raise ValidationError(message)


def _emit(doc) -> None:
    print(sz.dumps(doc))


def _load_spectral(path):
    doc = sz.load_file(path)
    if "pairs" in doc:
        return sz.spectral_from_json(doc)
    return spectral_decompose(sz.element_from_json(doc))


def _load_irreps(args, group: FiniteGroup) -> IrrepTable:
    if getattr(args, "irreps", None):
        return sz.irreps_from_json(sz.load_file(args.irreps))
    # recognize the built-in tables by their multiplication tables
    n = group.order
    if group.table == FiniteGroup.cyclic_group(n).table:
        return IrrepTable.cyclic(n)
    if n == 6 and group.table == FiniteGroup.symmetric_group_3().table:
        return IrrepTable.symmetric_3()
    raise ValidationError(
        "cannot infer an irreducible-representation table for this group; "
        "pass --irreps")


def _parse_blocks(text: str):
    try:
        blocks = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ValidationError(f"bad block list {text!r}")
    if not blocks or any(b < 1 for b in blocks):
        raise ValidationError("block dimensions must be positive")
    return blocks


def _add_globals(parser, default):
    """Global flags, accepted both before and after the subcommand."""
    parser.add_argument("--backend", choices=("exact", "float"),
                        default="exact" if default else argparse.SUPPRESS)
    parser.add_argument("--epsilon", type=float,
                        default=None if default else argparse.SUPPRESS)
    parser.add_argument("--seed", type=int,
                        default=0 if default else argparse.SUPPRESS)
    parser.add_argument("--budget", type=int,
                        default=None if default else argparse.SUPPRESS)


def build_parser() -> _Parser:
    parser = _Parser(prog="ncgdesk")
    _add_globals(parser, default=True)
    common = _Parser(add_help=False)
    _add_globals(common, default=False)
    sub = parser.add_subparsers(dest="command")

    def add(group, name):
        return group.add_parser(name, parents=[common])

    n0 = sub.add_parser("n0", parents=[common]).add_subparsers(dest="action")
    p = add(n0, "class")
    p.add_argument("--element", required=True)
    for name in ("eq", "add"):
        p = add(n0, name)
        p.add_argument("--a", required=True)
        p.add_argument("--b", required=True)
    p = add(n0, "h")
    p.add_argument("--n0", required=True)
    p = add(n0, "t")
    p.add_argument("--k0c", required=True)
    p.add_argument("--algebra", required=True)
    p = add(n0, "push")
    p.add_argument("--hom", required=True)
    p.add_argument("--n0", required=True)

    hc = sub.add_parser("hc", parents=[common]).add_subparsers(dest="action")
    p = add(hc, "dims")
    p.add_argument("--algebra", required=True)
    p.add_argument("--max-degree", type=int, required=True)
    p = add(hc, "class")
    p.add_argument("--tensor", required=True)
    p = add(hc, "trace")
    p.add_argument("--tensor", required=True)

    p = sub.add_parser("chern", parents=[common])
    p.add_argument("--projection", required=True)
    p.add_argument("--l", type=int, default=0)

    p = sub.add_parser("gchern", parents=[common])
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--n0")
    src.add_argument("--element")
    p.add_argument("--l", type=int, default=0)
    p.add_argument("--path", choices=("cover", "direct", "both"),
                   default="direct")

    lef = sub.add_parser("lefschetz", parents=[common]).add_subparsers(dest="action")
    for name in ("l1", "l2", "gl1"):
        p = add(lef, name)
        p.add_argument("--complex", required=True)
        p.add_argument("--g", type=int, required=True)
        p.add_argument("--irreps")
        if name == "l2":
            p.add_argument("--l", type=int, default=0)
    p = add(lef, "verify")
    p.add_argument("--theorems", default="th4,th5")
    p.add_argument("--count", type=int, default=25)

    p = sub.add_parser("verify", parents=[common])
    p.add_argument("--theorems", required=True)
    p.add_argument("--count", type=int, default=25)

    p = sub.add_parser("generate", parents=[common])
    p.add_argument("--kind", required=True, choices=(
        "normal-element", "n0class", "projection-family", "ga-complex"))
    p.add_argument("--blocks", default="1,2")
    p.add_argument("--group", default="cyclic:2",
                   choices=("cyclic:2", "cyclic:3", "s3"))
    return parser


def _cmd_n0(args) -> int:
    if args.action == "class":
        _emit(sz.n0_to_json(n_class(_load_spectral(args.element))))
    elif args.action == "eq":
        a = sz.n0_from_json(sz.load_file(args.a))
        b = sz.n0_from_json(sz.load_file(args.b))
        _emit({"equal": a == b})
    elif args.action == "add":
        a = sz.n0_from_json(sz.load_file(args.a))
        b = sz.n0_from_json(sz.load_file(args.b))
        _emit(sz.n0_to_json(a + b))
    elif args.action == "h":
        _emit(sz.k0c_to_json(h_map(sz.n0_from_json(sz.load_file(args.n0)))))
    elif args.action == "t":
        v = sz.k0c_from_json(sz.load_file(args.k0c))
        algebra = sz.algebra_from_json(sz.load_file(args.algebra))
        _emit(sz.n0_to_json(t_map(v, algebra=algebra)))
    elif args.action == "push":
        phi = sz.hom_from_json(sz.load_file(args.hom))
        x = sz.n0_from_json(sz.load_file(args.n0))
        _emit(sz.n0_to_json(functorial_map(phi, x)))
    else:
        raise ValidationError("missing n0 action")
    return EXIT_OK


def _cmd_hc(args) -> int:
    if args.action == "dims":
        algebra = sz.algebra_from_json(sz.load_file(args.algebra))
        _emit({"dims": hc_dims(algebra, args.max_degree)})
    elif args.action == "class":
        xi = sz.tensor_from_json(sz.load_file(args.tensor))
        _emit(sz.hc_class_to_json(hc_class(xi)))
    elif args.action == "trace":
        xi = sz.tensor_from_json(sz.load_file(args.tensor))
        _emit(sz.tensor_to_json(trace_map(xi)))
    else:
        raise ValidationError("missing hc action")
    return EXIT_OK


def _cmd_gchern(args) -> int:
    if args.n0:
        x = sz.n0_from_json(sz.load_file(args.n0))
        _emit(sz.hc_class_to_json(generalized_chern(x, args.l)))
        return EXIT_OK
    a = _load_spectral(args.element)
    if args.path == "direct":
        _emit(sz.hc_class_to_json(T_direct(a, args.l)))
        return EXIT_OK
    if args.path == "cover":
        _emit(sz.hc_class_to_json(T_cover(a, args.l)))
        return EXIT_OK
    direct = T_direct(a, args.l)
    cover = T_cover(a, args.l)
    agree = direct == cover
    _emit({"agree": agree, "direct": sz.hc_class_to_json(direct),
           "cover": sz.hc_class_to_json(cover)})
    return EXIT_OK if agree else EXIT_VERIFICATION


def _run_batteries(names, seed: int, count: int) -> int:
    reports = []
    for name in names:
        if name not in BATTERIES:
            raise ValidationError(f"unknown theorem {name!r}; "
                                  f"choose from {sorted(BATTERIES)}")
        reports.append(BATTERIES[name](seed, count).to_json())
    _emit({"reports": reports})
    failed = any(r["passes"] < r["instances"] for r in reports)
    return EXIT_VERIFICATION if failed else EXIT_OK


def _cmd_lefschetz(args) -> int:
    if args.action == "verify":
        names = [s.strip() for s in args.theorems.split(",") if s.strip()]
        return _run_batteries(names, args.seed, args.count)
    if args.action not in ("l1", "l2", "gl1"):
        raise ValidationError("missing lefschetz action")
    c = sz.complex_from_json(sz.load_file(getattr(args, "complex")))
    if not 0 <= args.g < c.group.order:
        raise ValidationError(f"group element index {args.g} out of range")
    if args.action == "gl1":
        result = generalized_lefschetz(c, c.unitary(args.g))
        _emit(sz.n0_to_json(result.value))
        return EXIT_OK
    irreps = _load_irreps(args, c.group)
    if args.action == "l1":
        _emit(sz.k0c_to_json(lefschetz_first(c, args.g, irreps)))
    else:
        _emit(sz.hc_class_to_json(
            lefschetz_second(c, args.g, irreps, args.l)))
    return EXIT_OK


def _group_table(name: str) -> IrrepTable:
    if name == "s3":
        return IrrepTable.symmetric_3()
    return IrrepTable.cyclic(int(name.split(":")[1]))


def _cmd_generate(args) -> int:
    rng = random.Random(args.seed)
    algebra = MultiMatrixAlgebra(_parse_blocks(args.blocks))
    if args.kind == "normal-element":
        doc = sz.spectral_to_json(random_normal(algebra, rng))
    elif args.kind == "n0class":
        doc = sz.n0_to_json(random_n0class(algebra, rng))
    elif args.kind == "projection-family":
        family = random_orthogonal_family(algebra, rng, rng.randint(2, 4))
        doc = {"schema_version": sz.SCHEMA_VERSION,
               "projections": [sz.projection_to_json(p) for p in family]}
    else:
        doc = sz.complex_to_json(
            random_ga_complex(algebra, _group_table(args.group), rng))
    if args.backend == "float":
        doc = _to_float_doc(doc)
    _emit(doc)
    return EXIT_OK


def _to_float_doc(doc):
    """Re-encode every exact scalar leaf as a float [re, im] pair."""
    if isinstance(doc, dict):
        if set(doc) == {"order", "coeffs"}:
            z = to_complex(parse_scalar(doc))
            return [z.real, z.imag]
        return {k: _to_float_doc(v) for k, v in doc.items()}
    if isinstance(doc, list):
        if len(doc) == 2 and all(isinstance(x, str) for x in doc):
            z = to_complex(parse_scalar(doc))
            return [z.real, z.imag]
        return [_to_float_doc(v) for v in doc]
    return doc


def run(argv) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.epsilon is not None:
        if args.epsilon <= 0:
            raise ValidationError("epsilon must be positive")
        set_epsilon(args.epsilon)
    if args.budget is not None:
        set_budget(args.budget)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_VALIDATION
    if args.command == "n0":
        return _cmd_n0(args)
    if args.command == "hc":
        return _cmd_hc(args)
    if args.command == "chern":
        p = sz.projection_from_json(sz.load_file(args.projection))
        _emit(sz.hc_class_to_json(chern_projection(p, args.l)))
        return EXIT_OK
    if args.command == "gchern":
        return _cmd_gchern(args)
    if args.command == "lefschetz":
        return _cmd_lefschetz(args)
    if args.command == "verify":
        names = [s.strip() for s in args.theorems.split(",") if s.strip()]
        return _run_batteries(names, args.seed, args.count)
    if args.command == "generate":
        return _cmd_generate(args)
    raise ValidationError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    try:
        return run(sys.argv[1:] if argv is None else argv)
    except (ValidationError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (NumericalError, ResourceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except json.JSONDecodeError as exc:
        print(f"error: bad JSON input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
