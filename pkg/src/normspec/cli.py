"""Command line entry point: ``normspec verify | catalog | export-dot``."""

import argparse
import sys
from pathlib import Path

from .catalog import STANDARD_SUITE, catalog, catalog_names
from .ingest import (
    EMIT_CHOICES,
    INPUT_ERRORS,
    RunConfig,
    catalog_document,
    export_dot,
    group_spaces,
    parse_group_document,
    run,
)
from .lattice import enumerate_normal_subgroups


def _emit_list(text):
    kinds = tuple(k.strip() for k in text.split(",") if k.strip())
    bad = [k for k in kinds if k not in EMIT_CHOICES]
    if bad or not kinds:
        raise argparse.ArgumentTypeError(f"choose from {', '.join(EMIT_CHOICES)}")
    return kinds


def _positive(text):
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser():
    parser = argparse.ArgumentParser(prog="normspec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="verify groups and emit reports")
    v.add_argument("--catalog", action="append", default=[], metavar="NAME",
                   help="catalog group, e.g. S4 or 'Z2 x Z4' (repeatable)")
    v.add_argument("--file", action="append", default=[], metavar="PATH",
                   help="JSON group document (repeatable)")
    v.add_argument("--standard-suite", action="store_true",
                   help="add every group of the standard acceptance suite")
    v.add_argument("--emit", type=_emit_list, default=("report-json",),
                   help="comma-separated: " + ", ".join(EMIT_CHOICES))
    v.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    v.add_argument("--trials", type=_positive, default=1000,
                   help="random families per identity when the lattice has > 12 points")
    v.add_argument("--order-cap", type=_positive, default=128,
                   help="largest group order to analyze")
    v.add_argument("--lattice-cap", type=_positive, default=4096,
                   help="largest number of normal subgroups")
    v.add_argument("--exhaustive-point-cap", type=_positive, default=20,
                   help="materialize closed sets up to this many points")
    v.add_argument("--out", metavar="DIR", help="write files here instead of stdout")
    v.add_argument("--timings", action="store_true",
                   help="include wall-clock timings (makes output non-deterministic)")

    c = sub.add_parser("catalog", help="list catalog groups")
    c.add_argument("--list", action="store_true", help="print supported names")

    d = sub.add_parser("export-dot", help="print a DOT graph for a catalog group")
    d.add_argument("--catalog", required=True, metavar="NAME", help="catalog group")
    d.add_argument("--flavor", choices=("hasse", "specialization"), default="hasse")
    d.add_argument("--space", choices=("proper", "full"), default="proper",
                   help="space drawn by the specialization flavor")
    return parser


def _cmd_verify(args):
    docs = []
    try:
        names = list(args.catalog) + (list(STANDARD_SUITE) if args.standard_suite else [])
        for name in names:
            docs.append(catalog_document(name))
        for path in args.file:
            docs.append(parse_group_document(Path(path).read_text(encoding="utf-8")))
    except (INPUT_ERRORS + (OSError,)) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if not docs:
        print("nothing to verify: give --catalog or --file", file=sys.stderr)
        return 1
    config = RunConfig(
        inputs=docs, order_cap=args.order_cap, lattice_cap=args.lattice_cap,
        exhaustive_point_cap=args.exhaustive_point_cap, seed=args.seed, emit=args.emit,
        trials=args.trials, out_dir=args.out, timings=args.timings,
    )
    result = run(config)
    for line in result.errors:
        print(line, file=sys.stderr)
    if args.out is None:
        for name in sorted(result.outputs):
            if len(result.outputs) > 1:
                sys.stdout.write(f"// {name}\n")
            sys.stdout.write(result.outputs[name])
    return result.exit_code


def _cmd_catalog(args):
    for name in catalog_names():
        print(name)
    print('products: "A x B" of any of the above')
    return 0


def _cmd_export_dot(args):
    try:
        g = catalog(args.catalog)
        lat = enumerate_normal_subgroups(g)
    except INPUT_ERRORS as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.flavor == "hasse":
        sys.stdout.write(export_dot(lat, "hasse"))
    else:
        full, plus = group_spaces(lat)
        sys.stdout.write(export_dot(plus if args.space == "proper" else full, "specialization"))
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    handler = {"verify": _cmd_verify, "catalog": _cmd_catalog, "export-dot": _cmd_export_dot}
    return handler[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
