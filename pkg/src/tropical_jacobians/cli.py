# Requires Python 3.12+
# Uses native type hints: list[x], tuple[x, y], X | None (PEP 585, PEP 604)
"""
Command-line front end: ``tropical-jacobians <command> --graph FILE ...``.

Exit status 0 on success, 1 on domain errors (with a JSON error object on
stdout), 2 on malformed input or bad arguments.
"""
from __future__ import annotations

import argparse
import io
import json
import logging
import sys
from collections.abc import Callable
from pathlib import Path

import numpy as np

from . import __version__
from .core_graph import BASIS_LABEL, GraphPoint, MetricGraph, Vertex, format_rational, point_to_text
from .discrete import (
    discrete_jacobian_via_laplacian,
    discrete_jacobian_via_pairing,
    spanning_tree_count,
)
from .divisors_functions import Divisor
from .embedding import EmbeddingOptions, balance, embed, is_balanced, plot_rows
from .errors import InternalConsistencyError, MalformedInputError, TropicalJacobianError
from .jacobian import abel_jacobi, is_principal, lift_to_function, period_matrix

logger = logging.getLogger("tropical_jacobians")

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_PARSE = 2


# =============================================================================
# Input
# =============================================================================

def _load_json(path: Path) -> object:
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise MalformedInputError(f"cannot read {path}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"{path} is not valid JSON: {exc.msg} at line {exc.lineno}")


def _load_graph(args: argparse.Namespace) -> MetricGraph:
    return MetricGraph.from_dict(_load_json(args.graph))


def _load_divisor(args: argparse.Namespace, graph: MetricGraph) -> Divisor:
    if args.divisor is None:
        raise MalformedInputError(f"{args.command} needs --divisor")
    return Divisor.from_json(_load_json(args.divisor), graph)


def _base_point(args: argparse.Namespace, graph: MetricGraph) -> GraphPoint:
    if args.base is None:
        return Vertex(graph.sorted_vertices[0])
    return graph.point_from_text(args.base)


# =============================================================================
# Text rendering
# =============================================================================

def _table(rows: list[list[str]], header: list[str] | None = None) -> str:
    """Right-aligned columns separated by two spaces."""
    body = ([header] if header else []) + rows
    if not body:
        return ""
    widths = [max(len(row[k]) for row in body) for k in range(len(body[0]))]
    return "\n".join("  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in body)


def _key_values(doc: dict) -> str:
    width = max(len(k) for k in doc)
    return "\n".join(f"{k.ljust(width)}  {json.dumps(v, separators=(',', ':'))}" for k, v in doc.items())


# =============================================================================
# Commands
# =============================================================================
#
# Each command returns (document, text rendering). The document is what
# --format json prints.
# =============================================================================

CommandResult = tuple[object, str]


def cmd_jacobian(args: argparse.Namespace) -> CommandResult:
    graph = _load_graph(args)
    pm = period_matrix(graph)
    gram = pm.to_json()
    text = f"genus {pm.genus}, basis {BASIS_LABEL}\n" + _table(gram)
    return {"gram": gram}, text


def cmd_abel_jacobi(args: argparse.Namespace) -> CommandResult:
    graph = _load_graph(args)
    if args.point is None:
        raise MalformedInputError("abel-jacobi needs --point")
    base, target = _base_point(args, graph), graph.point_from_text(args.point)
    image = abel_jacobi(graph, None, base, target)
    doc = image.to_json()
    header = f"{point_to_text(base)} -> {point_to_text(target)}, basis {BASIS_LABEL}"
    table = _table([doc["coords"]], [f"c{i + 1}" for i in range(len(doc["coords"]))]) or "()"
    return doc, f"{header}\n{table}"


def cmd_is_principal(args: argparse.Namespace) -> CommandResult:
    graph = _load_graph(args)
    doc = {"principal": is_principal(graph, _load_divisor(args, graph))}
    return doc, _key_values(doc)


def cmd_lift_function(args: argparse.Namespace) -> CommandResult:
    graph = _load_graph(args)
    function = lift_to_function(graph, _load_divisor(args, graph), _base_point(args, graph))
    doc = function.to_json()
    rows = [
        [eid, format_rational(t), format_rational(y)]
        for eid, points in function.pieces
        for t, y in points
    ]
    return doc, _table(rows, ["edge", "offset", "value"])


def cmd_discrete_jac(args: argparse.Namespace) -> CommandResult:
    graph = _load_graph(args)
    group = discrete_jacobian_via_laplacian(graph)
    if discrete_jacobian_via_pairing(graph) != group:
        raise InternalConsistencyError("Laplacian and pairing presentations disagree")
    if group.order != spanning_tree_count(graph):
        raise InternalConsistencyError("group order differs from the spanning tree count")
    rows = [[f"Z/{d}"] for d in group.factors]
    return group.to_json(), _table(rows, ["factor"]) + f"\norder {group.order}  ({group})"


def cmd_trees(args: argparse.Namespace) -> CommandResult:
    doc = {"spanning_trees": spanning_tree_count(_load_graph(args))}
    return doc, _key_values(doc)


def _embedding_options(args: argparse.Namespace) -> EmbeddingOptions:
    return EmbeddingOptions(perturb_on_failure=args.perturb, max_workers=args.workers)


def cmd_embed(args: argparse.Namespace) -> CommandResult:
    graph = _load_graph(args)
    embedding = embed(graph, _embedding_options(args))
    if args.plot:
        buffer = io.StringIO()
        np.savetxt(
            buffer, plot_rows(embedding), delimiter=",", header="segment,x,y,z",
            comments="", fmt=["%d", "%.17g", "%.17g", "%.17g"],
        )
        return None, buffer.getvalue().rstrip("\n")
    complex_ = balance(embedding)
    rows = [
        [s.source.edge, format_rational(s.source.start), format_rational(s.source.end),
         " ".join(map(str, s.direction))]
        for s in embedding.segments
    ]
    text = _table(rows, ["edge", "from", "to", "dir"]) + f"\nrays {len(complex_.rays)}"
    return complex_.to_json(), text


def cmd_check_balance(args: argparse.Namespace) -> CommandResult:
    complex_ = balance(embed(_load_graph(args), _embedding_options(args)))
    doc = {
        "balanced": is_balanced(complex_),
        "vertices": len(complex_.embedding.subdivision.vertices),
        "rays": len(complex_.rays),
    }
    return doc, _key_values(doc)


COMMANDS: dict[str, tuple[Callable[[argparse.Namespace], CommandResult], str, tuple[str, ...]]] = {
    "jacobian": (cmd_jacobian, "period matrix in the BFS cycle basis", ()),
    "abel-jacobi": (
        cmd_abel_jacobi, "Abel-Jacobi coordinates of --point with base --base", ("point", "base"),
    ),
    "is-principal": (cmd_is_principal, "decide whether --divisor is principal", ("divisor",)),
    "lift-function": (
        cmd_lift_function, "function with divisor --divisor, zero at --base", ("divisor", "base"),
    ),
    "discrete-jac": (cmd_discrete_jac, "invariant factors of the discrete Jacobian", ()),
    "trees": (cmd_trees, "number of spanning trees", ()),
    "embed": (
        cmd_embed, "certified isometric embedding into Q^3 with balancing rays",
        ("plot", "workers", "perturb"),
    ),
    "check-balance": (
        cmd_check_balance, "embed, balance and verify the balancing condition", ("workers", "perturb"),
    ),
}

# Options beyond --graph, --out, --format and -v, registered only where used.
OPTIONS: dict[str, tuple[tuple[str, ...], dict]] = {
    "divisor": (("--divisor",), {"type": Path, "help": "divisor JSON file"}),
    "base": (("--base",), {"help": "base or gauge point, e.g. v1 or e1:1/3"}),
    "point": (("--point",), {"help": "target point, e.g. v2 or e1:1/3"}),
    "plot": (("--plot",), {"action": "store_true", "help": "write a float CSV of segment endpoints"}),
    "workers": (("--workers",), {"type": int, "help": "threads for embedding certification"}),
    "perturb": (("--perturb",), {"action": "store_true", "help": "retry with perturbed vertex values"}),
}


# =============================================================================
# Entry point
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tropical-jacobians",
        description="Exact Jacobians, Abel-Jacobi maps and embeddings of metric graphs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, (_, help_text, options) in COMMANDS.items():
        sub = subparsers.add_parser(name, help=help_text, description=help_text)
        sub.add_argument("--graph", type=Path, required=True, help="graph JSON file")
        for option in options:
            flags, kwargs = OPTIONS[option]
            sub.add_argument(*flags, **kwargs)
        sub.add_argument("--out", type=Path, help="write the document here instead of stdout")
        sub.add_argument("--format", choices=("json", "text"), default="json")
        sub.add_argument("-v", "--verbose", action="count", default=0)
    return parser


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text + "\n")
    else:
        out.write_text(text + "\n", encoding="utf-8")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_PARSE
    logging.basicConfig(
        level=logging.DEBUG if args.verbose > 1 else logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    handler, _, _ = COMMANDS[args.command]
    try:
        doc, text = handler(args)
    except TropicalJacobianError as exc:
        logger.error("%s: %s", exc.kind, exc.detail)
        error = {"error": {"kind": exc.kind, "detail": exc.detail}}
        sys.stdout.write(json.dumps(error, separators=(",", ":")) + "\n")
        return EXIT_PARSE if isinstance(exc, MalformedInputError) else EXIT_DOMAIN
    if doc is None or args.format == "text":
        _emit(text, args.out)
    else:
        _emit(json.dumps(doc, separators=(",", ":")), args.out)
    logger.info("%s done", args.command)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
