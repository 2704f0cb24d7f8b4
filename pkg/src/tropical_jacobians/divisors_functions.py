# Requires Python 3.12+
# Uses native type hints: list[x], tuple[x, y], X | None (PEP 585, PEP 604)
from __future__ import annotations

from bisect import bisect_right
from collections import defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .core_graph import (
    EdgePoint,
    GraphPoint,
    MetricGraph,
    Relabeling,
    Vertex,
    format_rational,
    is_lambda_rational,
    parse_rational,
    point_key,
    point_to_json,
)
from .errors import GraphMismatchError, MalformedInputError, NonIntegerSlopeError

__version__ = "0.1.0"

Breakpoints = tuple[tuple[Fraction, Fraction], ...]


# =============================================================================
# Divisors
# =============================================================================
#
# A divisor is a finite formal Z-combination of points. Terms are kept
# merged, zero-free and sorted by point_key, so two divisors with the same
# multiplicities compare equal.
# =============================================================================

@dataclass(frozen=True)
class Divisor:
    terms: tuple[tuple[GraphPoint, int], ...] = ()

    def __post_init__(self) -> None:
        merged: dict[GraphPoint, int] = defaultdict(int)
        for point, mult in self.terms:
            if isinstance(mult, bool) or int(mult) != mult:
                raise MalformedInputError(f"multiplicity must be an integer, got {mult!r}")
            merged[point] += int(mult)
        terms = tuple(
            sorted(((p, m) for p, m in merged.items() if m), key=lambda item: point_key(item[0]))
        )
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_mapping(cls, mapping: Mapping[GraphPoint, int]) -> Divisor:
        return cls(tuple(mapping.items()))

    @classmethod
    def at(cls, point: GraphPoint, mult: int = 1) -> Divisor:
        return cls(((point, mult),))

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.terms)

    @property
    def support(self) -> tuple[GraphPoint, ...]:
        return tuple(p for p, _ in self.terms)

    @cached_property
    def _lookup(self) -> dict[GraphPoint, int]:
        return dict(self.terms)

    def multiplicity(self, point: GraphPoint) -> int:
        return self._lookup.get(point, 0)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: Divisor) -> Divisor:
        if not isinstance(other, Divisor):
            return NotImplemented
        return Divisor(self.terms + other.terms)

    def __neg__(self) -> Divisor:
        return Divisor(tuple((p, -m) for p, m in self.terms))

    def __sub__(self, other: Divisor) -> Divisor:
        if not isinstance(other, Divisor):
            return NotImplemented
        return self + (-other)

    def __rmul__(self, k: int) -> Divisor:
        return Divisor(tuple((p, k * m) for p, m in self.terms))

    def validate_on(self, graph: MetricGraph) -> Divisor:
        for point in self.support:
            graph.validate_point(point)
        return self

    def is_lambda_rational(self, graph: MetricGraph, denominator: int) -> bool:
        """True if every support point lies in Γ(Λ) for Λ = (1/denominator)Z."""
        return all(is_lambda_rational(graph, p, denominator) for p in self.support)

    def transported(self, relabeling: Relabeling) -> Divisor:
        """The same divisor written on a subdivision."""
        return Divisor(tuple((relabeling(p), m) for p, m in self.terms))

    def to_json(self) -> list[dict]:
        return [{"at": point_to_json(p), "mult": m} for p, m in self.terms]

    @classmethod
    def from_json(cls, data: object, graph: MetricGraph) -> Divisor:
        """Parse [{"at": {...}, "mult": k}, ...], normalizing points on `graph`."""
        if not isinstance(data, list):
            raise MalformedInputError("divisor JSON must be a list of {at, mult} entries")
        terms = []
        for item in data:
            if not isinstance(item, Mapping) or "at" not in item or "mult" not in item:
                raise MalformedInputError(f"malformed divisor entry {item!r}")
            mult = item["mult"]
            if isinstance(mult, bool) or not isinstance(mult, int):
                raise MalformedInputError(f"multiplicity must be an integer, got {mult!r}")
            terms.append((graph.point_from_json(item["at"]), mult))
        return cls(tuple(terms))


# =============================================================================
# Piecewise-linear functions
# =============================================================================

def _normalized(points: Breakpoints) -> Breakpoints:
    """Drop interior breakpoints where the slope does not change."""
    kept = [points[0]]
    for k in range(1, len(points) - 1):
        (t0, y0), (t1, y1), (t2, y2) = kept[-1], points[k], points[k + 1]
        if (y1 - y0) * (t2 - t1) != (y2 - y1) * (t1 - t0):
            kept.append(points[k])
    kept.append(points[-1])
    return tuple(kept)


@dataclass(frozen=True)
class PLFunction:
    """
    A continuous piecewise-linear function with rational slopes on a metric graph.

    pieces holds, for every edge, the breakpoints (offset, value) from offset 0
    to offset = length in increasing order, in the edge's own orientation.
    Collinear interior breakpoints are removed on construction, so equal
    functions have equal representations.

    Raises:
        MalformedInputError: If an edge is missing, offsets are out of order,
            or the edge values disagree with the vertex values.
    """
    graph: MetricGraph
    pieces: tuple[tuple[str, Breakpoints], ...]
    vertex_values: tuple[tuple[str, Fraction], ...]

    def __post_init__(self) -> None:
        graph = self.graph
        given = dict(self.pieces)
        values = {v: parse_rational(y) for v, y in dict(self.vertex_values).items()}
        if set(values) != set(graph.vertices):
            raise MalformedInputError("vertex values must cover exactly the graph vertices")
        if set(given) != set(graph.edge_ids):
            raise MalformedInputError("breakpoints must cover exactly the graph edges")
        pieces = []
        for edge in graph.edges:
            points = tuple((parse_rational(t), parse_rational(y)) for t, y in given[edge.id])
            if len(points) < 2 or points[0][0] != 0 or points[-1][0] != edge.length:
                raise MalformedInputError(
                    f"breakpoints on {edge.id} must run from 0 to {edge.length}"
                )
            if any(points[k][0] >= points[k + 1][0] for k in range(len(points) - 1)):
                raise MalformedInputError(f"breakpoint offsets on {edge.id} must increase")
            if points[0][1] != values[edge.src] or points[-1][1] != values[edge.dst]:
                raise MalformedInputError(f"function is discontinuous at an end of {edge.id}")
            pieces.append((edge.id, _normalized(points)))
        object.__setattr__(self, "pieces", tuple(pieces))
        object.__setattr__(self, "vertex_values", tuple((v, values[v]) for v in graph.vertices))

    # --- constructors --------------------------------------------------------

    @classmethod
    def from_vertex_values(cls, graph: MetricGraph, values: Mapping[str, Fraction | int]) -> PLFunction:
        """Function linear on every edge with the given vertex values."""
        values = {v: parse_rational(values[v]) for v in graph.vertices}
        pieces = tuple(
            (e.id, ((Fraction(0), values[e.src]), (e.length, values[e.dst])))
            for e in graph.edges
        )
        return cls(graph, pieces, tuple(values.items()))

    @classmethod
    def constant(cls, graph: MetricGraph, value: Fraction | int = 0) -> PLFunction:
        return cls.from_vertex_values(graph, {v: value for v in graph.vertices})

    @classmethod
    def from_breakpoints(
        cls,
        graph: MetricGraph,
        pieces: Mapping[str, Iterable[tuple[Fraction, Fraction]]],
        vertex_values: Mapping[str, Fraction | int] | None = None,
    ) -> PLFunction:
        """
        Build a function from edge breakpoints alone; vertex values are read
        off the edge ends. Isolated vertices default to 0 unless given.
        """
        values: dict[str, Fraction] = {
            v: parse_rational(y) for v, y in (vertex_values or {}).items()
        }
        pieces = {eid: tuple(points) for eid, points in pieces.items()}
        for edge in graph.edges:
            if edge.id not in pieces or not pieces[edge.id]:
                raise MalformedInputError(f"missing breakpoints for edge {edge.id}")
            values.setdefault(edge.src, parse_rational(pieces[edge.id][0][1]))
            values.setdefault(edge.dst, parse_rational(pieces[edge.id][-1][1]))
        for v in graph.vertices:
            values.setdefault(v, Fraction(0))
        return cls(graph, tuple(pieces.items()), tuple(values.items()))

    # --- access --------------------------------------------------------------

    @cached_property
    def _pieces(self) -> dict[str, Breakpoints]:
        return dict(self.pieces)

    @cached_property
    def _values(self) -> dict[str, Fraction]:
        return dict(self.vertex_values)

    def breakpoints(self, edge_id: str) -> Breakpoints:
        try:
            return self._pieces[edge_id]
        except KeyError:
            raise MalformedInputError(f"unknown edge {edge_id!r}")

    def slopes(self, edge_id: str) -> tuple[Fraction, ...]:
        points = self.breakpoints(edge_id)
        return tuple(
            (y1 - y0) / (t1 - t0) for (t0, y0), (t1, y1) in zip(points, points[1:])
        )

    def vertex_value(self, vertex_id: str) -> Fraction:
        return self._values[vertex_id]

    def evaluate(self, edge_id: str, offset: Fraction) -> Fraction:
        """Value at `offset` along `edge_id` by linear interpolation."""
        points = self.breakpoints(edge_id)
        offset = Fraction(offset)
        if offset < 0 or offset > points[-1][0]:
            raise MalformedInputError(f"offset {offset} outside edge {edge_id}")
        k = min(bisect_right([t for t, _ in points], offset), len(points) - 1)
        (t0, y0), (t1, y1) = points[k - 1], points[k]
        return y0 + (y1 - y0) * (offset - t0) / (t1 - t0)

    def value_at(self, point: GraphPoint) -> Fraction:
        if isinstance(point, Vertex):
            return self.vertex_value(point.id)
        return self.evaluate(point.edge, point.offset)

    def __add__(self, other: PLFunction) -> PLFunction:
        return add(self, other)

    def __neg__(self) -> PLFunction:
        return negate(self)

    def __sub__(self, other: PLFunction) -> PLFunction:
        return add(self, negate(other))

    # --- subdivision ---------------------------------------------------------

    def transported(self, relabeling: Relabeling) -> PLFunction:
        """The same function on a subdivision of its graph."""
        if relabeling.source != self.graph:
            raise GraphMismatchError("relabeling does not start at this function's graph")
        pieces = {}
        for old_id, items in relabeling.pieces.items():
            points = self.breakpoints(old_id)
            for piece_id, start, end in items:
                inside = [(t, y) for t, y in points if start < t < end]
                pieces[piece_id] = (
                    (Fraction(0), self.evaluate(old_id, start)),
                    *((t - start, y) for t, y in inside),
                    (end - start, self.evaluate(old_id, end)),
                )
        values = {v: self.value_at(relabeling.pull_back(Vertex(v))) for v in relabeling.target.vertices}
        return PLFunction(relabeling.target, tuple(pieces.items()), tuple(values.items()))

    @classmethod
    def pulled_back(cls, function: PLFunction, relabeling: Relabeling) -> PLFunction:
        """Fold a function on a subdivision back onto the coarser graph."""
        if relabeling.target != function.graph:
            raise GraphMismatchError("relabeling does not end at this function's graph")
        pieces = {}
        for old_id, items in relabeling.pieces.items():
            points: list[tuple[Fraction, Fraction]] = []
            for piece_id, start, _ in items:
                shifted = [(start + t, y) for t, y in function.breakpoints(piece_id)]
                points.extend(shifted[1:] if points else shifted)
            pieces[old_id] = tuple(points)
        values = {v: function.vertex_value(v) for v in relabeling.source.vertices}
        return cls(relabeling.source, tuple(pieces.items()), tuple(values.items()))

    # --- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "vertex_values": {v: format_rational(y) for v, y in self.vertex_values},
            "edges": {
                eid: [[format_rational(t), format_rational(y)] for t, y in points]
                for eid, points in self.pieces
            },
        }

    @classmethod
    def from_json(cls, data: Mapping, graph: MetricGraph) -> PLFunction:
        if not isinstance(data, Mapping) or "edges" not in data:
            raise MalformedInputError("function JSON needs 'edges'")
        try:
            pieces = {
                str(eid): tuple((parse_rational(t), parse_rational(y)) for t, y in points)
                for eid, points in data["edges"].items()
            }
        except (TypeError, ValueError, AttributeError) as exc:
            if isinstance(exc, MalformedInputError):
                raise
            raise MalformedInputError(f"malformed breakpoints: {exc}")
        return cls.from_breakpoints(graph, pieces, data.get("vertex_values"))


# =============================================================================
# Operations
# =============================================================================

def is_integer_sloped(function: PLFunction) -> bool:
    """True if every slope on every edge is an integer (a tropical meromorphic function)."""
    return all(s.denominator == 1 for eid in function.graph.edge_ids for s in function.slopes(eid))


def divisor_of(function: PLFunction, graph: MetricGraph | None = None) -> Divisor:
    """
    Divisor of an integer-sloped function: the sum of outgoing slopes at each point.

    At a vertex every edge-end contributes the slope leaving the vertex:
    the first slope at a source end, minus the last slope at a target end
    (a loop contributes both). At an interior breakpoint the multiplicity is
    the right slope minus the left slope.

    Example (segment of length 2, F = t on [0, 1] and 1 on [1, 2]):
        div F = (v1) - (e1:1)

    Raises:
        GraphMismatchError: If `graph` is given and differs from the function's.
        NonIntegerSlopeError: If some slope is not an integer.
    """
    if graph is not None and graph != function.graph:
        raise GraphMismatchError("function is not defined on the given graph")
    graph = function.graph
    slopes = {eid: function.slopes(eid) for eid in graph.edge_ids}
    for eid, values in slopes.items():
        for s in values:
            if s.denominator != 1:
                raise NonIntegerSlopeError(f"slope {s} on edge {eid} is not an integer")

    mults: dict[GraphPoint, int] = defaultdict(int)
    for v, ends in graph.incidences.items():
        for edge, sign in ends:
            s = slopes[edge.id]
            mults[Vertex(v)] += int(s[0]) if sign > 0 else -int(s[-1])
    for eid, values in slopes.items():
        points = function.breakpoints(eid)
        for k in range(1, len(points) - 1):
            mults[EdgePoint(eid, points[k][0])] += int(values[k] - values[k - 1])
    return Divisor.from_mapping(mults)


def add(f: PLFunction, g: PLFunction) -> PLFunction:
    """Pointwise sum; the breakpoint set is the union of both."""
    if f.graph != g.graph:
        raise GraphMismatchError("cannot add functions on different graphs")
    pieces = {}
    for eid in f.graph.edge_ids:
        offsets = sorted({t for t, _ in f.breakpoints(eid)} | {t for t, _ in g.breakpoints(eid)})
        pieces[eid] = tuple((t, f.evaluate(eid, t) + g.evaluate(eid, t)) for t in offsets)
    values = {v: f.vertex_value(v) + g.vertex_value(v) for v in f.graph.vertices}
    return PLFunction(f.graph, tuple(pieces.items()), tuple(values.items()))


def negate(f: PLFunction) -> PLFunction:
    pieces = tuple((eid, tuple((t, -y) for t, y in points)) for eid, points in f.pieces)
    return PLFunction(f.graph, pieces, tuple((v, -y) for v, y in f.vertex_values))


def add_constant(f: PLFunction, c: Fraction | int) -> PLFunction:
    c = parse_rational(c)
    pieces = tuple((eid, tuple((t, y + c) for t, y in points)) for eid, points in f.pieces)
    return PLFunction(f.graph, pieces, tuple((v, y + c) for v, y in f.vertex_values))
