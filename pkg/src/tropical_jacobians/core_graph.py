# Requires Python 3.12+
# Uses native type hints: list[x], tuple[x, y], X | None (PEP 585, PEP 604)
from __future__ import annotations

import logging
import re
from collections import defaultdict, deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import DisconnectedGraphError, InternalConsistencyError, MalformedInputError

__version__ = "0.1.0"

logger = logging.getLogger(__name__)

BASIS_LABEL = "bfs-v1"
PATH_STRATEGIES = ("bfs", "dfs")

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


# =============================================================================
# Exact rationals and identifiers
# =============================================================================
#
# The value group is realised as the rationals Q. Every length, offset and
# function value is a fractions.Fraction; floats are rejected at the door so
# that every rationality question stays decidable.
# =============================================================================

def parse_rational(value: object) -> Fraction:
    """
    Parse an exact rational from JSON-style input.

    Accepts Python ints, Fractions, and strings of the form "p/q" or "p".
    Decimal strings and floats are rejected.

    Raises:
        MalformedInputError: If the value is not an exact rational.
    """
    if isinstance(value, bool):
        raise MalformedInputError(f"expected a rational, got boolean {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str) and _RATIONAL_RE.match(value.strip()):
        try:
            return Fraction(value.strip())
        except ZeroDivisionError:
            raise MalformedInputError(f"zero denominator in rational {value!r}")
    raise MalformedInputError(f"expected a rational 'p/q' or an integer, got {value!r}")


def format_rational(value: Fraction | int) -> str:
    """Serialize a rational as "p/q", or "p" when the denominator is 1."""
    return str(Fraction(value))


def natural_key(identifier: str) -> tuple:
    """
    Sort key comparing ids as alternating text and integer runs (v2 < v10).

    re.split with a capturing group always puts text at even positions and
    digit runs at odd positions, so keys of different ids compare type-safely.
    """
    parts = re.split(r"(\d+)", identifier)
    return tuple(int(part) if k % 2 else part for k, part in enumerate(parts))


# =============================================================================
# Points of the metric graph
# =============================================================================

@dataclass(frozen=True)
class Vertex:
    """A vertex of the model."""
    id: str


@dataclass(frozen=True)
class EdgePoint:
    """
    A point in the interior of an edge, at distance `offset` from the edge source.

    Endpoint offsets are not representable here; MetricGraph.point() turns
    them into Vertex so that equal points compare equal.
    """
    edge: str
    offset: Fraction

    def __post_init__(self) -> None:
        offset = parse_rational(self.offset)
        if offset <= 0:
            raise MalformedInputError(
                f"edge offset must be positive, got {offset} on {self.edge}; use the source vertex"
            )
        object.__setattr__(self, "offset", offset)


GraphPoint = Vertex | EdgePoint


def point_key(point: GraphPoint) -> tuple:
    """Deterministic ordering of points: vertices first, then edge points."""
    if isinstance(point, Vertex):
        return (0, natural_key(point.id), Fraction(0))
    return (1, natural_key(point.edge), point.offset)


def point_to_json(point: GraphPoint) -> dict:
    if isinstance(point, Vertex):
        return {"vertex": point.id}
    return {"edge": point.edge, "offset": format_rational(point.offset)}


def point_to_text(point: GraphPoint) -> str:
    if isinstance(point, Vertex):
        return point.id
    return f"{point.edge}:{format_rational(point.offset)}"


# =============================================================================
# Edges and graphs
# =============================================================================

@dataclass(frozen=True)
class Edge:
    """An oriented edge src -> dst with exact positive length."""
    id: str
    src: str
    dst: str
    length: Fraction

    def __post_init__(self) -> None:
        length = parse_rational(self.length)
        if length <= 0:
            raise MalformedInputError(f"edge length must be positive, got {length} for {self.id}")
        object.__setattr__(self, "length", length)

    @property
    def is_loop(self) -> bool:
        return self.src == self.dst


@dataclass(frozen=True)
class MetricGraph:
    """
    A connected model of a metric graph: ordered vertices and oriented edges.

    The edge orientation fixed here defines the direction in which EdgePoint
    offsets grow, the sign of cycle coefficients, and the orientation of every
    piecewise-linear function stored on the edge.

    Raises:
        MalformedInputError: On duplicate ids, unknown endpoints or bad lengths.
        DisconnectedGraphError: If the model is not connected.
    """
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        if not self.vertices:
            raise MalformedInputError("graph must have at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise MalformedInputError("vertex ids must be unique")
        edge_ids = [edge.id for edge in self.edges]
        if len(set(edge_ids)) != len(edge_ids):
            raise MalformedInputError("edge ids must be unique")
        known = set(self.vertices)
        for edge in self.edges:
            if edge.src not in known or edge.dst not in known:
                raise MalformedInputError(
                    f"edge {edge.id} joins unknown vertices {edge.src!r} -> {edge.dst!r}"
                )
        self._check_connected()

    def _check_connected(self) -> None:
        n = len(self.vertices)
        if n == 1:
            return
        index = {v: k for k, v in enumerate(self.vertices)}
        rows = [index[edge.src] for edge in self.edges]
        cols = [index[edge.dst] for edge in self.edges]
        adjacency = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
        count, _ = connected_components(adjacency, directed=False)
        if count != 1:
            raise DisconnectedGraphError(f"graph has {count} connected components, expected 1")

    # --- lookups -------------------------------------------------------------

    @cached_property
    def _edges_by_id(self) -> dict[str, Edge]:
        return {edge.id: edge for edge in self.edges}

    def edge(self, edge_id: str) -> Edge:
        try:
            return self._edges_by_id[edge_id]
        except KeyError:
            raise MalformedInputError(f"unknown edge {edge_id!r}")

    def has_vertex(self, vertex_id: str) -> bool:
        return vertex_id in self._vertex_set

    @cached_property
    def _vertex_set(self) -> frozenset[str]:
        return frozenset(self.vertices)

    @cached_property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(edge.id for edge in self.edges)

    @cached_property
    def sorted_vertices(self) -> tuple[str, ...]:
        return tuple(sorted(self.vertices, key=natural_key))

    @cached_property
    def sorted_edges(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.edges, key=lambda edge: natural_key(edge.id)))

    @cached_property
    def incidences(self) -> dict[str, tuple[tuple[Edge, int], ...]]:
        """
        Edge-ends at each vertex, in natural edge-id order.

        Each entry is (edge, sign): sign +1 for the source end (leaving the
        vertex along the orientation), -1 for the target end. A loop
        contributes both of its ends.
        """
        ends: dict[str, list[tuple[Edge, int]]] = {v: [] for v in self.vertices}
        for edge in self.sorted_edges:
            ends[edge.src].append((edge, 1))
            ends[edge.dst].append((edge, -1))
        return {v: tuple(items) for v, items in ends.items()}

    @property
    def genus(self) -> int:
        """First Betti number m - n + 1."""
        return len(self.edges) - len(self.vertices) + 1

    @property
    def total_length(self) -> Fraction:
        return sum((edge.length for edge in self.edges), Fraction(0))

    # --- points --------------------------------------------------------------

    def point(self, edge_id: str, offset: Fraction | int | str) -> GraphPoint:
        """
        Canonical point at `offset` along `edge_id`: Vertex at either end,
        EdgePoint strictly inside.
        """
        edge = self.edge(edge_id)
        offset = parse_rational(offset)
        if offset < 0 or offset > edge.length:
            raise MalformedInputError(
                f"offset {offset} outside [0, {edge.length}] on edge {edge_id}"
            )
        if offset == 0:
            return Vertex(edge.src)
        if offset == edge.length:
            return Vertex(edge.dst)
        return EdgePoint(edge_id, offset)

    def validate_point(self, point: GraphPoint) -> GraphPoint:
        """Check that a point lies on this graph in canonical form."""
        if isinstance(point, Vertex):
            if not self.has_vertex(point.id):
                raise MalformedInputError(f"unknown vertex {point.id!r}")
            return point
        edge = self.edge(point.edge)
        if point.offset >= edge.length:
            raise MalformedInputError(
                f"offset {point.offset} is not interior to edge {edge.id} of length {edge.length}"
            )
        return point

    def point_from_json(self, data: Mapping) -> GraphPoint:
        if not isinstance(data, Mapping):
            raise MalformedInputError(f"point must be an object, got {data!r}")
        if "vertex" in data:
            return self.validate_point(Vertex(str(data["vertex"])))
        if "edge" in data and "offset" in data:
            return self.point(str(data["edge"]), data["offset"])
        raise MalformedInputError(f"point needs 'vertex' or 'edge'+'offset', got {data!r}")

    def point_from_text(self, text: str) -> GraphPoint:
        """Parse "v1" (vertex) or "e1:1/3" (point on an edge)."""
        if ":" in text:
            edge_id, offset = text.split(":", 1)
            return self.point(edge_id.strip(), offset.strip())
        return self.validate_point(Vertex(text.strip()))

    # --- value group ---------------------------------------------------------

    def is_lambda_rational(self, denominator: int) -> bool:
        """True if every edge length lies in (1/denominator)Z."""
        return all((edge.length * denominator).denominator == 1 for edge in self.edges)

    # --- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [
                {"id": e.id, "src": e.src, "dst": e.dst, "len": format_rational(e.length)}
                for e in self.edges
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> MetricGraph:
        """
        Build a graph from the documented JSON shape:
        {"vertices": [...], "edges": [{"id", "src", "dst", "len"}, ...]}.
        """
        if not isinstance(data, Mapping) or "vertices" not in data or "edges" not in data:
            raise MalformedInputError("graph JSON needs 'vertices' and 'edges'")
        vertices, entries = data["vertices"], data["edges"]
        if not isinstance(vertices, list) or not isinstance(entries, list):
            raise MalformedInputError("graph 'vertices' and 'edges' must be JSON arrays")
        for v in vertices:
            if isinstance(v, bool) or not isinstance(v, (str, int)):
                raise MalformedInputError(f"vertex ids must be strings or integers, got {v!r}")
        try:
            edges = tuple(
                Edge(str(item["id"]), str(item["src"]), str(item["dst"]), parse_rational(item["len"]))
                for item in entries
            )
        except (KeyError, TypeError) as exc:
            raise MalformedInputError(f"malformed edge entry: {exc}")
        return cls(tuple(str(v) for v in vertices), edges)


def is_lambda_rational(graph: MetricGraph, point: GraphPoint, denominator: int) -> bool:
    """
    Membership of a point in Γ(Λ) for the value group Λ = (1/denominator)Z.

    The model must itself be Λ-rational; a point inside an edge is then
    Λ-rational exactly when its offset is.
    """
    if denominator <= 0:
        raise ValueError(f"denominator must be positive, got {denominator}")
    if not graph.is_lambda_rational(denominator):
        return False
    graph.validate_point(point)
    if isinstance(point, Vertex):
        return True
    return (point.offset * denominator).denominator == 1


# =============================================================================
# Subdivision
# =============================================================================

@dataclass(frozen=True, eq=False)
class Relabeling:
    """
    Correspondence between a graph and one of its subdivisions.

    pieces maps each old edge id to its new edges as (new edge id, start
    offset, end offset) in offset order; created maps each new vertex id to
    the old point it sits on.
    """
    source: MetricGraph
    target: MetricGraph
    pieces: Mapping[str, tuple[tuple[str, Fraction, Fraction], ...]]
    created: Mapping[str, EdgePoint]

    def __call__(self, point: GraphPoint) -> GraphPoint:
        """Map a point of the source graph to the same point of the target."""
        if isinstance(point, Vertex):
            return point
        for piece_id, start, end in self.pieces[point.edge]:
            if start <= point.offset <= end:
                return self.target.point(piece_id, point.offset - start)
        raise MalformedInputError(f"offset {point.offset} outside edge {point.edge}")

    @cached_property
    def _origin(self) -> dict[str, tuple[str, Fraction]]:
        return {
            piece_id: (old_id, start)
            for old_id, items in self.pieces.items()
            for piece_id, start, _ in items
        }

    def origin(self, piece_id: str) -> tuple[str, Fraction]:
        """Old edge carrying a new edge, and the offset where the piece starts."""
        return self._origin[piece_id]

    def pull_back(self, point: GraphPoint) -> GraphPoint:
        """Map a point of the target graph back to the source graph."""
        if isinstance(point, Vertex):
            return self.created.get(point.id, point)
        old_id, start = self._origin[point.edge]
        return self.source.point(old_id, start + point.offset)


def _fresh_id(base: str, taken: set[str]) -> str:
    """`base`, or `base~2`, `base~3`, ... if that id is already used."""
    name, k = base, 1
    while name in taken:
        k += 1
        name = f"{base}~{k}"
    taken.add(name)
    return name


def subdivide(graph: MetricGraph, points: Iterable[GraphPoint]) -> tuple[MetricGraph, Relabeling]:
    """
    Insert every given point as a vertex.

    New vertices are named "<edge>@<offset>"; the pieces of a split edge are
    "<edge>.1", "<edge>.2", ... in offset order and keep the edge orientation.
    A generated name that is already a vertex or edge id gets a "~k" suffix.
    Unsplit edges and all old vertices keep their ids, so subdividing at
    existing vertices returns an equal graph.

    Args:
        graph: The model to refine.
        points: Points on the graph; vertices are accepted and ignored.

    Returns:
        (subdivided graph, Relabeling from the old graph to the new one)
    """
    cuts: dict[str, set[Fraction]] = defaultdict(set)
    for point in points:
        graph.validate_point(point)
        if isinstance(point, EdgePoint):
            cuts[point.edge].add(point.offset)

    taken = set(graph.vertices) | set(graph.edge_ids)
    vertices = list(graph.vertices)
    edges: list[Edge] = []
    pieces: dict[str, tuple[tuple[str, Fraction, Fraction], ...]] = {}
    created: dict[str, EdgePoint] = {}
    for edge in graph.edges:
        offsets = sorted(cuts.get(edge.id, ()))
        if not offsets:
            edges.append(edge)
            pieces[edge.id] = ((edge.id, Fraction(0), edge.length),)
            continue
        names = [_fresh_id(f"{edge.id}@{format_rational(t)}", taken) for t in offsets]
        for name, t in zip(names, offsets):
            created[name] = EdgePoint(edge.id, t)
        vertices.extend(names)
        chain = [edge.src, *names, edge.dst]
        bounds = [Fraction(0), *offsets, edge.length]
        items = []
        for k in range(len(chain) - 1):
            piece_id = _fresh_id(f"{edge.id}.{k + 1}", taken)
            edges.append(Edge(piece_id, chain[k], chain[k + 1], bounds[k + 1] - bounds[k]))
            items.append((piece_id, bounds[k], bounds[k + 1]))
        pieces[edge.id] = tuple(items)

    refined = MetricGraph(tuple(vertices), tuple(edges))
    return refined, Relabeling(graph, refined, pieces, created)


def is_simple_loopless(graph: MetricGraph) -> bool:
    """True if the model has no loop edges and no parallel edges."""
    seen: set[frozenset[str]] = set()
    for edge in graph.edges:
        if edge.is_loop:
            return False
        ends = frozenset((edge.src, edge.dst))
        if ends in seen:
            return False
        seen.add(ends)
    return True


def simple_loopless_subdivision(graph: MetricGraph) -> tuple[MetricGraph, Relabeling]:
    """
    Subdivide until the model is simple and loopless.

    A loop of length l gets points at l/3 and 2l/3; every member of a family
    of parallel edges gets its midpoint.
    """
    points: list[GraphPoint] = []
    families: dict[frozenset[str], list[Edge]] = defaultdict(list)
    for edge in graph.edges:
        if edge.is_loop:
            points.append(EdgePoint(edge.id, edge.length / 3))
            points.append(EdgePoint(edge.id, 2 * edge.length / 3))
        else:
            families[frozenset((edge.src, edge.dst))].append(edge)
    for family in families.values():
        if len(family) > 1:
            points.extend(EdgePoint(edge.id, edge.length / 2) for edge in family)
    return subdivide(graph, points)


def simple_loopless_model(graph: MetricGraph) -> MetricGraph:
    """Model of the same metric graph with no loops and no parallel edges."""
    model, _ = simple_loopless_subdivision(graph)
    return model


# A merged edge is a chain of old edges: (old edge id, start, end, sign) in
# offsets of the merged edge; sign -1 marks an old edge traversed backwards.
ChainPiece = tuple[str, Fraction, Fraction, int]


@dataclass(frozen=True, eq=False)
class Smoothing:
    """
    Point transport between a graph and its minimal model.

    chains maps every model edge to the old edges it runs through, in
    order; smoothed maps every removed vertex to its point on the model.
    """
    source: MetricGraph
    target: MetricGraph
    chains: Mapping[str, tuple[ChainPiece, ...]]
    smoothed: Mapping[str, EdgePoint]

    @cached_property
    def _placement(self) -> dict[str, tuple[str, Fraction, Fraction, int]]:
        return {
            old_id: (new_id, start, end, sign)
            for new_id, pieces in self.chains.items()
            for old_id, start, end, sign in pieces
        }

    def __call__(self, point: GraphPoint) -> GraphPoint:
        """Map a point of the source graph to the same point of the model."""
        if isinstance(point, Vertex):
            return self.smoothed.get(point.id, point)
        new_id, start, end, sign = self._placement[point.edge]
        return self.target.point(new_id, start + point.offset if sign > 0 else end - point.offset)

    def locate(self, edge_id: str, start: Fraction, end: Fraction) -> tuple[str, Fraction, Fraction]:
        """
        Old edge and old offsets of the model sub-edge [start, end].

        The sub-edge must lie on a single old edge; the offsets come back
        reversed when that edge runs against the model edge.
        """
        for old_id, lo, hi, sign in self.chains[edge_id]:
            if lo <= start and end <= hi:
                if sign > 0:
                    return old_id, start - lo, end - lo
                return old_id, hi - start, hi - end
        raise MalformedInputError(f"[{start}, {end}] on {edge_id} crosses a smoothed vertex")


def _reversed_chain(pieces: list[tuple[str, Fraction, int]]) -> list[tuple[str, Fraction, int]]:
    return [(old_id, length, -sign) for old_id, length, sign in reversed(pieces)]


def smooth_valence_two(graph: MetricGraph) -> tuple[MetricGraph, Smoothing]:
    """
    Smooth away valence-2 vertices, smallest id first.

    A vertex is smoothed when its two edge-ends belong to two distinct
    non-loop edges; the merged edge keeps the smaller id and that edge's
    orientation. On a cycle the last remaining vertex carries a loop and
    stays.

    Returns:
        (minimal model, Smoothing from the graph to the model)
    """
    vertices = list(graph.vertices)
    edges = list(graph.edges)
    runs: dict[str, list[tuple[str, Fraction, int]]] = {e.id: [(e.id, e.length, 1)] for e in graph.edges}
    while True:
        ends: dict[str, list[Edge]] = {v: [] for v in vertices}
        for edge in edges:
            ends[edge.src].append(edge)
            ends[edge.dst].append(edge)
        candidate = next(
            (
                v for v in sorted(vertices, key=natural_key)
                if len(ends[v]) == 2
                and ends[v][0].id != ends[v][1].id
                and not ends[v][0].is_loop
                and not ends[v][1].is_loop
            ),
            None,
        )
        if candidate is None:
            break
        keep, other = sorted(ends[candidate], key=lambda edge: natural_key(edge.id))
        far = other.dst if other.src == candidate else other.src
        length = keep.length + other.length
        tail = runs.pop(other.id)
        if keep.dst == candidate:
            merged = Edge(keep.id, keep.src, far, length)
            runs[keep.id] += tail if other.src == candidate else _reversed_chain(tail)
        else:
            merged = Edge(keep.id, far, keep.dst, length)
            runs[keep.id] = (tail if other.dst == candidate else _reversed_chain(tail)) + runs[keep.id]
        edges = [merged if edge.id == keep.id else edge for edge in edges if edge.id != other.id]
        vertices.remove(candidate)
        logger.debug("smoothed vertex %s into edge %s", candidate, keep.id)
    model = MetricGraph(tuple(vertices), tuple(edges))

    chains: dict[str, tuple[ChainPiece, ...]] = {}
    smoothed: dict[str, EdgePoint] = {}
    for new_id, run in runs.items():
        offset = Fraction(0)
        pieces = []
        for k, (old_id, length, sign) in enumerate(run):
            pieces.append((old_id, offset, offset + length, sign))
            offset += length
            if k < len(run) - 1:
                old = graph.edge(old_id)
                smoothed[old.dst if sign > 0 else old.src] = EdgePoint(new_id, offset)
        chains[new_id] = tuple(pieces)
    return model, Smoothing(graph, model, chains, smoothed)


def minimal_model(graph: MetricGraph) -> MetricGraph:
    """Model of the same metric graph with no smoothable valence-2 vertex."""
    model, _ = smooth_valence_two(graph)
    return model


# =============================================================================
# Spanning trees and the first homology
# =============================================================================

@dataclass(frozen=True, eq=False)
class SpanningTree:
    """
    A rooted spanning tree with, for every vertex, the integer 1-chain of the
    tree path from the root to it.
    """
    root: str
    edges: tuple[str, ...]
    chains: Mapping[str, Mapping[str, int]]

    def path(self, start: str, end: str) -> dict[str, int]:
        """Integer chain of the tree path start -> end."""
        chain: dict[str, int] = defaultdict(int)
        for edge_id, c in self.chains[end].items():
            chain[edge_id] += c
        for edge_id, c in self.chains[start].items():
            chain[edge_id] -= c
        return {edge_id: c for edge_id, c in chain.items() if c}


def spanning_tree(graph: MetricGraph, strategy: str = "bfs") -> SpanningTree:
    """
    Deterministic spanning tree rooted at the smallest vertex id.

    "bfs" visits vertices breadth-first, "dfs" depth-first; in both cases
    edge-ends at a vertex are examined in natural edge-id order and loops
    are skipped.
    """
    if strategy not in PATH_STRATEGIES:
        raise ValueError(f"strategy must be one of {PATH_STRATEGIES}, got {strategy!r}")
    root = graph.sorted_vertices[0]
    chains: dict[str, dict[str, int]] = {root: {}}
    tree: list[str] = []

    def reach(u: str, edge: Edge, sign: int) -> str | None:
        if edge.is_loop:
            return None
        w = edge.dst if sign > 0 else edge.src
        if w in chains:
            return None
        chains[w] = {**chains[u], edge.id: sign}
        tree.append(edge.id)
        return w

    if strategy == "bfs":
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for edge, sign in graph.incidences[u]:
                w = reach(u, edge, sign)
                if w is not None:
                    queue.append(w)
    else:
        stack = [(root, iter(graph.incidences[root]))]
        while stack:
            u, pending = stack[-1]
            for edge, sign in pending:
                w = reach(u, edge, sign)
                if w is not None:
                    stack.append((w, iter(graph.incidences[w])))
                    break
            else:
                stack.pop()
    return SpanningTree(root, tuple(tree), chains)


@dataclass(frozen=True)
class CycleBasis:
    """
    A Z-basis of H1 in edge coordinates.

    cycles has one row per basis cycle and one column per edge, columns in
    the graph's edge order (edge_ids). label names the convention that
    produced it; outputs that depend on the basis carry it along.
    """
    edge_ids: tuple[str, ...]
    cycles: tuple[tuple[int, ...], ...]
    tree_edges: tuple[str, ...] = ()
    label: str = BASIS_LABEL

    @property
    def genus(self) -> int:
        return len(self.cycles)

    @property
    def matrix(self) -> np.ndarray:
        """g x m integer matrix (object dtype, exact)."""
        out = np.zeros((self.genus, len(self.edge_ids)), dtype=object)
        for i, row in enumerate(self.cycles):
            for j, c in enumerate(row):
                out[i, j] = c
        return out

    def as_chain(self, i: int) -> dict[str, int]:
        return {eid: c for eid, c in zip(self.edge_ids, self.cycles[i]) if c}

    def transformed(self, unimodular: Iterable[Iterable[int]]) -> CycleBasis:
        """Basis whose rows are U times the rows of this basis."""
        rows = [[int(x) for x in row] for row in unimodular]
        if len(rows) != self.genus or any(len(row) != self.genus for row in rows):
            raise ValueError(f"change of basis must be {self.genus}x{self.genus}")
        cycles = tuple(
            tuple(sum(row[k] * self.cycles[k][j] for k in range(self.genus))
                  for j in range(len(self.edge_ids)))
            for row in rows
        )
        return CycleBasis(self.edge_ids, cycles, self.tree_edges, label="custom")


def cycle_boundary(graph: MetricGraph, chain: Mapping[str, int]) -> dict[str, int]:
    """Signed endpoint sum of an integer 1-chain (zero at every vertex for a cycle)."""
    boundary: dict[str, int] = defaultdict(int)
    for edge_id, c in chain.items():
        edge = graph.edge(edge_id)
        boundary[edge.dst] += c
        boundary[edge.src] -= c
    return {v: b for v, b in boundary.items() if b}


def homology_basis(graph: MetricGraph) -> CycleBasis:
    """
    Fundamental-cycle basis of H1(Γ, Z) from the BFS spanning tree.

    The tree is grown breadth-first from the smallest vertex id taking edges
    in id order. Each non-tree edge e = (a -> b) gives the cycle
    e + (tree path b -> a), so e has coefficient +1; rows follow non-tree
    edge ids in natural order.

    Example (theta graph, e1, e2, e3 all v -> w, tree {e1}):
        rows are e2 - e1 and e3 - e1.
    """
    tree = spanning_tree(graph, "bfs")
    in_tree = set(tree.edges)
    rows = []
    for edge in graph.sorted_edges:
        if edge.id in in_tree:
            continue
        chain: dict[str, int] = defaultdict(int)
        chain[edge.id] += 1
        for edge_id, c in tree.path(edge.dst, edge.src).items():
            chain[edge_id] += c
        rows.append(tuple(chain.get(eid, 0) for eid in graph.edge_ids))
    basis = CycleBasis(graph.edge_ids, tuple(rows), tree.edges)
    if basis.genus != graph.genus:
        raise InternalConsistencyError(f"basis rank {basis.genus} != genus {graph.genus}")
    return basis


def transport_cycle_basis(basis: CycleBasis, relabeling: Relabeling) -> CycleBasis:
    """
    The same cycles written on a subdivision: each piece inherits the
    coefficient of the edge it came from.
    """
    column = {eid: j for j, eid in enumerate(basis.edge_ids)}
    target = relabeling.target
    cycles = tuple(
        tuple(row[column[relabeling.origin(eid)[0]]] for eid in target.edge_ids)
        for row in basis.cycles
    )
    tree_edges: list[str] = []
    in_tree = set(basis.tree_edges)
    for old_id in basis.edge_ids:
        piece_ids = [piece_id for piece_id, _, _ in relabeling.pieces[old_id]]
        tree_edges.extend(piece_ids if old_id in in_tree else piece_ids[:-1])
    return CycleBasis(target.edge_ids, cycles, tuple(tree_edges), basis.label)
