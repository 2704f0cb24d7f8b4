# Requires Python 3.12+
# Uses native type hints: list[x], tuple[x, y], X | None (PEP 585, PEP 604)
from __future__ import annotations

import logging
import math
import warnings
from collections import defaultdict
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np
from sympy import prime

from .core_graph import (
    EdgePoint,
    MetricGraph,
    Vertex,
    format_rational,
    is_simple_loopless,
    natural_key,
    simple_loopless_subdivision,
    smooth_valence_two,
    subdivide,
)
from .divisors_functions import PLFunction
from .errors import CertificationFailure, ModelNotSimpleError

__version__ = "0.1.0"

logger = logging.getLogger(__name__)

Point3 = tuple[Fraction, Fraction, Fraction]
Direction = tuple[int, int, int]


@dataclass(frozen=True)
class EmbeddingOptions:
    """
    Knobs for embed().

    Attributes:
        perturb_on_failure: retry with vertex values i + 1/p_i (p_i the i-th
            prime) if certification fails
        max_workers: thread count for the pairwise intersection pass;
            None or 1 runs it inline
    """
    perturb_on_failure: bool = False
    max_workers: int | None = None


# =============================================================================
# Coordinate functions
# =============================================================================
#
# On a simple loopless model the three functions are:
#   F1: tent of slope +1 then -1 about each edge midpoint, zero at vertices
#   F2: tent of slope +σ then -σ, σ the position of the edge in id order
#   F3: plateaus at the vertex values α joined by an integer-slope ramp
#       centred on the midpoint
# F1 forces gcd 1 on every segment, so each segment is isometric for the
# lattice length. F2 separates edges, F3 separates vertices and the two
# halves of each edge.
# =============================================================================

def _require_simple(graph: MetricGraph) -> None:
    if not is_simple_loopless(graph):
        raise ModelNotSimpleError("model has a loop or parallel edges; use simple_loopless_model")


def _tent(graph: MetricGraph, heights: dict[str, int]) -> PLFunction:
    pieces = {
        e.id: ((Fraction(0), Fraction(0)), (e.length / 2, heights[e.id] * e.length / 2), (e.length, Fraction(0)))
        for e in graph.edges
    }
    return PLFunction.from_breakpoints(graph, pieces, {v: 0 for v in graph.vertices})


def edge_weights(graph: MetricGraph) -> dict[str, int]:
    """σ_i = i for edges in natural id order."""
    return {edge.id: i for i, edge in enumerate(graph.sorted_edges, start=1)}


def vertex_levels(graph: MetricGraph, perturbed: bool = False) -> dict[str, Fraction]:
    """α_i = i for vertices in natural id order, or i + 1/p_i when perturbed."""
    return {
        v: Fraction(i) + (Fraction(1, int(prime(i))) if perturbed else 0)
        for i, v in enumerate(graph.sorted_vertices, start=1)
    }


def build_F1(graph: MetricGraph) -> PLFunction:
    """Unit tent on every edge, peak ℓ/2 at the midpoint."""
    _require_simple(graph)
    return _tent(graph, {edge.id: 1 for edge in graph.edges})


def build_F2(graph: MetricGraph, weights: dict[str, int] | None = None) -> PLFunction:
    """Tent of slope ±σ_e on every edge, peak σ_e·ℓ/2."""
    _require_simple(graph)
    return _tent(graph, weights or edge_weights(graph))


def ramp_parameters(length: Fraction, start: Fraction, end: Fraction) -> tuple[int, Fraction]:
    """
    Signed ramp slope μ and half-width δ for a plateau-ramp-plateau piece.

    |μ| = max(1, ceil(2|Δ|/ℓ)) with Δ = end - start, and δ = |Δ|/(2|μ|),
    so that δ <= ℓ/4.

    Example:
        ℓ = 2, start = 1, end = 2 -> (1, 1/2)
    """
    delta = Fraction(end) - Fraction(start)
    if delta == 0:
        raise ValueError("ramp needs distinct end values")
    mu = max(1, math.ceil(2 * abs(delta) / length))
    return (mu if delta > 0 else -mu), abs(delta) / (2 * mu)


def build_F3(graph: MetricGraph, levels: dict[str, Fraction] | None = None) -> PLFunction:
    """Plateau at α_src, integer-slope ramp across the midpoint, plateau at α_dst."""
    _require_simple(graph)
    levels = levels or vertex_levels(graph)
    pieces = {}
    for edge in graph.edges:
        a, b = levels[edge.src], levels[edge.dst]
        _, half = ramp_parameters(edge.length, a, b)
        mid = edge.length / 2
        pieces[edge.id] = (
            (Fraction(0), a), (mid - half, a), (mid + half, b), (edge.length, b),
        )
    return PLFunction.from_breakpoints(graph, pieces, levels)


# =============================================================================
# Embedded complex
# =============================================================================

@dataclass(frozen=True)
class SubEdge:
    """
    A piece of an edge between two offsets.

    start > end when the piece is traversed against the edge orientation.
    """
    edge: str
    start: Fraction
    end: Fraction

    @property
    def length(self) -> Fraction:
        return abs(self.end - self.start)


@dataclass(frozen=True)
class Segment3D:
    """
    Image of one edge of the refined model G″.

    direction is the integer slope vector (dF1, dF2, dF3) along the G″ edge;
    nodes are the G″ vertices at the start and end. source is the piece of
    an edge of the input graph the segment comes from, with source.start
    mapping to start.
    """
    start: Point3
    end: Point3
    source: SubEdge
    direction: Direction
    nodes: tuple[str, str]
    multiplicity: int = 1

    @property
    def lattice_length(self) -> Fraction:
        """Length in units of the primitive vector along the segment."""
        g = math.gcd(*self.direction)
        k = next(i for i, d in enumerate(self.direction) if d)
        return (self.end[k] - self.start[k]) / self.direction[k] * g

    def to_json(self) -> dict:
        return {
            "a": [format_rational(x) for x in self.start],
            "b": [format_rational(x) for x in self.end],
            "dir": list(self.direction),
            "mult": self.multiplicity,
            "src": {
                "edge": self.source.edge,
                "from": format_rational(self.source.start),
                "to": format_rational(self.source.end),
            },
        }


@dataclass(frozen=True)
class Embedding3D:
    """
    Piecewise-linear map of a metric graph into Q³.

    Attributes:
        graph: the input graph; segment sources refer to its edges
        model: simple loopless model the functions live on
        subdivision: common breakpoint refinement G″ of the three functions,
            also cut over every vertex the minimal model smoothed away
        segments: one per G″ edge, ordered by model edge then offset
        vertex_images: image of every G″ vertex
        functions: (F1, F2, F3) on the model
    """
    graph: MetricGraph
    model: MetricGraph
    subdivision: MetricGraph
    segments: tuple[Segment3D, ...]
    vertex_images: tuple[tuple[str, Point3], ...]
    functions: tuple[PLFunction, PLFunction, PLFunction] = field(compare=False, repr=False)

    def image_of(self, vertex_id: str) -> Point3:
        return dict(self.vertex_images)[vertex_id]

    def _outgoing(self, k: int, vertex_id: str) -> Direction:
        s = self.segments[k]
        return s.direction if s.nodes[0] == vertex_id else tuple(-x for x in s.direction)

    def image_set(self) -> frozenset[frozenset[Point3]]:
        """
        The image as maximal straight segments, each an unordered endpoint pair.

        Segments meeting straight through a G″ vertex of valence 2 are
        joined, so two embeddings with the same image point set compare equal.
        """
        incident: dict[str, list[int]] = defaultdict(list)
        for k, s in enumerate(self.segments):
            for node in s.nodes:
                incident[node].append(k)
        parent = list(range(len(self.segments)))

        def find(k: int) -> int:
            while parent[k] != k:
                parent[k] = parent[parent[k]]
                k = parent[k]
            return k

        for v, ks in incident.items():
            if len(ks) == 2 and self._outgoing(ks[0], v) == tuple(-x for x in self._outgoing(ks[1], v)):
                parent[find(ks[0])] = find(ks[1])
        groups: dict[int, list[Segment3D]] = defaultdict(list)
        for k, s in enumerate(self.segments):
            groups[find(k)].append(s)
        out = set()
        for members in groups.values():
            d = members[0].direction
            points = [p for s in members for p in (s.start, s.end)]
            ends = sorted(points, key=lambda p: _dot(p, d))
            out.add(frozenset((ends[0], ends[-1])))
        return frozenset(out)

    def to_json(self) -> dict:
        return {
            "subdivision": self.subdivision.to_dict(),
            "segments": [s.to_json() for s in self.segments],
        }


@dataclass(frozen=True)
class Ray:
    vertex: Point3
    direction: Direction
    multiplicity: int

    def to_json(self) -> dict:
        return {
            "at": [format_rational(x) for x in self.vertex],
            "dir": list(self.direction),
            "mult": self.multiplicity,
        }


@dataclass(frozen=True)
class BalancedComplex:
    embedding: Embedding3D
    rays: tuple[Ray, ...]

    def to_json(self) -> dict:
        return {**self.embedding.to_json(), "rays": [r.to_json() for r in self.rays]}


@dataclass(frozen=True)
class CertificationReport:
    segments: int
    pairs_tested: int
    total_lattice_length: Fraction


# =============================================================================
# Exact segment geometry in Q³
# =============================================================================

def _sub(a: Point3, b: Point3) -> Point3:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _dot(a: Point3, b: Point3) -> Fraction:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _cross(a: Point3, b: Point3) -> Point3:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def _along(a: Point3, d: Point3, t: Fraction) -> Point3:
    return (a[0] + t * d[0], a[1] + t * d[1], a[2] + t * d[2])


def _boxes_disjoint(a0: Point3, a1: Point3, b0: Point3, b1: Point3) -> bool:
    return any(
        max(a0[k], a1[k]) < min(b0[k], b1[k]) or max(b0[k], b1[k]) < min(a0[k], a1[k])
        for k in range(3)
    )


def segment_intersection(
    a0: Point3, a1: Point3, b0: Point3, b1: Point3
) -> None | Point3 | tuple[Point3, Point3]:
    """
    Exact intersection of the closed segments [a0, a1] and [b0, b1] in Q³.

    Returns:
        None if disjoint, the point if they meet in one point, or the
        endpoints of the common sub-segment if they overlap.
    """
    if _boxes_disjoint(a0, a1, b0, b1):
        return None
    d = _sub(a1, a0)
    e = _sub(b1, b0)
    r = _sub(b0, a0)
    n = _cross(d, e)
    nn = _dot(n, n)
    if nn != 0:
        if _dot(r, n) != 0:
            return None
        t = _dot(_cross(r, e), n) / nn
        u = _dot(_cross(r, d), n) / nn
        if 0 <= t <= 1 and 0 <= u <= 1:
            return _along(a0, d, t)
        return None
    if any(_cross(r, d)):
        return None
    dd = _dot(d, d)
    t0 = _dot(r, d) / dd
    t1 = _dot(_sub(b1, a0), d) / dd
    lo, hi = max(Fraction(0), min(t0, t1)), min(Fraction(1), max(t0, t1))
    if lo > hi:
        return None
    if lo == hi:
        return _along(a0, d, lo)
    return _along(a0, d, lo), _along(a0, d, hi)


# =============================================================================
# Construction, certification and balancing
# =============================================================================

SourceMap = Callable[[str, Fraction, Fraction], SubEdge]


def _reduce(graph: MetricGraph) -> tuple[MetricGraph, tuple[EdgePoint, ...], SourceMap]:
    """
    Simple loopless model of the minimal model of `graph`.

    Also returns the model points lying over smoothed vertices and the map
    taking a model sub-edge to the sub-edge of `graph` it covers.
    """
    minimal, smoothing = smooth_valence_two(graph)
    model, relabeling = simple_loopless_subdivision(minimal)
    over_smoothed = tuple(
        p for p in (relabeling(q) for q in smoothing.smoothed.values()) if isinstance(p, EdgePoint)
    )

    def source(edge_id: str, start: Fraction, end: Fraction) -> SubEdge:
        minimal_edge, offset = relabeling.origin(edge_id)
        return SubEdge(*smoothing.locate(minimal_edge, offset + start, offset + end))

    return model, over_smoothed, source


def _embed_model(
    graph: MetricGraph,
    model: MetricGraph,
    levels: dict[str, Fraction],
    extra_cuts: tuple[EdgePoint, ...],
    source: SourceMap,
) -> Embedding3D:
    functions = (build_F1(model), build_F2(model), build_F3(model, levels))
    cuts = {
        EdgePoint(edge.id, t)
        for f in functions
        for edge in model.edges
        for t, _ in f.breakpoints(edge.id)[1:-1]
    } | set(extra_cuts)
    refined, relabeling = subdivide(model, sorted(cuts, key=lambda p: (natural_key(p.edge), p.offset)))

    images: dict[str, Point3] = {}
    for v in refined.vertices:
        point = relabeling.pull_back(Vertex(v))
        images[v] = tuple(f.value_at(point) for f in functions)

    segments = []
    for edge in model.edges:
        for piece_id, start, end in relabeling.pieces[edge.id]:
            piece = refined.edge(piece_id)
            a, b = images[piece.src], images[piece.dst]
            slopes = [(y1 - y0) / piece.length for y0, y1 in zip(a, b)]
            if any(s.denominator != 1 for s in slopes):
                raise CertificationFailure(f"non-integer slope on {piece_id}")
            segments.append(
                Segment3D(a, b, source(edge.id, start, end), tuple(int(s) for s in slopes), (piece.src, piece.dst))
            )
    return Embedding3D(graph, model, refined, tuple(segments), tuple(images.items()), functions)


def _pair_problem(embedding: Embedding3D, images: dict[str, Point3], i: int, j: int) -> str | None:
    s, t = embedding.segments[i], embedding.segments[j]
    meet = segment_intersection(s.start, s.end, t.start, t.end)
    if meet is None:
        return None
    shared = set(s.nodes) & set(t.nodes)
    if len(shared) == 1 and not isinstance(meet[0], tuple) and meet == images[shared.pop()]:
        return None
    return f"segments {s.source} and {t.source} intersect at {meet}"


def certify(embedding: Embedding3D, max_workers: int | None = None) -> CertificationReport:
    """
    Verify that the embedding is an isometry onto its image.

    Checks every segment for a primitive integer direction and a lattice
    length equal to its source length, then every pair of segments for
    intersections other than a shared endpoint image.

    Raises:
        CertificationFailure: On the first violated condition.
    """
    total = Fraction(0)
    for s in embedding.segments:
        if math.gcd(*s.direction) != 1:
            raise CertificationFailure(f"direction {s.direction} of {s.source} is not primitive")
        if s.lattice_length != s.source.length:
            raise CertificationFailure(
                f"lattice length {s.lattice_length} of {s.source} differs from {s.source.length}"
            )
        total += s.lattice_length
    images = dict(embedding.vertex_images)
    if len(set(images.values())) != len(images):
        raise CertificationFailure("two vertices share an image point")

    pairs = list(combinations(range(len(embedding.segments)), 2))
    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            problems = list(executor.map(lambda ij: _pair_problem(embedding, images, *ij), pairs))
    else:
        problems = [_pair_problem(embedding, images, i, j) for i, j in pairs]
    for problem in problems:
        if problem is not None:
            raise CertificationFailure(problem)
    logger.debug("certified %d segments, %d pairs", len(embedding.segments), len(pairs))
    return CertificationReport(len(embedding.segments), len(pairs), total)


def embed(graph: MetricGraph, options: EmbeddingOptions | None = None) -> Embedding3D:
    """
    Certified isometric embedding of a metric graph into Q³.

    The graph is reduced to its minimal model, made simple and loopless,
    and mapped by (F1, F2, F3); the result is certified before it is
    returned. Segment sources are pieces of edges of `graph` itself.

    Subdividing the graph first gives the same image point set, except on
    a graph that is a single cycle: its minimal model is one loop at the
    largest vertex id, and the image depends on which vertex that is.

    Raises:
        CertificationFailure: If certification fails (and, with
            perturb_on_failure, fails again with perturbed vertex values).
    """
    options = options or EmbeddingOptions()
    model, over_smoothed, source = _reduce(graph)
    try:
        embedding = _embed_model(graph, model, vertex_levels(model), over_smoothed, source)
        certify(embedding, options.max_workers)
    except CertificationFailure as exc:
        if not options.perturb_on_failure:
            raise
        warnings.warn(f"certification failed ({exc}); retrying with perturbed vertex values")
        embedding = _embed_model(graph, model, vertex_levels(model, perturbed=True), over_smoothed, source)
        certify(embedding, options.max_workers)
    return embedding


def _primitive(v: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
    g = math.gcd(*v)
    return tuple(x // g for x in v), g


def _vertex_sums(embedding: Embedding3D) -> dict[str, list[int]]:
    sums = {v: [0, 0, 0] for v in embedding.subdivision.vertices}
    for s in embedding.segments:
        u, _ = _primitive(s.direction)
        start, end = s.nodes
        for k in range(3):
            sums[start][k] += s.multiplicity * u[k]
            sums[end][k] -= s.multiplicity * u[k]
    return sums


def balance(embedding: Embedding3D) -> BalancedComplex:
    """
    Complete the embedding with rays so that every vertex is balanced.

    At each image vertex the defect is minus the weighted sum of primitive
    outgoing directions; a nonzero defect becomes one ray of direction
    defect/g and multiplicity g, g the gcd of its entries.
    """
    sums = _vertex_sums(embedding)
    rays = []
    for v in sorted(sums, key=natural_key):
        defect = tuple(-x for x in sums[v])
        if any(defect):
            direction, g = _primitive(defect)
            rays.append(Ray(embedding.image_of(v), direction, g))
    return BalancedComplex(embedding, tuple(rays))


def is_balanced(complex_: BalancedComplex) -> bool:
    """Σ m·u = 0 at every vertex, over segments and rays."""
    sums = _vertex_sums(complex_.embedding)
    by_point = {point: v for v, point in complex_.embedding.vertex_images}
    for ray in complex_.rays:
        v = by_point.get(ray.vertex)
        if v is None:
            return False
        for k in range(3):
            sums[v][k] += ray.multiplicity * ray.direction[k]
    return all(not any(s) for s in sums.values())


def plot_rows(embedding: Embedding3D) -> np.ndarray:
    """Float rows (segment, x, y, z), two per segment, for external plotting."""
    rows = np.zeros((2 * len(embedding.segments), 4), dtype=float)
    for k, s in enumerate(embedding.segments):
        rows[2 * k] = (k, *(float(x) for x in s.start))
        rows[2 * k + 1] = (k, *(float(x) for x in s.end))
    return rows
