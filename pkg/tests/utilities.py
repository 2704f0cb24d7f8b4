"""
Test Suite Utilities for tropical-jacobians

Provides random metric graph, function, divisor and change-of-basis
generators, plus fixture paths, for the property tests.

Version: 0.1.0
Last Updated: 2026-10-17
Status: Active
"""

from __future__ import annotations

import numpy as np
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from tropical_jacobians.core_graph import Edge, EdgePoint, GraphPoint, MetricGraph, Vertex
from tropical_jacobians.divisors_functions import Divisor, PLFunction


# =============================================================================
# Random Seed for Reproducibility
# =============================================================================

RANDOM_SEED = 42


def get_random_state(seed: int = RANDOM_SEED) -> np.random.RandomState:
    """Get a reproducible random state."""
    return np.random.RandomState(seed)


def _randint(rng: np.random.RandomState, low: int, high: int) -> int:
    """Integer in [low, high] inclusive, as a Python int."""
    return int(rng.randint(low, high + 1))


def random_fraction(rng: np.random.RandomState, max_num: int = 24, max_den: int = 12, positive: bool = True) -> Fraction:
    value = Fraction(_randint(rng, 1, max_num), _randint(rng, 1, max_den))
    if not positive and rng.rand() < 0.5:
        value = -value
    return value


# =============================================================================
# Random Graphs
# =============================================================================

@dataclass
class GraphCase:
    """A generated graph with the seed index it came from."""
    case_id: int
    graph: MetricGraph

    @property
    def genus(self) -> int:
        return self.graph.genus


# Corpus bounds (vertex and total edge counts) used across test modules.
ABEL_CORPUS: dict = {"max_vertices": 8, "max_edges": 12}
DISCRETE_CORPUS: dict = {"max_vertices": 7, "max_edges": 14, "unit_lengths": True}
EMBEDDING_CORPUS: dict = {"max_vertices": 6, "max_edges": 9}


def random_metric_graph(
    rng: np.random.RandomState,
    max_vertices: int = ABEL_CORPUS["max_vertices"],
    max_edges: int = ABEL_CORPUS["max_edges"],
    allow_loops: bool = True,
    unit_lengths: bool = False,
) -> MetricGraph:
    """
    Random connected multigraph: a random tree plus extra edges, random
    orientations, rational lengths p/q with p <= 24 and q <= 12.

    At most max_vertices vertices and max_edges edges in total.
    """
    n = _randint(rng, 1, max_vertices)
    vertices = [f"v{i}" for i in range(1, n + 1)]
    pairs = []
    for i in range(2, n + 1):
        parent = vertices[_randint(rng, 1, i - 1) - 1]
        pairs.append((parent, vertices[i - 1]))
    for _ in range(_randint(rng, 0, max(0, max_edges - (n - 1)))):
        a = vertices[_randint(rng, 1, n) - 1]
        b = vertices[_randint(rng, 1, n) - 1]
        if a == b and not allow_loops:
            continue
        pairs.append((a, b))
    edges = []
    for k, (a, b) in enumerate(pairs, start=1):
        if rng.rand() < 0.5:
            a, b = b, a
        length = Fraction(1) if unit_lengths else random_fraction(rng)
        edges.append(Edge(f"e{k}", a, b, length))
    return MetricGraph(tuple(vertices), tuple(edges))


def generate_random_graphs(count: int, seed: int = RANDOM_SEED, **kwargs) -> list[GraphCase]:
    rng = get_random_state(seed)
    return [GraphCase(k, random_metric_graph(rng, **kwargs)) for k in range(count)]


# =============================================================================
# Random Functions and Divisors
# =============================================================================

def random_integer_sloped_function(graph: MetricGraph, rng: np.random.RandomState) -> PLFunction:
    """
    Random tropical meromorphic function: random rational vertex values and,
    on each edge, at most one breakpoint joining integer slopes s1 > s2.

    With Δ the value change over an edge of length ℓ, s2 = floor(Δ/ℓ) - j and
    s1 = s2 + 1 + j + k; the breakpoint sits where the two lines meet, which
    is strictly inside the edge once j = 1 is forced for integral Δ/ℓ.
    """
    values = {v: random_fraction(rng, 12, 6, positive=False) for v in graph.vertices}
    pieces = {}
    for edge in graph.edges:
        a, b = values[edge.src], values[edge.dst]
        length = edge.length
        ratio = (b - a) / length
        if ratio.denominator == 1 and rng.rand() < 0.3:
            pieces[edge.id] = ((Fraction(0), a), (length, b))
            continue
        j = _randint(rng, 0, 2)
        k = _randint(rng, 0, 2)
        s2 = (ratio.numerator // ratio.denominator) - j
        if (b - a) - s2 * length == 0:
            j += 1
            s2 -= 1
        s1 = s2 + 1 + j + k
        t = ((b - a) - s2 * length) / (s1 - s2)
        if rng.rand() < 0.5:
            # mirror: slope s2 first, then s1
            t = length - t
            pieces[edge.id] = ((Fraction(0), a), (t, a + s2 * t), (length, b))
        else:
            pieces[edge.id] = ((Fraction(0), a), (t, a + s1 * t), (length, b))
    return PLFunction.from_breakpoints(graph, pieces, values)


def random_point(graph: MetricGraph, rng: np.random.RandomState) -> GraphPoint:
    """A vertex or a random rational interior point of an edge."""
    if not graph.edges or rng.rand() < 0.3:
        return Vertex(graph.vertices[_randint(rng, 1, len(graph.vertices)) - 1])
    edge = graph.edges[_randint(rng, 1, len(graph.edges)) - 1]
    offset = edge.length * Fraction(_randint(rng, 1, 11), 12)
    return graph.point(edge.id, offset)


def random_degree_zero_divisor(graph: MetricGraph, rng: np.random.RandomState, size: int = 4) -> Divisor:
    terms = [(random_point(graph, rng), _randint(rng, -3, 3)) for _ in range(size)]
    divisor = Divisor(tuple(terms))
    return divisor - divisor.degree * Divisor.at(Vertex(graph.sorted_vertices[0]))


def random_vertex_divisor(graph: MetricGraph, rng: np.random.RandomState) -> Divisor:
    terms = [(Vertex(v), _randint(rng, -3, 3)) for v in graph.vertices]
    divisor = Divisor(tuple(terms))
    return divisor - divisor.degree * Divisor.at(Vertex(graph.sorted_vertices[0]))


def random_unimodular(size: int, rng: np.random.RandomState, steps: int = 6) -> list[list[int]]:
    """Product of random elementary integer matrices (determinant ±1)."""
    u = [[int(i == j) for j in range(size)] for i in range(size)]
    for _ in range(steps if size > 1 else 0):
        i, j = _randint(rng, 0, size - 1), _randint(rng, 0, size - 1)
        if i == j:
            u[i] = [-x for x in u[i]]
            continue
        k = _randint(rng, -2, 2)
        u[i] = [x + k * y for x, y in zip(u[i], u[j])]
    if size == 1 and rng.rand() < 0.5:
        u = [[-1]]
    return u


def interior_offsets(edge: Edge, count: int = 5) -> list[Fraction]:
    """Evenly spaced interior offsets used by the sampling tests."""
    return [edge.length * Fraction(k, count + 1) for k in range(1, count + 1)]


# =============================================================================
# Fixture paths
# =============================================================================

def get_fixtures_dir() -> Path:
    """Get path to fixtures directory."""
    return Path(__file__).parent / "fixtures"


def get_fixture_path(filename: str) -> Path:
    """Get path to a specific fixture file."""
    return get_fixtures_dir() / filename
