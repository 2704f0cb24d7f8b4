"""
Tropical Jacobians - Worked Example Graphs

**Version**: 0.1.0
**Status**: Draft

Named metric graphs with hand-computed invariants, used by the tests, the
verification scripts and the README.

Structure:
  (1) graph builders - segment, circle, theta, banana, cycle, complete graph
  (2) WorkedExample - a graph together with its expected invariants
  (3) EXAMPLES - the catalogue, keyed by id

Expected values are exact strings or ints so they can be compared against
CLI output as well as library results.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .core_graph import Edge, MetricGraph


# =============================================================================
# (1) GRAPH BUILDERS
# =============================================================================

def segment(length: Fraction | int = 2) -> MetricGraph:
    """Single edge v1 -> v2."""
    return MetricGraph(("v1", "v2"), (Edge("e1", "v1", "v2", length),))


def circle(circumference: Fraction | int = 3) -> MetricGraph:
    """One vertex with a loop."""
    return MetricGraph(("v1",), (Edge("e1", "v1", "v1", circumference),))


def theta(a: Fraction | int = 1, b: Fraction | int = 1, c: Fraction | int = 1) -> MetricGraph:
    """Three edges v1 -> v2 of lengths a, b, c."""
    return MetricGraph(
        ("v1", "v2"),
        (Edge("e1", "v1", "v2", a), Edge("e2", "v1", "v2", b), Edge("e3", "v1", "v2", c)),
    )


def banana(k: int = 3, length: Fraction | int = 1) -> MetricGraph:
    """k parallel edges v1 -> v2."""
    return MetricGraph(("v1", "v2"), tuple(Edge(f"e{i}", "v1", "v2", length) for i in range(1, k + 1)))


def cycle_graph(n: int, length: Fraction | int = 1) -> MetricGraph:
    """Cycle v1 -> v2 -> ... -> vn -> v1."""
    vertices = tuple(f"v{i}" for i in range(1, n + 1))
    edges = tuple(Edge(f"e{i}", vertices[i - 1], vertices[i % n], length) for i in range(1, n + 1))
    return MetricGraph(vertices, edges)


def path_graph(n: int, length: Fraction | int = 1) -> MetricGraph:
    """Path v1 - v2 - ... - vn."""
    vertices = tuple(f"v{i}" for i in range(1, n + 1))
    edges = tuple(Edge(f"e{i}", vertices[i - 1], vertices[i], length) for i in range(1, n))
    return MetricGraph(vertices, edges)


def complete_graph(n: int = 4, length: Fraction | int = 1) -> MetricGraph:
    """K_n with edges vi -> vj (i < j) numbered lexicographically."""
    vertices = tuple(f"v{i}" for i in range(1, n + 1))
    edges = tuple(
        Edge(f"e{k}", a, b, length)
        for k, (a, b) in enumerate(combinations(vertices, 2), start=1)
    )
    return MetricGraph(vertices, edges)


# =============================================================================
# (2) WORKED EXAMPLES
# =============================================================================

@dataclass(frozen=True)
class WorkedExample:
    """
    A graph with invariants computed by hand.

    gram is in the default BFS cycle basis. spanning_trees and factors are
    only filled in for unit-length graphs.
    """
    id: str
    description: str
    graph: MetricGraph
    genus: int
    gram: tuple[tuple[str, ...], ...] = ()
    spanning_trees: int | None = None
    factors: tuple[int, ...] | None = None
    notes: tuple[str, ...] = field(default=())


# =============================================================================
# (3) CATALOGUE
# =============================================================================

SEGMENT = WorkedExample(
    id="segment",
    description="Segment of length 2; a tree, so the Jacobian is a point.",
    graph=segment(2),
    genus=0,
    notes=("(v1) - (v2) is principal: F = t on [0, 2] up to sign",),
)

CIRCLE = WorkedExample(
    id="circle-3",
    description="Circle of circumference 3 on one vertex.",
    graph=circle(3),
    genus=1,
    gram=(("3",),),
    notes=("Jac = R/3Z; the point at offset d maps to d mod 3",),
)

THETA = WorkedExample(
    id="theta-1-2-3",
    description="Theta graph with edge lengths 1, 2, 3.",
    graph=theta(1, 2, 3),
    genus=2,
    gram=(("3", "1"), ("1", "4")),   # [[a+b, a], [a, a+c]]
    notes=("det = ab + ac + bc = 11",),
)

THETA_UNIT = WorkedExample(
    id="theta-unit",
    description="Unit theta graph = banana with three edges.",
    graph=theta(1, 1, 1),
    genus=2,
    gram=(("2", "1"), ("1", "2")),
    spanning_trees=3,
    factors=(3,),
    notes=("(1, 1) is not a lattice vector",),
)

K4 = WorkedExample(
    id="K4",
    description="Complete graph on four vertices, unit lengths.",
    graph=complete_graph(4),
    genus=3,
    spanning_trees=16,
    factors=(4, 4),
)

EXAMPLES: dict[str, WorkedExample] = {
    example.id: example for example in (SEGMENT, CIRCLE, THETA, THETA_UNIT, K4)
}
