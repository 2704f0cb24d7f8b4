# Requires Python 3.12+
# Uses native type hints: list[x], tuple[x, y], X | None (PEP 585, PEP 604)
from __future__ import annotations

import logging
import warnings
from collections import defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core_graph import (
    PATH_STRATEGIES,
    CycleBasis,
    EdgePoint,
    GraphPoint,
    MetricGraph,
    SpanningTree,
    Vertex,
    format_rational,
    homology_basis,
    spanning_tree,
    subdivide,
)
from .divisors_functions import Divisor, PLFunction, divisor_of, is_integer_sloped
from .errors import (
    GraphMismatchError,
    InternalConsistencyError,
    MalformedInputError,
    NonZeroDegreeError,
    NotPrincipalError,
)
from .exact_linalg import determinant, leading_minors, solve

__version__ = "0.1.0"

logger = logging.getLogger(__name__)


# =============================================================================
# Period matrix
# =============================================================================
#
# Jac(Γ) = H1(Γ, R)* / H1(Γ, Z). In the cycle basis γ1..γg the period matrix
# is the Gram matrix of the length pairing, Q[i][j] = Σ_e γi(e) γj(e) ℓ(e),
# and the lattice H1(Γ, Z) is spanned by its rows.
# =============================================================================

@dataclass(frozen=True)
class PeriodMatrix:
    """
    Gram matrix of the length pairing in a fixed cycle basis.

    Attributes:
        gram: g x g symmetric positive-definite rational matrix, row-major
        basis: the cycle basis it was computed in
    """
    gram: tuple[tuple[Fraction, ...], ...]
    basis: CycleBasis

    @property
    def genus(self) -> int:
        return len(self.gram)

    def as_array(self) -> np.ndarray:
        """g x g object array of Fractions."""
        out = np.zeros((self.genus, self.genus), dtype=object)
        for i, row in enumerate(self.gram):
            for j, x in enumerate(row):
                out[i, j] = x
        return out

    def is_symmetric(self) -> bool:
        return all(self.gram[i][j] == self.gram[j][i]
                   for i in range(self.genus) for j in range(self.genus))

    def leading_minors(self) -> list[Fraction]:
        return leading_minors(self.gram)

    def is_positive_definite(self) -> bool:
        """Sylvester's criterion on the leading principal minors."""
        return self.is_symmetric() and all(m > 0 for m in self.leading_minors())

    def to_json(self) -> list[list[str]]:
        return [[format_rational(x) for x in row] for row in self.gram]


def _check_basis(graph: MetricGraph, basis: CycleBasis) -> None:
    if basis.edge_ids != graph.edge_ids:
        raise GraphMismatchError("cycle basis columns do not match the graph's edges")


def period_matrix(graph: MetricGraph, basis: CycleBasis | None = None) -> PeriodMatrix:
    """
    Period matrix of a metric graph.

    Args:
        graph: Connected metric graph.
        basis: Cycle basis; defaults to homology_basis(graph).

    Returns:
        PeriodMatrix with gram[i][j] = Σ_e γi(e) γj(e) ℓ(e).

    Example:
        theta graph with lengths a, b, c gives [[a+b, a], [a, a+c]].
    """
    basis = basis or homology_basis(graph)
    _check_basis(graph, basis)
    if basis.genus == 0:
        warnings.warn("graph has genus 0, the period matrix is empty")
    cycles = basis.matrix
    lengths = np.array([edge.length for edge in graph.edges], dtype=object)
    return PeriodMatrix(_fraction_rows((cycles * lengths) @ cycles.T), basis)


def _fraction_rows(array: np.ndarray) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(x) for x in row) for row in array)


def period_determinant(pm: PeriodMatrix) -> Fraction:
    """Volume squared of Jac(Γ); for unit lengths, the number of spanning trees."""
    return determinant(pm.gram)


def change_basis(pm: PeriodMatrix, unimodular: Iterable[Iterable[int]]) -> PeriodMatrix:
    """Period matrix in the basis U·γ: U Q Uᵀ."""
    rows = [[int(x) for x in row] for row in unimodular]
    basis = pm.basis.transformed(rows)
    u = np.array(rows, dtype=object).reshape(pm.genus, pm.genus)
    return PeriodMatrix(_fraction_rows(u @ pm.as_array() @ u.T), basis)


def lattice_member(pm: PeriodMatrix, vector: Iterable[Fraction | int]) -> tuple[bool, tuple[int, ...] | None]:
    """
    Decide whether a coordinate vector lies in the period lattice.

    Solves Q x = v exactly; v is a lattice vector iff x is integral.

    Returns:
        (True, x) with the integer coefficients, or (False, None).
    """
    v = [Fraction(x) for x in vector]
    if len(v) != pm.genus:
        raise MalformedInputError(f"vector has {len(v)} coordinates, genus is {pm.genus}")
    if pm.genus == 0:
        return True, ()
    x = solve(pm.gram, v)
    if all(c.denominator == 1 for c in x):
        return True, tuple(int(c) for c in x)
    return False, None


# =============================================================================
# Points of the Jacobian
# =============================================================================

@dataclass(frozen=True, eq=False)
class JacobianPoint:
    """
    Coordinates in R^g of a point of Jac(Γ), taken modulo the period lattice.

    Equality is equality on the torus: two points are equal when their
    difference is a lattice vector. Hashing is disabled because no
    representative is canonical.
    """
    coords: tuple[Fraction, ...]
    period_matrix: PeriodMatrix

    __hash__ = None

    def __post_init__(self) -> None:
        coords = tuple(Fraction(x) for x in self.coords)
        if len(coords) != self.period_matrix.genus:
            raise MalformedInputError(
                f"{len(coords)} coordinates for genus {self.period_matrix.genus}"
            )
        object.__setattr__(self, "coords", coords)

    def _same_torus(self, other: JacobianPoint) -> None:
        if other.period_matrix.gram != self.period_matrix.gram:
            raise GraphMismatchError("points belong to different Jacobians")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, JacobianPoint):
            return NotImplemented
        self._same_torus(other)
        member, _ = lattice_member(self.period_matrix, (a - b for a, b in zip(self.coords, other.coords)))
        return member

    def __add__(self, other: JacobianPoint) -> JacobianPoint:
        self._same_torus(other)
        return JacobianPoint(tuple(a + b for a, b in zip(self.coords, other.coords)), self.period_matrix)

    def __neg__(self) -> JacobianPoint:
        return JacobianPoint(tuple(-a for a in self.coords), self.period_matrix)

    def __sub__(self, other: JacobianPoint) -> JacobianPoint:
        return self + (-other)

    def __rmul__(self, k: int) -> JacobianPoint:
        return JacobianPoint(tuple(k * a for a in self.coords), self.period_matrix)

    def is_zero(self) -> bool:
        return lattice_member(self.period_matrix, self.coords)[0]

    def to_json(self) -> dict:
        return {"coords": [format_rational(x) for x in self.coords], "basis": self.period_matrix.basis.label}


# =============================================================================
# Abel-Jacobi map
# =============================================================================
#
# The Abel-Jacobi image of p with base q is the functional "integrate along a
# path from q to p", written in the basis dual to the cycles: coordinate i is
# the signed length the path shares with γi. Changing the path adds a cycle,
# hence a lattice vector, so the class on the torus is path independent.
# =============================================================================

def abel_jacobi_of_chain(basis: CycleBasis, chain: Mapping[str, Fraction]) -> tuple[Fraction, ...]:
    """
    Coordinates of a real 1-chain given as {edge id: signed traversed length}.
    """
    return tuple(
        sum((Fraction(c) * Fraction(chain.get(eid, 0)) for c, eid in zip(row, basis.edge_ids) if c), Fraction(0))
        for row in basis.cycles
    )


def cycle_increment(graph: MetricGraph, basis: CycleBasis, i: int) -> tuple[Fraction, ...]:
    """Coordinates of the closed chain γi itself: row i of the period matrix."""
    chain = {eid: c * graph.edge(eid).length for eid, c in basis.as_chain(i).items()}
    return abel_jacobi_of_chain(basis, chain)


def _anchor(graph: MetricGraph, point: GraphPoint, strategy: str) -> tuple[str, dict[str, Fraction]]:
    """A vertex next to the point and the chain from that vertex to the point."""
    if isinstance(point, Vertex):
        return point.id, {}
    edge = graph.edge(point.edge)
    if strategy == "bfs":
        return edge.src, {edge.id: point.offset}
    return edge.dst, {edge.id: point.offset - edge.length}


def path_chain(
    graph: MetricGraph,
    tree: SpanningTree,
    start: GraphPoint,
    end: GraphPoint,
    strategy: str = "bfs",
) -> dict[str, Fraction]:
    """
    A concrete path start -> end as {edge id: signed length}.

    "bfs" leaves and enters edge points through the edge source and walks
    directly when both points share an edge; "dfs" goes through the edge
    target. The tree path between the anchor vertices is used in between.
    """
    graph.validate_point(start)
    graph.validate_point(end)
    chain: dict[str, Fraction] = defaultdict(Fraction)
    if (
        strategy == "bfs"
        and isinstance(start, EdgePoint)
        and isinstance(end, EdgePoint)
        and start.edge == end.edge
    ):
        chain[start.edge] += end.offset - start.offset
        return {eid: x for eid, x in chain.items() if x}
    start_vertex, start_leg = _anchor(graph, start, strategy)
    end_vertex, end_leg = _anchor(graph, end, strategy)
    for eid, x in start_leg.items():
        chain[eid] -= x
    for eid, c in tree.path(start_vertex, end_vertex).items():
        chain[eid] += c * graph.edge(eid).length
    for eid, x in end_leg.items():
        chain[eid] += x
    return {eid: x for eid, x in chain.items() if x}


class _AbelJacobi:
    """Reusable evaluator holding the basis, period matrix and tree."""

    def __init__(self, graph: MetricGraph, basis: CycleBasis | None, path: str) -> None:
        if path not in PATH_STRATEGIES:
            raise ValueError(f"path must be one of {PATH_STRATEGIES}, got {path!r}")
        self.graph = graph
        self.basis = basis or homology_basis(graph)
        _check_basis(graph, self.basis)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            self.pm = period_matrix(graph, self.basis)
        self.tree = spanning_tree(graph, path)
        self.path = path

    def coords(self, base: GraphPoint, point: GraphPoint) -> tuple[Fraction, ...]:
        return abel_jacobi_of_chain(self.basis, path_chain(self.graph, self.tree, base, point, self.path))


def abel_jacobi(
    graph: MetricGraph,
    basis: CycleBasis | None,
    base: GraphPoint,
    point: GraphPoint,
    path: str = "bfs",
) -> JacobianPoint:
    """
    Abel-Jacobi image of `point` with base point `base`.

    Args:
        graph: Connected metric graph.
        basis: Cycle basis (None for homology_basis(graph)).
        base: Base point q.
        point: Point p.
        path: Path-selection strategy, "bfs" or "dfs"; all strategies agree
            modulo the period lattice.

    Returns:
        JacobianPoint holding one representative of the image.

    Example:
        circle of length L, base v1, point at offset d: coords (d,) with
        "bfs", (d - L,) with "dfs".
    """
    evaluator = _AbelJacobi(graph, basis, path)
    return JacobianPoint(evaluator.coords(base, point), evaluator.pm)


def divisor_class(
    graph: MetricGraph,
    basis: CycleBasis | None,
    base: GraphPoint,
    divisor: Divisor,
    path: str = "bfs",
) -> JacobianPoint:
    """
    Image of a degree-zero divisor in Jac(Γ): Σ m_x · AJ_q(x).

    Raises:
        NonZeroDegreeError: If deg(divisor) != 0.
    """
    if divisor.degree != 0:
        raise NonZeroDegreeError(f"divisor has degree {divisor.degree}, expected 0")
    divisor.validate_on(graph)
    evaluator = _AbelJacobi(graph, basis, path)
    total = [Fraction(0)] * evaluator.basis.genus
    for point, mult in divisor.terms:
        for i, x in enumerate(evaluator.coords(base, point)):
            total[i] += mult * x
    return JacobianPoint(tuple(total), evaluator.pm)


def is_principal(graph: MetricGraph, divisor: Divisor) -> bool:
    """
    Abel-Jacobi test: a divisor is principal iff it has degree 0 and its
    class in Jac(Γ) is zero.
    """
    divisor.validate_on(graph)
    if divisor.degree != 0:
        return False
    if graph.genus == 0:
        return True
    base = Vertex(graph.sorted_vertices[0])
    return divisor_class(graph, None, base, divisor).is_zero()


# =============================================================================
# Lifting a principal divisor to a function
# =============================================================================

def lift_to_function(graph: MetricGraph, divisor: Divisor, gauge: GraphPoint | None = None) -> PLFunction:
    """
    Construct F with div(F) = divisor and F(gauge) = 0.

    The graph is subdivided at the support and the gauge point; on the
    refined model F is linear on edges (harmonic away from the support), so
    its vertex values solve the weighted Laplacian system
    Σ_{e ∋ v} (φ(v) - φ(w_e)) / ℓ(e) = -D(v), with the gauge row and column
    removed. The solution is folded back onto the original edges.

    Raises:
        NotPrincipalError: If the divisor is not principal.
        InternalConsistencyError: If the solution fails its own verification.
    """
    gauge = gauge if gauge is not None else Vertex(graph.sorted_vertices[0])
    graph.validate_point(gauge)
    divisor.validate_on(graph)
    if not is_principal(graph, divisor):
        raise NotPrincipalError("divisor is not principal")

    refined, relabeling = subdivide(graph, [*divisor.support, gauge])
    local = divisor.transported(relabeling)
    anchor = relabeling(gauge)
    unknowns = [v for v in refined.vertices if v != anchor.id]
    index = {v: k for k, v in enumerate(unknowns)}
    n = len(unknowns)
    laplacian = [[Fraction(0)] * n for _ in range(n)]
    for edge in refined.edges:
        if edge.is_loop:
            continue
        w = 1 / edge.length
        a, b = index.get(edge.src), index.get(edge.dst)
        if a is not None:
            laplacian[a][a] += w
        if b is not None:
            laplacian[b][b] += w
        if a is not None and b is not None:
            laplacian[a][b] -= w
            laplacian[b][a] -= w
    rhs = [Fraction(-local.multiplicity(Vertex(v))) for v in unknowns]
    phi = solve(laplacian, rhs)

    values = {anchor.id: Fraction(0), **{v: phi[index[v]] for v in unknowns}}
    function = PLFunction.pulled_back(PLFunction.from_vertex_values(refined, values), relabeling)
    if not is_integer_sloped(function):
        raise InternalConsistencyError("lifted function has a non-integer slope")
    if divisor_of(function) != divisor:
        raise InternalConsistencyError("divisor of the lifted function differs from the input")
    logger.debug("lifted divisor of support %d on %d refined vertices", len(divisor.support), n + 1)
    return function
