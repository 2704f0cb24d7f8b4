# Requires Python 3.12+
# Uses native type hints: list[x], tuple[x, y], X | None (PEP 585, PEP 604)
from __future__ import annotations

import logging
import warnings
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from .core_graph import MetricGraph, Vertex, homology_basis
from .divisors_functions import Divisor
from .errors import MalformedInputError, NonUnitLengthsError, NonZeroDegreeError
from .exact_linalg import integer_determinant
from .jacobian import period_matrix

__version__ = "0.1.0"

logger = logging.getLogger(__name__)


# =============================================================================
# Finite abelian groups
# =============================================================================

@dataclass(frozen=True)
class FiniteAbelianGroup:
    """
    Z/d1 x ... x Z/dk x Z^r with 1 < d1 | d2 | ... | dk.

    Attributes:
        factors: invariant factors greater than 1
        free_rank: rank r of the free part (0 for a finite group)
    """
    factors: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self) -> None:
        factors = tuple(int(d) for d in self.factors)
        if any(d <= 1 for d in factors):
            raise ValueError(f"invariant factors must exceed 1, got {factors}")
        if any(factors[k + 1] % factors[k] for k in range(len(factors) - 1)):
            raise ValueError(f"invariant factors must form a divisibility chain, got {factors}")
        if self.free_rank < 0:
            raise ValueError("free rank must be non-negative")
        object.__setattr__(self, "factors", factors)

    @classmethod
    def from_diagonal(cls, diagonal: Iterable[int], rows: int | None = None) -> FiniteAbelianGroup:
        """
        Cokernel of a matrix already in Smith normal form.

        Zero diagonal entries and missing rows (when `rows` exceeds the
        diagonal length) contribute to the free rank.
        """
        diagonal = [abs(int(d)) for d in diagonal]
        missing = (rows - len(diagonal)) if rows is not None else 0
        free = sum(1 for d in diagonal if d == 0) + max(missing, 0)
        return cls(tuple(d for d in diagonal if d > 1), free)

    @property
    def order(self) -> int | None:
        """Number of elements, or None for an infinite group."""
        if self.free_rank:
            return None
        out = 1
        for d in self.factors:
            out *= d
        return out

    @property
    def is_trivial(self) -> bool:
        return not self.factors and not self.free_rank

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.factors] + ["Z"] * self.free_rank
        return " x ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        out: dict = {"factors": list(self.factors), "order": self.order}
        if self.free_rank:
            out["free_rank"] = self.free_rank
        return out


# =============================================================================
# Smith normal form
# =============================================================================
#
# Pivot on the entry of least absolute value, clear its row and column by
# integer division, and repeat until the pivot divides the rest of the
# trailing block. Row operations are mirrored into U and column operations
# into V, so U·M·V = S with U, V unimodular throughout.
# =============================================================================

def _swap_rows(a: list[list[int]], i: int, j: int) -> None:
    a[i], a[j] = a[j], a[i]


def _swap_cols(a: list[list[int]], i: int, j: int) -> None:
    for row in a:
        row[i], row[j] = row[j], row[i]


def _add_row(a: list[list[int]], target: int, source: int, k: int) -> None:
    a[target] = [x + k * y for x, y in zip(a[target], a[source])]


def _add_col(a: list[list[int]], target: int, source: int, k: int) -> None:
    for row in a:
        row[target] += k * row[source]


def _as_object_array(rows: list[list[int]], shape: tuple[int, int]) -> np.ndarray:
    out = np.zeros(shape, dtype=object)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            out[i, j] = x
    return out


def smith_normal_form(matrix: Iterable[Iterable[int]]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Smith normal form of an integer matrix.

    Args:
        matrix: r x c integer matrix (nested sequences or numpy array).

    Returns:
        (U, S, V) as exact object arrays with U·M·V = S, U and V unimodular,
        S diagonal with non-negative entries d1 | d2 | ...

    Example:
        [[2, 1], [1, 2]] -> S = diag(1, 3)
    """
    a = [[int(x) for x in row] for row in matrix]
    r = len(a)
    c = len(a[0]) if r else 0
    u = [[int(i == j) for j in range(r)] for i in range(r)]
    v = [[int(i == j) for j in range(c)] for i in range(c)]

    for s in range(min(r, c)):
        block = [(abs(a[i][j]), i, j) for i in range(s, r) for j in range(s, c) if a[i][j]]
        if not block:
            break
        while True:
            block = [(abs(a[i][j]), i, j) for i in range(s, r) for j in range(s, c) if a[i][j]]
            _, pi, pj = min(block)
            _swap_rows(a, s, pi)
            _swap_rows(u, s, pi)
            _swap_cols(a, s, pj)
            _swap_cols(v, s, pj)
            pivot = a[s][s]
            clean = True
            for i in range(s + 1, r):
                q = a[i][s] // pivot
                if q:
                    _add_row(a, i, s, -q)
                    _add_row(u, i, s, -q)
                clean = clean and a[i][s] == 0
            for j in range(s + 1, c):
                q = a[s][j] // pivot
                if q:
                    _add_col(a, j, s, -q)
                    _add_col(v, j, s, -q)
                clean = clean and a[s][j] == 0
            if not clean:
                continue
            offender = next(
                (i for i in range(s + 1, r) for j in range(s + 1, c) if a[i][j] % pivot),
                None,
            )
            if offender is None:
                break
            _add_row(a, s, offender, 1)
            _add_row(u, s, offender, 1)
        if a[s][s] < 0:
            a[s] = [-x for x in a[s]]
            u[s] = [-x for x in u[s]]

    return _as_object_array(u, (r, r)), _as_object_array(a, (r, c)), _as_object_array(v, (c, c))


def invariant_factors(matrix: Iterable[Iterable[int]]) -> list[int]:
    """Diagonal of the Smith normal form."""
    _, s, _ = smith_normal_form(matrix)
    return [int(s[k, k]) for k in range(min(s.shape))]


def cokernel(matrix: Iterable[Iterable[int]]) -> FiniteAbelianGroup:
    """Z^r / M·Z^c as a product of cyclic groups."""
    rows = [[int(x) for x in row] for row in matrix]
    return FiniteAbelianGroup.from_diagonal(invariant_factors(rows), rows=len(rows))


# =============================================================================
# Discrete Jacobians of unit-length graphs
# =============================================================================

def _require_unit_lengths(graph: MetricGraph) -> None:
    odd = [edge.id for edge in graph.edges if edge.length != 1]
    if odd:
        raise NonUnitLengthsError(f"edges {odd} do not have length 1")


def reduced_laplacian(graph: MetricGraph) -> list[list[int]]:
    """
    Combinatorial Laplacian D - A with the row and column of the smallest
    vertex id removed. Loops do not contribute; parallel edges add up.
    """
    vertices = graph.sorted_vertices[1:]
    index = {v: k for k, v in enumerate(vertices)}
    n = len(vertices)
    out = [[0] * n for _ in range(n)]
    for edge in graph.edges:
        if edge.is_loop:
            continue
        a, b = index.get(edge.src), index.get(edge.dst)
        if a is not None:
            out[a][a] += 1
        if b is not None:
            out[b][b] += 1
        if a is not None and b is not None:
            out[a][b] -= 1
            out[b][a] -= 1
    return out


def discrete_jacobian_via_laplacian(graph: MetricGraph) -> FiniteAbelianGroup:
    """Jac(G) as the cokernel of the reduced Laplacian."""
    _require_unit_lengths(graph)
    group = cokernel(reduced_laplacian(graph))
    logger.debug("discrete jacobian on %d vertices: %s", len(graph.vertices), group)
    return group


def discrete_jacobian_via_pairing(graph: MetricGraph) -> FiniteAbelianGroup:
    """Jac(G) as H1(G, Z)* / H1(G, Z) under the unit-length pairing."""
    _require_unit_lengths(graph)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        pm = period_matrix(graph, homology_basis(graph))
    gram = [[int(x) for x in row] for row in pm.gram]
    return cokernel(gram)


def spanning_tree_count(graph: MetricGraph) -> int:
    """Matrix-tree theorem: determinant of the reduced Laplacian."""
    if len(graph.vertices) == 1:
        return 1
    return integer_determinant(reduced_laplacian(graph))


def discrete_divisor_class(graph: MetricGraph, divisor: Divisor) -> tuple[int, ...]:
    """
    Coordinates of a degree-zero vertex divisor in Jac(G) = Z^n-1 / L0·Z^n-1.

    With U·L0·V = S, the class of the non-root part x of the divisor is U·x
    read modulo the diagonal of S. One coordinate is returned per
    nontrivial invariant factor, in factor order.

    Raises:
        MalformedInputError: If the divisor is supported off the vertices.
        NonZeroDegreeError: If the degree is not 0.
    """
    divisor.validate_on(graph)
    if any(not isinstance(p, Vertex) for p in divisor.support):
        raise MalformedInputError("discrete divisors must be supported on vertices")
    if divisor.degree != 0:
        raise NonZeroDegreeError(f"divisor has degree {divisor.degree}, expected 0")
    vertices = graph.sorted_vertices[1:]
    if not vertices:
        return ()
    u, s, _ = smith_normal_form(reduced_laplacian(graph))
    x = [divisor.multiplicity(Vertex(v)) for v in vertices]
    y = [sum(int(u[i, k]) * x[k] for k in range(len(x))) for i in range(len(x))]
    coords = []
    for k in range(len(y)):
        d = int(s[k, k])
        if d == 1:
            continue
        coords.append(y[k] % d if d else y[k])
    return tuple(coords)


def is_discrete_principal(graph: MetricGraph, divisor: Divisor) -> bool:
    """A degree-zero vertex divisor is principal iff its class vanishes."""
    return not any(discrete_divisor_class(graph, divisor))
