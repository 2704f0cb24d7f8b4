# Requires Python 3.12+
# Uses native type hints: list[x], tuple[x, y], X | None (PEP 585, PEP 604)
"""
Exact linear algebra over Q and Z.

Thin helpers around sympy's DomainMatrix so that the rest of the package can
pass plain lists of Fractions and ints in and get Fractions and ints out.
"""
from __future__ import annotations

from collections.abc import Iterable, Sequence
from fractions import Fraction

from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

__version__ = "0.1.0"


def _qq(value: Fraction | int) -> object:
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def to_fraction(value: object) -> Fraction:
    """Convert a sympy Rational/Integer or domain element to a Fraction."""
    if hasattr(value, "p") and hasattr(value, "q"):
        return Fraction(int(value.p), int(value.q))
    return Fraction(int(value.numerator), int(value.denominator))


def rational_matrix(rows: Iterable[Iterable[Fraction | int]]) -> DomainMatrix:
    rows = [list(row) for row in rows]
    n = len(rows)
    m = len(rows[0]) if rows else 0
    return DomainMatrix([[_qq(x) for x in row] for row in rows], (n, m), QQ)


def integer_matrix(rows: Iterable[Iterable[int]]) -> DomainMatrix:
    rows = [list(row) for row in rows]
    n = len(rows)
    m = len(rows[0]) if rows else 0
    return DomainMatrix([[ZZ(int(x)) for x in row] for row in rows], (n, m), ZZ)


def _entries(matrix: DomainMatrix) -> list[list[Fraction]]:
    dense = matrix.to_Matrix()
    return [[to_fraction(dense[i, j]) for j in range(dense.cols)] for i in range(dense.rows)]


def solve(rows: Sequence[Sequence[Fraction | int]], rhs: Sequence[Fraction | int]) -> list[Fraction]:
    """
    Solve A x = b exactly over Q.

    Raises:
        ValueError: If A is singular.
    """
    if not rows:
        return []
    a = rational_matrix(rows)
    b = rational_matrix([[x] for x in rhs])
    try:
        x = a.lu_solve(b)
    except DMNonInvertibleMatrixError:
        raise ValueError("matrix is singular")
    return [row[0] for row in _entries(x)]


def determinant(rows: Sequence[Sequence[Fraction | int]]) -> Fraction:
    """Exact determinant over Q; the empty matrix has determinant 1."""
    if not rows:
        return Fraction(1)
    return to_fraction(rational_matrix(rows).det())


def integer_determinant(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant over Z (fraction-free)."""
    if not rows:
        return 1
    return int(integer_matrix(rows).det())


def leading_minors(rows: Sequence[Sequence[Fraction | int]]) -> list[Fraction]:
    """Determinants of the k x k upper-left blocks, k = 1..n."""
    return [determinant([list(row[:k]) for row in rows[:k]]) for k in range(1, len(rows) + 1)]


def rank(rows: Sequence[Sequence[Fraction | int]]) -> int:
    if not rows or not rows[0]:
        return 0
    return int(rational_matrix(rows).rank())
