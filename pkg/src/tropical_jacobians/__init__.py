# Requires Python 3.12+
"""
Tropical Jacobians - exact divisor theory and embeddings of metric graphs.

Period matrices and Abel-Jacobi maps, principal divisors and their
functions, discrete Jacobians, and certified isometric embeddings into Q³.
All arithmetic is exact over the rationals.
"""

from __future__ import annotations

import logging

__version__ = "0.1.0"

logging.getLogger(__name__).addHandler(logging.NullHandler())

# Errors
from tropical_jacobians.errors import (
    ERROR_KINDS,
    CertificationFailure,
    DisconnectedGraphError,
    GraphMismatchError,
    InternalConsistencyError,
    MalformedInputError,
    ModelNotSimpleError,
    NonIntegerSlopeError,
    NonUnitLengthsError,
    NonZeroDegreeError,
    NotPrincipalError,
    TropicalJacobianError,
)

# Metric graphs
from tropical_jacobians.core_graph import (
    BASIS_LABEL,
    CycleBasis,
    Edge,
    EdgePoint,
    GraphPoint,
    MetricGraph,
    Relabeling,
    Smoothing,
    SpanningTree,
    Vertex,
    cycle_boundary,
    format_rational,
    homology_basis,
    is_lambda_rational,
    is_simple_loopless,
    minimal_model,
    natural_key,
    parse_rational,
    simple_loopless_model,
    smooth_valence_two,
    spanning_tree,
    subdivide,
    transport_cycle_basis,
)

# Divisors and functions
from tropical_jacobians.divisors_functions import (
    Divisor,
    PLFunction,
    add,
    add_constant,
    divisor_of,
    is_integer_sloped,
    negate,
)

# Jacobians
from tropical_jacobians.jacobian import (
    JacobianPoint,
    PeriodMatrix,
    abel_jacobi,
    abel_jacobi_of_chain,
    change_basis,
    cycle_increment,
    divisor_class,
    is_principal,
    lattice_member,
    lift_to_function,
    period_determinant,
    period_matrix,
)

# Discrete Jacobians
from tropical_jacobians.discrete import (
    FiniteAbelianGroup,
    cokernel,
    discrete_divisor_class,
    discrete_jacobian_via_laplacian,
    discrete_jacobian_via_pairing,
    is_discrete_principal,
    reduced_laplacian,
    smith_normal_form,
    spanning_tree_count,
)

# Embeddings
from tropical_jacobians.embedding import (
    BalancedComplex,
    CertificationReport,
    Embedding3D,
    EmbeddingOptions,
    Ray,
    Segment3D,
    SubEdge,
    balance,
    build_F1,
    build_F2,
    build_F3,
    certify,
    embed,
    is_balanced,
    plot_rows,
    segment_intersection,
)

__all__ = [
    "__version__",
    # Errors
    "ERROR_KINDS",
    "TropicalJacobianError",
    "MalformedInputError",
    "DisconnectedGraphError",
    "GraphMismatchError",
    "NonIntegerSlopeError",
    "NonZeroDegreeError",
    "NotPrincipalError",
    "ModelNotSimpleError",
    "NonUnitLengthsError",
    "CertificationFailure",
    "InternalConsistencyError",
    # Metric graphs
    "BASIS_LABEL",
    "Edge",
    "MetricGraph",
    "Vertex",
    "EdgePoint",
    "GraphPoint",
    "Relabeling",
    "Smoothing",
    "SpanningTree",
    "CycleBasis",
    "natural_key",
    "parse_rational",
    "format_rational",
    "subdivide",
    "is_simple_loopless",
    "simple_loopless_model",
    "minimal_model",
    "smooth_valence_two",
    "spanning_tree",
    "homology_basis",
    "cycle_boundary",
    "transport_cycle_basis",
    "is_lambda_rational",
    # Divisors and functions
    "Divisor",
    "PLFunction",
    "divisor_of",
    "is_integer_sloped",
    "add",
    "negate",
    "add_constant",
    # Jacobians
    "PeriodMatrix",
    "JacobianPoint",
    "period_matrix",
    "period_determinant",
    "change_basis",
    "lattice_member",
    "abel_jacobi",
    "abel_jacobi_of_chain",
    "cycle_increment",
    "divisor_class",
    "is_principal",
    "lift_to_function",
    # Discrete Jacobians
    "FiniteAbelianGroup",
    "smith_normal_form",
    "cokernel",
    "reduced_laplacian",
    "discrete_jacobian_via_laplacian",
    "discrete_jacobian_via_pairing",
    "spanning_tree_count",
    "discrete_divisor_class",
    "is_discrete_principal",
    # Embeddings
    "EmbeddingOptions",
    "SubEdge",
    "Segment3D",
    "Embedding3D",
    "Ray",
    "BalancedComplex",
    "CertificationReport",
    "build_F1",
    "build_F2",
    "build_F3",
    "embed",
    "certify",
    "balance",
    "is_balanced",
    "plot_rows",
    "segment_intersection",
]
