# Requires Python 3.12+
"""
Error hierarchy for tropical-jacobians.

Every domain error is a ``ValueError`` subclass carrying a ``kind`` string.
The command-line front end reports ``kind`` verbatim in its machine-readable
error object, so each documented error kind has exactly one class here.
"""

from __future__ import annotations


class TropicalJacobianError(ValueError):
    """Base class for all domain errors raised by this package."""
    kind: str = "DomainError"

    @property
    def detail(self) -> str:
        return str(self)


class MalformedInputError(TropicalJacobianError):
    """Input does not parse against the documented schema."""
    kind = "MalformedInput"


class DisconnectedGraphError(TropicalJacobianError):
    """The graph model is not connected."""
    kind = "DisconnectedGraph"


class GraphMismatchError(TropicalJacobianError):
    """Two objects that must live on the same graph do not."""
    kind = "GraphMismatch"


class NonIntegerSlopeError(TropicalJacobianError):
    """A piecewise-linear function has a non-integer slope."""
    kind = "NonIntegerSlope"


class NonZeroDegreeError(TropicalJacobianError):
    """A degree-zero divisor was required."""
    kind = "NonZeroDegree"


class NotPrincipalError(TropicalJacobianError):
    """The divisor is not the divisor of a tropical meromorphic function."""
    kind = "NotPrincipal"


class ModelNotSimpleError(TropicalJacobianError):
    """The model has a loop or a pair of parallel edges."""
    kind = "ModelNotSimple"


class NonUnitLengthsError(TropicalJacobianError):
    """A discrete computation received an edge of length other than 1."""
    kind = "NonUnitLengths"


class CertificationFailure(TropicalJacobianError):
    """An embedding failed its isometry or injectivity certificate."""
    kind = "CertificationFailure"


class InternalConsistencyError(TropicalJacobianError):
    """Two independent computations that must agree did not."""
    kind = "InternalConsistency"


ERROR_KINDS: tuple[str, ...] = tuple(
    cls.kind for cls in (
        MalformedInputError,
        DisconnectedGraphError,
        GraphMismatchError,
        NonIntegerSlopeError,
        NonZeroDegreeError,
        NotPrincipalError,
        ModelNotSimpleError,
        NonUnitLengthsError,
        CertificationFailure,
        InternalConsistencyError,
    )
)
