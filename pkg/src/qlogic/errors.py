"""Exception hierarchy shared by every module of the package.

``InputError`` covers everything a caller can fix (bad files, bad
formulas, bad flags); the service maps it to HTTP 400 and the CLI to
exit code 1. ``InternalError`` means a computed object violated its own
invariants and maps to HTTP 500 / exit code 2.
"""


class QLogicError(Exception):
    """Base class for all package errors."""


class InputError(QLogicError):
    """Invalid user-supplied input."""


class InternalError(QLogicError):
    """An internal invariant failed to hold."""


# -- vectors, subspaces, projectors ----------------------------------------

class DimensionMismatchError(InputError):
    """Operands live in different ambient spaces."""


class ZeroVectorError(InputError):
    """A (near-)zero vector where a state was required."""


class NotAProjectorError(InputError):
    """Matrix is not Hermitian-idempotent within tolerance."""


class NotOrthonormalError(InputError):
    """Supplied basis columns are not orthonormal within tolerance."""


# -- contexts ---------------------------------------------------------------

class NonOrthogonalError(InputError):
    """Two context members fail pairwise orthogonality."""


class IncompleteResolutionError(InputError):
    """Context projectors do not sum to the identity."""


class TrivialMemberError(InputError):
    """A zero or identity projector was supplied as a context member."""


# -- formulas and valuation -------------------------------------------------

class FormulaParseError(InputError):
    """Formula text does not match the grammar."""


class UnresolvableAtomError(InputError):
    """An atom's subspace is nontrivial and belongs to no known block."""


# -- ray files and colorability instances ------------------------------------

class MalformedLineError(InputError):
    """A ray-file line does not match the format."""


class NonOrthogonalContextError(InputError):
    """A declared context contains a non-orthogonal ray pair."""


class DuplicateRayError(InputError):
    """Two rays share an id or span the same line."""


class InstanceValidationError(InputError):
    """A colorability instance violates a structural invariant."""
