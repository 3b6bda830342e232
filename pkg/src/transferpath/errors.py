"""Exception types raised across the engine."""


class TransferPathError(Exception):
    """Base class for all engine errors."""

    code = "engine_error"

    def __init__(self, message: str, detail: object = None):
        super().__init__(message)
        self.message = message
        self.detail = detail


class SchemaError(TransferPathError):
    """Document does not conform to the catalog file schema."""

    code = "schema_error"


class ValidationError(TransferPathError):
    """Structurally well-formed input violates a domain invariant."""

    code = "validation_error"


class DuplicateIdError(ValidationError):
    code = "duplicate_id"


class CrossRefError(ValidationError):
    """A reference points at an entity the snapshot does not contain."""

    code = "cross_ref_error"


class UnknownInstitution(CrossRefError):
    code = "unknown_institution"


class CatalogMismatch(TransferPathError):
    """Input disagrees with the catalog snapshot it claims to be from."""

    code = "catalog_mismatch"


class InvalidAssignment(TransferPathError):
    """Course-to-requirement assignment breaks an assignment invariant."""

    code = "invalid_assignment"


class LimitExceeded(TransferPathError):
    """Instance exceeds policy limits and heuristic fallback is disabled."""

    code = "limit_exceeded"


class OracleTooLarge(TransferPathError):
    """Instance is too big for exhaustive enumeration."""

    code = "oracle_too_large"


class TooLarge(TransferPathError):
    """Counting instance exceeds the exact dynamic-programming limit."""

    code = "too_large"


class Infeasible(TransferPathError):
    """No degree plan exists under the given constraints.

    ``reason`` names the minimal blocking cause: "capacity",
    "prerequisite_depth", or "toxic_pair".
    """

    code = "infeasible"

    def __init__(self, message: str, reason: str, detail: object = None):
        super().__init__(message, detail)
        self.reason = reason


class Unsatisfiable(TransferPathError):
    """Requirement cannot be completed by any attainable course set."""

    code = "unsatisfiable"
