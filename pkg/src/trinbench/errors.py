"""Exception types shared across the engine and the HTTP service.

Every error carries a stable ``code`` string (what appears on the wire)
and the HTTP status the service maps it to.
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class for all engine errors."""

    http_status = 422

    def __init__(self, message: str, *, code: str = "ENGINE_ERROR", detail=None):
        super().__init__(message)
        self.message = message
        self.code = code
        self.detail = detail

    def to_wire(self) -> dict:
        body = {"code": self.code, "message": self.message}
        if self.detail is not None:
            body["detail"] = self.detail
        return body


class ParseError(EngineError):
    """Payload could not be parsed at all (malformed JSON/CSV)."""

    def __init__(self, message: str, *, detail=None):
        super().__init__(message, code="PARSE_ERROR", detail=detail)


class DatasetRejected(EngineError):
    """Dataset failed semantic validation; carries the report."""

    def __init__(self, message: str, *, report=None):
        detail = report.to_wire() if report is not None else None
        super().__init__(message, code="INVALID_DATASET", detail=detail)
        self.report = report


class NotFoundError(EngineError):
    """Unknown session / instance / selection / sample addressed by id."""

    http_status = 404

    def __init__(self, message: str, *, code: str = "NOT_FOUND", detail=None):
        super().__init__(message, code=code, detail=detail)


class ReferenceError_(EngineError):
    """A payload references an unknown classifier, feature, class, or id."""

    def __init__(self, message: str, *, code: str = "UNKNOWN_REFERENCE", detail=None):
        super().__init__(message, code=code, detail=detail)


class ConflictError(EngineError):
    """Duplicate name, or mutation of a frozen operating point."""

    http_status = 409

    def __init__(self, message: str, *, code: str = "CONFLICT", detail=None):
        super().__init__(message, code=code, detail=detail)


class InvalidArgumentError(EngineError):
    """An operation precondition was violated (bad range, bad enum, ...)."""

    def __init__(self, message: str, *, code: str = "INVALID_ARGUMENT", detail=None):
        super().__init__(message, code=code, detail=detail)


class EmptyScopeError(InvalidArgumentError):
    def __init__(self, message: str = "scope is empty"):
        super().__init__(message, code="EMPTY_SCOPE")


class UndefinedMetricError(InvalidArgumentError):
    """Metric has no defined value on this scope (e.g. single-class AUC)."""

    def __init__(self, message: str):
        super().__init__(message, code="UNDEFINED_METRIC")


class UndefinedCurveError(InvalidArgumentError):
    """Curve has no defined value on this scope (e.g. single-class ROC)."""

    def __init__(self, message: str):
        super().__init__(message, code="UNDEFINED_CURVE")


class UnsupportedPolicyError(InvalidArgumentError):
    """Rejected-item policy requested for a metric that does not admit it."""

    def __init__(self, message: str):
        super().__init__(message, code="UNSUPPORTED_POLICY")
