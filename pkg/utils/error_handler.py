"""
Error handling utilities and custom exceptions.
"""
import traceback
from typing import Dict, Any, Optional, Iterable, Tuple
from enum import Enum

from .logger import get_logger

logger = get_logger("error_handler")


class ErrorType(Enum):
    """Types of errors that can occur in the engine."""
    CONTEXT_ERROR = "context_error"
    DIMENSION_ERROR = "dimension_error"
    GRADE_ERROR = "grade_error"
    SHAPE_ERROR = "shape_error"
    SINGULAR_ERROR = "singular_error"
    METRIC_ERROR = "metric_error"
    CONVERGENCE_ERROR = "convergence_error"
    SYNTAX_ERROR = "syntax_error"
    EVALUATION_ERROR = "evaluation_error"
    CONFIGURATION_ERROR = "configuration_error"
    USAGE_ERROR = "usage_error"
    UNKNOWN_ERROR = "unknown_error"


class ExtensorError(Exception):
    """Base exception for the extensor calculus engine."""

    def __init__(self, message: str, error_type: ErrorType = ErrorType.UNKNOWN_ERROR,
                 context: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.error_type = error_type
        self.context = context or {}
        self.message = message


class ContextMismatchError(ExtensorError):
    """Operands belong to different algebra contexts."""

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(message, ErrorType.CONTEXT_ERROR, context)


class DimensionError(ExtensorError):
    """Dimension outside the supported range."""

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(message, ErrorType.DIMENSION_ERROR, context)


class GradeError(ExtensorError):
    """Grade outside 0..n."""

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(message, ErrorType.GRADE_ERROR, context)


class ShapeError(ExtensorError):
    """Array shape or arity does not match what the operation needs."""

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(message, ErrorType.SHAPE_ERROR, context)


class SingularBasisError(ExtensorError):
    """Gram matrix of a basis is not invertible."""

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(message, ErrorType.SINGULAR_ERROR, context)


class SingularOperatorError(ExtensorError):
    """Linear operator with vanishing determinant."""

    def __init__(self, message: str, determinant: float, context: Optional[Dict[str, Any]] = None):
        super().__init__(message, ErrorType.SINGULAR_ERROR, context)
        self.determinant = determinant


class MetricError(ExtensorError):
    """Invalid metric input (asymmetric, degenerate, malformed)."""

    def __init__(self, message: str, entries: Iterable[Tuple[int, int]] = (),
                 context: Optional[Dict[str, Any]] = None):
        super().__init__(message, ErrorType.METRIC_ERROR, context)
        self.entries = list(entries)


class ConvergenceError(ExtensorError):
    """Iterative solver did not converge."""

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(message, ErrorType.CONVERGENCE_ERROR, context)


class UnknownProductError(ExtensorError):
    """Product tag is not one of the supported products."""

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(message, ErrorType.EVALUATION_ERROR, context)


class SourceError(ExtensorError):
    """Error tied to a position in expression source text."""

    def __init__(self, message: str, line: int, column: int,
                 error_type: ErrorType = ErrorType.SYNTAX_ERROR,
                 context: Optional[Dict[str, Any]] = None):
        super().__init__(message, error_type, context)
        self.line = line
        self.column = column

    @property
    def span(self) -> str:
        """Position as ``line:column``."""
        return f"{self.line}:{self.column}"


class LexError(SourceError):
    """Illegal character or malformed number."""


class ParseError(SourceError):
    """Unexpected token or unbalanced brackets."""

    def __init__(self, message: str, line: int, column: int,
                 expected: Iterable[str] = (), context: Optional[Dict[str, Any]] = None):
        super().__init__(message, line, column, ErrorType.SYNTAX_ERROR, context)
        self.expected = sorted(set(expected))


class EvaluationError(SourceError):
    """Runtime failure while evaluating an expression."""

    def __init__(self, message: str, line: int = 0, column: int = 0,
                 context: Optional[Dict[str, Any]] = None):
        super().__init__(message, line, column, ErrorType.EVALUATION_ERROR, context)


class TypeMismatchError(EvaluationError):
    """Operand kinds are incompatible."""


class UnboundVariableError(EvaluationError):
    """Name used before assignment."""


class ConfigurationError(ExtensorError):
    """Exception for configuration related errors."""

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(message, ErrorType.CONFIGURATION_ERROR, context)


class UsageError(ExtensorError):
    """Invalid command line usage."""

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(message, ErrorType.USAGE_ERROR, context)


class ErrorHandler:
    """Centralized error reporting for the command line front end."""

    @staticmethod
    def handle_error(error: Exception, context: Optional[Dict[str, Any]] = None) -> str:
        """Log an error and return the one-line message shown to the user."""
        error_context = context or {}

        logger.debug(
            f"Error occurred: {str(error)}",
            extra={
                "error_type": getattr(error, 'error_type', ErrorType.UNKNOWN_ERROR).value,
                "context": error_context,
                "traceback": traceback.format_exc()
            }
        )

        if isinstance(error, ParseError):
            return ErrorHandler._handle_parse_error(error)
        elif isinstance(error, SourceError):
            kind = "lex error" if isinstance(error, LexError) else "error"
            return f"{error.span}: {kind}: {error.message}"
        elif isinstance(error, SingularOperatorError):
            return f"error: {error.message} (|det| = {abs(error.determinant):.3g})"
        elif isinstance(error, MetricError):
            return ErrorHandler._handle_metric_error(error)
        elif isinstance(error, ConfigurationError):
            return f"configuration error: {error.message}"
        elif isinstance(error, UsageError):
            return f"usage error: {error.message}"
        elif isinstance(error, ExtensorError):
            return f"error: {error.message}"
        elif isinstance(error, FileNotFoundError):
            return f"error: file not found: {error.filename}"
        else:
            logger.error(f"Unexpected failure: {error!r}")
            return f"internal error: {error}"

    @staticmethod
    def _handle_parse_error(error: ParseError) -> str:
        """Render a parse error with its expectation set."""
        message = f"{error.span}: syntax error: {error.message}"
        if error.expected:
            message += f" (expected one of: {', '.join(error.expected)})"
        return message

    @staticmethod
    def _handle_metric_error(error: MetricError) -> str:
        """Render a metric error with offending entry indices."""
        if not error.entries:
            return f"metric error: {error.message}"
        shown = ", ".join(f"[{i},{j}]" for i, j in error.entries[:6])
        return f"metric error: {error.message} at {shown}"

    @staticmethod
    def exit_code_for(error: Exception) -> int:
        """
        Map an error to the process exit status.

        Failures while opening a session or reading its input exit 2; everything
        raised while evaluating source text exits 1.
        """
        if isinstance(error, (UsageError, ConfigurationError, DimensionError, MetricError, OSError)):
            return 2
        return 1
