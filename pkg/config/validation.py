"""
Option and environment checks run before a session starts.
"""
import sys
from dataclasses import dataclass, field
from typing import List, Optional, TextIO

from pydantic import ValidationError

from .settings import EngineSettings, get_settings


@dataclass
class ValidationResult:
    """Messages collected by one round of checks, split by severity."""

    errors: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)
    info: List[str] = field(default_factory=list)

    @property
    def is_valid(self) -> bool:
        return not self.errors

    def add_error(self, message: str) -> None:
        self.errors.append(message)

    def add_warning(self, message: str) -> None:
        self.warnings.append(message)

    def add_info(self, message: str) -> None:
        self.info.append(message)

    def has_errors(self) -> bool:
        return bool(self.errors)

    def has_warnings(self) -> bool:
        return bool(self.warnings)

    def merge(self, other: "ValidationResult", prefix: str = "") -> None:
        """Append the messages of ``other``, labelled with ``prefix``."""
        label = f"{prefix}: " if prefix else ""
        for mine, theirs in ((self.errors, other.errors),
                             (self.warnings, other.warnings),
                             (self.info, other.info)):
            mine.extend(label + message for message in theirs)

    def get_summary(self) -> str:
        counts = [(self.errors, "error(s)"), (self.warnings, "warning(s)"),
                  (self.info, "info message(s)")]
        parts = [f"{len(messages)} {noun}" for messages, noun in counts if messages]
        if not parts:
            return "Configuration validation passed"
        return "Validation completed with " + ", ".join(parts)


def validate_metric_spec(metric: str, dim: int) -> ValidationResult:
    """Check the shape of a ``--metric`` value without building the metric."""
    result = ValidationResult()
    if metric == "identity":
        return result
    if metric.startswith("diag:"):
        parts = metric[len("diag:"):].split(",")
        try:
            [float(part) for part in parts]
        except ValueError:
            result.add_error(f"malformed diagonal metric '{metric}'")
            return result
        if len(parts) != dim:
            result.add_error(f"diagonal metric needs {dim} entries, got {len(parts)}")
        return result
    if not metric.endswith(".json"):
        result.add_warning(f"metric '{metric}' is read as a JSON file")
    return result


def validate_session_options(dim: int, metric: Optional[str] = None,
                             precision: Optional[int] = None,
                             settings: Optional[EngineSettings] = None) -> ValidationResult:
    """
    Validate command line options before a session starts.

    Args:
        dim: Requested vector space dimension
        metric: ``--metric`` value, identity when None
        precision: Requested significant digits
        settings: Settings providing the limits

    Returns:
        ValidationResult; errors map to exit status 2
    """
    settings = settings or get_settings()
    result = ValidationResult()

    if not 1 <= dim <= settings.max_dim:
        result.add_error(f"--dim must be in 1..{settings.max_dim}, got {dim}")
    else:
        result.add_info(f"Algebra dimension {dim} with {2 ** dim} blades")

    if precision is not None and not 1 <= precision <= 17:
        result.add_error(f"--precision must be in 1..17, got {precision}")

    if metric is not None and result.is_valid:
        result.merge(validate_metric_spec(metric.strip(), dim))

    return result


def validate_environment() -> ValidationResult:
    """Validate settings read from the environment and ``.env``."""
    result = ValidationResult()
    try:
        settings = EngineSettings()
    except ValidationError as exc:
        for error in exc.errors():
            location = ".".join(str(part) for part in error["loc"])
            result.add_error(f"{location}: {error['msg']}")
        return result

    if settings.tol_abs > settings.tol_rel:
        result.add_warning("GA_TOL_ABS is larger than GA_TOL_REL")
    if settings.component_max_arity > 4:
        result.add_warning("Component arrays above arity 4 grow quickly (n^k entries)")
    result.add_info(f"Log level {settings.log_level.value}")
    return result


REQUIRED_PACKAGES = (
    ("numpy", "NumPy arrays"),
    ("pydantic", "Pydantic validation"),
    ("pydantic_settings", "Pydantic settings"),
    ("structlog", "Structured logging"),
    ("dotenv", "Environment variable loading"),
)


def validate_dependencies() -> ValidationResult:
    """Report which runtime packages import cleanly."""
    result = ValidationResult()
    for module, label in REQUIRED_PACKAGES:
        try:
            __import__(module)
        except ImportError:
            result.add_warning(f"{label} is not installed ({module})")
        else:
            result.add_info(f"{label} is available")
    return result


def perform_startup_checks() -> ValidationResult:
    """Perform environment and dependency checks."""
    result = ValidationResult()
    result.merge(validate_environment(), "Environment")
    result.merge(validate_dependencies(), "Dependencies")
    return result


def print_validation_results(result: ValidationResult, verbose: bool = False,
                             stream: TextIO = sys.stderr) -> None:
    """Print validation results; values own stdout, so this goes to stderr."""
    for error in result.errors:
        print(f"error: {error}", file=stream)
    for warning in result.warnings:
        print(f"warning: {warning}", file=stream)
    if verbose:
        for info in result.info:
            print(f"info: {info}", file=stream)
        print(result.get_summary(), file=stream)
