"""
Tests for engine settings and startup validation.
"""
import io

import pytest
from pydantic import ValidationError

from config.settings import EngineSettings, LogLevel, OutputFormat, get_settings, reload_settings
from config.validation import (
    ValidationResult, perform_startup_checks, print_validation_results,
    validate_dependencies, validate_environment, validate_metric_spec,
    validate_session_options
)


class TestEngineSettings:
    """Test settings defaults, environment overrides and validators."""

    def test_defaults(self):
        """Defaults match the documented values."""
        settings = get_settings()
        assert settings.tol_rel == 1e-9
        assert settings.tol_abs == 1e-12
        assert settings.max_dim == 12
        assert settings.output_precision == 12
        assert settings.output_format is OutputFormat.TEXT
        assert settings.prompt == "ga> "
        assert settings.log_level is LogLevel.WARNING

    def test_environment_override(self, monkeypatch):
        """GA_* variables override defaults after a reload."""
        monkeypatch.setenv("GA_TOL_REL", "1e-6")
        monkeypatch.setenv("GA_MAX_DIM", "8")
        settings = reload_settings()
        assert settings.tol_rel == 1e-6
        assert settings.max_dim == 8
        assert get_settings() is settings

    def test_dotenv_file(self, tmp_path):
        """A .env file in the working directory is read."""
        (tmp_path / ".env").write_text("GA_PRECISION=5\n", encoding="utf-8")
        assert reload_settings().output_precision == 5

    def test_rejects_large_relative_tolerance(self, monkeypatch):
        """tol_rel must stay far below one."""
        monkeypatch.setenv("GA_TOL_REL", "0.5")
        with pytest.raises(ValidationError):
            EngineSettings()

    def test_component_limit_cannot_exceed_dimension_cap(self, monkeypatch):
        """Component limits are bounded by GA_MAX_DIM."""
        monkeypatch.setenv("GA_MAX_DIM", "4")
        monkeypatch.setenv("GA_COMPONENT_MAX_DIM", "6")
        with pytest.raises(ValidationError):
            EngineSettings()

    def test_rejects_empty_prompt(self):
        """The prompt cannot be empty."""
        with pytest.raises(ValidationError):
            EngineSettings(prompt="")

    def test_field_names_are_accepted(self):
        """Settings can be built by field name in code."""
        assert EngineSettings(output_precision=4).output_precision == 4


class TestValidationResult:
    """Test the validation result container."""

    def test_errors_invalidate(self):
        """Adding an error flips is_valid."""
        result = ValidationResult()
        result.add_warning("careful")
        assert result.is_valid
        result.add_error("broken")
        assert not result.is_valid
        assert result.has_errors() and result.has_warnings()

    def test_merge_prefixes_messages(self):
        """Merged messages carry the prefix."""
        inner = ValidationResult()
        inner.add_error("bad")
        outer = ValidationResult()
        outer.merge(inner, "Metric")
        assert outer.errors == ["Metric: bad"]
        assert not outer.is_valid

    def test_summary(self):
        """The summary counts messages."""
        result = ValidationResult()
        assert result.get_summary() == "Configuration validation passed"
        result.add_error("x")
        result.add_info("y")
        assert result.get_summary() == "Validation completed with 1 error(s), 1 info message(s)"


class TestSessionOptions:
    """Test validation of command line options."""

    def test_valid_options(self):
        """A normal invocation validates."""
        assert validate_session_options(3, "diag:1,1,-1", 6).is_valid

    @pytest.mark.parametrize("dim", [0, 13])
    def test_dimension_range(self, dim):
        """dim must be in 1..max_dim."""
        result = validate_session_options(dim)
        assert not result.is_valid
        assert "--dim must be in 1..12" in result.errors[0]

    def test_dimension_cap_follows_settings(self, monkeypatch):
        """Lowering GA_MAX_DIM lowers the accepted range."""
        monkeypatch.setenv("GA_MAX_DIM", "4")
        monkeypatch.setenv("GA_COMPONENT_MAX_DIM", "4")
        reload_settings()
        result = validate_session_options(5)
        assert result.errors == ["--dim must be in 1..4, got 5"]

    @pytest.mark.parametrize("precision", [0, 18])
    def test_precision_range(self, precision):
        """precision must be in 1..17."""
        assert not validate_session_options(2, precision=precision).is_valid

    def test_diagonal_metric_count(self):
        """diag needs one entry per dimension."""
        result = validate_metric_spec("diag:1,2", 3)
        assert result.errors == ["diagonal metric needs 3 entries, got 2"]

    def test_malformed_diagonal_metric(self):
        """diag entries are numbers."""
        assert not validate_metric_spec("diag:1,a", 2).is_valid

    def test_unusual_metric_path(self):
        """A path without .json is accepted with a warning."""
        result = validate_metric_spec("metric.txt", 2)
        assert result.is_valid
        assert result.has_warnings()


class TestStartupChecks:
    """Test environment and dependency checks."""

    def test_environment_errors_are_collected(self, monkeypatch):
        """Invalid variables become validation errors."""
        monkeypatch.setenv("GA_PRECISION", "99")
        result = validate_environment()
        assert not result.is_valid
        assert any("GA_PRECISION" in error or "output_precision" in error for error in result.errors)

    def test_tolerance_warning(self, monkeypatch):
        """An absolute floor above the relative tolerance is suspicious."""
        monkeypatch.setenv("GA_TOL_ABS", "1e-6")
        assert validate_environment().has_warnings()

    def test_dependencies_available(self):
        """The numerical stack is installed."""
        result = validate_dependencies()
        assert not result.has_warnings()
        assert any("NumPy" in message for message in result.info)

    def test_missing_dependency(self, mocker):
        """Missing packages become warnings."""
        real_import = __import__

        def fake_import(name, *args, **kwargs):
            if name == "structlog":
                raise ImportError(name)
            return real_import(name, *args, **kwargs)

        mocker.patch("builtins.__import__", side_effect=fake_import)
        result = validate_dependencies()
        assert result.warnings == ["Structured logging is not installed (structlog)"]

    def test_startup_checks_merge(self):
        """Startup checks prefix their sources."""
        result = perform_startup_checks()
        assert result.is_valid
        assert any(message.startswith("Dependencies: ") for message in result.info)

    def test_print_results(self):
        """Errors and warnings go to the given stream."""
        result = ValidationResult()
        result.add_error("bad dim")
        result.add_warning("odd metric")
        result.add_info("hidden")
        stream = io.StringIO()
        print_validation_results(result, stream=stream)
        assert stream.getvalue() == "error: bad dim\nwarning: odd metric\n"
