"""
Tests for logging setup.
"""
import json
import logging

import pytest

from config.settings import LogLevel
from utils.logger import (
    ROOT_LOGGER_NAME, build_structured_formatter, get_logger,
    get_metrics_logger, log_evaluation, setup_logging
)


@pytest.fixture
def app_logger():
    """Restore the application logger after a test reconfigures it."""
    logger = logging.getLogger(ROOT_LOGGER_NAME)
    handlers, level, propagate = list(logger.handlers), logger.level, logger.propagate
    yield logger
    for handler in logger.handlers:
        handler.close()
    logger.handlers[:] = handlers
    logger.setLevel(level)
    logger.propagate = propagate


class TestSetupLogging:
    """Test handler configuration."""

    def test_console_handler_only(self, app_logger):
        """Without a log file there is a single stderr handler."""
        logger = setup_logging(LogLevel.INFO)
        assert logger is app_logger
        assert logger.level == logging.INFO
        assert len(logger.handlers) == 1
        assert not logger.propagate

    def test_repeated_setup_does_not_stack_handlers(self, app_logger):
        """Each session replaces the previous handlers."""
        setup_logging(LogLevel.WARNING)
        setup_logging(LogLevel.WARNING)
        assert len(app_logger.handlers) == 1

    def test_level_from_settings(self, app_logger, monkeypatch):
        """LOG_LEVEL is used when no level is passed."""
        monkeypatch.setenv("LOG_LEVEL", "DEBUG")
        from config.settings import reload_settings
        reload_settings()
        assert setup_logging().level == logging.DEBUG

    def test_debug_flag_overrides_log_level(self, app_logger, monkeypatch):
        """DEBUG=true lowers the default level; an explicit level still wins."""
        monkeypatch.setenv("DEBUG", "true")
        monkeypatch.setenv("LOG_LEVEL", "ERROR")
        from config.settings import reload_settings
        reload_settings()
        assert setup_logging().level == logging.DEBUG
        assert setup_logging(LogLevel.WARNING).level == logging.WARNING

    def test_log_file_receives_json(self, app_logger, tmp_path):
        """The file handler writes one JSON object per record."""
        path = tmp_path / "logs" / "session.log"
        setup_logging(LogLevel.ERROR, log_file=str(path))
        get_logger("algebra.hodge").error("basis volume computed", extra={"dim": 3})
        for handler in app_logger.handlers:
            handler.flush()
        record = json.loads(path.read_text(encoding="utf-8").strip().splitlines()[-1])
        assert record["event"] == "basis volume computed"
        assert record["dim"] == 3
        assert record["logger"] == "extensor_calc.algebra.hodge"


class TestStructuredFormatter:
    """Test JSON rendering of stdlib records."""

    def test_extra_fields_are_top_level(self):
        """extra= keys appear in the JSON output."""
        record = logging.LogRecord("extensor_calc.test", logging.WARNING, __file__, 1,
                                   "metric %s", ("degenerate",), None)
        record.eigenvalue = 0.0
        data = json.loads(build_structured_formatter().format(record))
        assert data["event"] == "metric degenerate"
        assert data["level"] == "warning"
        assert data["eigenvalue"] == 0.0
        assert "timestamp" in data


class TestLoggerNames:
    """Test the logger hierarchy."""

    def test_module_loggers_share_the_root(self):
        """Module loggers live under the application namespace."""
        assert get_logger("cli.runner").name == "extensor_calc.cli.runner"
        assert get_metrics_logger().name == "extensor_calc.metrics"


class TestLogEvaluation:
    """Test per-statement evaluation records."""

    def test_success_is_debug(self, mocker):
        """Successful statements log at debug level with timing."""
        debug = mocker.patch.object(get_metrics_logger(), "debug")
        log_evaluation("det(T)", 0.25, value_kind="scalar")
        message, = debug.call_args.args
        extra = debug.call_args.kwargs["extra"]
        assert message == "Statement evaluated"
        assert extra["statement"] == "det(T)"
        assert extra["execution_time"] == 0.25
        assert extra["value_kind"] == "scalar"
        assert extra["success"] is True

    def test_failure_is_info(self, mocker):
        """Failures carry the error type."""
        info = mocker.patch.object(get_metrics_logger(), "info")
        log_evaluation("inv(T)", success=False, error=ValueError("singular"))
        extra = info.call_args.kwargs["extra"]
        assert extra["error_type"] == "ValueError"
        assert extra["error_message"] == "singular"
        assert "execution_time" not in extra

    def test_long_statements_are_truncated(self, mocker):
        """Statement text is capped."""
        debug = mocker.patch.object(get_metrics_logger(), "debug")
        log_evaluation("e1 + " * 100)
        assert len(debug.call_args.kwargs["extra"]["statement"]) == 200
