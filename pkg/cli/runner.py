#!/usr/bin/env python3
"""
Command line entry point: batch evaluation (--eval, --script) and the
interactive prompt.

Exit status: 0 on success, 1 on a lex, parse or evaluation error, 2 on a
usage error (bad flags, invalid metric, missing file).
"""
import argparse
import sys
from pathlib import Path
from typing import List, Optional, TextIO, Type

from config.settings import LogLevel, OutputFormat, get_settings, reload_settings
from config.validation import (
    ValidationResult, perform_startup_checks, print_validation_results, validate_session_options
)
from utils.error_handler import ConfigurationError, ErrorHandler, ExtensorError, UsageError
from utils.logger import get_logger, setup_logging

from .evaluator import Evaluator
from .formatter import ValueFormatter
from .functions import FunctionRegistry
from .session import SessionEnv

logger = get_logger("cli.runner")

EXIT_OK = 0
EXIT_USAGE = 2

REPL_QUIT = ("quit", "exit")

EPILOG = """\
operators (loosest first, all left-associative):
  + -        sum, difference
  |          scalar product
  << >>      left / right contraction
  ^          wedge
  *          geometric product, scaling, operator composition or application
  -x, f(x)   unary minus, function call

literals:
  1.5, 2e-3            real scalars
  e1, e12              basis blades (juxtaposed form for dim <= 9)
  e[2,11]              basis blades (bracket form, any dim)
  mat[[a,b],[c,d]]     n x n linear operator or 2^n x 2^n general extensor;
                       columns are the images of the basis elements

statements are separated by ';' or newlines; '#' starts a comment.
settings come from flags, then GA_* environment variables, then .env.

functions:
"""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="extensor-calc",
        description="Evaluate multivector and extensor expressions",
        epilog=EPILOG + FunctionRegistry.help_text(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--dim", type=int, required=True, help="Dimension of the vector space (1..12)")
    parser.add_argument(
        "--metric",
        default="identity",
        help="identity, diag:a,b,... or a JSON file {\"dim\": n, \"matrix\": [...]} (default: identity)"
    )
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--eval", dest="expression", metavar="EXPR", help="Evaluate EXPR and print the last value")
    source.add_argument("--script", metavar="FILE", help="Evaluate the statements in FILE")
    parser.add_argument(
        "--format",
        choices=[fmt.value for fmt in OutputFormat],
        default=None,
        help="Output format (default: text)"
    )
    parser.add_argument("--precision", type=int, default=None, help="Significant digits in text output (default: 12)")
    parser.add_argument(
        "--log-level",
        choices=[level.value for level in LogLevel],
        default=None,
        help="Logging level for stderr diagnostics"
    )
    return parser


class Runner:
    """Runs one session in batch or interactive mode."""

    def __init__(self, env: SessionEnv, formatter: ValueFormatter,
                 stdout: TextIO = sys.stdout, stderr: TextIO = sys.stderr):
        self.env = env
        self.evaluator = Evaluator(env)
        self.formatter = formatter
        self.stdout = stdout
        self.stderr = stderr

    def report(self, error: Exception) -> None:
        print(ErrorHandler.handle_error(error), file=self.stderr)

    def run_batch(self, source: str) -> int:
        """Evaluate all statements; print the value of the last one."""
        try:
            result = self.evaluator.run_source(source)
        except ExtensorError as exc:
            self.report(exc)
            return ErrorHandler.exit_code_for(exc)
        if result is not None:
            print(self.formatter.format(result, self.env.context), file=self.stdout)
        return EXIT_OK

    def run_script(self, path: str) -> int:
        try:
            source = Path(path).read_text(encoding="utf-8")
        except FileNotFoundError as exc:
            error: Exception = exc
        except (OSError, UnicodeDecodeError) as exc:
            error = UsageError(f"cannot read {path}: {exc}")
        else:
            return self.run_batch(source)
        self.report(error)
        return ErrorHandler.exit_code_for(error)

    def run_repl(self, stdin: TextIO = sys.stdin) -> int:
        """Read-eval-print loop; errors are reported and the loop continues."""
        prompt = get_settings().prompt
        while True:
            self.stdout.write(prompt)
            self.stdout.flush()
            line = stdin.readline()
            if not line:
                self.stdout.write("\n")
                return EXIT_OK
            command = line.strip()
            if command in REPL_QUIT:
                return EXIT_OK
            if command == "vars":
                self._print_bindings()
                continue
            if not command:
                continue
            try:
                result = self.evaluator.run_source(line)
            except ExtensorError as exc:
                self.report(exc)
                continue
            if result is not None:
                print(self.formatter.format(result, self.env.context), file=self.stdout)

    def _print_bindings(self) -> None:
        for name in sorted(self.env.bindings):
            value = self.formatter.format_text(self.env.bindings[name])
            print(f"{name} = {value}", file=self.stdout)


def _enforce(result: ValidationResult, error_type: Type[ExtensorError], stderr: TextIO) -> None:
    """Echo warnings; turn errors into ``error_type``."""
    if result.has_warnings():
        print_validation_results(ValidationResult(warnings=result.warnings), stream=stderr)
    if not result.is_valid:
        raise error_type("; ".join(result.errors), context={"errors": result.errors})


def open_session(args: argparse.Namespace, stderr: TextIO = sys.stderr) -> SessionEnv:
    """
    Check the environment and the flags, then build the session.

    Raises:
        ConfigurationError: a GA_* or LOG_* setting is invalid
        UsageError: a flag is out of range
        MetricError: the metric cannot be built
        FileNotFoundError: the metric file does not exist
    """
    _enforce(perform_startup_checks(), ConfigurationError, stderr)
    reload_settings()
    _enforce(validate_session_options(args.dim, args.metric, args.precision), UsageError, stderr)
    setup_logging(LogLevel(args.log_level) if args.log_level else None)
    return SessionEnv.create(args.dim, args.metric)


def main(argv: Optional[List[str]] = None, stdin: Optional[TextIO] = None,
         stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    """
    Parse flags, open a session and run it.

    Returns:
        Process exit status
    """
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    try:
        env = open_session(args, stderr)
    except (ExtensorError, OSError) as exc:
        print(ErrorHandler.handle_error(exc), file=stderr)
        return ErrorHandler.exit_code_for(exc)

    formatter = ValueFormatter(OutputFormat(args.format) if args.format else None, args.precision)
    runner = Runner(env, formatter, stdout=stdout, stderr=stderr)

    if args.expression is not None:
        return runner.run_batch(args.expression)
    if args.script is not None:
        return runner.run_script(args.script)
    return runner.run_repl(stdin)


if __name__ == "__main__":
    sys.exit(main())
