"""
Tree-walking evaluator for parsed statements.
"""
import time
from typing import List, Optional, Tuple

import numpy as np

from algebra.extensor_repr import GeneralExtensor, LinOp
from algebra.multivector_kernel import (
    Multivector, clifford_product, left_contraction, right_contraction,
    scalar_product, wedge
)
from utils.error_handler import (
    EvaluationError, ExtensorError, SingularOperatorError, SourceError,
    TypeMismatchError, UnboundVariableError
)
from utils.logger import get_logger, log_evaluation

from .functions import FunctionRegistry
from .parser import (
    Assignment, BinaryOp, BladeLiteral, FunctionCall, Literal, MatrixLiteral,
    Node, Program, Statement, UnaryNeg, Variable, parse_source
)
from .session import SessionEnv, Value, is_operator, value_kind

logger = get_logger("cli.evaluator")

MULTIVECTOR_OPERATORS = {
    "^": wedge,
    "<<": left_contraction,
    ">>": right_contraction,
}


def _spanned(error: ExtensorError, node: Node) -> SourceError:
    """Attach the position of ``node`` to an error raised without one."""
    if isinstance(error, SourceError):
        if error.line:
            return error
        return type(error)(error.message, node.line, node.column, context=error.context)
    message = error.message
    if isinstance(error, SingularOperatorError):
        message = f"{message} (|det| = {abs(error.determinant):.3g})"
    return EvaluationError(message, node.line, node.column, context=error.context)


class Evaluator:
    """Evaluates statements against a session environment."""

    def __init__(self, env: SessionEnv):
        self.env = env

    # Statements

    def run_source(self, source: str) -> Optional[Value]:
        """
        Tokenize, parse and execute source text.

        Returns:
            Value of the last statement, or None if it was an assignment

        Raises:
            LexError, ParseError: before anything is evaluated
            EvaluationError: first failing statement
        """
        return self.execute(parse_source(source, self.env.context.dim))

    def execute(self, program: Program) -> Optional[Value]:
        result: Optional[Value] = None
        for statement in program.statements:
            result = self.execute_statement(statement)
        return result

    def execute_statement(self, statement: Statement) -> Optional[Value]:
        start = time.perf_counter()
        try:
            node = statement.node
            if isinstance(node, Assignment):
                value = self.evaluate(node.expr)
                self.env.bind(node.name, value)
                result = None
            else:
                value = result = self.evaluate(node)
        except ExtensorError as exc:
            log_evaluation(statement.text, time.perf_counter() - start, success=False, error=exc)
            raise
        log_evaluation(statement.text, time.perf_counter() - start, value_kind=value_kind(value))
        return result

    # Expressions

    def evaluate(self, node: Node) -> Value:
        try:
            return self._evaluate(node)
        except ExtensorError as exc:
            raise _spanned(exc, node) from None

    def _evaluate(self, node: Node) -> Value:
        if isinstance(node, Literal):
            return float(node.value)
        if isinstance(node, BladeLiteral):
            return Multivector.blade(self.env.context, node.indices)
        if isinstance(node, Variable):
            return self.env.lookup(node.name, node.line, node.column)
        if isinstance(node, UnaryNeg):
            return self._negate(self.evaluate(node.operand))
        if isinstance(node, BinaryOp):
            return self._binary_chain(node)
        if isinstance(node, FunctionCall):
            return self._call(node)
        if isinstance(node, MatrixLiteral):
            return self._matrix(node)
        raise EvaluationError(f"cannot evaluate {type(node).__name__}", node.line, node.column)

    def _binary_chain(self, node: BinaryOp) -> Value:
        # Left-associative chains are folded iteratively
        chain: List[BinaryOp] = []
        current: Node = node
        while isinstance(current, BinaryOp):
            chain.append(current)
            current = current.left
        value = self.evaluate(current)
        for op_node in reversed(chain):
            right = self.evaluate(op_node.right)
            try:
                value = self.apply_operator(op_node.op, value, right)
            except ExtensorError as exc:
                raise _spanned(exc, op_node) from None
        return value

    @staticmethod
    def _negate(value: Value) -> Value:
        if isinstance(value, float):
            return -value
        if isinstance(value, Multivector):
            return -value
        return value.scale(-1.0)

    def apply_operator(self, op: str, left: Value, right: Value) -> Value:
        """Apply a binary operator symbol to two values."""
        if op in ("+", "-"):
            return self._additive(op, left, right)
        if op == "*":
            return self._product(left, right)
        if op == "|":
            X, Y = self._multivectors(op, left, right)
            return scalar_product(X, Y)
        X, Y = self._multivectors(op, left, right)
        return MULTIVECTOR_OPERATORS[op](X, Y)

    def _multivectors(self, op: str, left: Value, right: Value) -> Tuple[Multivector, Multivector]:
        left, right = self.env.promote(left), self.env.promote(right)
        if not (isinstance(left, Multivector) and isinstance(right, Multivector)):
            raise TypeMismatchError(
                f"operator '{op}' needs multivectors, got {value_kind(left)} and {value_kind(right)}"
            )
        return left, right

    def _additive(self, op: str, left: Value, right: Value) -> Value:
        sign = 1.0 if op == "+" else -1.0
        if isinstance(left, float) and isinstance(right, float):
            return left + sign * right
        if is_operator(left) or is_operator(right):
            if type(left) is not type(right):
                raise TypeMismatchError(
                    f"operator '{op}' cannot combine {value_kind(left)} and {value_kind(right)}"
                )
            return left.add(right.scale(sign))
        X, Y = self._multivectors(op, left, right)
        return X + sign * Y

    def _product(self, left: Value, right: Value) -> Value:
        if isinstance(left, float) and isinstance(right, float):
            return left * right
        if isinstance(left, float) and is_operator(right):
            return right.scale(left)
        if is_operator(left) and isinstance(right, float):
            return left.scale(right)
        if is_operator(left) and is_operator(right):
            if type(left) is not type(right):
                raise TypeMismatchError(f"cannot compose {value_kind(left)} with {value_kind(right)}")
            return left.compose(right)
        if is_operator(left):
            return self._apply_operator_value(left, right)
        if is_operator(right):
            raise TypeMismatchError(f"cannot multiply multivector by {value_kind(right)}; write T(x) or T * x")
        X, Y = self._multivectors("*", left, right)
        return clifford_product(X, Y)

    def _apply_operator_value(self, operator: Value, argument: Value) -> Value:
        argument = self.env.promote(argument)
        if not isinstance(argument, Multivector):
            raise TypeMismatchError(f"operator expects a multivector argument, got {value_kind(argument)}")
        if isinstance(operator, LinOp):
            if argument.grades_present() not in ([], [1]):
                raise TypeMismatchError("linear operator applies to vectors only; use ext(T, x) for multivectors")
            return operator.apply(argument)
        return operator.apply(argument)

    def _call(self, node: FunctionCall) -> Value:
        args = [self.evaluate(arg) for arg in node.args]
        if FunctionRegistry.is_supported(node.name):
            return FunctionRegistry.call(node.name, self.env, args)
        if node.name not in self.env.bindings:
            raise UnboundVariableError(f"unknown function '{node.name}'", node.line, node.column)
        target = self.env.bindings[node.name]
        if not is_operator(target):
            raise TypeMismatchError(f"'{node.name}' is a {value_kind(target)} and cannot be called")
        if len(args) != 1:
            raise TypeMismatchError(f"operator '{node.name}' takes one argument, got {len(args)}")
        return self._apply_operator_value(target, args[0])

    def _matrix(self, node: MatrixLiteral) -> Value:
        context = self.env.context
        entries = np.empty((len(node.rows), len(node.rows[0])))
        for i, row in enumerate(node.rows):
            for j, entry in enumerate(row):
                value = self.env.promote(self.evaluate(entry))
                if not isinstance(value, Multivector) or value.grades_present() not in ([], [0]):
                    raise TypeMismatchError(
                        f"matrix entries must be scalars, got {value_kind(value)}", entry.line, entry.column
                    )
                entries[i, j] = value.scalar_part
        shape = entries.shape
        if shape == (context.dim, context.dim):
            return LinOp(context, entries)
        if shape == (context.size, context.size):
            return GeneralExtensor(context, entries)
        raise TypeMismatchError(
            f"matrix must be {context.dim}x{context.dim} or {context.size}x{context.size}, "
            f"got {shape[0]}x{shape[1]}"
        )
