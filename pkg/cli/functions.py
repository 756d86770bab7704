"""
Built-in functions of the expression language.

Every function delegates to the algebra package; this module only checks
argument kinds and arity.
"""
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from algebra.extensor_repr import GeneralExtensor, LinOp
from algebra.hodge import (
    hodge_metric, hodge_metric_inv, hodge_metric_via_gauge,
    hodge_metric_via_standard, hodge_standard, hodge_standard_inv
)
from algebra.metric_structures import adjoint_metric
from algebra.multivector_kernel import (
    Multivector, conjugation, grade_involution, grade_part, project_grades, reversion
)
from algebra.operator_calculus import (
    adjoint_inverse, adjoint_standard, apply_extended, bivector_of,
    determinant, extend, generalize, inverse_linop
)
from utils.error_handler import TypeMismatchError

from .session import SessionEnv, Value, value_kind

Handler = Callable[[SessionEnv, List[Value]], Value]


@dataclass(frozen=True)
class FunctionSpec:
    """A callable together with its accepted argument count."""
    name: str
    handler: Handler
    min_args: int
    max_args: Optional[int]
    signature: str
    summary: str

    def check_arity(self, count: int) -> None:
        if count < self.min_args or (self.max_args is not None and count > self.max_args):
            raise TypeMismatchError(f"{self.name} expects {self.signature}, got {count} argument(s)")


# Argument coercion

def _linop(name: str, value: Value) -> LinOp:
    if not isinstance(value, LinOp):
        raise TypeMismatchError(f"{name} expects a linear operator, got {value_kind(value)}")
    return value


def _multivector(env: SessionEnv, name: str, value: Value) -> Multivector:
    value = env.promote(value)
    if not isinstance(value, Multivector):
        raise TypeMismatchError(f"{name} expects a multivector, got {value_kind(value)}")
    return value


def _grade(env: SessionEnv, name: str, value: Value) -> int:
    value = env.promote(value)
    if not isinstance(value, Multivector) or value.grades_present() not in ([], [0]):
        raise TypeMismatchError(f"{name} expects an integer grade, got {value_kind(value)}")
    k = value.scalar_part
    if not np.isfinite(k) or k != int(k):
        raise TypeMismatchError(f"{name} expects an integer grade, got {k:g}")
    return int(k)


# Operator functions

def _ext(env: SessionEnv, args: List[Value]) -> Value:
    t = _linop("ext", args[0])
    if len(args) == 2:
        return apply_extended(t, _multivector(env, "ext", args[1]))
    return extend(t)


def _gen(env: SessionEnv, args: List[Value]) -> Value:
    t = _linop("gen", args[0])
    if len(args) == 2:
        return generalize(t).apply(_multivector(env, "gen", args[1]))
    return generalize(t)


def _adj(env: SessionEnv, args: List[Value]) -> Value:
    if not isinstance(args[0], (LinOp, GeneralExtensor)):
        raise TypeMismatchError(f"adj expects an operator, got {value_kind(args[0])}")
    return adjoint_standard(args[0])


def _madj(env: SessionEnv, args: List[Value]) -> Value:
    if not isinstance(args[0], (LinOp, GeneralExtensor)):
        raise TypeMismatchError(f"madj expects an operator, got {value_kind(args[0])}")
    return adjoint_metric(args[0], env.metric)


def _biv(env: SessionEnv, args: List[Value]) -> Value:
    return bivector_of(_linop("biv", args[0]))


def _det(env: SessionEnv, args: List[Value]) -> Value:
    return determinant(_linop("det", args[0]))


def _inv(env: SessionEnv, args: List[Value]) -> Value:
    return inverse_linop(_linop("inv", args[0]))


def _adjinv(env: SessionEnv, args: List[Value]) -> Value:
    return adjoint_inverse(_linop("adjinv", args[0]))


def _sym(env: SessionEnv, args: List[Value]) -> Value:
    return _linop("sym", args[0]).symmetric_part()


def _skew(env: SessionEnv, args: List[Value]) -> Value:
    return _linop("skew", args[0]).skew_part()


# Multivector functions

def _unary(name: str, func: Callable[[Multivector], Multivector]) -> Handler:
    def handler(env: SessionEnv, args: List[Value]) -> Value:
        return func(_multivector(env, name, args[0]))
    return handler


def _metric_unary(name: str, func) -> Handler:
    def handler(env: SessionEnv, args: List[Value]) -> Value:
        return func(env.metric, _multivector(env, name, args[0]))
    return handler


def _grade_fn(env: SessionEnv, args: List[Value]) -> Value:
    return grade_part(_multivector(env, "grade", args[0]), _grade(env, "grade", args[1]))


def _proj(env: SessionEnv, args: List[Value]) -> Value:
    X = _multivector(env, "proj", args[0])
    grades = [_grade(env, "proj", k) for k in args[1:]]
    for k in grades:
        env.context.check_grade(k)
    return project_grades(X, grades)


class FunctionRegistry:
    """Registry of the functions callable from expressions."""

    # Registry of available functions
    _functions: Dict[str, FunctionSpec] = {
        spec.name: spec for spec in (
            FunctionSpec("ext", _ext, 1, 2, "(T[, x])", "extended of T, or its value at x"),
            FunctionSpec("adj", _adj, 1, 1, "(T)", "standard adjoint"),
            FunctionSpec("madj", _madj, 1, 1, "(T)", "adjoint under the session metric"),
            FunctionSpec("gen", _gen, 1, 2, "(T[, x])", "generalized of T, or its value at x"),
            FunctionSpec("biv", _biv, 1, 1, "(T)", "bivector of T"),
            FunctionSpec("det", _det, 1, 1, "(T)", "determinant"),
            FunctionSpec("inv", _inv, 1, 1, "(T)", "inverse operator"),
            FunctionSpec("adjinv", _adjinv, 1, 1, "(T)", "inverse of the adjoint"),
            FunctionSpec("sym", _sym, 1, 1, "(T)", "symmetric part"),
            FunctionSpec("skew", _skew, 1, 1, "(T)", "skew-symmetric part"),
            FunctionSpec("dual", _unary("dual", hodge_standard), 1, 1, "(x)", "standard Hodge dual"),
            FunctionSpec("idual", _unary("idual", hodge_standard_inv), 1, 1, "(x)", "inverse standard Hodge dual"),
            FunctionSpec("mdual", _metric_unary("mdual", hodge_metric), 1, 1, "(x)", "metric Hodge dual"),
            FunctionSpec("midual", _metric_unary("midual", hodge_metric_inv), 1, 1, "(x)", "inverse metric Hodge dual"),
            FunctionSpec("gdual", _metric_unary("gdual", hodge_metric_via_gauge), 1, 1, "(x)",
                         "metric Hodge dual through the gauge"),
            FunctionSpec("sdual", _metric_unary("sdual", hodge_metric_via_standard), 1, 1, "(x)",
                         "metric Hodge dual through the standard one"),
            FunctionSpec("grade", _grade_fn, 2, 2, "(x, k)", "grade-k part"),
            FunctionSpec("proj", _proj, 2, None, "(x, k, ...)", "projection onto the listed grades"),
            FunctionSpec("rev", _unary("rev", reversion), 1, 1, "(x)", "reversion"),
            FunctionSpec("ginv", _unary("ginv", grade_involution), 1, 1, "(x)", "grade involution"),
            FunctionSpec("conj", _unary("conj", conjugation), 1, 1, "(x)", "Clifford conjugation"),
        )
    }

    @classmethod
    def get(cls, name: str) -> Optional[FunctionSpec]:
        return cls._functions.get(name)

    @classmethod
    def call(cls, name: str, env: SessionEnv, args: Sequence[Value]) -> Value:
        """
        Invoke a registered function.

        Raises:
            TypeMismatchError: wrong arity or argument kind
            KeyError: unknown function name
        """
        spec = cls._functions[name]
        spec.check_arity(len(args))
        result = spec.handler(env, list(args))
        if isinstance(result, (int, np.floating)):
            result = float(result)
        return result

    @classmethod
    def register(cls, spec: FunctionSpec) -> None:
        cls._functions[spec.name] = spec

    @classmethod
    def is_supported(cls, name: str) -> bool:
        return name in cls._functions

    @classmethod
    def available(cls) -> List[str]:
        return sorted(cls._functions)

    @classmethod
    def help_text(cls) -> str:
        """One line per function, for ``--help``."""
        width = max(len(s.name + s.signature) for s in cls._functions.values())
        return "\n".join(
            f"  {(s.name + s.signature).ljust(width)}  {s.summary}"
            for s in sorted(cls._functions.values(), key=lambda s: s.name)
        )
