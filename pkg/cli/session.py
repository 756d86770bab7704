"""
Session state for the expression language: algebra context, metric and
variable bindings.
"""
from dataclasses import dataclass, field
from typing import Dict, Optional, Union

import numpy as np

from algebra.extensor_repr import GeneralExtensor, LinOp
from algebra.metric_structures import MetricStructure, metric_from_spec
from algebra.multivector_kernel import AlgebraContext, Multivector
from utils.error_handler import UnboundVariableError
from utils.logger import get_logger

logger = get_logger("cli.session")

Value = Union[float, Multivector, LinOp, GeneralExtensor]


def value_kind(value: Value) -> str:
    """Tag of a value as shown in messages and logs."""
    if isinstance(value, float):
        return "scalar"
    if isinstance(value, Multivector):
        return "multivector"
    if isinstance(value, LinOp):
        return "linop"
    if isinstance(value, GeneralExtensor):
        return "general extensor"
    return type(value).__name__


def is_operator(value: Value) -> bool:
    return isinstance(value, (LinOp, GeneralExtensor))


@dataclass
class SessionEnv:
    """
    Evaluation environment of one session.

    ``context`` and ``metric`` are fixed when the session starts; bindings
    may be rebound by later statements.
    """
    context: AlgebraContext
    metric: MetricStructure
    bindings: Dict[str, Value] = field(default_factory=dict)

    @classmethod
    def create(cls, dim: int, metric: Optional[str] = None) -> "SessionEnv":
        """
        Build a session for ``--dim`` and ``--metric`` style options.

        Args:
            dim: Vector space dimension
            metric: ``identity``, ``diag:a,b,…`` or a JSON file path

        Raises:
            DimensionError: dim outside the supported range
            MetricError: invalid metric input
            FileNotFoundError: metric file does not exist
        """
        context = AlgebraContext.from_settings(dim)
        structure = metric_from_spec(metric or "identity", context)
        logger.debug(f"Session opened with dim={dim}, signature={structure.signature}")
        return cls(context=context, metric=structure)

    def bind(self, name: str, value: Value) -> None:
        self.bindings[name] = value

    def lookup(self, name: str, line: int = 0, column: int = 0) -> Value:
        try:
            return self.bindings[name]
        except KeyError:
            raise UnboundVariableError(f"unbound variable '{name}'", line, column) from None

    def promote(self, value: Value) -> Value:
        """Identify a real scalar with the grade-0 multivector."""
        if isinstance(value, (float, int, np.floating)):
            return Multivector.scalar(self.context, float(value))
        return value
