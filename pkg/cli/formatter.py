"""
Text and JSON rendering of values.

Text output parses back to the same value: terms use ``·`` for scaling,
blades print juxtaposed (``e12``) up to dimension 9 and bracketed
(``e[2,11]``) above.
"""
import json
from typing import Optional

import numpy as np

from algebra.extensor_repr import GeneralExtensor, LinOp
from algebra.multivector_kernel import AlgebraContext, Multivector, mask_to_indices
from config.settings import OutputFormat, get_settings

from .session import Value
from .tokenizer import JUXTAPOSED_MAX_DIM


def format_number(value: float, precision: int) -> str:
    """``%g`` with ``precision`` significant digits; negative zero prints as 0."""
    text = f"{value:.{precision}g}"
    return "0" if text in ("-0", "0") else text


def blade_name(mask: int, dim: int) -> str:
    indices = mask_to_indices(mask)
    if dim <= JUXTAPOSED_MAX_DIM:
        return "e" + "".join(str(i) for i in indices)
    return "e[" + ",".join(str(i) for i in indices) + "]"


class ValueFormatter:
    """Renders values in the configured output mode."""

    def __init__(self, mode: Optional[OutputFormat] = None, precision: Optional[int] = None):
        settings = get_settings()
        self.mode = OutputFormat(mode or settings.output_format)
        self.precision = precision or settings.output_precision

    def format(self, value: Value, context: AlgebraContext) -> str:
        if self.mode is OutputFormat.JSON:
            return self.format_json(value, context)
        return self.format_text(value)

    # Text mode

    def format_text(self, value: Value) -> str:
        if isinstance(value, Multivector):
            return self._multivector_text(value)
        if isinstance(value, (LinOp, GeneralExtensor)):
            return self._matrix_text(value.matrix)
        return format_number(float(value), self.precision)

    def _multivector_text(self, X: Multivector) -> str:
        coeffs = X.coeffs
        finite = np.isfinite(coeffs)
        floor = X.context.tol_abs * max(1.0, float(np.abs(coeffs[finite]).max(initial=0.0)))
        pieces = []
        # nan and inf terms are always shown
        for mask in np.flatnonzero(~finite | (np.abs(coeffs) > floor)):
            coeff = float(coeffs[mask])
            magnitude = format_number(abs(coeff), self.precision)
            if magnitude == "0":
                continue
            if mask == 0:
                term = magnitude
            elif magnitude == "1":
                term = blade_name(int(mask), X.dim)
            else:
                term = f"{magnitude}·{blade_name(int(mask), X.dim)}"
            pieces.append((coeff < 0, term))
        if not pieces:
            return "0"
        negative, term = pieces[0]
        text = f"-{term}" if negative else term
        for negative, term in pieces[1:]:
            text += f" - {term}" if negative else f" + {term}"
        return text

    def _matrix_text(self, matrix: np.ndarray) -> str:
        rows = (
            "[" + ", ".join(format_number(float(x), self.precision) for x in row) + "]"
            for row in matrix
        )
        return "mat[" + ", ".join(rows) + "]"

    # JSON mode

    @staticmethod
    def format_json(value: Value, context: AlgebraContext) -> str:
        if not isinstance(value, (Multivector, LinOp, GeneralExtensor)):
            value = Multivector.scalar(context, float(value))
        return json.dumps(value.to_dict(), separators=(",", ":"))


def format_value(value: Value, context: AlgebraContext, mode: Optional[OutputFormat] = None,
                 precision: Optional[int] = None) -> str:
    return ValueFormatter(mode, precision).format(value, context)
