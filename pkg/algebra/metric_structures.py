"""
Metric extensors, metric products and adjoints, signature and gauge.

A metric g is a symmetric non-degenerate (1,1)-extensor measured against the
fixed Euclidean scalar product. Its eigendecomposition g = QΛQᵀ, computed with
a cyclic Jacobi solver, provides the signature (p, q) and the gauge
decomposition g = h†∘η∘h.
"""
import json
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np

from config.settings import get_settings
from utils.error_handler import ConvergenceError, MetricError, ShapeError
from utils.logger import get_logger

from .extensor_repr import GeneralExtensor, GradeSetExtensor, LinOp
from .multivector_kernel import (
    AlgebraContext, Multivector, clifford_product, left_contraction,
    right_contraction, scalar_product
)
from .operator_calculus import determinant, extend

logger = get_logger("algebra.metric")

MetricAdjointTarget = Union[LinOp, GeneralExtensor, GradeSetExtensor]


def jacobi_eigh(matrix: np.ndarray, tol: Optional[float] = None,
                max_sweeps: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray, int]:
    """
    Eigenvalues and eigenvectors of a real symmetric matrix by cyclic Jacobi rotations.

    Args:
        matrix: Symmetric n×n array
        tol: Off-diagonal threshold relative to the Frobenius norm
        max_sweeps: Sweep budget before giving up

    Returns:
        (eigenvalues, eigenvectors as columns, sweeps used)

    Raises:
        ConvergenceError: if the off-diagonal part does not vanish in time
    """
    settings = get_settings()
    tol = settings.jacobi_tolerance if tol is None else tol
    max_sweeps = settings.jacobi_max_sweeps if max_sweeps is None else max_sweeps

    a = np.array(matrix, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ShapeError(f"Jacobi solver needs a square matrix, got shape {a.shape}")
    v = np.eye(n)
    limit = tol * max(np.linalg.norm(a), np.finfo(float).tiny)

    for sweep in range(max_sweeps + 1):
        off = np.abs(a[np.triu_indices(n, 1)])
        if off.size == 0 or off.max() < limit:
            return np.diag(a).copy(), v, sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) < limit:
                    continue
                phi = 0.5 * math.atan2(2.0 * a[p, q], a[q, q] - a[p, p])
                c, s = math.cos(phi), math.sin(phi)
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
                vec_p, vec_q = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q

    raise ConvergenceError(
        f"Jacobi eigen-solver did not converge in {max_sweeps} sweeps",
        context={"dim": n}
    )


@dataclass(frozen=True, eq=False)
class MetricStructure:
    """
    A validated metric extensor with its signature and gauge decomposition.

    ``eigenvalues`` are ordered positive first, each sign group by descending
    magnitude; ``eigenvectors`` holds the matching orthonormal columns.
    """
    g: LinOp
    signature: Tuple[int, int]
    h: LinOp
    eta: LinOp
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def context(self) -> AlgebraContext:
        return self.g.context

    @property
    def p(self) -> int:
        return self.signature[0]

    @property
    def q(self) -> int:
        return self.signature[1]

    @cached_property
    def det(self) -> float:
        return determinant(self.g)

    @cached_property
    def inverse(self) -> LinOp:
        """g⁻¹ from the eigendecomposition."""
        q = self.eigenvectors
        return LinOp(self.context, q @ np.diag(1.0 / self.eigenvalues) @ q.T)

    @cached_property
    def extended(self) -> GeneralExtensor:
        return extend(self.g)

    @cached_property
    def extended_inverse(self) -> GeneralExtensor:
        return extend(self.inverse)

    @cached_property
    def extended_eigenvectors(self) -> GeneralExtensor:
        return extend(LinOp(self.context, self.eigenvectors))

    @cached_property
    def sign_det_h(self) -> float:
        return 1.0 if determinant(self.h) > 0 else -1.0

    def deform(self, X: Multivector, inverse: bool = False) -> Multivector:
        """ḡ(X), or ḡ⁻¹(X) when ``inverse``."""
        return (self.extended_inverse if inverse else self.extended).apply(X)

    def gauge_metric(self) -> "MetricStructure":
        """The diagonal orthogonal metric η of the same signature."""
        return metric_from_matrix(self.eta.matrix, self.context)

    def is_euclidean(self) -> bool:
        return self.g.isclose(LinOp.identity(self.context))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dim": self.context.dim,
            "matrix": self.g.matrix.ravel().tolist(),
            "signature": list(self.signature),
        }


def metric_from_matrix(matrix: Any, context: AlgebraContext) -> MetricStructure:
    """
    Validate a symmetric non-degenerate matrix and decompose it.

    Args:
        matrix: n×n array (column j is g(e_j))
        context: Algebra the metric lives in

    Returns:
        MetricStructure with signature and gauge

    Raises:
        MetricError: wrong shape, asymmetric entries, or a degenerate eigenvalue
    """
    settings = get_settings()
    n = context.dim
    try:
        m = np.array(matrix, dtype=float)
    except (TypeError, ValueError) as exc:
        raise MetricError(f"Metric entries must be numbers: {exc}") from None
    if m.shape != (n, n):
        raise MetricError(f"Metric needs shape ({n}, {n}), got {m.shape}")
    if not np.all(np.isfinite(m)):
        bad = [(int(i) + 1, int(j) + 1) for i, j in zip(*np.nonzero(~np.isfinite(m)))]
        raise MetricError("Metric has non-finite entries", entries=bad)

    asymmetric = np.abs(m - m.T) > settings.symmetry_tolerance
    if np.any(asymmetric):
        entries = [(int(i) + 1, int(j) + 1) for i, j in zip(*np.nonzero(np.triu(asymmetric)))]
        raise MetricError("Metric is not symmetric", entries=entries)
    m = 0.5 * (m + m.T)

    values, vectors, sweeps = jacobi_eigh(m)
    scale = max(1.0, float(np.max(np.abs(values))))
    degenerate = np.abs(values) <= settings.degeneracy_threshold * scale
    if np.any(degenerate):
        raise MetricError(
            "Metric is degenerate",
            context={"eigenvalues": values.tolist()}
        )

    order = sorted(range(n), key=lambda i: (values[i] < 0, -abs(values[i])))
    values = values[order]
    vectors = vectors[:, order]
    p = int(np.count_nonzero(values > 0))
    signs = np.sign(values)

    h = LinOp(context, np.diag(np.sqrt(np.abs(values))) @ vectors.T)
    eta = LinOp(context, np.diag(signs))
    values.setflags(write=False)
    vectors.setflags(write=False)
    logger.debug(f"Metric decomposed in {sweeps} sweeps with signature ({p}, {n - p})")
    return MetricStructure(
        g=LinOp(context, m),
        signature=(p, n - p),
        h=h,
        eta=eta,
        eigenvalues=values,
        eigenvectors=vectors,
    )


def metric_from_spec(spec: str, context: AlgebraContext) -> MetricStructure:
    """
    Build a metric from ``identity``, ``diag:a,b,…`` or a JSON file path.

    The JSON file holds {"dim": n, "matrix": [row-major n×n floats]}.
    """
    spec = spec.strip()
    if spec == "identity":
        return metric_from_matrix(np.eye(context.dim), context)
    if spec.startswith("diag:"):
        try:
            entries = [float(x) for x in spec[len("diag:"):].split(",")]
        except ValueError:
            raise MetricError(f"Malformed diagonal metric '{spec}'") from None
        if len(entries) != context.dim:
            raise MetricError(f"Diagonal metric needs {context.dim} entries, got {len(entries)}")
        return metric_from_matrix(np.diag(entries), context)

    path = Path(spec)
    if not path.exists():
        raise FileNotFoundError(2, "No such metric file", spec)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise MetricError(f"Metric file is not valid JSON: {exc.msg}") from None
    except (OSError, ValueError) as exc:
        raise MetricError(f"Cannot read metric file '{spec}': {exc}") from None
    if not isinstance(data, dict) or "matrix" not in data:
        raise MetricError("Metric file must be an object with a 'matrix' entry")
    dim = data.get("dim", context.dim)
    if isinstance(dim, bool) or not isinstance(dim, int):
        raise MetricError(f"Metric file dim must be an integer, got {dim!r}")
    if dim != context.dim:
        raise MetricError(f"Metric file dim {dim} does not match session dim {context.dim}")
    try:
        matrix = np.asarray(data["matrix"], dtype=float).reshape(context.dim, context.dim)
    except (TypeError, ValueError):
        raise MetricError(f"Metric matrix must hold {context.dim * context.dim} numbers") from None
    return metric_from_matrix(matrix, context)


def g_scalar_product(m: MetricStructure, X: Multivector, Y: Multivector, inverse: bool = False) -> float:
    """X ·_g Y = ḡ(X)·Y (g⁻¹ when ``inverse``)."""
    return scalar_product(m.deform(X, inverse), Y)


def g_contraction(m: MetricStructure, X: Multivector, Y: Multivector,
                  side: str = "left", inverse: bool = False) -> Multivector:
    """
    Metric contraction.

    Left: X ⌟_g Y = ḡ(X) ⌟ Y. Right: X ⌞_g Y = X ⌞ ḡ(Y). The g⁻¹ variants
    deform with ḡ⁻¹.
    """
    if side == "left":
        return left_contraction(m.deform(X, inverse), Y)
    if side == "right":
        return right_contraction(X, m.deform(Y, inverse))
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def g_clifford_product(m: MetricStructure, X: Multivector, Y: Multivector, inverse: bool = False) -> Multivector:
    """
    Geometric product of the g (or g⁻¹) Clifford algebra.

    Operands move into the eigenframe of g, multiply there with the diagonal
    rule e_i e_i = λ_i (1/λ_i for g⁻¹) and move back.
    """
    frame = m.extended_eigenvectors
    to_frame = frame.transpose()
    diagonal = 1.0 / m.eigenvalues if inverse else m.eigenvalues
    product = clifford_product(to_frame.apply(X), to_frame.apply(Y), diagonal_metric=diagonal)
    return frame.apply(product)


def adjoint_metric(t: MetricAdjointTarget, m: MetricStructure) -> MetricAdjointTarget:
    """
    Metric adjoint t†(g) = ḡ⁻¹ ∘ t† ∘ ḡ.

    It is the unique extensor with X ·_g t†(g)(Y) = t(X) ·_g Y.
    """
    m.context.require_same(t.context)
    if isinstance(t, LinOp):
        return m.inverse.compose(t.transpose()).compose(m.g)
    if isinstance(t, GeneralExtensor):
        return m.extended_inverse.compose(t.transpose()).compose(m.extended)
    if isinstance(t, GradeSetExtensor):
        full = m.extended_inverse.compose(t.to_general().transpose()).compose(m.extended)
        return full.restrict(t.codomain, t.domain)
    raise ShapeError(f"No metric adjoint defined for {type(t).__name__}")
