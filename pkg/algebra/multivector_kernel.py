"""
Multivector arithmetic over an orthonormal Euclidean frame.

Coefficients are stored densely, one per canonical basis blade, indexed by
bitmask: bit ``i`` set means ``e_{i+1}`` is a factor of the blade. Blade
orientation is ascending index order and product signs come from counting
the transpositions needed to merge two ascending index lists.
"""
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from config.settings import get_settings
from utils.error_handler import (
    ContextMismatchError, DimensionError, GradeError, ShapeError,
    SingularBasisError, UnknownProductError
)
from utils.logger import get_logger

logger = get_logger("algebra.kernel")

MAX_DIM = 12

# Upper bound on blade pairs materialized at once by the product kernel.
_PAIR_CHUNK = 1 << 20

Scalar = Union[int, float, np.floating]


@lru_cache(maxsize=None)
def popcount_table(dim: int) -> np.ndarray:
    """Grade of every blade mask of a ``dim``-dimensional algebra."""
    table = np.zeros(1 << dim, dtype=np.int64)
    for bit in range(dim):
        table[1 << bit:1 << (bit + 1)] = table[:1 << bit] + 1
    return table


@lru_cache(maxsize=None)
def grade_masks(dim: int, k: int) -> np.ndarray:
    """Masks of the grade-``k`` blades in lexicographic index order."""
    masks = [sum(1 << i for i in combo) for combo in combinations(range(dim), k)]
    return np.array(masks, dtype=np.int64)


def mask_to_indices(mask: int) -> Tuple[int, ...]:
    """1-based ascending indices of the vectors in a blade."""
    return tuple(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def indices_to_mask(indices: Iterable[int]) -> int:
    """Bitmask of a collection of distinct 1-based indices."""
    mask = 0
    for i in indices:
        mask |= 1 << (i - 1)
    return mask


def reorder_sign(a: np.ndarray, b: np.ndarray, dim: int) -> np.ndarray:
    """
    Sign of reordering ``e_A e_B`` into ascending order, elementwise.

    Args:
        a: Left blade masks
        b: Right blade masks
        dim: Algebra dimension (sizes the popcount table)

    Returns:
        Array of +1/-1 with the broadcast shape of ``a`` and ``b``
    """
    counts = popcount_table(dim)
    a = np.asarray(a, dtype=np.int64) >> 1
    b = np.asarray(b, dtype=np.int64)
    total = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
    while np.any(a):
        total += counts[a & b]
        a = a >> 1
    return 1 - 2 * (total & 1)


@lru_cache(maxsize=64)
def _diagonal_factor_table(dim: int, diagonal: Tuple[float, ...]) -> np.ndarray:
    """Product of the diagonal metric entries over each mask's bits."""
    table = np.ones(1 << dim)
    for mask in range(1, 1 << dim):
        low = (mask & -mask).bit_length() - 1
        table[mask] = table[mask & (mask - 1)] * diagonal[low]
    return table


class ProductKind(str, Enum):
    """Bilinear products available on multivectors."""
    WEDGE = "wedge"
    SCALAR = "scalar"
    LEFT_CONTRACTION = "left_contraction"
    RIGHT_CONTRACTION = "right_contraction"
    CLIFFORD = "clifford"

    @classmethod
    def parse(cls, tag: Union[str, "ProductKind"]) -> "ProductKind":
        """Resolve a product tag, raising for unknown names."""
        if isinstance(tag, ProductKind):
            return tag
        try:
            return cls(str(tag).lower())
        except ValueError:
            raise UnknownProductError(
                f"Unknown product '{tag}'",
                context={"supported": [kind.value for kind in cls]}
            ) from None


@dataclass(frozen=True)
class AlgebraContext:
    """Dimension and comparison tolerances shared by all values of one algebra."""
    dim: int
    tol_rel: float = 1e-9
    tol_abs: float = 1e-12

    def __post_init__(self):
        if not isinstance(self.dim, (int, np.integer)) or isinstance(self.dim, bool):
            raise DimensionError(f"Dimension must be an integer, got {self.dim!r}")
        if not 1 <= self.dim <= MAX_DIM:
            raise DimensionError(
                f"Dimension must lie in 1..{MAX_DIM}, got {self.dim}",
                context={"dim": self.dim}
            )
        if self.tol_rel <= 0 or self.tol_abs <= 0:
            raise DimensionError("Tolerances must be positive")

    @classmethod
    def from_settings(cls, dim: int) -> "AlgebraContext":
        """Create a context using the configured tolerances and dimension cap."""
        settings = get_settings()
        if dim > settings.max_dim:
            raise DimensionError(
                f"Dimension {dim} exceeds configured maximum {settings.max_dim}",
                context={"dim": dim}
            )
        return cls(dim=dim, tol_rel=settings.tol_rel, tol_abs=settings.tol_abs)

    @property
    def size(self) -> int:
        """Number of basis blades, 2^n."""
        return 1 << self.dim

    @cached_property
    def grades(self) -> np.ndarray:
        return popcount_table(self.dim)

    @cached_property
    def pseudoscalar_mask(self) -> int:
        return self.size - 1

    def check_grade(self, k: int) -> int:
        """Validate a grade index against this context."""
        if not 0 <= k <= self.dim:
            raise GradeError(f"Grade {k} outside 0..{self.dim}", context={"grade": k})
        return int(k)

    def require_same(self, *others: "AlgebraContext") -> None:
        """Raise unless every other context equals this one."""
        for other in others:
            if other != self:
                raise ContextMismatchError(
                    f"Context mismatch: dim {self.dim} vs dim {other.dim}",
                    context={"left": self.dim, "right": other.dim}
                )

    def close(self, a: np.ndarray, b: np.ndarray) -> bool:
        """Tolerance comparison of two coefficient arrays."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        scale = max(np.max(np.abs(a), initial=0.0), np.max(np.abs(b), initial=0.0))
        return bool(np.max(np.abs(a - b), initial=0.0) <= self.tol_abs + self.tol_rel * scale)


@dataclass(frozen=True)
class GradeSet:
    """A direct sum of homogeneous grade subspaces; empty means ``{0}``."""
    grades: FrozenSet[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "grades", frozenset(int(k) for k in self.grades))
        if any(k < 0 for k in self.grades):
            raise GradeError(f"Negative grade in {sorted(self.grades)}")

    @classmethod
    def of(cls, *grades: int) -> "GradeSet":
        return cls(frozenset(grades))

    @classmethod
    def full(cls, context: AlgebraContext) -> "GradeSet":
        """All grades 0..n."""
        return cls(frozenset(range(context.dim + 1)))

    def validate(self, context: AlgebraContext) -> "GradeSet":
        for k in self.grades:
            context.check_grade(k)
        return self

    def intersection(self, other: "GradeSet") -> "GradeSet":
        return GradeSet(self.grades & other.grades)

    def disjoint_union(self, other: "GradeSet") -> "GradeSet":
        """Union of two grade sets that share no grade."""
        overlap = self.grades & other.grades
        if overlap:
            raise GradeError(
                f"Grade sets overlap on {sorted(overlap)}",
                context={"overlap": sorted(overlap)}
            )
        return GradeSet(self.grades | other.grades)

    def selector(self, context: AlgebraContext) -> np.ndarray:
        """Boolean mask over blades whose grade lies in this set."""
        self.validate(context)
        return np.isin(context.grades, sorted(self.grades))

    def blade_masks(self, context: AlgebraContext) -> np.ndarray:
        """Blade masks of this set, grade by grade in lexicographic order."""
        self.validate(context)
        parts = [grade_masks(context.dim, k) for k in sorted(self.grades)]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)

    def dimension(self, context: AlgebraContext) -> int:
        return int(np.count_nonzero(self.selector(context)))

    def __iter__(self):
        return iter(sorted(self.grades))

    def __len__(self) -> int:
        return len(self.grades)

    def __str__(self) -> str:
        return "{" + ",".join(str(k) for k in sorted(self.grades)) + "}"


@dataclass(frozen=True, eq=False)
class Multivector:
    """Dense multivector; the coefficient array is read-only."""
    context: AlgebraContext
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=float)
        if coeffs.shape != (self.context.size,):
            raise ShapeError(
                f"Expected {self.context.size} coefficients, got shape {coeffs.shape}",
                context={"dim": self.context.dim}
            )
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    # Constructors

    @classmethod
    def zero(cls, context: AlgebraContext) -> "Multivector":
        return cls(context, np.zeros(context.size))

    @classmethod
    def scalar(cls, context: AlgebraContext, value: Scalar) -> "Multivector":
        coeffs = np.zeros(context.size)
        coeffs[0] = float(value)
        return cls(context, coeffs)

    @classmethod
    def vector(cls, context: AlgebraContext, coords: Sequence[float]) -> "Multivector":
        """Vector from its n orthonormal coordinates."""
        coords = np.asarray(coords, dtype=float)
        if coords.shape != (context.dim,):
            raise ShapeError(f"Expected {context.dim} vector coordinates, got shape {coords.shape}")
        coeffs = np.zeros(context.size)
        coeffs[1 << np.arange(context.dim)] = coords
        return cls(context, coeffs)

    @classmethod
    def blade(cls, context: AlgebraContext, indices: Sequence[int], coeff: Scalar = 1.0) -> "Multivector":
        """
        Wedge of basis vectors in the given order, scaled by ``coeff``.

        Repeated indices give zero; out-of-order indices pick up the
        permutation sign.
        """
        indices = [int(i) for i in indices]
        for i in indices:
            if not 1 <= i <= context.dim:
                raise GradeError(f"Basis index {i} outside 1..{context.dim}", context={"index": i})
        if len(set(indices)) != len(indices):
            return cls.zero(context)
        inversions = sum(1 for a, b in combinations(indices, 2) if a > b)
        coeffs = np.zeros(context.size)
        coeffs[indices_to_mask(indices)] = -coeff if inversions % 2 else coeff
        return cls(context, coeffs)

    @classmethod
    def basis_vector(cls, context: AlgebraContext, index: int) -> "Multivector":
        return cls.blade(context, [index])

    @classmethod
    def pseudoscalar(cls, context: AlgebraContext) -> "Multivector":
        """Canonical unit pseudoscalar e_{1..n}."""
        coeffs = np.zeros(context.size)
        coeffs[context.pseudoscalar_mask] = 1.0
        return cls(context, coeffs)

    @classmethod
    def from_terms(cls, context: AlgebraContext, terms: Dict[Tuple[int, ...], float]) -> "Multivector":
        result = np.zeros(context.size)
        for indices, value in terms.items():
            result = result + cls.blade(context, indices, value).coeffs
        return cls(context, result)

    # Inspection

    @property
    def dim(self) -> int:
        return self.context.dim

    @property
    def scalar_part(self) -> float:
        return float(self.coeffs[0])

    def coefficient(self, indices: Sequence[int]) -> float:
        """Coefficient of the ascending blade with the given indices."""
        return float(self.coeffs[indices_to_mask(indices)])

    def vector_coords(self) -> np.ndarray:
        """Coordinates of the grade-1 part."""
        return self.coeffs[1 << np.arange(self.dim)].copy()

    def grades_present(self, tol: Optional[float] = None) -> List[int]:
        """Grades carrying a coefficient above ``tol`` (context floor by default)."""
        threshold = self.context.tol_abs if tol is None else tol
        nonzero = np.abs(self.coeffs) > threshold
        return sorted(set(self.context.grades[nonzero].tolist()))

    def is_homogeneous(self, k: int) -> bool:
        return self.grades_present() in ([], [k])

    def norm_inf(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def isclose(self, other: "Multivector") -> bool:
        """Equality within the context tolerances."""
        self.context.require_same(other.context)
        return self.context.close(self.coeffs, other.coeffs)

    def is_zero(self) -> bool:
        return self.context.close(self.coeffs, np.zeros_like(self.coeffs))

    # Arithmetic

    def _coerce(self, other: Any) -> Optional["Multivector"]:
        if isinstance(other, Multivector):
            self.context.require_same(other.context)
            return other
        if isinstance(other, (int, float, np.floating, np.integer)) and not isinstance(other, bool):
            return Multivector.scalar(self.context, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Multivector(self.context, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Multivector(self.context, self.coeffs - other.coeffs)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Multivector(self.context, other.coeffs - self.coeffs)

    def __neg__(self):
        return Multivector(self.context, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)) and not isinstance(other, bool):
            return Multivector(self.context, self.coeffs * float(other))
        if isinstance(other, Multivector):
            return clifford_product(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)) and not isinstance(other, bool):
            return Multivector(self.context, self.coeffs * float(other))
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)) and not isinstance(other, bool):
            return Multivector(self.context, self.coeffs / float(other))
        return NotImplemented

    def __xor__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is None else wedge(self, other)

    def __lshift__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is None else left_contraction(self, other)

    def __rshift__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is None else right_contraction(self, other)

    def __or__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is None else scalar_product(self, other)

    def __invert__(self):
        return reversion(self)

    def __repr__(self) -> str:
        terms = [
            f"{self.coeffs[mask]:+g}*e{''.join(map(str, mask_to_indices(mask))) or '0'}"
            for mask in np.flatnonzero(self.coeffs)
        ]
        return f"Multivector(dim={self.dim}, {' '.join(terms) or '0'})"

    # Serialization

    def to_dict(self) -> Dict[str, Any]:
        """Canonical JSON form: terms sorted by bitmask, zeros omitted."""
        return {
            "dim": self.dim,
            "terms": [
                {"blades": list(mask_to_indices(int(mask))), "coeff": float(self.coeffs[mask])}
                for mask in np.flatnonzero(self.coeffs)
            ],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any], context: Optional[AlgebraContext] = None) -> "Multivector":
        if context is None:
            context = AlgebraContext.from_settings(int(data["dim"]))
        elif int(data["dim"]) != context.dim:
            raise ContextMismatchError(f"Encoded dim {data['dim']} does not match context dim {context.dim}")
        coeffs = np.zeros(context.size)
        for term in data.get("terms", []):
            blades = [int(i) for i in term["blades"]]
            if blades != sorted(set(blades)):
                raise ShapeError(f"Blade indices must be strictly ascending, got {blades}")
            coeffs[indices_to_mask(blades)] += float(term["coeff"])
        return cls(context, coeffs)


@dataclass(frozen=True, eq=False)
class Basis:
    """A basis of V given by its vectors as the columns of an n×n matrix."""
    context: AlgebraContext
    vectors: np.ndarray

    def __post_init__(self):
        vectors = np.array(self.vectors, dtype=float)
        n = self.context.dim
        if vectors.shape != (n, n):
            raise ShapeError(f"Basis needs an {n}x{n} matrix, got shape {vectors.shape}")
        gram = vectors.T @ vectors
        sign, logdet = np.linalg.slogdet(gram)
        scale = max(1.0, float(np.max(np.abs(gram)))) ** n
        threshold = get_settings().singular_threshold
        if sign <= 0 or np.exp(logdet) <= threshold * scale:
            raise SingularBasisError(
                "Basis vectors are linearly dependent (singular Gram matrix)",
                context={"gram_det": float(sign * np.exp(logdet)) if sign else 0.0}
            )
        vectors.setflags(write=False)
        object.__setattr__(self, "vectors", vectors)

    @classmethod
    def orthonormal(cls, context: AlgebraContext) -> "Basis":
        return cls(context, np.eye(context.dim))

    @classmethod
    def from_vectors(cls, vectors: Sequence[Multivector]) -> "Basis":
        """Basis from n grade-1 multivectors."""
        if not vectors:
            raise ShapeError("Basis needs at least one vector")
        context = vectors[0].context
        context.require_same(*(v.context for v in vectors))
        return cls(context, np.column_stack([v.vector_coords() for v in vectors]))

    @cached_property
    def gram(self) -> np.ndarray:
        return self.vectors.T @ self.vectors

    def is_orthonormal(self) -> bool:
        return self.context.close(self.gram, np.eye(self.context.dim))

    def vector(self, j: int) -> Multivector:
        """The j-th basis vector (1-based)."""
        return Multivector.vector(self.context, self.vectors[:, j - 1])

    def reciprocal(self) -> "Basis":
        return reciprocal_basis(self)

    def wedge(self) -> Multivector:
        """e_1 ∧ … ∧ e_n of this basis."""
        return Multivector(self.context, wedge_frame(self.vectors)[:, self.context.pseudoscalar_mask])

    def reciprocal_wedge(self) -> Multivector:
        """e^1 ∧ … ∧ e^n of the reciprocal basis."""
        return self.reciprocal().wedge()

    def blade(self, mask: int) -> Multivector:
        """Wedge of the basis vectors selected by ``mask``, ascending."""
        return Multivector(self.context, wedge_frame(self.vectors)[:, mask])


# Product kernel

def _pair_product(x: np.ndarray, y: np.ndarray, dim: int, kind: ProductKind,
                  diagonal: Optional[Tuple[float, ...]] = None) -> np.ndarray:
    """Bilinear blade product of two dense coefficient arrays."""
    size = 1 << dim
    out = np.zeros(size)
    ia = np.flatnonzero(x)
    ib = np.flatnonzero(y)
    if ia.size == 0 or ib.size == 0:
        return out
    factors = _diagonal_factor_table(dim, diagonal) if diagonal is not None else None
    rows_per_chunk = max(1, _PAIR_CHUNK // ib.size)
    for start in range(0, ia.size, rows_per_chunk):
        a = ia[start:start + rows_per_chunk, None]
        b = ib[None, :]
        a, b = np.broadcast_arrays(a, b)
        a = a.ravel()
        b = b.ravel()
        if kind is ProductKind.WEDGE:
            keep = (a & b) == 0
        elif kind is ProductKind.LEFT_CONTRACTION:
            keep = (a & ~b) == 0
        elif kind is ProductKind.RIGHT_CONTRACTION:
            keep = (b & ~a) == 0
        elif kind is ProductKind.SCALAR:
            keep = a == b
        else:
            keep = np.ones(a.shape, dtype=bool)
        a = a[keep]
        b = b[keep]
        if a.size == 0:
            continue
        if kind is ProductKind.SCALAR:
            weights = x[a] * y[b]
        else:
            weights = x[a] * y[b] * reorder_sign(a, b, dim)
        if factors is not None:
            weights = weights * factors[a & b]
        out += np.bincount(a ^ b, weights=weights, minlength=size)
    return out


def _binary(X: Multivector, Y: Multivector, kind: ProductKind,
            diagonal: Optional[Sequence[float]] = None) -> Multivector:
    X.context.require_same(Y.context)
    diag = None if diagonal is None else tuple(float(d) for d in diagonal)
    if diag is not None and len(diag) != X.dim:
        raise ShapeError(f"Diagonal metric needs {X.dim} entries, got {len(diag)}")
    return Multivector(X.context, _pair_product(X.coeffs, Y.coeffs, X.dim, kind, diag))


def wedge(X: Multivector, Y: Multivector) -> Multivector:
    """Exterior product X ∧ Y."""
    return _binary(X, Y, ProductKind.WEDGE)


def scalar_product(X: Multivector, Y: Multivector) -> float:
    """Euclidean scalar product, equal to the scalar part of reversion(X) Y."""
    X.context.require_same(Y.context)
    return float(np.dot(X.coeffs, Y.coeffs))


def left_contraction(X: Multivector, Y: Multivector) -> Multivector:
    """X ⌟ Y: blade pairs with X's blade inside Y's, grade-selected geometric product."""
    return _binary(X, Y, ProductKind.LEFT_CONTRACTION)


def right_contraction(X: Multivector, Y: Multivector) -> Multivector:
    """X ⌞ Y: blade pairs with Y's blade inside X's."""
    return _binary(X, Y, ProductKind.RIGHT_CONTRACTION)


def clifford_product(X: Multivector, Y: Multivector, *,
                     diagonal_metric: Optional[Sequence[float]] = None) -> Multivector:
    """
    Geometric product.

    Args:
        X: Left factor
        Y: Right factor
        diagonal_metric: Squares e_i e_i of the frame vectors; Euclidean when None

    Returns:
        The product XY
    """
    return _binary(X, Y, ProductKind.CLIFFORD, diagonal_metric)


def commutator(X: Multivector, Y: Multivector) -> Multivector:
    """X × Y = ½(XY − YX)."""
    return 0.5 * (clifford_product(X, Y) - clifford_product(Y, X))


def multiply(X: Multivector, Y: Multivector, kind: Union[str, ProductKind]) -> Multivector:
    """Apply the product named by ``kind``; the scalar product comes back as grade 0."""
    kind = ProductKind.parse(kind)
    if kind is ProductKind.SCALAR:
        return Multivector.scalar(X.context, scalar_product(X, Y))
    return _binary(X, Y, kind)


def product_matrix(X: Multivector, kind: Union[str, ProductKind], side: str = "left") -> np.ndarray:
    """
    Matrix of the linear map Y ↦ X ∗ Y (``side="left"``) or Y ↦ Y ∗ X.

    Returns:
        2^n × 2^n array acting on coefficient vectors
    """
    kind = ProductKind.parse(kind)
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    dim = X.dim
    size = X.context.size
    matrix = np.zeros((size, size))
    fixed = np.flatnonzero(X.coeffs)
    if fixed.size == 0:
        return matrix
    free = np.arange(size)
    f, g = np.broadcast_arrays(fixed[:, None], free[None, :])
    f = f.ravel()
    g = g.ravel()
    a, b = (f, g) if side == "left" else (g, f)
    if kind is ProductKind.WEDGE:
        keep = (a & b) == 0
    elif kind is ProductKind.LEFT_CONTRACTION:
        keep = (a & ~b) == 0
    elif kind is ProductKind.RIGHT_CONTRACTION:
        keep = (b & ~a) == 0
    elif kind is ProductKind.SCALAR:
        keep = a == b
    else:
        keep = np.ones(a.shape, dtype=bool)
    a, b, f, g = a[keep], b[keep], f[keep], g[keep]
    if kind is ProductKind.SCALAR:
        # reversion(X) Y keeps only equal blades, each with weight one
        values = X.coeffs[f]
        np.add.at(matrix, (np.zeros_like(g), g), values)
    else:
        values = X.coeffs[f] * reorder_sign(a, b, dim)
        np.add.at(matrix, (a ^ b, g), values)
    return matrix


# Grades and involutions

def grade_part(X: Multivector, k: int) -> Multivector:
    """⟨X⟩_k."""
    X.context.check_grade(k)
    return Multivector(X.context, np.where(X.context.grades == k, X.coeffs, 0.0))


def project_grades(X: Multivector, grades: Union[GradeSet, Iterable[int]]) -> Multivector:
    """Sum of ⟨X⟩_k over k in ``grades``; the empty set projects to zero."""
    if not isinstance(grades, GradeSet):
        grades = GradeSet(frozenset(grades))
    return Multivector(X.context, np.where(grades.selector(X.context), X.coeffs, 0.0))


def _grade_signs(context: AlgebraContext, kind: str) -> np.ndarray:
    k = context.grades
    if kind == "involution":
        exponent = k
    elif kind == "reversion":
        exponent = k * (k - 1) // 2
    else:
        exponent = k * (k + 1) // 2
    return 1.0 - 2.0 * (exponent & 1)


def grade_involution(X: Multivector) -> Multivector:
    return Multivector(X.context, X.coeffs * _grade_signs(X.context, "involution"))


def reversion(X: Multivector) -> Multivector:
    return Multivector(X.context, X.coeffs * _grade_signs(X.context, "reversion"))


def conjugation(X: Multivector) -> Multivector:
    return Multivector(X.context, X.coeffs * _grade_signs(X.context, "conjugation"))


def involution_matrix(context: AlgebraContext, kind: str) -> np.ndarray:
    """Diagonal matrix of one of ``involution``, ``reversion``, ``conjugation``."""
    if kind not in ("involution", "reversion", "conjugation"):
        raise ValueError(f"Unknown involution {kind!r}")
    return np.diag(_grade_signs(context, kind))


# Bases and frames

def reciprocal_basis(basis: Basis) -> Basis:
    """
    Euclidean reciprocal basis with e_j · e^k = δ_j^k.

    Args:
        basis: Basis with invertible Gram matrix

    Returns:
        Basis whose k-th vector is Σ_j (G⁻¹)_{kj} e_j
    """
    gram_inv = np.linalg.inv(basis.gram)
    logger.debug(f"Reciprocal basis computed in dim {basis.context.dim}")
    return Basis(basis.context, basis.vectors @ gram_inv)


def _wedge_with_vector(x: np.ndarray, v: np.ndarray, dim: int) -> np.ndarray:
    """Coefficients of X ∧ v for a dense X and vector coordinates v."""
    masks = np.arange(1 << dim)
    out = np.zeros_like(x)
    counts = popcount_table(dim)
    for i in range(dim):
        if v[i] == 0.0:
            continue
        bit = 1 << i
        sel = masks[(masks & bit) == 0]
        # moving e_i past the factors of X with larger index
        sign = 1.0 - 2.0 * (counts[sel >> (i + 1)] & 1)
        out[sel | bit] += sign * x[sel] * v[i]
    return out


def wedge_of_vectors(vectors: np.ndarray, dim: int) -> np.ndarray:
    """Coefficients of v_1 ∧ … ∧ v_k for the columns of an n×k array."""
    vectors = np.asarray(vectors, dtype=float).reshape(dim, -1)
    out = np.zeros(1 << dim)
    out[0] = 1.0
    for column in vectors.T:
        out = _wedge_with_vector(out, column, dim)
    return out


def wedge_frame(vectors: np.ndarray) -> np.ndarray:
    """
    Blade frame of a set of n vectors.

    Args:
        vectors: n×n array whose columns are vectors in orthonormal coordinates

    Returns:
        2^n × 2^n array whose column J is the ascending wedge of the columns in J
    """
    vectors = np.asarray(vectors, dtype=float)
    dim = vectors.shape[0]
    if vectors.shape != (dim, dim):
        raise ShapeError(f"wedge_frame needs a square matrix, got shape {vectors.shape}")
    size = 1 << dim
    frame = np.zeros((size, size))
    frame[0, 0] = 1.0
    for mask in range(1, size):
        high = mask.bit_length() - 1
        frame[:, mask] = _wedge_with_vector(frame[:, mask ^ (1 << high)], vectors[:, high], dim)
    return frame
