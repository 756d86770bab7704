"""
Representations of extensors and their basis-dependent component views.

Every operator kind stores one dense matrix over canonical orthonormal blade
bases, with columns holding the images of the domain blades. Component
arrays relative to an arbitrary basis are computed on demand from that
matrix and never stored.
"""
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import product
from math import comb, factorial
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from config.settings import get_settings
from utils.error_handler import GradeError, ShapeError
from utils.logger import get_logger

from .multivector_kernel import (
    AlgebraContext, Basis, GradeSet, Multivector, grade_masks, wedge_frame
)

logger = get_logger("algebra.extensor_repr")


class ComponentVariant(str, Enum):
    """Which basis the components are taken against."""
    COVARIANT = "covariant"
    CONTRAVARIANT = "contravariant"

    @classmethod
    def parse(cls, value: Union[str, "ComponentVariant"]) -> "ComponentVariant":
        if isinstance(value, ComponentVariant):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ShapeError(f"Unknown component variant '{value}'") from None


def _readonly(matrix: Any, shape: Tuple[int, ...], what: str) -> np.ndarray:
    matrix = np.array(matrix, dtype=float)
    if matrix.shape != shape:
        raise ShapeError(f"{what} needs shape {shape}, got {matrix.shape}")
    matrix.setflags(write=False)
    return matrix


def _binomial_masks(context: AlgebraContext, k: int) -> np.ndarray:
    context.check_grade(k)
    return grade_masks(context.dim, k)


@dataclass(frozen=True, eq=False)
class LinOp:
    """A (1,1)-extensor; column j of ``matrix`` is the image of e_j."""
    context: AlgebraContext
    matrix: np.ndarray

    def __post_init__(self):
        n = self.context.dim
        object.__setattr__(self, "matrix", _readonly(self.matrix, (n, n), "LinOp"))

    @classmethod
    def identity(cls, context: AlgebraContext) -> "LinOp":
        return cls(context, np.eye(context.dim))

    @classmethod
    def from_images(cls, images: Sequence[Multivector]) -> "LinOp":
        """Operator sending e_j to the j-th given vector."""
        context = images[0].context
        context.require_same(*(v.context for v in images))
        if len(images) != context.dim:
            raise ShapeError(f"Need {context.dim} images, got {len(images)}")
        return cls(context, np.column_stack([v.vector_coords() for v in images]))

    @property
    def dim(self) -> int:
        return self.context.dim

    def apply(self, v: Multivector) -> Multivector:
        """t(v) on the vector part of ``v``."""
        self.context.require_same(v.context)
        return Multivector.vector(self.context, self.matrix @ v.vector_coords())

    __call__ = apply

    def compose(self, other: "LinOp") -> "LinOp":
        """self ∘ other."""
        self.context.require_same(other.context)
        return LinOp(self.context, self.matrix @ other.matrix)

    def transpose(self) -> "LinOp":
        return LinOp(self.context, self.matrix.T)

    def symmetric_part(self) -> "LinOp":
        return LinOp(self.context, 0.5 * (self.matrix + self.matrix.T))

    def skew_part(self) -> "LinOp":
        return LinOp(self.context, 0.5 * (self.matrix - self.matrix.T))

    def is_symmetric(self) -> bool:
        return self.context.close(self.matrix, self.matrix.T)

    def norm_inf(self) -> float:
        return float(np.max(np.abs(self.matrix)))

    def isclose(self, other: "LinOp") -> bool:
        self.context.require_same(other.context)
        return self.context.close(self.matrix, other.matrix)

    def scale(self, alpha: float) -> "LinOp":
        return LinOp(self.context, float(alpha) * self.matrix)

    def add(self, other: "LinOp") -> "LinOp":
        self.context.require_same(other.context)
        return LinOp(self.context, self.matrix + other.matrix)

    def to_general(self) -> "GeneralExtensor":
        """Embed as a general extensor acting on vectors only."""
        size = self.context.size
        full = np.zeros((size, size))
        masks = _binomial_masks(self.context, 1)
        full[np.ix_(masks, masks)] = self.matrix
        return GeneralExtensor(self.context, full)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dim": self.dim,
            "kind": "linop",
            "shape": [self.dim, self.dim],
            "matrix": self.matrix.ravel().tolist(),
        }


@dataclass(frozen=True, eq=False)
class PQExtensor:
    """
    A (p,q)-extensor mapping p-vectors to q-vectors.

    ``matrix`` is C(n,q) × C(n,p): column J is the image of the J-th grade-p
    canonical blade, rows run over the grade-q canonical blades.
    """
    context: AlgebraContext
    p: int
    q: int
    matrix: np.ndarray

    def __post_init__(self):
        self.context.check_grade(self.p)
        self.context.check_grade(self.q)
        shape = (comb(self.context.dim, self.q), comb(self.context.dim, self.p))
        object.__setattr__(self, "matrix", _readonly(self.matrix, shape, f"({self.p},{self.q})-extensor"))

    @classmethod
    def identity(cls, context: AlgebraContext, p: int) -> "PQExtensor":
        return cls(context, p, p, np.eye(comb(context.dim, p)))

    @classmethod
    def from_general(cls, t: "GeneralExtensor", p: int, q: int) -> "PQExtensor":
        """The grade-p to grade-q block of a general extensor."""
        rows = _binomial_masks(t.context, q)
        cols = _binomial_masks(t.context, p)
        return cls(t.context, p, q, t.matrix[np.ix_(rows, cols)])

    def apply(self, X: Multivector) -> Multivector:
        """Apply to ⟨X⟩_p; other grades of X are ignored."""
        self.context.require_same(X.context)
        out = np.zeros(self.context.size)
        out[_binomial_masks(self.context, self.q)] = self.matrix @ X.coeffs[_binomial_masks(self.context, self.p)]
        return Multivector(self.context, out)

    __call__ = apply

    def to_general(self) -> "GeneralExtensor":
        size = self.context.size
        full = np.zeros((size, size))
        full[np.ix_(_binomial_masks(self.context, self.q), _binomial_masks(self.context, self.p))] = self.matrix
        return GeneralExtensor(self.context, full)

    def isclose(self, other: "PQExtensor") -> bool:
        self.context.require_same(other.context)
        return (self.p, self.q) == (other.p, other.q) and self.context.close(self.matrix, other.matrix)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dim": self.context.dim,
            "kind": "pq",
            "p": self.p,
            "q": self.q,
            "shape": list(self.matrix.shape),
            "matrix": self.matrix.ravel().tolist(),
        }


@dataclass(frozen=True, eq=False)
class GeneralExtensor:
    """Linear operator on the whole exterior algebra, 2^n × 2^n over canonical blades."""
    context: AlgebraContext
    matrix: np.ndarray

    def __post_init__(self):
        size = self.context.size
        object.__setattr__(self, "matrix", _readonly(self.matrix, (size, size), "General extensor"))

    @classmethod
    def identity(cls, context: AlgebraContext) -> "GeneralExtensor":
        return cls(context, np.eye(context.size))

    @classmethod
    def from_function(cls, context: AlgebraContext,
                      func: Callable[[Multivector], Multivector]) -> "GeneralExtensor":
        """Tabulate a linear map by its action on the canonical blades."""
        size = context.size
        columns = []
        for mask in range(size):
            coeffs = np.zeros(size)
            coeffs[mask] = 1.0
            image = func(Multivector(context, coeffs))
            context.require_same(image.context)
            columns.append(image.coeffs)
        return cls(context, np.column_stack(columns))

    @property
    def dim(self) -> int:
        return self.context.dim

    def apply(self, X: Multivector) -> Multivector:
        self.context.require_same(X.context)
        return Multivector(self.context, self.matrix @ X.coeffs)

    __call__ = apply

    def compose(self, other: "GeneralExtensor") -> "GeneralExtensor":
        """self ∘ other."""
        self.context.require_same(other.context)
        return GeneralExtensor(self.context, self.matrix @ other.matrix)

    def transpose(self) -> "GeneralExtensor":
        return GeneralExtensor(self.context, self.matrix.T)

    def scale(self, alpha: float) -> "GeneralExtensor":
        return GeneralExtensor(self.context, float(alpha) * self.matrix)

    def add(self, other: "GeneralExtensor") -> "GeneralExtensor":
        self.context.require_same(other.context)
        return GeneralExtensor(self.context, self.matrix + other.matrix)

    def block(self, p: int, q: int) -> PQExtensor:
        return PQExtensor.from_general(self, p, q)

    def restrict(self, domain: GradeSet, codomain: GradeSet) -> "GradeSetExtensor":
        """Restriction to a map from ⋀_domain V into ⋀_codomain V."""
        rows = codomain.blade_masks(self.context)
        cols = domain.blade_masks(self.context)
        return GradeSetExtensor(self.context, domain, codomain, self.matrix[np.ix_(rows, cols)])

    def is_grade_preserving(self) -> bool:
        grades = self.context.grades
        off = grades[:, None] != grades[None, :]
        return self.context.close(np.where(off, self.matrix, 0.0), np.zeros_like(self.matrix))

    def isclose(self, other: "GeneralExtensor") -> bool:
        self.context.require_same(other.context)
        return self.context.close(self.matrix, other.matrix)

    def to_dict(self) -> Dict[str, Any]:
        size = self.context.size
        return {
            "dim": self.dim,
            "kind": "general",
            "shape": [size, size],
            "matrix": self.matrix.ravel().tolist(),
        }


@dataclass(frozen=True, eq=False)
class GradeSetExtensor:
    """
    Extensor from ⋀_domain V to ⋀_codomain V.

    Rows follow ``codomain.blade_masks`` and columns ``domain.blade_masks``.
    """
    context: AlgebraContext
    domain: GradeSet
    codomain: GradeSet
    matrix: np.ndarray

    def __post_init__(self):
        shape = (self.codomain.dimension(self.context), self.domain.dimension(self.context))
        object.__setattr__(self, "matrix", _readonly(self.matrix, shape, "Grade-set extensor"))

    @classmethod
    def from_general(cls, t: GeneralExtensor, domain: GradeSet, codomain: GradeSet) -> "GradeSetExtensor":
        return t.restrict(domain, codomain)

    def apply(self, X: Multivector) -> Multivector:
        """Apply to the domain-grade part of X."""
        self.context.require_same(X.context)
        out = np.zeros(self.context.size)
        out[self.codomain.blade_masks(self.context)] = self.matrix @ X.coeffs[self.domain.blade_masks(self.context)]
        return Multivector(self.context, out)

    __call__ = apply

    def compose(self, other: "GradeSetExtensor") -> "GradeSetExtensor":
        """self ∘ other; other's codomain must equal self's domain."""
        self.context.require_same(other.context)
        if other.codomain != self.domain:
            raise GradeError(
                f"Cannot compose: codomain {other.codomain} does not match domain {self.domain}"
            )
        return GradeSetExtensor(self.context, other.domain, self.codomain, self.matrix @ other.matrix)

    def to_general(self) -> GeneralExtensor:
        size = self.context.size
        full = np.zeros((size, size))
        full[np.ix_(self.codomain.blade_masks(self.context), self.domain.blade_masks(self.context))] = self.matrix
        return GeneralExtensor(self.context, full)

    def isclose(self, other: "GradeSetExtensor") -> bool:
        self.context.require_same(other.context)
        return (
            self.domain == other.domain
            and self.codomain == other.codomain
            and self.context.close(self.matrix, other.matrix)
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dim": self.context.dim,
            "kind": "gradeset",
            "domain": sorted(self.domain.grades),
            "codomain": sorted(self.codomain.grades),
            "shape": list(self.matrix.shape),
            "matrix": self.matrix.ravel().tolist(),
        }


@dataclass(frozen=True, eq=False)
class ElementaryKExtensor:
    """
    A k-linear map from k vectors to q-vectors.

    ``components`` has shape n^k × C(n,q): row (j_1 … j_k) in C order holds
    the image of (e_{j_1}, …, e_{j_k}) over the canonical grade-q blades.
    """
    context: AlgebraContext
    k: int
    q: int
    components: np.ndarray

    def __post_init__(self):
        if self.k < 0:
            raise ShapeError(f"Arity must be non-negative, got {self.k}")
        self.context.check_grade(self.q)
        shape = (self.context.dim ** self.k, comb(self.context.dim, self.q))
        object.__setattr__(self, "components", _readonly(self.components, shape, f"{self.k}-extensor"))

    @classmethod
    def from_linop(cls, t: LinOp) -> "ElementaryKExtensor":
        """The k=1, q=1 case identified with a (1,1)-extensor."""
        return cls(t.context, 1, 1, t.matrix.T)

    def tensor(self) -> np.ndarray:
        n = self.context.dim
        return self.components.reshape((n,) * self.k + (self.components.shape[1],))

    def evaluate(self, *vectors: Multivector) -> Multivector:
        return elementary_eval(self, *vectors)

    __call__ = evaluate

    def isclose(self, other: "ElementaryKExtensor") -> bool:
        self.context.require_same(other.context)
        return (self.k, self.q) == (other.k, other.q) and self.context.close(self.components, other.components)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dim": self.context.dim,
            "kind": "elementary",
            "k": self.k,
            "q": self.q,
            "shape": list(self.components.shape),
            "matrix": self.components.ravel().tolist(),
        }


@dataclass(frozen=True)
class ExtensorSpace:
    """An extensor space described by its argument spaces and codomain."""
    dim: int
    arguments: Tuple[GradeSet, ...]
    codomain: GradeSet

    @classmethod
    def pq(cls, dim: int, p: int, q: int) -> "ExtensorSpace":
        return cls(dim, (GradeSet.of(p),), GradeSet.of(q))

    @classmethod
    def general(cls, dim: int) -> "ExtensorSpace":
        full = GradeSet(frozenset(range(dim + 1)))
        return cls(dim, (full,), full)

    @classmethod
    def elementary(cls, dim: int, k: int, q: int) -> "ExtensorSpace":
        return cls(dim, (GradeSet.of(1),) * k, GradeSet.of(q))

    @staticmethod
    def _space_dim(dim: int, grades: GradeSet) -> int:
        for g in grades.grades:
            if g > dim:
                raise GradeError(f"Grade {g} outside 0..{dim}")
        return sum(comb(dim, g) for g in grades.grades)

    @property
    def dimension(self) -> int:
        total = self._space_dim(self.dim, self.codomain)
        for argument in self.arguments:
            total *= self._space_dim(self.dim, argument)
        return total


def dim_extensor_space(space: ExtensorSpace) -> int:
    """Dimension of an extensor space: product of argument dimensions times the codomain's."""
    return space.dimension


# Basis frames

def _frames(basis: Basis, variant: ComponentVariant) -> Tuple[np.ndarray, np.ndarray]:
    """
    Blade frames used to read and to rebuild components.

    Returns:
        (reading frame, rebuilding frame): the basis blades and their
        reciprocals, swapped for contravariant components
    """
    direct = wedge_frame(basis.vectors)
    dual = wedge_frame(basis.reciprocal().vectors)
    if variant is ComponentVariant.COVARIANT:
        return direct, dual
    return dual, direct


def _grade_block(frame: np.ndarray, context: AlgebraContext, k: int) -> np.ndarray:
    masks = _binomial_masks(context, k)
    return frame[np.ix_(masks, masks)]


@lru_cache(maxsize=None)
def _tuple_to_blade(dim: int, k: int) -> np.ndarray:
    """
    C(n,k) × n^k matrix sending ordered index tuples to signed ascending blades.

    Tuples with a repeated index map to zero.
    """
    masks = grade_masks(dim, k)
    position = {int(mask): row for row, mask in enumerate(masks)}
    matrix = np.zeros((len(masks), dim ** k))
    for column, indices in enumerate(product(range(dim), repeat=k)):
        if len(set(indices)) != k:
            continue
        inversions = sum(1 for a in range(k) for b in range(a + 1, k) if indices[a] > indices[b])
        mask = sum(1 << i for i in indices)
        matrix[position[mask], column] = -1.0 if inversions % 2 else 1.0
    return matrix


# (p,q)-extensor components

def pq_components(t: PQExtensor, basis: Basis,
                  variant: Union[str, ComponentVariant] = ComponentVariant.COVARIANT) -> np.ndarray:
    """
    Components of a (p,q)-extensor over ordered index tuples.

    Covariant components are t(e_{j_1}∧…∧e_{j_p})·(e_{k_1}∧…∧e_{k_q});
    contravariant ones use the reciprocal basis in both slots.

    Args:
        t: The extensor
        basis: Basis of V
        variant: covariant or contravariant

    Returns:
        n^p × n^q array, antisymmetric within each index group
    """
    variant = ComponentVariant.parse(variant)
    t.context.require_same(basis.context)
    reading, _ = _frames(basis, variant)
    fp = _grade_block(reading, t.context, t.p)
    fq = _grade_block(reading, t.context, t.q)
    ascending = fp.T @ t.matrix.T @ fq
    n = t.context.dim
    return _tuple_to_blade(n, t.p).T @ ascending @ _tuple_to_blade(n, t.q)


def pq_from_components(components: np.ndarray, basis: Basis, p: int, q: int,
                       variant: Union[str, ComponentVariant] = ComponentVariant.COVARIANT) -> PQExtensor:
    """
    Rebuild a (p,q)-extensor from ordered-tuple components.

    The sum over ordered tuples carries the weight 1/(p! q!).
    """
    variant = ComponentVariant.parse(variant)
    context = basis.context
    context.check_grade(p)
    context.check_grade(q)
    n = context.dim
    components = np.asarray(components, dtype=float)
    if components.shape != (n ** p, n ** q):
        raise ShapeError(f"Components need shape {(n ** p, n ** q)}, got {components.shape}")
    ascending = _tuple_to_blade(n, p) @ components @ _tuple_to_blade(n, q).T
    ascending = ascending / (factorial(p) * factorial(q))
    _, rebuilding = _frames(basis, variant)
    rp = _grade_block(rebuilding, context, p)
    rq = _grade_block(rebuilding, context, q)
    return PQExtensor(context, p, q, rq @ ascending.T @ rp.T)


def pq_basis_extensors(context: AlgebraContext, p: int, q: int, basis: Optional[Basis] = None,
                       variant: Union[str, ComponentVariant] = ComponentVariant.COVARIANT) -> List[PQExtensor]:
    """
    The basis extensors X ↦ (e^J·X) e^K over ascending J, K.

    Contravariant variant uses e_J, e_K instead.
    """
    variant = ComponentVariant.parse(variant)
    basis = basis or Basis.orthonormal(context)
    _, rebuilding = _frames(basis, variant)
    rp = _grade_block(rebuilding, context, p)
    rq = _grade_block(rebuilding, context, q)
    return [
        PQExtensor(context, p, q, np.outer(rq[:, K], rp[:, J]))
        for J in range(rp.shape[1])
        for K in range(rq.shape[1])
    ]


# General extensor components

def ext_components(t: GeneralExtensor, basis: Basis,
                   variant: Union[str, ComponentVariant] = ComponentVariant.COVARIANT) -> np.ndarray:
    """
    Components t_{J;K} = t(e_J)·e_K over collective indices.

    Returns:
        2^n × 2^n array indexed by (mask of J, mask of K), ascending index sets
    """
    variant = ComponentVariant.parse(variant)
    t.context.require_same(basis.context)
    reading, _ = _frames(basis, variant)
    return reading.T @ t.matrix.T @ reading


def ext_from_components(components: np.ndarray, basis: Basis,
                        variant: Union[str, ComponentVariant] = ComponentVariant.COVARIANT) -> GeneralExtensor:
    """Rebuild a general extensor as Σ_{J,K} t_{J;K} (e^J·X) e^K."""
    variant = ComponentVariant.parse(variant)
    context = basis.context
    components = np.asarray(components, dtype=float)
    if components.shape != (context.size, context.size):
        raise ShapeError(f"Components need shape {(context.size, context.size)}, got {components.shape}")
    _, rebuilding = _frames(basis, variant)
    return GeneralExtensor(context, rebuilding @ components.T @ rebuilding.T)


def ext_basis_extensors(context: AlgebraContext, basis: Optional[Basis] = None,
                        variant: Union[str, ComponentVariant] = ComponentVariant.COVARIANT) -> List[GeneralExtensor]:
    """All X ↦ (e^J·X) e^K over pairs of collective indices."""
    variant = ComponentVariant.parse(variant)
    basis = basis or Basis.orthonormal(context)
    _, rebuilding = _frames(basis, variant)
    size = context.size
    return [
        GeneralExtensor(context, np.outer(rebuilding[:, K], rebuilding[:, J]))
        for J in range(size)
        for K in range(size)
    ]


# Elementary k-extensors

def _check_component_limits(context: AlgebraContext, k: int) -> None:
    settings = get_settings()
    if k > settings.component_max_arity or context.dim > settings.component_max_dim:
        raise ShapeError(
            f"Component materialization limited to k <= {settings.component_max_arity}, "
            f"n <= {settings.component_max_dim} (got k={k}, n={context.dim})",
            context={"k": k, "dim": context.dim}
        )


def _contract_legs(tensor: np.ndarray, k: int, matrix: np.ndarray) -> np.ndarray:
    """Contract each of the first k legs of ``tensor`` with ``matrix`` (i → j)."""
    for leg in range(k):
        tensor = np.moveaxis(np.tensordot(tensor, matrix, axes=([leg], [0])), -1, leg)
    return tensor


def elementary_eval(t: ElementaryKExtensor, *vectors: Multivector) -> Multivector:
    """t(v_1, …, v_k) by full contraction of the canonical components."""
    if len(vectors) != t.k:
        raise ShapeError(f"Extensor takes {t.k} vector arguments, got {len(vectors)}")
    t.context.require_same(*(v.context for v in vectors))
    values = t.tensor()
    for v in vectors:
        values = np.tensordot(v.vector_coords(), values, axes=([0], [0]))
    out = np.zeros(t.context.size)
    out[_binomial_masks(t.context, t.q)] = values
    return Multivector(t.context, out)


def elementary_components(t: ElementaryKExtensor, basis: Basis,
                          variant: Union[str, ComponentVariant] = ComponentVariant.COVARIANT) -> np.ndarray:
    """
    Components t(e_{j_1}, …, e_{j_k})·e_K over vector tuples and ascending K.

    Returns:
        n^k × C(n,q) array
    """
    variant = ComponentVariant.parse(variant)
    t.context.require_same(basis.context)
    _check_component_limits(t.context, t.k)
    reading, _ = _frames(basis, variant)
    legs = basis.vectors if variant is ComponentVariant.COVARIANT else basis.reciprocal().vectors
    tensor = _contract_legs(t.tensor(), t.k, legs)
    rows = tensor.reshape(t.components.shape)
    return rows @ _grade_block(reading, t.context, t.q)


def elementary_from_components(components: np.ndarray, basis: Basis, k: int, q: int,
                               variant: Union[str, ComponentVariant] = ComponentVariant.COVARIANT) -> ElementaryKExtensor:
    """Rebuild t(v_1…v_k) = Σ t_{j;K} (v_1·e^{j_1})…(v_k·e^{j_k}) e^K."""
    variant = ComponentVariant.parse(variant)
    context = basis.context
    _check_component_limits(context, k)
    context.check_grade(q)
    n = context.dim
    components = np.asarray(components, dtype=float)
    shape = (n ** k, comb(n, q))
    if components.shape != shape:
        raise ShapeError(f"Components need shape {shape}, got {components.shape}")
    _, rebuilding = _frames(basis, variant)
    legs = basis.reciprocal().vectors if variant is ComponentVariant.COVARIANT else basis.vectors
    tensor = _contract_legs(components.reshape((n,) * k + (shape[1],)), k, legs.T)
    rows = tensor.reshape(shape)
    return ElementaryKExtensor(context, k, q, rows @ _grade_block(rebuilding, context, q).T)


def elementary_basis_extensors(context: AlgebraContext, k: int, q: int, basis: Optional[Basis] = None,
                               variant: Union[str, ComponentVariant] = ComponentVariant.COVARIANT) -> List[ElementaryKExtensor]:
    """One extensor per (vector tuple, ascending K) with a single unit component."""
    basis = basis or Basis.orthonormal(context)
    shape = (context.dim ** k, comb(context.dim, q))
    extensors = []
    for row in range(shape[0]):
        for column in range(shape[1]):
            unit = np.zeros(shape)
            unit[row, column] = 1.0
            extensors.append(elementary_from_components(unit, basis, k, q, variant))
    return extensors


# Serialization

Operator = Union[LinOp, PQExtensor, GeneralExtensor, GradeSetExtensor, ElementaryKExtensor]


def operator_from_dict(data: Dict[str, Any], context: Optional[AlgebraContext] = None) -> Operator:
    """Decode any operator from its JSON form."""
    dim = int(data["dim"])
    if context is None:
        context = AlgebraContext.from_settings(dim)
    elif context.dim != dim:
        raise ShapeError(f"Encoded dim {dim} does not match context dim {context.dim}")
    kind = data.get("kind")
    shape = tuple(int(s) for s in data["shape"])
    matrix = np.asarray(data["matrix"], dtype=float).reshape(shape)
    if kind == "linop":
        return LinOp(context, matrix)
    if kind == "general":
        return GeneralExtensor(context, matrix)
    if kind == "pq":
        return PQExtensor(context, int(data["p"]), int(data["q"]), matrix)
    if kind == "elementary":
        return ElementaryKExtensor(context, int(data["k"]), int(data["q"]), matrix)
    if kind == "gradeset":
        return GradeSetExtensor(
            context, GradeSet(frozenset(data["domain"])), GradeSet(frozenset(data["codomain"])), matrix
        )
    raise ShapeError(f"Unknown operator kind '{kind}'")
