"""
Extension, adjoint, generalization, bivector, determinant and inversion of
(1,1)-extensors.

Formulas are written against an arbitrary basis {e_j} and its reciprocal
{e^j}; when no basis is given the orthonormal frame (self-reciprocal) is used.
"""
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from config.settings import get_settings
from utils.error_handler import SingularOperatorError, ShapeError
from utils.logger import get_logger

from .extensor_repr import GeneralExtensor, GradeSetExtensor, LinOp, PQExtensor
from .multivector_kernel import (
    Basis, Multivector, ProductKind, clifford_product, multiply,
    product_matrix, reversion, wedge, wedge_frame, wedge_of_vectors
)

logger = get_logger("algebra.operator_calculus")

AdjointTarget = Union[LinOp, PQExtensor, GeneralExtensor, GradeSetExtensor]


@dataclass(frozen=True)
class IdentityCheck:
    """Both sides of an operator identity and whether they agree."""
    lhs: object
    rhs: object
    holds: bool


def _frames(t: LinOp, basis: Optional[Basis]):
    basis = basis or Basis.orthonormal(t.context)
    t.context.require_same(basis.context)
    return basis, basis.reciprocal()


# Extension

def extend(t: LinOp, basis: Optional[Basis] = None, dual: bool = False) -> GeneralExtensor:
    """
    Extended (outermorphism) of t.

    Computed as t̄(X) = Σ_J t̄(e_J)(e^J·X), or with the roles of the basis and
    its reciprocal swapped when ``dual`` is set.

    Args:
        t: The (1,1)-extensor
        basis: Basis used in the formula, orthonormal frame when None
        dual: Use the reciprocal-basis form

    Returns:
        Grade-preserving general extensor
    """
    basis, reciprocal = _frames(t, basis)
    outer, inner = (reciprocal, basis) if dual else (basis, reciprocal)
    images = wedge_frame(t.matrix @ outer.vectors)
    return GeneralExtensor(t.context, images @ wedge_frame(inner.vectors).T)


def apply_extended(t: LinOp, X: Multivector) -> Multivector:
    """t̄(X) blade by blade, without building the 2^n matrix."""
    t.context.require_same(X.context)
    n = t.context.dim
    out = np.zeros(t.context.size)
    for mask in np.flatnonzero(X.coeffs):
        columns = [i for i in range(n) if mask >> i & 1]
        out += X.coeffs[mask] * wedge_of_vectors(t.matrix[:, columns], n)
    return Multivector(t.context, out)


def compose_extended(s: LinOp, t: LinOp) -> IdentityCheck:
    """Check that the extended of s∘t equals the composition of the extendeds."""
    lhs = extend(s.compose(t))
    rhs = extend(s).compose(extend(t))
    return IdentityCheck(lhs, rhs, lhs.isclose(rhs))


def inverse_extended(t: LinOp) -> GeneralExtensor:
    """Inverse of t̄, obtained as the extended of t⁻¹."""
    return extend(inverse_linop(t))


# Adjoints

def adjoint_standard(t: AdjointTarget) -> AdjointTarget:
    """
    Standard adjoint, satisfying X·t†(Y) = t(X)·Y.

    Canonical blades are orthonormal, so the adjoint is the transpose of the
    stored matrix; for grade-set extensors domain and codomain swap.
    """
    if isinstance(t, LinOp):
        return t.transpose()
    if isinstance(t, GeneralExtensor):
        return t.transpose()
    if isinstance(t, PQExtensor):
        return PQExtensor(t.context, t.q, t.p, t.matrix.T)
    if isinstance(t, GradeSetExtensor):
        return GradeSetExtensor(t.context, t.codomain, t.domain, t.matrix.T)
    raise ShapeError(f"No adjoint defined for {type(t).__name__}")


def adjoint_by_basis(t: Union[GeneralExtensor, GradeSetExtensor],
                     basis: Optional[Basis] = None) -> Union[GeneralExtensor, GradeSetExtensor]:
    """
    Adjoint from the collective-index sum t†(X) = Σ_J (t(⟨e_J⟩)·⟨X⟩) ⟨e^J⟩.

    Projections onto the domain and codomain grades wrap each factor for
    grade-set extensors.
    """
    basis = basis or Basis.orthonormal(t.context)
    t.context.require_same(basis.context)
    frame = wedge_frame(basis.vectors)
    dual = wedge_frame(basis.reciprocal().vectors)
    if isinstance(t, GeneralExtensor):
        return GeneralExtensor(t.context, dual @ (t.matrix @ frame).T)
    full = t.to_general().matrix
    into = np.diag(t.domain.selector(t.context).astype(float))
    out_of = np.diag(t.codomain.selector(t.context).astype(float))
    adjoint = into @ dual @ (full @ into @ frame).T @ out_of
    return GeneralExtensor(t.context, adjoint).restrict(t.codomain, t.domain)


def adjoint_inverse(t: LinOp) -> LinOp:
    """t* = (t†)⁻¹, which also equals (t⁻¹)†."""
    return inverse_linop(adjoint_standard(t))


# Generalization

def generalize(t: LinOp, basis: Optional[Basis] = None) -> GeneralExtensor:
    """
    Generalized of t: X ↦ Σ_k t(e^k) ∧ (e_k ⌟ X).

    Args:
        t: The (1,1)-extensor
        basis: Basis used in the sum, orthonormal frame when None

    Returns:
        Grade-preserving derivation on the exterior algebra
    """
    basis, reciprocal = _frames(t, basis)
    size = t.context.size
    matrix = np.zeros((size, size))
    for k in range(1, t.context.dim + 1):
        image = t.apply(reciprocal.vector(k))
        matrix += product_matrix(image, ProductKind.WEDGE) @ product_matrix(
            basis.vector(k), ProductKind.LEFT_CONTRACTION
        )
    return GeneralExtensor(t.context, matrix)


def skew_generalized(t: LinOp) -> GeneralExtensor:
    """Generalized of the skew part of t."""
    return generalize(t.skew_part())


def bivector_of(t: LinOp, basis: Optional[Basis] = None) -> Multivector:
    """biv[t] = Σ_k t(e^k) ∧ e_k."""
    basis, reciprocal = _frames(t, basis)
    total = Multivector.zero(t.context)
    for k in range(1, t.context.dim + 1):
        total = total + wedge(t.apply(reciprocal.vector(k)), basis.vector(k))
    return total


def skew_generalized_derivation_check(t: LinOp, X: Multivector, Y: Multivector,
                                      product: Union[str, ProductKind]) -> IdentityCheck:
    """
    Check the derivation rule of the skew generalized over a product.

    t~₋(X∗Y) is compared with t~₋(X)∗Y + X∗t~₋(Y). For the scalar product
    the left side vanishes and the rule reads as antisymmetry.
    """
    kind = ProductKind.parse(product)
    skew = skew_generalized(t)
    lhs = skew.apply(multiply(X, Y, kind))
    first = multiply(skew.apply(X), Y, kind)
    second = multiply(X, skew.apply(Y), kind)
    rhs = first + second
    context = t.context
    scale = max(lhs.norm_inf(), first.norm_inf(), second.norm_inf())
    holds = float(np.max(np.abs(lhs.coeffs - rhs.coeffs))) <= context.tol_abs + context.tol_rel * scale
    return IdentityCheck(lhs, rhs, holds)


# Determinant and inversion

def determinant(t: LinOp, basis: Optional[Basis] = None, dual: bool = False) -> float:
    """
    det[t] = t̄(e_∧)·e^∧ (or t̄(e^∧)·e_∧ when ``dual``).

    With the orthonormal frame this is the pseudoscalar coefficient of
    t(e_1)∧…∧t(e_n).
    """
    basis, reciprocal = _frames(t, basis)
    n = t.context.dim
    source, target = (reciprocal, basis) if dual else (basis, reciprocal)
    image = wedge_of_vectors(t.matrix @ source.vectors, n)
    return float(np.dot(image, wedge_of_vectors(target.vectors, n)))


def _singular_floor(t: LinOp) -> float:
    threshold = get_settings().singular_threshold
    return threshold * max(1.0, t.norm_inf() ** t.context.dim)


def inverse_linop(t: LinOp) -> LinOp:
    """
    Inverse via t⁻¹(v) = det[t]⁻¹ t̄†(vI) I⁻¹ with the unit pseudoscalar I.

    Raises:
        SingularOperatorError: if |det[t]| is below the scale-aware floor
    """
    det = determinant(t)
    if abs(det) <= _singular_floor(t):
        logger.debug(f"Rejected singular operator with determinant {det:.3e}")
        raise SingularOperatorError(
            "Operator is singular and cannot be inverted",
            determinant=det,
            context={"dim": t.context.dim}
        )
    context = t.context
    unit = Multivector.pseudoscalar(context)
    unit_inverse = reversion(unit)
    adjoint = t.transpose()
    columns = []
    for j in range(1, context.dim + 1):
        dual_image = apply_extended(adjoint, clifford_product(Multivector.basis_vector(context, j), unit))
        columns.append(clifford_product(dual_image, unit_inverse).vector_coords() / det)
    return LinOp(context, np.column_stack(columns))
