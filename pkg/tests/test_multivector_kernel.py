"""
Tests for the multivector kernel: blades, products, grades and bases.
"""
import numpy as np
import pytest

from algebra.multivector_kernel import (
    AlgebraContext, Basis, GradeSet, Multivector, ProductKind, clifford_product,
    commutator, conjugation, grade_involution, grade_masks, grade_part,
    involution_matrix, left_contraction, mask_to_indices, multiply,
    product_matrix, project_grades, reciprocal_basis, reorder_sign, reversion,
    right_contraction, scalar_product, wedge, wedge_frame, wedge_of_vectors
)
from utils.error_handler import (
    ContextMismatchError, DimensionError, GradeError, ShapeError,
    SingularBasisError, UnknownProductError
)

from .factories import random_basis, random_multivector, random_vector


def blade(context, *indices, coeff=1.0):
    return Multivector.blade(context, indices, coeff)


class TestAlgebraContext:
    """Test cases for AlgebraContext."""

    def test_size_and_grades(self):
        """Test blade count and grade table."""
        ctx = AlgebraContext(3)
        assert ctx.size == 8
        assert ctx.grades.tolist() == [0, 1, 1, 2, 1, 2, 2, 3]
        assert ctx.pseudoscalar_mask == 7

    @pytest.mark.parametrize("dim", [0, 13, -1])
    def test_dimension_out_of_range(self, dim):
        """Test rejection of unsupported dimensions."""
        with pytest.raises(DimensionError):
            AlgebraContext(dim)

    def test_check_grade(self, ctx3):
        """Test grade range validation."""
        assert ctx3.check_grade(3) == 3
        with pytest.raises(GradeError):
            ctx3.check_grade(4)

    def test_mixing_contexts_fails(self, ctx2, ctx3):
        """Test that operands from different algebras are rejected."""
        with pytest.raises(ContextMismatchError):
            wedge(blade(ctx2, 1), blade(ctx3, 1))

    def test_close_is_scale_aware(self, ctx2):
        """Test relative tolerance on large values."""
        assert ctx2.close(np.array([1e6]), np.array([1e6 + 1e-4]))
        assert not ctx2.close(np.array([1.0]), np.array([1.0 + 1e-6]))


class TestBladeHelpers:
    """Test cases for bitmask helpers."""

    def test_grade_masks_lexicographic(self):
        """Test lexicographic ordering of grade-2 blades."""
        masks = grade_masks(3, 2)
        assert [mask_to_indices(int(m)) for m in masks] == [(1, 2), (1, 3), (2, 3)]

    def test_reorder_sign(self):
        """Test sign of merging e2 with e1."""
        assert reorder_sign(np.array([2]), np.array([1]), 2)[0] == -1
        assert reorder_sign(np.array([1]), np.array([2]), 2)[0] == 1

    def test_blade_permutation_sign(self, ctx3):
        """Test that out-of-order indices pick up the permutation sign."""
        assert blade(ctx3, 2, 1).coefficient([1, 2]) == -1.0
        assert blade(ctx3, 3, 1, 2).coefficient([1, 2, 3]) == 1.0

    def test_repeated_index_is_zero(self, ctx3):
        """Test that a repeated factor gives zero."""
        assert blade(ctx3, 1, 1).is_zero()

    def test_index_out_of_range(self, ctx2):
        """Test rejection of basis index above n."""
        with pytest.raises(GradeError):
            blade(ctx2, 3)

    def test_coefficient_shape_checked(self, ctx2):
        """Test rejection of wrongly sized coefficient arrays."""
        with pytest.raises(ShapeError):
            Multivector(ctx2, np.zeros(3))

    def test_coefficients_read_only(self, ctx2):
        """Test that multivectors are immutable."""
        X = blade(ctx2, 1)
        with pytest.raises(ValueError):
            X.coeffs[0] = 2.0


class TestWedge:
    """Test cases for the exterior product."""

    def test_basis_vectors(self, ctx2):
        """Test e1 ∧ e2 = e12."""
        assert wedge(blade(ctx2, 1), blade(ctx2, 2)).isclose(blade(ctx2, 1, 2))

    def test_nilpotent(self, ctx2):
        """Test e1 ∧ e1 = 0."""
        assert wedge(blade(ctx2, 1), blade(ctx2, 1)).is_zero()

    def test_mixed_grades(self, ctx2):
        """Test (1 + e1) ∧ e2 = e2 + e12."""
        result = wedge(1 + blade(ctx2, 1), blade(ctx2, 2))
        assert result.isclose(blade(ctx2, 2) + blade(ctx2, 1, 2))

    def test_associative(self, rng, ctx4):
        """Test associativity on random multivectors."""
        X, Y, Z = (random_multivector(rng, ctx4) for _ in range(3))
        assert wedge(wedge(X, Y), Z).isclose(wedge(X, wedge(Y, Z)))

    def test_vectors_anticommute(self, rng, ctx3):
        """Test u ∧ v = −v ∧ u."""
        u, v = random_vector(rng, ctx3), random_vector(rng, ctx3)
        assert wedge(u, v).isclose(-wedge(v, u))

    def test_operator_form(self, ctx3):
        """Test the ^ operator."""
        assert (blade(ctx3, 1) ^ blade(ctx3, 3)).isclose(blade(ctx3, 1, 3))


class TestScalarProduct:
    """Test cases for the Euclidean scalar product."""

    def test_canonical_blades(self, ctx2):
        """Test e12 · e12 = 1 and e1 · e2 = 0."""
        assert scalar_product(blade(ctx2, 1, 2), blade(ctx2, 1, 2)) == pytest.approx(1.0)
        assert scalar_product(blade(ctx2, 1), blade(ctx2, 2)) == 0.0

    def test_componentwise(self, ctx2):
        """Test (2e1 + e12) · (e1 + 3e12) = 5."""
        X = 2 * blade(ctx2, 1) + blade(ctx2, 1, 2)
        Y = blade(ctx2, 1) + 3 * blade(ctx2, 1, 2)
        assert scalar_product(X, Y) == pytest.approx(5.0)

    def test_matches_reversed_geometric_product(self, rng, ctx3):
        """Test X · Y = ⟨X̃ Y⟩₀."""
        X, Y = random_multivector(rng, ctx3), random_multivector(rng, ctx3)
        expected = clifford_product(reversion(X), Y).scalar_part
        assert scalar_product(X, Y) == pytest.approx(expected)

    def test_positive_definite(self, rng, ctx4):
        """Test X · X > 0 for nonzero X."""
        X = random_multivector(rng, ctx4)
        assert scalar_product(X, X) > 0


class TestContractions:
    """Test cases for left and right contractions."""

    def test_vector_into_bivector(self, ctx2):
        """Test e1 ⌟ e12 = e2."""
        assert left_contraction(blade(ctx2, 1), blade(ctx2, 1, 2)).isclose(blade(ctx2, 2))

    def test_bivector_self_contraction(self, ctx2):
        """Test e12 ⌟ e12 = −1 in the Euclidean plane."""
        result = left_contraction(blade(ctx2, 1, 2), blade(ctx2, 1, 2))
        assert result.isclose(Multivector.scalar(ctx2, -1.0))

    def test_scalar_contraction_scales(self, rng, ctx3):
        """Test α ⌟ X = αX."""
        X = random_multivector(rng, ctx3)
        assert left_contraction(Multivector.scalar(ctx3, 2.5), X).isclose(2.5 * X)

    def test_higher_grade_into_lower_vanishes(self, ctx3):
        """Test e12 ⌟ e1 = 0."""
        assert left_contraction(blade(ctx3, 1, 2), blade(ctx3, 1)).is_zero()

    def test_right_contraction(self, ctx2):
        """Test e12 ⌞ e2 = e1."""
        assert right_contraction(blade(ctx2, 1, 2), blade(ctx2, 2)).isclose(blade(ctx2, 1))

    def test_adjoint_to_wedge(self, rng, ctx4):
        """Test (X ∧ Y) · Z = Y · (X̃ ⌟ Z)."""
        X, Y, Z = (random_multivector(rng, ctx4) for _ in range(3))
        lhs = scalar_product(wedge(X, Y), Z)
        rhs = scalar_product(Y, left_contraction(reversion(X), Z))
        assert lhs == pytest.approx(rhs)

    def test_vector_derivation(self, rng, ctx4):
        """Test a ⌟ (u ∧ v) = (a·u)v − (a·v)u."""
        a, u, v = (random_vector(rng, ctx4) for _ in range(3))
        expected = scalar_product(a, u) * v - scalar_product(a, v) * u
        assert left_contraction(a, wedge(u, v)).isclose(expected)


class TestCliffordProduct:
    """Test cases for the geometric product."""

    def test_basis_rules(self, ctx2):
        """Test e1e1 = 1, e1e2 = e12, e12e1 = −e2."""
        e1, e2, e12 = blade(ctx2, 1), blade(ctx2, 2), blade(ctx2, 1, 2)
        assert clifford_product(e1, e1).isclose(Multivector.scalar(ctx2, 1.0))
        assert clifford_product(e1, e2).isclose(e12)
        assert clifford_product(e12, e1).isclose(-e2)

    def test_vector_product_splits(self, rng, ctx3):
        """Test uv = u·v + u∧v."""
        u, v = random_vector(rng, ctx3), random_vector(rng, ctx3)
        expected = scalar_product(u, v) + wedge(u, v)
        assert clifford_product(u, v).isclose(expected)

    def test_associative(self, rng, ctx4):
        """Test associativity of the geometric product."""
        X, Y, Z = (random_multivector(rng, ctx4) for _ in range(3))
        assert (X * Y * Z).isclose(X * (Y * Z))

    def test_diagonal_metric(self, ctx2):
        """Test e2 e2 = −1 under diag(1, −1)."""
        e2 = blade(ctx2, 2)
        result = clifford_product(e2, e2, diagonal_metric=[1.0, -1.0])
        assert result.isclose(Multivector.scalar(ctx2, -1.0))

    def test_diagonal_metric_length_checked(self, ctx2):
        """Test rejection of a diagonal with the wrong length."""
        with pytest.raises(ShapeError):
            clifford_product(blade(ctx2, 1), blade(ctx2, 1), diagonal_metric=[1.0])


class TestCommutator:
    """Test cases for the commutator product."""

    def test_self_commutator(self, rng, ctx3):
        """Test X × X = 0."""
        X = random_multivector(rng, ctx3)
        assert commutator(X, X).is_zero()

    def test_rotation_generator(self, ctx2):
        """Test ½ (−2e12) × e1 = e2."""
        result = 0.5 * commutator(-2 * blade(ctx2, 1, 2), blade(ctx2, 1))
        assert result.isclose(blade(ctx2, 2))


class TestMultiply:
    """Test cases for the product dispatcher and product matrices."""

    @pytest.mark.parametrize("kind", list(ProductKind))
    def test_product_matrix_matches_product(self, rng, ctx3, kind):
        """Test left and right product matrices against direct products."""
        X, Y = random_multivector(rng, ctx3), random_multivector(rng, ctx3)
        expected = multiply(X, Y, kind).coeffs
        np.testing.assert_allclose(product_matrix(X, kind) @ Y.coeffs, expected, atol=1e-12)
        np.testing.assert_allclose(product_matrix(Y, kind, side="right") @ X.coeffs, expected, atol=1e-12)

    def test_scalar_product_as_grade_zero(self, ctx2):
        """Test that the scalar product comes back as a grade-0 multivector."""
        result = multiply(blade(ctx2, 1, 2), blade(ctx2, 1, 2), "scalar")
        assert result.isclose(Multivector.scalar(ctx2, 1.0))

    def test_unknown_product(self, ctx2):
        """Test rejection of unknown product tags."""
        with pytest.raises(UnknownProductError):
            multiply(blade(ctx2, 1), blade(ctx2, 2), "cross")


class TestGrades:
    """Test cases for grade projection and involutions."""

    def test_grade_part(self, ctx2):
        """Test ⟨1 + e1 + e12⟩₁ = e1 and ⟨e12⟩₁ = 0."""
        X = 1 + blade(ctx2, 1) + blade(ctx2, 1, 2)
        assert grade_part(X, 1).isclose(blade(ctx2, 1))
        assert grade_part(blade(ctx2, 1, 2), 1).is_zero()

    def test_grade_partition(self, rng, ctx4):
        """Test that the grade parts sum back to X."""
        X = random_multivector(rng, ctx4)
        total = sum((grade_part(X, k) for k in range(5)), Multivector.zero(ctx4))
        assert total.isclose(X)

    def test_project_grades(self, ctx2):
        """Test projection onto {0, 2}."""
        X = 1 + blade(ctx2, 1) + blade(ctx2, 1, 2)
        assert project_grades(X, GradeSet.of(0, 2)).isclose(1 + blade(ctx2, 1, 2))

    def test_projector_idempotent(self, rng, ctx3):
        """Test that projecting twice is projecting once."""
        X = random_multivector(rng, ctx3)
        once = project_grades(X, [1, 3])
        assert project_grades(once, [1, 3]).isclose(once)

    def test_disjoint_union(self):
        """Test union of disjoint grade sets and rejection of overlaps."""
        assert GradeSet.of(0, 1).disjoint_union(GradeSet.of(3)).grades == frozenset({0, 1, 3})
        with pytest.raises(GradeError):
            GradeSet.of(0, 1).disjoint_union(GradeSet.of(1, 2))

    def test_grade_set_dimension(self, ctx3):
        """Test the blade count of a grade set."""
        assert GradeSet.of(1, 2).dimension(ctx3) == 6
        assert GradeSet.full(ctx3).dimension(ctx3) == 8

    def test_involutions(self, ctx2):
        """Test reversion, grade involution and conjugation signs."""
        assert reversion(blade(ctx2, 1, 2)).isclose(-blade(ctx2, 1, 2))
        assert grade_involution(blade(ctx2, 1)).isclose(-blade(ctx2, 1))
        X = 1 + blade(ctx2, 1) + blade(ctx2, 1, 2)
        assert conjugation(X).isclose(1 - blade(ctx2, 1) - blade(ctx2, 1, 2))

    def test_reversion_antimorphism(self, rng, ctx3):
        """Test (XY)~ = Ỹ X̃."""
        X, Y = random_multivector(rng, ctx3), random_multivector(rng, ctx3)
        assert reversion(X * Y).isclose(reversion(Y) * reversion(X))

    def test_involution_matrix(self, ctx2):
        """Test the diagonal matrix of conjugation."""
        np.testing.assert_array_equal(np.diag(involution_matrix(ctx2, "conjugation")), [1, -1, -1, -1])


class TestBasis:
    """Test cases for bases and reciprocal bases."""

    def test_orthonormal_is_self_reciprocal(self, ctx3):
        """Test that the orthonormal frame is its own reciprocal."""
        basis = Basis.orthonormal(ctx3)
        np.testing.assert_allclose(reciprocal_basis(basis).vectors, np.eye(3))

    def test_reciprocal_example(self, ctx2):
        """Test e1'=(1,1), e2'=(0,1) gives e^1=(1,0), e^2=(−1,1)."""
        basis = Basis(ctx2, np.array([[1.0, 0.0], [1.0, 1.0]]))
        np.testing.assert_allclose(basis.reciprocal().vectors, [[1.0, -1.0], [0.0, 1.0]], atol=1e-12)

    def test_duality(self, rng, ctx4):
        """Test e_j · e^k = δ_jk and reciprocal of reciprocal."""
        basis = random_basis(rng, ctx4)
        reciprocal = basis.reciprocal()
        np.testing.assert_allclose(basis.vectors.T @ reciprocal.vectors, np.eye(4), atol=1e-10)
        np.testing.assert_allclose(reciprocal.reciprocal().vectors, basis.vectors, atol=1e-10)

    def test_singular_basis(self, ctx2):
        """Test rejection of linearly dependent vectors."""
        with pytest.raises(SingularBasisError):
            Basis(ctx2, np.array([[1.0, 2.0], [1.0, 2.0]]))

    def test_wedge_frame_columns(self, rng, ctx3):
        """Test that frame columns are wedges of the selected vectors."""
        vectors = rng.standard_normal((3, 3))
        frame = wedge_frame(vectors)
        np.testing.assert_allclose(frame[:, 0b101], wedge_of_vectors(vectors[:, [0, 2]], 3), atol=1e-12)
        assert frame[7, 7] == pytest.approx(np.linalg.det(vectors))


class TestSerialization:
    """Test cases for the JSON form of multivectors."""

    def test_to_dict(self, ctx2):
        """Test canonical terms sorted by bitmask."""
        X = 2 * blade(ctx2, 1, 2) + 1
        assert X.to_dict() == {
            "dim": 2,
            "terms": [{"blades": [], "coeff": 1.0}, {"blades": [1, 2], "coeff": 2.0}],
        }

    def test_from_dict(self, rng, ctx3):
        """Test reconstruction from the JSON form."""
        X = random_multivector(rng, ctx3)
        assert Multivector.from_dict(X.to_dict(), ctx3).isclose(X)

    def test_from_dict_rejects_unsorted_blades(self, ctx2):
        """Test rejection of non-canonical blade lists."""
        with pytest.raises(ShapeError):
            Multivector.from_dict({"dim": 2, "terms": [{"blades": [2, 1], "coeff": 1.0}]}, ctx2)
