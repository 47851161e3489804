import numpy as np
import pytest

from helpers import (
    X_PLUS,
    Z_MINUS,
    Z_PLUS,
    column_space_dim,
    null_space_dim,
    random_subspace,
    rank_by_elimination,
)
from qlogic.errors import (
    DimensionMismatchError,
    InputError,
    NotAProjectorError,
    NotOrthonormalError,
    ZeroVectorError,
)
from qlogic.hilbert import (
    Projector,
    StateVector,
    Subspace,
    Tolerance,
    complement,
    commutes,
    contains,
    join,
    meet,
    orthogonal,
    orthonormalize,
    projector_of,
    range_of,
    subspace_equal,
)

SQ2 = 1.0 / np.sqrt(2.0)


class TestTolerance:
    def test_default_in_range(self):
        assert 0 < Tolerance().eps < 1

    @pytest.mark.parametrize("eps", [0.0, -1e-9, 1.0, 2.0])
    def test_rejects_out_of_range(self, eps):
        with pytest.raises(InputError):
            Tolerance(eps)


class TestStateVector:
    def test_normalizes_on_construction(self):
        v = StateVector([3, 4])
        assert np.isclose(np.linalg.norm(v.components), 1.0)
        assert v.ambient_dim == 2

    def test_rejects_zero(self):
        with pytest.raises(ZeroVectorError):
            StateVector([0, 0, 0])

    def test_rejects_empty(self):
        with pytest.raises(ZeroVectorError):
            StateVector([])

    def test_components_locked(self):
        v = StateVector([1, 0])
        with pytest.raises(ValueError):
            v.components[0] = 5.0


class TestSubspaceConstruction:
    def test_zero_and_full(self):
        z = Subspace.zero(3)
        f = Subspace.full(3)
        assert z.dim == 0 and z.is_zero and z.is_trivial
        assert f.dim == 3 and f.is_full and f.is_trivial

    def test_rejects_non_orthonormal_basis(self):
        with pytest.raises(NotOrthonormalError):
            Subspace(np.array([[1.0, 1.0], [0.0, 1.0]]), 2)

    def test_rejects_too_many_vectors(self):
        with pytest.raises(DimensionMismatchError):
            Subspace(np.eye(3)[:, :3], ambient_dim=2)

    def test_empty_basis_needs_ambient_dim(self):
        with pytest.raises(InputError):
            Subspace(np.zeros((0, 0)))


class TestOrthonormalize:
    def test_two_independent_vectors_span_c2(self):
        s = orthonormalize([StateVector([1, 0]), StateVector([1, 1])])
        assert s.dim == 2 and s.is_full

    def test_span_classmethod_matches(self):
        vectors = [[1, 0, 0], [1, 1, 0]]
        assert subspace_equal(Subspace.span(vectors), orthonormalize(vectors))

    def test_colinear_input_collapses(self):
        s = orthonormalize([StateVector([1, 0]), StateVector([2, 0])])
        assert s.dim == 1
        assert contains(s, StateVector([1, 0]))

    def test_rank_of_many_random_vectors_matches_elimination_oracle(self):
        rng = np.random.default_rng(7)
        vecs = [rng.standard_normal(4) + 1j * rng.standard_normal(4) for _ in range(50)]
        expected = rank_by_elimination([v.tolist() for v in vecs])
        assert expected == 4  # generic: 50 random vectors fill C^4
        assert orthonormalize(vecs).dim == expected

    def test_deterministic_for_fixed_order(self):
        rng = np.random.default_rng(11)
        vecs = [rng.standard_normal(3) + 1j * rng.standard_normal(3) for _ in range(5)]
        a = orthonormalize(vecs)
        b = orthonormalize(vecs)
        assert np.array_equal(a.basis, b.basis)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            orthonormalize([StateVector([1, 0]), StateVector([1, 0, 0])])


class TestProjector:
    def test_projector_of_zero_subspace(self):
        p = projector_of(Subspace.zero(2))
        assert np.array_equal(p.matrix, np.zeros((2, 2)))
        assert p.rank == 0

    def test_projector_of_axis(self):
        p = projector_of(Z_PLUS)
        assert np.allclose(p.matrix, np.diag([1.0, 0.0]))

    def test_projector_of_diagonal_ray_matches_outer_product_oracle(self):
        s = Subspace(np.array([[SQ2], [SQ2]]), 2)
        e = np.array([SQ2, SQ2], dtype=complex)
        oracle = np.outer(e, e.conj())
        assert np.allclose(projector_of(s).matrix, oracle)
        assert np.allclose(projector_of(s).matrix, 0.5 * np.ones((2, 2)))

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotAProjectorError):
            Projector(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_rejects_non_idempotent(self):
        with pytest.raises(NotAProjectorError):
            Projector(np.diag([2.0, 0.0]))


class TestRangeOf:
    def test_identity_gives_full_space(self):
        assert range_of(Projector(np.eye(3))).is_full

    def test_zero_matrix_gives_zero_subspace(self):
        assert range_of(Projector(np.zeros((3, 3)))).is_zero

    def test_half_matrix_range_matches_eigendecomposition_oracle(self):
        s = range_of(Projector(0.5 * np.ones((2, 2))))
        assert s.dim == 1
        assert contains(s, StateVector([1, 1]))
        assert not contains(s, StateVector([1, -1]))

    def test_rejects_non_idempotent_matrix(self):
        with pytest.raises(NotAProjectorError):
            range_of(np.diag([0.5, 0.5]))


class TestContains:
    def test_axis_membership(self):
        assert contains(Z_PLUS, StateVector([1, 0]))
        assert not contains(Z_PLUS, StateVector([0, 1]))

    def test_superposition_in_neither_summand(self):
        plus = StateVector([1, 1])
        assert not contains(Z_PLUS, plus)
        assert not contains(Z_MINUS, plus)

    def test_rejects_zero_vector(self):
        with pytest.raises(ZeroVectorError):
            contains(Z_PLUS, [0, 0])

    def test_scalar_invariance(self):
        rng = np.random.default_rng(3)
        for _ in range(25):
            s = random_subspace(rng, 4, 2)
            v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            scale = (rng.standard_normal() + 1j * rng.standard_normal()) or 1.0
            assert contains(s, v) == contains(s, scale * v)


class TestMeet:
    def test_x_plus_meet_z_plus_is_zero(self):
        assert meet(X_PLUS, Z_PLUS).is_zero

    def test_idempotent(self):
        rng = np.random.default_rng(5)
        a = random_subspace(rng, 4, 2)
        assert subspace_equal(meet(a, a), a)

    def test_random_pair_dimension_matches_formula_oracle(self):
        rng = np.random.default_rng(13)
        for _ in range(10):
            a = random_subspace(rng, 4, 3)
            b = random_subspace(rng, 4, 3)
            join_dim = column_space_dim(a.basis, b.basis)
            expected = a.dim + b.dim - join_dim
            assert meet(a, b).dim == expected == 2

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            meet(Z_PLUS, Subspace.zero(3))


class TestJoin:
    def test_z_plus_join_z_minus_is_whole_space(self):
        assert join(Z_PLUS, Z_MINUS).is_full

    def test_join_with_zero_is_identity(self):
        rng = np.random.default_rng(17)
        a = random_subspace(rng, 3, 2)
        assert subspace_equal(join(a, Subspace.zero(3)), a)

    def test_two_random_lines_span_plane_per_column_space_oracle(self):
        rng = np.random.default_rng(19)
        for _ in range(10):
            a = random_subspace(rng, 3, 1)
            b = random_subspace(rng, 3, 1)
            expected = column_space_dim(a.basis, b.basis)
            assert join(a, b).dim == expected == 2


class TestComplement:
    def test_full_space_complement_is_zero(self):
        assert complement(Subspace.full(2)).is_zero

    def test_axis_complement(self):
        c = complement(Z_PLUS)
        assert subspace_equal(c, Z_MINUS)

    def test_random_plane_in_c5_matches_null_space_oracle(self):
        rng = np.random.default_rng(23)
        for _ in range(10):
            a = random_subspace(rng, 5, 2)
            c = complement(a)
            assert c.dim == null_space_dim(a.basis, 5) == 3
            # every complement basis vector is orthogonal to every basis vector of a
            assert float(np.abs(a.basis.conj().T @ c.basis).max()) < 1e-9


class TestOrthogonalAndCommutes:
    def test_context_members_are_orthogonal(self):
        assert orthogonal(projector_of(Z_PLUS), projector_of(Z_MINUS))

    def test_projector_against_itself(self):
        p = projector_of(Z_PLUS)
        assert not orthogonal(p, p)
        assert commutes(p, p)

    def test_x_plus_z_plus_match_matrix_product_oracle(self):
        px, pz = projector_of(X_PLUS), projector_of(Z_PLUS)
        prod = px.matrix @ pz.matrix
        comm = prod - pz.matrix @ px.matrix
        assert np.linalg.norm(prod) > 1e-9
        assert np.linalg.norm(comm) > 1e-9
        assert not orthogonal(px, pz)
        assert not commutes(px, pz)

    def test_projector_equality_within_tolerance(self):
        from qlogic.hilbert import projector_equal
        p = projector_of(Z_PLUS)
        q = projector_of(Subspace(np.array([[1.0 + 0j], [0.0]]) * np.exp(0.3j), 2))
        assert projector_equal(p, q)  # phase on the basis vector cancels
        assert not projector_equal(p, projector_of(X_PLUS))


class TestAlgebraicProperties:
    """Randomized invariants at desk scale (d <= 8)."""

    def test_projector_laws(self):
        rng = np.random.default_rng(29)
        for _ in range(50):
            d = int(rng.integers(1, 9))
            k = int(rng.integers(0, d + 1))
            p = projector_of(random_subspace(rng, d, k)).matrix
            assert np.linalg.norm(p @ p - p) <= 1e-9
            assert np.linalg.norm(p - p.conj().T) <= 1e-9

    def test_dimension_formula(self):
        rng = np.random.default_rng(31)
        for _ in range(50):
            d = int(rng.integers(2, 9))
            a = random_subspace(rng, d, int(rng.integers(0, d + 1)))
            b = random_subspace(rng, d, int(rng.integers(0, d + 1)))
            assert meet(a, b).dim + join(a, b).dim == a.dim + b.dim

    def test_de_morgan(self):
        rng = np.random.default_rng(37)
        for _ in range(25):
            d = int(rng.integers(2, 9))
            a = random_subspace(rng, d, int(rng.integers(0, d + 1)))
            b = random_subspace(rng, d, int(rng.integers(0, d + 1)))
            assert subspace_equal(complement(join(a, b)), meet(complement(a), complement(b)))

    def test_complement_is_involutive(self):
        rng = np.random.default_rng(41)
        for _ in range(25):
            d = int(rng.integers(1, 9))
            a = random_subspace(rng, d, int(rng.integers(0, d + 1)))
            assert subspace_equal(complement(complement(a)), a)
            assert a.dim + complement(a).dim == d

    def test_range_projector_round_trip(self):
        rng = np.random.default_rng(43)
        for _ in range(25):
            d = int(rng.integers(1, 9))
            s = random_subspace(rng, d, int(rng.integers(0, d + 1)))
            assert subspace_equal(range_of(projector_of(s)), s)

    def test_subspace_equality_ignores_basis_order(self):
        rng = np.random.default_rng(47)
        s = random_subspace(rng, 4, 3)
        flipped = Subspace(s.basis[:, ::-1], 4)
        assert subspace_equal(s, flipped)

    def test_contains_random_member(self):
        rng = np.random.default_rng(53)
        for _ in range(25):
            d = int(rng.integers(2, 9))
            s = random_subspace(rng, d, int(rng.integers(1, d + 1)))
            coeffs = rng.standard_normal(s.dim) + 1j * rng.standard_normal(s.dim)
            member = s.basis @ coeffs
            assert contains(s, member)
            if s.dim < d:
                outside = member + complement(s).basis[:, 0]
                assert not contains(s, outside)
