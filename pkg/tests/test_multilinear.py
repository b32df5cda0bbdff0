import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from afflab.errors import InputError
from afflab.multilinear import (exterior_power, is_invertible, kronecker, ksubset_basis, operator_norm,
                                singular_values, trivector_identity_vector, wedge_vectors)

from conftest import matrices, random_gl, rotation, well_conditioned


def quadratic_singular_values(A):
    # eigenvalues of the symmetric 2x2 matrix A^T A by the quadratic formula
    (a, b), (_, c) = A.T @ A
    mid, rad = (a + c) / 2, math.hypot((a - c) / 2, b)
    return math.sqrt(mid + rad), math.sqrt(max(mid - rad, 0.0))


def test_singular_values_diagonal_and_rotation():
    assert np.allclose(singular_values(np.diag([0.5, 0.2])), [0.5, 0.2])
    assert np.allclose(singular_values(np.diag([0.2, -0.5])), [0.5, 0.2])
    assert np.allclose(singular_values(rotation(np.pi / 6)), [1.0, 1.0])


def test_singular_values_match_quadratic_formula(rng):
    for _ in range(50):
        A = rng.standard_normal((2, 2))
        assert np.allclose(singular_values(A), quadratic_singular_values(A), rtol=1e-10)


def test_singular_values_reject_non_finite():
    with pytest.raises(InputError):
        singular_values(np.array([[1.0, np.nan], [0.0, 1.0]]))


def test_ksubset_basis_order():
    B = ksubset_basis(4, 2)
    assert B.subsets == ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
    assert len(B) == math.comb(4, 2)
    assert len(ksubset_basis(5, 0)) == 1
    with pytest.raises(InputError):
        ksubset_basis(3, 4)


def test_exterior_power_degenerate_grades(rng):
    A = random_gl(rng, 3)
    assert np.array_equal(exterior_power(A, 0), [[1.0]])
    assert np.allclose(exterior_power(A, 1), A)
    assert np.allclose(exterior_power(A, 3), [[np.linalg.det(A)]])


def test_exterior_power_diagonal():
    a, b, c = 2.0, 3.0, 5.0
    assert np.allclose(exterior_power(np.diag([a, b, c]), 2), np.diag([a * b, a * c, b * c]))


def test_exterior_power_entries_are_minors(rng):
    A = rng.standard_normal((4, 4))
    W = exterior_power(A, 2)
    subsets = ksubset_basis(4, 2).subsets
    for r, S in enumerate(subsets):
        for c, T in enumerate(subsets):
            assert W[r, c] == pytest.approx(np.linalg.det(A[np.ix_(S, T)]), abs=1e-12)


def test_exterior_power_stack_matches_single(rng):
    stack = rng.standard_normal((5, 3, 3))
    W = exterior_power(stack, 2)
    for A, WA in zip(stack, W):
        assert np.allclose(exterior_power(A, 2), WA)


def test_exterior_power_rejects_bad_grade():
    with pytest.raises(InputError):
        exterior_power(np.eye(2), 3)


def test_wedge_examples():
    e = np.eye(3)
    assert np.allclose(wedge_vectors(e[0], e[1]).coords, [1.0, 0.0, 0.0])
    v = np.array([0.3, -1.2, 2.0])
    assert np.allclose(wedge_vectors(v, v).coords, 0.0)
    assert wedge_vectors([1, 2], [3, 4]).coords == pytest.approx([-2.0])
    with pytest.raises(InputError):
        wedge_vectors([1, 2], [1, 2, 3])


def test_wedge_norm_is_volume(rng):
    V = rng.standard_normal((2, 4))
    gram = V @ V.T
    assert wedge_vectors(*V).norm() == pytest.approx(math.sqrt(np.linalg.det(gram)))


def test_wedge_of_images_is_exterior_power_image(rng):
    A = rng.standard_normal((4, 4))
    V = rng.standard_normal((3, 4))
    lhs = wedge_vectors(*(A @ v for v in V)).coords
    rhs = exterior_power(A, 3) @ wedge_vectors(*V).coords
    assert np.allclose(lhs, rhs)


def test_kronecker_examples(rng):
    assert np.array_equal(kronecker(np.eye(2), np.eye(3)), np.eye(6))
    U = rng.standard_normal((3, 3))
    assert np.allclose(kronecker(2 * np.eye(1), U), 2 * U)
    # i major, j minor
    T = np.arange(4.0).reshape(2, 2)
    K = kronecker(T, U)
    assert np.allclose(K[3:, :3], T[1, 0] * U)


def test_kronecker_norm_factorizes(rng):
    for _ in range(20):
        T, U = rng.standard_normal((3, 3)), rng.standard_normal((2, 2))
        assert singular_values(kronecker(T, U))[0] == pytest.approx(operator_norm(T) * operator_norm(U), rel=1e-10)


def test_operator_norm_examples():
    assert operator_norm(np.diag([0.5, 0.2])) == pytest.approx(0.5)
    assert operator_norm(rotation(0.7)) == pytest.approx(1.0)


@settings(max_examples=60, deadline=None)
@given(A=matrices(3), B=matrices(3), k=st.integers(0, 3))
def test_morphism_law(A, B, k):
    lhs = exterior_power(A @ B, k)
    rhs = exterior_power(A, k) @ exterior_power(B, k)
    scale = max(np.linalg.norm(exterior_power(A, k), 2) * np.linalg.norm(exterior_power(B, k), 2), 1e-300)
    assert np.linalg.norm(lhs - rhs, 2) <= 1e-9 * scale + 1e-12


@settings(max_examples=60, deadline=None)
@given(A=matrices(4), k=st.integers(1, 4))
def test_singular_value_product_law(A, k):
    assume(well_conditioned(A))
    alpha = singular_values(A)
    expected = np.sort([np.prod(alpha[list(S)]) for S in ksubset_basis(4, k).subsets])[::-1]
    assert np.allclose(singular_values(exterior_power(A, k)), expected, rtol=1e-8)
    assert operator_norm(exterior_power(A, k)) == pytest.approx(np.prod(alpha[:k]), rel=1e-8)


def test_trivector_line_is_fixed(rng):
    v = trivector_identity_vector()
    for _ in range(20):
        A = random_gl(rng, 3)
        image = kronecker(A, exterior_power(A, 2)) @ v
        assert np.linalg.norm(image - np.linalg.det(A) * v) <= 1e-9 * np.linalg.norm(v) * max(1, abs(np.linalg.det(A)))


def test_is_invertible():
    assert is_invertible(np.diag([1e-3, 1.0]))
    assert not is_invertible(np.array([[1.0, 2.0], [2.0, 4.0]]))
    assert not is_invertible(np.zeros((2, 2)))
