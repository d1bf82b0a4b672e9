import numpy as np
import pytest

from dpbspec.errors import DimensionMismatch, SingularMatrix
from dpbspec.linalg import (
    NORM_INF,
    NORM_ONE,
    NORM_TWO,
    as_cmatrix,
    conjugated_norm,
    det,
    identity,
    inf_norm,
    inverse,
    inversion_residual,
    matmul,
    matrix_from_json,
    matrix_power,
    matrix_to_json,
    norm_from_json,
    norm_to_json,
    operator_norm,
    power_norm_profile,
)
from dpbspec.sampling import random_well_conditioned, rng_from_seed

ALL_KINDS = [NORM_ONE, NORM_INF, NORM_TWO]


def test_as_cmatrix_rejects_bad_shapes():
    with pytest.raises(DimensionMismatch):
        as_cmatrix([[1, 2, 3], [4, 5, 6]])
    with pytest.raises(DimensionMismatch):
        as_cmatrix([1, 2, 3])
    with pytest.raises(ValueError):
        as_cmatrix([[np.inf, 0], [0, 1]])


def test_matmul_identity_and_involution():
    a = np.array([[1, 2], [3, 4]], dtype=complex)
    np.testing.assert_allclose(matmul(identity(2), a), a)
    swap = np.array([[0, 1], [1, 0]], dtype=complex)
    np.testing.assert_allclose(matmul(swap, swap), identity(2))
    jordan = np.array([[1, 1], [0, 1]], dtype=complex)
    np.testing.assert_allclose(matmul(jordan, jordan), [[1, 2], [0, 1]])
    with pytest.raises(DimensionMismatch):
        matmul(identity(2), identity(3))


def test_inverse_examples():
    np.testing.assert_allclose(inverse(identity(3)), identity(3))
    d = np.diag([2.0, 1j])
    np.testing.assert_allclose(inverse(d), np.diag([0.5, -1j]), atol=1e-15)
    with pytest.raises(SingularMatrix):
        inverse(np.array([[1, 1], [0, 0]], dtype=complex))


def test_inverse_residual_on_well_conditioned_matrices():
    rng = rng_from_seed(101)
    for _ in range(40):
        n = int(rng.integers(1, 9))
        a = random_well_conditioned(n, rng, cond_max=1e6)
        assert inversion_residual(a, inverse(a)) <= 1e-8


def test_operator_norm_examples():
    for kind in ALL_KINDS:
        assert operator_norm(identity(4), kind) == pytest.approx(1.0, abs=1e-10)
    assert operator_norm([[1, 1], [0, 1]], NORM_INF) == 2.0
    assert operator_norm([[1, 1], [0, 1]], NORM_ONE) == 2.0
    # hand oracle: sqrt of the largest eigenvalue of A^H A
    a = np.array([[0, 2], [0, 0]], dtype=complex)
    oracle = np.sqrt(np.max(np.linalg.eigvalsh(a.conj().T @ a)))
    assert operator_norm(a, NORM_TWO) == pytest.approx(oracle, rel=1e-10)


def test_norm_unitality_conjugated():
    rng = rng_from_seed(7)
    s = random_well_conditioned(3, rng, cond_max=50.0)
    kind = conjugated_norm(s, NORM_INF)
    assert operator_norm(identity(3), kind) == pytest.approx(1.0, abs=1e-10)


def test_submultiplicativity_all_kinds():
    rng = rng_from_seed(11)
    s = random_well_conditioned(4, rng, cond_max=20.0)
    kinds = ALL_KINDS + [conjugated_norm(s, NORM_ONE), conjugated_norm(s, NORM_TWO)]
    for _ in range(25):
        a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        b = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        for kind in kinds:
            na, nb = operator_norm(a, kind), operator_norm(b, kind)
            assert operator_norm(a @ b, kind) <= na * nb + 1e-9 * na * nb


def test_two_norm_degenerate_cases():
    assert operator_norm(np.zeros((3, 3)), NORM_TWO) == 0.0
    assert operator_norm([[3.0]], NORM_TWO) == pytest.approx(3.0, rel=1e-12)
    # equal singular values (unitary): immediate convergence
    assert operator_norm([[0, 1], [1, 0]], NORM_TWO) == pytest.approx(1.0, rel=1e-10)


def test_power_norm_profile_unitary_diag():
    p = power_norm_profile(np.diag([1j, -1.0]), 8, NORM_INF)
    assert p.max_norm == pytest.approx(1.0)
    assert all(x == pytest.approx(1.0) for x in p.norms)
    assert p.exponents == tuple(range(-8, 9))


def test_power_norm_profile_jordan_growth():
    p = power_norm_profile([[1, 1], [0, 1]], 100, NORM_INF)
    # b^n = [[1, n], [0, 1]] in both directions
    for n, norm in p.as_pairs():
        assert norm == pytest.approx(1 + abs(n))
    assert p.max_norm == pytest.approx(101.0)
    assert p.argmax == 100  # ties resolve to the positive exponent


def test_power_norm_profile_theorem_diag():
    p = power_norm_profile(np.diag([5 / 6, 6 / 5]), 20, NORM_TWO)
    assert p.max_norm == pytest.approx((6 / 5) ** 20, rel=1e-9)


def test_power_norm_profile_consistency_with_direct_powers():
    rng = rng_from_seed(3)
    b = random_well_conditioned(3, rng, cond_max=5.0)
    p = power_norm_profile(b, 6, NORM_INF)
    for n, norm in p.as_pairs():
        direct = operator_norm(matrix_power(b, n), NORM_INF)
        assert norm == pytest.approx(direct, rel=1e-9)


def test_power_norm_profile_singular_flag():
    sing = np.array([[1, 0], [0, 0]], dtype=complex)
    with pytest.raises(SingularMatrix):
        power_norm_profile(sing, 4)
    p = power_norm_profile(sing, 4, allow_singular=True)
    assert p.negative_skipped
    assert p.exponents == (0, 1, 2, 3, 4)


def test_det_matches_eigen_product():
    rng = rng_from_seed(13)
    for _ in range(10):
        a = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        assert det(a) == pytest.approx(np.prod(np.linalg.eigvals(a)), rel=1e-8)


def test_matrix_json_round_trip():
    rng = rng_from_seed(17)
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    doc = matrix_to_json(a)
    np.testing.assert_array_equal(matrix_from_json(doc), a)
    for bad in [{}, {"n": 2, "entries": [[[1, 0]]]}, {"n": "x", "entries": []}, []]:
        with pytest.raises(ValueError):
            matrix_from_json(bad)


def test_norm_json_round_trip():
    rng = rng_from_seed(19)
    s = random_well_conditioned(2, rng, cond_max=10.0)
    for kind in [NORM_ONE, NORM_INF, NORM_TWO, conjugated_norm(s, NORM_TWO)]:
        doc = norm_to_json(kind)
        back = norm_from_json(doc)
        assert norm_to_json(back) == doc
    with pytest.raises(ValueError):
        norm_from_json({"kind": "three"})
