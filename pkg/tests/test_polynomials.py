import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dpbspec.errors import (
    DivisionByZeroPoly,
    IllConditionedGcd,
    NotAnnihilated,
    NotCoprime,
)
from dpbspec.linalg import inf_norm
from dpbspec.polynomials import (
    Poly,
    coprime,
    eval_at_matrix,
    extended_gcd,
    kernel_decomposition,
    kernel_dim,
    poly_arith,
    scaled_kernel_dim,
)
from dpbspec.sampling import random_well_conditioned, rng_from_seed

X = Poly.x()
ONE = Poly.one()


def coeff_lists(max_deg=5):
    part = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)
    return st.lists(st.tuples(part, part).map(lambda t: complex(*t)), max_size=max_deg + 1)


def test_basic_arithmetic_examples():
    assert (X - ONE) * (X + ONE) == Poly((-1, 0, 1))
    q, r = poly_arith(Poly((-1, 0, 1)), X - ONE, "divmod")
    assert q == X + ONE and r.is_zero
    assert poly_arith(X - Poly.constant(1j), X + Poly.constant(1j), "add") == Poly((0, 2))
    assert poly_arith(X, X, "sub").is_zero
    with pytest.raises(DivisionByZeroPoly):
        divmod(X, Poly.zero())
    with pytest.raises(ValueError):
        poly_arith(X, X, "pow")


def test_normalization_trims_trailing_noise():
    p = Poly((1.0, 2.0, 1e-16))
    assert p.degree == 1
    assert Poly((0.0, 0.0)).is_zero


@settings(max_examples=50, deadline=None)
@given(coeff_lists(), coeff_lists())
def test_mul_degree_and_commutativity(a, b):
    p, q = Poly(a), Poly(b)
    diff = p * q - q * p
    # convolution sums the same products in different orders
    scale = max(1.0, p.max_abs_coeff * q.max_abs_coeff)
    assert diff.max_abs_coeff <= 1e-12 * scale
    if not p.is_zero and not q.is_zero:
        assert (p * q).degree <= p.degree + q.degree


@settings(max_examples=50, deadline=None)
@given(coeff_lists(), coeff_lists())
def test_divmod_reconstructs(a, b):
    p, d = Poly(a), Poly(b)
    if d.is_zero:
        return
    # skip numerically degenerate divisors (tiny lead over huge trail)
    if abs(d.leading) < 1e-6 * max(1.0, d.max_abs_coeff):
        return
    q, r = divmod(p, d)
    back = q * d + r
    scale = max(1.0, p.max_abs_coeff, d.max_abs_coeff) ** 2
    diff = back - p
    assert diff.max_abs_coeff <= 1e-9 * scale
    assert r.degree < d.degree


def test_extended_gcd_examples():
    g, q1, q2 = extended_gcd(X - ONE, X + ONE)
    assert g == ONE
    assert q1 == Poly((-0.5,)) and q2 == Poly((0.5,))

    g, q1, q2 = extended_gcd(Poly((-1, 0, 1)), X - ONE)
    assert g == X - ONE and q1.is_zero and q2 == ONE

    p1, p2 = Poly.from_roots([1, 2]), Poly.from_roots([3])
    g, q1, q2 = extended_gcd(p1, p2)
    assert g.degree == 0
    residual = q1 * p1 + q2 * p2 - g
    assert residual.max_abs_coeff < 1e-10


def test_extended_gcd_zero_cases():
    g, q1, q2 = extended_gcd(2.0 * (X - ONE), Poly.zero())
    assert g == X - ONE
    with pytest.raises(ValueError):
        extended_gcd(Poly.zero(), Poly.zero())


def test_extended_gcd_ill_conditioned():
    # first remainder has significant low-order mass but a collapsed
    # leading coefficient: the next division step would be meaningless
    p2 = Poly.from_roots([1.0, 1.0])
    p1 = p2 + Poly((1e-9, 1e-13))
    with pytest.raises(IllConditionedGcd):
        extended_gcd(p1, p2)


def test_extended_gcd_near_equal_inputs_collapse_to_common_factor():
    # below the remainder tolerance the pair is treated as sharing a factor
    p1 = Poly.from_roots([1.0, 1.0])
    p2 = Poly.from_roots([1.0, 1.0 + 1e-13])
    g, _, _ = extended_gcd(p1, p2)
    assert g.degree == 2


def test_bezout_property_random_separated_roots():
    rng = rng_from_seed(41)
    for _ in range(40):
        d1, d2 = int(rng.integers(1, 7)), int(rng.integers(1, 7))
        roots = []
        while len(roots) < d1 + d2:
            z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            if all(abs(z - w) >= 0.1 for w in roots):
                roots.append(z)
        p1 = Poly.from_roots(roots[:d1])
        p2 = Poly.from_roots(roots[d1:])
        g, q1, q2 = extended_gcd(p1, p2)
        scale = max(p1.max_abs_coeff, p2.max_abs_coeff)
        assert g.degree == 0
        assert (q1 * p1 + q2 * p2 - g).max_abs_coeff <= 1e-9 * scale
        assert coprime(p1, p2)


def test_eval_at_matrix_examples():
    rng = rng_from_seed(43)
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    np.testing.assert_allclose(eval_at_matrix(X, a), a)
    np.testing.assert_allclose(eval_at_matrix(ONE, a), np.eye(3))
    np.testing.assert_allclose(eval_at_matrix(Poly.zero(), a), np.zeros((3, 3)))

    swap = np.array([[0, 1], [1, 0]], dtype=complex)
    np.testing.assert_allclose(
        eval_at_matrix(Poly.from_roots([1, -1]), swap), np.zeros((2, 2)), atol=1e-14
    )
    jordan = np.array([[1, 1], [0, 1]], dtype=complex)
    np.testing.assert_allclose(
        eval_at_matrix(Poly((-1, 0, 1)), jordan), [[0, 2], [0, 0]], atol=1e-14
    )


def test_kernel_dim_examples():
    assert kernel_dim(np.zeros((3, 3))) == 3
    assert kernel_dim(np.eye(4)) == 0
    assert kernel_dim(np.array([[0, 2], [0, 0]], dtype=complex)) == 1


def test_kernel_decomposition_diagonal_split():
    t = np.diag([1.0, 2.0, 3.0]).astype(complex)
    kd = kernel_decomposition(t, [Poly.from_roots([1]), Poly.from_roots([2, 3])])
    np.testing.assert_allclose(kd.projectors[0], np.diag([1, 0, 0]), atol=1e-12)
    np.testing.assert_allclose(kd.projectors[1], np.diag([0, 1, 1]), atol=1e-12)


def test_kernel_decomposition_swap_matches_brute_force_eigenprojections():
    swap = np.array([[0, 1], [1, 0]], dtype=complex)
    # independent oracle: orthonormal eigenvectors of the symmetric swap
    w, v = np.linalg.eigh(swap.real)
    oracle = {round(val): np.outer(v[:, i], v[:, i]) for i, val in enumerate(w)}
    kd = kernel_decomposition(swap, [Poly.from_roots([1]), Poly.from_roots([-1])])
    np.testing.assert_allclose(kd.projectors[0], oracle[1], atol=1e-12)
    np.testing.assert_allclose(kd.projectors[1], oracle[-1], atol=1e-12)


def test_kernel_decomposition_errors():
    swap = np.array([[0, 1], [1, 0]], dtype=complex)
    with pytest.raises(NotCoprime):
        kernel_decomposition(swap, [Poly.from_roots([1]), Poly.from_roots([1])])
    with pytest.raises(NotAnnihilated) as exc:
        kernel_decomposition(
            np.diag([1.0, 2.0]).astype(complex),
            [Poly.from_roots([1]), Poly.from_roots([3])],
        )
    assert exc.value.residual > exc.value.bound


def _random_diagonalizable(rng, n, separation=0.5, cond=20.0):
    lams = []
    while len(lams) < n:
        z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        if all(abs(z - w) >= separation for w in lams):
            lams.append(z)
    s = random_well_conditioned(n, rng, cond_max=cond)
    return s @ np.diag(np.array(lams)) @ np.linalg.inv(s), lams


def test_dimension_additivity_on_diagonalizable_family():
    rng = rng_from_seed(47)
    for _ in range(20):
        n = int(rng.integers(2, 9))
        t, lams = _random_diagonalizable(rng, n)
        parts = [Poly.from_roots([l]) for l in lams]
        product = Poly.from_roots(lams)
        # the product evaluates to rounding noise; anchor its rank
        # threshold to the natural magnitude of the evaluation
        scale = np.prod([inf_norm(t) + abs(l) for l in lams])
        total = scaled_kernel_dim(eval_at_matrix(product, t), scale)
        parts_sum = sum(kernel_dim(eval_at_matrix(p, t)) for p in parts)
        assert total == n == parts_sum


def test_projector_algebra_residuals_on_random_family():
    rng = rng_from_seed(53)
    for _ in range(15):
        n = int(rng.integers(2, 9))
        t, lams = _random_diagonalizable(rng, n)
        parts = [Poly.from_roots([l]) for l in lams]
        kd = kernel_decomposition(t, parts)
        assert kd.resolution_residual <= 1e-7
        assert kd.orthogonality_residual <= 1e-7
        assert kd.idempotency_residual <= 1e-7
        tnorm = inf_norm(t)
        for p, res in zip(parts, kd.annihilation_residuals):
            assert res <= 1e-7 * max(1.0, tnorm) ** p.degree


def test_poly_json_round_trip():
    p = Poly((1 + 2j, 0, 3.5))
    assert Poly.from_json(p.to_json()) == p
    with pytest.raises(ValueError):
        Poly.from_json({"coeffs": "bad"})
