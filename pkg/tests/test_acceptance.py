"""Acceptance suite: every criterion at its stated tolerance.

Each test prints one `[acceptance N] PASS/FAIL` line (run with `pytest -s`
to watch them stream; captured output is shown on failure anyway).
"""

import functools
import time

import numpy as np
import pytest

from dpbspec.dpb import (
    commutator_counterexample,
    dpb_decide,
    gelfand_check,
    periodic_decompose,
    triangular_pb_classify,
)
from dpbspec.idempotents import lagrange_idempotents, riesz_projection
from dpbspec.linalg import NORM_INF, identity, inf_norm, power_norm_profile
from dpbspec.polynomials import (
    Poly,
    eval_at_matrix,
    extended_gcd,
    kernel_decomposition,
    kernel_dim,
    scaled_kernel_dim,
)
from dpbspec.sampling import (
    random_diagonalizable_unimodular,
    random_jordan_unimodular,
    random_well_conditioned,
    rng_from_seed,
)
from dpbspec.seqalg import mobius_truncation
from dpbspec.spectrum import cluster, default_cluster_tol, eigenvalues


def criterion(num, desc):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"[acceptance {num}] FAIL - {desc}", flush=True)
                raise
            print(f"[acceptance {num}] PASS - {desc}", flush=True)

        return wrapper

    return deco


@criterion(1, "commutator demo: eigenvalue 5/6 (1e-12), |M^20|_2 (1e-9 rel), < 0.1 s")
def test_criterion_1_commutator():
    start = time.perf_counter()
    demo = commutator_counterexample()
    elapsed = time.perf_counter() - start
    assert demo.failures == ()
    assert abs(demo.eigenvalue - (1.0 + demo.k) / (2.0 + demo.k)) <= 1e-12
    assert abs(demo.eigenvalue - 5.0 / 6.0) <= 1e-12
    expected = (6.0 / 5.0) ** 20
    assert abs(demo.m20_norm - expected) <= 1e-9 * expected
    assert elapsed < 0.1, f"commutator demo took {elapsed:.3f} s"


@criterion(2, "Wiener demo: truncation norm at N=40 within 1.5e-12 of 2, monotone")
def test_criterion_2_wiener():
    prev = 0.0
    for n in range(1, 41):
        t = mobius_truncation(n)
        assert t.norm > prev
        prev = t.norm
    assert abs(prev - 2.0) <= 1.5e-12


@criterion(3, "oracle equivalence: 200 samples, Riesz vs Lagrange 1e-7, radii 1e-8, < 30 s")
def test_criterion_3_oracle_equivalence():
    rng = rng_from_seed(2024)
    start = time.perf_counter()
    worst_match = 0.0
    worst_radius = 0.0
    for _ in range(200):
        n = int(rng.integers(2, 9))
        b, _, _ = random_diagonalizable_unimodular(n, rng, cond_max=100.0)
        spect = cluster(eigenvalues(b), default_cluster_tol(b))
        system = lagrange_idempotents(b, spect.lambdas())
        for lam, p in zip(system.lambdas, system.idempotents):
            others = [q for q, _ in spect.points if q != lam]
            gap = min(abs(lam - q) for q in others) if others else 1.0
            q3 = riesz_projection(b, lam, spect, radius=0.3 * gap)
            q7 = riesz_projection(b, lam, spect, radius=0.7 * gap)
            worst_match = max(
                worst_match,
                float(np.max(np.abs(q3 - p))),
                float(np.max(np.abs(q7 - p))),
            )
            worst_radius = max(worst_radius, float(np.max(np.abs(q3 - q7))))
    elapsed = time.perf_counter() - start
    assert worst_match <= 1e-7, f"worst Riesz/Lagrange gap {worst_match:.3e}"
    assert worst_radius <= 1e-8, f"worst radius dependence {worst_radius:.3e}"
    assert elapsed < 30.0, f"suite took {elapsed:.1f} s"


@criterion(4, "decision equivalence: 200 accepted with sound bounds, 200 Jordan rejected")
def test_criterion_4_decision_equivalence():
    rng = rng_from_seed(4096)
    for _ in range(200):
        n = int(rng.integers(2, 9))
        b, _, _ = random_diagonalizable_unimodular(n, rng, cond_max=100.0)
        v = dpb_decide(b)
        assert v.is_dpb
        assert v.system.residuals.reconstruction <= 1e-7
        profile = power_norm_profile(b, 200, NORM_INF)
        assert profile.max_norm <= v.power_bound + 1e-6

    for _ in range(200):
        n = int(rng.integers(2, 9))
        b, _, _ = random_jordan_unimodular(n, rng)
        v = dpb_decide(b)
        assert not v.is_dpb
        assert v.growth_witness is not None, "missing growth witness"
        w_n, w_norm = v.growth_witness
        assert w_norm >= abs(w_n), "witness is not at least linear"


@criterion(5, "Gelfand: 100 conjugates of I within 1e-10; Jordan fails with sigma {1}")
def test_criterion_5_gelfand():
    rng = rng_from_seed(555)
    for _ in range(100):
        n = int(rng.integers(2, 7))
        s = random_well_conditioned(n, rng, cond_max=50.0)
        b = s @ identity(n) @ np.linalg.inv(s)
        rep = gelfand_check(b)
        assert rep.is_identity
        assert rep.distance <= 1e-10

    jordan = np.array([[1.0, 1.0], [0.0, 1.0]], dtype=complex)
    rep = gelfand_check(jordan)
    assert not rep.is_identity
    assert rep.failed_hypothesis == "not_dpb"
    pts = rep.verdict.spectrum.points
    assert len(pts) == 1 and abs(pts[0][0] - 1.0) <= 1e-10 and pts[0][1] == 2


@criterion(6, "kernel splitting: 100 samples, exact additivity, Bezout 1e-9, projectors 1e-7")
def test_criterion_6_kernel_splitting():
    rng = rng_from_seed(666)
    for _ in range(100):
        n = int(rng.integers(2, 9))
        distinct = int(rng.integers(2, n + 1))
        lams = []
        while len(lams) < distinct:
            z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            if all(abs(z - w) >= 0.5 for w in lams):
                lams.append(z)
        mults = np.ones(distinct, dtype=int)
        for _ in range(n - distinct):
            mults[int(rng.integers(0, distinct))] += 1
        diag = np.concatenate([[l] * m for l, m in zip(lams, mults)])
        s = random_well_conditioned(n, rng, cond_max=20.0)
        t = s @ np.diag(diag) @ np.linalg.inv(s)

        parts = [Poly.from_roots([l]) for l in lams]
        for i in range(distinct):
            for j in range(i + 1, distinct):
                g, q1, q2 = extended_gcd(parts[i], parts[j])
                scale = max(parts[i].max_abs_coeff, parts[j].max_abs_coeff)
                assert g.degree == 0
                assert (q1 * parts[i] + q2 * parts[j] - g).max_abs_coeff <= 1e-9 * scale

        product_scale = np.prod([inf_norm(t) + abs(l) for l in lams])
        total = scaled_kernel_dim(eval_at_matrix(Poly.from_roots(lams), t), product_scale)
        per_part = [kernel_dim(eval_at_matrix(p, t)) for p in parts]
        assert total == n
        assert per_part == list(mults)
        assert sum(per_part) == total

        kd = kernel_decomposition(t, parts)
        assert kd.resolution_residual <= 1e-7
        assert kd.orthogonality_residual <= 1e-7
        assert kd.idempotency_residual <= 1e-7

        oracle = lagrange_idempotents(t, lams)
        worst = max(
            float(np.max(np.abs(p - q)))
            for p, q in zip(kd.projectors, oracle.idempotents)
        )
        assert worst <= 1e-7


@criterion(7, "periodic: shifts m in 2..8 reconstruct (1e-10), exact flags, Lagrange 1e-8")
def test_criterion_7_periodic():
    for m in range(2, 9):
        shift = np.roll(np.eye(m, dtype=complex), 1, axis=0)
        dec = periodic_decompose(shift, m)
        assert dec.reconstruction_residual <= 1e-10

        eigs = eigenvalues(shift)
        expected_flags = tuple(
            bool(np.min(np.abs(eigs - r)) > 1e-8) for r in dec.roots
        )
        assert dec.zero_flags == expected_flags
        assert not any(dec.zero_flags)  # the full shift uses every root

        oracle = lagrange_idempotents(shift, dec.roots)
        worst = max(
            float(np.max(np.abs(p - q)))
            for p, q in zip(dec.idempotents, oracle.idempotents)
        )
        assert worst <= 1e-8


@criterion(8, "triangular algebra: lambda*I accepted, 50 perturbations rejected, degree >= 1")
def test_criterion_8_triangular():
    for n in (3, 4, 5):
        rep = triangular_pb_classify(n, trials=50, seed=800 + n)
        assert rep.identity_is_dpb
        assert rep.perturbed_all_rejected
        assert rep.min_degree >= 1
