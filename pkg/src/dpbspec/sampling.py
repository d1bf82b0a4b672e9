"""Seeded random matrix generators shared by the probe operations and the
test suite.  Every generator takes an explicit ``numpy.random.Generator``
so that callers stay deterministic.
"""

from __future__ import annotations

import numpy as np

from .linalg import Norm, as_cmatrix


def rng_from_seed(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish unitary via QR of a complex Gaussian, phases fixed."""
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_unimodular(count: int, rng: np.random.Generator, min_separation: float = 0.2):
    """Distinct points on the unit circle with pairwise distance >= min_separation."""
    if count * min_separation > 2 * np.pi:
        raise ValueError("cannot separate that many points on the circle")
    points: list[complex] = []
    while len(points) < count:
        z = np.exp(2j * np.pi * rng.random())
        if all(abs(z - p) >= min_separation for p in points):
            points.append(complex(z))
    return points


def random_well_conditioned(
    n: int, rng: np.random.Generator, cond_max: float = 100.0
) -> np.ndarray:
    """Invertible matrix with condition number at most cond_max (two-norm)."""
    u = random_unitary(n, rng)
    v = random_unitary(n, rng)
    sv = np.exp(rng.uniform(0.0, np.log(cond_max), size=n))
    sv /= sv.min()
    return u @ np.diag(sv.astype(complex)) @ v


def random_permutation_matrix(n: int, rng: np.random.Generator) -> np.ndarray:
    return np.eye(n, dtype=complex)[rng.permutation(n)]


def random_norm_isometry(n: int, kind: Norm, rng: np.random.Generator) -> np.ndarray:
    """An invertible matrix with unit norm and unit inverse norm in ``kind``.

    For the two-norm these are unitaries; for the one/inf norms (and as a
    fallback for conjugated norms) permutation times unimodular diagonal.
    """
    if kind.kind == "two":
        return random_unitary(n, rng)
    phases = np.exp(2j * np.pi * rng.random(n))
    return random_permutation_matrix(n, rng) @ np.diag(phases)


def random_diagonalizable_unimodular(
    n: int,
    rng: np.random.Generator,
    cond_max: float = 100.0,
    min_separation: float = 0.25,
):
    """b = S diag(distinct unimodular) S^-1 with cond(S) <= cond_max.

    Returns (b, lambdas, s).
    """
    lams = random_unimodular(n, rng, min_separation)
    s = random_well_conditioned(n, rng, cond_max)
    b = s @ np.diag(np.array(lams)) @ np.linalg.inv(s)
    return as_cmatrix(b), lams, s


def random_jordan_unimodular(n: int, rng: np.random.Generator):
    """Matrix with a Jordan block of size >= 2 at a unimodular eigenvalue.

    The block is embedded with further distinct unimodular diagonal
    entries, then conjugated by a permutation and a unimodular diagonal;
    both leave all entry magnitudes (hence inf-norm power growth) intact.
    Returns (b, block_eigenvalue, block_size).
    """
    if n < 2:
        raise ValueError("need dimension at least 2 for a nontrivial block")
    k = int(rng.integers(2, n + 1))
    lams = random_unimodular(n - k + 1, rng, min_separation=0.2)
    mu = lams[0]
    d = np.zeros((n, n), dtype=complex)
    for i in range(k):
        d[i, i] = mu
        if i + 1 < k:
            d[i, i + 1] = 1.0
    for i, lam in enumerate(lams[1:]):
        d[k + i, k + i] = lam
    p = random_permutation_matrix(n, rng)
    e = np.diag(np.exp(2j * np.pi * rng.random(n)))
    t = p @ e
    t_inv = np.conj(e.T) @ p.T
    return as_cmatrix(t @ d @ t_inv), mu, k
