"""Decision procedure for doubly power-bounded matrices and the bundle of
demonstrations built on top of it.

A matrix with spectrum {l_1, ..., l_n} is doubly power-bounded exactly when
all l_j are unimodular and the product of (b - l_j I) over the distinct
spectrum points vanishes; in that case the interpolation idempotents
resolve the identity and bound every power norm by the sum of their norms.
The decision below runs that characterization numerically: unimodularity
and annihilation within tolerances, plus a residual check on the
constructed idempotent system.  The extra check matters: a defective
matrix whose computed eigenvalues split tangentially to the circle can
slip past the first two tests at machine precision, but its interpolation
"idempotents" fail p^2 = p by an O(1) margin.

Power-norm profiles are attached as growth witnesses only; they never
decide.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import LambdaNotInSpectrum, NotDpb, NotPeriodic
from .idempotents import (
    IdempotentSystem,
    lagrange_idempotents,
    riesz_projection,
)
from .linalg import (
    NORM_INF,
    NORM_TWO,
    Norm,
    PowerNormProfile,
    as_cmatrix,
    identity,
    inf_norm,
    inverse,
    matrix_power,
    operator_norm,
    power_norm_profile,
)
from .sampling import (
    random_norm_isometry,
    random_well_conditioned,
    rng_from_seed,
)
from .spectrum import (
    SpectrumCluster,
    cluster,
    default_cluster_tol,
    eigenvalues,
    on_unit_circle,
)

DEFAULT_CIRC_TOL = 1e-8
DEFAULT_ALG_TOL = 1e-8
SYSTEM_RESIDUAL_RTOL = 1e-6
GROWTH_WITNESS_FACTOR = 10.0
DEFAULT_PROFILE_N = 50


@dataclass(frozen=True, eq=False)
class DpbVerdict:
    """Outcome of the doubly power-bounded decision.

    ``minpoly_residual`` is norm(prod (b - l_j I)) over the distinct
    spectrum points, normalized by prod(norm(b) + |l_j|).  The idempotent
    system and the power bound sum(norm(p_j)) are present exactly when the
    verdict is positive; a growth witness (n, norm(b^n)) is attached when a
    rejected matrix shows clear power growth.
    """

    is_dpb: bool
    spectrum: SpectrumCluster
    circle_deviation: float
    minpoly_residual: float
    system: Optional[IdempotentSystem]
    power_bound: Optional[float]
    growth_witness: Optional[tuple]

    def to_json(self) -> dict:
        return {
            "is_dpb": self.is_dpb,
            "spectrum": self.spectrum.to_json(),
            "circle_deviation": self.circle_deviation,
            "minpoly_residual": self.minpoly_residual,
            "power_bound": self.power_bound,
            "growth_witness": None
            if self.growth_witness is None
            else [int(self.growth_witness[0]), float(self.growth_witness[1])],
            "system": None if self.system is None else self.system.to_json(),
        }


def minimal_polynomial_residual(b, lams, kind: Norm = NORM_INF) -> float:
    """Scale-free residual of prod (b - l I) over the given points."""
    m = as_cmatrix(b)
    n = m.shape[0]
    prod = identity(n)
    denom = 1.0
    norm_b = operator_norm(m, kind)
    for l in lams:
        prod = prod @ (m - l * identity(n))
        denom *= norm_b + abs(l)
    return operator_norm(prod, kind) / denom


def dpb_decide(
    b,
    kind: Norm = NORM_INF,
    *,
    circ_tol: float = DEFAULT_CIRC_TOL,
    alg_tol: float = DEFAULT_ALG_TOL,
    cluster_tol: Optional[float] = None,
    profile_n: int = DEFAULT_PROFILE_N,
) -> DpbVerdict:
    """Decide double power-boundedness of an invertible matrix.

    Raises :class:`SingularMatrix` when b is not invertible.
    """
    m = as_cmatrix(b)
    inverse(m)  # invertibility gate
    ctol = default_cluster_tol(m) if cluster_tol is None else cluster_tol
    spect = cluster(eigenvalues(m), ctol)
    on_circle, circle_dev = on_unit_circle(spect, circ_tol)
    lams = spect.lambdas()
    min_res = minimal_polynomial_residual(m, lams, kind)

    if on_circle and min_res <= alg_tol:
        system = lagrange_idempotents(m, lams, kind)
        norm_b = operator_norm(m, kind)
        if system.residuals.bound() <= SYSTEM_RESIDUAL_RTOL * max(1.0, norm_b):
            bound = float(sum(operator_norm(p, kind) for p in system.idempotents))
            return DpbVerdict(
                is_dpb=True,
                spectrum=spect,
                circle_deviation=circle_dev,
                minpoly_residual=min_res,
                system=system,
                power_bound=bound,
                growth_witness=None,
            )

    profile = power_norm_profile(m, profile_n, kind)
    witness = None
    if profile.max_norm > GROWTH_WITNESS_FACTOR * operator_norm(m, kind):
        witness = (profile.argmax, profile.max_norm)
    return DpbVerdict(
        is_dpb=False,
        spectrum=spect,
        circle_deviation=circle_dev,
        minpoly_residual=min_res,
        system=None,
        power_bound=None,
        growth_witness=witness,
    )


@dataclass(frozen=True)
class GelfandReport:
    """Identity recovery from double power-boundedness with spectrum {1}."""

    is_identity: bool
    distance: float
    failed_hypothesis: Optional[str]
    verdict: DpbVerdict

    def to_json(self) -> dict:
        return {
            "is_identity": self.is_identity,
            "distance": self.distance,
            "failed_hypothesis": self.failed_hypothesis,
            "verdict": self.verdict.to_json(),
        }


def gelfand_check(b, kind: Norm = NORM_INF) -> GelfandReport:
    """If b is doubly power-bounded with spectrum {1}, it must be the unit."""
    m = as_cmatrix(b)
    v = dpb_decide(m, kind)
    dist = operator_norm(m - identity(m.shape[0]), kind)
    if not v.is_dpb:
        return GelfandReport(False, dist, "not_dpb", v)
    pts = v.spectrum.points
    if len(pts) != 1 or abs(pts[0][0] - 1.0) > max(10.0 * v.spectrum.cluster_tol, 1e-7):
        return GelfandReport(False, dist, "spectrum_not_one", v)
    return GelfandReport(dist <= 1e-7, dist, None, v)


@dataclass(frozen=True, eq=False)
class EigenIdempotent:
    """Idempotent p with b p = lambda p, from the contour route."""

    p: np.ndarray
    lam: complex
    eigen_residual: float
    idem_residual: float


def koehler_rosenthal(b, lam: complex, kind: Norm = NORM_INF) -> EigenIdempotent:
    """Eigen-idempotent at an isolated spectrum point of a doubly
    power-bounded matrix, computed as a Riesz projection.

    Raises :class:`NotDpb` or :class:`LambdaNotInSpectrum`.
    """
    m = as_cmatrix(b)
    lam = complex(lam)
    v = dpb_decide(m, kind)
    if not v.is_dpb:
        raise NotDpb("matrix is not doubly power-bounded")
    center, dist = v.spectrum.nearest(lam)
    if dist > max(10.0 * v.spectrum.cluster_tol, 1e-8):
        raise LambdaNotInSpectrum(f"{lam} not found in spectrum (nearest {center})")
    p = riesz_projection(m, center, v.spectrum, kind=kind)
    return EigenIdempotent(
        p=p,
        lam=center,
        eigen_residual=operator_norm(m @ p - center * p, kind),
        idem_residual=operator_norm(p @ p - p, kind),
    )


@dataclass(frozen=True, eq=False)
class UnitaryLikeReport:
    """Check that norm-one elements with norm-one inverses decompose."""

    qualifies: bool
    norm_u: float
    norm_u_inv: float
    max_power_deviation: Optional[float]
    power_norms_ok: Optional[bool]
    system: Optional[IdempotentSystem]


def unitary_like_check(u, kind: Norm = NORM_INF, big_n: int = 50) -> UnitaryLikeReport:
    """For invertible u with norm(u) = norm(u^-1) = 1, all integer power
    norms stay at 1 and the spectral decomposition exists."""
    m = as_cmatrix(u)
    u_inv = inverse(m)
    nu = operator_norm(m, kind)
    ninv = operator_norm(u_inv, kind)
    if abs(nu - 1.0) > 1e-9 or abs(ninv - 1.0) > 1e-9:
        return UnitaryLikeReport(False, nu, ninv, None, None, None)
    profile = power_norm_profile(m, big_n, kind)
    dev = max(abs(x - 1.0) for x in profile.norms)
    verdict = dpb_decide(m, kind)
    return UnitaryLikeReport(
        qualifies=True,
        norm_u=nu,
        norm_u_inv=ninv,
        max_power_deviation=dev,
        power_norms_ok=dev <= 1e-8,
        system=verdict.system,
    )


@dataclass(frozen=True, eq=False)
class PeriodicDecomposition:
    """Fourier-averaged idempotents of a periodic matrix.

    ``roots[k-1]`` is exp(2 pi i k / m) for k = 1..m; ``zero_flags`` marks
    the roots outside the spectrum, whose idempotents vanish.
    """

    order: int
    roots: tuple
    idempotents: tuple
    zero_flags: tuple
    reconstruction_residual: float
    periodicity_residual: float


def periodic_decompose(a, order: int) -> PeriodicDecomposition:
    """Resolution of identity for a with a^m = e.

    Each idempotent is the discrete Fourier average
    p_k = (1/m) sum_j exp(-2 pi i j k / m) a^j, the closed form of the
    interpolation product over all m-th roots of unity.  Raises
    :class:`NotPeriodic` when a^m strays from the identity.
    """
    m = as_cmatrix(a)
    if order < 1:
        raise ValueError("order must be a positive integer")
    n = m.shape[0]
    a_m = matrix_power(m, order)
    scale = max(1.0, inf_norm(m)) ** order
    periodicity = inf_norm(a_m - identity(n))
    if periodicity > 1e-9 * scale:
        raise NotPeriodic(
            f"a^{order} deviates from the identity by {periodicity:.3e}"
        )

    powers = [identity(n)]
    for _ in range(order - 1):
        powers.append(powers[-1] @ m)
    idempotents = []
    roots = []
    for k in range(1, order + 1):
        phases = np.exp(-2j * np.pi * np.arange(order) * k / order)
        p = sum(ph * pw for ph, pw in zip(phases, powers)) / order
        idempotents.append(p)
        roots.append(complex(np.exp(2j * np.pi * k / order)))
    zero_flags = tuple(inf_norm(p) <= 1e-8 for p in idempotents)
    combo = sum(r * p for r, p in zip(roots, idempotents))
    return PeriodicDecomposition(
        order=order,
        roots=tuple(roots),
        idempotents=tuple(idempotents),
        zero_flags=zero_flags,
        reconstruction_residual=inf_norm(combo - m),
        periodicity_residual=periodicity,
    )


@dataclass(frozen=True, eq=False)
class CommutatorDemo:
    """Self-contained 2x2 witness that the doubly power-bounded set need
    not be closed under multiplication.

    u is the basis swap (a surjective isometry), a = diag(1, 2), and
    b = (a + k e) / (1 + k) with k = 2 norm_2(a) = 4.  Both u and the
    conjugate b^-1 u b are doubly power-bounded, but m = u^-1 b^-1 u b
    contracts the first basis vector by (1 + k) / (2 + k) = 5/6, so its
    spectrum leaves the unit circle and its powers grow like (6/5)^|n|.
    """

    u: np.ndarray
    a: np.ndarray
    b: np.ndarray
    m: np.ndarray
    k: float
    eigenvalue: complex
    expected_eigenvalue: complex
    eigen_action_residual: float
    spectrum: SpectrumCluster
    u_verdict: DpbVerdict
    conjugate_verdict: DpbVerdict
    m_verdict: DpbVerdict
    profile: PowerNormProfile
    m20_norm: float
    failures: tuple


def commutator_counterexample() -> CommutatorDemo:
    u = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    a = np.diag([1.0, 2.0]).astype(complex)
    k = 2.0 * operator_norm(a, NORM_TWO)
    b = (a + k * identity(2)) / (1.0 + k)
    b_inv = inverse(b)
    u_inv = inverse(u)
    m = u_inv @ b_inv @ u @ b

    e1 = np.array([1.0, 0.0], dtype=complex)
    eigenvalue = complex(m[0, 0])
    action_res = float(np.linalg.norm(m @ e1 - eigenvalue * e1))
    expected = complex((1.0 + k) / (2.0 + k))

    spect = cluster(eigenvalues(m), default_cluster_tol(m))
    u_verdict = dpb_decide(u, NORM_TWO)
    conj_verdict = dpb_decide(b_inv @ u @ b, NORM_TWO)
    m_verdict = dpb_decide(m, NORM_TWO)
    profile = power_norm_profile(m, 20, NORM_TWO)
    m20 = operator_norm(matrix_power(m, 20), NORM_TWO)

    failures = []
    if abs(eigenvalue - expected) > 1e-12:
        failures.append(f"contraction factor {eigenvalue} != {expected}")
    if abs(expected - 5.0 / 6.0) > 1e-12:
        failures.append(f"(1 + k)/(2 + k) = {expected} is not 5/6 (k = {k})")
    if action_res > 1e-12:
        failures.append(f"first basis vector is not an eigenvector: {action_res:.3e}")
    if not u_verdict.is_dpb:
        failures.append("swap u unexpectedly rejected")
    if not conj_verdict.is_dpb:
        failures.append("conjugate b^-1 u b unexpectedly rejected")
    if m_verdict.is_dpb:
        failures.append("commutator m unexpectedly accepted")
    if m_verdict.growth_witness is None:
        failures.append("commutator m lacks a growth witness")
    if abs(m20 - (6.0 / 5.0) ** 20) > 1e-9 * (6.0 / 5.0) ** 20:
        failures.append(f"norm of m^20 = {m20} != (6/5)^20")

    return CommutatorDemo(
        u=u,
        a=a,
        b=b,
        m=m,
        k=float(k),
        eigenvalue=eigenvalue,
        expected_eigenvalue=expected,
        eigen_action_residual=action_res,
        spectrum=spect,
        u_verdict=u_verdict,
        conjugate_verdict=conj_verdict,
        m_verdict=m_verdict,
        profile=profile,
        m20_norm=float(m20),
        failures=tuple(failures),
    )


def power_growth_fit(mat, kind: Norm = NORM_INF, max_power: int = 200):
    """Polynomial growth order of norm(M^m).

    Fits log norm against log m over the tail m in [max_power // 2,
    max_power] and returns (degree, slope) with degree the rounded slope
    (the slope approaches an integer degree from below).
    """
    m = as_cmatrix(mat)
    norms = []
    cur = identity(m.shape[0])
    for _ in range(max_power):
        cur = cur @ m
        norms.append(operator_norm(cur, kind))
    lo = max_power // 2
    ms = np.arange(lo, max_power + 1)
    ys = np.log(np.array(norms[lo - 1:]))
    slope = float(np.polyfit(np.log(ms), ys, 1)[0])
    return max(0, int(round(slope))), slope


@dataclass(frozen=True)
class TriangularReport:
    """Upper-triangular algebra with constant diagonal: only unimodular
    multiples of the identity survive the decision."""

    n: int
    trials: int
    identity_is_dpb: bool
    perturbed_all_rejected: bool
    degrees: tuple
    slopes: tuple
    min_degree: int


def triangular_pb_classify(
    n: int,
    trials: int,
    seed: int = 0,
    kind: Norm = NORM_INF,
    max_power: int = 200,
) -> TriangularReport:
    """Sample unimodular-diagonal upper-triangular matrices with a nonzero
    strict upper part; all must be rejected with polynomial power growth,
    while the bare unimodular multiple of I passes.

    The reported degree is the rounded slope of log norm(M^m) against
    log m over the tail m in [max_power // 2, max_power].
    """
    if n < 3:
        raise ValueError("dimension must be at least 3")
    rng = rng_from_seed(seed)
    lam0 = complex(np.exp(2j * np.pi * rng.random()))
    identity_ok = dpb_decide(lam0 * identity(n), kind).is_dpb

    degrees = []
    slopes = []
    all_rejected = True
    for _ in range(trials):
        lam = complex(np.exp(2j * np.pi * rng.random()))
        strict = np.triu(
            rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)), 1
        )
        strict /= np.abs(strict).max()
        mat = lam * identity(n) + strict
        if dpb_decide(mat, kind).is_dpb:
            all_rejected = False
        degree, slope = power_growth_fit(mat, kind, max_power)
        slopes.append(slope)
        degrees.append(degree)

    return TriangularReport(
        n=n,
        trials=trials,
        identity_is_dpb=identity_ok,
        perturbed_all_rejected=all_rejected,
        degrees=tuple(degrees),
        slopes=tuple(slopes),
        min_degree=min(degrees) if degrees else 0,
    )


@dataclass(frozen=True)
class InclusionChainReport:
    """Sampled walk along: norm isometries, their conjugates by invertible
    elements, the doubly power-bounded set, and spectra inside the circle.

    The Jordan block records strictness of the last inclusion: spectrum on
    the circle without double power-boundedness.
    """

    trials: int
    violations: int
    isometries_all_dpb: bool
    conjugates_all_dpb: bool
    max_circle_deviation: float
    jordan_on_circle: bool
    jordan_is_dpb: bool


def inclusion_chain_probe(
    kind: Norm = NORM_INF,
    trials: int = 50,
    seed: int = 0,
    max_dim: int = 6,
    cond_max: float = 100.0,
) -> InclusionChainReport:
    rng = rng_from_seed(seed)
    violations = 0
    isometries_ok = True
    conjugates_ok = True
    max_dev = 0.0
    for _ in range(trials):
        n = int(rng.integers(2, max_dim + 1))
        u = random_norm_isometry(n, kind, rng)
        if not dpb_decide(u, kind).is_dpb:
            isometries_ok = False
            violations += 1
        s = random_well_conditioned(n, rng, cond_max)
        v = inverse(s) @ u @ s
        verdict = dpb_decide(v, kind)
        max_dev = max(max_dev, verdict.circle_deviation)
        if not verdict.is_dpb:
            conjugates_ok = False
            violations += 1

    jordan = identity(3)
    jordan[0, 1] = 1.0
    j_verdict = dpb_decide(jordan, kind)
    _, j_dev = on_unit_circle(j_verdict.spectrum, DEFAULT_CIRC_TOL)
    return InclusionChainReport(
        trials=trials,
        violations=violations,
        isometries_all_dpb=isometries_ok,
        conjugates_all_dpb=conjugates_ok,
        max_circle_deviation=max_dev,
        jordan_on_circle=j_dev <= DEFAULT_CIRC_TOL,
        jordan_is_dpb=j_verdict.is_dpb,
    )
