"""Resolutions of identity for matrices with finite spectrum.

Two independent construction routes are provided and kept deliberately
separate so they can certify each other:

* :func:`lagrange_idempotents` builds each idempotent as the interpolation
  product over the remaining spectrum points;
* :func:`riesz_projection` integrates the resolvent around one spectrum
  point on a circular contour by the trapezoidal rule, which is spectrally
  accurate for this analytic periodic integrand.

The module also hosts the left-multiplication representation and a sampling
probe for its norm-preservation property.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import (
    DuplicateLambdas,
    LambdaNotInSpectrum,
    QuadratureNotConverged,
    ResolventSingular,
)
from .linalg import (
    NORM_INF,
    Norm,
    as_cmatrix,
    identity,
    matrix_to_json,
    matrix_from_json,
    operator_norm,
)
from .spectrum import SpectrumCluster, cluster, default_cluster_tol, eigenvalues

NONZERO_TOL = 1e-8
LAMBDA_SEPARATION_RTOL = 1e-10
QUAD_IDEM_TOL = 1e-9
QUAD_NODE_CAP = 4096
QUAD_NODE_DEFAULT = 64
NODE_EIGEN_CLEARANCE = 1e-12


@dataclass(frozen=True)
class SystemResiduals:
    """Deviations from the resolution-of-identity axioms.

    idem: max over j of norm(p_j^2 - p_j)
    ortho: max over i != j of norm(p_i p_j)
    resolution: norm(sum p_j - I)
    reconstruction: norm(sum lambda_j p_j - b), None when unbound
    """

    idem: float
    ortho: float
    resolution: float
    reconstruction: Optional[float]

    def bound(self) -> float:
        worst = max(self.idem, self.ortho, self.resolution)
        if self.reconstruction is not None:
            worst = max(worst, self.reconstruction)
        return worst

    def to_json(self) -> dict:
        return {
            "idem": self.idem,
            "ortho": self.ortho,
            "resolution": self.resolution,
            "reconstruction": self.reconstruction,
        }


@dataclass(frozen=True, eq=False)
class IdempotentSystem:
    """Distinct points with candidate idempotents and their residuals."""

    lambdas: tuple
    idempotents: tuple
    residuals: SystemResiduals
    nonzero_flags: tuple
    separation: float

    def to_json(self) -> dict:
        return {
            "lambdas": [[float(l.real), float(l.imag)] for l in self.lambdas],
            "idempotents": [matrix_to_json(p) for p in self.idempotents],
            "residuals": self.residuals.to_json(),
        }

    @classmethod
    def from_json(cls, obj) -> "IdempotentSystem":
        try:
            lams = tuple(complex(l[0], l[1]) for l in obj["lambdas"])
            ps = tuple(matrix_from_json(p) for p in obj["idempotents"])
            res = obj["residuals"]
            residuals = SystemResiduals(
                idem=float(res["idem"]),
                ortho=float(res["ortho"]),
                resolution=float(res["resolution"]),
                reconstruction=None
                if res.get("reconstruction") is None
                else float(res["reconstruction"]),
            )
        except (KeyError, TypeError, IndexError, ValueError) as exc:
            raise ValueError(f"malformed idempotent system JSON: {exc}") from exc
        flags = tuple(operator_norm(p, NORM_INF) > NONZERO_TOL for p in ps)
        sep = _min_separation(lams)
        return cls(lams, ps, residuals, flags, sep)


def _min_separation(lams) -> float:
    if len(lams) < 2:
        return float("inf")
    return min(
        abs(lams[i] - lams[j]) for i in range(len(lams)) for j in range(i + 1, len(lams))
    )


def _system_residuals(ps, lams, b, kind: Norm) -> SystemResiduals:
    n = ps[0].shape[0]
    idem = max(operator_norm(p @ p - p, kind) for p in ps)
    ortho = 0.0
    for i in range(len(ps)):
        for j in range(len(ps)):
            if i != j:
                ortho = max(ortho, operator_norm(ps[i] @ ps[j], kind))
    resolution = operator_norm(sum(ps) - identity(n), kind)
    reconstruction = None
    if b is not None:
        combo = sum(l * p for l, p in zip(lams, ps))
        reconstruction = operator_norm(combo - b, kind)
    return SystemResiduals(idem, ortho, resolution, reconstruction)


def lagrange_idempotents(b, lambdas, kind: Norm = NORM_INF) -> IdempotentSystem:
    """Interpolation idempotents of b at the given distinct points.

    For a single point the idempotent is the identity.  The points are not
    required to actually annihilate b; a mismatch shows up in the residuals
    rather than as an error.
    """
    m = as_cmatrix(b)
    lams = tuple(complex(l) for l in lambdas)
    if not lams:
        raise ValueError("need at least one interpolation point")
    sep = _min_separation(lams)
    sep_floor = LAMBDA_SEPARATION_RTOL * max(1.0, max(abs(l) for l in lams))
    if sep <= sep_floor:
        raise DuplicateLambdas(f"minimal separation {sep:.3e} at or below {sep_floor:.3e}")

    n = m.shape[0]
    ps = []
    for i, li in enumerate(lams):
        p = identity(n)
        for j, lj in enumerate(lams):
            if j != i:
                p = p @ (m - lj * identity(n)) / (li - lj)
        ps.append(p)
    residuals = _system_residuals(ps, lams, m, kind)
    flags = tuple(operator_norm(p, kind) > NONZERO_TOL for p in ps)
    return IdempotentSystem(lams, tuple(ps), residuals, flags, sep)


@dataclass(frozen=True)
class VerificationReport:
    """Clause-by-clause check of an idempotent system against a source matrix."""

    reconstruction_ok: bool
    reconstruction_residual: float
    annihilation_ok: bool
    annihilation_residual: float
    lagrange_match_ok: bool
    lagrange_match_residual: float
    spectrum_contained: bool
    spectrum_equal: bool
    absent_lambdas: tuple
    extra_spectrum: tuple
    passed: bool

    def to_json(self) -> dict:
        return {
            "reconstruction_ok": self.reconstruction_ok,
            "reconstruction_residual": self.reconstruction_residual,
            "annihilation_ok": self.annihilation_ok,
            "annihilation_residual": self.annihilation_residual,
            "lagrange_match_ok": self.lagrange_match_ok,
            "lagrange_match_residual": self.lagrange_match_residual,
            "spectrum_contained": self.spectrum_contained,
            "spectrum_equal": self.spectrum_equal,
            "absent_lambdas": [[l.real, l.imag] for l in self.absent_lambdas],
            "extra_spectrum": [[z.real, z.imag] for z in self.extra_spectrum],
            "passed": self.passed,
        }


def verify_system(
    sys: IdempotentSystem, b, tol: float = 1e-7, kind: Norm = NORM_INF
) -> VerificationReport:
    """Check reconstruction, annihilation, the interpolation formula, and the
    spectrum conclusion for a candidate system.

    The spectrum clause requires sigma(b) to lie inside the stored points;
    equality is additionally required of every point whose idempotent is
    flagged nonzero.  Failures are reported, never raised.
    """
    m = as_cmatrix(b)
    n = m.shape[0]
    lams = sys.lambdas
    scale = max(1.0, operator_norm(m, kind))

    combo = sum(l * p for l, p in zip(lams, sys.idempotents))
    rec_res = operator_norm(combo - m, kind)
    rec_ok = rec_res <= tol * scale

    prod = identity(n)
    denom = 1.0
    for l in lams:
        prod = prod @ (m - l * identity(n))
        denom *= operator_norm(m, kind) + abs(l)
    ann_res = operator_norm(prod, kind) / denom
    ann_ok = ann_res <= tol

    if len(lams) == 1:
        formula = [identity(n)]
    else:
        formula = list(lagrange_idempotents(m, lams, kind).idempotents)
    lag_scale = max(1.0, max(operator_norm(p, kind) for p in formula))
    lag_res = max(
        operator_norm(p - q, kind) for p, q in zip(sys.idempotents, formula)
    )
    lag_ok = lag_res <= tol * lag_scale

    spect = cluster(eigenvalues(m), default_cluster_tol(m))
    match_tol = max(10.0 * spect.cluster_tol, 1e-7)
    extra = tuple(
        z for z, _ in spect.points if min(abs(z - l) for l in lams) > match_tol
    )
    absent = tuple(
        l for l in lams if min(abs(z - l) for z, _ in spect.points) > match_tol
    )
    contained = not extra
    flagged_absent = [
        l for l, flag in zip(lams, sys.nonzero_flags) if flag and l in absent
    ]
    equal = contained and not flagged_absent

    return VerificationReport(
        reconstruction_ok=rec_ok,
        reconstruction_residual=rec_res,
        annihilation_ok=ann_ok,
        annihilation_residual=ann_res,
        lagrange_match_ok=lag_ok,
        lagrange_match_residual=lag_res,
        spectrum_contained=contained,
        spectrum_equal=equal,
        absent_lambdas=absent,
        extra_spectrum=extra,
        passed=rec_ok and ann_ok and lag_ok and contained and equal,
    )


def _contour_mean(m: np.ndarray, center: complex, radius: float, count: int,
                  spect: SpectrumCluster) -> np.ndarray:
    theta = 2.0 * np.pi * np.arange(count) / count
    nodes = center + radius * np.exp(1j * theta)
    for p, _ in spect.points:
        if np.min(np.abs(nodes - p)) < NODE_EIGEN_CLEARANCE:
            raise ResolventSingular(
                f"quadrature node within {NODE_EIGEN_CLEARANCE:g} of spectrum point {p}"
            )
    n = m.shape[0]
    shifted = nodes[:, None, None] * identity(n)[None, :, :] - m[None, :, :]
    try:
        resolvents = np.linalg.inv(shifted)
    except np.linalg.LinAlgError as exc:
        raise ResolventSingular(f"resolvent inversion failed on the contour: {exc}") from exc
    weights = (radius / count) * np.exp(1j * theta)
    return np.tensordot(weights, resolvents, axes=(0, 0))


def riesz_projection(
    b,
    lam: complex,
    spect: SpectrumCluster,
    nodes: int = QUAD_NODE_DEFAULT,
    radius: Optional[float] = None,
    kind: Norm = NORM_INF,
    idem_tol: float = QUAD_IDEM_TOL,
    node_cap: int = QUAD_NODE_CAP,
) -> np.ndarray:
    """Spectral projection onto the component of an isolated spectrum point.

    Integrates (w I - b)^(-1) counterclockwise over a circle around ``lam``
    whose radius defaults to half the gap to the nearest other spectrum
    point (one half when the point is alone).  Node count doubles until the
    idempotency defect drops below ``idem_tol`` or the cap is hit, in which
    case :class:`QuadratureNotConverged` carries the best candidate.
    """
    m = as_cmatrix(b)
    lam = complex(lam)
    if nodes < 8:
        raise ValueError("need at least 8 quadrature nodes")
    center, dist = spect.nearest(lam)
    if dist > max(10.0 * spect.cluster_tol, 1e-8):
        raise LambdaNotInSpectrum(f"{lam} is not a spectrum point (nearest {center})")
    others = [p for p, _ in spect.points if p != center]
    if radius is None:
        radius = 0.5 * min(abs(center - p) for p in others) if others else 0.5
    if radius <= 0.0:
        raise ValueError("contour radius must be positive")

    count = nodes
    best = None
    best_res = np.inf
    while count <= node_cap:
        q = _contour_mean(m, center, float(radius), count, spect)
        res = operator_norm(q @ q - q, kind)
        if res <= idem_tol:
            return q
        if res < best_res:
            best, best_res = q, res
        count *= 2
    raise QuadratureNotConverged(
        f"idempotency defect {best_res:.3e} above {idem_tol:g} at {node_cap} nodes",
        best=best,
        residual=best_res,
    )


def left_regular(x) -> np.ndarray:
    """Matrix of y -> x y acting on the n^2-dimensional matrix space.

    Matrices are flattened row-major (numpy order), under which the action
    is the Kronecker product of x with the identity; diag(a, b) lifts to
    diag(a, a, b, b).
    """
    m = as_cmatrix(x)
    return np.kron(m, identity(m.shape[0]))


class IsometryProbe(NamedTuple):
    lower: float
    attained_at_e: float


def isometry_probe(x, kind: Norm = NORM_INF, samples: int = 1000, seed: int = 0) -> IsometryProbe:
    """Sandwich check that left multiplication by x has operator norm |x|.

    Samples unit-norm matrices y and records the largest norm of x y (a
    lower bound, never exceeding norm(x) up to rounding); the bound is
    attained at the unit element, whose value is returned alongside.
    """
    m = as_cmatrix(x)
    n = m.shape[0]
    rng = np.random.default_rng(seed)
    best = 0.0
    for _ in range(samples):
        y = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        ny = operator_norm(y, kind)
        if ny == 0.0:
            continue
        best = max(best, operator_norm(m @ (y / ny), kind))
    return IsometryProbe(lower=best, attained_at_e=operator_norm(m @ identity(n), kind))
