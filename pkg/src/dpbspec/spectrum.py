"""Eigenvalues of dense complex matrices and their reduction to a
distinct-point spectrum.

The eigensolver is the classical dense route: unitary reduction to upper
Hessenberg form by Householder reflections, then single-shift QR iteration
with Wilkinson shifts and aggressive deflation.  Eigenvalues come out with
backward-error-level accuracy, which is what the downstream clustering
tolerance assumes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ClusterTooCoarse, NonConvergence
from .linalg import as_cmatrix, inf_norm

DEFAULT_DIM_CAP = 256
_EPS = float(np.finfo(float).eps)


def default_cluster_tol(a) -> float:
    """Clustering tolerance leaving headroom over QR backward error."""
    return 1e-8 * max(1.0, inf_norm(a))


def _hessenberg(m: np.ndarray) -> np.ndarray:
    h = m.astype(complex, copy=True)
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1:, k]
        if not np.any(x[1:]):
            continue
        xnorm = float(np.linalg.norm(x))
        if xnorm == 0.0:
            continue
        v = x.copy()
        a0 = v[0]
        phase = a0 / abs(a0) if abs(a0) > 0.0 else 1.0
        v[0] += phase * xnorm
        vnorm = float(np.linalg.norm(v))
        if vnorm == 0.0:
            continue
        v /= vnorm
        # reflector I - 2 v v^H applied from both sides
        h[k + 1:, k:] -= 2.0 * np.outer(v, v.conj() @ h[k + 1:, k:])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ v, v.conj())
        h[k + 2:, k] = 0.0
    return h


def _eig2(a, b, c, d):
    """Both eigenvalues of [[a, b], [c, d]]."""
    mid = 0.5 * (a + d)
    q = np.sqrt(complex(0.25 * (a - d) ** 2 + b * c))
    l1 = mid + q if abs(mid + q) >= abs(mid - q) else mid - q
    if l1 == 0.0:
        return 0.0 + 0.0j, 0.0 + 0.0j
    return l1, (a * d - b * c) / l1


def _wilkinson_shift(a, b, c, d):
    """Eigenvalue of the trailing 2x2 block closer to its bottom entry."""
    l1, l2 = _eig2(a, b, c, d)
    return l1 if abs(l1 - d) <= abs(l2 - d) else l2


def _qr_step(h: np.ndarray, lo: int, hi: int, shift: complex) -> None:
    """One explicit shifted QR sweep on the active window, via Givens."""
    for i in range(lo, hi + 1):
        h[i, i] -= shift
    rots = []
    for j in range(lo, hi):
        f, g = h[j, j], h[j + 1, j]
        r = float(np.hypot(abs(f), abs(g)))
        if r == 0.0:
            c, s = 1.0, 0.0 + 0.0j
        elif abs(f) == 0.0:
            c, s = 0.0, np.conj(g) / r
        else:
            c = abs(f) / r
            s = (f / abs(f)) * np.conj(g) / r
        rots.append((c, s))
        row_j = h[j, j:hi + 1].copy()
        row_j1 = h[j + 1, j:hi + 1]
        h[j, j:hi + 1] = c * row_j + s * row_j1
        h[j + 1, j:hi + 1] = -np.conj(s) * row_j + c * row_j1
    for j in range(lo, hi):
        c, s = rots[j - lo]
        top = min(j + 1, hi) + 1
        col_j = h[lo:top, j].copy()
        col_j1 = h[lo:top, j + 1]
        h[lo:top, j] = c * col_j + np.conj(s) * col_j1
        h[lo:top, j + 1] = -s * col_j + c * col_j1
    for i in range(lo, hi + 1):
        h[i, i] += shift


def eigenvalues(a, dim_cap: int = DEFAULT_DIM_CAP) -> np.ndarray:
    """All eigenvalues of a square complex matrix, as an unordered multiset.

    Raises :class:`NonConvergence` (carrying the partial result) if the QR
    iteration fails to deflate everything within ``100 * n`` sweeps.
    """
    m = as_cmatrix(a)
    n = m.shape[0]
    if n > dim_cap:
        raise ValueError(f"dimension {n} above the configured cap {dim_cap}")
    if n == 1:
        return np.array([complex(m[0, 0])])
    h = _hessenberg(m)
    scale = max(inf_norm(h), _EPS)
    eigs: list[complex] = []
    budget = 100 * n
    sweeps = 0
    stuck = 0
    hi = n - 1
    while hi >= 0:
        for i in range(1, hi + 1):
            d = abs(h[i - 1, i - 1]) + abs(h[i, i])
            if abs(h[i, i - 1]) <= _EPS * (d if d > 0.0 else scale):
                h[i, i - 1] = 0.0
        if hi == 0 or h[hi, hi - 1] == 0.0:
            eigs.append(complex(h[hi, hi]))
            hi -= 1
            stuck = 0
            continue
        if hi == 1 or h[hi - 1, hi - 2] == 0.0:
            l1, l2 = _eig2(h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], h[hi, hi])
            eigs.extend((complex(l1), complex(l2)))
            hi -= 2
            stuck = 0
            continue
        if sweeps >= budget:
            raise NonConvergence(
                f"QR iteration left a {hi + 1}x{hi + 1} block after {budget} sweeps",
                partial=np.array(eigs),
            )
        lo = hi
        while lo > 0 and h[lo, lo - 1] != 0.0:
            lo -= 1
        stuck += 1
        if stuck % 12 == 0:
            # exceptional shift to break symmetric stalls
            shift = h[hi, hi] + 0.75 * abs(h[hi, hi - 1])
        else:
            shift = _wilkinson_shift(
                h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], h[hi, hi]
            )
        _qr_step(h, lo, hi, shift)
        sweeps += 1
    return np.array(eigs)


@dataclass(frozen=True)
class SpectrumCluster:
    """Distinct spectrum points with algebraic multiplicities.

    ``points`` is sorted by (real, imag); multiplicities sum to
    ``source_dim``; distinct representatives are separated by more than
    ``cluster_tol``.
    """

    points: tuple
    cluster_tol: float
    source_dim: int

    def lambdas(self) -> list:
        return [p for p, _ in self.points]

    def multiplicities(self) -> list:
        return [m for _, m in self.points]

    def nearest(self, z: complex):
        """(point, distance) of the representative closest to z."""
        best = min(self.points, key=lambda pm: abs(pm[0] - z))
        return best[0], abs(best[0] - z)

    def to_json(self) -> dict:
        return {
            "points": [
                {"re": float(p.real), "im": float(p.imag), "mult": int(m)}
                for p, m in self.points
            ],
            "tol": float(self.cluster_tol),
        }

    @classmethod
    def from_json(cls, obj) -> "SpectrumCluster":
        try:
            pts = tuple(
                (complex(p["re"], p["im"]), int(p["mult"])) for p in obj["points"]
            )
            tol = float(obj["tol"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed spectrum JSON: {exc}") from exc
        return cls(points=pts, cluster_tol=tol, source_dim=sum(m for _, m in pts))


def cluster(eigs, cluster_tol: float) -> SpectrumCluster:
    """Single-linkage grouping of an eigenvalue multiset.

    Groups are transitive closures of pairwise distance < cluster_tol; each
    group is represented by the mean of its members weighted by occurrence.
    Raises :class:`ClusterTooCoarse` when a group has diameter above
    ``10 * cluster_tol`` or when two representatives end up closer than
    ``cluster_tol`` (the spectrum cannot be resolved at this tolerance).
    """
    vals = np.atleast_1d(np.asarray(eigs, dtype=complex)).ravel()
    if vals.size == 0:
        raise ValueError("cannot cluster an empty eigenvalue multiset")
    if cluster_tol < 0.0:
        raise ValueError("cluster tolerance must be nonnegative")
    k = vals.size
    parent = list(range(k))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(k):
        for j in range(i + 1, k):
            if abs(vals[i] - vals[j]) < cluster_tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj

    groups: dict[int, list[int]] = {}
    for i in range(k):
        groups.setdefault(find(i), []).append(i)

    points = []
    for members in groups.values():
        zs = vals[members]
        diameter = max(
            (abs(zs[i] - zs[j]) for i in range(len(zs)) for j in range(i + 1, len(zs))),
            default=0.0,
        )
        if diameter > 10.0 * cluster_tol:
            raise ClusterTooCoarse(
                f"group diameter {diameter:.3e} exceeds 10x tolerance {cluster_tol:.3e}"
            )
        points.append((complex(zs.mean()), len(members)))

    points.sort(key=lambda pm: (pm[0].real, pm[0].imag))
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if abs(points[i][0] - points[j][0]) <= cluster_tol:
                raise ClusterTooCoarse(
                    "cluster representatives collide at the requested tolerance"
                )
    return SpectrumCluster(points=tuple(points), cluster_tol=float(cluster_tol), source_dim=k)


def on_unit_circle(s: SpectrumCluster, circ_tol: float):
    """Whether every spectrum point has modulus 1 within circ_tol.

    Returns ``(verdict, max_deviation)``.
    """
    dev = max(abs(abs(p) - 1.0) for p, _ in s.points)
    return dev <= circ_tol, float(dev)
