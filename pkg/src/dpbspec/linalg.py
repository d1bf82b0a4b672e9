"""Dense complex matrix substrate: products, LU inversion, unital
submultiplicative operator norms, and signed power-norm profiles.

Everything operates on square ``complex128`` ndarrays.  All functions are
pure; matrices are never mutated in place.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionMismatch, SingularMatrix

DEFAULT_PIVOT_RTOL = 1e-12
TWO_NORM_ITER_CAP = 10_000
TWO_NORM_RTOL = 1e-12


class PowerIterationWarning(RuntimeWarning):
    """Power iteration hit its cap; the returned value is the best estimate."""


def as_cmatrix(a) -> np.ndarray:
    """Coerce to a square complex matrix, rejecting non-finite entries."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionMismatch(f"expected a nonempty square matrix, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise ValueError("matrix entries must be finite")
    return m


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=complex)


def matmul(a, b) -> np.ndarray:
    ma, mb = as_cmatrix(a), as_cmatrix(b)
    if ma.shape != mb.shape:
        raise DimensionMismatch(f"cannot multiply {ma.shape} by {mb.shape}")
    return ma @ mb


def inf_norm(a) -> float:
    """Induced infinity norm: maximal row absolute sum."""
    m = as_cmatrix(a)
    return float(np.abs(m).sum(axis=1).max())


def one_norm(a) -> float:
    """Induced one norm: maximal column absolute sum."""
    m = as_cmatrix(a)
    return float(np.abs(m).sum(axis=0).max())


def lu_factor(a, tol: float = DEFAULT_PIVOT_RTOL):
    """LU factorization with partial pivoting.

    Returns ``(lu, piv, nswaps)`` with unit-lower L and U packed into ``lu``
    and ``piv`` the row permutation.  Raises :class:`SingularMatrix` when a
    pivot magnitude falls below ``tol * inf_norm(a)``.
    """
    m = as_cmatrix(a)
    n = m.shape[0]
    threshold = tol * inf_norm(m)
    lu = m.copy()
    piv = np.arange(n)
    nswaps = 0
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if abs(lu[p, k]) <= threshold:
            raise SingularMatrix(
                f"pivot {abs(lu[p, k]):.3e} at column {k} below threshold {threshold:.3e}"
            )
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            piv[[k, p]] = piv[[p, k]]
            nswaps += 1
        lu[k + 1:, k] /= lu[k, k]
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, piv, nswaps


def lu_solve(lu, piv, b) -> np.ndarray:
    """Solve A x = b given the packed factorization of A; b may be a matrix."""
    x = np.asarray(b, dtype=complex)[piv].copy()
    n = lu.shape[0]
    for k in range(n - 1):
        x[k + 1:] -= np.outer(lu[k + 1:, k], x[k])
    for k in range(n - 1, -1, -1):
        x[k] -= lu[k, k + 1:] @ x[k + 1:]
        x[k] /= lu[k, k]
    return x


def inverse(a, tol: float = DEFAULT_PIVOT_RTOL) -> np.ndarray:
    """Matrix inverse via partial-pivoted LU; raises :class:`SingularMatrix`."""
    m = as_cmatrix(a)
    lu, piv, _ = lu_factor(m, tol)
    return lu_solve(lu, piv, identity(m.shape[0]))


def inversion_residual(a, x) -> float:
    """Defect ``inf_norm(a @ x - I)`` of a candidate inverse."""
    m = as_cmatrix(a)
    return inf_norm(m @ as_cmatrix(x) - identity(m.shape[0]))


def det(a) -> complex:
    """Determinant from the LU pivots; 0 when elimination finds none."""
    try:
        lu, _, nswaps = lu_factor(a)
    except SingularMatrix:
        return 0.0 + 0.0j
    d = complex(np.prod(np.diag(lu)))
    return -d if nswaps % 2 else d


def smallest_pivot(a) -> float:
    """Smallest pivot magnitude met by partial-pivoted elimination.

    Never raises; a vanishing pivot is reported as 0.0.  Used as a cheap
    near-singularity witness.
    """
    m = as_cmatrix(a).copy()
    n = m.shape[0]
    smallest = np.inf
    for k in range(n):
        p = k + int(np.argmax(np.abs(m[k:, k])))
        mag = abs(m[p, k])
        smallest = min(smallest, mag)
        if mag == 0.0:
            return 0.0
        if p != k:
            m[[k, p]] = m[[p, k]]
        m[k + 1:, k] /= m[k, k]
        m[k + 1:, k + 1:] -= np.outer(m[k + 1:, k], m[k, k + 1:])
    return float(smallest)


def matrix_power(a, k: int, tol: float = DEFAULT_PIVOT_RTOL) -> np.ndarray:
    """a**k for integer k by repeated multiplication; k < 0 inverts first."""
    m = as_cmatrix(a)
    base = inverse(m, tol) if k < 0 else m
    out = identity(m.shape[0])
    for _ in range(abs(k)):
        out = out @ base
    return out


@dataclass(frozen=True, eq=False)
class Norm:
    """Selector for a unital submultiplicative matrix norm.

    ``kind`` is one of ``"one"``, ``"inf"``, ``"two"``, ``"conjugated"``.
    The conjugated variant measures ``base(S^-1 A S)`` for an invertible S;
    its inverse is computed once at construction.
    """

    kind: str
    s: Optional[np.ndarray] = None
    base: Optional["Norm"] = None

    def __post_init__(self):
        if self.kind not in ("one", "inf", "two", "conjugated"):
            raise ValueError(f"unknown norm kind {self.kind!r}")
        if self.kind == "conjugated":
            if self.s is None or self.base is None:
                raise ValueError("conjugated norm needs s and base")
            s = as_cmatrix(self.s)
            object.__setattr__(self, "s", s)
            object.__setattr__(self, "_s_inv", inverse(s))
        else:
            if self.s is not None or self.base is not None:
                raise ValueError(f"norm kind {self.kind!r} takes no parameters")

    @property
    def s_inv(self) -> np.ndarray:
        return getattr(self, "_s_inv")


NORM_ONE = Norm("one")
NORM_INF = Norm("inf")
NORM_TWO = Norm("two")


def conjugated_norm(s, base: Norm = NORM_INF) -> Norm:
    return Norm("conjugated", s=as_cmatrix(s), base=base)


def _two_norm(m: np.ndarray, cap: int = TWO_NORM_ITER_CAP, rtol: float = TWO_NORM_RTOL) -> float:
    """Largest singular value by power iteration on A^H A."""
    n = m.shape[0]
    g = m.conj().T @ m
    rng = np.random.default_rng(0x5EED)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    est = float(np.real(v.conj() @ (g @ v)))
    for _ in range(cap):
        w = g @ v
        nw = float(np.linalg.norm(w))
        if nw == 0.0:
            return 0.0
        v = w / nw
        new_est = float(np.real(v.conj() @ (g @ v)))
        if abs(new_est - est) <= rtol * max(new_est, np.finfo(float).tiny):
            return float(np.sqrt(max(new_est, 0.0)))
        est = new_est
    warnings.warn(
        f"two-norm power iteration did not settle within {cap} iterations",
        PowerIterationWarning,
    )
    return float(np.sqrt(max(est, 0.0)))


def operator_norm(a, kind: Norm = NORM_INF) -> float:
    """Operator norm of ``a`` in the selected unital submultiplicative norm."""
    m = as_cmatrix(a)
    if kind.kind == "one":
        return one_norm(m)
    if kind.kind == "inf":
        return inf_norm(m)
    if kind.kind == "two":
        return _two_norm(m)
    return operator_norm(kind.s_inv @ m @ kind.s, kind.base)


@dataclass(frozen=True)
class PowerNormProfile:
    """Norms of b**n over a symmetric exponent range.

    ``argmax`` is the exponent of the largest norm; ties prefer the larger
    (more positive) exponent.  ``negative_skipped`` marks profiles of
    singular matrices restricted to n >= 0.
    """

    exponents: tuple
    norms: tuple
    max_norm: float
    argmax: int
    negative_skipped: bool

    def as_pairs(self):
        return list(zip(self.exponents, self.norms))

    def norm_at(self, n: int) -> float:
        return self.norms[self.exponents.index(n)]


def power_norm_profile(
    b, big_n: int, kind: Norm = NORM_INF, *, allow_singular: bool = False
) -> PowerNormProfile:
    """Norms of b**n for n in [-big_n, big_n] by iterated products.

    Raises :class:`SingularMatrix` for negative powers of a singular b
    unless ``allow_singular`` is set, in which case only n >= 0 is computed
    and the profile is flagged.
    """
    m = as_cmatrix(b)
    if big_n < 0:
        raise ValueError("power range must be nonnegative")
    n_dim = m.shape[0]
    skipped = False
    try:
        m_inv = inverse(m)
    except SingularMatrix:
        if not allow_singular:
            raise
        m_inv = None
        skipped = True

    pos = {}
    cur = identity(n_dim)
    for n in range(0, big_n + 1):
        pos[n] = operator_norm(cur, kind)
        cur = cur @ m
    neg = {}
    if m_inv is not None:
        cur = identity(n_dim)
        for n in range(1, big_n + 1):
            cur = cur @ m_inv
            neg[-n] = operator_norm(cur, kind)

    exps = sorted(list(neg) + list(pos))
    norms = [neg.get(n, pos.get(n)) for n in exps]
    best = max(range(len(exps)), key=lambda i: (norms[i], exps[i]))
    return PowerNormProfile(
        exponents=tuple(exps),
        norms=tuple(norms),
        max_norm=norms[best],
        argmax=exps[best],
        negative_skipped=skipped,
    )


# JSON wire format ----------------------------------------------------------
#
# Matrix: {"n": int, "entries": [[[re, im], ...], ...]} row-major.
# Norm:   {"kind": "one" | "inf" | "two"
#                  | {"conjugated": {"s": <matrix>, "base": <norm>}}}


def matrix_to_json(a) -> dict:
    m = as_cmatrix(a)
    return {
        "n": int(m.shape[0]),
        "entries": [[[float(z.real), float(z.imag)] for z in row] for row in m],
    }


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise ValueError("matrix JSON must be an object")
    try:
        n = int(obj["n"])
        entries = obj["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed matrix JSON: {exc}") from exc
    if n < 1 or len(entries) != n or any(len(row) != n for row in entries):
        raise ValueError(f"matrix JSON entry grid is not {n}x{n}")
    try:
        m = np.array(
            [[complex(cell[0], cell[1]) for cell in row] for row in entries],
            dtype=complex,
        )
    except (TypeError, IndexError) as exc:
        raise ValueError(f"malformed matrix entry: {exc}") from exc
    return as_cmatrix(m)


def norm_to_json(kind: Norm) -> dict:
    if kind.kind == "conjugated":
        return {
            "kind": {
                "conjugated": {"s": matrix_to_json(kind.s), "base": norm_to_json(kind.base)}
            }
        }
    return {"kind": kind.kind}


def norm_from_json(obj) -> Norm:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError("norm JSON must be an object with a 'kind' key")
    kind = obj["kind"]
    if isinstance(kind, str):
        if kind not in ("one", "inf", "two"):
            raise ValueError(f"unknown norm kind {kind!r}")
        return Norm(kind)
    if isinstance(kind, dict) and "conjugated" in kind:
        spec = kind["conjugated"]
        return conjugated_norm(matrix_from_json(spec["s"]), norm_from_json(spec["base"]))
    raise ValueError("malformed norm JSON")
