"""Polynomial arithmetic over the complex numbers, the extended Euclidean
algorithm with Bezout cofactors, evaluation at matrices, and the
constructive splitting of an annihilated operator's space into kernels of
coprime factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

from .errors import (
    DivisionByZeroPoly,
    IllConditionedGcd,
    NotAnnihilated,
    NotCoprime,
)
from .linalg import as_cmatrix, identity, inf_norm

TRAILING_RTOL = 1e-14
GCD_STOP_RTOL = 1e-10
GCD_LEAD_RTOL = 1e-12


class Poly:
    """Polynomial with complex coefficients in ascending degree order.

    The representation is normalized: trailing coefficients with modulus
    below ``1e-14 * max|coeff|`` are trimmed, and the zero polynomial is the
    empty coefficient tuple.  Instances are immutable.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [complex(c) for c in coeffs]
        top = max((abs(c) for c in cs), default=0.0)
        cut = TRAILING_RTOL * top
        while cs and abs(cs[-1]) <= cut:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def zero(cls) -> "Poly":
        return cls(())

    @classmethod
    def one(cls) -> "Poly":
        return cls((1.0,))

    @classmethod
    def x(cls) -> "Poly":
        return cls((0.0, 1.0))

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls((complex(c),))

    @classmethod
    def from_roots(cls, roots) -> "Poly":
        p = cls.one()
        for r in roots:
            p = p * cls((-complex(r), 1.0))
        return p

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> complex:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self.coeffs), default=0.0)

    def monic(self) -> "Poly":
        return self / self.leading

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if self.is_zero:
            return "Poly(0)"
        terms = ", ".join(f"{c:.6g}" for c in self.coeffs)
        return f"Poly([{terms}])"

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, Poly):
            if self.is_zero or other.is_zero:
                return Poly.zero()
            return Poly(np.convolve(np.array(self.coeffs), np.array(other.coeffs)))
        return Poly(tuple(complex(other) * c for c in self.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "Poly":
        return self * (1.0 / complex(scalar))

    def __divmod__(self, other: "Poly"):
        if not isinstance(other, Poly):
            return NotImplemented
        if other.is_zero:
            raise DivisionByZeroPoly("polynomial division by zero")
        dn, dd = self.degree, other.degree
        if dn < dd:
            return Poly.zero(), self
        lead = other.coeffs[-1]
        rem = list(self.coeffs)
        quo = [0.0 + 0.0j] * (dn - dd + 1)
        for k in range(dn - dd, -1, -1):
            t = rem[dd + k] / lead
            quo[k] = t
            for j in range(dd + 1):
                rem[j + k] -= t * other.coeffs[j]
        return Poly(quo), Poly(rem[:dd])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def evaluate(self, z: complex) -> complex:
        out = 0.0 + 0.0j
        for c in reversed(self.coeffs):
            out = out * z + c
        return out

    def to_json(self) -> dict:
        return {"coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj) -> "Poly":
        try:
            return cls(tuple(complex(c[0], c[1]) for c in obj["coeffs"]))
        except (KeyError, TypeError, IndexError) as exc:
            raise ValueError(f"malformed polynomial JSON: {exc}") from exc


def poly_arith(p: Poly, q: Poly, op: str):
    """Dispatch wrapper over the arithmetic operators.

    ``op`` is one of add, sub, mul, divmod.
    """
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    if op == "divmod":
        return divmod(p, q)
    raise ValueError(f"unknown polynomial operation {op!r}")


def extended_gcd(p1: Poly, p2: Poly):
    """Monic gcd with Bezout cofactors: returns (g, q1, q2) with
    q1*p1 + q2*p2 = g.

    Remainders are treated as zero once their largest coefficient drops
    below ``1e-10 * scale`` where scale is the largest input coefficient.
    Raises :class:`IllConditionedGcd` when a division step would divide by
    a leading coefficient below ``1e-12 * scale``.
    """
    if p1.is_zero and p2.is_zero:
        raise ValueError("gcd of two zero polynomials is undefined")
    scale = max(p1.max_abs_coeff, p2.max_abs_coeff)
    stop = GCD_STOP_RTOL * scale
    lead_floor = GCD_LEAD_RTOL * scale

    r0, r1 = p1, p2
    s0, s1 = Poly.one(), Poly.zero()
    t0, t1 = Poly.zero(), Poly.one()
    while not r1.is_zero and r1.max_abs_coeff > stop:
        if abs(r1.leading) < lead_floor:
            raise IllConditionedGcd(
                f"leading coefficient {abs(r1.leading):.3e} below {lead_floor:.3e}"
            )
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1

    if r0.is_zero or abs(r0.leading) < lead_floor:
        raise IllConditionedGcd("gcd degenerated to numerical zero")
    lead = r0.leading
    return r0 / lead, s0 / lead, t0 / lead


def coprime(p1: Poly, p2: Poly) -> bool:
    """Numerical coprimality: the monic gcd is the constant 1."""
    g, _, _ = extended_gcd(p1, p2)
    return g.degree == 0


def eval_at_matrix(p: Poly, a) -> np.ndarray:
    """Horner evaluation of p at a square matrix; the unit maps to I."""
    m = as_cmatrix(a)
    n = m.shape[0]
    out = np.zeros((n, n), dtype=complex)
    idx = np.diag_indices(n)
    for c in reversed(p.coeffs):
        out = out @ m
        out[idx] += c
    return out


def kernel_dim(a, tol: float = 1e-8) -> int:
    """Kernel dimension as n minus the numerical rank.

    Rank is counted by Gaussian elimination with full pivoting; a pivot
    participates while its magnitude exceeds ``tol * inf_norm(a)``.
    """
    m = as_cmatrix(a).copy()
    n = m.shape[0]
    threshold = tol * inf_norm(m)
    rank = 0
    for k in range(n):
        sub = np.abs(m[k:, k:])
        i, j = np.unravel_index(int(np.argmax(sub)), sub.shape)
        if sub[i, j] <= threshold:
            break
        if i:
            m[[k, k + i]] = m[[k + i, k]]
        if j:
            m[:, [k, k + j]] = m[:, [k + j, k]]
        rank += 1
        m[k + 1:, k:] -= np.outer(m[k + 1:, k] / m[k, k], m[k, k:])
    return n - rank


def scaled_kernel_dim(a, scale: float, tol: float = 1e-8) -> int:
    """Kernel dimension with the pivot floor anchored to an external scale.

    ``kernel_dim`` thresholds pivots relative to the input's own norm,
    which is the right default for a matrix measured on its own terms but
    calls a pure-rounding-noise matrix full rank.  When the input is known
    to be the result of a computation with natural magnitude ``scale``
    (e.g. an annihilating polynomial evaluated at an operator), pass that
    scale here: pivots below ``tol * scale`` are treated as zero.
    """
    m = as_cmatrix(a)
    floor = tol * scale
    nrm = inf_norm(m)
    if nrm <= floor:
        return m.shape[0]
    return kernel_dim(m, tol=floor / nrm)


@dataclass(frozen=True)
class KernelDecomposition:
    """Commuting projectors splitting the space along coprime factors.

    ``projectors[j]`` maps onto the kernel of ``parts[j]`` evaluated at the
    operator; residuals record how far the family is from an exact
    resolution of identity.
    """

    projectors: tuple
    resolution_residual: float
    orthogonality_residual: float
    idempotency_residual: float
    annihilation_residuals: tuple


def _split_projectors(m: np.ndarray, parts) -> list:
    if len(parts) == 1:
        return [identity(m.shape[0])]
    head = parts[:-1]
    head_prod = Poly.one()
    for p in head:
        head_prod = head_prod * p
    g, q1, q2 = extended_gcd(head_prod, parts[-1])
    if g.degree != 0:
        raise NotCoprime("grouped factors share a nonconstant divisor")
    e_last = eval_at_matrix(q1 * head_prod, m)
    onto_head = eval_at_matrix(q2 * parts[-1], m)
    return [sub @ onto_head for sub in _split_projectors(m, head)] + [e_last]


def kernel_decomposition(t, parts, tol: float = 1e-8) -> KernelDecomposition:
    """Projectors realizing ker P(T) as the direct sum of ker P_j(T).

    Requires the parts to be pairwise coprime and their product to
    annihilate T globally (within ``tol`` scaled by the natural norm
    product), so that the projectors are honest global idempotents built
    from Bezout cofactors.  The two-part step produces
    ``E_last = (q1 * head)(T)`` and ``E_head = (q2 * last)(T)``; longer
    lists fold the construction from the left.
    """
    m = as_cmatrix(t)
    parts = list(parts)
    if not parts:
        raise ValueError("need at least one polynomial part")
    if any(p.is_zero for p in parts):
        raise ValueError("zero polynomial cannot be a part")

    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            if not coprime(parts[i], parts[j]):
                raise NotCoprime(f"parts {i} and {j} share a nonconstant divisor")

    product = Poly.one()
    for p in parts:
        product = product * p
    tnorm = inf_norm(m)
    bound = tol * prod(tnorm + p.max_abs_coeff for p in parts)
    residual = inf_norm(eval_at_matrix(product, m))
    if residual > bound:
        raise NotAnnihilated(
            f"product residual {residual:.3e} exceeds bound {bound:.3e}",
            residual=residual,
            bound=bound,
        )

    projectors = _split_projectors(m, parts)
    n = m.shape[0]
    total = sum(projectors)
    resolution = inf_norm(total - identity(n))
    idem = max(inf_norm(e @ e - e) for e in projectors)
    ortho = 0.0
    for i in range(len(projectors)):
        for j in range(len(projectors)):
            if i != j:
                ortho = max(ortho, inf_norm(projectors[i] @ projectors[j]))
    annih = tuple(
        inf_norm(eval_at_matrix(p, m) @ e) for p, e in zip(parts, projectors)
    )
    return KernelDecomposition(
        projectors=tuple(projectors),
        resolution_residual=resolution,
        orthogonality_residual=ortho,
        idempotency_residual=idem,
        annihilation_residuals=annih,
    )
