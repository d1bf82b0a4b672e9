"""Two desk-scale commutative Banach algebra models.

* The Wiener algebra: functions on the unit circle with absolutely
  summable Fourier coefficients, norm = l1 coefficient sum, product =
  coefficient convolution.
* The Fourier algebra of a finite cyclic group, realized as l1 of the dual
  group under convolution; the group element x sees the function value
  sum_k c_k exp(2 pi i k x / m).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IndexOutOfRange, NotInvertible

COEFF_PRUNE_TOL = 1e-16
SUPPORT_TOL = 1e-12
VALUE_TOL = 1e-12


class WienerElement:
    """Finitely supported Fourier coefficients indexed over the integers.

    Coefficients with modulus below 1e-16 are dropped; the unit element is
    the constant function 1 (coefficient 1 at index 0).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        cleaned = {}
        for k, v in (coeffs or {}).items():
            z = complex(v)
            if abs(z) >= COEFF_PRUNE_TOL:
                cleaned[int(k)] = z
        object.__setattr__(self, "coeffs", cleaned)

    def __setattr__(self, name, value):
        raise AttributeError("WienerElement is immutable")

    @classmethod
    def unit(cls) -> "WienerElement":
        return cls({0: 1.0})

    @classmethod
    def monomial(cls, n: int, c=1.0) -> "WienerElement":
        return cls({int(n): c})

    @property
    def norm(self) -> float:
        return float(sum(abs(c) for c in self.coeffs.values()))

    def __eq__(self, other):
        return isinstance(other, WienerElement) and self.coeffs == other.coeffs

    def __add__(self, other: "WienerElement") -> "WienerElement":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0.0) + v
        return WienerElement(out)

    def __mul__(self, other):
        if isinstance(other, WienerElement):
            out: dict[int, complex] = {}
            for i, a in self.coeffs.items():
                for j, b in other.coeffs.items():
                    out[i + j] = out.get(i + j, 0.0) + a * b
            return WienerElement(out)
        return WienerElement({k: complex(other) * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def value_at(self, z: complex) -> complex:
        """Function value at a point of the circle."""
        return complex(sum(c * z**k for k, c in self.coeffs.items()))

    def to_json(self) -> dict:
        return {
            "coeffs": {
                str(k): [float(v.real), float(v.imag)]
                for k, v in sorted(self.coeffs.items())
            }
        }

    @classmethod
    def from_json(cls, obj) -> "WienerElement":
        try:
            return cls({int(k): complex(v[0], v[1]) for k, v in obj["coeffs"].items()})
        except (KeyError, TypeError, ValueError, IndexError, AttributeError) as exc:
            raise ValueError(f"malformed Wiener element JSON: {exc}") from exc


def wiener_mul(f: WienerElement, g: WienerElement) -> WienerElement:
    """Coefficient convolution; realizes the pointwise product on the circle."""
    return f * g


@dataclass(frozen=True, eq=False)
class MobiusTruncation:
    """Truncated coefficient expansion of (2z - 1) / (2 - z).

    The full symbol has coefficient -1/2 at zero and (3/2) 2^{-n} at n >= 1,
    so the truncation norm is 2 - (3/2) 2^{-order}, increasing to 2.  The
    symbol maps the circle onto itself; ``max_circle_distance`` samples how
    far the truncated values stray from it.
    """

    order: int
    element: WienerElement
    norm: float
    max_circle_distance: float


def mobius_truncation(order: int, samples: int = 512) -> MobiusTruncation:
    if order < 1:
        raise ValueError("truncation order must be at least 1")
    coeffs = {0: -0.5}
    for n in range(1, order + 1):
        coeffs[n] = 1.5 * 2.0 ** (-n)
    f = WienerElement(coeffs)
    zs = np.exp(2j * np.pi * np.arange(samples) / samples)
    dist = max(abs(abs(f.value_at(z)) - 1.0) for z in zs)
    return MobiusTruncation(
        order=order, element=f, norm=f.norm, max_circle_distance=float(dist)
    )


class CyclicFourierElement:
    """Element of the Fourier algebra of the cyclic group of order m.

    ``coeffs[k]`` weights the k-th character; the norm is the l1 sum of
    coefficients and multiplication is cyclic convolution.
    """

    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs):
        if m < 1:
            raise ValueError("group order must be positive")
        arr = np.asarray(coeffs, dtype=complex)
        if arr.shape != (m,):
            raise ValueError(f"need exactly {m} coefficients, got shape {arr.shape}")
        object.__setattr__(self, "m", int(m))
        object.__setattr__(self, "coeffs", arr.copy())

    def __setattr__(self, name, value):
        raise AttributeError("CyclicFourierElement is immutable")

    @classmethod
    def unit(cls, m: int) -> "CyclicFourierElement":
        c = np.zeros(m, dtype=complex)
        c[0] = 1.0
        return cls(m, c)

    @property
    def norm(self) -> float:
        return float(np.abs(self.coeffs).sum())

    def values(self) -> np.ndarray:
        """Function values on the group elements 0..m-1."""
        x = np.arange(self.m)
        k = np.arange(self.m)
        table = np.exp(2j * np.pi * np.outer(k, x) / self.m)
        return self.coeffs @ table

    def support(self, tol: float = SUPPORT_TOL):
        return [k for k in range(self.m) if abs(self.coeffs[k]) > tol]

    def __eq__(self, other):
        return (
            isinstance(other, CyclicFourierElement)
            and self.m == other.m
            and np.array_equal(self.coeffs, other.coeffs)
        )

    def __mul__(self, other):
        if isinstance(other, CyclicFourierElement):
            if self.m != other.m:
                raise ValueError("group orders differ")
            out = np.zeros(self.m, dtype=complex)
            for i, a in enumerate(self.coeffs):
                if a == 0.0:
                    continue
                for j, b in enumerate(other.coeffs):
                    out[(i + j) % self.m] += a * b
            return CyclicFourierElement(self.m, out)
        return CyclicFourierElement(self.m, complex(other) * self.coeffs)

    __rmul__ = __mul__

    def inverse(self) -> "CyclicFourierElement":
        """Convolution inverse; exact for single-character multiples.

        Raises :class:`NotInvertible` when some function value vanishes.
        """
        sup = self.support()
        if len(sup) == 1:
            k = sup[0]
            c = self.coeffs[k]
            out = np.zeros(self.m, dtype=complex)
            out[(-k) % self.m] = 1.0 / c
            return CyclicFourierElement(self.m, out)
        vals = self.values()
        if np.min(np.abs(vals)) <= VALUE_TOL:
            raise NotInvertible("function value vanishes on the group")
        x = np.arange(self.m)
        k = np.arange(self.m)
        table = np.exp(-2j * np.pi * np.outer(k, x) / self.m)
        return CyclicFourierElement(self.m, (table @ (1.0 / vals)) / self.m)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, obj) -> "CyclicFourierElement":
        try:
            return cls(int(obj["m"]), [complex(c[0], c[1]) for c in obj["coeffs"]])
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise ValueError(f"malformed cyclic element JSON: {exc}") from exc


def cyclic_character(m: int, k: int) -> CyclicFourierElement:
    """The k-th character of the cyclic group of order m, as an algebra
    element of norm exactly one."""
    if not 0 <= k < m:
        raise IndexOutOfRange(f"character index {k} outside [0, {m})")
    c = np.zeros(m, dtype=complex)
    c[k] = 1.0
    return CyclicFourierElement(m, c)


@dataclass(frozen=True)
class CyclicProbeReport:
    """Power-boundedness probe in the cyclic-group model.

    A norm-one element whose integer powers stay at norm one must be a
    unimodular multiple of a single character; ``consistent`` records that
    the sampled evidence agrees.
    """

    m: int
    norm: float
    sup_power_norm: float
    norm_is_one: bool
    powers_bounded: bool
    is_character_multiple: bool
    consistent: bool


def cyclic_dpb_probe(u: CyclicFourierElement, big_n: int = 50) -> CyclicProbeReport:
    """Compute sup of norm(u^n) over |n| <= big_n and compare against the
    character characterization of the norm-one power-bounded elements.

    Raises :class:`NotInvertible` when u has a vanishing function value.
    """
    vals = u.values()
    if np.min(np.abs(vals)) <= VALUE_TOL:
        raise NotInvertible("function value vanishes on the group")
    u_inv = u.inverse()
    sup = 1.0
    cur = CyclicFourierElement.unit(u.m)
    for _ in range(big_n):
        cur = cur * u
        sup = max(sup, cur.norm)
    cur = CyclicFourierElement.unit(u.m)
    for _ in range(big_n):
        cur = cur * u_inv
        sup = max(sup, cur.norm)

    norm_is_one = abs(u.norm - 1.0) <= 1e-9
    powers_bounded = sup <= 1.0 + 1e-9
    sup_coeffs = u.support()
    is_char = bool(
        len(sup_coeffs) == 1 and abs(abs(u.coeffs[sup_coeffs[0]]) - 1.0) <= 1e-9
    )
    consistent = is_char if (norm_is_one and powers_bounded) else True
    return CyclicProbeReport(
        m=u.m,
        norm=u.norm,
        sup_power_norm=float(sup),
        norm_is_one=norm_is_one,
        powers_bounded=powers_bounded,
        is_character_multiple=is_char,
        consistent=consistent,
    )
