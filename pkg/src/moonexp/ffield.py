"""Arithmetic in F_p and F_{p^2}, exhaustive root finding, point counting.

F_{p^2} is realised as F_p[t]/(t^2 - s) with s the smallest positive
quadratic non-residue mod p, so the representation is deterministic.
Only odd p are supported.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels

MAX_EXHAUSTIVE_P = 1000


@lru_cache(maxsize=None)
def nonresidue(p: int) -> int:
    """Smallest positive quadratic non-residue modulo an odd prime p."""
    if p < 3 or p % 2 == 0:
        raise ValueError("F_{p^2} model needs an odd prime p")
    for s in range(2, p):
        if pow(s, (p - 1) // 2, p) == p - 1:
            return s
    raise ValueError(f"{p} is not prime")


@dataclass(frozen=True, order=True)
class Fp2Elem:
    """a + b*t with t^2 = nonresidue(p)."""

    a: int
    b: int
    p: int

    def __post_init__(self):
        if not (0 <= self.a < self.p and 0 <= self.b < self.p):
            raise ValueError("components must be reduced mod p")

    @classmethod
    def of(cls, a: int, b: int, p: int) -> Fp2Elem:
        return cls(a % p, b % p, p)

    @classmethod
    def from_index(cls, e: int, p: int) -> Fp2Elem:
        return cls(e % p, e // p, p)

    @property
    def index(self) -> int:
        return self.a + self.b * self.p

    @property
    def in_fp(self) -> bool:
        return self.b == 0

    def _lift(self, other):
        if isinstance(other, Fp2Elem):
            if other.p != self.p:
                raise ValueError("mixed characteristics")
            return other
        if isinstance(other, (int, np.integer)):
            return Fp2Elem.of(int(other), 0, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Fp2Elem.of(self.a + o.a, self.b + o.b, self.p)

    __radd__ = __add__

    def __neg__(self):
        return Fp2Elem.of(-self.a, -self.b, self.p)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Fp2Elem.of(self.a - o.a, self.b - o.b, self.p)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        p, s = self.p, nonresidue(self.p)
        return Fp2Elem.of(self.a * o.a + s * self.b * o.b, self.a * o.b + self.b * o.a, p)

    __rmul__ = __mul__

    def conj(self) -> Fp2Elem:
        """Frobenius image x^p = a - b*t."""
        return Fp2Elem.of(self.a, -self.b, self.p)

    def norm(self) -> int:
        return (self.a * self.a - nonresidue(self.p) * self.b * self.b) % self.p

    def inverse(self) -> Fp2Elem:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in F_{p^2}")
        ninv = pow(n, -1, self.p)
        c = self.conj()
        return Fp2Elem.of(c.a * ninv, c.b * ninv, self.p)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __pow__(self, e: int):
        return fp2_pow(self, e)

    def __bool__(self):
        return bool(self.a or self.b)

    def __repr__(self):
        if self.b == 0:
            return f"{self.a} (mod {self.p})"
        return f"{self.a}+{self.b}t (mod {self.p})"


def fp2_pow(x: Fp2Elem, e: int) -> Fp2Elem:
    if e < 0:
        return fp2_pow(x.inverse(), -e)
    result = Fp2Elem(1 % x.p, 0, x.p)
    base = x
    while e:
        if e & 1:
            result = result * base
        base = base * base
        e >>= 1
    return result


@dataclass(frozen=True)
class PolyFp:
    """Polynomial over F_p, coefficients low degree first, trailing zeros trimmed."""

    coeffs: tuple[int, ...]
    p: int

    @classmethod
    def make(cls, coeffs, p: int) -> PolyFp:
        c = [int(x) % p for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        return cls(tuple(c), p)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x):
        if not isinstance(x, Fp2Elem):
            x = Fp2Elem.of(int(x), 0, self.p)
        r = Fp2Elem(0, 0, self.p)
        for c in reversed(self.coeffs):
            r = r * x + c
        return r


def poly_roots_in_fp2(P: PolyFp) -> frozenset[Fp2Elem]:
    """All roots of P lying in F_{p^2}, found by evaluating at every element."""
    if P.is_zero:
        raise ValueError("zero polynomial has every element as a root")
    if P.p > MAX_EXHAUSTIVE_P:
        raise ValueError(f"exhaustive search limited to p <= {MAX_EXHAUSTIVE_P}")
    p = P.p
    mask = kernels.roots_mask(np.array(P.coeffs, dtype=np.int64), p, nonresidue(p))
    return frozenset(Fp2Elem.from_index(int(e), p) for e in np.flatnonzero(mask))


def root_multiplicity(P: PolyFp, r: Fp2Elem) -> int:
    """Multiplicity of r as a root of P, by repeated synthetic division."""
    coeffs = [Fp2Elem.of(c, 0, P.p) for c in P.coeffs]
    m = 0
    while len(coeffs) > 1:
        # divide by (x - r); quotient high-to-low, remainder last
        acc = Fp2Elem(0, 0, P.p)
        quot = []
        for c in reversed(coeffs):
            acc = acc * r + c
            quot.append(acc)
        if acc:
            break
        m += 1
        coeffs = list(reversed(quot[:-1]))
    return m


def _as_fp2(x, p: int) -> Fp2Elem:
    return x if isinstance(x, Fp2Elem) else Fp2Elem.of(int(x), 0, p)


def count_affine_points(a, b, field: int) -> int:
    """Affine points of y^2 = x^3 + a x + b over F_q, q = field in {p, p^2}.

    Counts sum over x of (1 + chi(x^3 + a x + b)) with chi the quadratic
    character of F_q (chi(0) = 0 gives the single point y = 0).
    """
    p = a.p if isinstance(a, Fp2Elem) else b.p if isinstance(b, Fp2Elem) else None
    if p is None:
        p = field
    if p <= 3:
        raise ValueError("short Weierstrass model needs p > 3")
    a, b = _as_fp2(a, p), _as_fp2(b, p)
    if not (a * a * a * 4 + b * b * 27):
        raise ValueError("singular Weierstrass model")
    if field == p:
        if not (a.in_fp and b.in_fp):
            raise ValueError("coefficients must lie in F_p to count over F_p")
        return int(kernels.count_affine_fp([a.a], [b.a], p)[0])
    if field == p * p:
        return int(kernels.count_affine_fp2([a.a], [a.b], [b.a], [b.b], p, nonresidue(p))[0])
    raise ValueError("field must be p or p^2")


def curve_for_j(j: Fp2Elem) -> tuple[Fp2Elem, Fp2Elem]:
    """(a, b) of a short Weierstrass curve with j-invariant j (p > 3)."""
    p = j.p
    if not j:
        return Fp2Elem(0, 0, p), Fp2Elem(1, 0, p)
    if j == Fp2Elem.of(1728, 0, p):
        return Fp2Elem(1, 0, p), Fp2Elem(0, 0, p)
    k = 1728 - j
    return 3 * j * k, 2 * j * k * k


def frobenius_trace(j: Fp2Elem) -> tuple[int, int]:
    """(trace, field size) of the model curve_for_j(j) over its field of definition."""
    a, b = curve_for_j(j)
    q = j.p if j.in_fp else j.p * j.p
    n = count_affine_points(a, b, q) + 1
    return q + 1 - n, q
