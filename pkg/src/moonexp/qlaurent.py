"""Truncated Laurent series in q with exact integer coefficients.

A :class:`QSeries` knows its coefficients on the window ``[lo, prec)``;
everything below ``lo`` is exactly zero and everything from ``prec`` on is
unknown.  Reading an unknown coefficient raises :class:`PrecisionError`,
so no computation can ever be fed fabricated zeros.

Products use Kronecker substitution (pack into one big integer, multiply
with GMP, unpack) above a small size threshold, and schoolbook
convolution below it.  Both are bit-exact; the test-suite cross-checks
them on random inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

try:
    import gmpy2

    _mpz = gmpy2.mpz
except ImportError:  # pragma: no cover
    gmpy2 = None
    _mpz = int


class PrecisionError(ValueError):
    """A requested coefficient lies beyond the known precision."""


class NotInvertibleError(ArithmeticError):
    pass


class _Infinite:
    """Valuation of a window on which every coefficient vanishes."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITE"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("INFINITE")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True


INFINITE = _Infinite()


@dataclass(frozen=True)
class Valuation:
    value: int | _Infinite
    attained_at: int | None = None

    @property
    def is_infinite(self) -> bool:
        return self.value is INFINITE

    def __int__(self):
        if self.is_infinite:
            raise ValueError("infinite valuation has no integer value")
        return self.value


def padic_val(n: int, p: int) -> int | _Infinite:
    """v_p(n) for an integer n; INFINITE for n = 0."""
    if n == 0:
        return INFINITE
    if gmpy2 is not None:
        return int(gmpy2.remove(_mpz(n), p)[1])
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# ------------------------------------------------------------ multiplication

_KRONECKER_MIN = 24


def _mul_school(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    if len(a) > len(b):
        a, b = b, a
    out = [0] * n
    lb = len(b)
    for i, x in enumerate(a):
        if i >= n:
            break
        if not x:
            continue
        for j in range(min(lb, n - i)):
            out[i + j] += x * b[j]
    return out


def _pack(c: Sequence[int], kb: int) -> int:
    pos = b"".join((x if x > 0 else 0).to_bytes(kb, "little") for x in c)
    neg = b"".join((-x if x < 0 else 0).to_bytes(kb, "little") for x in c)
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def _mul_kronecker(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    ba = max(abs(x).bit_length() for x in a)
    bb = max(abs(x).bit_length() for x in b)
    if ba == 0 or bb == 0:
        return [0] * n
    a = a[:n]
    b = b[:n]
    kb = (ba + bb + min(len(a), len(b)).bit_length() + 2 + 7) // 8
    k = 8 * kb
    z = int(_mpz(_pack(a, kb)) * _mpz(_pack(b, kb)))
    length = min(n, len(a) + len(b) - 1)
    half = 1 << (k - 1)
    # offset every slot by 2^(k-1) so all digits are non-negative
    offset = int.from_bytes(half.to_bytes(kb, "little") * (len(a) + len(b) - 1), "little")
    raw = (z + offset).to_bytes(kb * (len(a) + len(b)), "little")
    out = [int.from_bytes(raw[i * kb:(i + 1) * kb], "little") - half for i in range(length)]
    out.extend([0] * (n - length))
    return out


def mul_coeffs(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    """First ``n`` coefficients of the product of two coefficient lists."""
    if n <= 0 or not a or not b:
        return [0] * max(n, 0)
    if min(len(a), len(b), n) < _KRONECKER_MIN:
        return _mul_school(a, b, n)
    return _mul_kronecker(a, b, n)


def _inv_coeffs(u: Sequence[int], n: int) -> list[int]:
    """Power-series inverse of u (u[0] = +-1) to n terms, Newton iteration."""
    u0 = u[0]
    g = [u0]
    k = 1
    while k < n:
        k2 = min(2 * k, n)
        e = mul_coeffs(u[:k2], g, k2)
        # g <- g + g (1 - u g)
        e = [-x for x in e]
        e[0] += 1
        corr = mul_coeffs(g, e, k2)
        g = [x + y for x, y in zip(g + [0] * (k2 - k), corr)]
        k = k2
    return g


# ------------------------------------------------------------------ series


@dataclass(frozen=True)
class QSeries:
    """sum_{n >= lo} c_n q^n, known exactly for n < prec.

    Canonical: ``coeffs[0] != 0`` unless the window is entirely zero, in
    which case ``coeffs == ()`` and ``lo == prec``.
    """

    lo: int
    coeffs: tuple[int, ...]
    prec: int

    def __post_init__(self):
        if self.coeffs:
            if len(self.coeffs) != self.prec - self.lo:
                raise ValueError("coeffs length must equal prec - lo")
            if self.coeffs[0] == 0:
                raise ValueError("non-canonical QSeries; use QSeries.make")
        elif self.lo != self.prec:
            raise ValueError("zero series must have lo == prec")

    @classmethod
    def make(cls, lo: int, coeffs: Iterable[int], prec: int | None = None) -> QSeries:
        c = [int(x) for x in coeffs]
        if prec is None:
            prec = lo + len(c)
        if len(c) > prec - lo:
            c = c[: max(prec - lo, 0)]
        elif len(c) < prec - lo:
            c.extend([0] * (prec - lo - len(c)))
        i = 0
        while i < len(c) and c[i] == 0:
            i += 1
        if i == len(c):
            return cls(prec, (), prec)
        return cls(lo + i, tuple(c[i:]), prec)

    @classmethod
    def zero(cls, prec: int) -> QSeries:
        return cls(prec, (), prec)

    @classmethod
    def monomial(cls, k: int, prec: int, c: int = 1) -> QSeries:
        if k >= prec:
            return cls.zero(prec)
        return cls.make(k, [c], prec)

    @classmethod
    def constant(cls, c: int, prec: int) -> QSeries:
        return cls.monomial(0, prec, c)

    # -- access --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, n: int) -> int:
        if n >= self.prec:
            raise PrecisionError(f"coefficient q^{n} unknown (prec {self.prec})")
        if n < self.lo:
            return 0
        return self.coeffs[n - self.lo]

    def coeff_list(self, start: int, stop: int) -> list[int]:
        """Coefficients of q^start .. q^(stop-1)."""
        if stop > self.prec:
            raise PrecisionError(f"coefficient q^{stop - 1} unknown (prec {self.prec})")
        if not self.coeffs:
            return [0] * max(stop - start, 0)
        head = [0] * max(0, min(self.lo, stop) - start)
        i0 = max(start, self.lo) - self.lo
        i1 = stop - self.lo
        return head + list(self.coeffs[i0:i1]) if i1 > i0 else head

    def truncate(self, prec: int) -> QSeries:
        if prec > self.prec:
            raise PrecisionError(f"cannot raise precision {self.prec} -> {prec}")
        if not self.coeffs or prec <= self.lo:
            return QSeries.zero(prec)
        return QSeries.make(self.lo, self.coeffs[: prec - self.lo], prec)

    def shift(self, k: int) -> QSeries:
        """Multiply by q^k."""
        return QSeries(self.lo + k, self.coeffs, self.prec + k)

    def dilate(self, n: int) -> QSeries:
        """Substitute q -> q^n."""
        if n < 1:
            raise ValueError("dilation factor must be positive")
        if not self.coeffs:
            return QSeries.zero(n * self.prec)
        c = [0] * (n * len(self.coeffs))
        c[::n] = self.coeffs
        return QSeries.make(n * self.lo, c, n * self.prec)

    def extract(self, n: int) -> QSeries:
        """sum_k c_{kn} q^k, known for k < floor(prec / n)."""
        if n < 1:
            raise ValueError("extraction step must be positive")
        prec = self.prec // n
        if not self.coeffs:
            return QSeries.zero(prec)
        lo = -(-self.lo // n)
        if lo >= prec:
            return QSeries.zero(prec)
        start = lo * n - self.lo
        return QSeries.make(lo, self.coeffs[start::n][: prec - lo], prec)

    # -- arithmetic ----------------------------------------------------

    def __neg__(self):
        return QSeries(self.lo, tuple(-x for x in self.coeffs), self.prec)

    def __add__(self, other):
        if isinstance(other, int):
            other = QSeries.constant(other, max(self.prec, 1))
        if not isinstance(other, QSeries):
            return NotImplemented
        prec = min(self.prec, other.prec)
        lo = min(self.lo, other.lo, prec)
        a = self.coeff_list(lo, prec)
        b = other.coeff_list(lo, prec)
        return QSeries.make(lo, [x + y for x, y in zip(a, b)], prec)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            return self + (-other)
        if not isinstance(other, QSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: int) -> QSeries:
        if c == 0:
            return QSeries.zero(self.prec)
        return QSeries(self.lo, tuple(c * x for x in self.coeffs), self.prec)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        return series_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> QSeries:
        if e < 0:
            return series_inv(self) ** (-e)
        result = None
        base = self
        while e:
            if e & 1:
                result = base if result is None else series_mul(result, base)
            e >>= 1
            if e:
                base = series_mul(base, base)
        if result is None:
            return QSeries.constant(1, self.prec - self.lo)
        return result

    def __repr__(self):
        if not self.coeffs:
            return f"O(q^{self.prec})"
        terms = []
        for i, c in enumerate(self.coeffs[:6]):
            if c:
                terms.append(f"{c}*q^{self.lo + i}")
        return " + ".join(terms) + f" + ... + O(q^{self.prec})"


def series_mul(f: QSeries, g: QSeries) -> QSeries:
    """Product; precision min(f.prec + g.lo, g.prec + f.lo)."""
    prec = min(f.prec + g.lo, g.prec + f.lo)
    if f.is_zero or g.is_zero:
        return QSeries.zero(prec)
    lo = f.lo + g.lo
    n = prec - lo
    return QSeries.make(lo, mul_coeffs(f.coeffs, g.coeffs, n), prec)


def series_inv(f: QSeries) -> QSeries:
    """Inverse of a series whose leading coefficient is +-1."""
    if f.is_zero or f.coeffs[0] not in (1, -1):
        raise NotInvertibleError("not invertible over the integers")
    n = f.prec - f.lo
    g = _inv_coeffs(f.coeffs, n)
    return QSeries.make(-f.lo, g, -f.lo + n)


def poly_eval(poly: Sequence[int], f: QSeries) -> QSeries:
    """Horner evaluation of sum poly[i] x^i at x = f (low degree first)."""
    poly = list(poly)
    while poly and poly[-1] == 0:
        poly.pop()
    if not poly:
        return QSeries.zero(f.prec)
    if len(poly) == 1:
        return QSeries.constant(poly[0], max(f.prec, 1))
    r = f.scale(poly[-1]) + poly[-2]
    for c in reversed(poly[:-2]):
        r = series_mul(r, f) + c
    return r


def vp_min(f: QSeries, p: int, window: tuple[int, int]) -> Valuation:
    """Minimum p-adic valuation of c_n(f) for start <= n <= end."""
    start, end = window
    if end >= f.prec:
        raise PrecisionError(f"insufficient precision: window ends at {end}, prec {f.prec}")
    best = INFINITE
    where = None
    for n, c in zip(range(max(start, f.lo), end + 1), f.coeff_list(max(start, f.lo), end + 1)):
        if not c:
            continue
        v = padic_val(c, p)
        if v < best:
            best, where = v, n
            if v == 0:
                break
    return Valuation(best, where)
