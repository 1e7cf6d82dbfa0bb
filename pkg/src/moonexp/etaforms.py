"""The named q-series: eta, E4, Delta, J_1, eta quotients t_N, J_N, s_N, J_{N+}.

Also Faber polynomials of J_1.  All constructors take ``prec``, the
exclusive upper exponent of the returned series.  Expensive building
blocks are memoised at the largest precision requested so far.
"""

from __future__ import annotations

import threading
from math import isqrt
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .arith import ceil_div, is_square, prime_or_prime_square
from .errors import ConsistencyError
from .qlaurent import QSeries, poly_eval, series_inv, series_mul


@dataclass(frozen=True)
class EtaParams:
    N: int
    d: int
    n: int


@dataclass(frozen=True)
class FaberPoly:
    m: int
    coeffs: tuple[int, ...]  # low degree first, monic of degree m


class _PrecCache:
    """Keeps the highest-precision series built per key; serves truncations."""

    def __init__(self):
        self._lock = threading.Lock()
        self._store: dict = {}

    def get(self, key, prec: int, build: Callable[[int], QSeries]) -> QSeries:
        with self._lock:
            hit = self._store.get(key)
        if hit is not None and hit.prec >= prec:
            return hit.truncate(prec)
        s = build(prec)
        with self._lock:
            cur = self._store.get(key)
            if cur is None or cur.prec < s.prec:
                self._store[key] = s
        return s

    def clear(self):
        with self._lock:
            self._store.clear()


_cache = _PrecCache()


def clear_caches() -> None:
    _cache.clear()


def eta_quotient_params(N: int) -> EtaParams:
    """Least d > 0 with 24 | d(N-1) and N^d a square; n = d(N-1)/24."""
    if N < 2:
        raise ValueError("level must be at least 2")
    d = 1
    while (d * (N - 1)) % 24 or not (d % 2 == 0 or is_square(N)):
        d += 1
    return EtaParams(N, d, d * (N - 1) // 24)


def eta_unit_series(prec: int) -> QSeries:
    """prod_{n>0} (1 - q^n) to O(q^prec), by Euler's pentagonal theorem."""
    if prec < 1:
        raise ValueError("prec must be positive")

    def build(prec):
        c = [0] * prec
        k = 0
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 >= prec:
                break
            sign = -1 if k % 2 else 1
            c[g1] += sign
            g2 = k * (3 * k + 1) // 2
            if k and g2 < prec:
                c[g2] += sign
            k += 1
        return QSeries.make(0, c, prec)

    return _cache.get("eta", prec, build)


def _eta_power(d: int, prec: int) -> QSeries:
    return _cache.get(("eta^", d), prec, lambda m: eta_unit_series(m) ** d)


def _sigma3(n: int) -> np.ndarray:
    s = np.zeros(n, dtype=np.int64)
    for d in range(1, n):
        s[d::d] += d ** 3
    return s


def e4_series(prec: int) -> QSeries:
    """E_4 = 1 + 240 sum sigma_3(n) q^n."""
    sig = _sigma3(prec)
    c = [240 * int(x) for x in sig]
    c[0] = 1
    return QSeries.make(0, c, prec)


def delta_series(prec: int) -> QSeries:
    """Delta = q prod (1 - q^n)^24."""
    return _eta_power(24, max(prec - 1, 1)).shift(1).truncate(prec)


def _build_j1(prec: int) -> QSeries:
    m = prec + 1
    e24 = _eta_power(24, m)
    e4 = e4_series(m)
    e4cube = e4 * e4 * e4
    jq = series_mul(e4cube, series_inv(e24))
    if series_mul(jq, e24) != e4cube:
        raise ConsistencyError("Delta * j != E4^3")
    return jq.shift(-1) - 744


def j1_series(prec: int) -> QSeries:
    """J_1 = j - 744 = q^{-1} + 196884 q + ..., from E_4^3 / Delta."""
    if prec < 1:
        raise ValueError("prec must be positive")
    return _cache.get("J1", prec, _build_j1)


def tn_series(N: int, prec: int) -> QSeries:
    """t_N = eta(tau)^d / eta(N tau)^d = q^{-n} prod (1-q^k)^d / (1-q^{Nk})^d."""
    ep = eta_quotient_params(N)
    m = prec + ep.n
    if m < 1:
        return QSeries.zero(prec)

    def build(m):
        num = _eta_power(ep.d, m)
        den = series_inv(_eta_power(ep.d, ceil_div(m, N))).dilate(N).truncate(m)
        return series_mul(num, den)

    return _cache.get(("t", N), m, build).shift(-ep.n)


def _genus_zero_level(N: int) -> bool:
    return 24 % (N - 1) == 0


def hauptmodul_jn(N: int, prec: int) -> QSeries:
    """Normalised Hauptmodul J_N for Gamma_0(N), N = p or p^2; zero if genus > 0."""
    if prime_or_prime_square(N) is None:
        raise ValueError(f"level {N} is not a prime or a prime square")
    if not _genus_zero_level(N):
        return QSeries.zero(prec)
    ep = eta_quotient_params(N)
    t = tn_series(N, prec)
    if t[0] != -ep.d:
        raise ConsistencyError(f"c_0(t_{N}) = {t[0]}, expected {-ep.d}")
    return t + ep.d


def sn_series(N: int, prec: int) -> QSeries:
    """s_N = t_N | W_N = N^{d/2} / t_N."""
    ep = eta_quotient_params(N)
    t = tn_series(N, max(prec - 2 * ep.n, 1 - ep.n))
    root = isqrt(N ** ep.d)
    if root * root != N ** ep.d:
        raise ConsistencyError(f"{N}^{ep.d} is not a square")
    s = series_inv(t).scale(root)
    return s.truncate(prec) if s.prec > prec else s


def jn_plus_series(N: int, prec: int) -> QSeries:
    """J_{N+} = J_N + s_N, the normalised Hauptmodul for Gamma_0(N)+ when N-1 | 24."""
    ep = eta_quotient_params(N)
    if ep.n != 1:
        raise ValueError(f"construction not a Hauptmodul at this level (n_{N} = {ep.n})")
    return tn_series(N, prec) + ep.d + sn_series(N, prec)


def faber_poly(m: int, prec: int | None = None) -> FaberPoly:
    """Monic Phi_m in Z[x] with Phi_m(J_1) = q^{-m} + O(q).

    Eliminates the coefficients of q^{-m+1}, ..., q^0 of J_1^m using
    lower powers of J_1; every pivot is 1.
    """
    if m < 1:
        raise ValueError("Faber index must be positive")
    if prec is None:
        prec = m + 2
    if prec < m + 2:
        raise ValueError("prec must be at least m + 2")
    J = j1_series(prec)
    powers = [QSeries.constant(1, prec)]
    for _ in range(m):
        powers.append(series_mul(powers[-1], J))
    poly = [0] * (m + 1)
    poly[m] = 1
    R = powers[m]
    for k in range(m - 1, -1, -1):
        c = R[-k]
        if c:
            poly[k] -= c
            R = R - powers[k].scale(c)
    fp = FaberPoly(m, tuple(poly))
    chk = poly_eval(fp.coeffs, J)
    if chk.coeff_list(-m, 1) != [1] + [0] * m:
        raise ConsistencyError(f"Faber elimination failed for m = {m}")
    return fp
