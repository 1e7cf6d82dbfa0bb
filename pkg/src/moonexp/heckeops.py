"""U_N and V_N on q-series, and fitting Gamma_0(1)-invariant series as polynomials in J_1."""

from __future__ import annotations

from dataclasses import dataclass

from .etaforms import j1_series, jn_plus_series
from .qlaurent import PrecisionError, QSeries, poly_eval, series_mul


@dataclass(frozen=True)
class PolyFit:
    poly: tuple[int, ...]  # low degree first
    residual_ok: bool
    residual_window: range


def u_operator(f: QSeries, N: int) -> QSeries:
    """c_n(f | U_N) = c_{nN}(f); precision floor(f.prec / N)."""
    return f.extract(N)


def v_operator(f: QSeries, N: int) -> QSeries:
    """q -> q^N; precision N * f.prec."""
    return f.dilate(N)


def u_power(f: QSeries, N: int, k: int) -> QSeries:
    for _ in range(k):
        f = u_operator(f, N)
    return f


def fit_polynomial_in_j1(f: QSeries, check_window: range) -> PolyFit:
    """Find P in Z[x] agreeing with f on exponents [lo, 0] as P(J_1), then check the rest.

    Degree of P is the pole order of f.  The residual f - P(J_1) is
    compared to zero on ``check_window`` (positive exponents); a mismatch
    is reported through ``residual_ok`` rather than raised.
    """
    if f.prec <= 0:
        raise PrecisionError("insufficient precision to determine the polynomial")
    end = max(check_window, default=0)
    if end >= f.prec:
        raise PrecisionError(f"check window reaches q^{end}, series known below q^{f.prec}")
    deg = max(0, -f.lo) if not f.is_zero else 0
    J = j1_series(end + deg + 2)
    powers = [QSeries.constant(1, J.prec + deg)]
    for _ in range(deg):
        powers.append(series_mul(powers[-1], J))
    poly = [0] * (deg + 1)
    R = f
    for k in range(deg, -1, -1):
        c = R[-k]
        if c:
            poly[k] = c
            R = R - powers[k].scale(c)
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    residual = f - poly_eval(poly, J)
    ok = all(residual[n] == 0 for n in check_window)
    return PolyFit(tuple(poly), ok, check_window)


def level_lowering_residual(p: int, n_coeffs: int) -> QSeries:
    """J_1 - J_{p+} - p J_{p+} | U_p on q^{-1} .. q^{n_coeffs}; identically zero when Gamma_0(p)+ has genus zero."""
    prec = p * (n_coeffs + 1)
    jp = jn_plus_series(p, prec)
    res = j1_series(prec) - jp - u_operator(jp, p).scale(p)
    return res.truncate(n_coeffs + 1)


def is_constant_on(f: QSeries, window: range) -> bool:
    """True iff c_n(f) = 0 for every nonzero n in the window and below it."""
    if f.lo < 0 and not f.is_zero:
        return False
    return all(f[n] == 0 for n in window if n != 0)
