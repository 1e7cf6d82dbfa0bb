"""p J_1 | U_p, its p-adic valuation, and the partial-fraction fit

    p J_1 | U_p = - sum_alpha sum_n A_n(alpha) (J_1 - alpha)^{-n}

solved modulo p^K over the supersingular J_1-values alpha in [0, p).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, comb

from .arith import ceil_div
from .congruence import is_genus0_plus
from .errors import ConsistencyError
from .etaforms import faber_poly, j1_series
from .heckeops import u_operator, v_operator
from .qlaurent import INFINITE, PrecisionError, QSeries, Valuation, padic_val, poly_eval, series_inv, series_mul, vp_min
from .supersingular import ss_j_set

MINUS744, C984, OTHER = "-744", "984", "other"
_CLASS_WEIGHT = {MINUS744: 3, C984: 2, OTHER: 1}
EXTRA_EQUATIONS = 10


class FitError(ArithmeticError):
    def __init__(self, msg: str, best_k: int = 0, residual_valuation=None):
        super().__init__(msg)
        self.best_k = best_k
        self.residual_valuation = residual_valuation


def p_j1_up(p: int, prec: int) -> QSeries:
    """p * (J_1 | U_p) to O(q^prec), cross-checked against Phi_p(J_1) - J_1 | V_p."""
    if prec < 1:
        raise ValueError("prec must be positive")
    direct = u_operator(j1_series(p * prec), p).scale(p)
    phi = faber_poly(p)
    via_faber = poly_eval(phi.coeffs, j1_series(prec + p)) - v_operator(j1_series(ceil_div(prec, p)), p)
    via_faber = via_faber.truncate(prec)
    if direct != via_faber:
        raise ConsistencyError(f"p J_1|U_p disagrees with Phi_p(J_1) - J_1|V_p at p={p}")
    return direct


def vp_p_j1_up(p: int, window: int = 60) -> Valuation:
    """Minimum v_p over the first ``window`` coefficients, stable under doubling the window."""
    if not is_genus0_plus(p):
        raise ValueError(f"Gamma_0({p})+ has positive genus")
    f = p_j1_up(p, 2 * window + 1)
    v1 = vp_min(f, p, (1, window))
    v2 = vp_min(f, p, (1, 2 * window))
    if v1.value != v2.value:
        raise PrecisionError(f"precision insufficient: v_{p} changes from {v1.value} to {v2.value} when the window doubles")
    return v1


def residue_class(alpha: int, p: int) -> str:
    alpha %= p
    if alpha % p == (-744) % p:
        return MINUS744
    if alpha % p == 984 % p:
        return C984
    return OTHER


def lower_bound(cls: str, n: int, p: int) -> Fraction:
    """The guaranteed lower bound for v_p(A_n) in the given residue class."""
    return Fraction(_CLASS_WEIGHT[cls] * n * p + 1, p + 1)


@dataclass(frozen=True)
class DeligneFit:
    p: int
    K: int
    nmax: int
    lifts: dict  # J_1-value alpha (mod p) -> integer lift, canonically alpha itself
    A: dict = field(hash=False)  # (lift, n) -> residue mod p^K
    residual_valuation: Valuation = None
    window: range = None

    @property
    def modulus(self) -> int:
        return self.p ** self.K

    def classes(self) -> dict:
        return {a: residue_class(a, self.p) for a in self.lifts.values()}

    def valuation(self, lift: int, n: int):
        """v_p(A_n(lift)); INFINITE stands for 'at least K'."""
        return padic_val(self.A[(lift, n)], self.p)

    def a1_valuations(self) -> dict:
        return {a: self.valuation(a, 1) for a in sorted(self.lifts.values())}

    def coefficients(self, lift: int) -> list[int]:
        return [self.A[(lift, n)] for n in range(1, self.nmax + 1)]

    def bounds_ok(self) -> bool:
        """The lower bounds hold for every fitted A_n at the canonical lifts."""
        return all(_meets_bounds(self.coefficients(a), residue_class(a, self.p), self.p, self.K) for a in self.lifts.values())

    def bound_lifts(self) -> dict | None:
        """Per class, the first lift alpha + p*delta (0 <= delta < p) whose
        re-expanded coefficients meet the lower bounds mod p^K; None if some
        class has no such lift."""
        p, m = self.p, self.modulus
        out = {}
        for a in sorted(self.lifts.values()):
            cls = residue_class(a, p)
            for delta in range(p):
                A = relift(self.coefficients(a), p * delta, m)
                if _meets_bounds(A, cls, p, self.K):
                    out[a % p] = a + p * delta
                    break
            else:
                return None
        return out

    def signed(self, lift: int, n: int) -> int:
        """A_n(lift) as the representative of least absolute value."""
        m = self.modulus
        x = self.A[(lift, n)] % m
        return x - m if x > m // 2 else x


def relift(A: list[int], eps: int, modulus: int) -> list[int]:
    """Coefficients with respect to alpha + eps, given those for alpha.

    From (X + eps)^{-n} = sum_k C(-n, k) eps^k X^{-n-k} with X = J_1 - alpha - eps.
    """
    out = []
    for m in range(1, len(A) + 1):
        tot = 0
        for n in range(1, m + 1):
            k = m - n
            tot += A[n - 1] * (-1) ** k * comb(n + k - 1, k) * eps**k
        out.append(tot % modulus)
    return out


def _meets_bounds(A: list[int], cls: str, p: int, K: int) -> bool:
    for n, x in enumerate(A, start=1):
        b = lower_bound(cls, n, p)
        if b < K and padic_val(x, p) < b:
            return False
    return True


def _basis(lifts: list[int], nmax: int, n_coeffs: int) -> dict:
    """q^1..q^n_coeffs coefficients of (J_1 - lift)^{-n}."""
    J = j1_series(n_coeffs + 1)
    out = {}
    for a in lifts:
        inv = series_inv(J - a)
        pw = inv
        for n in range(1, nmax + 1):
            out[(a, n)] = pw.coeff_list(1, n_coeffs + 1)
            if n < nmax:
                pw = series_mul(pw, inv)
    return out


def _solve_mod(matrix: list[list[int]], rhs: list[int], p: int, K: int) -> list[int] | None:
    """Solve matrix x = rhs over Z/p^K, pivoting on minimal p-adic valuation.

    Returns None when the extra equations are inconsistent; raises
    FitError when a column has no unit pivot (rank deficient mod p).
    """
    m = p ** K
    rows = [[x % m for x in r] + [b % m] for r, b in zip(matrix, rhs)]
    ncols = len(matrix[0])
    r = 0
    for col in range(ncols):
        best, best_v = None, None
        for i in range(r, len(rows)):
            v = padic_val(rows[i][col], p)
            if best_v is None or v < best_v:
                best, best_v = i, v
        if best_v is None or best_v is INFINITE or best_v > 0:
            raise FitError(f"no unit pivot in column {col} modulo {p}")
        rows[r], rows[best] = rows[best], rows[r]
        inv = pow(rows[r][col], -1, m)
        rows[r] = [(x * inv) % m for x in rows[r]]
        piv = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                c = rows[i][col]
                rows[i] = [(x - c * y) % m for x, y in zip(rows[i], piv)]
        r += 1
    if any(rows[i][ncols] for i in range(r, len(rows))):
        return None
    return [rows[i][ncols] for i in range(ncols)]


def fit_partial_fractions(p: int, K: int = 4, nmax: int | None = None, lifts: dict | None = None) -> DeligneFit:
    """Fit A_n(alpha) mod p^K, n <= nmax, from the q^1..q^M coefficients of p J_1|U_p.

    M = (#alpha) * nmax + EXTRA_EQUATIONS, so the system is overdetermined;
    the surplus equations must hold as well.  On failure the largest K
    that does fit is reported in the raised :class:`FitError`.
    ``lifts`` overrides the canonical lifts in [0, p) for chosen residues.
    """
    if p <= 3 or not is_genus0_plus(p):
        raise ValueError(f"partial-fraction fit needs a genus-zero-plus prime p > 3, got {p}")
    if K < 2:
        raise ValueError("K must be at least 2")
    if nmax is None:
        nmax = K + 2
    if nmax < K + 2:
        raise ValueError("nmax must be at least K + 2")
    data = ss_j_set(p)
    chosen = dict(lifts or {})
    lifts = {alpha: chosen.pop(alpha, alpha) for alpha in data.j1_values()}
    if chosen:
        raise ValueError(f"not supersingular J_1-values mod {p}: {sorted(chosen)}")
    if any(lift % p != alpha for alpha, lift in lifts.items()):
        raise ValueError("each lift must reduce to its J_1-value mod p")
    keys = [(a, n) for a in sorted(lifts.values()) for n in range(1, nmax + 1)]
    M = len(keys) + EXTRA_EQUATIONS
    target = [-c for c in p_j1_up(p, M + 1).coeff_list(1, M + 1)]
    basis = _basis(sorted(lifts.values()), nmax, M)
    matrix = [[basis[k][i] for k in keys] for i in range(M)]

    sol = _solve_mod(matrix, target, p, K)
    if sol is None:
        best = 0
        for k in range(K - 1, 0, -1):
            if _solve_mod(matrix, target, p, k) is not None:
                best = k
                break
        raise FitError(f"system inconsistent modulo {p}^{K} (fits up to {p}^{best})", best_k=best)
    A = dict(zip(keys, sol))
    residual = [t - sum(A[k] * basis[k][i] for k in keys) for i, t in enumerate(target)]
    rv = vp_min(QSeries.make(1, residual, M + 1), p, (1, M))
    fit = DeligneFit(p, K, nmax, lifts, A, rv, range(1, M + 1))
    if rv.value < K:
        raise FitError(f"residual valuation {rv.value} < {K} at p={p}", best_k=rv.value, residual_valuation=rv)
    return fit


@dataclass(frozen=True)
class A1Check:
    lift: int
    cls: str
    valuation: object
    expected: int

    @property
    def ok(self) -> bool:
        return self.valuation == self.expected


def check_a1_valuations(p: int, K: int = 4, fit: DeligneFit | None = None) -> list[A1Check]:
    """Fitted v_p(A_1) per supersingular class against the sharp values 3 / 2 / 1."""
    fit = fit or fit_partial_fractions(p, K)
    out = []
    for a, v in fit.a1_valuations().items():
        cls = residue_class(a, p)
        out.append(A1Check(a, cls, v, _CLASS_WEIGHT[cls]))
    return out


def _truncated_residual(fit: DeligneFit, terms: list[tuple[int, int]]) -> Valuation:
    p = fit.p
    M = fit.window.stop - 1
    basis = _basis(sorted(fit.lifts.values()), max((n for _, n in terms), default=1), M)
    f = p_j1_up(p, M + 1).coeff_list(1, M + 1)
    res = [c + sum(fit.signed(a, n) * basis[(a, n)][i] for a, n in terms) for i, c in enumerate(f)]
    return vp_min(QSeries.make(1, res, M + 1), p, (1, M))


def first_order_residual(fit: DeligneFit) -> Valuation:
    """v_p of p J_1|U_p + sum over 'other' alpha of A_1 (J_1 - alpha)^{-1}; expected >= 2."""
    terms = [(a, 1) for a in fit.lifts.values() if residue_class(a, fit.p) == OTHER]
    return _truncated_residual(fit, terms)


def second_order_residual(fit: DeligneFit) -> Valuation:
    """As :func:`first_order_residual` plus the 984 term at n = 1 and 'other' terms at n = 2; expected >= 3."""
    terms = []
    for a in fit.lifts.values():
        cls = residue_class(a, fit.p)
        if cls == OTHER:
            terms += [(a, 1), (a, 2)]
        elif cls == C984:
            terms.append((a, 1))
    return _truncated_residual(fit, terms)


def bound_ceil(cls: str, n: int, p: int) -> int:
    return ceil(lower_bound(cls, n, p))
