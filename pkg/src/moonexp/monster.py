"""Both sides of the monster-order valuation formulas, prime by prime.

The right-hand side of the Hauptmodul formula is a sum of three p-adic
valuations of q-series; the automorphism-group formula reads off the
supersingular locus.  :func:`verify_prime` assembles everything into a
:class:`PrimeReport`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Callable

from .arith import is_prime
from .deligne import (
    FitError,
    check_a1_valuations,
    first_order_residual,
    fit_partial_fractions,
    p_j1_up,
    second_order_residual,
    vp_p_j1_up,
)
from .errors import ConsistencyError
from .etaforms import eta_quotient_params, faber_poly, hauptmodul_jn, j1_series, jn_plus_series
from .heckeops import v_operator
from .qlaurent import INFINITE, PrecisionError, QSeries, Valuation, padic_val, poly_eval, series_mul, vp_min
from .supersingular import ss_j1_table, ss_j_set

MONSTER_EXPONENTS = {
    2: 46, 3: 20, 5: 9, 7: 6, 11: 2, 13: 3, 17: 1, 19: 1,
    23: 1, 29: 1, 31: 1, 41: 1, 47: 1, 59: 1, 71: 1,
}

# reference data the computation is checked against
REFERENCE_D_C1 = {
    2: (24, 2**16 * 3),
    3: (12, 2 * 3**9 * 5),
    5: (6, 3**2 * 5**5 * 7),
    7: (4, 2 * 7**4 * 41),
    13: (2, 5 * 13**2 * 233),
    4: (8, 2**8 * 769),
    9: (3, 2**2 * 3**3 * 1823),
    25: (1, 5 * 13**2 * 233),
}
REFERENCE_SS_ROWS = {
    2: (0, 0, ()),
    3: (0, 0, ()),
    5: (1, None, ()),
    7: (None, 4, ()),
    11: (4, 5, ()),
    13: (None, None, (2,)),
    17: (4, None, (12,)),
    19: (None, 15, (4,)),
    23: (15, 18, (11,)),
    29: (10, None, (6, 12)),
    31: (None, 23, (2, 4)),
    41: (35, None, (22, 26, 38)),
    47: (8, 44, (5, 17, 18)),
    59: (23, 40, (11, 12, 38, 51)),
    71: (37, 61, (6, 7, 14, 32, 54)),
}
REFERENCE_M_P = {2: 24, 3: 12, 5: 6, 7: 4, 11: 4}  # 2 for every other prime
# the formulas hold at 2 and 3 with these values, not with v_p(#M)
SMALL_PRIME_RHS = {2: 36, 3: 18}

FABER_PROBE_MAX_P = 31


def vp_monster_order(p: int) -> int:
    return MONSTER_EXPONENTS.get(p, 0)


def reference_m_p(p: int) -> int:
    return REFERENCE_M_P.get(p, 2)


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def stable_valuation(build: Callable[[int], QSeries], p: int, window: int, start: int = -1) -> Valuation:
    """v_p of build(prec) on [start, window], required to agree with [start, 2*window]."""
    f = build(2 * window + 1)
    v1 = vp_min(f, p, (start, window))
    v2 = vp_min(f, p, (start, 2 * window))
    if v1.value != v2.value:
        raise PrecisionError(f"precision insufficient: v_{p} moves from {v1.value} to {v2.value} on doubling the window")
    return v1


def _j1_minus(other: Callable[[int], QSeries]) -> Callable[[int], QSeries]:
    return lambda prec: j1_series(prec) - other(prec)


def _hauptmodul_valuation(N: int, p: int, window: int) -> Valuation:
    return stable_valuation(_j1_minus(lambda prec: hauptmodul_jn(N, prec)), p, window)


@dataclass(frozen=True)
class Thm11Terms:
    term_plus: Valuation
    term_p: Valuation
    term_p2: Valuation

    @property
    def total(self) -> int:
        vals = (self.term_plus.value, self.term_p.value, self.term_p2.value)
        if any(v is INFINITE for v in vals):
            raise ConsistencyError("a Hauptmodul difference vanished identically")
        return sum(vals)

    def as_tuple(self) -> tuple[int, int, int, int]:
        return self.term_plus.value, self.term_p.value, self.term_p2.value, self.total


def term_plus(p: int, window: int = 60) -> Valuation:
    """v_p(J_1 - J_{p+}); both routes are run and compared when p - 1 divides 24."""
    from .congruence import is_genus0_plus

    if not is_genus0_plus(p):
        return stable_valuation(j1_series, p, window)
    via_up = vp_p_j1_up(p, window)
    if 24 % (p - 1) == 0:
        direct = stable_valuation(_j1_minus(lambda prec: jn_plus_series(p, prec)), p, window)
        if direct.value != via_up.value:
            raise ConsistencyError(f"v_{p}(J_1 - J_{p}+) = {direct.value} but v_{p}(p J_1|U_p) = {via_up.value}")
        return direct
    return via_up


def thm11_rhs(p: int, window: int = 60) -> Thm11Terms:
    _check_prime(p)
    return Thm11Terms(
        term_plus(p, window),
        _hauptmodul_valuation(p, p, window),
        _hauptmodul_valuation(p * p, p, window),
    )


def thm12_rhs(p: int) -> int:
    _check_prime(p)
    data = ss_j_set(p)
    if data.s2:
        return 0
    r = Fraction(3 * data.m_p, 2) if len(data.s1) == 1 else Fraction(data.m_p, 2)
    if r.denominator != 1:
        raise ConsistencyError(f"half-integral automorphism side {r} at p={p}")
    return int(r)


@dataclass(frozen=True)
class FaberProbe:
    p: int
    m_p: int
    a: int  # J_1|V_p - Phi_p(J_1), positive exponents
    b: int  # j|V_p - Phi_p(j), exponents from 0
    c: int  # j|V_p - j^p, positive exponents

    def as_dict(self) -> dict:
        return {"m_p": self.m_p, "a": self.a, "b": self.b, "c": self.c}


def remark12_faber_probe(p: int, window: int = 60) -> FaberProbe:
    """Valuations of three readings of j|V_p - Phi_p(j); reported, not judged."""
    _check_prime(p)
    if p > FABER_PROBE_MAX_P:
        raise ValueError(f"Faber probe limited to p <= {FABER_PROBE_MAX_P}")
    prec = window + 1
    phi_j = poly_eval(faber_poly(p).coeffs, j1_series(prec + p))
    jv = v_operator(j1_series(prec // p + 1), p)
    a = (jv - phi_j).truncate(prec)
    b = a + QSeries.constant(744, prec)
    J = j1_series(prec + p) + QSeries.constant(744, prec + p)
    jp = J
    for _ in range(p - 1):
        jp = series_mul(jp, J)
    c = (jv + QSeries.constant(744, jv.prec) - jp).truncate(prec)
    return FaberProbe(
        p,
        ss_j_set(p).m_p,
        vp_min(a, p, (1, window)).value,
        vp_min(b, p, (0, window)).value,
        vp_min(c, p, (1, window)).value,
    )


@dataclass
class VerifyConfig:
    window: int = 60
    K: int = 4
    nmax: int | None = None
    faber_max_p: int = FABER_PROBE_MAX_P

    def as_dict(self) -> dict:
        return {"window": self.window, "K": self.K, "nmax": self.nmax, "faber_max_p": self.faber_max_p}


@dataclass
class PrimeReport:
    p: int
    vp_monster: int
    term_plus: int
    term_p: int
    term_p2: int
    rhs11: int
    rhs12: int
    m_p: int
    s1: tuple[int, ...]
    s2_pairs: tuple
    table2_row: tuple | None
    table1_ok: bool | None
    table2_ok: bool | None
    deligne: dict | None
    remarks: dict
    checks: dict = field(default_factory=dict)
    expected_discrepancy: bool = False
    passed: bool = False

    @property
    def s1_count(self) -> int:
        return len(self.s1)

    @property
    def s2_count(self) -> int:
        return 2 * len(self.s2_pairs)

    def failed_checks(self) -> list[str]:
        return [k for k, v in self.checks.items() if v is False]


def _deligne_summary(p: int, config: VerifyConfig) -> dict:
    try:
        fit = fit_partial_fractions(p, config.K, config.nmax)
    except FitError as exc:
        return {"K": config.K, "a1_valuations": {}, "residual_valuation": exc.residual_valuation.value
                if exc.residual_valuation else None, "max_K": exc.best_k, "ok": False}
    a1 = check_a1_valuations(p, config.K, fit)
    stable = fit_partial_fractions(p, config.K, fit.nmax + 2)
    bound_lifts = fit.bound_lifts()
    ok = (
        all(c.ok for c in a1)
        and bound_lifts is not None
        and first_order_residual(fit).value >= 2
        and second_order_residual(fit).value >= 3
        and all((fit.A[(a, 1)] - stable.A[(a, 1)]) % p**2 == 0 for a in fit.lifts.values())
    )
    return {
        "K": fit.K,
        "a1_valuations": {str(c.lift): c.valuation for c in a1},
        "residual_valuation": fit.residual_valuation.value,
        "bound_lifts": {str(k): v for k, v in sorted((bound_lifts or {}).items())},
        "ok": ok,
    }


def _table1_ok(p: int, window: int) -> bool | None:
    levels = [N for N in (p, p * p) if N in REFERENCE_D_C1]
    if not levels:
        return None
    for N in levels:
        d, c1 = REFERENCE_D_C1[N]
        diff = j1_series(3) - hauptmodul_jn(N, 3)
        if eta_quotient_params(N).d != d or diff[1] != c1:
            return False
    return True


def verify_prime(p: int, config: VerifyConfig | None = None) -> PrimeReport:
    from .congruence import is_genus0_plus

    config = config or VerifyConfig()
    _check_prime(p)
    w = config.window
    try:
        terms = thm11_rhs(p, w)
        rhs11 = terms.total
        rhs12 = thm12_rhs(p)
        data = ss_j_set(p)
        g0 = is_genus0_plus(p)
    except (ConsistencyError, PrecisionError) as exc:
        raise type(exc)(f"p={p}: {exc}") from exc
    tp, tq, tq2 = terms.term_plus.value, terms.term_p.value, terms.term_p2.value

    checks: dict = {}
    remarks: dict = {"r11": None, "r13a": None, "r13b": None, "r13c": None, "faber_probe": None}
    checks["m_p"] = data.m_p == reference_m_p(p)
    table1 = _table1_ok(p, w)
    checks["c1_values"] = table1

    row = None
    table2 = None
    if g0:
        r = ss_j1_table(p)
        row = (r.minus744, r.c984, r.other)
        table2 = row == REFERENCE_SS_ROWS.get(p)
    checks["ss_rows"] = table2

    if p in (2, 3, 5, 7, 13):
        c1 = (j1_series(3) - hauptmodul_jn(p, 3))[1]
        checks["jp_at_c1"] = tq == padic_val(c1, p)
        checks["term_plus_formula"] = tp == ceil(Fraction(12, p - 1))
        checks["term_p_formula"] = tq == 12 // (p - 1) + ceil(Fraction(12, p + 1))
        remarks["r13a"] = tp == data.m_p // 2 == ceil(Fraction(12, p - 1))
        remarks["r13b"] = checks["term_p_formula"]
    if p in (2, 3, 5):
        d2 = eta_quotient_params(p * p).d
        v = stable_valuation(lambda prec: hauptmodul_jn(p, prec) - hauptmodul_jn(p * p, prec), p, w)
        checks["jp_minus_jp2"] = v.value == d2
        checks["term_p2_formula"] = tq2 == 24 // (p * p - 1)
        remarks["r13c"] = checks["term_p2_formula"]
    elif g0 and p > 3:
        remarks["r13a"] = tp == data.m_p // 2

    deligne = None
    if g0 and p > 3:
        deligne = _deligne_summary(p, config)
        checks["deligne"] = deligne["ok"]
        # the two computations of p J_1|U_p are compared inside p_j1_up
        p_j1_up(p, 2 * w + 1)

    if p <= config.faber_max_p:
        remarks["faber_probe"] = remark12_faber_probe(p, w).as_dict()

    expected_discrepancy = p in SMALL_PRIME_RHS
    if expected_discrepancy:
        remarks["r11"] = rhs11 == rhs12 == SMALL_PRIME_RHS[p]
        checks["r11"] = remarks["r11"]
        main_ok = True
    else:
        main_ok = rhs11 == vp_monster_order(p)

    passed = rhs11 == rhs12 and main_ok and all(v is not False for v in checks.values())
    return PrimeReport(
        p=p,
        vp_monster=vp_monster_order(p),
        term_plus=tp,
        term_p=tq,
        term_p2=tq2,
        rhs11=rhs11,
        rhs12=rhs12,
        m_p=data.m_p,
        s1=data.s1,
        s2_pairs=tuple((x.a, x.b, y.a, y.b) for x, y in data.s2),
        table2_row=row,
        table1_ok=table1,
        table2_ok=table2,
        deligne=deligne,
        remarks=remarks,
        checks=checks,
        expected_discrepancy=expected_discrepancy,
        passed=passed,
    )


def q_precision_budget(primes: list[int], window: int) -> int:
    """Number of J_1 terms that covers every series a verification run touches."""
    if not primes:
        return 0
    return max(primes) * (2 * window + 2) + 2


def verify_primes(primes: list[int], config: VerifyConfig | None = None) -> list[PrimeReport]:
    """Verify each prime in ascending order, sharing one J_1 expansion."""
    config = config or VerifyConfig()
    primes = sorted(set(primes))
    budget = q_precision_budget(primes, config.window)
    if budget:
        j1_series(budget)
    return [verify_prime(p, config) for p in primes]
