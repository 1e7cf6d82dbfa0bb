from math import ceil

import pytest

from moonexp.deligne import (
    C984,
    MINUS744,
    OTHER,
    FitError,
    _solve_mod,
    check_a1_valuations,
    first_order_residual,
    fit_partial_fractions,
    p_j1_up,
    relift,
    residue_class,
    second_order_residual,
    vp_p_j1_up,
)
from moonexp.etaforms import j1_series
from moonexp.qlaurent import PrecisionError

G0P = [5, 7, 11, 13, 17, 19, 23, 29, 31, 41, 47, 59, 71]


@pytest.fixture(scope="module")
def fits():
    return {p: fit_partial_fractions(p) for p in G0P}


def test_p_j1_up_examples():
    for p in (2, 3, 5, 7, 11, 13):
        assert p_j1_up(p, 10)[0] == 0
    assert p_j1_up(2, 5)[1] == 2 * 21493760
    f = p_j1_up(11, 60)
    assert all(c % 121 == 0 for c in f.coeff_list(1, 60))


def test_p_j1_up_precision():
    f = p_j1_up(7, 30)
    assert f.prec == 30
    J = j1_series(7 * 30)
    assert f.coeff_list(1, 30) == [7 * J[7 * n] for n in range(1, 30)]


@pytest.mark.parametrize("p,v", [(2, 12), (3, 6), (5, 3), (7, 2), (11, 2), (13, 1)] + [(p, 1) for p in G0P[5:]])
def test_vp_p_j1_up(p, v):
    assert vp_p_j1_up(p, 60).value == v


def test_vp_p_j1_up_closed_form():
    for p in (2, 3, 5, 7, 13):
        assert vp_p_j1_up(p).value == ceil(12 / (p - 1))


def test_vp_p_j1_up_rejects_positive_genus():
    with pytest.raises(ValueError):
        vp_p_j1_up(37)


def test_vp_instability_reported(monkeypatch):
    import moonexp.deligne as dl
    from moonexp.qlaurent import QSeries

    def fake(p, prec):
        c = [p] * (prec - 1)
        c[-1] = 1
        return QSeries.make(1, c, prec)

    monkeypatch.setattr(dl, "p_j1_up", fake)
    with pytest.raises(PrecisionError, match="precision insufficient"):
        dl.vp_p_j1_up(13, 20)


def test_residue_classes():
    assert residue_class(4, 11) == MINUS744 and residue_class(5, 11) == C984
    assert residue_class(2, 13) == OTHER


@pytest.mark.parametrize("p", G0P)
def test_fit_succeeds_at_k4(fits, p):
    fit = fits[p]
    assert fit.residual_valuation.value >= 4
    assert fit.nmax == 6
    assert len(fit.window) == len(fit.A) + 10


def test_fit_examples_p11():
    fit = fit_partial_fractions(11, 4)
    assert fit.a1_valuations() == {4: 3, 5: 2}


def test_fit_examples_p13_k3():
    fit = fit_partial_fractions(13, 3)
    assert list(fit.lifts.values()) == [2]
    assert fit.valuation(2, 1) == 1


def test_fit_example_p23_k2():
    fit = fit_partial_fractions(23, 2)
    others = [a for a in fit.lifts.values() if residue_class(a, 23) == OTHER]
    assert others == [11]
    assert first_order_residual(fit).value >= 2


@pytest.mark.parametrize(
    "p,expected",
    [(47, {8: 3, 44: 2, 5: 1, 17: 1, 18: 1}), (5, {1: 3}), (7, {4: 2})],
)
def test_check_a1_examples(p, expected):
    checks = check_a1_valuations(p)
    assert {c.lift: c.valuation for c in checks} == expected
    assert all(c.ok for c in checks)


@pytest.mark.parametrize("p", G0P)
def test_a1_sharp_by_class(fits, p):
    assert all(c.ok for c in check_a1_valuations(p, fit=fits[p]))


@pytest.mark.parametrize("p", G0P)
def test_first_and_second_order_congruences(fits, p):
    assert first_order_residual(fits[p]).value >= 2
    assert second_order_residual(fits[p]).value >= 3


@pytest.mark.parametrize("p", [5, 11, 23, 47])
def test_fit_stable_when_nmax_grows(fits, p):
    wider = fit_partial_fractions(p, 4, 8)
    for a in fits[p].lifts.values():
        assert (fits[p].A[(a, 1)] - wider.A[(a, 1)]) % p**2 == 0


@pytest.mark.parametrize("p", G0P)
def test_bounds_hold_for_some_lift(fits, p):
    fit = fits[p]
    lifts = fit.bound_lifts()
    assert lifts is not None
    for alpha, lift in lifts.items():
        cls = residue_class(alpha, p)
        if cls == C984:
            # the lift that meets the n = 2 bound is 984 itself, mod p^2
            assert (lift - 984) % p**2 == 0
        else:
            assert lift == alpha


def test_canonical_lift_misses_984_bound_at_n2():
    fit = fit_partial_fractions(11)
    assert not fit.bounds_ok()
    assert fit.valuation(5, 2) == 3  # bound (2*2*11+1)/12 = 3.75


def test_relift_matches_direct_refit():
    p = 19
    fit = fit_partial_fractions(p)
    other = fit_partial_fractions(p, lifts={15: 15 + 13 * p})
    assert relift(fit.coefficients(15), 13 * p, fit.modulus) == other.coefficients(15 + 13 * p)
    assert other.residual_valuation.value >= 4


def test_relift_roundtrip():
    A = [5, 17, 0, 3, 99, 1]
    m = 7**4
    assert relift(relift(A, 14, m), -14, m) == [x % m for x in A]


def test_fit_argument_checks():
    with pytest.raises(ValueError):
        fit_partial_fractions(3)
    with pytest.raises(ValueError):
        fit_partial_fractions(37)
    with pytest.raises(ValueError):
        fit_partial_fractions(11, 4, 5)
    with pytest.raises(ValueError):
        fit_partial_fractions(11, lifts={3: 3})
    with pytest.raises(ValueError):
        fit_partial_fractions(11, lifts={4: 5})


def test_solver_modular():
    # x + 2y = 5, 3x + y = 4 over Z/7^2, plus a consistent extra row
    sol = _solve_mod([[1, 2], [3, 1], [4, 3]], [5, 4, 9], 7, 2)
    m = 49
    x, y = sol
    assert (x + 2 * y) % m == 5 and (3 * x + y) % m == 4
    assert _solve_mod([[1, 2], [3, 1], [4, 3]], [5, 4, 10], 7, 2) is None
    with pytest.raises(FitError):
        _solve_mod([[7, 0], [14, 1]], [0, 0], 7, 2)
