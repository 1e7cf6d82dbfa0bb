import math

import pytest

from moonexp.ffield import (
    Fp2Elem,
    PolyFp,
    count_affine_points,
    curve_for_j,
    fp2_pow,
    frobenius_trace,
    nonresidue,
    poly_roots_in_fp2,
    root_multiplicity,
)


def test_nonresidue_is_smallest():
    for p in (5, 7, 11, 13, 17, 23):
        s = nonresidue(p)
        assert pow(s, (p - 1) // 2, p) == p - 1
        assert all(pow(r, (p - 1) // 2, p) == 1 for r in range(1, s))


def test_pow_zero_exponent():
    assert fp2_pow(Fp2Elem(3, 4, 7), 0) == Fp2Elem(1, 0, 7)


def test_group_order_p13():
    p = 13
    for e in range(1, p * p):
        x = Fp2Elem.from_index(e, p)
        assert fp2_pow(x, p * p - 1) == Fp2Elem(1, 0, p)


def test_t_squared_is_nonresidue():
    for p in (5, 7, 11, 13):
        assert Fp2Elem(0, 1, p) ** 2 == Fp2Elem(nonresidue(p), 0, p)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17, 19, 23])
def test_frobenius_is_involution_fixing_fp(p):
    fixed = 0
    for e in range(p * p):
        x = Fp2Elem.from_index(e, p)
        fx = x**p
        assert fx == x.conj()
        assert fx**p == x
        fixed += fx == x
        assert (fx == x) == x.in_fp
    assert fixed == p


def test_field_axioms_spot():
    p = 11
    x, y = Fp2Elem(3, 5, p), Fp2Elem(7, 2, p)
    assert (x * y) / y == x
    assert x * x.inverse() == Fp2Elem(1, 0, p)
    assert x.norm() == (x * x.conj()).a and (x * x.conj()).b == 0
    with pytest.raises(ZeroDivisionError):
        Fp2Elem(0, 0, p).inverse()


def test_roots_conjugate_pair_over_f5():
    roots = poly_roots_in_fp2(PolyFp.make([1, 4, 1], 5))
    assert len(roots) == 2
    r, c = sorted(roots)
    assert not r.in_fp and r.conj() == c


def test_roots_x2_minus_1_over_f7():
    roots = poly_roots_in_fp2(PolyFp.make([-1, 0, 1], 7))
    assert roots == {Fp2Elem(1, 0, 7), Fp2Elem(6, 0, 7)}


def test_roots_of_x():
    for p in (5, 13):
        assert poly_roots_in_fp2(PolyFp.make([0, 1], p)) == {Fp2Elem(0, 0, p)}


def test_roots_match_exhaustive_evaluation():
    p = 13
    P = PolyFp.make([2, 0, 5, 1, 0, 1], p)
    expected = {Fp2Elem.from_index(e, p) for e in range(p * p) if not P(Fp2Elem.from_index(e, p))}
    assert poly_roots_in_fp2(P) == expected


def test_zero_polynomial_rejected():
    with pytest.raises(ValueError):
        poly_roots_in_fp2(PolyFp.make([0, 0], 7))


def test_root_multiplicity():
    # (x - 2)^3 (x + 1) over F_7
    coeffs = [1]
    for r in (2, 2, 2, -1):
        coeffs = [(a - r * b) % 7 for a, b in zip([0] + coeffs, coeffs + [0])]
    P = PolyFp.make(coeffs, 7)
    assert root_multiplicity(P, Fp2Elem(2, 0, 7)) == 3
    assert root_multiplicity(P, Fp2Elem(6, 0, 7)) == 1
    assert root_multiplicity(P, Fp2Elem(3, 0, 7)) == 0


def test_point_count_j1728_f5():
    assert count_affine_points(Fp2Elem(1, 0, 5), Fp2Elem(0, 0, 5), 5) == 3


def test_point_count_j0_f5_supersingular():
    n = count_affine_points(Fp2Elem(0, 0, 5), Fp2Elem(1, 0, 5), 5)
    assert n == 5 and n + 1 == 5 + 1


def test_point_count_j0_f7_ordinary():
    n = count_affine_points(Fp2Elem(0, 0, 7), Fp2Elem(1, 0, 7), 7)
    assert (7 + 1 - (n + 1)) % 7 != 0


def test_singular_model_rejected():
    with pytest.raises(ValueError, match="singular Weierstrass model"):
        count_affine_points(Fp2Elem(0, 0, 7), Fp2Elem(0, 0, 7), 7)


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_hasse_bound(p):
    for a in range(p):
        for b in range(p):
            if (4 * a**3 + 27 * b**2) % p == 0:
                continue
            n = count_affine_points(Fp2Elem(a, 0, p), Fp2Elem(b, 0, p), p) + 1
            assert abs(p + 1 - n) <= 2 * math.sqrt(p)


def test_curve_for_j_realises_j():
    p = 11
    for e in range(p * p):
        j = Fp2Elem.from_index(e, p)
        a, b = curve_for_j(j)
        num = a * a * a * 4 * 1728
        den = a * a * a * 4 + b * b * 27
        assert num / den == j


def test_frobenius_trace_over_fp2():
    # j = 0 is supersingular at p = 5; over F_25 the trace is divisible by 5
    t, q = frobenius_trace(Fp2Elem(0, 0, 5))
    assert q == 5 and t % 5 == 0
    t, q = frobenius_trace(Fp2Elem(1, 1, 7))
    assert q == 49
