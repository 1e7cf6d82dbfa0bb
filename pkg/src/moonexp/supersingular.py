"""Supersingular j-invariants in characteristic p, split by field of definition.

Two routes are computed and must agree: roots of the Deuring polynomial
H_p(lambda) pushed through the Legendre j-map, and an exhaustive scan of
F_{p^2} that counts points on a model curve for every j.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from . import kernels
from .arith import is_prime
from .errors import ConsistencyError
from .ffield import Fp2Elem, PolyFp, nonresidue, poly_roots_in_fp2, root_multiplicity

logger = logging.getLogger(__name__)

# the point-count oracle costs O(p^4); above this it is skipped unless asked for
ORACLE_MAX_P = 100

# characteristic 2 and 3: the single supersingular j is 0 = 1728
_SMALL_P_MIN_AUT = {2: 24, 3: 12}


@dataclass(frozen=True)
class SupersingularData:
    p: int
    s1: tuple[int, ...]
    s2: tuple[tuple[Fp2Elem, Fp2Elem], ...]
    aut_orders: dict = field(hash=False, compare=True)
    m_p: int

    @property
    def size(self) -> int:
        return len(self.s1) + 2 * len(self.s2)

    def j1_values(self) -> list[int]:
        """The F_p supersingular J_1-values j - 744, reduced to [0, p)."""
        return sorted((j - 744) % self.p for j in self.s1)

    def mass(self) -> Fraction:
        return sum((Fraction(1, o) for o in self.aut_orders.values()), Fraction(0))


@dataclass(frozen=True)
class SupersingularRow:
    p: int
    minus744: int | None
    c984: int | None
    other: tuple[int, ...]


def hasse_poly(p: int) -> PolyFp:
    """H_p(lambda) = sum_{i<=m} C(m, i)^2 lambda^i mod p, m = (p-1)/2."""
    if p <= 3 or not is_prime(p):
        raise ValueError("Deuring polynomial requires a prime p > 3")
    m = (p - 1) // 2
    return PolyFp.make([comb(m, i) ** 2 for i in range(m + 1)], p)


def j_of_lambda(lam: Fp2Elem) -> Fp2Elem:
    """j of the Legendre curve y^2 = x(x-1)(x-lambda)."""
    num = (lam * lam - lam + 1) ** 3 * 256
    den = lam * lam * (lam - 1) * (lam - 1)
    return num / den


def aut_order(j, p: int) -> int:
    """#Aut of a curve with invariant j in characteristic p > 3."""
    if p <= 3:
        raise ValueError("aut_order is defined here for p > 3")
    jj = j.index if isinstance(j, Fp2Elem) else int(j) % p
    if jj == 0:
        return 6
    if jj == 1728 % p:
        return 4
    return 2


def _hasse_route(p: int) -> set[Fp2Elem]:
    H = hasse_poly(p)
    roots = poly_roots_in_fp2(H)
    zero, one = Fp2Elem(0, 0, p), Fp2Elem(1, 0, p)
    if zero in roots or one in roots:
        raise ConsistencyError(f"H_{p} vanishes at a degenerate lambda")
    if len(roots) != H.degree:
        bad = [r for r in roots if root_multiplicity(H, r) > 1]
        raise ConsistencyError(f"H_{p} has {len(roots)} roots in F_p^2, degree {H.degree}; repeated: {bad}")
    return {j_of_lambda(r) for r in roots}


def _oracle_route(p: int) -> set[Fp2Elem]:
    """Every j in F_{p^2} whose model curve has trace divisible by p."""
    s = nonresidue(p)
    j0, j1 = kernels.field_components(p)

    def mul(x0, x1, y0, y1):
        return (x0 * y0 + s * (x1 * y1 % p)) % p, (x0 * y1 + x1 * y0) % p

    k0, k1 = (1728 - j0) % p, (-j1) % p
    jk0, jk1 = mul(j0, j1, k0, k1)
    a0, a1 = (3 * jk0) % p, (3 * jk1) % p
    b0, b1 = mul(jk0, jk1, k0, k1)
    b0, b1 = (2 * b0) % p, (2 * b1) % p
    e0, e1728 = 0, 1728 % p
    a0[e0], a1[e0], b0[e0], b1[e0] = 0, 0, 1, 0
    a0[e1728], a1[e1728], b0[e1728], b1[e1728] = 1, 0, 0, 0

    found = set()
    base = j1 == 0
    n1 = kernels.count_affine_fp(a0[base], b0[base], p)
    for e, n in zip(np.flatnonzero(base), n1):
        if (p - int(n)) % p == 0:
            found.add(Fp2Elem.from_index(int(e), p))
    ext = ~base
    n2 = kernels.count_affine_fp2(a0[ext], a1[ext], b0[ext], b1[ext], p, s)
    for e, n in zip(np.flatnonzero(ext), n2):
        if (p * p - int(n)) % p == 0:
            found.add(Fp2Elem.from_index(int(e), p))
    return found


def ss_j_set(p: int, oracle: bool | None = None) -> SupersingularData:
    """Supersingular locus in characteristic p.

    ``oracle=None`` runs the point-count cross-check when p <= ORACLE_MAX_P.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p in _SMALL_P_MIN_AUT:
        m = _SMALL_P_MIN_AUT[p]
        return SupersingularData(p, (0,), (), {Fp2Elem(0, 0, p): m}, m)
    js = _hasse_route(p)
    if oracle is None:
        oracle = p <= ORACLE_MAX_P
    if oracle:
        other = _oracle_route(p)
        if other != js:
            raise ConsistencyError(
                f"supersingular sets differ at p={p}: "
                f"Deuring only {sorted(js - other)}, point count only {sorted(other - js)}"
            )
    s1 = tuple(sorted(j.a for j in js if j.in_fp))
    pairs = set()
    for j in js:
        if not j.in_fp:
            c = j.conj()
            if c not in js:
                raise ConsistencyError(f"supersingular set at p={p} not Frobenius-stable")
            pairs.add((min(j, c), max(j, c)))
    s2 = tuple(sorted(pairs))
    aut = {Fp2Elem(j, 0, p): aut_order(j, p) for j in s1}
    for pair in s2:
        for j in pair:
            aut[j] = aut_order(j, p)
    data = SupersingularData(p, s1, s2, aut, min(aut.values()))
    if data.mass() != Fraction(p - 1, 24):
        raise ConsistencyError(f"Eichler mass {data.mass()} != {Fraction(p - 1, 24)} at p={p}")
    return data


def ss_j1_table(p: int) -> SupersingularRow:
    """Supersingular J_1-values mod p arranged by the -744 / 984 / other columns."""
    data = ss_j_set(p)
    if data.s2:
        raise ValueError(f"p={p}: Gamma_0(p)+ has positive genus")
    vals = data.j1_values()
    m744, c984 = (-744) % p, 984 % p
    return SupersingularRow(
        p,
        m744 if m744 in vals else None,
        c984 if c984 in vals else None,
        tuple(v for v in vals if v not in (m744, c984)),
    )
