"""Cusps of Gamma_0(N), genus of Gamma_0(p^v), and cusp orders of eta quotients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .arith import is_prime
from .errors import ConsistencyError
from .etaforms import eta_quotient_params


@dataclass(frozen=True, order=True)
class Cusp:
    """The cusp a/b of Gamma_0(N): b | N, a the least positive integer in its
    class mod gcd(b, N/b) that is coprime to b."""

    b: int
    a: int
    N: int

    @property
    def width_gcd(self) -> int:
        return gcd(self.b, self.N // self.b)

    @property
    def is_infinite(self) -> bool:
        return self.b == self.N


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def cusp_reps(N: int) -> list[Cusp]:
    if N < 1:
        raise ValueError("N must be positive")
    reps = []
    for b in _divisors(N):
        g = gcd(b, N // b)
        for r in range(g):
            if gcd(r, g) != 1:
                continue
            a = r if r > 0 else g
            while gcd(a, b) != 1:
                a += g
            reps.append(Cusp(b, a, N))
    return reps


def genus_p_power(p: int, v: int) -> int:
    """Genus of Gamma_0(p^v) for v in {1, 2}."""
    if v not in (1, 2):
        raise ValueError("only v = 1, 2 are supported")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p in (2, 3):
        return 0
    a = {1: 13, 5: 5, 7: 7, 11: -1}[p % 12]
    g = Fraction(p - a, 12)
    if v == 2:
        g += Fraction((p - 5) * (p - 1), 12)
    if g.denominator != 1:
        raise ConsistencyError(f"non-integral genus for p={p}, v={v}")
    return int(g)


def is_genus0_plus(p: int) -> bool:
    """Gamma_0(p)+ has genus zero iff no supersingular j lies outside F_p.

    The answer comes from the supersingular locus and is cross-checked
    against the primes dividing the monster's order.
    """
    from .monster import MONSTER_EXPONENTS
    from .supersingular import ss_j_set

    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p in (2, 3):
        computed = True
    else:
        computed = not ss_j_set(p).s2
    listed = p in MONSTER_EXPONENTS
    if computed != listed:
        raise ConsistencyError(f"genus-zero-plus test for p={p} disagrees with the monster order")
    return computed


def tn_cusp_vanishing_order(N: int, cusp: Cusp) -> Fraction:
    """Order of vanishing of t_N at the cusp a/b (negative means a pole)."""
    d = eta_quotient_params(N).d
    b = cusp.b
    return Fraction(d, 24 * gcd(b, N // b)) * (N // b - b)


def bounded_away_from_infinity(N: int) -> bool:
    """t_N has no pole at any non-infinite cusp of Gamma_0(N)."""
    return all(tn_cusp_vanishing_order(N, c) >= 0 for c in cusp_reps(N) if not c.is_infinite)
