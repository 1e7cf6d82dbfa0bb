"""Small integer helpers."""

from math import isqrt


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for f in range(3, isqrt(n) + 1, 2):
        if n % f == 0:
            return False
    return True


def primes_between(lo: int, hi: int) -> list[int]:
    """Primes p with lo <= p <= hi."""
    return [n for n in range(max(lo, 2), hi + 1) if is_prime(n)]


def prime_or_prime_square(n: int) -> tuple[int, int] | None:
    """(p, v) with n = p^v and v in {1, 2}, else None."""
    if is_prime(n):
        return n, 1
    r = isqrt(n)
    if r * r == n and is_prime(r):
        return r, 2
    return None


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)
