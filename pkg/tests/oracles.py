"""Slow, independent reference computations used only by the tests.

Nothing here shares code with the package: plain lists, schoolbook
products, direct infinite-product expansion and a different route to j.
"""

from fractions import Fraction


def mul(a, b, n):
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] += x * y
    return out


def inv(a, n):
    """1/a for a power series with a[0] = +-1."""
    out = [0] * n
    out[0] = Fraction(1, a[0])
    for k in range(1, n):
        s = sum(a[i] * out[k - i] for i in range(1, min(k, len(a) - 1) + 1))
        out[k] = -s / a[0]
    return [int(x) for x in out]


def euler_product(n, step=1, power=1):
    """prod_{k>=1} (1 - q^{k*step})^power to O(q^n), by repeated multiplication."""
    out = [1] + [0] * (n - 1)
    for k in range(step, n, step):
        factor = [0] * n
        factor[0] = 1
        factor[k] = -1
        for _ in range(power):
            out = mul(out, factor, n)
    return out


def sigma(k, n):
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


def j_coeffs(n):
    """c_{-1}, c_0, ..., c_{n-2} of j via 1728 E4^3 / (E4^3 - E6^2)."""
    m = n + 1
    e4 = [1] + [240 * sigma(3, k) for k in range(1, m)]
    e6 = [1] + [-504 * sigma(5, k) for k in range(1, m)]
    e4c = mul(mul(e4, e4, m), e4, m)
    disc = [x - y for x, y in zip(e4c, mul(e6, e6, m))]  # 1728 * Delta, starts at q^1
    assert disc[0] == 0 and disc[1] == 1728
    d = [x // 1728 for x in disc[1:]]
    return mul(e4c, inv(d, m), n)


def eta_quotient(N, d, n):
    """Coefficients of prod (1-q^k)^d / prod (1-q^{Nk})^d to O(q^n)."""
    num = euler_product(n, 1, d)
    den = euler_product(n, N, d)
    return mul(num, inv(den, n), n)


def vp(x, p):
    if x == 0:
        return None
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v
