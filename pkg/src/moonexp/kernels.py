"""Exhaustive finite-field kernels: polynomial root scans and point counts.

Every kernel exists twice: an ``@njit`` loop version and a vectorised
numpy version.  The public wrappers dispatch on :func:`get_backend`.
Elements of F_{p^2} = F_p[t]/(t^2 - s) are encoded by their components
(a, b) meaning a + b*t; the flat index a + b*p is used for whole-field
arrays.  Residues stay below p^2, so int64 never overflows for p < 3000.
"""

import numpy as np

from ._accel import get_backend, njit

# chunk of curves per numpy batch; keeps temporaries near a few MB
_NP_CHUNK_ELEMS = 1 << 20


def legendre_table(p: int) -> np.ndarray:
    """chi[r] for r in [0, p): 0 at r = 0, +1 on squares, -1 otherwise."""
    chi = -np.ones(p, dtype=np.int64)
    chi[0] = 0
    sq = (np.arange(1, p, dtype=np.int64) ** 2) % p
    chi[sq] = 1
    return chi


def field_components(p: int) -> tuple[np.ndarray, np.ndarray]:
    """Components (a, b) of every element of F_{p^2}, in flat-index order."""
    idx = np.arange(p * p, dtype=np.int64)
    return idx % p, idx // p


# ---------------------------------------------------------------- numba


@njit(cache=True)
def _roots_mask_nb(coeffs, p, s):
    n = p * p
    out = np.zeros(n, dtype=np.bool_)
    deg = coeffs.shape[0] - 1
    for e in range(n):
        x0 = e % p
        x1 = e // p
        r0 = coeffs[deg]
        r1 = 0
        for k in range(deg - 1, -1, -1):
            t0 = (r0 * x0 + s * ((r1 * x1) % p)) % p
            t1 = (r0 * x1 + r1 * x0) % p
            r0 = (t0 + coeffs[k]) % p
            r1 = t1
        out[e] = r0 == 0 and r1 == 0
    return out


@njit(cache=True)
def _count_fp_nb(A, B, p, chi):
    out = np.empty(A.shape[0], dtype=np.int64)
    for k in range(A.shape[0]):
        a = A[k]
        b = B[k]
        tot = p
        for x in range(p):
            r = ((x * x % p) * x + a * x + b) % p
            tot += chi[r]
        out[k] = tot
    return out


@njit(cache=True)
def _count_fp2_nb(A0, A1, B0, B1, p, s, chi2, X0, X1, C0, C1):
    out = np.empty(A0.shape[0], dtype=np.int64)
    n = X0.shape[0]
    for k in range(A0.shape[0]):
        a0 = A0[k]
        sa1 = (s * A1[k]) % p
        a1 = A1[k]
        b0 = B0[k]
        b1 = B1[k]
        tot = p * p
        for i in range(n):
            x0 = X0[i]
            x1 = X1[i]
            z0 = (C0[i] + a0 * x0 + sa1 * x1 + b0) % p
            z1 = (C1[i] + a0 * x1 + a1 * x0 + b1) % p
            tot += chi2[z0 + z1 * p]
        out[k] = tot
    return out


# ---------------------------------------------------------------- numpy


def _roots_mask_np(coeffs, p, s):
    x0, x1 = field_components(p)
    deg = coeffs.shape[0] - 1
    r0 = np.full(p * p, coeffs[deg], dtype=np.int64)
    r1 = np.zeros(p * p, dtype=np.int64)
    for k in range(deg - 1, -1, -1):
        t0 = (r0 * x0 + s * ((r1 * x1) % p)) % p
        r1 = (r0 * x1 + r1 * x0) % p
        r0 = (t0 + coeffs[k]) % p
    return (r0 == 0) & (r1 == 0)


def _count_fp_np(A, B, p, chi):
    x = np.arange(p, dtype=np.int64)
    cube = (x * x % p) * x % p
    out = np.empty(A.shape[0], dtype=np.int64)
    step = max(1, _NP_CHUNK_ELEMS // p)
    for lo in range(0, A.shape[0], step):
        a = A[lo:lo + step, None]
        b = B[lo:lo + step, None]
        r = (cube[None, :] + a * x[None, :] + b) % p
        out[lo:lo + step] = p + chi[r].sum(axis=1)
    return out


def _count_fp2_np(A0, A1, B0, B1, p, s, chi2, X0, X1, C0, C1):
    x0, x1, c0, c1 = (v[None, :] for v in (X0, X1, C0, C1))
    out = np.empty(A0.shape[0], dtype=np.int64)
    step = max(1, _NP_CHUNK_ELEMS // (p * p))
    for lo in range(0, A0.shape[0], step):
        sl = slice(lo, lo + step)
        a0, a1, b0, b1 = (v[sl, None] for v in (A0, A1, B0, B1))
        z0 = (c0 + a0 * x0 + (s * a1 % p) * x1 + b0) % p
        z1 = (c1 + a0 * x1 + a1 * x0 + b1) % p
        out[sl] = p * p + chi2[z0 + z1 * p].sum(axis=1)
    return out


# ---------------------------------------------------------------- dispatch


def roots_mask(coeffs, p: int, s: int) -> np.ndarray:
    """Boolean mask over F_{p^2} (flat index) of the zeros of a polynomial.

    ``coeffs`` are residues mod p, lowest degree first.
    """
    c = np.ascontiguousarray(np.asarray(coeffs, dtype=np.int64) % p)
    if get_backend() == "numba":
        return _roots_mask_nb(c, p, s)
    return _roots_mask_np(c, p, s)


def count_affine_fp(A, B, p: int) -> np.ndarray:
    """Affine point counts of y^2 = x^3 + a x + b over F_p, one per (a, b)."""
    A = np.ascontiguousarray(np.asarray(A, dtype=np.int64) % p)
    B = np.ascontiguousarray(np.asarray(B, dtype=np.int64) % p)
    chi = legendre_table(p)
    if get_backend() == "numba":
        return _count_fp_nb(A, B, p, chi)
    return _count_fp_np(A, B, p, chi)


def count_affine_fp2(A0, A1, B0, B1, p: int, s: int) -> np.ndarray:
    """Affine point counts over F_{p^2} for curves with F_{p^2} coefficients.

    The quadratic character of z in F_{p^2} is the Legendre symbol of its
    norm a^2 - s b^2, since z^((p^2-1)/2) = N(z)^((p-1)/2).
    """
    arrs = [np.ascontiguousarray(np.asarray(v, dtype=np.int64) % p) for v in (A0, A1, B0, B1)]
    tables = _fp2_tables(p, s)
    if get_backend() == "numba":
        return _count_fp2_nb(*arrs, p, s, *tables)
    return _count_fp2_np(*arrs, p, s, *tables)


def _fp2_tables(p: int, s: int):
    """Character of F_{p^2} by flat index, plus every x and x^3 by components."""
    x0, x1 = field_components(p)
    chi2 = legendre_table(p)[(x0 * x0 - s * (x1 * x1 % p)) % p]
    q0 = (x0 * x0 + s * (x1 * x1 % p)) % p
    q1 = (2 * x0 * x1) % p
    c0 = (q0 * x0 + s * (q1 * x1 % p)) % p
    c1 = (q0 * x1 + q1 * x0) % p
    return chi2, x0, x1, c0, c1
