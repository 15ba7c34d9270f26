"""Exact vanishing tests for sums of p^m-th roots of unity.

A character sum over a subset is recorded as an exponent-count vector
``counts`` with ``counts[j]`` the number of terms equal to zeta**j, where
zeta = exp(2*pi*i/n) and n = p**m. The sum vanishes exactly when the
polynomial sum(counts[j] * x**j) is divisible by the cyclotomic polynomial
Phi_n, the minimal polynomial of zeta.
"""
from __future__ import annotations

import numpy as np

from .group import Subset, is_prime


def phi_prime_power(p: int, k: int) -> list[int]:
    """Coefficients (ascending) of Phi_{p^k}(x) = sum_{i<p} x^(i * p^(k-1))."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if k < 1:
        raise ValueError("k must be at least 1")
    step = p ** (k - 1)
    coeffs = [0] * ((p - 1) * step + 1)
    for i in range(p):
        coeffs[i * step] = 1
    return coeffs


def poly_remainder(num, den) -> list[int]:
    """Remainder of integer polynomial division by a monic divisor.

    Coefficient lists are ascending. The result has length ``len(den) - 1``.
    """
    den = list(den)
    while den and den[-1] == 0:
        den.pop()
    if not den or den[-1] != 1:
        raise ValueError("divisor must be monic")
    rem = [int(c) for c in num]
    d = len(den) - 1
    for top in range(len(rem) - 1, d - 1, -1):
        c = rem[top]
        if c:
            shift = top - d
            for i, b in enumerate(den):
                rem[shift + i] -= c * b
    rem = rem[:d] + [0] * max(0, d - len(rem))
    return rem


def prime_power_split(n: int) -> tuple[int, int]:
    """Return (p, m) with n = p**m; ValueError if n is not a prime power."""
    if n < 2:
        raise ValueError(f"{n} is not a prime power")
    p = 2
    while n % p:
        p += 1
    m, r = 0, n
    while r % p == 0:
        r //= p
        m += 1
    if r != 1:
        raise ValueError(f"{n} is not a prime power")
    return p, m


def is_vanishing_sum(counts) -> bool:
    """True iff sum(counts[j] * zeta_n**j) == 0 with n = len(counts)."""
    p, m = prime_power_split(len(counts))
    return not any(poly_remainder(counts, phi_prime_power(p, m)))


def remainder_rows(counts: np.ndarray, p: int, m: int) -> np.ndarray:
    """Row-wise remainder modulo Phi_{p^m} for a batch of count vectors.

    For deg < n a single reduction of the top block suffices: x^((p-1)s + r)
    is congruent to -sum_{i<p-1} x^(i*s + r) with s = p^(m-1).
    """
    n = p ** m
    s = n // p
    blocks = np.asarray(counts).reshape(-1, p, s)
    rem = blocks[:, : p - 1, :] - blocks[:, p - 1 : p, :]
    return rem.reshape(len(blocks), (p - 1) * s)


def vanishing_rows(counts: np.ndarray, p: int, m: int) -> np.ndarray:
    return ~np.any(remainder_rows(counts, p, m), axis=1)


def exponent_vector(A: Subset, xi, form: str = "symplectic") -> np.ndarray:
    """counts[j] = #{a in A : pairing(a, xi) == j mod n}."""
    ctx = A.ctx
    t = ctx.tables()
    table = _pairing_table(t, form)
    vals = table[A.index_array(), ctx.index(xi)]
    return np.bincount(vals, minlength=ctx.n).astype(np.int64)


def _pairing_table(t, form: str) -> np.ndarray:
    if form == "symplectic":
        return t.form
    if form == "euclidean":
        return t.dot
    raise ValueError(f"unknown form {form!r}; use 'symplectic' or 'euclidean'")


def exponent_matrix(A: Subset, form: str = "symplectic") -> np.ndarray:
    """Exponent vectors of A at every frequency: row xi is exponent_vector(A, xi)."""
    ctx = A.ctx
    n, N = ctx.n, ctx.order
    table = _pairing_table(ctx.tables(), form)
    idx = A.index_array()
    if not len(idx):
        return np.zeros((N, n), dtype=np.int64)
    flat = (np.arange(N)[None, :] * n + table[idx, :]).ravel()
    return np.bincount(flat, minlength=N * n).reshape(N, n)
