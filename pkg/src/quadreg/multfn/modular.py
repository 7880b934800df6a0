"""Small modular-arithmetic helpers (scalar and vectorized)."""

from __future__ import annotations

import numpy as np

from ..errors import InvalidArgument, NotFound

__all__ = ["powmod_vec", "inverse_vec", "sqrt_mod_prime", "sqrt_mod_prime_power", "crt"]


def powmod_vec(base, exp, mod) -> np.ndarray:
    """Elementwise ``base**exp % mod`` for int64 arrays with ``mod < 2**31``."""
    base = np.asarray(base, dtype=np.int64) % mod
    exp = np.array(exp, dtype=np.int64, copy=True)
    mod = np.asarray(mod, dtype=np.int64)
    base, exp, mod = np.broadcast_arrays(base, exp, mod)
    base = base.copy()
    exp = exp.copy()
    out = np.ones(base.shape, dtype=np.int64) % mod
    while (exp > 0).any():
        odd = (exp & 1) == 1
        out = np.where(odd, out * base % mod, out)
        base = base * base % mod
        exp >>= 1
    return out


def inverse_vec(a, p) -> np.ndarray:
    """Inverse of ``a`` modulo primes ``p`` (Fermat); ``a`` must be a unit."""
    p = np.asarray(p, dtype=np.int64)
    return powmod_vec(a, p - 2, p)


def sqrt_mod_prime(a: int, p: int) -> int | None:
    """A square root of ``a`` mod the prime ``p`` (Tonelli-Shanks), or None."""
    a %= p
    if p == 2 or a == 0:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def sqrt_mod_prime_power(a: int, p: int, k: int) -> int:
    """A square root of a unit ``a`` modulo ``p**k``.

    Odd ``p`` lifts a Tonelli-Shanks root by Hensel's lemma.  For ``p = 2``
    the root is built bit by bit (needs ``a = 1 mod 8`` when ``k >= 3``).
    Raises NotFound when no root exists.
    """
    q = p**k
    a %= q
    if a % p == 0:
        raise InvalidArgument("sqrt_mod_prime_power expects a unit")
    if p == 2:
        for r in (1, 3) if k <= 2 else ():
            if r * r % q == a:
                return r
        if k <= 2:
            raise NotFound(f"{a} is not a square mod {q}")
        if a % 8 != 1:
            raise NotFound(f"{a} is not a square mod {q}")
        r = 1
        for j in range(3, k):
            if (r * r - a) % (1 << (j + 1)):
                r += 1 << (j - 1)
        return r % q
    r = sqrt_mod_prime(a, p)
    if r is None:
        raise NotFound(f"{a} is not a square mod {p}")
    mod = p
    for _ in range(1, k):
        mod *= p
        r = (r - (r * r - a) * pow(2 * r, -1, mod)) % mod
    return r


def crt(residues, moduli) -> tuple[int, int]:
    """Combine ``x = r_i mod m_i`` for pairwise coprime moduli."""
    x, m = 0, 1
    for r, mi in zip(residues, moduli):
        t = ((r - x) * pow(m, -1, mi)) % mi
        x += m * t
        m *= mi
    return x % m, m
