"""Prime tables and integer factorization.

Small arguments are factored by smallest-prime-factor lookup.  Arguments
above the table bound go through trial division followed by Pollard-Brent
rho with a fixed seed, so every run produces the same factorizations.  The
64-bit path is compiled with numba (Montgomery arithmetic); larger integers
use a pure-Python fallback of the same algorithm.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass
from math import gcd, isqrt

import numba as nb
import numpy as np

from ..errors import InvalidArgument

__all__ = [
    "PrimeTable",
    "build_prime_table",
    "primes_up_to",
    "factorize",
    "factorize_many",
    "is_probable_prime",
    "set_factor_cache_capacity",
    "TRIAL_BOUND",
]

# Trial division bound used above the sieve range; rho takes over after it.
TRIAL_BOUND = 4096
RHO_SEED = 0x5EED


@dataclass(frozen=True, eq=False)
class PrimeTable:
    """Smallest-prime-factor table for ``2..bound``.

    ``spf[n]`` is the least prime dividing ``n`` (``spf[0] = 0``,
    ``spf[1] = 1``); ``primes`` lists every prime up to ``bound``.
    """

    bound: int
    spf: np.ndarray
    primes: np.ndarray

    def __repr__(self):
        return f"PrimeTable(bound={self.bound}, primes={len(self.primes)})"

    def is_prime(self, n: int) -> bool:
        if n < 2:
            return False
        if n <= self.bound:
            return int(self.spf[n]) == n
        return is_probable_prime(n)


def _spf_sieve(bound):
    spf = np.zeros(bound + 1, dtype=np.int32)
    for p in range(2, isqrt(bound) + 1):
        if spf[p] == 0:
            seg = spf[p * p :: p]
            seg[seg == 0] = p
    idx = np.flatnonzero(spf == 0)
    spf[idx] = idx
    spf[1] = 1
    spf[0] = 0
    return spf


def build_prime_table(bound: int) -> PrimeTable:
    """Sieve smallest prime factors up to ``bound``."""
    if bound < 2:
        raise InvalidArgument(f"prime table bound must be >= 2, got {bound}")
    bound = int(bound)
    spf = _spf_sieve(bound)
    primes = np.flatnonzero(spf[2:] == np.arange(2, bound + 1)) + 2
    primes = primes.astype(np.int64)
    spf.setflags(write=False)
    primes.setflags(write=False)
    return PrimeTable(bound, spf, primes)


@functools.lru_cache(maxsize=8)
def _primes_cached(n):
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    out = np.flatnonzero(sieve).astype(np.int64)
    out.setflags(write=False)
    return out


def primes_up_to(n: int, table: PrimeTable | None = None) -> np.ndarray:
    """All primes ``<= n`` as an int64 array (read-only)."""
    n = int(n)
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    if table is not None and n <= table.bound:
        return table.primes[: np.searchsorted(table.primes, n, side="right")]
    return _primes_cached(n)


# ---------------------------------------------------------------------------
# 64-bit kernel (Montgomery form, modulus odd and < 2**64)

_M32 = np.uint64(0xFFFFFFFF)
_S32 = np.uint64(32)
_ZERO = np.uint64(0)
_ONE = np.uint64(1)
_TWO = np.uint64(2)
_MR_BASES = np.array(
    [2, 325, 9375, 28178, 450775, 9780504, 1795265022], dtype=np.uint64
)


@nb.njit(cache=True, inline="always")
def _mul128(a, b):
    a_lo = a & _M32
    a_hi = a >> _S32
    b_lo = b & _M32
    b_hi = b >> _S32
    p0 = a_lo * b_lo
    p1 = a_lo * b_hi
    p2 = a_hi * b_lo
    p3 = a_hi * b_hi
    mid = (p0 >> _S32) + (p1 & _M32) + (p2 & _M32)
    lo = (p0 & _M32) | (mid << _S32)
    hi = p3 + (p1 >> _S32) + (p2 >> _S32) + (mid >> _S32)
    return hi, lo


@nb.njit(cache=True, inline="always")
def _redc(hi, lo, n, ninv):
    m = lo * ninv
    mhi, mlo = _mul128(m, n)
    carry = _ONE if lo != _ZERO else _ZERO
    t = hi + mhi
    over = t < hi
    t2 = t + carry
    over = over or (t2 < t)
    if over or t2 >= n:
        t2 = t2 - n
    return t2


@nb.njit(cache=True, inline="always")
def _mont_mul(a, b, n, ninv):
    hi, lo = _mul128(a, b)
    return _redc(hi, lo, n, ninv)


@nb.njit(cache=True)
def _mont_setup(n):
    inv = n
    for _ in range(6):
        inv = inv * (_TWO - n * inv)
    ninv = _ZERO - inv
    r1 = (_ZERO - n) % n
    r2 = r1
    for _ in range(64):
        if r2 >= n - r2:
            r2 = r2 - (n - r2)
        else:
            r2 = r2 + r2
    return ninv, r1, r2


@nb.njit(cache=True)
def _mont_pow(b, e, n, ninv, one):
    result = one
    while e > _ZERO:
        if e & _ONE:
            result = _mont_mul(result, b, n, ninv)
        b = _mont_mul(b, b, n, ninv)
        e = e >> _ONE
    return result


@nb.njit(cache=True)
def _is_prime_u64(n):
    if n < _TWO:
        return False
    for sp in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        p = np.uint64(sp)
        if n == p:
            return True
        if n % p == _ZERO:
            return False
    if n < np.uint64(1369):
        return True
    ninv, one, r2 = _mont_setup(n)
    minus_one = n - one
    d = n - _ONE
    s = 0
    while d & _ONE == _ZERO:
        d = d >> _ONE
        s += 1
    for i in range(_MR_BASES.shape[0]):
        a = _MR_BASES[i] % n
        if a == _ZERO:
            continue
        x = _mont_pow(_mont_mul(a, r2, n, ninv), d, n, ninv, one)
        if x == one or x == minus_one:
            continue
        composite = True
        for _ in range(s - 1):
            x = _mont_mul(x, x, n, ninv)
            if x == minus_one:
                composite = False
                break
        if composite:
            return False
    return True


@nb.njit(cache=True, inline="always")
def _gcd_u64(a, b):
    while b != _ZERO:
        a, b = b, a % b
    return a


@nb.njit(cache=True)
def _rho_u64(n, c0, x0):
    ninv, one, r2 = _mont_setup(n)
    c = _mont_mul(c0 % n, r2, n, ninv)
    y = _mont_mul(x0 % n, r2, n, ninv)
    x = y
    ys = y
    g = _ONE
    q = one
    r = 1
    m = 128
    while g == _ONE:
        x = y
        for _ in range(r):
            y = _mont_mul(y, y, n, ninv)
            s = y + c
            if s >= n or s < y:
                s = s - n
            y = s
        k = 0
        while k < r and g == _ONE:
            ys = y
            steps = m if m < r - k else r - k
            for _ in range(steps):
                y = _mont_mul(y, y, n, ninv)
                s = y + c
                if s >= n or s < y:
                    s = s - n
                y = s
                diff = x - y if x > y else y - x
                q = _mont_mul(q, diff, n, ninv)
            g = _gcd_u64(q, n)
            k += m
        r *= 2
    if g == n:
        g = _ONE
        while g == _ONE:
            ys = _mont_mul(ys, ys, n, ninv)
            s = ys + c
            if s >= n or s < ys:
                s = s - n
            ys = s
            diff = x - ys if x > ys else ys - x
            g = _gcd_u64(diff, n)
    return g


@nb.njit(cache=True)
def _splitmix(state):
    state = state + np.uint64(0x9E3779B97F4A7C15)
    z = state
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return state, z ^ (z >> np.uint64(31))


@nb.njit(cache=True)
def _factor_u64_into(n, small, out, seed):
    """Prime factors of n (with multiplicity) written to ``out``; returns count."""
    cnt = 0
    for i in range(small.shape[0]):
        p = small[i]
        if p * p > n:
            break
        while n % p == _ZERO:
            out[cnt] = p
            cnt += 1
            n = n // p
    if n == _ONE:
        return cnt
    last = small[small.shape[0] - 1]
    stack = np.empty(64, dtype=np.uint64)
    stack[0] = n
    top = 1
    state = np.uint64(seed)
    while top > 0:
        top -= 1
        m = stack[top]
        if m == _ONE:
            continue
        if m <= last * last or _is_prime_u64(m):
            out[cnt] = m
            cnt += 1
            continue
        g = m
        while g == m or g == _ONE:
            state, c = _splitmix(state)
            state, x0 = _splitmix(state)
            g = _rho_u64(m, c % (m - _ONE) + _ONE, x0)
        stack[top] = g
        stack[top + 1] = m // g
        top += 2
    return cnt


@nb.njit(cache=True)
def _factor_many_u64(values, small, seed):
    out = np.zeros((values.shape[0], 64), dtype=np.uint64)
    counts = np.zeros(values.shape[0], dtype=np.int64)
    for i in range(values.shape[0]):
        counts[i] = _factor_u64_into(values[i], small, out[i], seed)
    return out, counts


# ---------------------------------------------------------------------------
# Pure-Python fallback for integers >= 2**64

_PY_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53)


def is_probable_prime(n: int) -> bool:
    """Deterministic below 2**64, Miller-Rabin with 16 fixed bases above."""
    if n < 2:
        return False
    if n < 2**64:
        return bool(_is_prime_u64(np.uint64(n)))
    for p in _PY_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _PY_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _rho_py(n, rng):
    if n % 2 == 0:
        return 2
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g


def _factor_py(n, out):
    rng = random.Random(RHO_SEED)
    for p in _small_primes_list():
        if p * p > n:
            break
        while n % p == 0:
            out.append(p)
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m < 2**64:
            out.extend(_factor_u64_list(m))
        elif is_probable_prime(m):
            out.append(m)
        else:
            g = _rho_py(m, rng)
            stack.extend((g, m // g))


@functools.lru_cache(maxsize=1)
def _small_primes_list():
    return [int(p) for p in primes_up_to(TRIAL_BOUND)]


@functools.lru_cache(maxsize=1)
def _small_primes_u64():
    return primes_up_to(TRIAL_BOUND).astype(np.uint64)


def _factor_u64_list(m):
    buf = np.zeros(64, dtype=np.uint64)
    cnt = _factor_u64_into(np.uint64(m), _small_primes_u64(), buf, RHO_SEED)
    return [int(v) for v in buf[:cnt]]


def _group(primes):
    primes = sorted(primes)
    out = []
    for p in primes:
        if out and out[-1][0] == p:
            out[-1][1] += 1
        else:
            out.append([p, 1])
    return tuple((p, e) for p, e in out)


def _factor_large_uncached(n):
    out = []
    if n < 2**64:
        out = _factor_u64_list(n)
    else:
        _factor_py(n, out)
    return _group(out)


_factor_large = functools.lru_cache(maxsize=1 << 16)(_factor_large_uncached)


def set_factor_cache_capacity(capacity: int) -> None:
    """Resize (and clear) the memo cache used above the sieve bound."""
    global _factor_large
    _factor_large = functools.lru_cache(maxsize=int(capacity))(
        _factor_large_uncached
    )


def factorize(n: int, table: PrimeTable | None = None) -> tuple[tuple[int, int], ...]:
    """Prime factorization of ``|n|`` as increasing ``(prime, exponent)`` pairs.

    >>> factorize(360)
    ((2, 3), (3, 2), (5, 1))
    """
    n = abs(int(n))
    if n == 0:
        raise InvalidArgument("cannot factorize 0")
    if n == 1:
        return ()
    if table is not None and n <= table.bound:
        spf = table.spf
        out = []
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return tuple(out)
    return _factor_large(n)


def factorize_many(values) -> tuple[np.ndarray, np.ndarray]:
    """Factor an array of integers in ``[1, 2**64)`` with the compiled kernel.

    Returns ``(primes, counts)``: row ``i`` of ``primes`` holds the prime
    factors of ``values[i]`` with multiplicity in its first ``counts[i]``
    entries.
    """
    vals = np.asarray(values)
    if vals.size and (vals.min() < 1):
        raise InvalidArgument("factorize_many expects positive integers")
    vals = vals.astype(np.uint64)
    return _factor_many_u64(vals, _small_primes_u64(), RHO_SEED)


@functools.lru_cache(maxsize=4)
def default_table(bound: int = 10**6) -> PrimeTable:
    """A shared, cached prime table."""
    return build_prime_table(bound)
