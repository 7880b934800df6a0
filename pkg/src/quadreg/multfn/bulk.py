"""Bulk evaluation of multiplicative functions on structured integer sets.

Each spec is split into *direct* leaves, evaluated on the integers
themselves, and a *residual* product of leaves that need the factorization
(Liouville, or anything perturbed off a non-direct base).  The residual is
handled by sieving along the structure of the argument set:

* arithmetic progressions ``Q k + c`` (one residue class per prime),
* binary quadratic forms on lattice grids ``P(Q m + a, Q n + b)`` (root lines
  ``y = sigma x`` modulo split primes, the origin modulo inert primes, brute
  force for the finitely many primes dividing ``2 alpha gamma D Q``),
* reducible forms, through their linear factors.

Anything else falls back to the spf table or the rho factorizer.
"""

from __future__ import annotations

import functools
from math import gcd, isqrt

import numpy as np

from ..errors import RangeError
from .functions import Conjugate, MultFn, Product
from .modular import inverse_vec, powmod_vec, sqrt_mod_prime
from .primes import PrimeTable, factorize, factorize_many, primes_up_to

__all__ = [
    "INT_LIMIT",
    "BIG_LIMIT",
    "int_power",
    "residual_spec",
    "eval_values",
    "eval_progression",
    "additive_progression",
    "form_values",
    "eval_form_grid",
    "eval_exponents",
    "linear_factors",
]

INT_LIMIT = 1 << 62
BIG_LIMIT = 1 << 126
# Past this square-root bound the sieves give way to per-element factoring.
SIEVE_PRIME_LIMIT = 10**8
_LARGE_CHUNK = 4096


def int_power(z, e) -> np.ndarray:
    """``z**e`` for complex ``z`` and nonnegative integer arrays ``e`` by
    repeated squaring (exact on roots of unity of small order)."""
    e = np.array(e, dtype=np.int64, copy=True)
    z = np.asarray(z, dtype=complex)
    z, e = np.broadcast_arrays(z, e)
    base = z.copy()
    e = e.copy()
    out = np.ones(z.shape, dtype=complex)
    while (e > 0).any():
        odd = (e & 1) == 1
        out[odd] *= base[odd]
        base = base * base
        e >>= 1
    return out


def _compose(leaves) -> MultFn | None:
    spec = None
    for leaf, c in leaves:
        piece = Conjugate(leaf) if c else leaf
        spec = piece if spec is None else Product(spec, piece)
    return spec


def _split(f: MultFn):
    direct, resid = [], []
    for leaf, c in f.leaves():
        (direct if leaf.direct else resid).append((leaf, c))
    return direct, resid


def residual_spec(f: MultFn) -> MultFn | None:
    """Product of the leaves of ``f`` that cannot be evaluated directly."""
    return _compose(_split(f)[1])


def _apply_direct(direct, absv) -> np.ndarray:
    out = np.ones(absv.shape, dtype=complex)
    for leaf, c in direct:
        v = leaf.direct_values(absv)
        out *= np.conj(v) if c else v
    return out


def _abs_array(values):
    """Absolute values as int64 when safe, else as Python ints."""
    arr = np.asarray(values)
    if arr.dtype == object:
        absv = np.abs(arr)
        mx = max((int(v) for v in absv.ravel()), default=0)
        if mx >= BIG_LIMIT:
            raise RangeError(f"value {mx} exceeds the 2**126 budget")
        if mx < INT_LIMIT:
            return absv.astype(np.int64)
        return absv
    if arr.dtype.kind not in "iu":
        raise TypeError("integer values expected")
    if arr.dtype == np.uint64 and arr.size and int(arr.max()) >= INT_LIMIT:
        return np.array([int(v) for v in arr.ravel()], dtype=object).reshape(arr.shape)
    absv = np.abs(arr.astype(np.int64))
    if absv.size and int(absv.max()) >= INT_LIMIT:
        return np.array([abs(int(v)) for v in arr.ravel()], dtype=object).reshape(arr.shape)
    return absv


def _residual_generic(spec: MultFn, absv: np.ndarray, table: PrimeTable | None) -> np.ndarray:
    """Residual values at positive integers with no usable structure."""
    out = np.ones(absv.shape, dtype=complex)
    if absv.size == 0:
        return out
    if absv.dtype != object and table is not None and int(absv.max()) <= table.bound:
        primes = table.primes
        fpv = spec.at_primes(primes)
        w = absv.astype(np.int64, copy=True)
        act = np.nonzero(w > 1)[0]
        while act.size:
            p = table.spf[w[act]].astype(np.int64)
            out[act] *= fpv[np.searchsorted(primes, p)]
            w[act] //= p
            act = act[w[act] > 1]
        return out
    if absv.dtype != object:
        pm, counts = factorize_many(absv)
        for k in range(int(counts.max(initial=0))):
            rows = np.nonzero(counts > k)[0]
            out[rows] *= spec.at_primes(pm[rows, k].astype(np.int64))
        return out
    for i, v in enumerate(absv):
        for p, e in factorize(int(v), table):
            out[i] *= spec.at_prime(p) ** e
    return out


def eval_values(f: MultFn, values, table: PrimeTable | None = None) -> np.ndarray:
    """``f`` at every entry of an integer array (any shape)."""
    arr = np.asarray(values)
    shape = arr.shape
    absv = _abs_array(arr.ravel())
    nz = np.nonzero(absv != 0)[0]
    out = np.zeros(absv.shape, dtype=complex)
    v = absv[nz]
    direct, resid = _split(f)
    vals = _apply_direct(direct, v)
    if resid:
        vals *= _residual_generic(_compose(resid), v, table)
    out[nz] = vals
    return out.reshape(shape)


# ---------------------------------------------------------------------------
# Sieve machinery


class _Sieve:
    """Walks the prime factorizations of a flat array of *positive* int64
    values, given a generator of candidate positions per prime.

    ``_positions`` yields ``(idx, p)`` where either ``p`` is a scalar and the
    indices are distinct, or ``p`` is an array aligned with ``idx``.  Every
    index divisible by ``p`` must be produced exactly once per prime.
    """

    def __init__(self, absv: np.ndarray):
        self.absv = absv

    def _positions(self):
        raise NotImplementedError

    def hits(self):
        absv = self.absv
        cof = absv.copy()
        for idx, p in self._positions():
            if idx.size == 0:
                continue
            scalar = np.ndim(p) == 0
            w = absv[idx] // p
            e = np.ones(idx.size, dtype=np.int64)
            m = np.nonzero(w % p == 0)[0]
            while m.size:
                pm = p if scalar else p[m]
                w[m] //= pm
                e[m] += 1
                m = m[w[m] % pm == 0]
            pe = np.power(p, e)
            if scalar:
                cof[idx] //= pe
            else:
                np.floor_divide.at(cof, idx, pe)
            yield idx, p, e
        rest = np.nonzero(cof > 1)[0]
        yield rest, cof[rest], np.ones(rest.size, dtype=np.int64)

    def multiplicative(self, spec: MultFn) -> np.ndarray:
        acc = np.ones(self.absv.size, dtype=complex)
        for idx, p, e in self.hits():
            if idx.size == 0:
                continue
            if np.ndim(p) == 0:
                fp = spec.at_prime(int(p))
                acc[idx] *= int_power(fp, e)
            else:
                np.multiply.at(acc, idx, int_power(spec.at_primes(p), e))
        return acc

    def additive(self, h) -> np.ndarray:
        acc = np.zeros(self.absv.size, dtype=complex)
        for idx, p, e in self.hits():
            if idx.size == 0:
                continue
            pa = np.full(idx.size, p, dtype=np.int64) if np.ndim(p) == 0 else p
            np.add.at(acc, idx, h.at_prime_powers(pa, e))
        return acc


class _ProgressionSieve(_Sieve):
    def __init__(self, absv, zero, Q, c, lo, B):
        super().__init__(absv)
        self.zero, self.Q, self.c, self.lo, self.B = zero, Q, c, lo, B

    def _positions(self):
        L = self.absv.size
        Q, c, lo = self.Q, self.c, self.lo
        primes = primes_up_to(self.B)
        nz = ~self.zero
        qdiv = primes[(Q % primes) == 0] if primes.size else primes
        for p in qdiv:
            p = int(p)
            if c % p == 0:
                yield np.nonzero(nz)[0], p
        good = primes[(Q % primes) != 0] if primes.size else primes
        small = good[good < L]
        if small.size:
            qi = inverse_vec(Q % small, small)
            k0 = ((-c) % small) * qi % small
            i0 = (k0 - lo) % small
            for p, s in zip(small.tolist(), i0.tolist()):
                idx = np.arange(s, L, p)
                yield idx[nz[idx]], p
        large = good[good >= L]
        for start in range(0, large.size, _LARGE_CHUNK):
            ps = large[start : start + _LARGE_CHUNK]
            qi = inverse_vec(Q % ps, ps)
            i0 = (((-c) % ps) * qi % ps - lo) % ps
            sel = np.nonzero(i0 < L)[0]
            idx = i0[sel]
            keep = nz[idx]
            yield idx[keep], ps[sel][keep]


def _progression_values(Q: int, c: int, lo: int, hi: int):
    ends = (Q * lo + c, Q * hi + c)
    mx = max(abs(v) for v in ends)
    if mx >= BIG_LIMIT:
        raise RangeError(f"progression value {mx} exceeds the 2**126 budget")
    k = np.arange(lo, hi + 1, dtype=np.int64)
    if mx < INT_LIMIT:
        return Q * k + c, True
    return np.array([Q * int(v) + c for v in k], dtype=object), False


def _progression_setup(Q, c, lo, hi):
    Q, c, lo, hi = int(Q), int(c), int(lo), int(hi)
    if Q < 1:
        raise ValueError("Q must be positive")
    vals, small = _progression_values(Q, c, lo, hi)
    absv = np.abs(vals)
    zero = absv == 0
    return Q, c, lo, absv, zero, small


def eval_progression(f: MultFn, Q: int, c: int, lo: int, hi: int,
                     table: PrimeTable | None = None) -> np.ndarray:
    """``[f(Q k + c) for k in lo..hi]`` (endpoints inclusive)."""
    Q, c, lo, absv, zero, small = _progression_setup(Q, c, lo, hi)
    out = np.zeros(absv.size, dtype=complex)
    nz = ~zero
    direct, resid = _split(f)
    safe = np.where(zero, 1, absv)
    vals = _apply_direct(direct, safe[nz])
    if resid:
        spec = _compose(resid)
        mx = int(safe.max()) if safe.size else 1
        if small and isqrt(mx) <= SIEVE_PRIME_LIMIT:
            if table is not None and mx <= table.bound:
                res = _residual_generic(spec, safe, table)
            else:
                res = _ProgressionSieve(safe, zero, Q, c, lo, isqrt(mx)).multiplicative(spec)
            vals *= res[nz]
        else:
            vals *= _residual_generic(spec, safe[nz], table)
    out[nz] = vals
    return out


def additive_progression(h, Q: int, c: int, lo: int, hi: int) -> np.ndarray:
    """Additive ``h`` at ``Q k + c`` for ``k = lo..hi``; ``h(0)`` is reported as 0.

    ``h`` must provide ``at_prime_powers(p, e)`` on aligned arrays.
    """
    Q, c, lo, absv, zero, small = _progression_setup(Q, c, lo, hi)
    if not small:
        raise RangeError("additive sieve needs values below 2**62")
    safe = np.where(zero, 1, absv)
    mx = int(safe.max()) if safe.size else 1
    out = _ProgressionSieve(safe, zero, Q, c, lo, isqrt(mx)).additive(h)
    out[zero] = 0
    return out


# ---------------------------------------------------------------------------
# Binary quadratic forms on lattice grids


def _coeffs(form):
    if hasattr(form, "alpha"):
        return int(form.alpha), int(form.beta), int(form.gamma)
    a, b, c = form
    return int(a), int(b), int(c)


def linear_factors(form):
    """Write a reducible form as ``content * (u1 x + v1 y) * (u2 x + v2 y)``.

    Returns ``(content, (u1, v1), (u2, v2))`` or None if irreducible.
    """
    al, be, ga = _coeffs(form)
    D = be * be - 4 * al * ga
    if al == 0 and ga == 0:
        return be, (1, 0), (0, 1)
    if al == 0:
        g = gcd(be, ga)
        return g, (0, 1), (be // g, ga // g)
    if ga == 0:
        g = gcd(al, be)
        return g, (1, 0), (al // g, be // g)
    if D < 0 or isqrt(D) ** 2 != D:
        return None
    s = isqrt(D)
    lin = []
    # alpha x^2 + beta x y + gamma y^2 = alpha (x - r1 y)(x - r2 y)
    for num in (-be + s, -be - s):
        den = 2 * al
        g = gcd(num, den)
        p_, q_ = num // g, den // g
        if q_ < 0:
            p_, q_ = -p_, -q_
        lin.append((q_, -p_))
    content = al // (lin[0][0] * lin[1][0])
    return content, lin[0], lin[1]


def form_values(form, Q: int, a: int, b: int, m_rows, N: int) -> np.ndarray:
    """``P(Q m + a, Q n + b)`` for ``m`` in ``m_rows`` and ``n = 1..N``.

    int64 when every value is below 2**62, else an object array of Python
    ints.  Raises RangeError (with the offending ``(m, n)``) past 2**126.
    """
    al, be, ga = _coeffs(form)
    m_rows = np.asarray(m_rows, dtype=np.int64)
    Q, a, b, N = int(Q), int(a), int(b), int(N)
    xs = [Q * int(m) + a for m in m_rows] or [a]
    X = max(max(abs(v) for v in xs), abs(Q * N + b), abs(Q + b))
    bound = (abs(al) + abs(be) + abs(ga)) * X * X
    if bound < INT_LIMIT:
        x = (Q * m_rows + a)[:, None]
        y = (Q * np.arange(1, N + 1, dtype=np.int64) + b)[None, :]
        return al * x * x + be * x * y + ga * y * y
    x = np.array([[Q * int(m) + a] for m in m_rows], dtype=object).reshape(-1, 1)
    y = np.array([Q * n + b for n in range(1, N + 1)], dtype=object).reshape(1, -1)
    P = al * x * x + be * x * y + ga * y * y
    if bound >= BIG_LIMIT:
        big = np.abs(P) >= BIG_LIMIT
        if big.any():
            i, j = np.argwhere(big)[0]
            where = (int(m_rows[i]), int(j) + 1)
            raise RangeError(f"form value at (m, n) = {where} exceeds 2**126", where=where)
    return P


@functools.lru_cache(maxsize=32)
def _form_primes(al: int, be: int, ga: int, Q: int, B: int):
    """Per-prime data for the irreducible-form sieve up to ``B``."""
    D = be * be - 4 * al * ga
    primes = primes_up_to(B)
    badmask = np.zeros(primes.size, dtype=bool)
    for k in (2, al, ga, D, Q):
        if k:
            badmask |= (k % primes) == 0
    bad = primes[badmask]
    good = primes[~badmask]
    leg = powmod_vec(D % good, (good - 1) // 2, good)
    split = good[leg == 1]
    inert = good[leg != 1]
    # y = sigma x with gamma sigma^2 + beta sigma + alpha = 0
    s1 = np.empty(split.size, dtype=np.int64)
    s2 = np.empty(split.size, dtype=np.int64)
    for i, p in enumerate(split.tolist()):
        r = sqrt_mod_prime(D % p, p)
        inv = pow(2 * ga, -1, p)
        s1[i] = (-be + r) * inv % p
        s2[i] = (-be - r) * inv % p
    qi_split = inverse_vec(Q % split, split) if split.size else split
    qi_inert = inverse_vec(Q % inert, inert) if inert.size else inert
    return bad, split, s1, s2, qi_split, inert, qi_inert


class _FormSieve(_Sieve):
    def __init__(self, absv, zero, form, Q, a, b, m_rows, N, B):
        super().__init__(absv)
        self.zero = zero
        self.form = _coeffs(form)
        self.Q, self.a, self.b = Q, a, b
        self.m_rows = np.asarray(m_rows, dtype=np.int64)
        self.N, self.B = N, B

    def _positions(self):
        al, be, ga = self.form
        Q, a, b, N = self.Q, self.a, self.b, self.N
        R = self.m_rows.size
        nz = ~self.zero
        bad, split, s1, s2, qs, inert, qinv = _form_primes(al, be, ga, Q, self.B)
        flat = self.absv
        for p in bad.tolist():
            idx = np.nonzero((flat % p == 0) & nz)[0]
            yield idx, p
        x = Q * self.m_rows + a
        rows = np.arange(R, dtype=np.int64)

        sm = split <= N
        for p, sa, sb, qi in zip(split[sm].tolist(), s1[sm].tolist(), s2[sm].tolist(), qs[sm].tolist()):
            r = x % p
            cols = p * np.arange(-(-N // p), dtype=np.int64)
            for sig, skip_zero in ((sa, False), (sb, True)):
                n0 = ((sig * r - b) % p) * qi % p
                j0 = (n0 - 1) % p
                rr = rows[r != 0] if skip_zero else rows
                jj = j0[rr][:, None] + cols[None, :]
                ok = jj < N
                idx = (rr[:, None] * N + jj)[ok]
                yield idx[nz[idx]], p

        lg = ~sm
        ps_all, sa_all, sb_all, qi_all = split[lg], s1[lg], s2[lg], qs[lg]
        for start in range(0, ps_all.size, _LARGE_CHUNK):
            ps = ps_all[start : start + _LARGE_CHUNK][None, :]
            qi = qi_all[start : start + _LARGE_CHUNK][None, :]
            r = x[:, None] % ps
            bm = b % ps
            for sig, skip_zero in ((sa_all, False), (sb_all, True)):
                sg = sig[start : start + _LARGE_CHUNK][None, :]
                n0 = ((sg * r - bm) % ps) * qi % ps
                hit = (n0 >= 1) & (n0 <= N)
                if skip_zero:
                    hit &= r != 0
                ri, ci = np.nonzero(hit)
                idx = ri * N + n0[ri, ci] - 1
                keep = nz[idx]
                yield idx[keep], ps[0, ci][keep]

        for p, qi in zip(inert.tolist(), qinv.tolist()):
            if p > N and b % p == 0:
                continue
            n0 = ((-b) % p) * qi % p
            jcols = np.arange((n0 - 1) % p, N, p, dtype=np.int64)
            if jcols.size == 0:
                continue
            rr = rows[x % p == 0]
            if rr.size == 0:
                continue
            idx = (rr[:, None] * N + jcols[None, :]).ravel()
            yield idx[nz[idx]], p


def _residual_linear(spec, lin, Q, a, b, m_rows, N, table):
    """Residual spec on ``u x + v y`` over the grid, via one progression."""
    u, v = lin
    m_rows = np.asarray(m_rows, dtype=np.int64)
    n = np.arange(1, N + 1, dtype=np.int64)
    s = u * m_rows[:, None] + v * n[None, :]
    lo, hi = int(s.min()), int(s.max())
    vals = eval_progression(spec, Q, u * a + v * b, lo, hi, table)
    return vals[s - lo]


def eval_form_grid(f: MultFn, form, Q: int, a: int, b: int, m_rows, N: int,
                   table: PrimeTable | None = None, values: np.ndarray | None = None) -> np.ndarray:
    """``f(P(Q m + a, Q n + b))`` as an array of shape ``(len(m_rows), N)``.

    ``values`` may pass in a precomputed :func:`form_values` block.
    """
    Q, a, b, N = int(Q), int(a), int(b), int(N)
    m_rows = np.asarray(m_rows, dtype=np.int64)
    P = form_values(form, Q, a, b, m_rows, N) if values is None else values
    shape = P.shape
    absv = np.abs(P).ravel()
    zero = absv == 0
    nz = ~zero
    direct, resid = _split(f)
    out = np.zeros(absv.size, dtype=complex)
    safe = np.where(zero, 1, absv)
    if safe.dtype == object:
        safe = safe.astype(object)
    vals = _apply_direct(direct, safe[nz])
    if resid:
        spec = _compose(resid)
        fac = linear_factors(form)
        if fac is not None:
            content, l1, l2 = fac
            r = np.full(shape, spec(content, table) if content else 0j)
            r = r * _residual_linear(spec, l1, Q, a, b, m_rows, N, table)
            r = r * _residual_linear(spec, l2, Q, a, b, m_rows, N, table)
            vals *= r.ravel()[nz]
        else:
            mx = int(safe.max()) if safe.size else 1
            if safe.dtype != object and isqrt(mx) <= SIEVE_PRIME_LIMIT:
                if table is not None and mx <= table.bound:
                    res = _residual_generic(spec, safe, table)
                else:
                    B = isqrt(_grid_bound(form, Q, a, b, N))
                    res = _FormSieve(safe, zero, form, Q, a, b, m_rows, N, B).multiplicative(spec)
                vals *= res[nz]
            else:
                vals *= _residual_generic(spec, safe[nz], table)
    out[nz] = vals
    return out.reshape(shape)


def _grid_bound(form, Q, a, b, N):
    al, be, ga = _coeffs(form)
    X = max(abs(Q * N + a), abs(Q * N + b), abs(Q + a), abs(Q + b))
    return (abs(al) + abs(be) + abs(ga)) * X * X


def eval_exponents(f: MultFn, primes, exponents) -> np.ndarray:
    """``prod_p f(p)**a_p`` for each row of an exponent matrix."""
    primes = np.asarray(primes, dtype=np.int64)
    ex = np.atleast_2d(np.asarray(exponents, dtype=np.int64))
    if primes.size == 0:
        return np.ones(ex.shape[0], dtype=complex)
    fp = f.at_primes(primes)
    return np.prod(int_power(fp[None, :], ex), axis=1)
