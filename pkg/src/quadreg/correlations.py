"""Lattice-restricted correlation averages over linear and quadratic forms."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd, prod

import numpy as np

from .errors import InvalidArgument, NotFound
from .multfn import (
    Character,
    ModifiedCharacter,
    MultFn,
    PrimeTable,
    eval,
    eval_form_grid,
    eval_progression,
    factorize,
    form_values,
    primes_up_to,
)
from .multfn.modular import crt, sqrt_mod_prime_power
from .parallel import grid_sum
from .quadforms import QuadForm

__all__ = [
    "Lattice",
    "ArcWeight",
    "corr_quad_pair",
    "corr_general",
    "L_quantity",
    "A_quantity",
    "weighted_L_quantities",
    "mu_delta",
    "solve_offsets",
    "two_form_L",
    "Q_K",
    "character_modulus",
]

M2_MINUS_N2 = QuadForm(1, 0, -1)
M2_PLUS_N2 = QuadForm(1, 0, 1)
MN = QuadForm(0, 1, 0)
M2_PLUS_2N2 = QuadForm(1, 0, 2)
M2_MINUS_2N2 = QuadForm(1, 0, -2)


def _q_parts(Q):
    """``(magnitude, f -> f(Q))`` for an integer or a Følner element."""
    if hasattr(Q, "exponents") and hasattr(Q, "primes"):
        return int(Q.magnitude), (lambda f, table=None: Q.value(f))
    Q = int(Q)
    if Q < 1:
        raise InvalidArgument("Q must be positive")
    return Q, (lambda f, table=None: eval(f, Q, table))


@dataclass(frozen=True)
class Lattice:
    """Arguments ``(Q m + a, Q n + b)``."""

    Q: int = 1
    a: int = 0
    b: int = 0

    def __post_init__(self):
        q, _ = _q_parts(self.Q)
        object.__setattr__(self, "Q", q)
        if self.a < 0 or self.b < 0:
            raise InvalidArgument("offsets must be nonnegative")


@dataclass(frozen=True)
class ArcWeight:
    """``1_I(P1(m,n)^(it) P2(m,n)^(-it))`` times ``1_{m>n}`` (optional).

    ``I`` is the half-open arc of length ``delta`` centred at ``center``; the
    phase is ``(t / 2 pi)(ln|P1| - ln|P2|)`` taken mod 1.  Cells where either
    form vanishes get weight 0.
    """

    delta: float
    t: float = 1.0
    center: complex = 1.0
    require_m_gt_n: bool = True
    P1: QuadForm = M2_MINUS_N2
    P2: QuadForm = MN

    def __post_init__(self):
        if not 0 < self.delta < 0.5:
            raise InvalidArgument("delta must lie in (0, 1/2)")
        if abs(abs(complex(self.center)) - 1) > 1e-12:
            raise InvalidArgument("center must lie on the unit circle")

    def mask(self, m_rows, N: int) -> np.ndarray:
        m = np.asarray(m_rows, dtype=np.int64)[:, None]
        n = np.arange(1, N + 1, dtype=np.int64)[None, :]
        p1 = np.abs(self.P1(m.astype(float), n.astype(float)))
        p2 = np.abs(self.P2(m.astype(float), n.astype(float)))
        ok = (p1 > 0) & (p2 > 0)
        with np.errstate(divide="ignore"):
            phase = self.t / (2 * np.pi) * (np.log(np.where(ok, p1, 1.0)) - np.log(np.where(ok, p2, 1.0)))
        c = np.angle(complex(self.center)) / (2 * np.pi)
        w = self.delta / (4 * np.pi)
        inside = np.mod(phase - c + w, 1.0) < 2 * w
        out = ok & inside
        if self.require_m_gt_n:
            out &= m > n
        return out


def _check_N(N):
    N = int(N)
    if N < 1:
        raise InvalidArgument("N must be positive")
    return N


def corr_quad_pair(f: MultFn, g: MultFn, P1: QuadForm, P2: QuadForm, N: int,
                   lat: Lattice | None = None, weight: ArcWeight | None = None,
                   positivity: bool = False, table: PrimeTable | None = None,
                   threads: int = 1) -> complex:
    """``E_{m,n<=N} [w] [1_S] f(P1(x, y)) conj(g(P2(x, y)))`` with
    ``(x, y) = (Q m + a, Q n + b)`` and ``S = {P1 > 0, P2 > 0}``."""
    N = _check_N(N)
    lat = lat or Lattice()
    Q, a, b = lat.Q, lat.a, lat.b

    def block(rows):
        v1 = form_values(P1, Q, a, b, rows, N)
        v2 = form_values(P2, Q, a, b, rows, N)
        out = eval_form_grid(f, P1, Q, a, b, rows, N, table, values=v1)
        out *= np.conj(eval_form_grid(g, P2, Q, a, b, rows, N, table, values=v2))
        if positivity:
            out *= ((v1 > 0) & (v2 > 0)).astype(bool)
        if weight is not None:
            out *= weight.mask(rows, N)
        return out

    return complex(grid_sum(block, N, N, threads) / (N * N))


def _linear_grid(f, lin, Q, a, b, rows, N, table):
    u, v = int(lin[0]), int(lin[1])
    if u == 0 and v == 0:
        raise InvalidArgument("linear forms must be nonzero")
    n = np.arange(1, N + 1, dtype=np.int64)
    s = u * rows[:, None] + v * n[None, :]
    lo, hi = int(s.min()), int(s.max())
    vals = eval_progression(f, Q, u * a + v * b, lo, hi, table)
    return vals[s - lo]


def corr_general(f_list, L_list, g: MultFn, P: QuadForm, N: int, lat: Lattice | None = None,
                 table: PrimeTable | None = None, threads: int = 1) -> complex:
    """``E_{m,n<=N} prod_j f_j(L_j(x, y)) g(P(x, y))`` on the lattice.

    Linear forms are pairs ``(u, v)`` meaning ``u x + v y``.  ``g`` enters
    unconjugated; pass ``conj(g)`` explicitly if needed.
    """
    N = _check_N(N)
    if len(f_list) != len(L_list):
        raise InvalidArgument("need one linear form per function")
    lat = lat or Lattice()
    Q, a, b = lat.Q, lat.a, lat.b

    def block(rows):
        out = eval_form_grid(g, P, Q, a, b, rows, N, table)
        for fj, lj in zip(f_list, L_list):
            out *= _linear_grid(fj, lj, Q, a, b, rows, N, table)
        return out

    return complex(grid_sum(block, N, N, threads) / (N * N))


def _L_block_factory(f, Q, fQ, N, table):
    """Pieces of ``f((Qm+1)^2 - (Qn)^2) conj f(2 (Qm+1) Q n)``.

    ``(Qm+1)^2 - (Qn)^2 = (Q(m-n)+1)(Q(m+n)+1)`` and the second argument is
    ``2 * (Qm+1) * Q * n``, so everything reduces to ``f(Q k + 1)``.
    """
    u = eval_progression(f, Q, 1, 1 - N, 2 * N, table)  # index k + N - 1
    fn = eval_progression(f, 1, 0, 1, N, table)
    f2 = eval(f, 2, table)
    off = N - 1

    def minus(rows):
        m = rows[:, None]
        n = np.arange(1, N + 1, dtype=np.int64)[None, :]
        first = u[m - n + off] * u[m + n + off]
        second = f2 * u[m + off] * fQ * fn[n - 1]
        return first * np.conj(second)

    def second_only(rows):
        m = rows[:, None]
        n = np.arange(1, N + 1, dtype=np.int64)[None, :]
        return np.conj(f2 * u[m + off] * fQ * fn[n - 1])

    return minus, second_only


def L_quantity(f: MultFn, Q, N: int, table: PrimeTable | None = None, threads: int = 1) -> complex:
    """``E_{m,n<=N} f((Qm+1)^2 - (Qn)^2) conj(f(2 (Qm+1) Q n))``."""
    N = _check_N(N)
    Qv, fq = _q_parts(Q)
    minus, _ = _L_block_factory(f, Qv, fq(f, table), N, table)
    return complex(grid_sum(minus, N, N, threads) / (N * N))


def A_quantity(f: MultFn, N: int, table: PrimeTable | None = None) -> complex:
    """``E_{n<=N} conj(f(2n))``."""
    N = _check_N(N)
    return complex(np.mean(np.conj(eval_progression(f, 2, 0, 1, N, table))))


def weighted_L_quantities(f: MultFn, Q, N: int, delta: float, variant: str = "minus",
                          t: float = 1.0, center: complex = 1.0,
                          table: PrimeTable | None = None, threads: int = 1) -> complex:
    """Arc-weighted versions of :func:`L_quantity`.

    ``minus``: weight on ``(m^2 - n^2, mn)`` with ``f((Qm+1)^2 - (Qn)^2)``;
    ``plus``: weight on ``(m^2 + n^2, mn)`` with ``f((Qm+1)^2 + (Qn)^2)``.
    Both use ``conj(f(2 (Qm+1) Q n))`` and evaluate the weight at ``(m, n)``.
    """
    N = _check_N(N)
    Qv, fq = _q_parts(Q)
    minus, second = _L_block_factory(f, Qv, fq(f, table), N, table)
    if variant == "minus":
        w = ArcWeight(delta, t, center, True, M2_MINUS_N2, MN)

        def block(rows):
            return minus(rows) * w.mask(rows, N)
    elif variant == "plus":
        w = ArcWeight(delta, t, center, True, M2_PLUS_N2, MN)

        def block(rows):
            first = eval_form_grid(f, M2_PLUS_N2, Qv, 1, 0, rows, N, table)
            return first * second(rows) * w.mask(rows, N)
    else:
        raise InvalidArgument("variant must be 'minus' or 'plus'")
    return complex(grid_sum(block, N, N, threads) / (N * N))


def mu_delta(delta: float, t: float, P1: QuadForm, P2: QuadForm, N: int,
             center: complex = 1.0, require_m_gt_n: bool = True, threads: int = 1) -> float:
    """Mass ``E_{m,n<=N} w_delta(m, n)`` of the arc weight."""
    N = _check_N(N)
    w = ArcWeight(delta, t, center, require_m_gt_n, P1, P2)
    return float(grid_sum(lambda rows: w.mask(rows, N).astype(np.int64), N, N, threads)) / (N * N)


# ---------------------------------------------------------------------------
# Offsets for the two-form average

_EXHAUSTIVE_SIDE = 2048
_LOCAL_EXHAUSTIVE = 256


def _offsets_ok(a, b, q, Q1, Q2, Q):
    p1, p2 = a * a + 2 * b * b, a * a - 2 * b * b
    return (p1 - 1) % q == 0 and (p2 - 1) % q == 0 and gcd(p1, Q) == Q1 and gcd(p2, Q) == Q2


def _exhaustive_offsets(q, Q1, Q2, Q, side):
    r = np.arange(1, side + 1, dtype=object if side * side * 3 >= 1 << 62 else np.int64)
    for a in range(1, side + 1):
        p1 = a * a + 2 * r * r
        p2 = a * a - 2 * r * r
        ok = ((p1 - 1) % q == 0) & ((p2 - 1) % q == 0)
        ok &= np.gcd(p1, Q) == Q1 if r.dtype != object else np.array([gcd(int(v), Q) == Q1 for v in p1])
        ok &= np.gcd(np.abs(p2), Q) == Q2 if r.dtype != object else np.array([gcd(int(v), Q) == Q2 for v in p2])
        hit = np.nonzero(ok)[0]
        if hit.size:
            return a, int(r[hit[0]])
    return None


def _local_offsets(p, k, t1, t2, e, vq):
    """``(a, b)`` mod ``p**k`` meeting the conditions at the prime ``p``.

    ``t1, t2`` are the exponents of ``p`` in ``Q1, Q2``; ``e`` in ``Q``;
    ``vq`` in ``q``.
    """
    mod = p**k

    def ok(a, b):
        p1, p2 = a * a + 2 * b * b, a * a - 2 * b * b
        if vq and ((p1 - 1) % p**vq or (p2 - 1) % p**vq):
            return False
        for val, t in ((p1, t1), (p2, t2)):
            if e == 0:
                continue
            v = 0
            while v < e and val % p ** (v + 1) == 0:
                v += 1
            if v != min(t, e):
                return False
        return True

    if mod <= _LOCAL_EXHAUSTIVE:
        for a, b in itertools.product(range(mod), repeat=2):
            if ok(a, b):
                return a, b
        raise NotFound(f"no local offsets modulo {p}^{k}")
    if t1 == 0 and t2 == 0:
        if ok(1, 0):
            return 1, 0
        raise NotFound(f"no local offsets modulo {p}^{k}")
    if p == 2:
        raise NotFound("2 cannot divide Q1 or Q2 with the Hensel construction")
    t, target = (t1, -2) if t1 else (t2, 2)
    lift = min(t + 1, k) if t < e else k
    a0 = sqrt_mod_prime_power(target, p, max(lift, 1))
    a = a0 + (p**t if t < e else 0)
    a %= mod
    if not ok(a, 1):
        raise NotFound(f"local construction failed modulo {p}^{k}")
    return a, 1


def solve_offsets(q: int, Q1: int, Q2: int, Q: int) -> tuple[int, int]:
    """``(a, b)`` with ``a^2 + 2b^2 = a^2 - 2b^2 = 1 (mod q)``,
    ``gcd(a^2 + 2b^2, Q) = Q1`` and ``gcd(a^2 - 2b^2, Q) = Q2``.

    Small cases are searched exhaustively over ``[1, Q q]^2`` and return the
    lexicographically smallest solution.  Larger cases are assembled by the
    Chinese remainder theorem from per-prime solutions (Hensel lifts of
    square roots of -2 or 2); those lie in ``[1, Q q]`` but need not be the
    smallest.
    """
    q, Q1, Q2, Q = int(q), int(Q1), int(Q2), int(Q)
    if min(q, Q1, Q2, Q) < 1:
        raise InvalidArgument("q, Q1, Q2, Q must be positive")
    if gcd(Q1, Q2) != 1 or Q % Q1 or Q % Q2:
        raise InvalidArgument("Q1, Q2 must be coprime divisors of Q")
    if gcd(Q1 * Q2, q) != 1:
        raise InvalidArgument("Q1 Q2 must be coprime to q")
    for p, _ in factorize(Q1):
        if p % 8 not in (1, 3):
            raise InvalidArgument(f"prime {p} of Q1 must be 1 or 3 mod 8")
    for p, _ in factorize(Q2):
        if p % 8 not in (1, 7):
            raise InvalidArgument(f"prime {p} of Q2 must be 1 or 7 mod 8")
    side = Q * q
    if side <= _EXHAUSTIVE_SIDE:
        found = _exhaustive_offsets(q, Q1, Q2, Q, side)
        if found is None:
            raise NotFound(f"no offsets in [1, {side}]^2")
        return found
    fq, fQ = dict(factorize(q)), dict(factorize(Q))
    f1, f2 = dict(factorize(Q1)), dict(factorize(Q2))
    ra, rb, mods = [], [], []
    for p in sorted(set(fq) | set(fQ)):
        e, vq = fQ.get(p, 0), fq.get(p, 0)
        t1, t2 = f1.get(p, 0), f2.get(p, 0)
        need = max(vq, min(max(t1, t2) + 1, e) if e else 0, 1)
        a, b = _local_offsets(p, need, t1, t2, e, vq)
        ra.append(a)
        rb.append(b)
        mods.append(p**need)
    a, M = crt(ra, mods)
    b, _ = crt(rb, mods)
    a, b = a or M, b or M
    if not _offsets_ok(a, b, q, Q1, Q2, Q):
        raise NotFound("assembled offsets failed verification")
    return a, b


def Q_K(K: int) -> int:
    """``prod_{p <= K} p^(2K)``."""
    return prod(int(p) ** (2 * int(K)) for p in primes_up_to(int(K)))


def character_modulus(f: MultFn) -> int:
    """Least common multiple of the character moduli appearing in ``f``."""
    if isinstance(f, (Character, ModifiedCharacter)):
        return f.chi.modulus
    q = 1
    for attr in ("base", "left", "right", "inner"):
        sub = getattr(f, attr, None)
        if isinstance(sub, MultFn):
            m = character_modulus(sub)
            q = q * m // gcd(q, m)
    return q


def two_form_L(f: MultFn, K: int, Q1: int, Q2: int, N: int, q: int | None = None,
               positivity: bool = False, table: PrimeTable | None = None,
               threads: int = 1) -> complex:
    """``E_{m,n<=N} f(P1(x, y)) conj(f(P2(x, y)))`` with ``P1 = m^2 + 2n^2``,
    ``P2 = m^2 - 2n^2`` and ``(x, y) = (Q_K m + a, Q_K n + b)``.

    ``(a, b)`` comes from :func:`solve_offsets` with ``q`` (default: the
    character moduli found in ``f``).
    """
    QK = Q_K(K)
    q = character_modulus(f) if q is None else int(q)
    a, b = solve_offsets(q, int(Q1), int(Q2), QK)
    return corr_quad_pair(f, f, M2_PLUS_2N2, M2_MINUS_2N2, N, Lattice(QK, a, b),
                          None, positivity, table, threads)
