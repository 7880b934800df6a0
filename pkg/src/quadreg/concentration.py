"""Concentration estimates for pretentious multiplicative functions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .distance import LegendreSet
from .errors import InvalidArgument, RangeError
from .folner import FolnerBox, FolnerElement, folner_box, restricted_folner_box
from .multfn import (
    DirichletCharacter,
    MultFn,
    PrimeTable,
    eval_form_grid,
    eval_progression,
    factorize,
    int_power,
    primes_up_to,
)
from .multfn.bulk import additive_progression
from .parallel import grid_sum
from .quadforms import QuadForm, is_irreducible

__all__ = [
    "FolnerElement",
    "FolnerBox",
    "folner_box",
    "restricted_folner_box",
    "PretentiousTarget",
    "F_functional",
    "G_functional",
    "linear_deficit",
    "quadratic_deficit",
    "AdditiveFromMult",
    "StronglyAdditive",
    "additive_from_mult",
    "turan_kubilius_variance",
    "turan_kubilius_bound",
    "w_statistic",
]


@dataclass(frozen=True)
class PretentiousTarget:
    """The model function ``chi(n) n^(it)``."""

    chi: DirichletCharacter = field(default_factory=DirichletCharacter.principal)
    t: float = 0.0

    def at_primes(self, ps: np.ndarray) -> np.ndarray:
        ps = np.asarray(ps, dtype=np.int64)
        return self.chi.at(ps) * np.exp(1j * self.t * np.log(ps.astype(float)))


def _window(K, N, table):
    ps = primes_up_to(int(N), table)
    return ps[ps > int(K)]


def _terms(f, target, ps):
    return (f.at_primes(ps) * np.conj(target.at_primes(ps)) - 1.0) / ps


def F_functional(f: MultFn, target: PretentiousTarget, K: int, N: int,
                 table: PrimeTable | None = None) -> complex:
    """``sum_{K < p <= N} (f(p) conj(chi(p)) p^(-it) - 1) / p``."""
    ps = _window(K, N, table)
    return complex(np.sum(_terms(f, target, ps))) if ps.size else 0j


def G_functional(f: MultFn, target: PretentiousTarget, K: int, N: int,
                 table: PrimeTable | None = None, d: int | None = None) -> complex:
    """Without ``d``: the same sum over ``p = 1 (mod 4)``.  With ``d``: twice
    the sum over primes with ``(-d / p) = 1``."""
    ps = _window(K, N, table)
    if d is None:
        ps = ps[ps % 4 == 1]
        scale = 1.0
    else:
        ps = LegendreSet(int(d)).select(ps)
        scale = 2.0
    return complex(scale * np.sum(_terms(f, target, ps))) if ps.size else 0j


def _q_info(Q):
    if isinstance(Q, FolnerElement):
        return Q.magnitude, [p for p, e in zip(Q.primes, Q.exponents) if e > 0]
    Q = int(Q)
    if Q < 1:
        raise InvalidArgument("Q must be positive")
    return Q, [p for p, _ in factorize(Q)]


def _check_support(Q, K):
    Qv, support = _q_info(Q)
    bad = [p for p in support if p > K]
    if bad:
        raise InvalidArgument(f"Q has prime factors above K={K}: {bad[:5]}")
    return Qv


def _deviation(diff, squared):
    return np.abs(diff) ** 2 if squared else np.abs(diff)


def linear_deficit(f: MultFn, target: PretentiousTarget, Q, K: int, N: int,
                   table: PrimeTable | None = None, squared: bool = False) -> float:
    """``E_{n<=N} |f(Qn+1) - (Qn)^(it) exp(F_N(f, K))|``."""
    K, N = int(K), int(N)
    Qv = _check_support(Q, K)
    vals = eval_progression(f, Qv, 1, 1, N, table)
    F = F_functional(f, target, K, N, table)
    n = np.arange(1, N + 1, dtype=float)
    model = np.exp(1j * target.t * (math.log(Qv) + np.log(n))) * np.exp(F)
    return float(np.mean(_deviation(vals - model, squared)))


def quadratic_deficit(f: MultFn, target: PretentiousTarget, Q, K: int, N: int, d: int = 1,
                      offsets: tuple[int, int] = (1, 0), table: PrimeTable | None = None,
                      squared: bool = False, threads: int = 1) -> float:
    """``E_{m,n<=N} |f((Qm+a)^2 + d (Qn+b)^2) - Q^(2it) |m^2 + d n^2|^(it) exp(G_{d,N})|``."""
    K, N, d = int(K), int(N), int(d)
    form = QuadForm(1, 0, d)
    if not is_irreducible(form):
        raise InvalidArgument(f"m^2 + ({d}) n^2 is reducible")
    Qv = _check_support(Q, K)
    a, b = (int(v) for v in offsets)
    G = G_functional(f, target, K, N, table, d=d)
    lead = np.exp(2j * target.t * math.log(Qv)) * np.exp(G)
    n = np.arange(1, N + 1, dtype=float)[None, :]

    def block(rows):
        vals = eval_form_grid(f, form, Qv, a, b, rows, N, table)
        m = rows.astype(float)[:, None]
        base = np.abs(m * m + d * n * n)
        osc = np.exp(1j * target.t * np.log(np.where(base > 0, base, 1.0)))
        return _deviation(vals - lead * osc, squared)

    return float(grid_sum(block, N, N, threads) / (N * N))


class _Additive:
    def __call__(self, n: int) -> complex:
        n = abs(int(n))
        if n == 0:
            return 0j
        total = 0j
        for p, e in factorize(n):
            total += complex(self.at_prime_powers(np.array([p]), np.array([e]))[0])
        return total

    def at_primes(self, ps) -> np.ndarray:
        ps = np.asarray(ps, dtype=np.int64)
        return self.at_prime_powers(ps, np.ones(ps.shape, dtype=np.int64))


@dataclass(frozen=True)
class AdditiveFromMult(_Additive):
    """``h(p^k) = f(p)^k - 1`` extended additively over ``p^k || n``."""

    f: MultFn

    def at_prime_powers(self, ps, es):
        return int_power(self.f.at_primes(ps), es) - 1.0


@dataclass(frozen=True, eq=False)
class StronglyAdditive(_Additive):
    """``h(p^k) = h(p)`` for a vectorized prime rule ``fn``."""

    fn: object
    name: str = "h"

    def at_prime_powers(self, ps, es):
        return np.asarray(self.fn(np.asarray(ps)), dtype=complex) * np.ones(np.shape(es))


def additive_from_mult(f: MultFn) -> AdditiveFromMult:
    return AdditiveFromMult(f)


def turan_kubilius_variance(h, Q, K: int, N: int, table: PrimeTable | None = None) -> float:
    """``E_{n<=N} |h(Qn+1) - H_N|^2`` with ``H_N = sum_{K<p<=N} h(p)/p``."""
    K, N = int(K), int(N)
    Qv = _check_support(Q, K)
    if Qv * N + 1 >= 1 << 62:
        raise RangeError("Q N + 1 exceeds the additive sieve range")
    ps = _window(K, N, table)
    H = complex(np.sum(h.at_primes(ps) / ps)) if ps.size else 0j
    vals = additive_progression(h, Qv, 1, 1, N)
    return float(np.mean(np.abs(vals - H) ** 2))


def turan_kubilius_bound(h, K: int, N: int, table: PrimeTable | None = None) -> float:
    """``sum_{K<p<=N} |h(p)|^2 / p``."""
    ps = _window(K, N, table)
    return float(np.sum(np.abs(h.at_primes(ps)) ** 2 / ps)) if ps.size else 0.0


def _exactly_divides(vals_mod, p, p2):
    return (vals_mod % p == 0) & (vals_mod % p2 != 0)


def w_statistic(p: int, q: int, Q: int, N: int, argument="linear") -> float:
    """Frequency of ``p || arg`` and ``q || arg`` over the index box.

    ``argument`` is ``"linear"`` (``Qn + 1``, ``n <= N``) or
    ``("quadratic", d)`` (``(Qm+1)^2 + d (Qn)^2``, ``m, n <= N``).
    """
    p, q, Q, N = int(p), int(q), int(Q), int(N)
    if Q % p == 0 or Q % q == 0:
        raise InvalidArgument("p and q must not divide Q")
    M = (p * p) if p == q else (p * p * q * q)
    if M >= 1 << 31:
        raise RangeError("p^2 q^2 too large for modular counting")
    n = np.arange(1, N + 1, dtype=np.int64)
    if argument == "linear":
        v = (Q % M * n + 1) % M
    else:
        kind, d = argument
        if kind != "quadratic":
            raise InvalidArgument(f"unknown argument {argument!r}")
        x = (Q % M * n + 1) % M
        y = (Q % M * n) % M
        v = (x[:, None] * x[:, None] + (int(d) % M) * (y[None, :] * y[None, :] % M)) % M
    hit = _exactly_divides(v, p, p * p)
    if q != p:
        hit &= _exactly_divides(v, q, q * q)
    return float(np.count_nonzero(hit)) / v.size
