"""Pretentious distance and the prime sets it is restricted to."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument
from .multfn import Archimedean, Character, DirichletCharacter, MultFn, PrimeTable, primes_up_to
from .multfn.characters import legendre_symbol
from .multfn.modular import powmod_vec

__all__ = [
    "PrimeSetSpec",
    "AllPrimes",
    "Residues",
    "LegendreSet",
    "legendre_symbol",
    "prime_set_contains",
    "distance_sq",
    "distance_profile",
    "distance_to_twisted_character",
]


class PrimeSetSpec:
    def mask(self, primes: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def contains(self, p: int) -> bool:
        return bool(self.mask(np.array([int(p)], dtype=np.int64))[0])

    def select(self, primes: np.ndarray) -> np.ndarray:
        primes = np.asarray(primes, dtype=np.int64)
        return primes[self.mask(primes)]


@dataclass(frozen=True)
class AllPrimes(PrimeSetSpec):
    def mask(self, primes):
        return np.ones(np.shape(primes), dtype=bool)

    def __str__(self):
        return "all"


@dataclass(frozen=True)
class Residues(PrimeSetSpec):
    """Primes lying in the listed residue classes mod ``modulus``."""

    modulus: int
    allowed: frozenset

    def __post_init__(self):
        if self.modulus < 1:
            raise InvalidArgument("modulus must be positive")
        object.__setattr__(self, "allowed", frozenset(int(r) % self.modulus for r in self.allowed))

    def mask(self, primes):
        return np.isin(np.asarray(primes) % self.modulus, sorted(self.allowed))

    def __str__(self):
        return f"residues({self.modulus};{','.join(map(str, sorted(self.allowed)))})"


@dataclass(frozen=True)
class LegendreSet(PrimeSetSpec):
    """Odd primes ``p`` not dividing ``2d`` with ``(-d / p) = 1``."""

    d: int

    def mask(self, primes):
        p = np.asarray(primes, dtype=np.int64)
        out = (p > 2) & ((2 * self.d) % p != 0)
        if out.any():
            q = p[out]
            out[out] = powmod_vec((-self.d) % q, (q - 1) // 2, q) == 1
        return out

    def __str__(self):
        return f"legendre({self.d})"


def prime_set_contains(S: PrimeSetSpec, p: int) -> bool:
    return S.contains(p)


def _terms(f: MultFn, g: MultFn, primes: np.ndarray) -> np.ndarray:
    return (1.0 - np.real(f.at_primes(primes) * np.conj(g.at_primes(primes)))) / primes


def distance_sq(f: MultFn, g: MultFn, X: int, S: PrimeSetSpec | None = None,
                table: PrimeTable | None = None) -> float:
    """``sum_{p <= X, p in S} (1 - Re f(p) conj g(p)) / p``."""
    S = S or AllPrimes()
    primes = S.select(primes_up_to(int(X), table))
    if primes.size == 0:
        return 0.0
    return max(float(np.sum(_terms(f, g, primes))), 0.0)


def distance_profile(f: MultFn, g: MultFn, cutoffs, S: PrimeSetSpec | None = None,
                     table: PrimeTable | None = None) -> list[tuple[int, float]]:
    """``distance_sq`` at each cutoff, from one pass over the primes."""
    S = S or AllPrimes()
    cutoffs = sorted(int(x) for x in cutoffs)
    if not cutoffs:
        return []
    primes = S.select(primes_up_to(cutoffs[-1], table))
    terms = _terms(f, g, primes)
    out = []
    for x in cutoffs:
        k = int(np.searchsorted(primes, x, side="right"))
        out.append((x, max(float(np.sum(terms[:k])), 0.0)))
    return out


def distance_to_twisted_character(f: MultFn, chi: DirichletCharacter, t: float, X: int,
                                  table: PrimeTable | None = None) -> float:
    """Squared distance from ``f`` to ``chi(n) n^(it)`` over primes up to ``X``."""
    return distance_sq(f, Character(chi) * Archimedean(float(t)), X, AllPrimes(), table)
