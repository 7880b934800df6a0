"""Multiplicative Følner boxes carried as exponent vectors."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod

import numpy as np

from .errors import InvalidArgument, SizeError
from .multfn import MultFn, eval_exponents, primes_up_to

__all__ = [
    "FolnerElement",
    "FolnerBox",
    "folner_box",
    "restricted_folner_box",
    "restricted_primes",
    "EXHAUSTIVE_LIMIT",
]

EXHAUSTIVE_LIMIT = 10**6


@dataclass(frozen=True)
class FolnerElement:
    """``prod_i primes[i] ** exponents[i]``."""

    primes: tuple
    exponents: tuple

    def __post_init__(self):
        if len(self.primes) != len(self.exponents):
            raise InvalidArgument("primes and exponents differ in length")
        object.__setattr__(self, "primes", tuple(int(p) for p in self.primes))
        object.__setattr__(self, "exponents", tuple(int(e) for e in self.exponents))

    @property
    def magnitude(self) -> int:
        return prod(p**e for p, e in zip(self.primes, self.exponents))

    def bit_length(self) -> int:
        return self.magnitude.bit_length()

    def value(self, f: MultFn) -> complex:
        """``f`` at the element, from the exponent vector."""
        return complex(eval_exponents(f, self.primes, [self.exponents])[0])

    def residue(self, modulus: int) -> int:
        r = 1
        for p, e in zip(self.primes, self.exponents):
            r = r * pow(p, e, modulus) % modulus
        return r % modulus

    def __int__(self):
        return self.magnitude


@dataclass(frozen=True, eq=False)
class FolnerBox:
    """A box ``{prod p^{a_p} : lo < a_p <= hi}`` (or a sample of it).

    ``exponents`` has one row per element, one column per prime.
    """

    primes: np.ndarray
    lo: int
    hi: int
    exponents: np.ndarray
    exhaustive: bool

    @property
    def size(self) -> int:
        return int(self.exponents.shape[0])

    @property
    def full_size(self) -> int:
        return (self.hi - self.lo) ** len(self.primes)

    def __len__(self):
        return self.size

    def __iter__(self):
        ps = tuple(int(p) for p in self.primes)
        for row in self.exponents:
            yield FolnerElement(ps, tuple(int(e) for e in row))

    def values(self, f: MultFn) -> np.ndarray:
        return eval_exponents(f, self.primes, self.exponents)

    def residues(self, modulus: int) -> np.ndarray:
        """Magnitudes mod ``modulus`` (modular exponentiation per prime)."""
        out = np.ones(self.size, dtype=object)
        for j, p in enumerate(self.primes.tolist()):
            tab = {e: pow(p, e, modulus) for e in range(self.lo + 1, self.hi + 1)}
            out = out * np.array([tab[int(e)] for e in self.exponents[:, j]], dtype=object) % modulus
        return out.astype(np.int64) if modulus < 1 << 62 else out


def _box(primes, lo, hi, mode, count, seed) -> FolnerBox:
    primes = np.asarray(primes, dtype=np.int64)
    k = primes.size
    width = hi - lo
    if width < 1 and k:
        return FolnerBox(primes, lo, hi, np.zeros((0, k), dtype=np.int64), True)
    size = width**k
    if mode == "exhaustive":
        if size > EXHAUSTIVE_LIMIT:
            raise SizeError(
                f"box has {size} elements (> {EXHAUSTIVE_LIMIT}); use sampled mode"
            )
        rng = range(lo + 1, hi + 1)
        if k == 0:
            ex = np.zeros((1, 0), dtype=np.int64)
        else:
            ex = np.array(list(itertools.product(rng, repeat=k)), dtype=np.int64)
        return FolnerBox(primes, lo, hi, ex, True)
    if mode == "sampled":
        rng = np.random.default_rng(seed)
        ex = rng.integers(lo + 1, hi + 1, size=(int(count), k), dtype=np.int64)
        return FolnerBox(primes, lo, hi, ex, False)
    if mode == "auto":
        return _box(primes, lo, hi, "exhaustive" if size <= EXHAUSTIVE_LIMIT else "sampled", count, seed)
    raise InvalidArgument(f"unknown mode {mode!r}")


def folner_box(K: int, mode: str = "exhaustive", count: int = 10000, seed: int = 0) -> FolnerBox:
    """``Phi_K``: exponents ``K < a_p <= 2K`` for every prime ``p <= K``."""
    K = int(K)
    if K < 1:
        raise InvalidArgument("K must be positive")
    return _box(primes_up_to(K), K, 2 * K, mode, count, seed)


def restricted_primes(j: int, K: int) -> np.ndarray:
    """Primes ``p <= K`` with ``p = 1, 3 (mod 8)`` (``j = 1``) or
    ``p = 1, 7 (mod 8)`` (``j = 2``)."""
    if j not in (1, 2):
        raise InvalidArgument("j must be 1 or 2")
    ps = primes_up_to(int(K))
    allowed = (1, 3) if j == 1 else (1, 7)
    return ps[np.isin(ps % 8, allowed)]


def restricted_folner_box(j: int, K: int, mode: str = "exhaustive", count: int = 10000,
                          seed: int = 0) -> FolnerBox:
    """``Phi_{j,K}``: exponents ``K < l_p <= floor(3K/2)`` over the
    restricted primes."""
    K = int(K)
    if K < 1:
        raise InvalidArgument("K must be positive")
    return _box(restricted_primes(j, K), K, (3 * K) // 2, mode, count, seed)
