"""Closed descriptions of completely multiplicative functions.

A spec is determined by its values at primes.  Values at other integers
follow by complete multiplicativity with the even extension ``f(0) = 0``,
``f(-n) = f(n)``.  Several variants can also be evaluated *directly* on an
array of integers without factoring them (characters after stripping a
finite set of primes, ``n**(it)`` through the logarithm); the bulk
evaluators use that when they can.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import ClassVar

import numpy as np

from ..errors import InvalidArgument
from .characters import DirichletCharacter
from .primes import PrimeTable, factorize

__all__ = [
    "MultFn",
    "One",
    "Liouville",
    "Character",
    "ModifiedCharacter",
    "Archimedean",
    "FinitePerturbation",
    "SparseFlip",
    "Product",
    "Conjugate",
    "modified_character",
    "eval",
    "eval_range",
]


def strip_primes(values: np.ndarray, primes) -> tuple[np.ndarray, dict]:
    """Divide every listed prime out of ``values`` (entries must be nonzero).

    Returns the stripped array and ``{p: exponent array}``.
    """
    w = np.array(values, copy=True)
    exps = {}
    for p in primes:
        e = np.zeros(w.shape, dtype=np.int64)
        mask = w % p == 0
        while mask.any():
            w[mask] //= p
            e[mask] += 1
            mask = w % p == 0
        exps[p] = e
    return w, exps


class MultFn:
    """Base class for completely multiplicative functions into the unit disk."""

    unimodular: ClassVar[bool] = True
    direct: ClassVar[bool] = False

    def at_prime(self, p: int) -> complex:
        cache = self.__dict__.setdefault("_prime_cache", {})
        try:
            return cache[p]
        except KeyError:
            v = cache[p] = complex(self._at_prime(int(p)))
            return v

    def _at_prime(self, p: int) -> complex:
        raise NotImplementedError

    def at_primes(self, ps) -> np.ndarray:
        ps = np.asarray(ps)
        return np.array([self.at_prime(int(p)) for p in ps.ravel()], dtype=complex).reshape(ps.shape)

    def direct_values(self, v: np.ndarray) -> np.ndarray:
        """Values at positive integers ``v`` without factoring (if ``direct``)."""
        raise NotImplementedError

    def leaves(self, conj: bool = False):
        """Flatten products/conjugations into ``(spec, conjugated)`` pairs."""
        return [(self, conj)]

    def special_primes(self) -> tuple:
        """Primes whose values are not described by the generic rule."""
        return ()

    def __mul__(self, other: "MultFn") -> "MultFn":
        if not isinstance(other, MultFn):
            return NotImplemented
        return Product(self, other)

    def conj(self) -> "MultFn":
        return Conjugate(self)

    def __call__(self, n: int, table: PrimeTable | None = None) -> complex:
        return eval(self, n, table)


@dataclass(frozen=True)
class One(MultFn):
    direct: ClassVar[bool] = True

    def _at_prime(self, p):
        return 1

    def at_primes(self, ps):
        return np.ones(np.shape(ps), dtype=complex)

    def direct_values(self, v):
        return np.ones(np.shape(v), dtype=complex)

    def __str__(self):
        return "one"


@dataclass(frozen=True)
class Liouville(MultFn):
    def _at_prime(self, p):
        return -1

    def at_primes(self, ps):
        return -np.ones(np.shape(ps), dtype=complex)

    def __str__(self):
        return "liouville"


@dataclass(frozen=True)
class Character(MultFn):
    chi: DirichletCharacter
    unimodular: ClassVar[bool] = False
    direct: ClassVar[bool] = True

    def _at_prime(self, p):
        return self.chi(p)

    def at_primes(self, ps):
        return self.chi.at(np.asarray(ps, dtype=np.int64))

    def direct_values(self, v):
        return self.chi.at((np.asarray(v) % self.chi.modulus).astype(np.int64))

    def __str__(self):
        return f"char({self.chi.modulus})"


@dataclass(frozen=True)
class ModifiedCharacter(MultFn):
    """``chi`` at primes not dividing the modulus, ``1`` at those that do."""

    chi: DirichletCharacter
    direct: ClassVar[bool] = True

    def _at_prime(self, p):
        v = self.chi(p)
        return 1 if v == 0 else v

    def at_primes(self, ps):
        vals = self.chi.at(np.asarray(ps, dtype=np.int64))
        return np.where(vals == 0, 1, vals)

    def special_primes(self):
        return tuple(p for p, _ in factorize(self.chi.modulus)) if self.chi.modulus > 1 else ()

    def direct_values(self, v):
        w, _ = strip_primes(v, self.special_primes())
        return self.chi.at((w % self.chi.modulus).astype(np.int64))

    def __str__(self):
        return f"mchar({self.chi.modulus})"


@dataclass(frozen=True)
class Archimedean(MultFn):
    """``n -> n**(i t) = exp(i t log n)``."""

    t: float
    direct: ClassVar[bool] = True

    def _at_prime(self, p):
        return cmath.exp(1j * self.t * np.log(p))

    def at_primes(self, ps):
        return np.exp(1j * self.t * np.log(np.asarray(ps, dtype=float)))

    def direct_values(self, v):
        return np.exp(1j * self.t * np.log(np.asarray(v).astype(float)))

    def __str__(self):
        return f"arch({self.t!r})"


def _as_values_tuple(values):
    if isinstance(values, dict):
        values = values.items()
    return tuple(sorted((int(p), complex(v)) for p, v in values))


@dataclass(frozen=True)
class FinitePerturbation(MultFn):
    """``base`` with its values at finitely many primes replaced."""

    base: MultFn
    values: tuple = ()

    def __post_init__(self):
        vals = _as_values_tuple(self.values)
        for p, _ in vals:
            if len(factorize(p)) != 1 or factorize(p)[0][1] != 1:
                raise InvalidArgument(f"perturbation key {p} is not prime")
        object.__setattr__(self, "values", vals)

    @property
    def unimodular(self):
        return self.base.unimodular and all(abs(abs(v) - 1) < 1e-12 for _, v in self.values)

    @property
    def direct(self):
        return self.base.direct

    def _table(self):
        return dict(self.values)

    def _at_prime(self, p):
        table = self._table()
        return table[p] if p in table else self.base.at_prime(p)

    def at_primes(self, ps):
        out = np.asarray(self.base.at_primes(ps), dtype=complex).copy()
        ps = np.asarray(ps)
        for p, v in self.values:
            out[ps == p] = v
        return out

    def special_primes(self):
        return tuple(sorted(set(self.base.special_primes()) | {p for p, _ in self.values}))

    def direct_values(self, v):
        w, exps = strip_primes(v, [p for p, _ in self.values])
        out = self.base.direct_values(w)
        for p, c in self.values:
            out = out * np.power(complex(c), exps[p])
        return out

    def __str__(self):
        inner = ",".join(f"{p}:{c}" for p, c in self.values)
        return f"perturb({self.base},{{{inner}}})"


@dataclass(frozen=True)
class SparseFlip(MultFn):
    """``base`` with its sign flipped on an explicit finite set of primes."""

    base: MultFn
    primes: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "primes", tuple(sorted(set(int(p) for p in self.primes))))

    @property
    def unimodular(self):
        return self.base.unimodular

    @property
    def direct(self):
        return self.base.direct

    def _perturbation(self):
        return FinitePerturbation(self.base, {p: -self.base.at_prime(p) for p in self.primes})

    def _at_prime(self, p):
        v = self.base.at_prime(p)
        return -v if p in self.primes else v

    def at_primes(self, ps):
        out = np.asarray(self.base.at_primes(ps), dtype=complex).copy()
        flip = np.isin(np.asarray(ps), self.primes)
        out[flip] = -out[flip]
        return out

    def special_primes(self):
        return tuple(sorted(set(self.base.special_primes()) | set(self.primes)))

    def direct_values(self, v):
        return self._perturbation().direct_values(v)

    def __str__(self):
        return f"flip({self.base},[{','.join(map(str, self.primes))}])"


@dataclass(frozen=True)
class Product(MultFn):
    left: MultFn
    right: MultFn

    @property
    def unimodular(self):
        return self.left.unimodular and self.right.unimodular

    @property
    def direct(self):
        return self.left.direct and self.right.direct

    def _at_prime(self, p):
        return self.left.at_prime(p) * self.right.at_prime(p)

    def at_primes(self, ps):
        return self.left.at_primes(ps) * self.right.at_primes(ps)

    def direct_values(self, v):
        return self.left.direct_values(v) * self.right.direct_values(v)

    def leaves(self, conj=False):
        return self.left.leaves(conj) + self.right.leaves(conj)

    def special_primes(self):
        return tuple(sorted(set(self.left.special_primes()) | set(self.right.special_primes())))

    def __str__(self):
        return f"prod({self.left},{self.right})"


@dataclass(frozen=True)
class Conjugate(MultFn):
    inner: MultFn

    @property
    def unimodular(self):
        return self.inner.unimodular

    @property
    def direct(self):
        return self.inner.direct

    def _at_prime(self, p):
        return self.inner.at_prime(p).conjugate()

    def at_primes(self, ps):
        return np.conj(self.inner.at_primes(ps))

    def direct_values(self, v):
        return np.conj(self.inner.direct_values(v))

    def leaves(self, conj=False):
        return self.inner.leaves(not conj)

    def special_primes(self):
        return self.inner.special_primes()

    def __str__(self):
        return f"conj({self.inner})"


def modified_character(chi: DirichletCharacter) -> ModifiedCharacter:
    """The completely multiplicative function agreeing with ``chi`` off its
    modulus and equal to 1 at primes dividing it."""
    return ModifiedCharacter(chi)


def eval(f: MultFn, n: int, table: PrimeTable | None = None) -> complex:  # noqa: A001
    """``f(n)`` with ``f(0) = 0`` and ``f(-n) = f(n)``."""
    n = abs(int(n))
    if n == 0:
        return 0j
    out = 1 + 0j
    for p, e in factorize(n, table):
        out *= f.at_prime(p) ** e
    return out


def eval_range(f: MultFn, N: int, table: PrimeTable) -> np.ndarray:
    """``[f(1), ..., f(N)]`` via the smallest-prime-factor recursion.

    ``f(n) = f(spf(n)) * f(n / spf(n))``; processed in doubling blocks so each
    block only reads already computed entries.
    """
    from ..errors import RangeError

    N = int(N)
    if N > table.bound:
        raise RangeError(f"N={N} exceeds the prime table bound {table.bound}")
    vals = np.zeros(N + 1, dtype=complex)
    if N < 1:
        return vals[1:]
    vals[1] = 1
    primes = table.primes[: np.searchsorted(table.primes, N, side="right")]
    fp = np.zeros(N + 1, dtype=complex)
    fp[primes] = f.at_primes(primes)
    spf = table.spf
    lo = 2
    while lo <= N:
        hi = min(2 * lo - 1, N)
        n = np.arange(lo, hi + 1)
        p = spf[lo : hi + 1].astype(np.int64)
        vals[lo : hi + 1] = fp[p] * vals[n // p]
        lo = hi + 1
    return vals[1:]
