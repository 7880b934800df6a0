"""Dirichlet characters as explicit value tables."""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass
from math import gcd

import numpy as np

from ..errors import InvalidArgument
from .primes import factorize

__all__ = [
    "DirichletCharacter",
    "dirichlet_characters",
    "legendre_symbol",
    "root_of_unity",
]

_TOL = 1e-9


def root_of_unity(num: int, den: int) -> complex:
    """``e(num/den)``, snapped to exact values at quarter turns."""
    num %= den
    if (4 * num) % den == 0:
        return (1, 1j, -1, -1j)[4 * num // den]
    return cmath.exp(2j * cmath.pi * num / den)


def legendre_symbol(a: int, p: int) -> int:
    """Legendre symbol ``(a/p)`` by Euler's criterion."""
    if p < 3 or p % 2 == 0 or len(factorize(p)) != 1 or factorize(p)[0][1] != 1:
        raise InvalidArgument(f"Legendre symbol needs an odd prime, got {p}")
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


@dataclass(frozen=True)
class DirichletCharacter:
    """A character mod ``modulus`` given by its values on ``0..modulus-1``."""

    modulus: int
    values: tuple

    def __post_init__(self):
        q = int(self.modulus)
        if q < 1:
            raise InvalidArgument("character modulus must be positive")
        vals = tuple(complex(v) for v in self.values)
        if len(vals) != q:
            raise InvalidArgument(f"need {q} values, got {len(vals)}")
        object.__setattr__(self, "modulus", q)
        object.__setattr__(self, "values", vals)
        for r in range(q):
            coprime = gcd(r, q) == 1
            if coprime and abs(abs(vals[r]) - 1) > _TOL:
                raise InvalidArgument(f"|chi({r})| must be 1")
            if not coprime and vals[r] != 0:
                raise InvalidArgument(f"chi({r}) must vanish (gcd > 1)")
        if abs(vals[1 % q] - 1) > _TOL and q > 1:
            raise InvalidArgument("chi(1) must be 1")
        table = np.array(vals, dtype=complex)
        units = np.array([r for r in range(q) if gcd(r, q) == 1], dtype=np.int64)
        prod = table[np.outer(units, units) % q]
        bad = np.abs(prod - np.outer(table[units], table[units])) > _TOL
        if bad.any():
            i, j = np.argwhere(bad)[0]
            raise InvalidArgument(
                f"table is not multiplicative at ({units[i]}, {units[j]})"
            )
        object.__setattr__(self, "_table", table)

    def __call__(self, n: int) -> complex:
        return self.values[int(n) % self.modulus]

    def table(self) -> np.ndarray:
        return self._table

    def at(self, values: np.ndarray) -> np.ndarray:
        return self._table[np.asarray(values) % self.modulus]

    @property
    def is_principal(self) -> bool:
        return all(v == 1 for r, v in enumerate(self.values) if gcd(r, self.modulus) == 1)

    @property
    def is_real(self) -> bool:
        return all(abs(v.imag) < _TOL for v in self.values)

    def conj(self) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, tuple(v.conjugate() for v in self.values))

    @classmethod
    def principal(cls, q: int = 1) -> "DirichletCharacter":
        return cls(q, tuple(1 if gcd(r, q) == 1 else 0 for r in range(q)))

    @classmethod
    def legendre(cls, p: int) -> "DirichletCharacter":
        """The quadratic character ``n -> (n/p)`` for an odd prime ``p``."""
        return cls(p, tuple(legendre_symbol(r, p) for r in range(p)))

    @classmethod
    def from_mapping(cls, q: int, mapping) -> "DirichletCharacter":
        """Build from ``{residue: value}``; unlisted units default to 1."""
        vals = [0j] * q
        for r in range(q):
            if gcd(r, q) == 1:
                vals[r] = complex(mapping.get(r, 1))
        return cls(q, tuple(vals))


def _primitive_root(p: int) -> int:
    phi = p - 1
    fs = [f for f, _ in factorize(phi)] if phi > 1 else []
    for g in range(2, p):
        if all(pow(g, phi // f, p) != 1 for f in fs):
            return g
    return 1


def _local_characters(p: int, k: int):
    """Characters mod ``p**k`` as (value dict on units) lists."""
    q = p**k
    if p == 2:
        if k == 1:
            return [{1: 1}]
        if k == 2:
            return [{1: 1, 3: 1}, {1: 1, 3: -1}]
        order5 = q // 4
        logs = {}
        for u in range(2):
            for v in range(order5):
                logs[(-1) ** u * pow(5, v, q) % q] = (u, v)
        chars = []
        for j1 in range(2):
            for j2 in range(order5):
                chars.append(
                    {r: root_of_unity(j1 * u * order5 + j2 * v * 2, 2 * order5)
                     for r, (u, v) in logs.items()}
                )
        return chars
    phi = q - q // p
    g = _primitive_root(p)
    if k > 1 and pow(g, p - 1, p * p) == 1:
        g += p
    logs = {}
    x = 1
    for i in range(phi):
        logs[x] = i
        x = x * g % q
    return [{r: root_of_unity(j * i, phi) for r, i in logs.items()} for j in range(phi)]


def dirichlet_characters(q: int) -> list[DirichletCharacter]:
    """All characters mod ``q``; index 0 is principal.

    The order is the lexicographic product of the local orders at each prime
    power dividing ``q`` (increasing primes), which makes indices stable.
    """
    if q < 1:
        raise InvalidArgument("modulus must be positive")
    if q == 1:
        return [DirichletCharacter(1, (1,))]
    parts = [(p**k, _local_characters(p, k)) for p, k in factorize(q)]
    out = []
    for combo in itertools.product(*[chars for _, chars in parts]):
        vals = []
        for r in range(q):
            if gcd(r, q) != 1:
                vals.append(0)
                continue
            v = 1
            for (m, _), local in zip(parts, combo):
                v *= local[r % m]
            vals.append(v)
        out.append(DirichletCharacter(q, tuple(vals)))
    return out
