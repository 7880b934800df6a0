"""Gowers uniformity norms, Fourier diagnostics and related averages."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument, Unsupported
from .parallel import map_ordered, pairwise_sum

__all__ = [
    "CyclicSequence",
    "gowers_norm",
    "gowers_norm_interval",
    "gowers_norm_bruteforce",
    "fourier_sup",
    "weyl_square_average",
    "daboussi_katai_stat",
]

_TOL = 1e-12
_SHIFT_BLOCK = 128


@dataclass(frozen=True, eq=False)
class CyclicSequence:
    """A function ``Z_N -> C`` bounded by 1, stored as ``values[0..N-1]``."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex).ravel().copy()
        if v.size == 0:
            raise InvalidArgument("empty sequence")
        if np.abs(v).max() > 1 + _TOL:
            raise InvalidArgument("values must lie in the closed unit disk")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def N(self) -> int:
        return self.values.size


def _as_values(a) -> np.ndarray:
    return a.values if isinstance(a, CyclicSequence) else CyclicSequence(a).values


def _u2_fourth(b: np.ndarray) -> np.ndarray:
    """``||b||_{U^2}^4`` along the last axis, via ``sum |b^|^4``."""
    n = b.shape[-1]
    bh = np.fft.fft(b, axis=-1) / n
    return np.sum(np.abs(bh) ** 4, axis=-1)


def gowers_norm(a, s: int, threads: int = 1) -> float:
    """``||a||_{U^s(Z_N)}`` for ``s`` in 1..3."""
    v = _as_values(a)
    if s == 1:
        return float(abs(np.mean(v)))
    if s == 2:
        return float(max(_u2_fourth(v), 0.0) ** 0.25)
    if s != 3:
        raise Unsupported(f"U^{s} is not implemented (s must be 1, 2 or 3)")
    n = v.size
    idx = np.arange(n)

    def block(lo):
        h = np.arange(lo, min(n, lo + _SHIFT_BLOCK))
        shifted = v[(idx[None, :] + h[:, None]) % n]
        return np.sum(_u2_fourth(v[None, :] * np.conj(shifted)))

    parts = map_ordered(block, range(0, n, _SHIFT_BLOCK), threads)
    eighth = pairwise_sum(parts) / n
    return float(max(eighth, 0.0) ** 0.125)


def gowers_norm_bruteforce(a, s: int) -> float:
    """The fully expanded ``2^s``-fold average (small ``N`` only)."""
    v = _as_values(a)
    n = v.size
    if n ** (s + 1) > 1 << 26:
        raise InvalidArgument("brute force is limited to N^(s+1) <= 2^26")
    grids = np.meshgrid(*([np.arange(n)] * (s + 1)), indexing="ij")
    x, hs = grids[0], grids[1:]
    prod = np.ones(x.shape, dtype=complex)
    for w in range(1 << s):
        pos = x.copy()
        bits = 0
        for i in range(s):
            if w >> i & 1:
                pos = pos + hs[i]
                bits += 1
        term = v[pos % n]
        prod *= np.conj(term) if bits % 2 else term
    val = float(np.real(np.mean(prod)))
    return max(val, 0.0) ** (1.0 / (1 << s))


def gowers_norm_interval(a, s: int, threads: int = 1) -> float:
    """Norm of ``a`` on ``[N]`` through its periodic extension to ``Z_N``."""
    return gowers_norm(CyclicSequence(np.asarray(a, dtype=complex)), s, threads)


def fourier_sup(a) -> float:
    """``max_j |E_{n<=N} a(n) e(n j / 4N)|`` over ``j = 0..4N-1``.

    ``a`` holds ``a(1), ..., a(N)``.  The average is Lipschitz in ``alpha``
    with constant at most ``pi (N + 1)`` and every ``alpha`` is within
    ``1/(8N)`` of the grid, so the grid maximum is below the true sup by at
    most ``pi (N + 1) / (8 N)``.  Frequencies on the grid are exact.
    """
    v = np.asarray(a.values if isinstance(a, CyclicSequence) else a, dtype=complex).ravel()
    n = v.size
    M = 4 * n
    b = np.zeros(M, dtype=complex)
    b[1 : n + 1] = v
    sums = np.fft.ifft(b) * M
    return float(np.abs(sums).max() / n)


def weyl_square_average(t: float, N: int) -> complex:
    """``E_{n<=N} e(n^2 t)``."""
    N = int(N)
    if N < 1:
        raise InvalidArgument("N must be positive")
    n = np.arange(1, N + 1, dtype=np.float64)
    phase = np.mod(n * n * float(t), 1.0)
    return complex(np.mean(np.exp(2j * np.pi * phase)))


def daboussi_katai_stat(a, p: int, q: int, N: int) -> complex:
    """``E_{n<=N} a(p n) conj(a(q n))`` with ``a`` given on ``[N max(p, q)]``."""
    p, q, N = int(p), int(q), int(N)
    if p == q:
        raise InvalidArgument("p and q must be distinct")
    v = np.asarray(a, dtype=complex).ravel()
    if v.size < N * max(p, q):
        raise InvalidArgument(f"sequence must cover [1, {N * max(p, q)}]")
    n = np.arange(1, N + 1)
    return complex(np.mean(v[p * n - 1] * np.conj(v[q * n - 1])))
