"""Binary quadratic forms, Rado triples, parametrizations and counts."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

import numpy as np

from .errors import InvalidArgument, RangeError

__all__ = [
    "QuadForm",
    "RadoTriple",
    "Parametrization",
    "discriminant",
    "is_irreducible",
    "is_rado_triple",
    "standard_parametrization",
    "general_xyz_parametrization",
    "iter_solutions",
    "enumerate_solutions",
    "count_r2",
    "count_reps_box",
    "divisibility_count_box",
    "isqrt_vec",
]


@dataclass(frozen=True)
class QuadForm:
    """The form ``alpha m^2 + beta m n + gamma n^2``."""

    alpha: int
    beta: int
    gamma: int

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            object.__setattr__(self, name, int(getattr(self, name)))
        if self.alpha == self.beta == self.gamma == 0:
            raise InvalidArgument("the zero form is not allowed")

    @property
    def coeffs(self) -> tuple[int, int, int]:
        return (self.alpha, self.beta, self.gamma)

    @property
    def discriminant(self) -> int:
        return self.beta * self.beta - 4 * self.alpha * self.gamma

    def __call__(self, m, n):
        return self.alpha * m * m + self.beta * m * n + self.gamma * n * n

    def scaled(self, k: int) -> "QuadForm":
        return QuadForm(k * self.alpha, k * self.beta, k * self.gamma)

    def __str__(self):
        terms = []
        for c, mono in ((self.alpha, "m^2"), (self.beta, "m*n"), (self.gamma, "n^2")):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            terms.append(f"{sign}{mag}{mono}")
        s = "".join(terms)
        return s[1:] if s.startswith("+") else s


def discriminant(F: QuadForm) -> int:
    return F.discriminant


def is_irreducible(F: QuadForm) -> bool:
    """True iff ``F`` has no rational linear factor.

    Forms with ``alpha = 0`` or ``gamma = 0`` contain a linear factor and
    count as reducible.
    """
    if F.alpha == 0 or F.gamma == 0:
        return False
    D = F.discriminant
    return D < 0 or isqrt(D) ** 2 != D


@dataclass(frozen=True)
class RadoTriple:
    a: int
    b: int
    c: int

    def __post_init__(self):
        for name in ("a", "b", "c"):
            v = int(getattr(self, name))
            if v < 1:
                raise InvalidArgument("Rado triple entries must be positive")
            object.__setattr__(self, name, v)


def is_rado_triple(T: RadoTriple) -> bool:
    return T.a == T.c or T.b == T.c or T.a + T.b == T.c


def _mul(p, q):
    """Product of homogeneous polynomials given as coefficient lists."""
    out = [0] * (len(p) + len(q) - 1)
    for i, u in enumerate(p):
        for j, v in enumerate(q):
            out[i + j] += u * v
    return out


@dataclass(frozen=True)
class Parametrization:
    """``(x, y, z) = k (Px, Py, Pz)(m, n)`` solving
    ``A x^2 + B y^2 + Dxy x y = C z^2``."""

    px: QuadForm
    py: QuadForm
    pz: QuadForm
    A: int
    B: int
    C: int
    Dxy: int = 0
    name: str = ""

    def at(self, m: int, n: int, k: int = 1) -> tuple[int, int, int]:
        return (k * self.px(m, n), k * self.py(m, n), k * self.pz(m, n))

    def identity_coefficients(self) -> list[int]:
        """Coefficients of ``A Px^2 + B Py^2 + Dxy Px Py - C Pz^2`` (in
        ``m^4, m^3 n, ..., n^4``); all zero for a valid parametrization."""
        x, y, z = (list(f.coeffs) for f in (self.px, self.py, self.pz))
        terms = [
            [self.A * c for c in _mul(x, x)],
            [self.B * c for c in _mul(y, y)],
            [self.Dxy * c for c in _mul(x, y)],
            [-self.C * c for c in _mul(z, z)],
        ]
        return [sum(col) for col in zip(*terms)]

    def verify(self) -> bool:
        return all(c == 0 for c in self.identity_coefficients())

    def check_point(self, m: int, n: int, k: int = 1) -> bool:
        x, y, z = self.at(m, n, k)
        return self.A * x * x + self.B * y * y + self.Dxy * x * y == self.C * z * z


_STANDARD = {
    "PM1": (QuadForm(1, 0, -1), QuadForm(0, 2, 0), QuadForm(1, 0, 1), 1, 1, 1),
    "PM2": (QuadForm(1, 0, -2), QuadForm(0, 2, 0), QuadForm(1, 0, 2), 1, 2, 1),
    "PM3": (QuadForm(1, 2, -1), QuadForm(1, -2, -1), QuadForm(1, 0, 1), 1, 1, 2),
}


def standard_parametrization(which: str) -> Parametrization:
    """``PM1``: x^2+y^2=z^2, ``PM2``: x^2+2y^2=z^2, ``PM3``: x^2+y^2=2z^2."""
    try:
        px, py, pz, A, B, C = _STANDARD[which.upper()]
    except KeyError:
        raise InvalidArgument(f"unknown parametrization {which!r}") from None
    par = Parametrization(px, py, pz, A, B, C, 0, which.upper())
    assert par.verify()
    return par


def general_xyz_parametrization(a: int, b: int, d: int) -> Parametrization:
    """Solutions of ``a x^2 + b y^2 + d x y = a z^2``:
    ``x = k(b m^2 - a n^2)``, ``y = k m(-d m + 2 a n)``,
    ``z = k(b m^2 - d m n + a n^2)``."""
    if a < 1 or b < 1:
        raise InvalidArgument("a and b must be positive")
    par = Parametrization(
        QuadForm(b, 0, -a), QuadForm(-d, 2 * a, 0), QuadForm(b, -d, a),
        a, b, a, d, f"xyz({a},{b},{d})",
    )
    assert par.verify(), "parametrization identity failed"
    return par


def isqrt_vec(v: np.ndarray) -> np.ndarray:
    """Exact floor square roots of a nonnegative int64 array (< 2**62)."""
    v = np.asarray(v, dtype=np.int64)
    r = np.floor(np.sqrt(v.astype(np.float64))).astype(np.int64)
    r = np.where(r * r > v, r - 1, r)
    r = np.where(r * r > v, r - 1, r)
    r = np.where((r + 1) * (r + 1) <= v, r + 1, r)
    return r


_I63 = 1 << 62


def iter_solutions(T: RadoTriple, bound: int, pairs_per_block: int = 1 << 20):
    """Solutions of ``a x^2 + b y^2 = c z^2`` with ``1 <= x, y, z <= bound``,
    yielded as ``(k, 3)`` int64 arrays in increasing ``(z, x, y)`` order."""
    a, b, c = T.a, T.b, T.c
    bound = int(bound)
    if bound < 1:
        return
    if max(a + b, c) * bound * bound >= _I63:
        raise RangeError("a x^2 + b y^2 would exceed the 64-bit budget")
    zb = max(1, pairs_per_block // bound)
    xs = np.arange(1, bound + 1, dtype=np.int64)
    z0 = 1
    while z0 <= bound:
        z1 = min(bound, z0 + zb - 1)
        lo_t, hi_t = c * z0 * z0, c * z1 * z1
        # for each x: y with lo_t <= a x^2 + b y^2 <= hi_t
        rem_hi = hi_t - a * xs * xs
        ok = rem_hi >= b
        x = xs[ok]
        yhi = np.minimum(isqrt_vec(rem_hi[ok] // b), bound)
        rem_lo = lo_t - a * x * x
        ylo = np.where(rem_lo <= b, 1, isqrt_vec(np.maximum((rem_lo + b - 1) // b, 0)))
        ylo = np.where(ylo * ylo * b < rem_lo, ylo + 1, ylo)
        cnt = np.maximum(yhi - ylo + 1, 0)
        if cnt.sum():
            xr = np.repeat(x, cnt)
            start = np.repeat(np.cumsum(cnt) - cnt, cnt)
            yr = np.repeat(ylo, cnt) + (np.arange(cnt.sum()) - start)
            s = a * xr * xr + b * yr * yr
            hit = s % c == 0
            xr, yr, s = xr[hit], yr[hit], s[hit] // c
            z = isqrt_vec(s)
            hit = z * z == s
            sol = np.stack([xr[hit], yr[hit], z[hit]], axis=1)
            if sol.size:
                order = np.lexsort((sol[:, 1], sol[:, 0], sol[:, 2]))
                yield sol[order]
        z0 = z1 + 1


def enumerate_solutions(T: RadoTriple, bound: int) -> list[tuple[int, int, int]]:
    """All ``(x, y, z)`` in ``[1, bound]^3`` with ``a x^2 + b y^2 = c z^2``,
    sorted by ``(z, x, y)``."""
    out = []
    for block in iter_solutions(T, bound):
        out.extend((int(x), int(y), int(z)) for x, y, z in block)
    return out


def count_r2(k: int) -> int:
    """Number of ``(m, n)`` in ``Z^2`` with ``m^2 + n^2 = k``."""
    k = int(k)
    if k < 0:
        return 0
    if k == 0:
        return 1
    m = np.arange(0, isqrt(k) + 1, dtype=np.int64)
    rest = k - m * m
    n = isqrt_vec(rest)
    ok = n * n == rest
    mult = np.where(m[ok] == 0, 1, 2) * np.where(n[ok] == 0, 1, 2)
    return int(mult.sum())


def count_reps_box(d: int, N: int, k: int) -> int:
    """``#{m, n in [N] : |m^2 + d n^2| = k}``."""
    d, N, k = int(d), int(N), int(k)
    if N < 1:
        raise InvalidArgument("N must be positive")
    m = np.arange(1, N + 1, dtype=np.int64)
    if d == 0:
        return int(N * np.count_nonzero(m * m == abs(k)))
    total = 0
    for target in sorted({k, -k}):
        rest = target - m * m  # = d n^2
        ok = rest % d == 0
        q = rest[ok] // d
        q = q[(q >= 1)]
        n = isqrt_vec(q)
        total += int(np.count_nonzero((n * n == q) & (n <= N)))
    return total


def divisibility_count_box(d: int, N: int, p: int) -> int:
    """``#{m, n in [N] : p | m^2 + d n^2}``."""
    d, N, p = int(d), int(N), int(p)
    if N < 1:
        raise InvalidArgument("N must be positive")
    if p < 2:
        raise InvalidArgument("p must be prime")
    if p <= 4096:
        r = np.arange(p, dtype=np.int64)
        cnt = N // p + (r >= 1) * (r <= N % p)
        cnt[0] = N // p
        sq = r * r % p
        dsq = d % p * sq % p
        need = (-sq) % p
        # pair residue classes (r, s) with r^2 + d s^2 = 0 mod p
        table = np.zeros(p, dtype=np.int64)
        np.add.at(table, dsq, cnt)
        return int((cnt * table[need]).sum())
    m = np.arange(1, N + 1, dtype=np.int64)
    ms = (m * m) % p
    ds = (d % p) * ms % p
    total = 0
    for s in ds:
        total += int(np.count_nonzero((ms + s) % p == 0))
    return total
