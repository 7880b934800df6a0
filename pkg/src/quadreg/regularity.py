"""Colorings, monochromatic solutions, multiplicative densities and the
Q-trick average over Følner boxes."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .correlations import A_quantity, L_quantity
from .errors import InvalidArgument
from .folner import FolnerBox, folner_box
from .multfn import MultFn, One, PrimeTable, eval_progression, factorize, int_power, primes_up_to
from .quadforms import RadoTriple, iter_solutions

__all__ = [
    "Coloring",
    "base_p_coloring",
    "level_set_coloring",
    "parity_coloring",
    "search_monochromatic_pair",
    "search_monochromatic_triple",
    "verify_linear_counterexample",
    "find_linear_witness",
    "divisible_by",
    "two_adic_even_exact",
    "perfect_square",
    "residue_class",
    "complement",
    "mult_density",
    "DiscreteMeasure",
    "folner_mean",
    "folner_mean_factorized",
    "qtrick_average",
]


@dataclass(frozen=True, eq=False)
class Coloring:
    """Colors of ``1..N``; ``colors[n - 1]`` is the color of ``n``."""

    colors: np.ndarray
    palette: int

    def __post_init__(self):
        c = np.asarray(self.colors, dtype=np.int64).ravel().copy()
        if self.palette < 1:
            raise InvalidArgument("palette size must be at least 1")
        c.flags.writeable = False
        object.__setattr__(self, "colors", c)

    @property
    def N(self) -> int:
        return self.colors.size

    def __call__(self, n) -> np.ndarray | int:
        n = np.asarray(n)
        if n.size and (n.min() < 1 or n.max() > self.N):
            raise InvalidArgument(f"argument outside [1, {self.N}]")
        out = self.colors[n - 1]
        return int(out) if out.ndim == 0 else out


def base_p_coloring(p: int, N: int) -> Coloring:
    """Color ``n`` by its last nonzero digit in base ``p``."""
    p, N = int(p), int(N)
    if p < 2:
        raise InvalidArgument("p must be at least 2")
    w = np.arange(1, N + 1, dtype=np.int64)
    m = w % p == 0
    while m.any():
        w[m] //= p
        m = w % p == 0
    return Coloring(w % p, p - 1)


def parity_coloring(N: int) -> Coloring:
    """Color 1 for odd, 2 for even."""
    n = np.arange(1, int(N) + 1)
    return Coloring(np.where(n % 2 == 1, 1, 2), 2)


def level_set_coloring(f: MultFn, N: int, table: PrimeTable | None = None,
                       max_colors: int = 64) -> Coloring:
    """Color ``n`` by the value ``f(n)``; colors follow first appearance."""
    vals = eval_progression(f, 1, 0, 1, int(N), table)
    key = np.round(vals.real, 9) + 1j * np.round(vals.imag, 9)
    _, first, inv = np.unique(key, return_index=True, return_inverse=True)
    if first.size > max_colors:
        raise InvalidArgument(f"f takes {first.size} values on [1, {N}] (> {max_colors})")
    order = np.argsort(first)
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    return Coloring(rank[inv] + 1, int(first.size))


_PAIRS = {"xy": (0, 1), "xz": (0, 2), "yz": (1, 2)}


def _check_bound(c: Coloring, bound: int):
    if bound > c.N:
        raise InvalidArgument(f"bound {bound} exceeds the coloring range {c.N}")


def _verified(T, c, w, same):
    x, y, z = w
    assert T.a * x * x + T.b * y * y == T.c * z * z
    cols = [c(v) for v in w]
    assert all(w[i] != w[j] and cols[i] == cols[j] for i, j in same)
    return w


def search_monochromatic_pair(c: Coloring, T: RadoTriple, pair: str = "xy",
                              bound: int | None = None):
    """First solution in ``(z, x, y)`` order whose designated coordinates are
    distinct and share a color, or None."""
    bound = c.N if bound is None else int(bound)
    _check_bound(c, bound)
    try:
        i, j = _PAIRS[pair]
    except KeyError:
        raise InvalidArgument(f"pair must be one of {sorted(_PAIRS)}") from None
    for sol in iter_solutions(T, bound):
        u, v = sol[:, i], sol[:, j]
        hit = np.nonzero((u != v) & (c.colors[u - 1] == c.colors[v - 1]))[0]
        if hit.size:
            w = tuple(int(t) for t in sol[hit[0]])
            return _verified(T, c, w, [(i, j)])
    return None


def search_monochromatic_triple(c: Coloring, T: RadoTriple, bound: int | None = None):
    """First solution in ``(z, x, y)`` order with pairwise distinct
    coordinates of one color, or None."""
    bound = c.N if bound is None else int(bound)
    _check_bound(c, bound)
    for sol in iter_solutions(T, bound):
        x, y, z = sol[:, 0], sol[:, 1], sol[:, 2]
        cx, cy, cz = (c.colors[v - 1] for v in (x, y, z))
        ok = (x != y) & (y != z) & (x != z) & (cx == cy) & (cy == cz)
        hit = np.nonzero(ok)[0]
        if hit.size:
            w = tuple(int(t) for t in sol[hit[0]])
            return _verified(T, c, w, [(0, 1), (1, 2)])
    return None


def find_linear_witness(a: int, b: int, c: int, coloring: Coloring, N: int | None = None):
    """First ``(x, y, z)`` (by ``x``, then ``y``) with ``a x + b y = c z``,
    pairwise distinct entries in ``[1, N]`` and one color, or None."""
    N = coloring.N if N is None else int(N)
    _check_bound(coloring, N)
    col = coloring.colors
    y = np.arange(1, N + 1, dtype=np.int64)
    for x in range(1, N + 1):
        s = a * x + b * y
        ok = s % c == 0
        z = s // c
        ok &= (z >= 1) & (z <= N) & (y != x) & (z != x) & (z != y)
        zz = np.where(ok, z, 1)
        ok &= (col[y - 1] == col[x - 1]) & (col[zz - 1] == col[x - 1])
        hit = np.nonzero(ok)[0]
        if hit.size:
            k = hit[0]
            return (x, int(y[k]), int(z[k]))
    return None


def verify_linear_counterexample(a: int, b: int, c: int, p: int, N: int) -> bool:
    """True iff the base-``p`` coloring of ``[N]`` has no monochromatic
    solution of ``a x + b y = c z`` with distinct ``x, y, z``."""
    a, b, c, p, N = (int(v) for v in (a, b, c, p, N))
    if p <= a + b + c:
        raise InvalidArgument("p must exceed a + b + c")
    if len(factorize(p)) != 1 or factorize(p)[0][1] != 1:
        raise InvalidArgument("p must be prime")
    return find_linear_witness(a, b, c, base_p_coloring(p, N), N) is None


# ---------------------------------------------------------------------------
# Predicates on Følner boxes (exponent matrices)


def _col(box: FolnerBox, p: int) -> np.ndarray:
    idx = np.nonzero(box.primes == p)[0]
    if idx.size == 0:
        return np.zeros(box.size, dtype=np.int64)
    return box.exponents[:, idx[0]]


def divisible_by(r: int):
    """``r | n``."""
    fac = factorize(int(r)) if r > 1 else ()

    def pred(box):
        ok = np.ones(box.size, dtype=bool)
        for p, e in fac:
            ok &= _col(box, p) >= e
        return ok

    pred.__name__ = f"divisible_by({r})"
    return pred


def two_adic_even_exact(box: FolnerBox) -> np.ndarray:
    """``2^(2k) || n`` for some ``k >= 0``."""
    return _col(box, 2) % 2 == 0


def perfect_square(box: FolnerBox) -> np.ndarray:
    return np.all(box.exponents % 2 == 0, axis=1)


def residue_class(r: int, j: int):
    """``n = j (mod r)``, from the magnitude reduced by modular exponentiation."""

    def pred(box):
        return box.residues(int(r)) == int(j) % int(r)

    pred.__name__ = f"residue({r},{j})"
    return pred


def complement(pred):
    def comp(box):
        return ~pred(box)

    comp.__name__ = f"not_{getattr(pred, '__name__', 'pred')}"
    return comp


def mult_density(predicate, K_range, mode: str = "auto", count: int = 20000, seed: int = 0):
    """``[(K, |Phi_K cap A| / |Phi_K|)]``; a Fraction when the box is
    enumerated, a float when it is sampled."""
    out = []
    for K in K_range:
        box = folner_box(int(K), mode, count, seed)
        hits = int(np.count_nonzero(predicate(box)))
        out.append((int(K), Fraction(hits, box.size) if box.exhaustive else hits / box.size))
    return out


# ---------------------------------------------------------------------------
# Q-trick


@dataclass(frozen=True)
class DiscreteMeasure:
    """A finitely supported measure: ``atoms`` are ``(f, weight)`` pairs."""

    atoms: tuple

    def __post_init__(self):
        atoms = tuple((f, float(w)) for f, w in self.atoms)
        for f, w in atoms:
            if not isinstance(f, MultFn):
                raise InvalidArgument("atoms must be multiplicative function specs")
            if w < 0:
                raise InvalidArgument("weights must be nonnegative")
        object.__setattr__(self, "atoms", atoms)

    @property
    def weight_at_one(self) -> float:
        return sum(w for f, w in self.atoms if isinstance(f, One))

    @property
    def total(self) -> float:
        return sum(w for _, w in self.atoms)


def folner_mean(f: MultFn, K: int, mode: str = "auto", count: int = 20000, seed: int = 0) -> complex:
    """``E_{Q in Phi_K} f(Q)`` over the (enumerated or sampled) box."""
    return complex(np.mean(folner_box(int(K), mode, count, seed).values(f)))


def folner_mean_factorized(f: MultFn, K: int) -> complex:
    """``prod_{p <= K} E_{K < a <= 2K} f(p)^a`` (exact box mean)."""
    K = int(K)
    ps = primes_up_to(K)
    a = np.arange(K + 1, 2 * K + 1, dtype=np.int64)
    out = 1 + 0j
    if ps.size:
        for fp in f.at_primes(ps):
            out *= complex(np.mean(int_power(np.full(a.shape, fp), a)))
    return out


def qtrick_average(sigma: DiscreteMeasure, K: int, N: int, quantity: str = "fQ_times_A",
                   table: PrimeTable | None = None, mode: str = "auto", count: int = 2000,
                   seed: int = 0, threads: int = 1) -> complex:
    """``E_{Q in Phi_K} sum_f w_f X_f(Q)`` where ``X_f(Q)`` is
    ``f(Q) A(f)`` (``fQ_times_A``) or ``L(f, Q)`` at size ``N`` (``L``)."""
    box = folner_box(int(K), mode, count, seed)
    total = 0j
    for f, w in sigma.atoms:
        if w == 0:
            continue
        if quantity == "fQ_times_A":
            total += w * complex(np.mean(box.values(f))) * A_quantity(f, N, table)
        elif quantity == "L":
            vals = [L_quantity(f, Q, N, table, threads) for Q in box]
            total += w * complex(np.mean(vals))
        else:
            raise InvalidArgument("quantity must be 'fQ_times_A' or 'L'")
    return total
