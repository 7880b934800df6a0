"""Deterministic block parallelism.

Work is cut into blocks whose boundaries depend only on the problem size,
never on the thread count.  Each block is reduced with numpy's pairwise
summation and the block partials are combined in a fixed binary tree, so
results are bit-identical for any number of workers.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

__all__ = ["pairwise_sum", "row_blocks", "map_ordered", "grid_sum"]

BLOCK_CELLS = 1 << 20


def pairwise_sum(parts):
    """Sum a sequence of scalars in a fixed balanced-tree order."""
    parts = list(parts)
    if not parts:
        return 0.0
    while len(parts) > 1:
        nxt = [parts[i] + parts[i + 1] for i in range(0, len(parts) - 1, 2)]
        if len(parts) % 2:
            nxt.append(parts[-1])
        parts = nxt
    return parts[0]


def row_blocks(n_rows: int, n_cols: int = 1, cells: int = BLOCK_CELLS):
    """Split rows ``1..n_rows`` into consecutive ``(lo, hi)`` ranges."""
    step = max(1, cells // max(1, n_cols))
    return [(lo, min(n_rows, lo + step - 1)) for lo in range(1, n_rows + 1, step)]


def map_ordered(fn, items, threads: int = 1):
    """``[fn(x) for x in items]``, optionally on a thread pool."""
    items = list(items)
    if threads is None or threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def grid_sum(block_fn, n_rows: int, n_cols: int, threads: int = 1, cells: int = BLOCK_CELLS):
    """Sum of ``block_fn(m_rows)`` over all rows, where ``block_fn`` returns
    an array for the rows ``m_rows`` (1-based row labels)."""

    def run(rng):
        lo, hi = rng
        return np.sum(block_fn(np.arange(lo, hi + 1, dtype=np.int64)))

    return pairwise_sum(map_ordered(run, row_blocks(n_rows, n_cols, cells), threads))
