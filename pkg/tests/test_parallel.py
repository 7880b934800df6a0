import numpy as np

from quadreg.parallel import grid_sum, map_ordered, pairwise_sum, row_blocks


def test_row_blocks_cover_rows():
    blocks = row_blocks(1000, 300, cells=3000)
    assert blocks[0][0] == 1 and blocks[-1][1] == 1000
    assert all(b[0] == a[1] + 1 for a, b in zip(blocks, blocks[1:]))


def test_pairwise_sum_order_is_fixed():
    parts = [0.1] * 7 + [1e16, -1e16]
    assert pairwise_sum(parts) == pairwise_sum(list(parts))
    assert pairwise_sum([]) == 0.0


def test_map_ordered_keeps_order():
    assert map_ordered(lambda x: x * x, range(20), threads=4) == [x * x for x in range(20)]


def test_grid_sum_independent_of_threads():
    rng = np.random.default_rng(0)
    M = rng.random((700, 500))

    def block(rows):
        return M[rows - 1]

    vals = {grid_sum(block, 700, 500, t, cells=20000) for t in (1, 2, 4, 8)}
    assert len(vals) == 1
    assert abs(vals.pop() - M.sum()) < 1e-9
