import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import gowers_loop
from quadreg.errors import InvalidArgument, Unsupported
from quadreg.gowers import (
    CyclicSequence,
    daboussi_katai_stat,
    fourier_sup,
    gowers_norm,
    gowers_norm_bruteforce,
    gowers_norm_interval,
    weyl_square_average,
)
from quadreg.multfn import Liouville, eval_progression


def test_constant_sequence():
    for s in (1, 2, 3):
        assert abs(gowers_norm(np.ones(32), s) - 1) < 1e-12
        assert abs(gowers_norm_interval(np.ones(50), s) - 1) < 1e-12


def test_additive_character_u2_is_one():
    N = 64
    a = np.exp(2j * np.pi * 5 * np.arange(N) / N)
    assert abs(gowers_norm(a, 2) - 1) < 1e-12


def test_bruteforce_matches_nested_loops():
    rng = np.random.default_rng(0)
    for N in (5, 7, 8):
        a = np.exp(2j * np.pi * rng.random(N)) * rng.random(N)
        for s in (1, 2, 3):
            assert abs(gowers_norm_bruteforce(a, s) - gowers_loop(list(a), s)) < 1e-12


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 40), st.integers(0, 2**32 - 1))
def test_recursion_matches_bruteforce(N, seed):
    rng = np.random.default_rng(seed)
    a = rng.choice([-1.0, 1.0], size=N) * rng.random(N) ** 0.2
    for s in (2, 3):
        assert abs(gowers_norm(a, s) - gowers_norm_bruteforce(a, s)) < 1e-9


def test_liouville_u2_small_and_monotone():
    lam = eval_progression(Liouville(), 1, 0, 1, 2048)
    u1, u2, u3 = (gowers_norm_interval(lam, s) for s in (1, 2, 3))
    assert u2 <= 0.2
    assert u1 <= u2 <= u3


def test_threads_do_not_change_u3():
    rng = np.random.default_rng(5)
    a = np.exp(2j * np.pi * rng.random(600))
    vals = {gowers_norm(a, 3, threads=t) for t in (1, 3, 8)}
    assert len(vals) == 1


def test_unsupported_order_and_validation():
    with pytest.raises(Unsupported):
        gowers_norm(np.ones(8), 4)
    with pytest.raises(InvalidArgument):
        CyclicSequence([2.0, 0.0])
    with pytest.raises(InvalidArgument):
        gowers_norm_bruteforce(np.ones(100), 3)


def test_fourier_sup_examples():
    assert abs(fourier_sup(np.ones(100)) - 1) < 1e-12
    n = np.arange(1, 1001)
    assert fourier_sup(np.exp(2j * np.pi * n * 0.25)) >= 1 - 1e-6
    lam = eval_progression(Liouville(), 1, 0, 1, 10**5)
    assert fourier_sup(lam) <= 0.05


def test_fourier_sup_matches_direct_grid():
    rng = np.random.default_rng(2)
    a = rng.choice([-1.0, 1.0], size=50)
    n = np.arange(1, 51)
    direct = max(abs(np.mean(a * np.exp(2j * np.pi * n * j / 200))) for j in range(200))
    assert abs(fourier_sup(a) - direct) < 1e-12


def test_weyl_examples():
    assert weyl_square_average(0, 100) == 1
    assert abs(weyl_square_average(0.5, 101)) <= 1 / 101 + 1e-12
    assert abs(weyl_square_average(np.sqrt(2), 10**5)) <= 0.01


def test_daboussi_katai_examples():
    N = 10**5
    assert abs(daboussi_katai_stat(np.ones(5 * N), 2, 5, N) - 1) < 1e-12
    n = np.arange(1, 5 * N + 1)
    a = np.exp(2j * np.pi * n * np.sqrt(3))
    assert abs(daboussi_katai_stat(a, 2, 3, N)) < 0.01
    b = np.exp(2j * np.pi * n / 3)
    assert abs(daboussi_katai_stat(b, 2, 5, N) - 1) < 1e-9
    with pytest.raises(InvalidArgument):
        daboussi_katai_stat(b, 2, 2, N)
