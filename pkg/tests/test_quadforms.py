import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quadreg.errors import InvalidArgument, RangeError
from quadreg.quadforms import (
    QuadForm,
    RadoTriple,
    count_r2,
    count_reps_box,
    discriminant,
    divisibility_count_box,
    enumerate_solutions,
    general_xyz_parametrization,
    is_irreducible,
    is_rado_triple,
    iter_solutions,
    standard_parametrization,
)


def brute_solutions(T, bound):
    return sorted(((x, y, z) for z in range(1, bound + 1) for x in range(1, bound + 1)
                   for y in range(1, bound + 1) if T.a * x * x + T.b * y * y == T.c * z * z),
                  key=lambda w: (w[2], w[0], w[1]))


def test_discriminant_examples():
    assert discriminant(QuadForm(1, 0, 1)) == -4
    assert discriminant(QuadForm(1, 0, -2)) == 8
    assert discriminant(QuadForm(1, 0, -1)) == 4


def test_irreducibility_examples():
    assert is_irreducible(QuadForm(1, 0, 1))
    assert not is_irreducible(QuadForm(1, 0, -1))
    assert not is_irreducible(QuadForm(0, 2, 0))
    assert is_irreducible(QuadForm(1, 0, 2)) and is_irreducible(QuadForm(1, 0, -2))


def test_irreducible_iff_no_rational_root():
    for a in range(-4, 5):
        for b in range(-4, 5):
            for c in range(-4, 5):
                if (a, b, c) == (0, 0, 0):
                    continue
                D = b * b - 4 * a * c
                square = D >= 0 and int(np.sqrt(D)) ** 2 == D
                assert is_irreducible(QuadForm(a, b, c)) == (not square)


def test_zero_form_rejected():
    with pytest.raises(InvalidArgument):
        QuadForm(0, 0, 0)


def test_rado_examples():
    assert is_rado_triple(RadoTriple(1, 1, 2))
    assert not is_rado_triple(RadoTriple(1, 1, 4))
    assert is_rado_triple(RadoTriple(1, 2, 1))
    with pytest.raises(InvalidArgument):
        RadoTriple(0, 1, 1)


def test_standard_parametrization_points():
    assert standard_parametrization("PM1").at(2, 1) == (3, 4, 5)
    assert standard_parametrization("PM2").at(2, 1) == (2, 4, 6)
    assert standard_parametrization("PM3").at(2, 1) == (7, -1, 5)
    with pytest.raises(InvalidArgument):
        standard_parametrization("PM9")


def test_general_parametrization_examples():
    P = general_xyz_parametrization(1, 1, 0)
    for m in range(-5, 6):
        for n in range(-5, 6):
            x, y, z = P.at(m, n)
            assert abs(x) == abs(m * m - n * n) and abs(y) == abs(2 * m * n) and abs(z) == m * m + n * n
    assert general_xyz_parametrization(1, 2, 0).at(1, 1) == (1, 2, 3)
    rng = np.random.default_rng(3)
    P = general_xyz_parametrization(3, 5, 7)
    for m, n in rng.integers(-1000, 1000, size=(100, 2)).tolist():
        assert P.check_point(m, n)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 30), st.integers(1, 30), st.integers(-30, 30),
       st.integers(-10**6, 10**6), st.integers(-10**6, 10**6), st.integers(1, 5))
def test_general_parametrization_property(a, b, d, m, n, k):
    P = general_xyz_parametrization(a, b, d)
    assert P.verify()
    assert P.check_point(m, n, k)


def test_enumerate_examples():
    sols = enumerate_solutions(RadoTriple(1, 1, 1), 13)
    for w in [(3, 4, 5), (4, 3, 5), (6, 8, 10), (8, 6, 10), (5, 12, 13), (12, 5, 13)]:
        assert w in sols
    assert (9, 12, 15) not in sols
    sols = enumerate_solutions(RadoTriple(1, 1, 2), 10)
    assert (1, 7, 5) in sols and (7, 1, 5) in sols
    assert enumerate_solutions(RadoTriple(1, 1, 1), 2) == []


@pytest.mark.parametrize("T", [(1, 1, 1), (1, 1, 2), (1, 2, 1), (2, 3, 5), (1, 1, 4)])
def test_enumerate_matches_bruteforce_in_order(T):
    T = RadoTriple(*T)
    assert enumerate_solutions(T, 40) == brute_solutions(T, 40)


def test_iter_solutions_small_blocks_same_result():
    T = RadoTriple(1, 1, 1)
    blocks = list(iter_solutions(T, 200, pairs_per_block=500))
    flat = [tuple(r) for b in blocks for r in b.tolist()]
    assert flat == enumerate_solutions(T, 200)
    assert len(blocks) > 1


def test_iter_solutions_range_error():
    with pytest.raises(RangeError):
        next(iter_solutions(RadoTriple(1, 1, 1), 2**32))


def test_r2_examples():
    assert count_r2(0) == 1 and count_r2(1) == 4 and count_r2(5) == 8
    for k in range(60):
        want = sum(1 for x in range(-9, 10) for y in range(-9, 10) if x * x + y * y == k)
        assert count_r2(k) == want


def test_reps_box_examples():
    assert count_reps_box(1, 5, 2) == 1
    assert count_reps_box(1, 5, 25) == 2
    assert count_reps_box(-2, 3, 1) == 2


def test_divisibility_examples():
    def brute(d, N, p):
        return sum(1 for m in range(1, N + 1) for n in range(1, N + 1) if (m * m + d * n * n) % p == 0)

    assert divisibility_count_box(1, 10, 3) == 9
    assert divisibility_count_box(1, 10, 5) == brute(1, 10, 5)
    for d in (-3, -2, 1, 2, 7):
        for p in (2, 3, 5, 7, 11, 13):
            assert divisibility_count_box(d, 25, p) == brute(d, 25, p)
    assert divisibility_count_box(1, 3, 2 * 9 * 2 + 1) == 0


def test_form_str_and_call():
    F = QuadForm(1, 0, -1)
    assert str(F) == "m^2-n^2" and F(3, 2) == 5
    assert str(QuadForm(0, 2, 0)) == "2*m*n"
