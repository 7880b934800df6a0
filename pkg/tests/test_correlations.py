import math
from math import gcd

import numpy as np
import pytest

from oracles import mult_value
from quadreg.correlations import (
    M2_MINUS_2N2,
    M2_MINUS_N2,
    M2_PLUS_2N2,
    M2_PLUS_N2,
    MN,
    A_quantity,
    ArcWeight,
    L_quantity,
    Lattice,
    Q_K,
    corr_general,
    corr_quad_pair,
    mu_delta,
    solve_offsets,
    two_form_L,
    weighted_L_quantities,
)
from quadreg.errors import InvalidArgument
from quadreg.folner import FolnerElement
from quadreg.multfn import (
    Archimedean,
    Conjugate,
    DirichletCharacter,
    Liouville,
    ModifiedCharacter,
    One,
    dirichlet_characters,
    eval,
)
from quadreg.quadforms import QuadForm

LAM = Liouville()
CHI3 = ModifiedCharacter(dirichlet_characters(3)[1])


def f_at(f, n):
    return mult_value(f.at_prime, int(n))


def brute_pair(f, g, P1, P2, N, Q=1, a=0, b=0, positivity=False, weight=None):
    total = 0j
    for m in range(1, N + 1):
        for n in range(1, N + 1):
            x, y = Q * m + a, Q * n + b
            v1, v2 = P1(x, y), P2(x, y)
            if positivity and not (v1 > 0 and v2 > 0):
                continue
            if weight is not None and not weight.mask(np.array([m]), N)[0, n - 1]:
                continue
            total += f_at(f, v1) * np.conj(f_at(g, v2))
    return total / (N * N)


@pytest.mark.parametrize("forms", [(M2_MINUS_N2, QuadForm(0, 2, 0)), (MN, M2_PLUS_N2),
                                   (M2_PLUS_2N2, M2_MINUS_2N2)])
@pytest.mark.parametrize("lat", [(1, 0, 0), (3, 1, 2)])
def test_corr_pair_matches_bruteforce(forms, lat):
    P1, P2 = forms
    for f, g in ((LAM, LAM), (CHI3, LAM)):
        got = corr_quad_pair(f, g, P1, P2, 24, Lattice(*lat))
        assert abs(got - brute_pair(f, g, P1, P2, 24, *lat)) < 1e-12
        got = corr_quad_pair(f, g, P1, P2, 24, Lattice(*lat), positivity=True)
        assert abs(got - brute_pair(f, g, P1, P2, 24, *lat, positivity=True)) < 1e-12


def test_corr_pair_weighted_matches_bruteforce():
    w = ArcWeight(0.3, 1.0, 1.0, True, M2_MINUS_N2, MN)
    got = corr_quad_pair(LAM, LAM, M2_MINUS_N2, MN, 30, weight=w)
    assert abs(got - brute_pair(LAM, LAM, M2_MINUS_N2, MN, 30, weight=w)) < 1e-12


def test_corr_pair_examples():
    assert corr_quad_pair(One(), One(), M2_PLUS_N2, M2_PLUS_N2, 64) == 1
    assert abs(corr_quad_pair(LAM, LAM, M2_MINUS_N2, QuadForm(0, 2, 0), 1024)) <= 0.05
    assert abs(corr_quad_pair(LAM, LAM, MN, M2_PLUS_N2, 1024)) <= 0.1


def test_corr_threads_bit_identical():
    vals = {corr_quad_pair(LAM, LAM, MN, M2_PLUS_N2, 1100, threads=t) for t in (1, 4, 8)}
    assert len(vals) == 1


def test_corr_general():
    N = 20
    got = corr_general([LAM, LAM], [(1, 0), (0, 1)], Conjugate(LAM), M2_PLUS_2N2, N)
    want = sum(f_at(LAM, m) * f_at(LAM, n) * f_at(LAM, m * m + 2 * n * n)
               for m in range(1, N + 1) for n in range(1, N + 1)) / N**2
    assert abs(got - want) < 1e-12
    assert corr_general([One()], [(1, 1)], One(), M2_PLUS_N2, 10) == 1
    assert abs(corr_general([LAM, LAM], [(1, 0), (0, 1)], Conjugate(LAM), M2_PLUS_2N2, 1024)) <= 0.1
    s1 = corr_general([LAM], [(1, 0)], One(), M2_PLUS_N2, 2000)
    assert abs(s1 - np.mean([f_at(LAM, m) for m in range(1, 2001)])) < 1e-12
    with pytest.raises(InvalidArgument):
        corr_general([LAM], [], One(), M2_PLUS_N2, 10)


def brute_L(f, Q, N):
    fq = f_at(f, Q)
    return sum(f_at(f, (Q * m + 1) ** 2 - (Q * n) ** 2)
               * np.conj(f_at(f, 2 * (Q * m + 1) * Q * n))
               for m in range(1, N + 1) for n in range(1, N + 1)) / N**2


@pytest.mark.parametrize("f", [LAM, CHI3, Archimedean(0.5)])
@pytest.mark.parametrize("Q", [1, 3, 4])
def test_L_matches_bruteforce(f, Q):
    assert abs(L_quantity(f, Q, 20) - brute_L(f, Q, 20)) < 1e-12


def test_L_examples():
    for Q in (2, 3, 6):
        assert L_quantity(One(), Q, 50) == 1
    # Q = 1: the cells n = m + 1 vanish
    assert L_quantity(One(), 1, 50) == 1 - 49 / 2500
    assert abs(L_quantity(LAM, 1, 1024)) <= 0.05
    N = 1024
    diff = L_quantity(CHI3, 9, N) - eval(CHI3, 9) * A_quantity(CHI3, N)
    assert abs(diff) < 0.05


def test_L_accepts_folner_element():
    Q = FolnerElement((2, 3), (3, 1))
    assert abs(L_quantity(CHI3, Q, 16) - L_quantity(CHI3, 24, 16)) < 1e-15


def test_A_examples():
    assert A_quantity(One(), 100) == 1
    assert abs(A_quantity(LAM, 10**5)) <= 0.01
    t, N = 1.0, 10**5
    direct = np.mean([np.exp(-1j * t * math.log(2 * n)) for n in range(1, N + 1)])
    assert abs(A_quantity(Archimedean(t), N) - direct) < 1e-9
    assert abs(abs(A_quantity(Archimedean(t), N)) - 1 / abs(1 + 1j * t)) < 0.01


def test_weighted_L_examples():
    N = 256
    for variant, P1 in (("minus", M2_MINUS_N2), ("plus", M2_PLUS_N2)):
        w = weighted_L_quantities(One(), 1, N, 0.2, variant)
        assert abs(w - mu_delta(0.2, 1.0, P1, MN, N)) < 1e-12
    assert abs(weighted_L_quantities(LAM, 1, 1024, 0.1, "plus")) <= 0.1


def test_weighted_L_plus_matches_bruteforce():
    N, delta = 18, 0.35
    w = ArcWeight(delta, 1.0, 1.0, True, M2_PLUS_N2, MN)
    want = 0j
    for m in range(1, N + 1):
        for n in range(1, N + 1):
            if w.mask(np.array([m]), N)[0, n - 1]:
                want += f_at(LAM, (3 * m + 1) ** 2 + (3 * n) ** 2) * np.conj(
                    f_at(LAM, 2 * (3 * m + 1) * 3 * n))
    got = weighted_L_quantities(LAM, 3, N, delta, "plus")
    assert abs(got - want / N**2) < 1e-12


def test_mu_delta_examples():
    N = 200
    half = (N * N - N) / 2 / N**2
    # t = 0: the phase is 0, inside the arc around 1 and outside the opposite one
    assert abs(mu_delta(0.2, 0.0, M2_MINUS_N2, MN, N) - half) < 1e-15
    assert mu_delta(0.2, 0.0, M2_MINUS_N2, MN, N, center=-1) == 0
    m1, m2 = mu_delta(0.1, 1.0, M2_MINUS_N2, MN, 1024), mu_delta(0.1, 1.0, M2_MINUS_N2, MN, 2048)
    assert m2 > 0 and abs(m1 - m2) <= 0.1 * m2


def test_arc_partition_covers_m_gt_n_mass():
    N, k = 300, 13
    delta = 2 * np.pi / k
    total = sum(mu_delta(delta, 1.0, M2_MINUS_N2, MN, N, center=np.exp(2j * np.pi * j / k))
                for j in range(k))
    cells = sum(1 for m in range(1, N + 1) for n in range(1, m))
    assert abs(total - cells / N**2) < 1e-12


def test_arc_weight_validation():
    with pytest.raises(InvalidArgument):
        ArcWeight(0.0)
    with pytest.raises(InvalidArgument):
        ArcWeight(0.1, center=2.0)


def check_offsets(a, b, q, Q1, Q2, Q):
    p1, p2 = a * a + 2 * b * b, a * a - 2 * b * b
    return (p1 - 1) % q == 0 and (p2 - 1) % q == 0 and gcd(p1, Q) == Q1 and gcd(abs(p2), Q) == Q2


def test_solve_offsets_examples():
    assert solve_offsets(1, 1, 1, 1) == (1, 1)
    assert solve_offsets(1, 3, 1, 3) == (1, 1)


@pytest.mark.parametrize("case", [(1, 3, 1, 9), (8, 1, 1, 9), (8, 81, 1, 46656), (3, 1, 7, 49),
                                  (8, 11, 1, 11**3), (1, 17, 7, 17 * 49), (5, 3, 1, 27)])
def test_solve_offsets_verified(case):
    q, Q1, Q2, Q = case
    a, b = solve_offsets(q, Q1, Q2, Q)
    assert 1 <= a and 1 <= b
    assert check_offsets(a, b, q, Q1, Q2, Q)


def test_solve_offsets_smallest_when_exhaustive():
    q, Q1, Q2, Q = 1, 3, 1, 9
    a, b = solve_offsets(q, Q1, Q2, Q)
    first = next((x, y) for x in range(1, 10) for y in range(1, 10) if check_offsets(x, y, q, Q1, Q2, Q))
    assert (a, b) == first


def test_solve_offsets_rejects_bad_input():
    with pytest.raises(InvalidArgument):
        solve_offsets(1, 5, 1, 5)
    with pytest.raises(InvalidArgument):
        solve_offsets(1, 3, 3, 9)


def test_QK():
    assert Q_K(1) == 1 and Q_K(2) == 2**4 and Q_K(3) == 2**6 * 3**6


def test_two_form_L_one_and_positivity_mass():
    assert two_form_L(One(), 2, 1, 1, 64) == 1
    mass = two_form_L(One(), 2, 1, 1, 64, positivity=True)
    assert 0 < mass.real <= 1


def test_two_form_L_modified_character_pattern():
    chi8 = DirichletCharacter(8, (0, 1, 0, -1, 0, -1, 0, 1))
    f = ModifiedCharacter(chi8)
    v = two_form_L(f, 3, 81, 1, 512, q=8)
    assert abs(v - 1) <= 0.2
