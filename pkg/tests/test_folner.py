import itertools
import math

import numpy as np
import pytest

from oracles import mult_value
from quadreg.errors import InvalidArgument, SizeError
from quadreg.folner import FolnerElement, folner_box, restricted_folner_box, restricted_primes
from quadreg.multfn import Liouville, ModifiedCharacter, dirichlet_characters


def magnitudes(box):
    return sorted(e.magnitude for e in box)


def test_folner_examples():
    assert magnitudes(folner_box(1)) == [1]
    assert magnitudes(folner_box(2)) == [8, 16]
    assert len(folner_box(3)) == 9


def test_folner_box_is_the_full_product():
    for K in (4, 5, 6):
        box = folner_box(K)
        ps = [2, 3, 5][: sum(1 for p in (2, 3, 5) if p <= K)]
        want = sorted(math.prod(p**a for p, a in zip(ps, ex))
                      for ex in itertools.product(range(K + 1, 2 * K + 1), repeat=len(ps)))
        assert magnitudes(box) == want
        assert box.size == box.full_size
        assert np.all((box.exponents > K) & (box.exponents <= 2 * K))


def test_restricted_examples():
    assert magnitudes(restricted_folner_box(1, 3)) == [81]
    assert magnitudes(restricted_folner_box(2, 6)) == [1]
    assert restricted_primes(1, 11).tolist() == [3, 11]
    # exponents 12..16 on {3, 11}
    assert len(restricted_folner_box(1, 11)) == 25
    with pytest.raises(InvalidArgument):
        restricted_primes(3, 5)


def test_values_from_exponents():
    f = ModifiedCharacter(dirichlet_characters(5)[1])
    for box in (folner_box(3), restricted_folner_box(2, 17)):
        vals = box.values(f)
        for e, v in zip(box, vals):
            assert abs(v - mult_value(f.at_prime, e.magnitude)) < 1e-9
            assert abs(e.value(f) - v) < 1e-12


def test_residues():
    box = folner_box(5)
    for mod in (7, 12, 1000003):
        assert box.residues(mod).tolist() == [e.magnitude % mod for e in box]
    e = FolnerElement((2, 3), (10, 4))
    assert e.residue(97) == (2**10 * 81) % 97 and int(e) == 2**10 * 81


def test_sampled_mode_is_deterministic():
    a = folner_box(20, "sampled", count=500, seed=4)
    b = folner_box(20, "sampled", count=500, seed=4)
    assert np.array_equal(a.exponents, b.exponents) and not a.exhaustive
    assert np.all((a.exponents > 20) & (a.exponents <= 40))
    with pytest.raises(SizeError):
        folner_box(20, "exhaustive")
    assert not folner_box(20, "auto", count=10).exhaustive


def test_element_bit_length():
    e = FolnerElement((2,), (100,))
    assert e.bit_length() == 101
    with pytest.raises(InvalidArgument):
        FolnerElement((2, 3), (1,))
