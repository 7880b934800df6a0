import json

import numpy as np
import pytest

from quadreg.errors import InvalidArgument
from quadreg.multfn import (
    Character,
    Conjugate,
    FinitePerturbation,
    Liouville,
    ModifiedCharacter,
    One,
    Product,
    SparseFlip,
    dirichlet_characters,
    eval,
)
from quadreg.quadforms import QuadForm
from quadreg.specs import parse_character, parse_form, parse_int_list, parse_spec, parse_value


def test_simple_specs():
    assert isinstance(parse_spec("one"), One)
    assert isinstance(parse_spec("liouville"), Liouville)
    assert parse_spec("arch(0.5)").t == 0.5
    assert parse_spec("char(3,1)") == Character(dirichlet_characters(3)[1])
    assert parse_spec("mchar(5,2)") == ModifiedCharacter(dirichlet_characters(5)[2])


def test_inline_values_and_roots_of_unity():
    f = parse_spec("char(4,[0,1,0,-1])")
    assert eval(f, 3) == -1
    g = parse_spec("perturb(liouville,{2:e(1/4),3:1})")
    assert isinstance(g, FinitePerturbation)
    assert abs(g.at_prime(2) - 1j) < 1e-15 and g.at_prime(3) == 1
    assert abs(parse_value("e(-1/3)") - np.exp(-2j * np.pi / 3)) < 1e-15
    assert parse_value("0.5+0.5j") == 0.5 + 0.5j


def test_nested_specs():
    f = parse_spec("conj(prod(mchar(3,1),flip(one,[5,7])))")
    assert isinstance(f, Conjugate) and isinstance(f.inner, Product)
    assert isinstance(f.inner.right, SparseFlip) and f.inner.right.primes == (5, 7)


def test_legendre_specs():
    f = parse_spec("legendre(7)")
    assert [eval(f, r) for r in range(1, 7)] == [1, 1, -1, 1, -1, -1]
    g = parse_spec("mlegendre(7)")
    assert eval(g, 7) == 1
    with pytest.raises(InvalidArgument):
        parse_spec("legendre(9)")


def test_character_file(tmp_path):
    path = tmp_path / "chi.json"
    path.write_text(json.dumps({"modulus": 5, "values": [0, 1, "e(1/4)", [0, -1], -1]}))
    f = parse_spec(f"mchar(@{path})")
    assert abs(f.at_prime(2) - 1j) < 1e-15 and f.at_prime(5) == 1
    assert parse_character(f"@{path}").modulus == 5


@pytest.mark.parametrize("bad", ["nope", "char(3)", "char(3,7)", "perturb(one,{4:1})", "one)",
                                 "prod(one)", "char(3,[0,1])", "arch(1j)"])
def test_bad_specs(bad):
    with pytest.raises(InvalidArgument):
        parse_spec(bad)


def test_forms():
    assert parse_form("m^2-n^2") == QuadForm(1, 0, -1)
    assert parse_form("2*m*n") == QuadForm(0, 2, 0)
    assert parse_form("mn") == QuadForm(0, 1, 0)
    assert parse_form("m^2+2*n^2") == QuadForm(1, 0, 2)
    assert parse_form("1,0,-2") == QuadForm(1, 0, -2)
    assert parse_form("3m^2 - m*n + 5n^2") == QuadForm(3, -1, 5)
    for bad in ("m^3", "x^2+y^2", "m", ""):
        with pytest.raises(InvalidArgument):
            parse_form(bad)


def test_int_lists():
    assert parse_int_list("256,512,1024") == [256, 512, 1024]
    assert parse_int_list("4..7") == [4, 5, 6, 7]
    assert parse_int_list("1e5,10^3") == [100000, 1000]
    with pytest.raises(InvalidArgument):
        parse_int_list("a,b")
