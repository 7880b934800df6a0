"""Parsers for function specs, forms and number lists used by the CLI.

Function spec grammar::

    spec  := one | liouville | arch(t)
           | char(q, j) | char(q, [v0, ..., v_{q-1}]) | char(@file)
           | mchar(...)                        (same arguments as char)
           | legendre(p) | mlegendre(p)
           | perturb(spec, {p: v, ...}) | flip(spec, [p, ...])
           | prod(spec, spec) | conj(spec)
    value := real | complex literal (0.5+1j) | e(a/b)

``char(q, j)`` picks the ``j``-th entry of :func:`dirichlet_characters`.
``@file`` names a json file ``{"modulus": q, "values": [...]}``; values
there are numbers, ``[re, im]`` pairs or ``"e(a/b)"`` strings.
"""

from __future__ import annotations

import json
import re

from .errors import InvalidArgument
from .multfn import (
    Archimedean,
    Character,
    Conjugate,
    DirichletCharacter,
    FinitePerturbation,
    Liouville,
    ModifiedCharacter,
    MultFn,
    One,
    Product,
    SparseFlip,
    dirichlet_characters,
    legendre_symbol,
    root_of_unity,
)
from .quadforms import QuadForm

__all__ = ["parse_spec", "parse_value", "parse_form", "parse_int_list", "parse_float_list",
           "parse_character"]

_TOKEN = re.compile(r"\s*(?:(@[^\s,()\[\]{}]+)|([A-Za-z_][A-Za-z_0-9]*)|"
                    r"([-+0-9.][-+0-9.eEj]*)|(.))")


def _tokens(text: str):
    out = []
    for m in _TOKEN.finditer(text):
        at, name, num, sym = m.groups()
        if at:
            out.append(("file", at[1:]))
        elif name:
            out.append(("name", name))
        elif num:
            out.append(("num", num))
        elif sym and not sym.isspace():
            out.append(("sym", sym))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokens(text)
        self.i = 0

    def fail(self, msg):
        raise InvalidArgument(f"cannot parse {self.text!r}: {msg}")

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            self.fail(f"expected {value or kind}, got {tok[1]!r}")
        self.i += 1
        return tok

    def at(self, value):
        return self.peek() == ("sym", value)

    def done(self):
        if self.i != len(self.toks):
            self.fail(f"trailing input at {self.peek()[1]!r}")

    # values
    def value(self) -> complex:
        kind, tok = self.peek()
        if kind == "name" and tok == "e":
            self.take()
            self.take("sym", "(")
            num = self.integer()
            self.take("sym", "/")
            den = self.integer()
            self.take("sym", ")")
            return root_of_unity(num, den)
        if kind == "num":
            self.take()
            try:
                return complex(tok)
            except ValueError:
                self.fail(f"bad number {tok!r}")
        self.fail(f"expected a value, got {tok!r}")

    def integer(self) -> int:
        _, tok = self.take("num")
        try:
            return int(tok)
        except ValueError:
            self.fail(f"expected an integer, got {tok!r}")

    def real(self) -> float:
        v = self.value()
        if v.imag:
            self.fail("expected a real number")
        return v.real

    def seq(self, open_, close, item):
        self.take("sym", open_)
        out = []
        while not self.at(close):
            out.append(item())
            if not self.at(close):
                self.take("sym", ",")
        self.take("sym", close)
        return out

    def pair(self):
        p = self.integer()
        self.take("sym", ":")
        return p, self.value()

    # specs
    def character(self) -> DirichletCharacter:
        kind, tok = self.peek()
        if kind == "file":
            self.take()
            return _character_file(tok)
        q = self.integer()
        self.take("sym", ",")
        if self.at("["):
            return DirichletCharacter(q, self.seq("[", "]", self.value))
        j = self.integer()
        chars = dirichlet_characters(q)
        if not 0 <= j < len(chars):
            self.fail(f"character index {j} outside 0..{len(chars) - 1}")
        return chars[j]

    def spec(self) -> MultFn:
        _, name = self.take("name")
        name = name.lower()
        if name == "one":
            return One()
        if name in ("liouville", "lambda"):
            return Liouville()
        if name not in _CALLS:
            self.fail(f"unknown function {name!r}")
        self.take("sym", "(")
        if name == "arch":
            out = Archimedean(self.real())
        elif name in ("char", "mchar"):
            chi = self.character()
            out = Character(chi) if name == "char" else ModifiedCharacter(chi)
        elif name in ("legendre", "mlegendre"):
            chi = _legendre_character(self.integer())
            out = Character(chi) if name == "legendre" else ModifiedCharacter(chi)
        elif name == "perturb":
            base = self.spec()
            self.take("sym", ",")
            out = FinitePerturbation(base, self.seq("{", "}", self.pair))
        elif name == "flip":
            base = self.spec()
            self.take("sym", ",")
            out = SparseFlip(base, tuple(self.seq("[", "]", self.integer)))
        elif name == "prod":
            left = self.spec()
            self.take("sym", ",")
            out = Product(left, self.spec())
        else:  # conj
            out = Conjugate(self.spec())
        self.take("sym", ")")
        return out


_CALLS = ("arch", "char", "mchar", "legendre", "mlegendre", "perturb", "flip", "prod", "conj")


def _legendre_character(p: int) -> DirichletCharacter:
    if p < 3 or any(p % k == 0 for k in range(2, int(p**0.5) + 1)):
        raise InvalidArgument(f"legendre needs an odd prime, got {p}")
    return DirichletCharacter(p, [legendre_symbol(r, p) for r in range(p)])


def _file_value(v):
    if isinstance(v, str):
        return parse_value(v)
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise InvalidArgument("complex values in files are [re, im] pairs")
        return complex(float(v[0]), float(v[1]))
    return complex(v)


def _character_file(path: str) -> DirichletCharacter:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, ValueError) as exc:
        raise InvalidArgument(f"cannot read character file {path!r}: {exc}") from None
    return DirichletCharacter(int(data["modulus"]), [_file_value(v) for v in data["values"]])


def parse_spec(text: str) -> MultFn:
    p = _Parser(text)
    out = p.spec()
    p.done()
    return out


def parse_value(text: str) -> complex:
    p = _Parser(text)
    out = p.value()
    p.done()
    return out


def parse_character(text: str) -> DirichletCharacter:
    """``q,j``, ``q,[values]`` or ``@file``."""
    p = _Parser(text)
    out = p.character()
    p.done()
    return out


_TERM = re.compile(r"([+-]?)\s*(\d*)\s*\*?\s*(m\^2|n\^2|m\s*\*\s*n|n\s*\*\s*m|mn|nm|m|n)?$")


def parse_form(text: str) -> QuadForm:
    """``a,b,c`` or a polynomial such as ``m^2-n^2``, ``2*m*n``, ``mn``."""
    s = text.strip()
    if re.fullmatch(r"\s*-?\d+\s*,\s*-?\d+\s*,\s*-?\d+\s*", s):
        return QuadForm(*(int(v) for v in s.split(",")))
    coef = {"m^2": 0, "mn": 0, "n^2": 0}
    terms = re.findall(r"[+-]?[^+-]+", s.replace(" ", ""))
    if not terms:
        raise InvalidArgument(f"cannot parse form {text!r}")
    for t in terms:
        m = _TERM.fullmatch(t)
        if not m or not m.group(3) or m.group(3) in ("m", "n"):
            raise InvalidArgument(f"cannot parse form term {t!r} in {text!r}")
        sign, num, mono = m.groups()
        mono = mono.replace("*", "")
        mono = "mn" if mono in ("mn", "nm") else mono
        coef[mono] += (-1 if sign == "-" else 1) * (int(num) if num else 1)
    return QuadForm(coef["m^2"], coef["mn"], coef["n^2"])


def parse_int_list(text: str) -> list[int]:
    """``256,512,1024`` or ``4..12`` (inclusive) or a mix."""
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if ".." in part:
                lo, hi = part.split("..")
                out.extend(range(_int(lo), _int(hi) + 1))
            else:
                out.append(_int(part))
        except ValueError:
            raise InvalidArgument(f"bad integer list {text!r}") from None
    if not out:
        raise InvalidArgument(f"empty integer list {text!r}")
    return out


def _int(s: str) -> int:
    s = s.strip().lower()
    if "^" in s:
        base, exp = s.split("^")
        return int(base) ** int(exp)
    if "e" in s:
        return int(float(s))
    return int(s)


def parse_float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise InvalidArgument(f"bad number list {text!r}") from None
