"""Command-line front end: every experiment as a batch run writing a table.

Exit status is 0 on success, 1 on a validation error and 2 when a value
leaves the supported integer range.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time

import numpy as np

from . import __version__
from .concentration import (
    AdditiveFromMult,
    PretentiousTarget,
    linear_deficit,
    quadratic_deficit,
    turan_kubilius_bound,
    turan_kubilius_variance,
)
from .correlations import (
    A_quantity,
    ArcWeight,
    L_quantity,
    Lattice,
    corr_quad_pair,
    two_form_L,
    weighted_L_quantities,
)
from .distance import AllPrimes, LegendreSet, Residues, distance_sq
from .errors import InvalidArgument, QuadregError, RangeError
from .gowers import CyclicSequence, fourier_sup, gowers_norm
from .multfn import DirichletCharacter, default_table, eval_progression
from .quadforms import (
    RadoTriple,
    discriminant,
    general_xyz_parametrization,
    is_irreducible,
    is_rado_triple,
    standard_parametrization,
)
from .regularity import (
    Coloring,
    DiscreteMeasure,
    base_p_coloring,
    complement,
    divisible_by,
    find_linear_witness,
    folner_mean,
    level_set_coloring,
    mult_density,
    parity_coloring,
    perfect_square,
    qtrick_average,
    residue_class,
    search_monochromatic_pair,
    search_monochromatic_triple,
    two_adic_even_exact,
)
from .specs import parse_character, parse_float_list, parse_form, parse_int_list, parse_spec

__all__ = ["main", "build_parser", "format_number"]

# keys left out of the config echo: they must not change the output bytes
_NOT_ECHOED = {"threads", "out", "handler", "no_timing"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def format_number(x):
    """12 significant digits for floats; integers unchanged."""
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return str(x)
    return f"{x:.11e}"


def _expand(row: dict) -> dict:
    """Split complex values into ``_re``/``_im`` columns and add magnitudes."""
    out = {}
    for k, v in row.items():
        if isinstance(v, (complex, np.complexfloating)):
            out[f"{k}_re"] = float(v.real)
            out[f"{k}_im"] = float(v.imag)
            if k == "value":
                out["magnitude"] = abs(v)
        else:
            out[k] = v
            if k == "value" and isinstance(v, (float, int, np.floating)) and not isinstance(v, bool):
                out["magnitude"] = abs(float(v))
    return out


def _json_text(obj) -> str:
    """JSON with floats rendered as 12-significant-digit literals."""
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json_text(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_json_text(v) for v in obj) + "]"
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        s = format_number(obj)
        return s if s[0].isdigit() or s[0] == "-" and s[1].isdigit() else json.dumps(s)
    return json.dumps(str(obj))


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating, int, np.integer)):
        return str(format_number(v))
    return str(v)


def _render(rows, meta, fmt):
    if fmt == "json":
        return _json_text({"metadata": meta, "rows": rows}) + "\n"
    cols = []
    for r in rows:
        cols.extend(k for k in r if k not in cols)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_cell(r.get(c)) for c in cols])
    return buf.getvalue()


class _Timer:
    def __init__(self, enabled):
        self.enabled = enabled

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0 if self.enabled else None


def _rows(args, items, compute):
    """``compute(item) -> dict`` for each item, with a runtime column."""
    out = []
    for it in items:
        with _Timer(not args.no_timing) as t:
            row = compute(it)
        row = _expand(row)
        row["runtime"] = t.elapsed
        out.append(row)
    return out


def _table(args):
    return default_table(args.bound)


def _check_bound(args, N):
    if N > args.bound:
        raise InvalidArgument(f"N={N} exceeds the prime table bound {args.bound} (raise --bound)")


# ---------------------------------------------------------------------------
# subcommands


def cmd_sieve(args):
    f = parse_spec(args.f)
    table = _table(args)

    def one(N):
        _check_bound(args, N)
        vals = eval_progression(f, args.a, args.b, 1, N, table)
        return {"f": args.f, "a": args.a, "b": args.b, "N": N, "value": complex(np.mean(vals))}

    return _rows(args, parse_int_list(args.N), one)


def cmd_corr(args):
    f = parse_spec(args.f)
    g = parse_spec(args.g) if args.g else f
    table = _table(args)
    p1, p2 = parse_form(args.p1), parse_form(args.p2)
    lat = Lattice(args.Q, args.a, args.b)

    def one(N):
        _check_bound(args, N)
        row = {"kind": args.kind, "f": args.f, "N": N}
        if args.kind == "pair":
            weight = None
            if args.delta is not None:
                weight = ArcWeight(args.delta, args.t, 1.0, True, p1, p2)
            row.update(g=args.g or args.f, p1=str(p1), p2=str(p2), Q=args.Q, a=args.a, b=args.b)
            row["value"] = corr_quad_pair(f, g, p1, p2, N, lat, weight, args.positivity,
                                          table, args.threads)
        elif args.kind == "L":
            row["Q"] = args.Q
            row["value"] = L_quantity(f, args.Q, N, table, args.threads)
        elif args.kind == "A":
            row["value"] = A_quantity(f, N, table)
        elif args.kind == "weighted":
            if args.delta is None:
                raise InvalidArgument("--delta is required for weighted correlations")
            row.update(Q=args.Q, delta=args.delta, variant=args.variant, t=args.t)
            row["value"] = weighted_L_quantities(f, args.Q, N, args.delta, args.variant, args.t,
                                                 1.0, table, args.threads)
        else:  # twoform
            row.update(K=args.K, Q1=args.Q1, Q2=args.Q2)
            row["value"] = two_form_L(f, args.K, args.Q1, args.Q2, N, None, args.positivity,
                                      table, args.threads)
        return row

    return _rows(args, parse_int_list(args.N), one)


def _target(args) -> PretentiousTarget:
    chi = parse_character(args.chi) if args.chi else DirichletCharacter.principal()
    return PretentiousTarget(chi, args.t)


def cmd_conc(args):
    f = parse_spec(args.f)
    table = _table(args)
    target = _target(args)

    def one(N):
        _check_bound(args, N)
        row = {"kind": args.kind, "f": args.f, "chi": args.chi or "1,0", "t": args.t,
               "Q": args.Q, "K": args.K, "N": N}
        if args.kind == "linear":
            row["value"] = linear_deficit(f, target, args.Q, args.K, N, table, args.squared)
        elif args.kind == "quadratic":
            row["d"] = args.d
            row["value"] = quadratic_deficit(f, target, args.Q, args.K, N, args.d,
                                             (args.offset_a, args.offset_b), table,
                                             args.squared, args.threads)
        else:  # tk
            h = AdditiveFromMult(f)
            row["value"] = turan_kubilius_variance(h, args.Q, args.K, N, table)
            row["bound"] = turan_kubilius_bound(h, args.K, N, table)
        return row

    return _rows(args, parse_int_list(args.N), one)


def cmd_gowers(args):
    f = parse_spec(args.f)
    table = _table(args)
    points = [(N, s) for N in parse_int_list(args.N) for s in parse_int_list(args.s)]

    def one(pt):
        N, s = pt
        _check_bound(args, N)
        vals = eval_progression(f, 1, 0, 1, N, table)
        row = {"f": args.f, "N": N, "s": s}
        row["value"] = gowers_norm(CyclicSequence(vals), s, args.threads)
        if args.fourier:
            row["fourier_sup"] = fourier_sup(vals)
        return row

    return _rows(args, points, one)


def _density_predicate(name: str):
    if name.startswith("not:"):
        return complement(_density_predicate(name[4:]))
    if name in ("2-adic-even-exact", "two-adic-even-exact"):
        return two_adic_even_exact
    if name in ("squares", "perfect-squares"):
        return perfect_square
    if name.startswith("multiples:"):
        return divisible_by(int(name.split(":")[1]))
    if name.startswith("residue:"):
        _, r, j = name.split(":")
        return residue_class(int(r), int(j))
    raise InvalidArgument(f"unknown set {name!r}")


def cmd_density(args):
    pred = _density_predicate(args.set)

    def one(K):
        [(_, dens)] = mult_density(pred, [K], args.mode, args.count, args.seed)
        return {"set": args.set, "K": K, "exact": not isinstance(dens, float),
                "fraction": str(dens) if not isinstance(dens, float) else "",
                "value": float(dens)}

    return _rows(args, parse_int_list(args.K), one)


def _coloring(spec: str, bound: int, table) -> Coloring:
    if spec == "parity":
        return parity_coloring(bound)
    if spec == "one":
        return Coloring(np.ones(bound, dtype=np.int64), 1)
    if spec.startswith("base:"):
        return base_p_coloring(int(spec.split(":")[1]), bound)
    if spec.startswith("level:"):
        return level_set_coloring(parse_spec(spec[6:]), bound, table)
    raise InvalidArgument(f"unknown coloring {spec!r}")


def cmd_prsearch(args):
    table = _table(args)
    a, b, c = args.rado

    def one(bound):
        col = _coloring(args.coloring, bound, table)
        row = {"coloring": args.coloring, "a": a, "b": b, "c": c, "bound": bound}
        if args.linear:
            row["equation"] = "linear"
            w = find_linear_witness(a, b, c, col, bound)
        else:
            row["equation"] = "quadratic"
            row["pair"] = args.pair
            T = RadoTriple(a, b, c)
            if args.pair == "all":
                w = search_monochromatic_triple(col, T, bound)
            else:
                w = search_monochromatic_pair(col, T, args.pair, bound)
        row["found"] = w is not None
        row["x"], row["y"], row["z"] = w if w is not None else (None, None, None)
        return row

    return _rows(args, parse_int_list(args.bound_list), one)


def _atom(text: str):
    spec, sep, w = text.rpartition("=")
    if not sep:
        raise InvalidArgument(f"atoms are written spec=weight, got {text!r}")
    return parse_spec(spec), float(w)


def cmd_qtrick(args):
    table = _table(args)
    sigma = DiscreteMeasure(tuple(_atom(a) for a in args.atom))

    def one(K):
        _check_bound(args, 2 * args.N)
        row = {"atoms": ";".join(args.atom), "K": K, "N": args.N, "quantity": args.quantity}
        row["value"] = qtrick_average(sigma, K, args.N, args.quantity, table, args.mode,
                                      args.count, args.seed, args.threads)
        for i, (f, _) in enumerate(sigma.atoms):
            row[f"atom{i}_qmean"] = folner_mean(f, K, args.mode, args.count, args.seed)
        return row

    return _rows(args, parse_int_list(args.K), one)


def _parametrization(name: str):
    if name.startswith("xyz:"):
        a, b, d = (int(v) for v in name[4:].split(","))
        return general_xyz_parametrization(a, b, d)
    return standard_parametrization(name)


def cmd_forms(args):
    rows = []
    if args.rado:
        T = RadoTriple(*args.rado)
        ok = is_rado_triple(T)
        rows.append({"item": "rado", "input": " ".join(map(str, args.rado)),
                     "result": "Rado triple" if ok else "not a Rado triple"})
    for text in args.form or []:
        F = parse_form(text)
        rows.append({"item": "form", "input": str(F), "discriminant": discriminant(F),
                     "result": "irreducible" if is_irreducible(F) else "reducible"})
    for name in args.param or []:
        P = _parametrization(name)
        ok = P.verify()
        r = np.arange(-args.range, args.range + 1)
        m, n = np.meshgrid(r, r, indexing="ij")
        fails = sum(not P.check_point(int(x), int(y)) for x, y in zip(m.ravel(), n.ravel()))
        rows.append({"item": "parametrization", "input": name,
                     "result": "identity holds" if ok and fails == 0 else "identity fails",
                     "point_failures": fails})
    if not rows:
        raise InvalidArgument("forms needs --rado, --form or --param")
    for r in rows:
        r["runtime"] = None
    return rows


def _prime_set(text: str | None):
    if not text or text == "all":
        return AllPrimes()
    if text.startswith("legendre:"):
        return LegendreSet(int(text.split(":")[1]))
    if text.startswith("residues:"):
        _, q, allowed = text.split(":")
        return Residues(int(q), tuple(int(v) for v in allowed.split(",")))
    raise InvalidArgument(f"unknown prime set {text!r}")


def cmd_dist(args):
    f, g = parse_spec(args.f), parse_spec(args.g)
    table = _table(args)
    S = _prime_set(args.primes)

    def one(X):
        _check_bound(args, X)
        v = distance_sq(f, g, X, S, table)
        return {"f": args.f, "g": args.g, "primes": args.primes or "all", "X": X,
                "value": v, "distance": math.sqrt(v)}

    return _rows(args, parse_int_list(args.X), one)


# ---------------------------------------------------------------------------


def _common(p):
    p.add_argument("--threads", type=int, default=1, help="worker threads (output is independent of it)")
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bound", type=int, default=10**6, help="prime table bound")
    p.add_argument("--no-timing", action="store_true",
                   help="leave the runtime column and wall time empty")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="quadreg", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"quadreg {__version__}")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("sieve", help="means of f(a n + b) over n <= N")
    _common(p)
    p.add_argument("--f", required=True)
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--b", type=int, default=0)
    p.add_argument("--N", required=True)
    p.set_defaults(handler=cmd_sieve)

    p = sub.add_parser("corr", help="two-dimensional correlations")
    _common(p)
    p.add_argument("--kind", choices=("pair", "L", "A", "weighted", "twoform"), default="pair")
    p.add_argument("--f", required=True)
    p.add_argument("--g")
    p.add_argument("--p1", default="m^2-n^2")
    p.add_argument("--p2", default="2*m*n")
    p.add_argument("--N", required=True)
    p.add_argument("--Q", type=int, default=1)
    p.add_argument("--a", type=int, default=0)
    p.add_argument("--b", type=int, default=0)
    p.add_argument("--delta", type=float)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--variant", choices=("minus", "plus"), default="minus")
    p.add_argument("--K", type=int, default=2)
    p.add_argument("--Q1", type=int, default=1)
    p.add_argument("--Q2", type=int, default=1)
    p.add_argument("--positivity", action="store_true")
    p.set_defaults(handler=cmd_corr)

    p = sub.add_parser("conc", help="concentration deficits and Turan-Kubilius variance")
    _common(p)
    p.add_argument("--kind", choices=("linear", "quadratic", "tk"), default="linear")
    p.add_argument("--f", required=True)
    p.add_argument("--chi", help="target character as q,j or q,[values]")
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--Q", type=int, required=True)
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--N", required=True)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--offset-a", type=int, default=1)
    p.add_argument("--offset-b", type=int, default=0)
    p.add_argument("--squared", action="store_true")
    p.set_defaults(handler=cmd_conc)

    p = sub.add_parser("gowers", help="Gowers norms of f on Z_N")
    _common(p)
    p.add_argument("--f", required=True)
    p.add_argument("--N", required=True)
    p.add_argument("--s", default="2")
    p.add_argument("--fourier", action="store_true", help="add the Fourier sup column")
    p.set_defaults(handler=cmd_gowers)

    p = sub.add_parser("density", help="multiplicative density profiles over Folner boxes")
    _common(p)
    p.add_argument("--set", required=True,
                   help="2-adic-even-exact, squares, multiples:r, residue:r:j, not:<set>")
    p.add_argument("--K", required=True)
    p.add_argument("--mode", choices=("auto", "exhaustive", "sampled"), default="auto")
    p.add_argument("--count", type=int, default=20000)
    p.set_defaults(handler=cmd_density)

    p = sub.add_parser("prsearch", help="monochromatic solution search")
    _common(p)
    p.add_argument("--coloring", default="base:5", help="base:p, parity, one or level:<spec>")
    p.add_argument("--rado", type=int, nargs=3, default=(1, 1, 1), metavar=("A", "B", "C"))
    p.add_argument("--pair", choices=("xy", "xz", "yz", "all"), default="xy")
    p.add_argument("--linear", action="store_true", help="search a x + b y = c z instead")
    p.add_argument("--search-bound", dest="bound_list", required=True)
    p.set_defaults(handler=cmd_prsearch)

    p = sub.add_parser("qtrick", help="Q-trick averages over Folner boxes")
    _common(p)
    p.add_argument("--atom", action="append", required=True, help="spec=weight (repeatable)")
    p.add_argument("--K", required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--quantity", choices=("fQ_times_A", "L"), default="fQ_times_A")
    p.add_argument("--mode", choices=("auto", "exhaustive", "sampled"), default="auto")
    p.add_argument("--count", type=int, default=2000)
    p.set_defaults(handler=cmd_qtrick)

    p = sub.add_parser("forms", help="Rado triples, form discriminants, parametrization checks")
    _common(p)
    p.add_argument("--rado", type=int, nargs=3, metavar=("A", "B", "C"))
    p.add_argument("--form", action="append")
    p.add_argument("--param", action="append", help="PM1, PM2, PM3 or xyz:a,b,d")
    p.add_argument("--range", type=int, default=50)
    p.set_defaults(handler=cmd_forms)

    p = sub.add_parser("dist", help="pretentious distance profiles")
    _common(p)
    p.add_argument("--f", required=True)
    p.add_argument("--g", default="one")
    p.add_argument("--X", required=True)
    p.add_argument("--primes", help="all, legendre:d or residues:q:r1,r2,...")
    p.set_defaults(handler=cmd_dist)
    return ap


def _config(args) -> dict:
    return {k: (list(v) if isinstance(v, tuple) else v)
            for k, v in sorted(vars(args).items()) if k not in _NOT_ECHOED}


def run(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if not getattr(args, "handler", None):
        ap.print_usage(sys.stderr)
        return 1
    if args.threads < 1:
        ap.error("--threads must be positive")
    t0 = time.perf_counter()
    try:
        rows = args.handler(args)
    except RangeError as exc:
        print(f"quadreg: range error: {exc}", file=sys.stderr)
        return 2
    except (QuadregError, ValueError) as exc:
        print(f"quadreg: error: {exc}", file=sys.stderr)
        return 1
    meta = {"version": __version__, "command": args.command, "config": _config(args)}
    if not args.no_timing:
        meta["wall_time"] = time.perf_counter() - t0
    text = _render(rows, meta, args.format)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
        if args.format == "csv":
            with open(args.out + ".meta.json", "w") as fh:
                fh.write(_json_text(meta) + "\n")
    else:
        sys.stdout.write(text)
        if args.format == "csv":
            sys.stderr.write(_json_text(meta) + "\n")
    return 0


def main(argv=None):
    sys.exit(run(argv))
