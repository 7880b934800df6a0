import csv
import io
import json

import pytest

from quadreg.cli import format_number, run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_corr_example(capsys):
    code, out, _ = call(capsys, "corr", "--f", "liouville", "--g", "liouville", "--p1", "m^2-n^2",
                        "--p2", "2*m*n", "--N", "64,128,256", "--no-timing")
    assert code == 0
    rows = rows_of(out)
    assert len(rows) == 3 and [r["N"] for r in rows] == ["64", "128", "256"]
    assert all(float(r["magnitude"]) < 0.2 for r in rows)


def test_density_example(capsys):
    code, out, _ = call(capsys, "density", "--set", "2-adic-even-exact", "--K", "4..12",
                        "--format", "json", "--no-timing")
    assert code == 0
    doc = json.loads(out)
    assert doc["metadata"]["command"] == "density"
    vals = [r["value"] for r in doc["rows"]]
    assert len(vals) == 9 and abs(vals[-1] - 0.5) < 1e-12


def test_forms_example(capsys):
    code, out, _ = call(capsys, "forms", "--rado", "1", "1", "4")
    assert code == 0 and "not a Rado triple" in out
    code, out, _ = call(capsys, "forms", "--param", "PM3", "--param", "xyz:3,5,7", "--range", "20")
    assert out.count("identity holds") == 2


def test_numbers_have_twelve_significant_digits():
    assert format_number(1 / 3) == "3.33333333333e-01"
    assert format_number(7) == 7


def test_csv_sidecar_and_quoting(tmp_path, capsys):
    out = tmp_path / "r.csv"
    code, _, _ = call(capsys, "qtrick", "--atom", "one=0.5", "--atom", "mchar(3,1)=0.5",
                      "--K", "3", "--N", "1000", "--out", str(out))
    assert code == 0
    text = out.read_bytes().decode()
    assert "\r\n" in text and '"one=0.5;mchar(3,1)=0.5"' in text
    meta = json.loads((tmp_path / "r.csv.meta.json").read_text())
    assert meta["version"] and "wall_time" in meta and "threads" not in meta["config"]


@pytest.mark.parametrize("argv", [
    ("corr", "--f", "liouville", "--N", "600,1100", "--p1", "mn", "--p2", "m^2+n^2"),
    ("conc", "--kind", "quadratic", "--f", "liouville", "--Q", "81", "--K", "3", "--N", "1100"),
    ("gowers", "--f", "liouville", "--N", "700", "--s", "2,3"),
])
def test_thread_count_does_not_change_bytes(tmp_path, capsys, argv):
    blobs = set()
    for t in (1, 4, 8):
        out = tmp_path / f"o{t}.json"
        assert run(list(argv) + ["--threads", str(t), "--no-timing", "--format", "json",
                                 "--out", str(out)]) == 0
        blobs.add(out.read_bytes())
    assert len(blobs) == 1


def test_exit_codes(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["nosuchcommand"])
    assert exc.value.code == 1
    assert call(capsys, "corr", "--f", "bogus", "--N", "8")[0] == 1
    assert call(capsys, "sieve", "--f", "liouville", "--N", str(10**7))[0] == 1
    assert call(capsys, "sieve", "--f", "liouville", "--N", "5", "--a", str(10**40))[0] == 2
    assert run([]) == 1


def test_other_subcommands(capsys):
    code, out, _ = call(capsys, "sieve", "--f", "liouville", "--a", "3", "--b", "1", "--N", "10000")
    assert code == 0 and float(rows_of(out)[0]["magnitude"]) < 0.05
    code, out, _ = call(capsys, "conc", "--f", "mchar(3,1)", "--chi", "3,1", "--Q", "243",
                        "--K", "3", "--N", "1000")
    assert code == 0 and float(rows_of(out)[0]["value"]) < 1e-12
    code, out, _ = call(capsys, "prsearch", "--coloring", "parity", "--search-bound", "10")
    r = rows_of(out)[0]
    assert (r["x"], r["y"], r["z"]) == ("6", "8", "10")
    code, out, _ = call(capsys, "prsearch", "--coloring", "base:7", "--rado", "1", "1", "3",
                        "--linear", "--search-bound", "300")
    assert rows_of(out)[0]["found"] == "false"
    code, out, _ = call(capsys, "dist", "--f", "liouville", "--X", "100", "--primes", "legendre:1")
    assert code == 0 and float(rows_of(out)[0]["value"]) > 0
    code, out, _ = call(capsys, "corr", "--kind", "twoform", "--f", "one", "--K", "2", "--N", "16")
    assert code == 0 and float(rows_of(out)[0]["value_re"]) == 1
    code, out, _ = call(capsys, "conc", "--kind", "tk", "--f", "liouville", "--Q", "6", "--K", "3",
                        "--N", "1000")
    assert code == 0 and "bound" in rows_of(out)[0]
