import csv
import io
import json
import math
import subprocess
import sys

import pytest

from geodesic_spectra.approx_constants import c_inf, c_plus
from geodesic_spectra.cli import DEFAULTS, UsageError, _parser, dispatch, emit_csv, fmt_value, parse_ring, resolve
from geodesic_spectra.lattice_collections import GAUSSIAN, ZZ, parse_surd


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = dispatch(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_golden_const_row():
    code, out, _ = run(["const", "--surd", "golden", "--kind", "cusp"])
    assert code == 0
    (row,) = rows(out)
    assert row["c"] == "0.38196601125010515"
    assert float(row["H"]) == -math.log(2 * float(row["c"]))
    assert float(row["c_plus"]) == pytest.approx(1 / math.sqrt(5), abs=1e-16)
    assert row["status"] == "exact"


def test_bogus_flag_exits_2():
    assert run(["const", "--bogus"])[0] == 2
    assert run(["--bogus"])[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "geodesic_spectra", "const", "--surd", "sqrt2"],
                          capture_output=True, text=True, check=True)
    c = float(rows(proc.stdout)[0]["c"])
    assert c == c_inf(parse_surd("sqrt2")).upper
    assert c == pytest.approx(6 - 4 * math.sqrt(2), abs=1e-15)


@pytest.mark.parametrize("argv", [
    ["const", "--surd", "golden", "--surd", "sqrt7", "--x", "3/7"],
    ["penetrate", "--surd", "golden", "--smax", "12"],
    ["spectrum", "--count", "4", "--seed", "2"],
    ["game", "--rounds", "12", "--seed", "5"],
])
def test_deterministic(argv):
    assert run(argv) == run(argv)


def test_usage_errors():
    assert run(["const", "--ring", "Q5"])[0] == 2
    assert run(["dim", "--mode", "prop23"])[0] == 2


def test_computation_error_exits_1():
    code, _, err = run(["penetrate", "--x", "2/3"])
    assert code == 1 and "tangency" in err


def test_header_only_csv():
    code, out, _ = run(["spectrum", "--count", "0"])
    assert code == 0
    assert out == "input,kind,constant,log_constant,asymptotic_constant,status\n"
    assert emit_csv(["a", "b"], []) == "a,b\n"


def test_lossless_round_trip():
    code, out, _ = run(["const", "--surd", "golden", "--surd", "sqrt2", "--surd", "sqrt7"])
    for row, name in zip(rows(out), ["golden", "sqrt2", "sqrt7"]):
        x = parse_surd(name)
        assert float(row["c"]) == c_inf(x).upper
        assert float(row["c_plus"]) == float(c_plus(x))
        assert row["input"] == str(x)


def test_precision_flag():
    _, out, _ = run(["const", "--surd", "golden", "--precision", "6"])
    assert rows(out)[0]["c"] == "0.381966"


def test_json_format():
    code, out, _ = run(["const", "--surd", "golden", "--format", "json"])
    data = json.loads(out)
    assert data[0]["c"] == "0.38196601125010515"


def test_out_file(tmp_path):
    path = tmp_path / "t.csv"
    code, out, _ = run(["const", "--surd", "golden", "--out", str(path)])
    assert code == 0 and out == ""
    assert rows(path.read_text())[0]["c"] == "0.38196601125010515"


def test_config_precedence(tmp_path):
    cfg = tmp_path / "gsl.conf"
    cfg.write_text("# defaults for a run\nc = 4.5\ndepth=3\nsurd = golden;sqrt2\n")
    env = {"GSL_CONFIG": str(cfg)}
    o = resolve(_parser().parse_args(["dim", "--depth", "5"]), env)
    assert o["c"] == 4.5            # from the file
    assert o["depth"] == 5          # flag wins
    assert o["surd"] == ["golden", "sqrt2"]
    assert o["beta"] == DEFAULTS["beta"]
    assert resolve(_parser().parse_args(["dim"]), {})["c"] == DEFAULTS["c"]


def test_bad_config_line(tmp_path):
    cfg = tmp_path / "bad.conf"
    cfg.write_text("just words\n")
    with pytest.raises(UsageError):
        resolve(_parser().parse_args(["dim"]), {"GSL_CONFIG": str(cfg)})


def test_parse_ring():
    assert parse_ring("Z") is ZZ
    assert parse_ring("O1").d == GAUSSIAN.d
    with pytest.raises(UsageError):
        parse_ring("R")


@pytest.mark.parametrize("v, want", [
    (None, ""), (True, "true"), (3, "3"), (math.inf, "inf"), (0.1, "0.10000000000000001"),
])
def test_fmt_value(v, want):
    assert fmt_value(v) == want


def test_gaussian_const():
    code, out, _ = run(["const", "--ring", "O1", "--z", "0.5,0.5", "--smax", "4"])
    assert code == 0
    assert rows(out)[0]["c"] == "0" and rows(out)[0]["status"] == "exact"


def test_dim_cantor_table():
    code, out, _ = run(["dim", "--mode", "cantor", "--c", "3", "--depth", "3"])
    table = rows(out)
    assert code == 0 and len(table) == 4
    assert [int(r["level"]) for r in table] == [0, 1, 2, 3]


def test_check_subcommand():
    code, out, err = run(["check", "hurwitz"])
    assert code == 0
    assert rows(out)[0]["pass"] == "true"
    assert "hurwitz" in err and "PASS" in err
