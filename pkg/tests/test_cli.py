import csv
import io
import json
import math
import subprocess
import sys
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zetashift.cli import dumps, fmt_float, parse_complex, parse_region, parse_resolution, run
from zetashift.plots import read_ppm


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    rep = run(list(argv), out, err)
    return rep, out.getvalue(), err.getvalue()


def cval(d):
    return complex(d["re"], d["im"])


def test_eval_zeta_two():
    rep, out, _ = call("eval", "zeta", "--s", "2,0")
    assert rep.exit_code == 0
    doc = json.loads(out)
    assert abs(cval(doc["value"]) - math.pi**2 / 6) < 1e-10
    assert "1.644934066" in out


def test_eval_hurwitz_negative_s():
    rep, out, _ = call("eval", "hurwitz", "--s", "-3.5,2", "--a", "0.3")
    assert rep.exit_code == 0
    got = cval(json.loads(out)["value"])
    assert abs(got - complex(mpmath.zeta(complex(-3.5, 2), 0.3))) < 1e-9


def test_eval_em_method():
    rep, out, _ = call("eval", "zeta", "--s", "3", "--method", "em", "--head", "10", "--order", "8")
    assert rep.exit_code == 0
    doc = json.loads(out)
    assert doc["head_terms"] == 10 and doc["order"] == 8
    assert abs(cval(doc["value"]) - float(mpmath.zeta(3))) < 1e-12


def test_eval_em_needs_parameters():
    assert call("eval", "zeta", "--s", "3", "--method", "em")[0].exit_code == 2


def test_eval_lfunc():
    rep, out, _ = call("eval", "lfunc", "--s", "1,0", "--modulus", "4", "--char-index", "1")
    assert rep.exit_code == 0
    assert abs(cval(json.loads(out)["value"]) - math.pi / 4) < 1e-9


def test_eval_lfunc_bad_index():
    assert call("eval", "lfunc", "--s", "2", "--modulus", "4", "--char-index", "9")[0].exit_code == 2


def test_eval_pole_is_numeric_error():
    rep, _, err = call("eval", "zeta", "--s", "1,0")
    assert rep.exit_code == 3
    assert "numeric error" in err


def test_eval_unreachable_tol():
    assert call("eval", "zeta", "--s", "2", "--tol", "1e-30")[0].exit_code == 3


@pytest.mark.parametrize(
    "argv",
    [
        ("eval", "zeta", "--s", "two"),
        ("eval", "zeta"),
        ("eval", "zeta", "--s", "2", "--bogus"),
        ("frobnicate",),
        (),
        ("eval", "hurwitz", "--s", "2", "--a", "1.5"),
    ],
)
def test_usage_errors(argv):
    assert call(*argv)[0].exit_code == 2


def test_verify_default_grid_passes():
    rep, out, _ = call("verify", "hurwitz-identity", "--grid", "default", "--tol", "1e-8")
    assert rep.exit_code == 0
    doc = json.loads(out)
    assert doc["identity"] == "hurwitz_identity"
    assert doc["passed"] is True
    assert len(doc["rows"]) == 18
    assert doc["max_residual"] < 1e-8


def test_verify_impossible_tol_fails():
    rep, out, _ = call("verify", "van-gorder-zeta", "--tol", "1e-30")
    assert rep.exit_code == 1
    assert json.loads(out)["passed"] is False


def test_verify_custom_points(tmp_path):
    pts = '[{"s": "2,1"}, {"s": [-2.5, 0]}, {"s": 4}]'
    rep, out, _ = call("verify", "van_gorder_zeta", "--grid", "custom", "--points", pts)
    assert rep.exit_code == 0
    rows = json.loads(out)["rows"]
    assert [cval(r["params"]["s"]) for r in rows[:2]] == [2 + 1j, -2.5]
    f = tmp_path / "pts.json"
    f.write_text('{"m": 3, "a": 0.5}')
    rep, out, _ = call("verify", "trivial_zero_direct", "--grid", "custom", "--points", str(f))
    assert rep.exit_code == 0
    assert json.loads(out)["rows"][0]["reference"] == -0.5**4 / 4


@pytest.mark.parametrize("pts", ["not json", "[1, 2]"])
def test_verify_bad_points(pts):
    assert call("verify", "van_gorder_zeta", "--grid", "custom", "--points", pts)[0].exit_code == 2


def test_verify_missing_points():
    assert call("verify", "van_gorder_zeta", "--grid", "custom")[0].exit_code == 2


def test_verify_bad_parameter_name():
    assert call("verify", "van_gorder_zeta", "--grid", "custom", "--points", '{"q": 2}')[0].exit_code == 2


def test_verify_unknown_identity():
    assert call("verify", "nope")[0].exit_code == 2


def test_verify_png(tmp_path):
    png = tmp_path / "r.png"
    rep, _, _ = call("verify", "trivial-zero-direct", "--png", str(png))
    assert rep.exit_code == 0
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    assert rep.artifacts_written == [str(png)]


def test_coeff_bernoulli():
    rep, out, _ = call("coeff", "bernoulli", "--n", "12")
    assert rep.exit_code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 13
    got = {int(r["n"]): Fraction(int(r["numerator"]), int(r["denominator"])) for r in rows}
    assert got[1] == Fraction(-1, 2)
    assert got[12] == Fraction(-691, 2730)


def test_coeff_bernoulli_past_cache():
    rep, out, _ = call("coeff", "bernoulli", "--n", "300")
    assert rep.exit_code == 0
    assert out.strip().splitlines()[-1].startswith("300,")


def test_coeff_p_and_q():
    _, out, _ = call("coeff", "p", "--n", "5", "--s", "2")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [float(r["re"]) for r in rows] == [1.0] * 6
    _, out, _ = call("coeff", "q", "--n", "2", "--s", "2", "--method", "recursive")
    rows = list(csv.DictReader(io.StringIO(out)))
    # q_1(2) = B_1 * 2 = -1, q_2(2) = B_2/2 * 6 = 1/2
    assert [float(r["re"]) for r in rows] == [1.0, -1.0, 0.5]


def test_coeff_negative_n():
    assert call("coeff", "p", "--n", "-1")[0].exit_code == 2


def test_diagnose_p_series():
    rep, out, _ = call("diagnose", "p-series", "--s", "2", "--terms", "100")
    assert rep.exit_code == 0
    doc = json.loads(out)
    assert doc["verdict"]["kind"] == "diverging"
    assert doc["metadata"]["terms"] == 101
    _, out, _ = call("diagnose", "p-series", "--s", "2", "--terms", "100", "--format", "csv")
    last = list(csv.DictReader(io.StringIO(out)))[-1]
    assert (last["n"], float(last["re_partial"])) == ("100", 101.0)


def test_diagnose_g_inverse_negative_integer():
    rep, out, _ = call("diagnose", "g-inverse", "--s", "-3,0")
    assert rep.exit_code == 0
    doc = json.loads(out)
    # terminates after n = 3, so the verdict is an exact, certified sum
    assert doc["verdict"]["kind"] == "converged"
    assert doc["verdict"]["certified"] is True
    assert cval(doc["verdict"]["value"]) == -1
    assert cval(doc["metadata"]["reference_at_neg_int"]) == pytest.approx(1 / 120 - 1)


def test_diagnose_csv_and_prefix(tmp_path):
    prefix = tmp_path / "ts"
    rep, out, _ = call("diagnose", "taylor-shift", "--s", "3", "--n", "4", "--terms", "200",
                       "--format", "csv", "--out-prefix", str(prefix))
    assert rep.exit_code == 0
    assert out.splitlines()[0].startswith("n,")
    assert sorted(p.name for p in tmp_path.iterdir()) == ["ts.csv", "ts.json", "ts.png"]
    assert (tmp_path / "ts.csv").read_text() == out
    assert json.loads((tmp_path / "ts.json").read_text())["verdict"]["kind"] == "diverging"


def test_characters_list():
    rep, out, _ = call("characters", "list", "--modulus", "5")
    assert rep.exit_code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 4 * 5
    principal = [r for r in rows if r["index"] == "0"]
    assert [float(r["re"]) for r in principal] == [0.0, 1.0, 1.0, 1.0, 1.0]


def test_characters_bad_modulus():
    assert call("characters", "list", "--modulus", "0")[0].exit_code == 2


def test_plot_figure1(tmp_path):
    ppm = tmp_path / "fig1c.ppm"
    rep, out, _ = call("plot", "figure1", "--n", "10", "--resolution", "40x30", "--out", str(ppm))
    assert rep.exit_code == 0
    buf = read_ppm(ppm)
    assert (buf.width, buf.height) == (40, 30)
    doc = json.loads(out)
    assert doc["artifacts"] == [str(ppm)]
    assert doc["pixels"] == 1200


def test_plot_custom_with_png(tmp_path):
    ppm, png = tmp_path / "c.ppm", tmp_path / "c.png"
    rep, out, _ = call("plot", "custom", "--function", "difference", "--n", "5", "--region", "-3,3,-3,3",
                       "--resolution", "20x20", "--circle", "2", "--a", "0.5", "--out", str(ppm), "--png", str(png))
    assert rep.exit_code == 0
    doc = json.loads(out)
    assert doc["region"] == [-3.0, 3.0, -3.0, 3.0]
    assert doc["a"] == 0.5
    assert png.exists()


def test_plot_figure2_needs_n(tmp_path):
    assert call("plot", "figure2", "--out", str(tmp_path / "x.ppm"))[0].exit_code == 2


def test_plot_bad_region(tmp_path):
    assert call("plot", "custom", "--region", "1,0,0,1", "--out", str(tmp_path / "x.ppm"))[0].exit_code == 2


def test_console_script_runs():
    proc = subprocess.run([sys.executable, "-m", "zetashift.cli", "eval", "zeta", "--s", "2,0"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["function"] == "hurwitz_zeta"


def test_fmt_float():
    assert fmt_float(0.1) == "0.10000000000000001"
    assert fmt_float(float("nan")) == "null"
    assert fmt_float(float("inf")) == "null"


@given(st.complex_numbers(allow_nan=False, allow_infinity=False))
def test_dumps_complex_round_trip(z):
    assert cval(json.loads(dumps({"v": z}))["v"]) == z


@given(st.recursive(
    st.none() | st.booleans() | st.integers() | st.floats(allow_nan=False, allow_infinity=False) | st.text(),
    lambda kids: st.lists(kids) | st.dictionaries(st.text(), kids),
    max_leaves=20,
))
def test_dumps_matches_json(obj):
    assert json.loads(dumps(obj)) == obj
    assert json.loads(dumps(obj, indent=None)) == obj


def test_dumps_fraction_and_tuple():
    assert json.loads(dumps((Fraction(-1, 2), 3))) == ["-1/2", 3]
    with pytest.raises(TypeError):
        dumps(object())


def test_parsers():
    assert parse_complex("2,0") == 2
    assert parse_complex("-3.5,1e-3") == complex(-3.5, 1e-3)
    assert parse_complex("4") == 4
    assert parse_resolution("400x300") == (400, 300)
    assert parse_region("-1,1,-2,2") == (-1.0, 1.0, -2.0, 2.0)
    for bad, fn in [("1,2,3", parse_complex), ("400", parse_resolution), ("1,2", parse_region)]:
        with pytest.raises(Exception):
            fn(bad)
