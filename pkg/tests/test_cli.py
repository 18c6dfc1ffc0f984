"""Command-line round trips: parsing, serialization, and exit codes."""

import json
import math
import subprocess

import pytest

from cmcselect import (
    MissingResponseError,
    ParseError,
    PROSTATE_ENV,
    TooFewRowsError,
)
from cmcselect.cli import (
    _round2,
    load_csv,
    main,
    read_candidate_list,
    to_canonical_json,
)

D1_CSV = "y,x\n0,0\n1,1\n2,2\n4,3\n"


def write(tmp_path, name: str, text: str):
    f = tmp_path / name
    f.write_text(text)
    return str(f)


def test_load_csv_shapes(tmp_path):
    path = write(tmp_path, "d.csv", "a,y,b\n1,10,4\n2,20,5\n3,30,6\n0,5,9\n7,1,2\n")
    data = load_csv(path, "y")
    assert data.names == ("a", "b")
    assert data.n == 5 and data.p == 2
    assert list(data.y) == [10.0, 20.0, 30.0, 5.0, 1.0]
    assert list(data.X[:, 1]) == [4.0, 5.0, 6.0, 9.0, 2.0]


def test_load_csv_errors(tmp_path):
    bad_cell = write(tmp_path, "c.csv", "y,x\n1,2\n3,oops\n4,5\n6,7\n")
    with pytest.raises(ParseError) as err:
        load_csv(bad_cell, "y")
    assert err.value.row == 3 and err.value.col == 2

    ragged = write(tmp_path, "r.csv", "y,x\n1,2\n3,4,5\n6,7\n8,9\n")
    with pytest.raises(ParseError) as err:
        load_csv(ragged, "y")
    assert err.value.row == 3

    empty_cell = write(tmp_path, "e.csv", "y,x\n1,\n2,3\n4,5\n6,7\n")
    with pytest.raises(ParseError) as err:
        load_csv(empty_cell, "y")
    assert err.value.row == 2 and err.value.col == 2

    dup = write(tmp_path, "dup.csv", "y,x,x\n1,2,3\n")
    with pytest.raises(ParseError):
        load_csv(dup, "y")

    with pytest.raises(MissingResponseError):
        load_csv(write(tmp_path, "m.csv", "a,b\n1,2\n3,4\n5,6\n"), "y")

    short = write(tmp_path, "s.csv", "y,a,b\n1,2,3\n4,5,6\n7,8,9\n")
    with pytest.raises(TooFewRowsError):
        load_csv(short, "y")

    with pytest.raises(ParseError):
        load_csv(write(tmp_path, "0.csv", ""), "y")

    with pytest.raises(ParseError):
        load_csv(str(tmp_path / "nope.csv"), "y")


def test_candidate_list_parsing(tmp_path):
    path = write(tmp_path, "cands.txt", "x2\nx1,x3\n\n x2 , x1 \n")
    cands = read_candidate_list(path, ("x1", "x2", "x3"))
    assert cands.kind == "explicit"
    assert cands.masks == ((1,), (0, 2), (0, 1))

    bad = write(tmp_path, "bad.txt", "x1\nz9\n")
    with pytest.raises(ParseError) as err:
        read_candidate_list(bad, ("x1", "x2"))
    assert err.value.row == 2

    with pytest.raises(ParseError):
        read_candidate_list(write(tmp_path, "blank.txt", "\n\n"), ("x1",))


def test_canonical_json_round_trip():
    obj = {
        "meta": {"b_first": 2, "a_second": [0.1, 1.0 / 3.0, 1e300, -0.0]},
        "flags": [True, False, None],
        "text": "line\nbreak",
        "count": 42,
    }
    s1 = to_canonical_json(obj)
    s2 = to_canonical_json(json.loads(s1))
    assert s1 == s2
    # insertion order is preserved, not sorted
    assert s1.index("b_first") < s1.index("a_second")


def test_canonical_json_non_finite():
    s = to_canonical_json({"hi": math.inf, "lo": -math.inf, "gap": math.nan})
    assert '"inf"' in s and '"-inf"' in s and '"nan"' in s
    assert to_canonical_json(json.loads(s)) == s


def test_rounding_is_half_even():
    # exact binary halves land on the even digit
    assert _round2(0.125) == "0.12"
    assert _round2(0.375) == "0.38"
    assert _round2(0.625) == "0.62"
    assert _round2(0.875) == "0.88"


def test_select_table_output(tmp_path, capsys):
    path = write(tmp_path, "d1.csv", D1_CSV)
    code = main(["select", "--data", path, "--response", "y",
                 "--criteria", "cmc", "--alphas", "0.5"])
    out = capsys.readouterr().out
    assert code == 0
    assert "chosen (1 of 1): x" in out
    assert "kappa" in out


def test_select_json_round_trip(tmp_path, capsys):
    path = write(tmp_path, "d1.csv", D1_CSV)
    code = main(["select", "--data", path, "--response", "y",
                 "--criteria", "cmc,bic", "--alphas", "0.5", "--format", "json"])
    out = capsys.readouterr().out
    assert code == 0
    doc = json.loads(out)
    assert doc["meta"]["command"] == "select"
    assert doc["meta"]["response"] == "y"
    assert [r["criterion"] for r in doc["results"]] == ["cmc", "bic"]
    assert doc["results"][0]["chosen"] == ["x"]
    assert doc["results"][0]["coefficients"]["intercept"] == pytest.approx(-0.2)
    assert to_canonical_json(doc) == out


def test_select_alpha_zero_serializes_inf(tmp_path, capsys):
    path = write(tmp_path, "d1.csv", D1_CSV)
    code = main(["select", "--data", path, "--response", "y",
                 "--criteria", "cmc", "--alphas", "0", "--format", "json"])
    out = capsys.readouterr().out
    assert code == 0
    doc = json.loads(out)
    assert doc["results"][0]["kappa"] == "inf"
    assert doc["results"][0]["chosen"] == []
    assert to_canonical_json(doc) == out


def test_select_csv_format(tmp_path, capsys):
    path = write(tmp_path, "d1.csv", D1_CSV)
    code = main(["select", "--data", path, "--response", "y",
                 "--criteria", "bic", "--format", "csv"])
    out = capsys.readouterr().out
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "criterion,alpha,name,coefficient"
    assert lines[1].startswith("bic,,intercept,")


def test_select_criterion_aliases(tmp_path, capsys):
    path = write(tmp_path, "d1.csv", D1_CSV)
    code = main(["select", "--data", path, "--response", "y",
                 "--criteria", "cp", "--format", "json"])
    out = capsys.readouterr().out
    assert code == 0
    assert json.loads(out)["results"][0]["criterion"] == "cp_aic"


def test_select_candidate_list(tmp_path, capsys):
    path = write(tmp_path, "d1.csv", D1_CSV)
    cands = write(tmp_path, "cands.txt", "x\n")
    code = main(["select", "--data", path, "--response", "y",
                 "--criteria", "cmc", "--alphas", "0.5",
                 "--candidates", f"list:{cands}", "--format", "json"])
    out = capsys.readouterr().out
    assert code == 0
    doc = json.loads(out)
    assert doc["results"][0]["chosen"] == ["x"]
    assert [e["size"] for e in doc["results"][0]["per_size"]] == [1]


def test_select_exit_codes(tmp_path, capsys, monkeypatch):
    path = write(tmp_path, "d1.csv", D1_CSV)

    assert main(["select", "--data", str(tmp_path / "nope.csv"),
                 "--response", "y"]) == 2
    assert "error" in capsys.readouterr().err

    assert main(["select", "--data", path]) == 2
    assert "response" in capsys.readouterr().err

    assert main(["select", "--data", path, "--response", "y",
                 "--criteria", "lasso"]) == 2
    capsys.readouterr()

    assert main(["select", "--data", path, "--response", "y",
                 "--alphas", "1.5"]) == 2
    capsys.readouterr()

    monkeypatch.delenv(PROSTATE_ENV, raising=False)
    assert main(["select"]) == 2
    assert PROSTATE_ENV in capsys.readouterr().err


def test_select_numerical_exit_code(tmp_path, capsys):
    exact = write(tmp_path, "exact.csv", "y,x\n1,0\n3,1\n5,2\n7,3\n9,4\n")
    assert main(["select", "--data", exact, "--response", "y"]) == 3
    assert "numerical error" in capsys.readouterr().err

    dup = write(tmp_path, "dup.csv", "y,a,b\n1,2,2\n0,1,1\n4,5,5\n2,0,0\n9,3,3\n")
    assert main(["select", "--data", dup, "--response", "y"]) == 3
    capsys.readouterr()


def test_simulate_json(capsys):
    code = main(["simulate", "--n", "25", "--p", "4", "--p-active", "2",
                 "--reps", "3", "--seed", "5", "--threads", "1",
                 "--format", "json"])
    out = capsys.readouterr().out
    assert code == 0
    doc = json.loads(out)
    assert doc["meta"]["command"] == "simulate"
    assert doc["meta"]["labels"] == [
        "cmc_0.9", "cmc_0.5", "cmc_0.1", "bic", "cp_aic", "adjr2",
    ]
    rates = doc["results"][0]["rates"]
    assert set(rates) == set(doc["meta"]["labels"])
    for cell in rates.values():
        assert 0.0 <= cell["fir"] <= 1.0
        assert 0.0 <= cell["far"] <= 1.0
        assert 0.0 <= cell["zero_fraction"] <= 1.0
    assert doc["results"][0]["scenario"]["extension"] is False
    assert to_canonical_json(doc) == out


def test_simulate_table_format(capsys):
    code = main(["simulate", "--n", "25", "--p", "4", "--p-active", "2",
                 "--reps", "2", "--seed", "5", "--threads", "1"])
    out = capsys.readouterr().out
    assert code == 0
    assert "(25, 4, 2)" in out


def test_simulate_exit_codes(capsys):
    assert main(["simulate", "--n", "25", "--p", "4", "--p-active", "9",
                 "--reps", "2", "--threads", "1"]) == 2
    capsys.readouterr()
    assert main(["simulate", "--n", "25", "--p", "4", "--p-active", "2",
                 "--reps", "0", "--threads", "1"]) == 2
    capsys.readouterr()
    assert main(["simulate", "--n", "25", "--p", "4", "--p-active", "2",
                 "--reps", "2", "--threads", "0"]) == 2
    capsys.readouterr()


def test_tables_two_structure(capsys):
    code = main(["tables", "--table", "2", "--reps", "2", "--seed", "3",
                 "--threads", "1", "--format", "json"])
    out = capsys.readouterr().out
    assert code == 0
    doc = json.loads(out)
    assert doc["meta"]["table"] == 2
    assert [r["scenario"]["n"] for r in doc["results"]] == [40, 60, 100]
    assert list(doc["results"][0]["rates"]) == ["cmc_0.9"]
    assert list(doc["results"][1]["rates"]) == ["cmc_0.5"]
    assert list(doc["results"][2]["rates"]) == ["cmc_0.1"]
    assert to_canonical_json(doc) == out


@pytest.mark.slow
def test_tables_one_structure(capsys):
    code = main(["tables", "--table", "1", "--reps", "1", "--seed", "3",
                 "--threads", "1", "--format", "json"])
    out = capsys.readouterr().out
    assert code == 0
    doc = json.loads(out)
    shapes = [
        (r["scenario"]["n"], r["scenario"]["p"], r["scenario"]["p_active"])
        for r in doc["results"]
    ]
    assert len(shapes) == 12
    assert shapes[0] == (20, 10, 5)
    assert shapes[-1] == (150, 30, 15)
    assert all(len(r["rates"]) == 6 for r in doc["results"])


def test_console_script_installed():
    proc = subprocess.run(
        ["cmcselect", "select", "--help"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert "--criteria" in proc.stdout
