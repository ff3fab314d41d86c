import json
from fractions import Fraction

import pytest
from click.testing import CliRunner
from hypothesis import given, settings, strategies as st

from advrobust import io
from advrobust.cli import main
from advrobust.complex import Filtration, build_complex
from advrobust.errors import MalformedInputError
from advrobust.field import Q

from conftest import complexes

HOLLOW = {"vertices": 3, "simplices": [[0], [1], [2], [0, 1], [1, 2], [0, 2]]}
CLOSED = {"vertices": 3, "simplices": [[0], [1], [2], [0, 1], [0, 2], [1, 2], [0, 1, 2]]}


@pytest.fixture
def runner():
    return CliRunner()


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def run(runner, *args):
    return runner.invoke(main, [str(a) for a in args])


def test_rational_strings():
    assert io.rational_str(Fraction(6, 4)) == "3/2"
    assert io.rational_str(3) == "3"
    assert io.parse_rational("-3/6") == Fraction(-1, 2)
    assert io.parse_rational(0.5) == Fraction(1, 2)
    for bad in ("x", True, "1/0", None):
        with pytest.raises(MalformedInputError):
            io.parse_rational(bad)


def test_canonical_form_is_sorted_and_normalised():
    text = json.dumps({"vertices": 3, "coords": {"1": ["2/4", 0], "0": [0, 0], "2": [0, "1"]},
                       "simplices": [{"v": [2, 1]}, {"v": [0]}, {"v": [1]}, {"v": [2]}]})
    out = io.canonicalize(text)
    assert out == ('{"coords":{"0":["0","0"],"1":["1/2","0"],"2":["0","1"]},'
                   '"simplices":[{"v":[0]},{"v":[1]},{"v":[2]},{"v":[1,2]}],"vertices":3}\n')
    assert io.canonicalize(out) == out


@settings(max_examples=40, deadline=None)
@given(complexes(max_vertices=6), st.randoms())
def test_round_trip_is_byte_identical(K, rnd):
    items = [{"v": list(s)} for s in K]
    rnd.shuffle(items)
    text = json.dumps({"vertices": K.n_vertices, "simplices": items})
    once = io.canonicalize(text)
    assert io.canonicalize(once) == once
    K2, _ = io.parse_complex(json.loads(once))
    assert set(K2) == set(K)


def test_filtration_parse_keeps_file_order_and_grades():
    f, coords, n = io.parse_filtration({"simplices": [{"v": [1], "grade": 0}, {"v": [0], "grade": 0},
                                                      {"v": [0, 1], "grade": 1.5}]})
    assert f.order == ((1,), (0,), (0, 1)) and f.grades == (0, 0, 1.5) and n == 2 and coords is None
    back = io.filtration_to_json(f, n)
    assert io.parse_filtration(back)[0].order == f.order


@pytest.mark.parametrize("data", [
    [], {"simplices": 3}, {"simplices": [{"v": []}]}, {"simplices": [{"v": [-1]}]},
    {"simplices": [{"v": [0], "grade": 0}, {"v": [1]}]}, {"simplices": [[0]], "vertices": 0},
    {"simplices": [{"v": [True]}]}, {"simplices": [[0]], "coords": {"a": [0, 0]}},
])
def test_parse_errors(data):
    with pytest.raises(MalformedInputError):
        io.parse_filtration(data)


def test_chain_round_trip():
    data = {"dim": 1, "terms": [{"v": [1, 0], "coeff": "1/2"}, {"v": [1, 2], "coeff": 1}]}
    c = io.parse_chain(data, "q")
    assert c[(0, 1)] == Fraction(-1, 2) and c[(1, 2)] == 1
    assert io.parse_chain(io.chain_to_json(c), "q") == c
    with pytest.raises(MalformedInputError):
        io.parse_chain({"dim": 1, "terms": [{"v": [0]}]}, "q")


def test_csv_parsing():
    A = io.parse_csv_matrix("0,0\n1,0\n\n0,1\n")
    assert A.shape == (3, 2)
    for bad in ("", "0,0\n1\n", "a,b\n", "nan,0\n"):
        with pytest.raises(MalformedInputError):
            io.parse_csv_matrix(bad)


def test_barcode_hollow_triangle(runner, tmp_path):
    res = run(runner, "barcode", write(tmp_path, "t.json", HOLLOW))
    assert res.exit_code == 0
    bars = json.loads(res.stdout)["bars"]
    h1 = [b for b in bars if b["dim"] == 1]
    assert len(h1) == 1 and h1[0]["death_index"] is None


def test_barcode_equidistant_points(runner, tmp_path):
    path = write(tmp_path, "d.csv", "0,1,1\n1,0,1\n1,1,0\n")
    res = run(runner, "barcode", path, "--kind", "distances", "-p", "1")
    assert res.exit_code == 0
    bars = json.loads(res.stdout)["bars"]
    assert len(bars) == 1
    assert bars[0]["birth_grade"] == bars[0]["death_grade"] == 1 and bars[0]["length"] == 0


def test_empty_file_exit_2(runner, tmp_path):
    res = run(runner, "barcode", write(tmp_path, "e.json", ""))
    assert res.exit_code == 2 and "error" in res.stderr and res.stdout == ""


def test_missing_file_exit_2(runner, tmp_path):
    assert run(runner, "barcode", tmp_path / "none.json").exit_code == 2


def test_invalid_filtration_exit_3(runner, tmp_path):
    bad = {"simplices": [[0], [0, 1], [1]]}
    assert run(runner, "barcode", write(tmp_path, "b.json", bad)).exit_code == 3
    graded = {"simplices": [{"v": [0], "grade": 2}, {"v": [1], "grade": 1}]}
    assert run(runner, "barcode", write(tmp_path, "g.json", graded)).exit_code == 3


def test_robust_closed_triangle(runner, tmp_path):
    path = write(tmp_path, "c.json", CLOSED)
    res = run(runner, "robust", path, "--bar", 5, "-s", 1, "-k", 0)
    assert res.exit_code == 0 and json.loads(res.stdout)["robust"] is True
    res = run(runner, "robust", path, "--bar", 5, "-s", 1, "-k", 1)
    assert res.exit_code == 1 and json.loads(res.stdout)["min_cut"]["size"] == 1
    assert run(runner, "robust", "--example", "closed-triangle", "--bar", 5, "-k", 0).exit_code == 0


def test_robust_infinite_bar_exit_4(runner, tmp_path):
    path = write(tmp_path, "t.json", HOLLOW)
    assert run(runner, "robust", path, "--bar", 5, "-k", 0).exit_code == 4
    assert run(runner, "robust", path, "--bar", 99, "-k", 0).exit_code == 2


def test_mincut_examples(runner, tmp_path):
    res = run(runner, "mincut", "--example", "6.3")
    assert res.exit_code == 0 and json.loads(res.stdout)["cut"]["size"] == 3
    res = run(runner, "mincut", "--example", "hollow-triangle")
    assert json.loads(res.stdout)["cut"]["size"] == 1
    res = run(runner, "mincut", "--example", "fig1", "--cycle-name", "c_left", "--strategy", "embedded")
    assert res.exit_code == 0 and json.loads(res.stdout)["cut"]["size"] == 3
    cyc = write(tmp_path, "c.json", {"dim": 1, "terms": [{"v": [0, 1]}, {"v": [1, 2]}, {"v": [0, 2], "coeff": "-1"}]})
    res = run(runner, "mincut", write(tmp_path, "t.json", HOLLOW), "--cycle", cyc)
    assert res.exit_code == 0 and json.loads(res.stdout)["cut"]["size"] == 1


def test_mincut_embedded_without_geometry_exit_5(runner):
    assert run(runner, "mincut", "--example", "gadget-min", "--strategy", "embedded").exit_code == 5


def test_heuristic_examples(runner, tmp_path):
    line = write(tmp_path, "line.csv", "0\n1\n10\n")
    res = run(runner, "heuristic", line, "-k", 1)
    assert res.exit_code == 0 and json.loads(res.stdout)["H"] == 9
    assert run(runner, "heuristic", line, "-k", 3).exit_code == 2
    import math
    pts = "\n".join(f"{math.cos(2 * math.pi * i / 12)!r},{math.sin(2 * math.pi * i / 12)!r}" for i in range(12))
    res = run(runner, "heuristic", write(tmp_path, "circle.csv", pts), "-k", 1)
    out = json.loads(res.stdout)
    assert any(b["dim"] == 1 and b["certified"] for b in out["bars"])


def test_gadget_command(runner, tmp_path):
    res = run(runner, "gadget", "--example", "gadget-min", "--check")
    out = json.loads(res.stdout)
    assert res.exit_code == 0 and out["cut_bound"] == 11
    assert len(out["reduction"]["cut"]) == 11 and out["reduction"]["lower_bound"] == 11
    path = write(tmp_path, "i.json", {"universe": [1, 2, 3], "sets": [[1, 2, 3]]})
    assert json.loads(run(runner, "gadget", path).stdout)["complex"] == out["complex"]
    assert run(runner, "gadget", write(tmp_path, "bad.json", {"universe": [1, 2], "sets": []})).exit_code == 2


def test_lp_command(runner):
    res = run(runner, "lp", "--example", "6.3")
    out = json.loads(res.stdout)
    assert res.exit_code == 0 and out["mc"] == 3 and out["gap"] is True
    assert out["mc_tilde"] == pytest.approx(1.5, abs=1e-6) and out["mf"] == pytest.approx(1.5, abs=1e-6)


def test_output_option_writes_file(runner, tmp_path):
    out = tmp_path / "r.json"
    res = runner.invoke(main, ["-o", str(out), "mincut", "--example", "hollow-triangle"])
    assert res.exit_code == 0 and res.stdout == ""
    assert json.loads(out.read_text())["cut"]["size"] == 1


@pytest.mark.parametrize("args", [
    ["barcode", "--example", "fig1"],
    ["mincut", "--example", "fig1", "--cycle-name", "c_right"],
    ["lp", "--example", "hollow-triangle"],
    ["gadget", "--example", "gadget-min"],
])
def test_commands_are_deterministic(runner, args):
    a = runner.invoke(main, args)
    b = runner.invoke(main, args)
    assert a.exit_code == 0 and a.stdout == b.stdout
