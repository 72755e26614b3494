import io as stdio
import json

import numpy as np
import pytest

from pglab import generators, io
from pglab.classify import dbv_base
from pglab.cli import main
from pglab.code import Codeword, incidence_vector
from pglab.field import create_field
from pglab.multiset import WeightedMultiset
from pglab.plane import build_plane


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def write_multiset(tmp_path, m, k, name="m.txt"):
    path = tmp_path / name
    with open(path, "w") as fh:
        io.write_multiset(m, k, fh)
    return str(path)


def write_codeword(tmp_path, c, name="c.txt"):
    path = tmp_path / name
    with open(path, "w") as fh:
        io.write_codeword(c, fh)
    return str(path)


def test_multiset_round_trip():
    plane = build_plane(create_field(3, 2))
    m = generators.random_multiset(plane, np.random.default_rng(1), 0.3)
    buf = stdio.StringIO()
    io.write_multiset(m, 2, buf)
    back, k = io.read_multiset(buf.getvalue().splitlines())
    assert k == 2 and back.plane is plane and np.array_equal(back.weights, m.weights)


def test_codeword_rows_normalized_and_summed():
    text = ["# comment", "pg-codeword v1", "p=5 h=1 modulus=-", "0 2 4 1", "0 1 2 3", ""]
    c = io.read_codeword(text)
    assert c.values[c.plane.index((0, 1, 2))] == 4


@pytest.mark.parametrize(
    "lines,lineno",
    [
        (["pg-multiset v1", "p=3 h=1 modulus=- k=1", "1 2"], 3),
        (["pg-multiset v1", "p=3 h=1"], 2),
        (["pg-codeword v2"], 1),
        (["pg-multiset v1", "p=3 h=1 modulus=- k=1", "0 0 0 1"], 3),
        (["pg-multiset v1", "p=4 h=1 modulus=- k=1"], 2),
    ],
)
def test_parse_errors_carry_line_numbers(lines, lineno):
    with pytest.raises(io.ParseError) as exc:
        if lines[0].startswith("pg-codeword"):
            io.read_codeword(lines)
        else:
            io.read_multiset(lines)
    assert exc.value.lineno == lineno


def test_analyze_empty(tmp_path, capsys):
    plane = build_plane(create_field(3))
    path = write_multiset(tmp_path, WeightedMultiset.empty(plane), 0)
    code, out = run(["analyze", "--in", path], capsys)
    assert code == 0 and json.loads(out)["delta"] == 0


def test_analyze_line_plus_point(tmp_path, capsys):
    plane = build_plane(create_field(3))
    m = WeightedMultiset.from_lines(plane, {plane.index((1, 0, 0)): 1}).add(plane.index((1, 0, 0)), 1)
    code, out = run(["analyze", "--in", write_multiset(tmp_path, m, 1)], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["delta"] == 4 and rep["index_histogram"]["4"] == 1


def test_malformed_row_exit_2(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("pg-multiset v1\np=3 h=1 modulus=- k=1\n1 2\n")
    assert main(["analyze", "--in", str(path)]) == 2
    assert "line 3" in capsys.readouterr().err


def test_inconsistent_field_exit_2(tmp_path, capsys):
    plane = build_plane(create_field(5))
    path = write_multiset(tmp_path, WeightedMultiset.empty(plane), 0)
    assert main(["analyze", "--in", path, "--p", "7"]) == 2
    assert main(["analyze", "--in", path, "--k", "3"]) == 2


def planted_q25(tmp_path):
    plane = build_plane(create_field(5, 2))
    base = WeightedMultiset.from_lines(plane, {plane.index((1, 0, 0)): 1, plane.index((0, 1, 0)): 1})
    m = base.add(plane.index((1, 3, 7)), 1).add(plane.index((1, 10, 2)), 3)
    return write_multiset(tmp_path, m, 2), base


def test_repair_and_cover(tmp_path, capsys):
    path, base = planted_q25(tmp_path)
    code, out = run(["repair", "--in", path, "--write-multiset", str(tmp_path / "fixed.txt")], capsys)
    rep = json.loads(out)
    assert code == 0
    assert set(rep) >= {"delta0", "target", "steps", "final_delta", "changed_points", "hypothesis_ok", "verdicts"}
    assert rep["changed_points"] == 2 and rep["final_delta"] == 0 and rep["hypothesis_ok"]
    assert set(rep["steps"][0]) == {"point", "added", "k_i", "delta_after"}
    fixed, _ = io.read_multiset((tmp_path / "fixed.txt").read_text().splitlines())
    assert np.array_equal(fixed.weights, base.weights)
    code, out = run(["cover", "--in", path], capsys)
    cov = json.loads(out)
    assert code == 0 and cov["blocks_all"] and len(cov["S"]) == 2


def test_repair_zero_steps(tmp_path, capsys):
    plane = build_plane(create_field(7))
    m = generators.random_kmodp(plane, 3, np.random.default_rng(2))
    code, out = run(["repair", "--in", write_multiset(tmp_path, m, 3)], capsys)
    assert code == 0 and json.loads(out)["steps"] == []


def test_repair_beyond_hypothesis_exit_0(tmp_path, capsys):
    plane = build_plane(create_field(5, 2))
    m = generators.random_multiset(plane, np.random.default_rng(3), 0.5)
    code, out = run(["repair", "--in", write_multiset(tmp_path, m, 0)], capsys)
    assert json.loads(out)["hypothesis_ok"] is False
    assert code in (0, 3)


def test_code_actions(tmp_path, capsys):
    plane = build_plane(create_field(19))
    line = write_codeword(tmp_path, incidence_vector(plane, 5), "line.txt")
    assert json.loads(run(["code", "weight", "--in", line], capsys)[1])["weight"] == 20
    one = write_codeword(tmp_path, Codeword.from_sparse(plane, {3: 1}), "one.txt")
    assert json.loads(run(["code", "member", "--in", one], capsys)[1])["member"] is False
    d = write_codeword(tmp_path, dbv_base(19), "d.txt")
    assert json.loads(run(["code", "dual", "--in", d], capsys)[1])["dual"] is True
    mem = json.loads(run(["code", "member", "--in", line], capsys)[1])
    assert mem["member"] and len(mem["certificate"]) == 1
    code, out = run(["code", "dump", "--in", line, "--dense"], capsys)
    assert code == 0 and len(out.split()) == plane.n
    code, out = run(["code", "decompose", "--in", d, "--lines", "1,0,0;0,1,0;1,18,0"], capsys)
    assert code == 0 and json.loads(out)["decomposable"] is False


def test_dbv_classify_round_trip(tmp_path, capsys):
    out = str(tmp_path / "d.txt")
    assert main(["dbv", "--p", "19", "--variant", "canonical", "--out", out]) == 0
    assert json.loads(run(["code", "weight", "--in", out], capsys)[1])["weight"] == 54
    code, text = run(["classify", "--in", out], capsys)
    assert code == 0 and json.loads(text)["verdict"] == "DbvType"
    assert main(["dbv", "--p", "11", "--gamma", "3", "--lambdas", "1,2,3", "--random-pi", "--seed", "5", "--out", out]) == 0
    code, text = run(["classify", "--in", out], capsys)
    assert json.loads(text)["verdict"] == "DbvType"


def test_classify_non_codeword_exit_2(tmp_path, capsys):
    path = write_codeword(tmp_path, dbv_base(5, "literal"))
    assert main(["classify", "--in", path]) == 2


def test_census_p3(capsys):
    code, out = run(["census", "--p", "3", "--max-weight", "10"], capsys)
    entries = json.loads(out)
    assert code == 0 and all(e["weight"] != 5 for e in entries)
    assert all(e["certificate_failures"] == 0 for e in entries)


def test_census_guard(capsys):
    assert main(["census", "--p", "11"]) == 3


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "lemma-index", "--q", "9", "--trials", "100", "--seed", "7"],
        ["verify", "hn", "--q", "25", "--trials", "200"],
        ["verify", "thresholds", "--q", "25", "--trials", "30"],
        ["verify", "repair", "--q", "81", "--trials", "50"],
        ["verify", "codes", "--q", "7", "--trials", "20"],
    ],
)
def test_verify_suites_pass(argv, capsys):
    code, out = run(argv, capsys)
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "pass" and rep["failed"] == 0
    if argv[1] == "repair":
        assert rep["changed_points_match"] == 50


def test_determinism(capsys):
    argv = ["verify", "repair", "--q", "25", "--trials", "10", "--seed", "123"]
    a = run(argv, capsys)[1]
    b = run(argv, capsys)[1]
    assert a == b
    c = run(argv[:-1] + ["124"], capsys)[1]
    assert json.loads(c)["seed"] == 124


def test_text_format_and_plane_info(capsys):
    code, out = run(["plane-info", "--q", "9", "--format", "text"], capsys)
    assert code == 0 and "points: 91" in out and "modulus: 1,0,1" in out
    assert main(["plane-info", "--q", "12"]) == 2
    assert main(["frobnicate"]) == 2
