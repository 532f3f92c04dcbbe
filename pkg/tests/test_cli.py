import json

import pytest
from click.testing import CliRunner

from bggtate import modfile
from bggtate.cli import main

PLANE_TABLE = ("j\\d\t-5\t-4\t-3\t-2\t-1\t0\t1\t2\t3\t4\t5\n"
               "2\t6\t3\t1\t.\t.\t.\t.\t.\t.\t.\t.\n"
               "1\t.\t.\t.\t.\t.\t.\t.\t.\t.\t.\t.\n"
               "0\t.\t.\t.\t.\t.\t1\t3\t6\t10\t15\t21\n")

PLANE_TATE = ("i\\p\t-2\t-1\t0\t1\t2\n"
              "2\t.\t.\t.\t.\t6\n"
              "1\t.\t.\t.\t3\t.\n"
              "0\t.\t.\t1\t.\t.\n"
              "-3\t.\t1\t.\t.\t.\n"
              "-4\t3\t.\t.\t.\t.\n")


@pytest.fixture
def runner():
    return CliRunner()


def gallery_file(runner, path, *args):
    result = runner.invoke(main, ["gallery", *args, "-o", str(path)])
    assert result.exit_code == 0, result.output
    return str(path)


@pytest.fixture
def plane(runner, tmp_path):
    return gallery_file(runner, tmp_path / "O.json", "--name", "twisted-structure", "--a", "0", "--n", "2")


@pytest.fixture
def plane_one(runner, tmp_path):
    return gallery_file(runner, tmp_path / "O1.json", "--name", "twisted-structure", "--a", "1", "--n", "2")


def test_gallery_stdout(runner):
    result = runner.invoke(main, ["gallery", "--name", "twisted-structure", "--a", "0", "--n", "2"])
    assert result.exit_code == 0
    assert result.output == '{"n": 2, "char": 32003, "components": {"0": 1}, "action": {}}\n'


def test_cohomology(runner, plane):
    result = runner.invoke(main, ["cohomology", plane, "--twists", "-5:5"])
    assert result.exit_code == 0
    assert result.output == PLANE_TABLE


def test_cohomology_from_stdin(runner, plane):
    with open(plane) as fh:
        result = runner.invoke(main, ["cohomology", "--twists", "-5:5"], input=fh.read())
    assert result.output == PLANE_TABLE


def test_shift_is_read_from_the_file(runner, plane_one):
    result = runner.invoke(main, ["cohomology", plane_one, "--twists", "0:0", "--degrees", "0:2"])
    assert result.output == "j\\d\t0\n2\t.\n1\t.\n0\t3\n"


def test_tate(runner, plane):
    result = runner.invoke(main, ["tate", plane, "--window", "-2:2"])
    assert result.exit_code == 0
    assert result.output == PLANE_TATE


def test_beilinson_forms(runner, plane_one):
    omega = runner.invoke(main, ["beilinson", plane_one, "--maps"])
    assert omega.output == "-1: Ω^1(1)\n  [e2, -e1, e0]\n0: Ω^0(0)^3\n"
    linear = runner.invoke(main, ["beilinson", plane_one, "--form", "linear"])
    assert linear.output == "-2: O(-2)\n-1: O(-1)^3\n0: O(0)^3\n"


def test_hom(runner, tmp_path, plane):
    k_minus_2 = gallery_file(runner, tmp_path / "k.json", "--name", "underline-k", "--a", "-2", "--n", "2")
    result = runner.invoke(main, ["hom", plane, k_minus_2, "--p", "2"])
    assert result.exit_code == 0 and result.output == "6\n"
    assert runner.invoke(main, ["hom", plane, plane, "--p", "0"]).output == "1\n"


def test_hom_context_mismatch(runner, tmp_path, plane):
    line = gallery_file(runner, tmp_path / "line.json", "--name", "underline-k", "--n", "1")
    assert runner.invoke(main, ["hom", plane, line]).exit_code == 2


def test_char_option(runner, plane):
    result = runner.invoke(main, ["cohomology", plane, "--twists", "0:2", "--char", "0"])
    assert result.exit_code == 0
    assert result.output.splitlines()[-1] == "0\t1\t3\t6"


@pytest.mark.parametrize("suite", ["serre", "bott", "euler", "cech", "strand", "roundtrip"])
def test_verify(runner, suite):
    result = runner.invoke(main, ["verify", suite, "--count", "2"])
    assert result.exit_code == 0
    assert result.output.startswith(f"{suite}: ")
    passed, total = result.output.split(": ")[1].split()[0].split("/")
    assert passed == total


def test_verify_is_deterministic(runner):
    a = runner.invoke(main, ["verify", "euler", "--count", "3", "--seed", "7"])
    b = runner.invoke(main, ["verify", "euler", "--count", "3", "--seed", "7"])
    assert a.exit_code == 0 and a.output == b.output


def test_outputs_are_stable(runner, plane):
    runs = [runner.invoke(main, ["tate", plane, "--window", "-3:3"]).output for _ in range(2)]
    assert runs[0] == runs[1]


def test_malformed_file(runner, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 2, "char": 32003, "components": {"0": 1')
    result = runner.invoke(main, ["cohomology", str(bad), "--twists", "0:1"])
    assert result.exit_code == 2
    assert result.stdout == ""


def test_axiom_violation_is_a_parse_error(runner, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 1, "char": 7, "components": {"0": 1, "1": 1, "2": 1},
                               "action": {"0": {"0": [[1]], "1": [[1]]}}}))
    assert runner.invoke(main, ["tate", str(bad), "--window", "0:1"]).exit_code == 2


def test_missing_file(runner, tmp_path):
    result = runner.invoke(main, ["tate", str(tmp_path / "none.json"), "--window", "0:1"])
    assert result.exit_code == 2 and result.stdout == ""


def test_bad_range(runner, plane):
    assert runner.invoke(main, ["tate", plane, "--window", "3:1"]).exit_code == 2
    assert runner.invoke(main, ["tate", plane, "--window", "x"]).exit_code == 2


def test_window_too_small(runner, plane_one):
    result = runner.invoke(main, ["beilinson", plane_one, "--window", "0:0"])
    assert result.exit_code == 1
    assert result.stdout == ""
    assert "window" in result.stderr


def test_gallery_bad_parameter(runner):
    assert runner.invoke(main, ["gallery", "--name", "omega", "--n", "2", "--i", "5"]).exit_code == 2
    assert runner.invoke(main, ["gallery", "--name", "nope", "--n", "2"]).exit_code == 2


def test_gallery_round_trip(runner, tmp_path):
    for args in (["--name", "omega", "--n", "3", "--i", "2"], ["--name", "truncated", "--n", "2", "--m", "2"],
                 ["--name", "twisted-structure", "--n", "2", "--a", "-3"]):
        path = gallery_file(runner, tmp_path / "g.json", *args)
        text = open(path).read()
        N, shift = modfile.loads(text)
        assert modfile.dumps(N, shift) == text
