from __future__ import annotations

import json

import pytest

from dialgebras.cli import main
from dialgebras.experiments import SCHEMA


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as e:
        code = e.code
    out = capsys.readouterr()
    return code, out.out, out.err


def test_identities_json(capsys):
    code, out, _ = run(capsys, "identities", "--ops", "diproducts", "--degree", "3")
    data = json.loads(out)
    assert code == 0 and data["schema"] == SCHEMA
    # three diproducts: op2 is symmetric (3 relations) and op3 reverses op1 (6 relations)
    assert data["matrix_shape"] == [18, 18]
    assert (data["rank"], data["nullity"]) == (9, 9)


def test_output_is_deterministic(capsys):
    a = run(capsys, "generators", "--degree", "3", "--output", "tsv")
    b = run(capsys, "generators", "--degree", "3", "--output", "tsv")
    assert a == b and a[0] == 0


def test_expand_tsv(capsys):
    code, out, _ = run(capsys, "expand", "--ops", "dialgebra-products", "--degree", "3", "--output", "tsv")
    assert code == 0
    assert "matrix_shape\t18,48" in out.splitlines()
    assert "# expansion" in out


def test_reproduce_both_diproducts(capsys):
    code, out, _ = run(capsys, "reproduce", "diproducts-deg5-both")
    data = json.loads(out)
    assert code == 0 and data["ok"]
    assert data["matrix_shape"] == [600, 690]
    assert (data["rank"], data["nullity"]) == (250, 440)
    assert len(data["generators"]) == 6


def test_reproduce_rational_tsv(capsys):
    code, out, _ = run(capsys, "reproduce", "jordan-dialgebra-deg3", "--field", "rational", "--output", "tsv")
    assert code == 0
    lines = out.splitlines()
    assert "field\trational" in lines and "rank\t15" in lines
    assert "# rcf" in lines and any("1/2" in line for line in lines)


def test_conjecture_exit_code(capsys):
    code, out, _ = run(capsys, "conjecture", "--omega", "abc+cba", "--degree", "5")
    data = json.loads(out)
    assert code == 0 and data["equal"] and "field" in data and data["field"] == "prime"
    assert [r["degree"] for r in data["degrees"]] == [3, 5]


def test_bso_and_kp(capsys):
    code, out, _ = run(capsys, "bso", "--omega", "abc+cba")
    data = json.loads(out)
    assert code == 0 and data["redundant"] == ["op3"]
    code, out, _ = run(capsys, "kp", "--variety", "associative")
    data = json.loads(out)
    assert code == 0 and len(data["identities"]) == 5
    code, out, _ = run(capsys, "kp", "--variety", "jts", "--reduce-opposite", "3")
    assert code == 0 and "op3" not in out


def test_verify_modes(capsys):
    assert run(capsys, "verify", "--variety", "jtd")[0] == 0
    assert run(capsys, "verify", "--variety", "jtd", "--corrupt", "4")[0] == 1
    code, out, _ = run(capsys, "verify", "--variety", "jtd", "--instance", "differential", "--trials", "20")
    assert code == 0 and json.loads(out)["violations"] == [0] * 8


def test_files(capsys, tmp_path):
    ops = tmp_path / "ops.txt"
    ops.write_text("# left and right products\nop1 = ^ab\nop2 = a^b\n")
    code, out, _ = run(capsys, "identities", "--ops", str(ops), "--degree", "3")
    assert code == 0 and json.loads(out)["nullity"] == 5 * 6      # the five dialgebra axioms, permuted
    var = tmp_path / "assoc.txt"
    var.write_text("name: assoc\nops: op:2\nstyle: bracket\n{{a,b},c} = {a,{b,c}}\n")
    code, out, _ = run(capsys, "kp", "--variety", str(var))
    assert code == 0 and len(json.loads(out)["identities"]) == 5


@pytest.mark.parametrize("argv", [
    ["identities", "--degree", "5", "--modulus", "5"],
    ["identities", "--degree", "3", "--modulus", "100"],
    ["identities", "--degree", "3", "--ops", "jtd"],
    ["verify", "--variety", "diproducts"],
    ["bso", "--omega", "aab"],
    ["reproduce", "diproduct1-deg5", "--modulus", "3"],
])
def test_constraint_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "error" in err
