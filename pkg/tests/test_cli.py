import json

import pytest

from blockcoh.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cohom_text_and_json(capsys):
    code, out, _ = run(capsys, "cohom", "--space", "Q3", "--bundle", "S(0)",
                       "--range", "0..0")
    assert code == 0
    assert out.splitlines()[1].split() == ["0", "4", "0", "0", "0"]
    code, out, _ = run(capsys, "cohom", "--space", "P1", "--bundle", "O(0)",
                       "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["rows"][0]["dims"] == [1, 0]


def test_cohom_symbolic_row(capsys):
    code, out, _ = run(capsys, "cohom", "--space", "Q3", "--bundle", "Psi1(0)",
                       "--format", "json")
    assert code == 0
    assert json.loads(out)["rows"][0]["symbolic"] is True


def test_malformed_dsl_exits_2(capsys):
    code, _, err = run(capsys, "cohom", "--space", "P1", "--bundle", "O(1")
    assert code == 2
    assert "position" in err


def test_bad_usage_exits_2(capsys):
    assert main(["cohom", "--space", "P1"]) == 2  # missing --bundle
    code, _, err = run(capsys, "split", "--space", "P1", "--bundle", "O(0)",
                       "--criterion", "nope")
    assert code == 2


def test_verify_pass_and_fail_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "--space", "P3xQ3", "--preset", "std")
    assert code == 0 and "PASS" in out
    code, out, _ = run(capsys, "verify", "--space", "Q4", "--preset", "std")
    assert code == 0
    code, out, _ = run(capsys, "verify", "--space", "Q3", "--preset", "sigma:2")
    assert code == 0


def test_split_subcommand(capsys):
    code, out, _ = run(capsys, "split", "--space", "P1xQ3", "--bundle",
                       "O(1,1)+O(0,0)", "--criterion", "tpq", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["verdict"] == "holds"
    assert [c["twist"] for c in payload["certificate"]] == [1, 0]
    code, out, _ = run(capsys, "split", "--space", "P1xQ3", "--bundle",
                       "O(1,0)+O(0,0)", "--criterion", "tpq", "--format", "json")
    assert code == 1
    assert json.loads(out)["witness"]["dim"] > 0
    code, _, _ = run(capsys, "split", "--space", "P1xQ3", "--bundle",
                     "O(0)#S(0)", "--criterion", "spi")
    assert code == 0
    code, _, err = run(capsys, "split", "--space", "P1xQ2", "--bundle",
                       "O(0,0)", "--criterion", "tpq")
    assert code == 2 and "override" in err
    code, _, _ = run(capsys, "split", "--space", "P1xQ2", "--bundle", "O(0,0)",
                     "--criterion", "tpq", "--override-hypotheses")
    assert code == 0


def test_regular_and_reg_index(capsys):
    code, out, _ = run(capsys, "regular", "--space", "P1xQ3", "--bundle",
                       "O(0,0)", "--at", "0,0")
    assert code == 0 and "regular" in out
    code, out, _ = run(capsys, "regular", "--space", "P1xQ3", "--bundle",
                       "O(-1,0)", "--at", "0,0", "--format", "json")
    assert code == 1
    assert json.loads(out)["witnesses"][0]["dim"] == 1
    code, out, _ = run(capsys, "reg-index", "--space", "P1xQ3", "--bundle",
                       "O(-2,0)")
    assert code == 0 and out.strip() == "2"


def test_dual_listing(capsys):
    code, out, _ = run(capsys, "dual", "--space", "P3", "--preset", "std")
    assert code == 0
    assert "T(-1)" in out and "T^2(-2)" in out
    code, out, _ = run(capsys, "dual", "--space", "Q3", "--preset", "std",
                       "--psi-rank", "1=4", "--psi-rank", "2=7",
                       "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["rankVector"] == [1, 4, 7, 2]


def test_restrict_subcommand(capsys):
    code, out, _ = run(capsys, "restrict", "--space", "Q4", "--bundle", "S1(0)",
                       "--factor", "0")
    assert code == 0 and out.strip() == "S(0) on Q3"
    code, out, _ = run(capsys, "restrict", "--space", "Q3", "--bundle", "S(0)",
                       "--factor", "0", "--format", "json")
    assert json.loads(out)["restricted"] == "S1(0) + S2(0)"


def test_ext_subcommand(capsys):
    code, out, _ = run(capsys, "ext", "--space", "Q3", "--a", "S(0)",
                       "--b", "S(0)", "--format", "json")
    assert code == 0
    assert json.loads(out)["table"]["dims"] == [1, 0, 0, 0]


def test_json_output_is_byte_deterministic(capsys):
    args = ("split", "--space", "P1xQ3", "--bundle", "O(0)#S(0)",
            "--criterion", "spi", "--format", "json")
    _, out1, _ = run(capsys, *args)
    _, out2, _ = run(capsys, *args)
    assert out1 == out2
    args = ("verify", "--space", "P1xQ3", "--preset", "std", "--format", "json")
    _, out1, _ = run(capsys, *args)
    _, out2, _ = run(capsys, *args)
    assert out1 == out2
